#include "conevort/run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "conevort/errors.hpp"

namespace conevort {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto next = s.find_first_of(seps, pos);
    const auto end = next == std::string_view::npos ? s.size() : next;
    const auto token = trim(s.substr(pos, end - pos));
    if (!token.empty()) out.push_back(token);
    pos = end + 1;
  }
  return out;
}

double parse_real(const std::string& key, std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(key + ": expected a real number, got '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(const std::string& key, std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, std::string_view s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> parse_real_list(const std::string& key, std::string_view s) {
  std::vector<double> out;
  for (auto tok : split(s, ", ")) out.push_back(parse_real(key, tok));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_real(v[i]);
  }
  return out;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    const auto line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') {
      if (nl == std::string_view::npos) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key " + key);
    if (nl == std::string_view::npos) break;
  }
  return kv;
}

SchemeConfig RunConfig::scheme(double viscosity) const {
  SchemeConfig s;
  s.rho = rho;
  s.nu = viscosity;
  s.grid = grid();
  s.dt = dt.value_or(rho / 64.0);
  s.picard_tol = picard_tol;
  s.picard_max = picard_max;
  s.m_norm = m_norm;
  s.transport = transport;
  s.nonlinear = nonlinear;
  s.measure_constant = measure_constant;
  return s;
}

Grid3 RunConfig::grid() const { return Grid3(half_extent.value_or(rho), grid_n); }

KeyValues RunConfig::to_key_values() const {
  KeyValues kv;
  kv["chart.rho"] = format_real(rho);
  kv["scheme.nu"] = format_real(nu);
  kv["scheme.nus"] = format_list(nus);
  if (dt) kv["scheme.dt"] = format_real(*dt);
  kv["scheme.picard_tol"] = format_real(picard_tol);
  kv["scheme.picard_max"] = std::to_string(picard_max);
  kv["scheme.m_norm"] = std::to_string(m_norm);
  kv["scheme.transport"] = format_bool(transport);
  kv["scheme.nonlinear"] = format_bool(nonlinear);
  kv["scheme.measure_constant"] = format_bool(measure_constant);
  kv["grid.n"] = std::to_string(grid_n);
  if (half_extent) kv["grid.half_extent"] = format_real(*half_extent);
  kv["data.decay_order"] = std::to_string(data.decay_order);
  if (data.requested_tip) kv["data.tip"] = format_real(*data.requested_tip);
  kv["data.mode_count"] = std::to_string(data.modes.size());
  for (std::size_t m = 0; m < data.modes.size(); ++m) {
    const FourierMode& fm = data.modes[m];
    const std::string p = "data.mode." + std::to_string(m) + ".";
    kv[p + "k"] = std::to_string(fm.k[0]) + " " + std::to_string(fm.k[1]) + " " +
                  std::to_string(fm.k[2]);
    kv[p + "amplitude"] = format_real(fm.amplitude[0]) + " " + format_real(fm.amplitude[1]) +
                          " " + format_real(fm.amplitude[2]);
    kv[p + "phase"] = format_real(fm.phase);
  }
  kv["output.dir"] = output_dir;
  kv["solve.checkpoint_every"] = std::to_string(checkpoint_every);
  kv["bounds.sup_bound"] = format_real(bounds_sup);
  kv["bounds.resolution"] = std::to_string(bounds_resolution);
  kv["bounds.mass_nus"] = format_list(mass_nus);
  kv["bounds.damping_samples"] = std::to_string(damping_samples);
  return kv;
}

RunConfig RunConfig::from_key_values(const KeyValues& kv) {
  RunConfig c;
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  if (auto v = get("chart.rho")) c.rho = parse_real("chart.rho", *v);
  if (auto v = get("scheme.nu")) c.nu = parse_real("scheme.nu", *v);
  if (auto v = get("scheme.nus")) c.nus = parse_real_list("scheme.nus", *v);
  if (auto v = get("scheme.dt")) c.dt = parse_real("scheme.dt", *v);
  if (auto v = get("scheme.picard_tol")) c.picard_tol = parse_real("scheme.picard_tol", *v);
  if (auto v = get("scheme.picard_max")) c.picard_max = parse_int("scheme.picard_max", *v);
  if (auto v = get("scheme.m_norm")) c.m_norm = parse_int("scheme.m_norm", *v);
  if (auto v = get("scheme.transport")) c.transport = parse_bool("scheme.transport", *v);
  if (auto v = get("scheme.nonlinear")) c.nonlinear = parse_bool("scheme.nonlinear", *v);
  if (auto v = get("scheme.measure_constant")) {
    c.measure_constant = parse_bool("scheme.measure_constant", *v);
  }
  if (auto v = get("grid.n")) c.grid_n = parse_int("grid.n", *v);
  if (auto v = get("grid.half_extent")) c.half_extent = parse_real("grid.half_extent", *v);
  if (auto v = get("data.decay_order")) c.data.decay_order = parse_int("data.decay_order", *v);
  if (auto v = get("data.tip")) c.data.requested_tip = parse_real("data.tip", *v);

  if (auto v = get("data.mode_count")) {
    const int count = parse_int("data.mode_count", *v);
    if (count < 0) throw ConfigError("data.mode_count must be >= 0");
    c.data.modes.assign(static_cast<std::size_t>(count), FourierMode{});
    for (int m = 0; m < count; ++m) {
      const std::string p = "data.mode." + std::to_string(m) + ".";
      auto need = [&](const std::string& key) -> const std::string& {
        auto s = get(key);
        if (!s) throw ConfigError("missing key " + key);
        return *s;
      };
      FourierMode& fm = c.data.modes[static_cast<std::size_t>(m)];
      const auto ks = split(need(p + "k"), " ,");
      if (ks.size() != 3) throw ConfigError(p + "k: expected three integers");
      for (std::size_t a = 0; a < 3; ++a) fm.k[a] = parse_int(p + "k", ks[a]);
      const auto as = split(need(p + "amplitude"), " ,");
      if (as.size() != 3) throw ConfigError(p + "amplitude: expected three reals");
      for (std::size_t a = 0; a < 3; ++a) fm.amplitude[a] = parse_real(p + "amplitude", as[a]);
      fm.phase = parse_real(p + "phase", need(p + "phase"));
    }
  }

  if (auto v = get("output.dir")) c.output_dir = *v;
  if (auto v = get("solve.checkpoint_every")) {
    c.checkpoint_every = parse_int("solve.checkpoint_every", *v);
  }
  if (auto v = get("bounds.sup_bound")) c.bounds_sup = parse_real("bounds.sup_bound", *v);
  if (auto v = get("bounds.resolution")) c.bounds_resolution = parse_int("bounds.resolution", *v);
  if (auto v = get("bounds.mass_nus")) c.mass_nus = parse_real_list("bounds.mass_nus", *v);
  if (auto v = get("bounds.damping_samples")) {
    c.damping_samples = parse_int("bounds.damping_samples", *v);
  }

  for (const auto& [key, value] : kv) {
    if (!used.count(key)) throw ConfigError("unknown configuration key " + key);
  }
  if (!(c.rho > 0.0)) throw ConfigError("chart.rho must be positive");
  if (c.checkpoint_every < 1) throw ConfigError("solve.checkpoint_every must be >= 1");
  if (c.bounds_resolution < 1) throw ConfigError("bounds.resolution must be >= 1");
  if (c.damping_samples < 2) throw ConfigError("bounds.damping_samples must be >= 2");
  return c;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [key, value] : to_key_values()) out += key + " = " + value + "\n";
  return out;
}

RunConfig RunConfig::parse(std::string_view text) {
  return from_key_values(parse_key_values(text));
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config " + path.string());
  out << serialize();
}

}  // namespace conevort
