#include "conevort/report.hpp"

#include <charconv>
#include <fstream>

#include "conevort/errors.hpp"

namespace conevort {

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InputError("cannot format real");
  return std::string(buf, ptr);
}

Report& Report::add(const std::string& key, double value) { return add(key, format_real(value)); }

Report& Report::add(const std::string& key, int value) { return add(key, std::to_string(value)); }

Report& Report::add(const std::string& key, std::size_t value) {
  return add(key, std::to_string(value));
}

Report& Report::add(const std::string& key, bool value) {
  return add(key, std::string(value ? "true" : "false"));
}

Report& Report::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
  return *this;
}

Report& Report::add(const std::string& key, const Vec3& value) {
  return add(key, format_real(value[0]) + " " + format_real(value[1]) + " " +
                      format_real(value[2]));
}

Report& Report::add(const std::string& key, const std::vector<double>& value) {
  std::string s;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (i) s += ",";
    s += format_real(value[i]);
  }
  return add(key, s);
}

void Report::append(const Report& other, const std::string& prefix) {
  for (const auto& [k, v] : other.entries_) entries_.emplace_back(prefix + k, v);
}

const std::string* Report::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Report::key_values() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

std::string Report::text() const {
  std::size_t width = 0;
  for (const auto& e : entries_) width = std::max(width, e.first.size());
  std::string out = title_ + "\n" + std::string(title_.size(), '-') + "\n";
  for (const auto& [k, v] : entries_) {
    out += "  " + k + std::string(width - k.size() + 2, ' ') + v + "\n";
  }
  return out;
}

void Report::write(const std::filesystem::path& stem) const {
  auto put = [](const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << s;
  };
  std::filesystem::path kv = stem;
  kv += ".kv";
  std::filesystem::path txt = stem;
  txt += ".txt";
  put(kv, key_values());
  put(txt, text());
}

Report contraction_summary(const std::vector<ContractionEntry>& entries) {
  Report r("Picard contraction");
  r.add("ratio_count", entries.size());
  r.add("max_ratio", max_ratio(entries));
  r.add("bound", kContractionBound);
  std::size_t over = 0;
  for (const auto& e : entries) {
    if (e.exceeds) {
      r.add("exceeds." + std::to_string(over) + ".t", e.t);
      r.add("exceeds." + std::to_string(over) + ".q", e.q);
      r.add("exceeds." + std::to_string(over) + ".ratio", e.ratio);
      ++over;
    }
  }
  r.add("exceed_count", over);
  return r;
}

Report sweep_summary(const SweepReport& sweep) {
  Report r("Inviscid sweep");
  r.add("completed", sweep.completed);
  if (!sweep.completed) r.add("abort_reason", sweep.abort_reason);
  r.add("nus", sweep.nus);
  r.add("pairwise_sup_gaps", sweep.pairwise_sup_gaps);
  r.add("gaps_decreasing", gaps_decreasing(sweep));
  r.add("tip_component", sweep.tip_component + 1);
  if (sweep.completed && sweep.members.size() >= 2) {
    r.add("extrapolated_tip", sweep.extrapolated_tip);
    r.add("extrapolated_tip_value", sweep.extrapolated_tip_value);
  }
  for (std::size_t k = 0; k < sweep.members.size(); ++k) {
    const SweepMember& m = sweep.members[k];
    const std::string p = "member." + std::to_string(k) + ".";
    r.add(p + "nu", m.nu);
    r.add(p + "tip_at_rho", m.tip_at_rho);
    r.add(p + "last_tip", m.tip.back().u);
    r.add(p + "last_t", m.tip.back().t);
    r.add(p + "max_sup_norm", m.max_sup_norm);
    r.add(p + "residual", m.residual);
    r.add(p + "bkm_integral", m.bkm_integral);
    r.add(p + "max_picard_ratio", max_ratio(contraction_report(m.picard_history)));
  }
  return r;
}

Report certificate_summary(const CertificateReport& cert) {
  Report r("Singularity certificate");
  r.add("certified", cert.certified);
  r.add("reason", cert.reason);
  r.add("component", cert.component + 1);
  r.add("c", cert.c);
  r.add("h_tip", cert.h_tip);
  r.add("tip_value", cert.tip_value);
  r.add("increment_at_tip", cert.increment_at_tip);
  r.add("increment_bound", 0.5 * cert.c);
  r.add("blowup_exponent", cert.blowup_exponent ? format_real(*cert.blowup_exponent)
                                                 : std::string("none"));
  r.add("fitted_exponent", cert.fitted_exponent);
  r.add("fit_samples", cert.fit_samples);
  r.add("nu_sweep_spread", cert.nu_sweep_spread);
  return r;
}

}  // namespace conevort
