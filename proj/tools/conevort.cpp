// conevort: command-line front end.
//
//   conevort <transform-check|solve|sweep|certify|bounds|config> [--config FILE]
//            [--key=value ...] [--require-certified]
//
// Any configuration key can be overridden on the command line, e.g.
// --chart.rho=0.05 or --scheme.nus=1e-2,1e-3,1e-4.
//
// Exit codes: 0 success, 1 failed transform checks, 2 configuration error,
// 3 numerical divergence, 4 certificate not certified (--require-certified).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conevort/analysis.hpp"
#include "conevort/chart.hpp"
#include "conevort/errors.hpp"
#include "conevort/field_io.hpp"
#include "conevort/initial_data.hpp"
#include "conevort/kernels.hpp"
#include "conevort/report.hpp"
#include "conevort/run_config.hpp"
#include "conevort/scheme.hpp"

namespace fs = std::filesystem;
using namespace conevort;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitNotCertified = 4;

struct CheckCounter {
  int failed = 0;

  void check(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++failed;
  }
};

std::string fmt(const char* pattern, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

int transform_check(const RunConfig& cfg) {
  const ConeChart chart(cfg.rho);
  const double rho = cfg.rho;
  CheckCounter c;

  c.check(std::abs(chart.damping(0.0) - 1.0) <= 1e-12, "damping at t=0",
          fmt("phi(0) = %.17g", chart.damping(0.0)));
  const double sup = damping_supremum(rho, static_cast<std::size_t>(cfg.damping_samples));
  c.check(sup <= 2.0, "damping bounded by 2", fmt("sup phi = %.10f", sup));
  c.check(std::abs(sup - 0.75 * std::sqrt(3.0)) <= 1e-4, "damping maximum 3 sqrt(3)/4",
          fmt("|sup - 1.29904| = %.3g", std::abs(sup - 0.75 * std::sqrt(3.0))));

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ut(0.0, 0.99 * rho);
  std::uniform_real_distribution<double> ux(-50.0, 50.0);

  double worst_deriv = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = ut(rng);
    const double e = 1e-6 * (rho - t);
    const double fd = (chart.sigma_of(t + e) - chart.sigma_of(t - std::min(e, t))) /
                      (e + std::min(e, t));
    const double exact = chart.dsigma_dt(t);
    worst_deriv = std::max(worst_deriv, std::abs(fd - exact) / exact);
  }
  c.check(worst_deriv <= 1e-6, "dsigma/dt against finite differences",
          fmt("max rel err = %.3g", worst_deriv));

  double worst_roundtrip = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = ut(rng);
    const Vec3 x{ux(rng), ux(rng), ux(rng)};
    const ChartPoint p = chart.forward_transform(t, x);
    const OriginalPoint back = chart.inverse_transform(p.sigma, p.y);
    double err = std::abs(back.t - t) / rho;
    for (std::size_t j = 0; j < 3; ++j) {
      err = std::max(err, std::abs(back.x[j] - x[j]) / std::max(1.0, std::abs(x[j])));
    }
    worst_roundtrip = std::max(worst_roundtrip, err);
  }
  c.check(worst_roundtrip <= 1e-10, "transform roundtrip", fmt("max rel err = %.3g", worst_roundtrip));

  std::printf("%d check(s) failed\n", c.failed);
  return c.failed == 0 ? kExitOk : kExitCheckFailed;
}

Report solve_summary(const SolveResult& run, const RunConfig& cfg) {
  Report r("Solve");
  r.add("rho", cfg.rho);
  r.add("nu", cfg.nu);
  r.add("steps", run.trajectory.size() - 1);
  r.add("final_t", run.final.t);
  const NormReport n = norms(run.final.u, cfg.m_norm);
  r.add("final_sup_norm", n.sup_norm);
  r.add("final_l2_norm", n.l2_norm);
  r.add("final_hm_norm", n.hm_norm);
  r.add("final_cm_norm", n.cm_norm);
  double max_sup = 0.0;
  for (const VectorField3& f : run.trajectory) max_sup = std::max(max_sup, sup_norm(f));
  r.add("max_sup_norm", max_sup);
  r.add("residual", run.final.residual);
  r.add("tip", run.final.u.value(run.final.u.grid().origin_index()));
  r.append(contraction_summary(contraction_report(run.final.picard_history)), "picard.");
  return r;
}

int run_solve(const RunConfig& cfg, const fs::path& out) {
  const ConeChart chart(cfg.rho);
  const SchemeConfig scheme = cfg.scheme(cfg.nu);
  const VectorField3 h = generate_data(cfg.data, scheme.grid, chart);
  const SolveResult run = solve(scheme, chart, h);

  fs::create_directories(out);
  std::ofstream manifest(out / "manifest.txt", std::ios::binary);
  manifest << "# index t path sup_norm l2_norm hm_norm\n";
  const std::size_t last = run.trajectory.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    if (k % static_cast<std::size_t>(cfg.checkpoint_every) != 0 && k != last) continue;
    char name[32];
    std::snprintf(name, sizeof name, "u_%05zu.cvf", k);
    const VectorField3& f = run.trajectory[k];
    write_field(out / name, f);
    const NormReport n = norms(f, cfg.m_norm);
    manifest << k << " " << format_real(f.time_label()) << " " << name << " "
             << format_real(n.sup_norm) << " " << format_real(n.l2_norm) << " "
             << format_real(n.hm_norm) << "\n";
  }
  write_slice_csv(out / "slice_final.csv", run.final.u);
  const Report r = solve_summary(run, cfg);
  r.write(out / "solve_report");
  std::cout << r.text();
  return kExitOk;
}

SweepReport run_sweep_only(const RunConfig& cfg, const VectorField3& h, const ConeChart& chart) {
  return inviscid_sweep(cfg.scheme(cfg.nus.front()), chart, h, cfg.nus);
}

void write_sweep(const SweepReport& sweep, const fs::path& out) {
  fs::create_directories(out);
  for (std::size_t k = 0; k < sweep.final_fields.size(); ++k) {
    write_field(out / ("final_nu_" + std::to_string(k) + ".cvf"), sweep.final_fields[k]);
  }
  const Report r = sweep_summary(sweep);
  r.write(out / "sweep_report");
  std::cout << r.text();
}

int run_sweep(const RunConfig& cfg, const fs::path& out) {
  const ConeChart chart(cfg.rho);
  const VectorField3 h = generate_data(cfg.data, cfg.grid(), chart);
  const SweepReport sweep = run_sweep_only(cfg, h, chart);
  write_sweep(sweep, out);
  return sweep.completed ? kExitOk : kExitDivergence;
}

int run_certify(const RunConfig& cfg, const fs::path& out, bool require_certified) {
  const ConeChart chart(cfg.rho);
  const VectorField3 h = generate_data(cfg.data, cfg.grid(), chart);
  const SweepReport sweep = run_sweep_only(cfg, h, chart);
  write_sweep(sweep, out);
  if (!sweep.completed) return kExitDivergence;
  const CertificateReport cert = singularity_certificate(sweep, h, chart);
  const Report r = certificate_summary(cert);
  r.write(out / "certificate");
  std::cout << r.text();
  if (require_certified && !cert.certified) return kExitNotCertified;
  return kExitOk;
}

int run_bounds(const RunConfig& cfg, const fs::path& out) {
  const ConeChart chart(cfg.rho);
  Report r("Bounds");
  const double sup = damping_supremum(cfg.rho, static_cast<std::size_t>(cfg.damping_samples));
  r.add("damping.supremum", sup);
  r.add("damping.bound", 2.0);
  r.add("damping.within_bound", sup <= 2.0);
  const DampingIntegral di = damping_integral_bound(chart, cfg.bounds_sup, cfg.bounds_resolution);
  r.add("damping_integral.sup_bound", cfg.bounds_sup);
  r.add("damping_integral.numeric", di.numeric);
  r.add("damping_integral.analytic", di.analytic);
  const double rel = di.analytic > 0.0 ? std::abs(di.numeric - di.analytic) / di.analytic : 0.0;
  r.add("damping_integral.relative_error", rel);
  r.add("damping_integral.within_tolerance", rel <= 1e-3);
  std::vector<double> masses;
  for (double nu : cfg.mass_nus) masses.push_back(mass_identity_check(nu, cfg.rho, 64));
  r.add("mass.t_final", cfg.rho);
  r.add("mass.nus", cfg.mass_nus);
  r.add("mass.values", masses);
  double spread = 0.0;
  for (double m : masses) spread = std::max(spread, std::abs(m - masses.front()));
  r.add("mass.spread", spread);
  fs::create_directories(out);
  r.write(out / "bounds");
  std::cout << r.text();
  return kExitOk;
}

// Turns leftover "--key=value" / "--key value" arguments into config overrides.
KeyValues collect_overrides(const std::vector<std::string>& extras) {
  KeyValues kv;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0) throw ConfigError("unexpected argument " + arg);
    std::string key = arg.substr(2);
    std::string value;
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("missing value for --" + key);
      value = extras[++i];
    }
    kv[key] = value;
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone-chart vorticity scheme: solves, viscosity sweeps and bound checks"};
  app.require_subcommand(1);
  std::string config_path;
  bool require_certified = false;
  app.add_option("--config", config_path, "flat key = value configuration file");

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("transform-check", "chart invariants, pass/fail per check"));
  subs.push_back(app.add_subcommand("solve", "one (rho, nu) trajectory with checkpoints"));
  subs.push_back(app.add_subcommand("sweep", "solve for every nu in scheme.nus"));
  subs.push_back(app.add_subcommand("certify", "sweep plus the tip certificate"));
  subs.push_back(app.add_subcommand("bounds", "damping bound, damping integral, mass identity"));
  subs.push_back(app.add_subcommand("config", "print the effective configuration"));
  subs[3]->add_flag("--require-certified", require_certified,
                    "exit with status 4 when the certificate fails");
  for (CLI::App* s : subs) {
    s->allow_extras();
    s->add_option("--config", config_path, "flat key = value configuration file");
  }
  app.allow_extras();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    std::vector<std::string> extras = sub->remaining();
    KeyValues kv;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      kv = parse_key_values(ss.str());
    }
    for (const auto& [k, v] : collect_overrides(extras)) kv[k] = v;
    const RunConfig cfg = RunConfig::from_key_values(kv);
    const fs::path out = cfg.output_dir;

    const std::string name = sub->get_name();
    if (name == "transform-check") return transform_check(cfg);
    if (name == "solve") return run_solve(cfg, out);
    if (name == "sweep") return run_sweep(cfg, out);
    if (name == "certify") return run_certify(cfg, out, require_certified);
    if (name == "bounds") return run_bounds(cfg, out);
    if (name == "config") {
      std::cout << cfg.serialize();
      return kExitOk;
    }
    throw ConfigError("unknown subcommand " + name);
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
