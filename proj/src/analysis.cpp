#include "conevort/analysis.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "conevort/errors.hpp"

namespace conevort {

std::vector<ContractionEntry> contraction_report(const std::vector<PicardRecord>& history,
                                                 double bound) {
  std::vector<ContractionEntry> out;
  for (const PicardRecord& rec : history) {
    for (std::size_t k = 0; k < rec.ratios.size(); ++k) {
      ContractionEntry e;
      e.t = rec.t1;
      e.q = static_cast<int>(k) + 2;
      e.ratio = rec.ratios[k];
      e.exceeds = e.ratio > bound;
      out.push_back(e);
    }
  }
  return out;
}

double max_ratio(const std::vector<ContractionEntry>& entries) {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.ratio);
  return m;
}

std::vector<TipSample> tip_series(const std::vector<VectorField3>& trajectory) {
  std::vector<TipSample> out;
  out.reserve(trajectory.size());
  for (const VectorField3& f : trajectory) {
    out.push_back({f.time_label(), f.value(f.grid().origin_index())});
  }
  return out;
}

Vec3 extrapolate_tip(const std::vector<TipSample>& series, double rho) {
  if (series.size() < 3) throw InputError("tip extrapolation needs three samples");
  const std::size_t n = series.size();
  const std::array<double, 3> d{rho - series[n - 3].t, rho - series[n - 2].t,
                                rho - series[n - 1].t};
  Vec3 out{};
  // Lagrange basis at d = 0
  for (std::size_t a = 0; a < 3; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < 3; ++b) {
      if (a != b) w *= (0.0 - d[b]) / (d[a] - d[b]);
    }
    for (std::size_t c = 0; c < 3; ++c) out[c] += w * series[n - 3 + a].u[c];
  }
  return out;
}

SweepReport inviscid_sweep(const SchemeConfig& base, const ConeChart& chart,
                           const VectorField3& h, const std::vector<double>& nus) {
  if (nus.size() < 3) throw ConfigError("inviscid sweep needs at least three viscosities");
  for (std::size_t k = 0; k < nus.size(); ++k) {
    if (!(nus[k] > 0.0)) throw ConfigError("sweep viscosities must be positive");
    if (k > 0 && !(nus[k] < nus[k - 1])) throw ConfigError("sweep viscosities must decrease");
  }
  SweepReport rep;
  const Vec3 h0 = h.value(h.grid().origin_index());
  for (int c = 1; c < 3; ++c) {
    if (std::abs(h0[static_cast<std::size_t>(c)]) >
        std::abs(h0[static_cast<std::size_t>(rep.tip_component)])) {
      rep.tip_component = c;
    }
  }
  for (double nu : nus) {
    SchemeConfig cfg = base;
    cfg.nu = nu;
    std::optional<SolveResult> attempt;
    try {
      attempt.emplace(solve(cfg, chart, h));
    } catch (const DivergenceError& e) {
      rep.completed = false;
      rep.abort_reason = e.what();
      return rep;
    } catch (const InstabilityError& e) {
      rep.completed = false;
      rep.abort_reason = e.what();
      return rep;
    }
    SolveResult& run = *attempt;
    SweepMember m;
    m.nu = nu;
    m.tip = tip_series(run.trajectory);
    m.tip_at_rho = extrapolate_tip(m.tip, chart.rho());
    m.picard_history = std::move(run.final.picard_history);
    for (const VectorField3& f : run.trajectory) m.max_sup_norm = std::max(m.max_sup_norm, sup_norm(f));
    m.residual = run.final.residual;
    m.bkm_integral = bkm_monitor(run.trajectory, chart);
    rep.nus.push_back(nu);
    rep.final_fields.push_back(std::move(run.final.u));
    rep.members.push_back(std::move(m));
    if (rep.final_fields.size() >= 2) {
      const std::size_t k = rep.final_fields.size();
      rep.pairwise_sup_gaps.push_back(sup_norm(rep.final_fields[k - 2] - rep.final_fields[k - 1]));
    }
  }
  const std::size_t k = rep.members.size();
  const double nu1 = rep.nus[k - 2];
  const double nu2 = rep.nus[k - 1];
  for (std::size_t c = 0; c < 3; ++c) {
    const double a = rep.members[k - 2].tip_at_rho[c];
    const double b = rep.members[k - 1].tip_at_rho[c];
    // linear-in-nu error model through the two smallest viscosities
    rep.extrapolated_tip[c] = (nu1 * b - nu2 * a) / (nu1 - nu2);
  }
  rep.extrapolated_tip_value = rep.extrapolated_tip[static_cast<std::size_t>(rep.tip_component)];
  return rep;
}

bool gaps_decreasing(const SweepReport& sweep) {
  for (std::size_t k = 1; k < sweep.pairwise_sup_gaps.size(); ++k) {
    if (!(sweep.pairwise_sup_gaps[k] <= sweep.pairwise_sup_gaps[k - 1])) return false;
  }
  return true;
}

double fit_blowup_exponent(const std::vector<TipSample>& series, double rho, int component,
                           int* samples_used, int min_samples) {
  if (samples_used) *samples_used = 0;
  if (series.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double closest = rho - series.back().t;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const TipSample& s : series) {
    const double gap = rho - s.t;
    if (!(gap > 0.0) || gap > 10.0 * closest * (1.0 + 1e-12)) continue;
    const double omega = std::abs(s.u[static_cast<std::size_t>(component)]) / gap;
    if (!(omega > 0.0)) continue;
    xs.push_back(-std::log(gap));
    ys.push_back(std::log(omega));
  }
  if (samples_used) *samples_used = static_cast<int>(xs.size());
  if (static_cast<int>(xs.size()) < min_samples) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxy / sxx;
}

CertificateReport singularity_certificate(const SweepReport& sweep, const VectorField3& h,
                                          const ConeChart& chart) {
  if (!sweep.completed || sweep.members.size() < 2) {
    throw InputError("certificate needs a completed sweep");
  }
  CertificateReport r;
  r.component = sweep.tip_component;
  const auto i0 = static_cast<std::size_t>(r.component);
  r.h_tip = h.value(h.grid().origin_index())[i0];
  r.c = std::abs(r.h_tip);
  r.tip_value = sweep.extrapolated_tip[i0];
  r.increment_at_tip = std::abs(r.tip_value - r.h_tip);
  const std::size_t k = sweep.final_fields.size();
  r.nu_sweep_spread = sup_norm(sweep.final_fields[k - 2] - sweep.final_fields[k - 1]);
  r.fitted_exponent =
      fit_blowup_exponent(sweep.members.back().tip, chart.rho(), r.component, &r.fit_samples);

  if (r.c == 0.0) {
    r.certified = false;
    r.reason = "zero initial tip value";
  } else if (r.increment_at_tip <= 0.5 * r.c) {
    r.certified = true;
    r.reason = "tip increment within c/2";
    if (std::isfinite(r.fitted_exponent)) r.blowup_exponent = r.fitted_exponent;
  } else {
    r.certified = false;
    r.reason = "tip increment exceeds c/2";
  }
  return r;
}

DampingIntegral damping_integral_bound(double rho, double sup_bound, int resolution) {
  if (rho < 0.0 || sup_bound < 0.0) throw InputError("damping integral needs rho, C >= 0");
  if (resolution < 1) throw InputError("damping integral needs resolution >= 1");
  DampingIntegral out;
  out.analytic = 8.0 / 3.0 * sup_bound * rho * rho * rho;
  if (rho == 0.0) return out;
  // Cross-section volume by the midpoint rule per axis; the integrand is
  // constant in y so the product rule is exact up to rounding.
  auto cross_section = [&](double s) {
    const double half = rho - s;
    const double w = 2.0 * half / resolution;
    double line = 0.0;
    for (int i = 0; i < resolution; ++i) line += w;
    return line * line * line;
  };
  auto integrand = [&](double s) { return cross_section(s) * sup_bound / (rho - s); };
  using Gauss = boost::math::quadrature::gauss<double, 7>;
  const double panel = rho / resolution;
  for (int p = 0; p < resolution; ++p) {
    out.numeric += Gauss::integrate(integrand, p * panel, (p + 1) * panel);
  }
  return out;
}

DampingIntegral damping_integral_bound(const ConeChart& chart, double sup_bound, int resolution) {
  return damping_integral_bound(chart.rho(), sup_bound, resolution);
}

double bkm_monitor(const std::vector<VectorField3>& trajectory, const ConeChart& chart) {
  if (trajectory.empty()) throw InputError("BKM monitor needs a trajectory");
  double total = 0.0;
  auto omega_sup = [&](const VectorField3& f) {
    return sup_norm(f) / (chart.rho() - f.time_label());
  };
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double dt = trajectory[k].time_label() - trajectory[k - 1].time_label();
    total += 0.5 * dt * (omega_sup(trajectory[k - 1]) + omega_sup(trajectory[k]));
  }
  return total;
}

namespace {

struct AxisStencil {
  int first = 0;
  std::array<double, 4> w{};
};

AxisStencil axis_stencil(const Grid3& g, double y) {
  const double p = y / g.spacing() + g.center();
  const double fl = std::floor(p);
  const double f = p - fl;
  AxisStencil s;
  s.first = static_cast<int>(fl) - 1;
  s.w = {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
         -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
  return s;
}

}  // namespace

Vec3 interpolate(const VectorField3& u, const Vec3& y) {
  const Grid3& g = u.grid();
  const int n = g.n();
  std::array<AxisStencil, 3> st{axis_stencil(g, y[0]), axis_stencil(g, y[1]),
                                axis_stencil(g, y[2])};
  Vec3 out{};
  for (int a = 0; a < 4; ++a) {
    const int i = st[0].first + a;
    const double wa = st[0].w[static_cast<std::size_t>(a)];
    if (i < 0 || i >= n || wa == 0.0) continue;
    for (int b = 0; b < 4; ++b) {
      const int j = st[1].first + b;
      const double wb = st[1].w[static_cast<std::size_t>(b)];
      if (j < 0 || j >= n || wb == 0.0) continue;
      for (int c = 0; c < 4; ++c) {
        const int k = st[2].first + c;
        const double wc = st[2].w[static_cast<std::size_t>(c)];
        if (k < 0 || k >= n || wc == 0.0) continue;
        const std::size_t idx = g.index(i, j, k);
        for (int comp = 0; comp < 3; ++comp) {
          out[static_cast<std::size_t>(comp)] += wa * wb * wc * u.at(comp, idx);
        }
      }
    }
  }
  return out;
}

Reconstruction reconstruct_vorticity_velocity(const VectorField3& u, const ConeChart& chart,
                                              double t, const Grid3& x_grid,
                                              Quadrature quadrature) {
  if (!std::isfinite(t) || t < 0.0 || t >= chart.rho()) {
    throw DomainError("reconstruction needs 0 <= t < rho");
  }
  const double inv_width = 1.0 / (chart.rho() - t);
  VectorField3 omega(x_grid, t);
  const int n = x_grid.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 x = x_grid.node(i, j, k);
        const Vec3 y{chart.y_of(t, x[0]), chart.y_of(t, x[1]), chart.y_of(t, x[2])};
        const Vec3 val = interpolate(u, y);
        const std::size_t idx = x_grid.index(i, j, k);
        for (int c = 0; c < 3; ++c) omega.at(c, idx) = val[static_cast<std::size_t>(c)] * inv_width;
      }
    }
  }
  VectorField3 v = biot_savart_velocity(omega, quadrature);
  return {std::move(omega), std::move(v)};
}

}  // namespace conevort
