#include "conevort/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conevort/errors.hpp"

namespace conevort {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;
// Increments this far below the iterate are indistinguishable from rounding.
constexpr double kRoundoffFloor = 1e3 * std::numeric_limits<double>::epsilon();

struct AxisGeometry {
  std::vector<char> inside;
  std::vector<double> x;
  std::vector<double> b_t;
  std::vector<double> b_s;
};

AxisGeometry axis_geometry(const Grid3& g, const ConeChart& chart, double t) {
  const auto n = static_cast<std::size_t>(g.n());
  AxisGeometry a{std::vector<char>(n, 0), std::vector<double>(n, 0.0),
                 std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const double half_width = chart.rho() - t;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = g.coord(static_cast<int>(i));
    if (!(std::abs(y) < half_width)) continue;
    a.inside[i] = 1;
    a.x[i] = chart.x_of(t, y);
    a.b_t[i] = -kTwoOverPi * std::atan(a.x[i]);
    a.b_s[i] = kTwoOverPi / (1.0 + a.x[i] * a.x[i]);
  }
  return a;
}

template <typename F>
void for_cone_nodes(const Grid3& g, const AxisGeometry& a, F&& f) {
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    if (!a.inside[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n; ++j) {
      if (!a.inside[static_cast<std::size_t>(j)]) continue;
      for (int k = 0; k < n; ++k) {
        if (!a.inside[static_cast<std::size_t>(k)]) continue;
        f(g.index(i, j, k), std::array<int, 3>{i, j, k});
      }
    }
  }
}

// 4-point Lagrange weights at fractional offset f in [0, 1) from node i0,
// covering nodes i0-1 .. i0+2.
std::array<double, 4> cubic_weights(double f) {
  return {-f * (f - 1.0) * (f - 2.0) / 6.0, (f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0,
          -(f + 1.0) * f * (f - 2.0) / 2.0, (f + 1.0) * f * (f - 1.0) / 6.0};
}

// Resamples every line along one axis: out(i) = in(position(i)), zero outside.
void resample_axis(const Grid3& g, std::span<const double> in, std::span<double> out, int axis,
                   const std::vector<double>& position) {
  const int n = g.n();
  const std::size_t stride = axis == 0 ? static_cast<std::size_t>(n) * n
                             : axis == 1 ? static_cast<std::size_t>(n)
                                         : 1;
  std::vector<int> base_node(static_cast<std::size_t>(n));
  std::vector<std::array<double, 4>> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double p = position[static_cast<std::size_t>(i)];
    const double fl = std::floor(p);
    base_node[static_cast<std::size_t>(i)] = static_cast<int>(fl);
    weights[static_cast<std::size_t>(i)] = cubic_weights(p - fl);
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::size_t base = 0;
      if (axis == 0) base = g.index(0, a, b);
      if (axis == 1) base = g.index(a, 0, b);
      if (axis == 2) base = g.index(a, b, 0);
      for (int i = 0; i < n; ++i) {
        const int i0 = base_node[static_cast<std::size_t>(i)];
        const auto& w = weights[static_cast<std::size_t>(i)];
        double acc = 0.0;
        for (int s = 0; s < 4; ++s) {
          const int node = i0 - 1 + s;
          if (node < 0 || node >= n || w[static_cast<std::size_t>(s)] == 0.0) continue;
          acc += w[static_cast<std::size_t>(s)] * in[base + static_cast<std::size_t>(node) * stride];
        }
        out[base + static_cast<std::size_t>(i) * stride] = acc;
      }
    }
  }
}

void require_finite(const VectorField3& f, const char* what, double t0, double t1, int q) {
  if (!f.all_finite()) {
    throw InstabilityError(std::string("non-finite values in ") + what + " on step [" +
                               std::to_string(t0) + ", " + std::to_string(t1) +
                               "], iteration " + std::to_string(q),
                           t0, t1, q);
  }
}

TransformedKernelOptions kernel_options(const SchemeConfig& c) {
  TransformedKernelOptions o;
  o.measure_constant = c.measure_constant;
  return o;
}

}  // namespace

SchemeConfig SchemeConfig::desk(double rho, double nu) {
  SchemeConfig c;
  c.rho = rho;
  c.nu = nu;
  c.grid = Grid3(rho, 25);
  c.dt = rho / 64.0;
  return c;
}

void SchemeConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("scheme rho must be positive");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ConfigError("scheme nu must be non-negative");
  if (!(dt > 0.0) || !(dt < rho / 16.0)) throw ConfigError("scheme dt must lie in (0, rho/16)");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol must be positive");
  if (picard_max < 1) throw ConfigError("picard_max must be at least 1");
  if (m_norm < 0 || m_norm > 3) throw ConfigError("m_norm must be in 0..3");
  if (grid.half_extent() < rho) throw ConfigError("grid half extent must cover the cone (L >= rho)");
}

int SchemeConfig::steps() const {
  return static_cast<int>(std::ceil(rho / dt - 1e-9));
}

double SchemeConfig::effective_dt() const { return rho / steps(); }

namespace {

RhsTerms compute_terms(const VectorField3& u, const ConeChart& chart, double t,
                       const TransformedKernelOptions& options, bool with_nonlinear) {
  if (!std::isfinite(t) || t < 0.0 || t >= chart.rho()) {
    throw DomainError("rhs terms need 0 <= t < rho");
  }
  const Grid3& g = u.grid();
  RhsTerms r{VectorField3(g, t), VectorField3(g, t), VectorField3(g, t), VectorField3(g, t)};
  const AxisGeometry geo = axis_geometry(g, chart, t);

  std::array<VectorField3, 3> du{derivative(u, 1, 1), derivative(u, 2, 1), derivative(u, 3, 1)};
  const VectorField3 uint = with_nonlinear ? transformed_kernel_apply(u, chart, t, options)
                                            : VectorField3(g, t);
  std::array<VectorField3, 3> duint{derivative(uint, 1, 1), derivative(uint, 2, 1),
                                    derivative(uint, 3, 1)};
  const double inv_width = 1.0 / (chart.rho() - t);

  for_cone_nodes(g, geo, [&](std::size_t idx, const std::array<int, 3>& node) {
    std::array<double, 3> bt{};
    std::array<double, 3> bs{};
    for (std::size_t j = 0; j < 3; ++j) {
      bt[j] = geo.b_t[static_cast<std::size_t>(node[j])];
      bs[j] = geo.b_s[static_cast<std::size_t>(node[j])];
    }
    for (int i = 0; i < 3; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      double conv = 0.0, burg = 0.0, ler = 0.0;
      for (int j = 0; j < 3; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        const double dju_i = du[jj].at(i, idx);
        conv += bt[jj] * dju_i;
        burg += bs[jj] * uint.at(j, idx) * dju_i;
        ler += 0.5 * (bs[jj] * duint[jj].at(i, idx) + bs[ii] * duint[ii].at(j, idx)) * u.at(j, idx);
      }
      r.convection.at(i, idx) = conv;
      r.burgers.at(i, idx) = burg;
      r.leray.at(i, idx) = ler;
      r.damping.at(i, idx) = u.at(i, idx) * inv_width;
    }
  });
  for (VectorField3* f : {&r.convection, &r.burgers, &r.leray, &r.damping}) {
    f->set_cone_supported(true);
  }
  return r;
}

}  // namespace

RhsTerms rhs_terms(const VectorField3& u, const ConeChart& chart, double t,
                   const TransformedKernelOptions& options) {
  return compute_terms(u, chart, t, options, true);
}

VectorField3 nonlinear_source(const VectorField3& u, const ConeChart& chart, double t,
                              const TransformedKernelOptions& options) {
  RhsTerms r = rhs_terms(u, chart, t, options);
  r.leray -= r.burgers;
  return std::move(r.leray);
}

VectorField3 transport_resample(const VectorField3& u, const ConeChart& chart, double t0,
                                double t1) {
  const Grid3& g = u.grid();
  const double scale = (chart.rho() - t0) / (chart.rho() - t1);
  std::vector<double> position(static_cast<std::size_t>(g.n()));
  const int c = g.center();
  for (int i = 0; i < g.n(); ++i) {
    position[static_cast<std::size_t>(i)] = c + (i - c) * scale;
  }
  VectorField3 out(g, t1);
  std::vector<double> a(g.size());
  std::vector<double> b(g.size());
  for (int comp = 0; comp < 3; ++comp) {
    resample_axis(g, u.component(comp), a, 0, position);
    resample_axis(g, a, b, 1, position);
    resample_axis(g, b, out.component(comp), 2, position);
  }
  return out;
}

VectorField3 propagate_linear(const VectorField3& u, const SchemeConfig& config,
                              const ConeChart& chart, double t0, double t1) {
  const double dt = t1 - t0;
  VectorField3 w = u;
  if (config.nu > 0.0) w = heat_convolve_space(w, config.nu, 0.5 * dt);
  if (config.transport) w = transport_resample(w, chart, t0, t1);
  if (config.nu > 0.0) w = heat_convolve_space(w, config.nu, 0.5 * dt);
  // exp(-int_{t0}^{t1} ds / (rho - s))
  w *= (chart.rho() - t1) / (chart.rho() - t0);
  w.set_time_label(t1);
  return w;
}

namespace {

void require_step(const ConeChart& chart, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0)) throw DomainError("step needs 0 <= t0 < t1");
  if (t1 >= chart.rho()) throw DomainError("step end t1 must stay below rho");
}

// Part of the iterate that does not depend on state_q.
VectorField3 step_base(const VectorField3& prev, const SchemeConfig& config,
                       const ConeChart& chart, double t0, double t1) {
  VectorField3 base = propagate_linear(prev, config, chart, t0, t1);
  if (config.nonlinear) {
    const VectorField3 n0 = nonlinear_source(prev, chart, t0, kernel_options(config));
    base.add_scaled(propagate_linear(n0, config, chart, t0, t1), 0.5 * (t1 - t0));
  }
  return base;
}

VectorField3 iterate_from_base(const VectorField3& base, const VectorField3& state_q,
                               const SchemeConfig& config, const ConeChart& chart, double t0,
                               double t1) {
  VectorField3 next = base;
  if (config.nonlinear) {
    next.add_scaled(nonlinear_source(state_q, chart, t1, kernel_options(config)), 0.5 * (t1 - t0));
  }
  next = restrict_to_cone(next, chart, t1);
  next.set_time_label(t1);
  return next;
}

}  // namespace

VectorField3 picard_step(const VectorField3& prev, const VectorField3& state_q,
                         const SchemeConfig& config, const ConeChart& chart, double t0,
                         double t1) {
  require_step(chart, t0, t1);
  const VectorField3 base = step_base(prev, config, chart, t0, t1);
  require_finite(base, "linear propagation", t0, t1, 0);
  VectorField3 next = iterate_from_base(base, state_q, config, chart, t0, t1);
  require_finite(next, "Picard iterate", t0, t1, 1);
  return next;
}

SolveResult solve(const SchemeConfig& config, const ConeChart& chart, const VectorField3& h) {
  config.validate();
  if (!(h.grid() == config.grid)) throw ConfigError("data grid differs from the scheme grid");
  if (chart.rho() != config.rho) throw ConfigError("chart and scheme disagree on rho");
  if (!h.all_finite()) throw InputError("initial data must be finite");

  const int steps = config.steps();
  SolveResult result{SchemeState{restrict_to_cone(h, chart, 0.0), 0.0, {}, 0.0}, {}};
  result.final.u.set_time_label(0.0);
  result.trajectory.reserve(static_cast<std::size_t>(steps));
  result.trajectory.push_back(result.final.u);

  for (int k = 0; k + 1 < steps; ++k) {
    const double t0 = config.rho * k / steps;
    const double t1 = config.rho * (k + 1) / steps;
    const VectorField3& prev = result.final.u;

    PicardRecord rec;
    rec.t0 = t0;
    rec.t1 = t1;
    const VectorField3 base = step_base(prev, config, chart, t0, t1);
    require_finite(base, "linear propagation", t0, t1, 0);

    VectorField3 current = prev;
    for (int q = 1; q <= config.picard_max; ++q) {
      VectorField3 next = iterate_from_base(base, current, config, chart, t0, t1);
      require_finite(next, "Picard iterate", t0, t1, q);
      const NormReport inc = norms(next - current, config.m_norm);
      rec.increments.push_back(inc);
      rec.iterations = q;
      if (q >= 2) {
        const double prev_inc = rec.increments[static_cast<std::size_t>(q - 2)].hm_norm;
        rec.ratios.push_back(prev_inc > 0.0 ? inc.hm_norm / prev_inc : 0.0);
      }
      current = std::move(next);
      const double size = norms(current, config.m_norm).hm_norm;
      if (!std::isfinite(inc.hm_norm) || !std::isfinite(size)) {
        throw DivergenceError("Picard iterates overflow on step [" + std::to_string(t0) + ", " +
                                  std::to_string(t1) + "]; try a smaller rho",
                              t1, std::numeric_limits<double>::infinity());
      }
      const bool linear_only = !config.nonlinear;
      const bool below_tol = inc.hm_norm < config.picard_tol;
      const bool at_roundoff =
          q >= 2 && inc.hm_norm <= kRoundoffFloor * size;
      if (linear_only || below_tol || at_roundoff) {
        rec.converged = true;
        break;
      }
    }
    if (!rec.converged && !rec.ratios.empty() && !(rec.ratios.back() < 1.0)) {
      throw DivergenceError("Picard iteration diverged on step [" + std::to_string(t0) + ", " +
                                std::to_string(t1) + "]; try a smaller rho",
                            t1, rec.ratios.back());
    }
    result.final.u = std::move(current);
    result.final.u.set_cone_supported(true);
    result.final.t = t1;
    result.final.picard_history.push_back(std::move(rec));
    result.trajectory.push_back(result.final.u);
  }
  if (result.trajectory.size() >= 3) {
    // residual of the last accepted step only
    const std::vector<VectorField3> tail(result.trajectory.end() - 3, result.trajectory.end());
    result.final.residual = residual(tail, config, chart);
  }
  return result;
}

double residual(const std::vector<VectorField3>& trajectory, const SchemeConfig& config,
                const ConeChart& chart) {
  if (trajectory.size() < 3) throw InputError("residual needs at least 3 snapshots");
  const Grid3& g = trajectory.front().grid();
  const int n = g.n();
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const VectorField3& u = trajectory[k];
    const double t = u.time_label();
    const double dt = trajectory[k + 1].time_label() - trajectory[k - 1].time_label();
    const RhsTerms r = compute_terms(u, chart, t, kernel_options(config), config.nonlinear);
    VectorField3 lap(g, t);
    if (config.nu > 0.0) {
      for (int axis = 1; axis <= 3; ++axis) lap += derivative(u, axis, 2);
    }
    for (int i = 2; i < n - 2; ++i) {
      for (int j = 2; j < n - 2; ++j) {
        for (int l = 2; l < n - 2; ++l) {
          // The stencil and both time neighbours must stay inside the cone.
          const Vec3 y = g.node(i, j, l);
          const double reach = 2.0 * g.spacing();
          const Vec3 padded{std::abs(y[0]) + reach, std::abs(y[1]) + reach,
                            std::abs(y[2]) + reach};
          if (!chart.cone_contains(trajectory[k + 1].time_label(), padded)) continue;
          const std::size_t idx = g.index(i, j, l);
          for (int c = 0; c < 3; ++c) {
            double res = (trajectory[k + 1].at(c, idx) - trajectory[k - 1].at(c, idx)) / dt;
            res -= config.nu * lap.at(c, idx);
            if (config.transport) res += r.convection.at(c, idx);
            if (config.nonlinear) res += r.burgers.at(c, idx) - r.leray.at(c, idx);
            res += r.damping.at(c, idx);
            worst = std::max(worst, std::abs(res));
          }
        }
      }
    }
  }
  return worst;
}

}  // namespace conevort
