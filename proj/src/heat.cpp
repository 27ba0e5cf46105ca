#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conevort/errors.hpp"
#include "conevort/kernels.hpp"

namespace conevort {

namespace {

constexpr double kTruncationSigmas = 8.0;

using Gauss7 = boost::math::quadrature::gauss<double, 7>;

template <typename F>
double composite_gauss(F&& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    total += Gauss7::integrate(f, a + p * w, a + (p + 1) * w);
  }
  return total;
}

void convolve_axis(const Grid3& g, std::span<const double> in, std::span<double> out, int axis,
                   const std::vector<double>& taps) {
  const int n = g.n();
  const int half = static_cast<int>(taps.size() / 2);
  const std::size_t stride = axis == 0 ? static_cast<std::size_t>(n) * n
                             : axis == 1 ? static_cast<std::size_t>(n)
                                         : 1;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::size_t base = 0;
      if (axis == 0) base = g.index(0, a, b);
      if (axis == 1) base = g.index(a, 0, b);
      if (axis == 2) base = g.index(a, b, 0);
      for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (int k = lo; k <= hi; ++k) {
          acc += taps[static_cast<std::size_t>(k - i + half)] *
                 in[base + static_cast<std::size_t>(k) * stride];
        }
        out[base + static_cast<std::size_t>(i) * stride] = acc;
      }
    }
  }
}

}  // namespace

HeatKernel::HeatKernel(double nu) : nu_(nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InputError("heat kernel needs nu > 0");
}

double HeatKernel::density(double elapsed, const Vec3& y) const {
  if (!(elapsed > 0.0)) throw InputError("heat kernel needs elapsed > 0");
  const double four_nu_s = 4.0 * nu_ * elapsed;
  const double r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
  return std::exp(-r2 / four_nu_s) / std::pow(std::numbers::pi * four_nu_s, 1.5);
}

std::vector<double> HeatKernel::taps(double spacing, double elapsed) const {
  if (!(elapsed > 0.0)) throw InputError("heat kernel needs elapsed > 0");
  const double sigma = std::sqrt(2.0 * nu_ * elapsed);
  const int half = static_cast<int>(std::floor(kTruncationSigmas * sigma / spacing));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double total = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double d = k * spacing / sigma;
    const double v = std::exp(-0.5 * d * d);
    w[static_cast<std::size_t>(k + half)] = v;
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

VectorField3 HeatKernel::convolve_space(const VectorField3& g, double elapsed) const {
  const Grid3& grid = g.grid();
  std::vector<double> t = taps(grid.spacing(), elapsed);
  // never wider than the grid itself
  const std::size_t max_taps = static_cast<std::size_t>(2 * grid.n() - 1);
  if (t.size() > max_taps) {
    const std::size_t cut = (t.size() - max_taps) / 2;
    t = std::vector<double>(t.begin() + static_cast<std::ptrdiff_t>(cut),
                            t.end() - static_cast<std::ptrdiff_t>(cut));
  }
  VectorField3 out(grid, g.time_label());
  std::vector<double> a(grid.size());
  std::vector<double> b(grid.size());
  for (int c = 0; c < 3; ++c) {
    convolve_axis(grid, g.component(c), a, 0, t);
    convolve_axis(grid, a, b, 1, t);
    convolve_axis(grid, b, out.component(c), 2, t);
  }
  return out;
}

VectorField3 heat_convolve_space(const VectorField3& g, double nu, double elapsed) {
  if (!(elapsed > 0.0)) throw InputError("heat_convolve_space needs elapsed > 0");
  return HeatKernel(nu).convolve_space(g, elapsed);
}

double mass_identity_check(double nu, double t_final, int quad_points) {
  if (!(nu > 0.0)) throw InputError("mass identity needs nu > 0");
  if (quad_points < 1) throw InputError("mass identity needs at least one panel");
  if (t_final < 0.0) throw InputError("mass identity needs t_final >= 0");
  if (t_final == 0.0) return 0.0;
  auto spatial_mass = [&](double s) {
    const double four_nu_s = 4.0 * nu * s;
    const double norm = 1.0 / std::sqrt(std::numbers::pi * four_nu_s);
    const double reach = kTruncationSigmas * std::sqrt(2.0 * nu * s);
    auto g1 = [&](double y) { return norm * std::exp(-y * y / four_nu_s); };
    const double line = composite_gauss(g1, -reach, reach, quad_points);
    return line * line * line;
  };
  return composite_gauss(spatial_mass, 0.0, t_final, quad_points);
}

LipschitzBound lipschitz_derivative_bound(const Grid3& grid, std::span<const double> h,
                                          double lipschitz_constant, double nu, double elapsed,
                                          int axis) {
  if (axis < 1 || axis > 3) throw InputError("axis must be 1, 2 or 3");
  if (!(elapsed > 0.0)) throw InputError("elapsed must be positive");
  const HeatKernel kernel(nu);
  const int n = grid.n();
  const double cell = std::pow(grid.spacing(), 3);
  const double two_nu_s = 2.0 * nu * elapsed;
  std::vector<double> terms(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 y = grid.node(i, j, k);
        const std::size_t idx = grid.index(i, j, k);
        // d_axis G evaluated at 0 - y
        const double dg = y[static_cast<std::size_t>(axis - 1)] / two_nu_s * kernel.density(elapsed, y);
        terms[idx] = h[idx] * dg * cell;
      }
    }
  }
  LipschitzBound out;
  out.lhs = std::abs(axis_ordered_sum(grid, terms));

  // Majorant in the rescaled variable y = sqrt(nu) y'; nu drops out entirely.
  const double s = elapsed;
  const double reach = 12.0 * std::sqrt(s);
  const double norm = 1.0 / std::pow(std::numbers::pi * s, 1.5);
  auto normal_part = [&](double y) {
    return lipschitz_constant * 2.0 * y * 2.0 * y / (4.0 * s) * std::exp(-y * y / (4.0 * s));
  };
  auto transverse = [&](double z) { return std::exp(-z * z / (4.0 * s)); };
  const double along = composite_gauss(normal_part, 0.0, reach, 64);
  const double across = composite_gauss(transverse, -reach, reach, 64);
  out.rhs = norm * along * across * across;
  return out;
}

LipschitzBound lipschitz_derivative_bound(const VectorField3& h, double lipschitz_constant,
                                          double nu, double elapsed, int axis) {
  LipschitzBound best;
  for (int c = 0; c < 3; ++c) {
    const LipschitzBound b = lipschitz_derivative_bound(h.grid(), h.component(c),
                                                        lipschitz_constant, nu, elapsed, axis);
    best.lhs = std::max(best.lhs, b.lhs);
    best.rhs = b.rhs;
  }
  return best;
}

}  // namespace conevort
