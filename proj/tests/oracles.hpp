#pragma once

// Helpers shared by the unit tests: sampling of closed-form fields and an
// independent, deliberately naive version of the transformed kernel sum.

#include <cmath>
#include <numbers>

#include "conevort/chart.hpp"
#include "conevort/fields.hpp"
#include "conevort/kernels.hpp"

namespace conevort::testing {

template <typename F>
inline VectorField3 sample(const Grid3& g, F f) {
  VectorField3 out(g);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      for (int k = 0; k < g.n(); ++k) {
        const Vec3 v = f(g.node(i, j, k));
        for (int c = 0; c < 3; ++c) out.at(c, g.index(i, j, k)) = v[static_cast<std::size_t>(c)];
      }
    }
  }
  return out;
}

// Independent brute-force version of the transformed kernel quadrature.
inline VectorField3 brute_transformed(const VectorField3& u, const ConeChart& chart, double t,
                               bool measure_constant) {
  const Grid3& g = u.grid();
  const double w = chart.rho() - t;
  const double h = g.spacing();
  VectorField3 out(g, t);
  const double pref = measure_constant ? std::pow(std::numbers::pi / 2.0, 3) : 1.0;
  auto full_cell = [&](double y) { return std::abs(y) + 0.5 * h <= w; };
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      for (int k = 0; k < g.n(); ++k) {
        const Vec3 yt = g.node(i, j, k);
        if (!chart.cone_contains(t, yt)) continue;
        const Vec3 xt{std::tan(std::numbers::pi * yt[0] / (2 * w)), std::tan(std::numbers::pi * yt[1] / (2 * w)),
                      std::tan(std::numbers::pi * yt[2] / (2 * w))};
        Vec3 acc{};
        for (int a = 0; a < g.n(); ++a)
          for (int b = 0; b < g.n(); ++b)
            for (int c = 0; c < g.n(); ++c) {
              const Vec3 ys = g.node(a, b, c);
              if (!full_cell(ys[0]) || !full_cell(ys[1]) || !full_cell(ys[2])) continue;
              const Vec3 xs{std::tan(std::numbers::pi * ys[0] / (2 * w)), std::tan(std::numbers::pi * ys[1] / (2 * w)),
                            std::tan(std::numbers::pi * ys[2] / (2 * w))};
              const double weight = pref * (1 + xs[0] * xs[0]) * (1 + xs[1] * xs[1]) *
                                    (1 + xs[2] * xs[2]) * h * h * h / (w * w * w);
              const Vec3 val = u.value(g.index(a, b, c));
              const Vec3 kv = biot_savart_kernel(
                  {xt[0] - xs[0], xt[1] - xs[1], xt[2] - xs[2]},
                  {val[0] * weight, val[1] * weight, val[2] * weight});
              for (int d = 0; d < 3; ++d) acc[d] += kv[d];
            }
        for (int d = 0; d < 3; ++d) out.at(d, g.index(i, j, k)) = acc[d];
      }
  return out;
}


}  // namespace conevort::testing
