#include "conevort/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "conevort/errors.hpp"

namespace conevort {

InitialData InitialData::standard() {
  InitialData d;
  const double sine = -0.5 * std::numbers::pi;
  d.modes = {
      {{0, 0, 0}, {1.0, 0.0, 0.0}, 0.0},
      {{1, 0, 0}, {0.2, 0.1, 0.0}, sine},
      {{0, 1, 1}, {0.1, 0.0, 0.2}, sine},
  };
  return d;
}

Vec3 InitialData::g(const Vec3& x) const {
  Vec3 out{};
  for (const FourierMode& m : modes) {
    const double arg = m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.phase;
    const double c = std::cos(arg);
    for (std::size_t i = 0; i < 3; ++i) out[i] += m.amplitude[i] * c;
  }
  return out;
}

Vec3 InitialData::h(const Vec3& x) const {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double decay = 1.0 / (1.0 + std::pow(r, decay_order));
  Vec3 out = g(x);
  for (double& v : out) v *= decay;
  return out;
}

Vec3 InitialData::tip() const { return h(Vec3{0.0, 0.0, 0.0}); }

Vec3 InitialData::amplitude_sums() const {
  Vec3 out{};
  for (const FourierMode& m : modes) {
    for (std::size_t i = 0; i < 3; ++i) out[i] += std::abs(m.amplitude[i]);
  }
  return out;
}

VectorField3 generate_data(const InitialData& spec, const Grid3& grid, const ConeChart& chart) {
  if (spec.decay_order < 1) throw ConfigError("decay order must be a positive integer");
  if (spec.requested_tip) {
    if (spec.modes.empty() && *spec.requested_tip != 0.0) {
      throw ConfigError("empty mode list cannot produce a nonzero tip value");
    }
    const Vec3 tip = spec.tip();
    const double c = std::max({std::abs(tip[0]), std::abs(tip[1]), std::abs(tip[2])});
    if (std::abs(c - *spec.requested_tip) > 1e-12 * std::max(1.0, c)) {
      throw ConfigError("Fourier modes do not reproduce the requested tip value");
    }
  }
  VectorField3 out(grid, 0.0);
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 y = grid.node(i, j, k);
        if (!chart.cone_contains(0.0, y)) continue;
        const Vec3 x{chart.x_of(0.0, y[0]), chart.x_of(0.0, y[1]), chart.x_of(0.0, y[2])};
        const Vec3 v = spec.h(x);
        const std::size_t idx = grid.index(i, j, k);
        for (int c = 0; c < 3; ++c) out.at(c, idx) = v[static_cast<std::size_t>(c)];
      }
    }
  }
  out.set_cone_supported(true);
  return out;
}

}  // namespace conevort
