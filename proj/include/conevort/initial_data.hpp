#pragma once

// Initial data h_i(x) = g_i(x) / (1 + |x|^p) with g a finite Fourier sum
//   g_i(x) = sum_m a^m_i cos(k^m . x + phi^m).

#include <array>
#include <optional>
#include <vector>

#include "conevort/chart.hpp"
#include "conevort/fields.hpp"

namespace conevort {

struct FourierMode {
  std::array<int, 3> k{};
  Vec3 amplitude{};
  double phase = 0.0;

  bool operator==(const FourierMode&) const = default;
};

struct InitialData {
  std::vector<FourierMode> modes;
  int decay_order = 13;
  // When set, the data must reproduce this value of max_i |h_i(0)|.
  std::optional<double> requested_tip;

  bool operator==(const InitialData&) const = default;

  /// One constant mode (1, 0, 0) plus two sine modes that vanish at the origin.
  static InitialData standard();

  Vec3 g(const Vec3& x) const;
  Vec3 h(const Vec3& x) const;
  Vec3 tip() const;  // h(0) = sum_m a^m cos(phi^m)
  Vec3 amplitude_sums() const;  // sum_m |a^m_i|, the bound on |h_i| (1 + |x|^p)
};

/// Samples h at x(0, y) on every open-cone node at t = 0; zero elsewhere.
VectorField3 generate_data(const InitialData& spec, const Grid3& grid, const ConeChart& chart);

}  // namespace conevort
