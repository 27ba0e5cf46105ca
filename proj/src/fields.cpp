#include "conevort/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "conevort/errors.hpp"

namespace conevort {

Grid3::Grid3(double half_extent, int points_per_axis)
    : half_extent_(half_extent), n_(points_per_axis) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw ConfigError("grid half extent must be positive and finite");
  }
  if (points_per_axis < 9 || points_per_axis % 2 == 0) {
    throw ConfigError("grid needs an odd number of points per axis, at least 9 (got " +
                      std::to_string(points_per_axis) + ")");
  }
  spacing_ = 2.0 * half_extent / (points_per_axis - 1);
}

VectorField3::VectorField3(const Grid3& grid, double time_label)
    : grid_(grid), time_label_(time_label) {
  for (auto& c : comps_) c.assign(grid.size(), 0.0);
}

bool VectorField3::all_finite() const {
  for (const auto& c : comps_) {
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

bool VectorField3::is_zero() const {
  for (const auto& c : comps_) {
    for (double v : c) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

void VectorField3::require_same_grid(const VectorField3& other) const {
  if (!(grid_ == other.grid_)) throw InputError("fields live on different grids");
}

VectorField3& VectorField3::operator+=(const VectorField3& other) {
  require_same_grid(other);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] += other.comps_[c][i];
  }
  return *this;
}

VectorField3& VectorField3::operator-=(const VectorField3& other) {
  require_same_grid(other);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] -= other.comps_[c][i];
  }
  return *this;
}

VectorField3& VectorField3::operator*=(double s) {
  for (auto& c : comps_) {
    for (double& v : c) v *= s;
  }
  return *this;
}

VectorField3& VectorField3::add_scaled(const VectorField3& other, double s) {
  require_same_grid(other);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] += s * other.comps_[c][i];
  }
  return *this;
}

namespace {

double stencil_first(const double* f, std::size_t stride, int i, int n, double h) {
  auto at = [&](int k) { return f[static_cast<std::size_t>(k) * stride]; };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
  if (i == 1 || i == n - 2) return (at(i + 1) - at(i - 1)) / (2.0 * h);
  return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
}

double stencil_second(const double* f, std::size_t stride, int i, int n, double h) {
  auto at = [&](int k) { return f[static_cast<std::size_t>(k) * stride]; };
  const double h2 = h * h;
  if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2;
  if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / h2;
  if (i == 1 || i == n - 2) return (at(i - 1) - 2.0 * at(i) + at(i + 1)) / h2;
  return (-at(i - 2) + 16.0 * at(i - 1) - 30.0 * at(i) + 16.0 * at(i + 1) - at(i + 2)) /
         (12.0 * h2);
}

using MultiIndex = std::array<int, 3>;

std::vector<MultiIndex> multi_indices(int m) {
  std::vector<MultiIndex> out;
  for (int total = 0; total <= m; ++total) {
    for (int a = total; a >= 0; --a) {
      for (int b = total - a; b >= 0; --b) {
        out.push_back({a, b, total - a - b});
      }
    }
  }
  return out;
}

std::vector<double> apply_multi_index(const Grid3& grid, std::span<const double> in,
                                      const MultiIndex& alpha) {
  std::vector<double> cur(in.begin(), in.end());
  std::vector<double> tmp(cur.size());
  for (int axis = 0; axis < 3; ++axis) {
    int remaining = alpha[static_cast<std::size_t>(axis)];
    while (remaining > 0) {
      const int order = remaining >= 2 ? 2 : 1;
      derivative_scalar(grid, cur, axis, order, tmp);
      cur.swap(tmp);
      remaining -= order;
    }
  }
  return cur;
}

}  // namespace

void derivative_scalar(const Grid3& grid, std::span<const double> in, int axis, int order,
                       std::span<double> out) {
  if (axis < 0 || axis > 2) throw InputError("derivative axis out of range");
  if (order < 1 || order > 2) throw InputError("derivative order must be 1 or 2");
  const int n = grid.n();
  const double h = grid.spacing();
  const std::size_t stride = axis == 0 ? static_cast<std::size_t>(n) * n
                             : axis == 1 ? static_cast<std::size_t>(n)
                                         : 1;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      // base index of the line with the derivative axis at 0
      std::size_t base = 0;
      if (axis == 0) base = grid.index(0, a, b);
      if (axis == 1) base = grid.index(a, 0, b);
      if (axis == 2) base = grid.index(a, b, 0);
      const double* line = in.data() + base;
      for (int i = 0; i < n; ++i) {
        out[base + static_cast<std::size_t>(i) * stride] =
            order == 1 ? stencil_first(line, stride, i, n, h)
                       : stencil_second(line, stride, i, n, h);
      }
    }
  }
}

VectorField3 derivative(const VectorField3& field, int axis, int order) {
  if (axis < 1 || axis > 3) throw InputError("derivative axis must be 1, 2 or 3");
  VectorField3 out(field.grid(), field.time_label());
  for (int c = 0; c < 3; ++c) {
    derivative_scalar(field.grid(), field.component(c), axis - 1, order, out.component(c));
  }
  return out;
}

double axis_ordered_sum(const Grid3& grid, std::span<const double> values) {
  const int n = grid.n();
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double plane = 0.0;
    for (int j = 0; j < n; ++j) {
      double line = 0.0;
      const std::size_t base = grid.index(i, j, 0);
      for (int k = 0; k < n; ++k) line += values[base + static_cast<std::size_t>(k)];
      plane += line;
    }
    total += plane;
  }
  return total;
}

double sup_norm(const VectorField3& field) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (double v : field.component(c)) s = std::max(s, std::abs(v));
  }
  return s;
}

NormReport norms(const VectorField3& field, int m) {
  if (m < 0 || m > 3) throw InputError("norm order m must be in 0..3");
  const Grid3& grid = field.grid();
  const double cell = std::pow(grid.spacing(), 3);
  NormReport r;
  r.sup_norm = sup_norm(field);
  std::vector<double> squares(grid.size());
  for (const MultiIndex& alpha : multi_indices(m)) {
    double sum_sq = 0.0;
    double sup = 0.0;
    for (int c = 0; c < 3; ++c) {
      const std::vector<double> d = apply_multi_index(grid, field.component(c), alpha);
      for (std::size_t i = 0; i < d.size(); ++i) {
        squares[i] = d[i] * d[i];
        sup = std::max(sup, std::abs(d[i]));
      }
      sum_sq += axis_ordered_sum(grid, squares);
    }
    const double l2 = std::sqrt(sum_sq * cell);
    if (alpha == MultiIndex{0, 0, 0}) r.l2_norm = l2;
    r.hm_norm += l2;
    r.cm_norm = std::max(r.cm_norm, sup);
  }
  return r;
}

VectorField3 restrict_to_cone(const VectorField3& field, const ConeChart& chart, double t) {
  VectorField3 out = field;
  const Grid3& g = field.grid();
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (chart.cone_contains(t, g.node(i, j, k))) continue;
        const std::size_t idx = g.index(i, j, k);
        for (int c = 0; c < 3; ++c) out.at(c, idx) = 0.0;
      }
    }
  }
  out.set_cone_supported(true);
  return out;
}

std::vector<double> divergence(const VectorField3& field) {
  const Grid3& g = field.grid();
  std::vector<double> div(g.size(), 0.0);
  std::vector<double> d(g.size());
  for (int axis = 0; axis < 3; ++axis) {
    derivative_scalar(g, field.component(axis), axis, 1, d);
    for (std::size_t i = 0; i < d.size(); ++i) div[i] += d[i];
  }
  return div;
}

VectorField3 curl(const VectorField3& field) {
  const Grid3& g = field.grid();
  VectorField3 out(g, field.time_label());
  std::vector<double> a(g.size());
  std::vector<double> b(g.size());
  // (curl f)_c = d_{c+1} f_{c+2} - d_{c+2} f_{c+1}
  for (int c = 0; c < 3; ++c) {
    const int p = (c + 1) % 3;
    const int q = (c + 2) % 3;
    derivative_scalar(g, field.component(q), p, 1, a);
    derivative_scalar(g, field.component(p), q, 1, b);
    auto dst = out.component(c);
    for (std::size_t i = 0; i < a.size(); ++i) dst[i] = a[i] - b[i];
  }
  return out;
}

}  // namespace conevort
