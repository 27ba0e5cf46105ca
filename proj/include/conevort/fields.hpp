#pragma once

// Uniform 3D sample grids in transformed y-coordinates, 3-component fields,
// finite-difference derivatives and the discrete H^m / C^m norms.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "conevort/chart.hpp"

namespace conevort {

/// Covers [-L, L]^3 with N nodes per axis, N odd so y = 0 is a node.
class Grid3 {
 public:
  Grid3(double half_extent, int points_per_axis);

  double half_extent() const { return half_extent_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  int center() const { return (n_ - 1) / 2; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  /// Node coordinate along one axis; exactly 0 at center().
  double coord(int i) const { return (i - center()) * spacing_; }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

  /// C order: axis 3 varies fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  std::size_t origin_index() const { return index(center(), center(), center()); }

  bool operator==(const Grid3& other) const {
    return n_ == other.n_ && half_extent_ == other.half_extent_;
  }

 private:
  double half_extent_;
  int n_;
  double spacing_;
};

class VectorField3 {
 public:
  explicit VectorField3(const Grid3& grid, double time_label = 0.0);

  const Grid3& grid() const { return grid_; }
  double time_label() const { return time_label_; }
  void set_time_label(double t) { time_label_ = t; }

  bool cone_supported() const { return cone_supported_; }
  void set_cone_supported(bool flag) { cone_supported_ = flag; }

  std::span<double> component(int c) { return comps_[static_cast<std::size_t>(c)]; }
  std::span<const double> component(int c) const { return comps_[static_cast<std::size_t>(c)]; }

  double& at(int c, std::size_t idx) { return comps_[static_cast<std::size_t>(c)][idx]; }
  double at(int c, std::size_t idx) const { return comps_[static_cast<std::size_t>(c)][idx]; }

  Vec3 value(std::size_t idx) const {
    return {comps_[0][idx], comps_[1][idx], comps_[2][idx]};
  }

  bool all_finite() const;
  bool is_zero() const;

  VectorField3& operator+=(const VectorField3& other);
  VectorField3& operator-=(const VectorField3& other);
  VectorField3& operator*=(double s);
  /// this += s * other
  VectorField3& add_scaled(const VectorField3& other, double s);

  friend VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
  friend VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
  friend VectorField3 operator*(double s, VectorField3 a) { return a *= s; }

 private:
  void require_same_grid(const VectorField3& other) const;

  Grid3 grid_;
  std::array<std::vector<double>, 3> comps_;
  double time_label_;
  bool cone_supported_ = false;
};

struct NormReport {
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  double hm_norm = 0.0;
  double cm_norm = 0.0;
};

/// Finite-difference derivative of one scalar component along axis (0-based).
/// 4th-order centered away from the faces, 2nd-order centered one node in,
/// 2nd-order one-sided on the faces.
void derivative_scalar(const Grid3& grid, std::span<const double> in, int axis, int order,
                       std::span<double> out);

/// axis is 1-based (1..3) to match the usual y_1, y_2, y_3 naming.
VectorField3 derivative(const VectorField3& field, int axis, int order);

/// sup, L2, H^m = sum over |alpha| <= m of ||D^alpha f||_L2, C^m = max over the same.
NormReport norms(const VectorField3& field, int m = 2);

/// Sup norm over all components and nodes.
double sup_norm(const VectorField3& field);

/// Zeroes every node outside the open cone cross-section at time t.
VectorField3 restrict_to_cone(const VectorField3& field, const ConeChart& chart, double t);

/// Axis-ordered sum: lines along axis 3, then axis 2, then axis 1. Inserting
/// zero-valued nodes never changes the result.
double axis_ordered_sum(const Grid3& grid, std::span<const double> values);

/// Discrete divergence and curl built from `derivative`.
std::vector<double> divergence(const VectorField3& field);
VectorField3 curl(const VectorField3& field);

}  // namespace conevort
