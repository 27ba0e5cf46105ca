#pragma once

// Cone coordinate chart.
//
// For a time horizon rho > 0 the chart maps original coordinates (t, x),
// t in [0, rho), x in R^3, to
//
//   sigma = t / sqrt(rho^2 - t^2),      y_j = (rho - t) (2/pi) arctan(x_j),
//
// so that every spatial slice lands in the open cube (-(rho-t), rho-t)^3 and
// the space-time image is a cone with tip (rho, 0). Vorticity is written as
// omega(t, x) = u(sigma, y) / (rho - t).

#include <array>
#include <cstddef>

namespace conevort {

using Vec3 = std::array<double, 3>;

/// Coefficient functions of the transformed vorticity system at (t, x).
struct TransformCoefficients {
  Vec3 b_t{};             // d y_j / d t at fixed x  = -(2/pi) arctan(x_j)
  Vec3 b_spatial_diag{};  // (2/pi) / (1 + x_j^2); d y_j / d x_j = (rho - t) * this
  double mu_bar = 0.0;    // (rho^2 - t^2)^{3/2} / rho^2
  double damping = 0.0;   // mu_bar / (rho - t)
  double dsigma_dt = 0.0; // rho^2 / (rho^2 - t^2)^{3/2}
};

struct ChartPoint {
  double sigma = 0.0;
  Vec3 y{};
};

struct OriginalPoint {
  double t = 0.0;
  Vec3 x{};
};

/// |x_j| above this are rejected; tan/arctan lose too many digits beyond it.
inline constexpr double kMaxAbsX = 1e12;

class ConeChart {
 public:
  explicit ConeChart(double rho);

  double rho() const { return rho_; }

  double sigma_of(double t) const;
  /// Closed-form inverse of sigma_of: t = rho sigma / sqrt(1 + sigma^2).
  double t_of(double sigma) const;

  /// Scalar pieces of the spatial map, usable on a single axis.
  double y_of(double t, double x) const;
  double x_of(double t, double y) const;

  ChartPoint forward_transform(double t, const Vec3& x) const;
  OriginalPoint inverse_transform(double sigma, const Vec3& y) const;

  TransformCoefficients coefficients_at(double t, const Vec3& x) const;

  double mu_bar(double t) const;
  double damping(double t) const;
  double dsigma_dt(double t) const;

  /// Open cross-section test: all |y_j| < rho - t. Valid for t in [0, rho].
  bool cone_contains(double t, const Vec3& y) const;

 private:
  void require_time(double t) const;

  double rho_;
};

/// Maximum of the damping coefficient over t_k = rho k / samples, k < samples.
double damping_supremum(double rho, std::size_t samples);

}  // namespace conevort
