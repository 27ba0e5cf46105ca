#pragma once

// Biot-Savart and heat kernels.
//
// K3(x) h = (1/4pi) h cross x / |x|^3 recovers velocity from vorticity,
// v(x) = int K3(x - z) omega(z) dz. On a uniform grid the integral is a
// discrete convolution with the self cell omitted (the odd kernel gives it
// zero weight under symmetric quadrature).
//
// G_nu(s, y) = (4 pi nu s)^{-3/2} exp(-|y|^2 / (4 nu s)) is the heat kernel
// of p_s - nu Lap p = 0.

#include <memory>
#include <vector>

#include "conevort/chart.hpp"
#include "conevort/fields.hpp"

namespace conevort {

/// K3(x) h = (1/4pi) h cross x / |x|^3, zero at x = 0. This orientation makes
/// v = K3 * omega satisfy curl v = omega.
Vec3 biot_savart_kernel(const Vec3& x, const Vec3& h);

enum class Quadrature { direct_sum, fft_periodic };

class BiotSavartOperator {
 public:
  BiotSavartOperator(const Grid3& grid, Quadrature quadrature = Quadrature::direct_sum);
  ~BiotSavartOperator();
  BiotSavartOperator(BiotSavartOperator&&) noexcept;
  BiotSavartOperator& operator=(BiotSavartOperator&&) noexcept;

  const Grid3& grid() const { return grid_; }
  Quadrature quadrature() const { return quadrature_; }

  VectorField3 apply(const VectorField3& omega) const;

 private:
  struct FftPlan;

  VectorField3 apply_direct(const VectorField3& omega) const;
  VectorField3 apply_fft(const VectorField3& omega) const;

  Grid3 grid_;
  Quadrature quadrature_;
  std::unique_ptr<FftPlan> fft_;
};

VectorField3 biot_savart_velocity(const VectorField3& omega,
                                  Quadrature quadrature = Quadrature::direct_sum);

struct TransformedKernelOptions {
  /// Include the (pi/2)^3 constant of dx = (pi/2)^3 prod(1+x_k^2)/(rho-t)^3 dy.
  bool measure_constant = true;
};

/// u^int at time t: the Biot-Savart integral of U(x) = u(t, y(t, x)) taken in
/// original x-coordinates, read back at the y-grid nodes. Each cone node is a
/// quadrature point with weight h^3 (pi/2)^3 prod(1+x_k^2)/(rho-t)^3. Nodes
/// outside the open cone return 0.
VectorField3 transformed_kernel_apply(const VectorField3& u, const ConeChart& chart, double t,
                                      const TransformedKernelOptions& options = {});

class HeatKernel {
 public:
  explicit HeatKernel(double nu);

  double nu() const { return nu_; }

  /// G_nu(s, y).
  double density(double elapsed, const Vec3& y) const;

  /// Normalized 1D filter taps for standard deviation sqrt(2 nu elapsed),
  /// truncated at 8 standard deviations; index k is offset k - taps/2.
  std::vector<double> taps(double spacing, double elapsed) const;

  /// Separable spatial convolution g *_sp G_nu(elapsed); zero outside the grid.
  VectorField3 convolve_space(const VectorField3& g, double elapsed) const;

 private:
  double nu_;
};

VectorField3 heat_convolve_space(const VectorField3& g, double nu, double elapsed);

/// int_0^t_final int_{R^3} G_nu(s, y) dy ds by composite Gauss-Legendre
/// quadrature with quad_points panels per dimension.
double mass_identity_check(double nu, double t_final, int quad_points);

struct LipschitzBound {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = |(h * d_axis G_nu(elapsed))(0)| on the grid; rhs = the nu-free majorant
///   int_{y_a >= 0} L |2 y_a| 2 y_a / (4 s (pi s)^{3/2}) exp(-|y|^2 / 4s) dy
/// obtained from the odd symmetry of d_axis G and the Lipschitz bound of h.
LipschitzBound lipschitz_derivative_bound(const VectorField3& h, double lipschitz_constant,
                                          double nu, double elapsed, int axis);

/// Scalar version of the above for the first component only.
LipschitzBound lipschitz_derivative_bound(const Grid3& grid, std::span<const double> h,
                                          double lipschitz_constant, double nu, double elapsed,
                                          int axis);

}  // namespace conevort
