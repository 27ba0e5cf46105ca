#pragma once

// Damped transformed vorticity system in original time t on [0, rho):
//
//   u_t - nu Lap u + sum_j b_{j,t} d_j u + sum_j b^s_{jj} u^int_j d_j u + u/(rho - t)
//     = sum_j 1/2 (b^s_{jj} d_j u^int_i + b^s_{ii} d_i u^int_j) u_j
//
// with d_j = d/dy_j on the transformed grid, b_{j,t} = -(2/pi) arctan(x_j),
// b^s_{jj} = (2/pi)/(1 + x_j^2) and u^int from transformed_kernel_apply.
//
// Each time step [t0, t1] is solved by Picard iteration: the linear part
// (heat, transport, damping) is propagated exactly for the new iterate while
// the nonlinear Burgers and Leray terms are frozen at the previous iterate
// and integrated by the trapezoidal Duhamel rule.

#include <optional>
#include <vector>

#include "conevort/chart.hpp"
#include "conevort/fields.hpp"
#include "conevort/kernels.hpp"

namespace conevort {

struct SchemeConfig {
  double rho = 0.05;
  double nu = 0.0;
  Grid3 grid{0.05, 25};
  double dt = 0.05 / 64;
  double picard_tol = 1e-9;
  int picard_max = 12;
  int m_norm = 2;
  // Term switches; all on for the full system.
  bool transport = true;
  bool nonlinear = true;
  bool measure_constant = true;

  /// N = 25, L = rho, dt = rho/64.
  static SchemeConfig desk(double rho, double nu);

  /// Throws ConfigError on rho <= 0, nu < 0, dt >= rho/16, L < rho, ...
  void validate() const;

  /// Steps march t_k = k * rho / steps() for k < steps(); t_last = rho - effective_dt().
  int steps() const;
  double effective_dt() const;
};

struct RhsTerms {
  VectorField3 convection;  // sum_j b_{j,t} d_j u_i
  VectorField3 burgers;     // sum_j b^s_jj u^int_j d_j u_i
  VectorField3 leray;       // sum_j 1/2 (b^s_jj d_j u^int_i + b^s_ii d_i u^int_j) u_j
  VectorField3 damping;     // u_i / (rho - t)
};

/// All terms are zero outside the open cone at t.
RhsTerms rhs_terms(const VectorField3& u, const ConeChart& chart, double t,
                   const TransformedKernelOptions& options = {});

/// leray - burgers, the explicit part of each Picard iterate.
VectorField3 nonlinear_source(const VectorField3& u, const ConeChart& chart, double t,
                              const TransformedKernelOptions& options = {});

/// Exact linear propagator over [t0, t1]: half heat step, transport along
/// x = const characteristics, half heat step, damping factor (rho-t1)/(rho-t0).
VectorField3 propagate_linear(const VectorField3& u, const SchemeConfig& config,
                              const ConeChart& chart, double t0, double t1);

/// u(t1, y) = u(t0, y (rho - t0)/(rho - t1)) by separable cubic interpolation.
VectorField3 transport_resample(const VectorField3& u, const ConeChart& chart, double t0,
                                double t1);

/// One Picard iterate u^{q+1}(t1) from the accepted prev = u(t0) and the
/// current iterate state_q ~ u(t1), restricted to the cone at t1.
VectorField3 picard_step(const VectorField3& prev, const VectorField3& state_q,
                         const SchemeConfig& config, const ConeChart& chart, double t0,
                         double t1);

struct PicardRecord {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<NormReport> increments;  // increments[q-1] = norms of u^q - u^{q-1}
  std::vector<double> ratios;          // ratios[q-2] = |du^q|_Hm / |du^{q-1}|_Hm, q >= 2
  int iterations = 0;
  bool converged = false;
};

struct SchemeState {
  VectorField3 u;
  double t = 0.0;
  std::vector<PicardRecord> picard_history;
  double residual = 0.0;
};

struct SolveResult {
  SchemeState final;
  std::vector<VectorField3> trajectory;  // u(t_k) for every step, t_0 = 0 first
};

SolveResult solve(const SchemeConfig& config, const ConeChart& chart, const VectorField3& h);

/// Max over interior space-time nodes of the PDE residual, with centered
/// differences in time and the module's finite differences in space.
double residual(const std::vector<VectorField3>& trajectory, const SchemeConfig& config,
                const ConeChart& chart);

}  // namespace conevort
