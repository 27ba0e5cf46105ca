#pragma once

// Post-processing of scheme runs: Picard contraction ratios, the nu -> 0
// sweep, the tip certificate, the damping integral, the BKM integral and the
// reconstruction of original-coordinate vorticity and velocity.

#include <optional>
#include <string>
#include <vector>

#include "conevort/chart.hpp"
#include "conevort/fields.hpp"
#include "conevort/kernels.hpp"
#include "conevort/scheme.hpp"

namespace conevort {

inline constexpr double kContractionBound = 0.25;

struct ContractionEntry {
  double t = 0.0;  // step end time
  int q = 0;       // iteration index of the numerator increment, q >= 2
  double ratio = 0.0;
  bool exceeds = false;  // ratio > bound
};

std::vector<ContractionEntry> contraction_report(const std::vector<PicardRecord>& history,
                                                 double bound = kContractionBound);

double max_ratio(const std::vector<ContractionEntry>& entries);

struct TipSample {
  double t = 0.0;
  Vec3 u{};  // u(t, 0)
};

std::vector<TipSample> tip_series(const std::vector<VectorField3>& trajectory);

/// Quadratic extrapolation in (rho - t) from the last three samples to t = rho.
Vec3 extrapolate_tip(const std::vector<TipSample>& series, double rho);

struct SweepMember {
  double nu = 0.0;
  std::vector<TipSample> tip;
  Vec3 tip_at_rho{};  // extrapolated u(rho-, 0)
  std::vector<PicardRecord> picard_history;
  double max_sup_norm = 0.0;  // sup over the trajectory of |u(t)|_inf
  double residual = 0.0;
  double bkm_integral = 0.0;
};

struct SweepReport {
  std::vector<double> nus;
  std::vector<VectorField3> final_fields;
  std::vector<double> pairwise_sup_gaps;  // gaps[k] = |final[k] - final[k+1]|_inf
  std::vector<SweepMember> members;
  int tip_component = 0;                  // i0 maximizing |h_i(0)|
  Vec3 extrapolated_tip{};                // Richardson in nu on the two smallest nus
  double extrapolated_tip_value = 0.0;    // extrapolated_tip[tip_component]
  bool completed = true;
  std::string abort_reason;
};

/// Runs solve for every nu (descending, at least 3). A divergence aborts the
/// sweep and returns what was computed so far with completed = false.
SweepReport inviscid_sweep(const SchemeConfig& base, const ConeChart& chart,
                           const VectorField3& h, const std::vector<double>& nus);

bool gaps_decreasing(const SweepReport& sweep);

struct CertificateReport {
  double c = 0.0;  // |h_{i0}(0)|
  int component = 0;
  double h_tip = 0.0;             // h_{i0}(0)
  double tip_value = 0.0;         // extrapolated u_{i0}(rho-, 0)
  double increment_at_tip = 0.0;  // |tip_value - h_tip|
  bool certified = false;
  std::string reason;
  std::optional<double> blowup_exponent;  // set only when certified
  double fitted_exponent = 0.0;           // slope of log|omega(t,0)| vs -log(rho - t)
  int fit_samples = 0;
  double nu_sweep_spread = 0.0;
};

/// Least-squares slope of log|u_i(t,0)/(rho - t)| against -log(rho - t) over
/// the last decade of (rho - t). Returns NaN with fewer than `min_samples`.
double fit_blowup_exponent(const std::vector<TipSample>& series, double rho, int component,
                           int* samples_used = nullptr, int min_samples = 8);

CertificateReport singularity_certificate(const SweepReport& sweep, const VectorField3& h,
                                          const ConeChart& chart);

struct DampingIntegral {
  double numeric = 0.0;
  double analytic = 0.0;
};

/// int_0^rho int_{(-(rho-s), rho-s)^3} C/(rho - s) dy ds against (8/3) C rho^3.
DampingIntegral damping_integral_bound(double rho, double sup_bound, int resolution);
DampingIntegral damping_integral_bound(const ConeChart& chart, double sup_bound, int resolution);

/// Trapezoid rule for int_0^T |omega(t)|_inf dt with omega = u/(rho - t).
double bkm_monitor(const std::vector<VectorField3>& trajectory, const ConeChart& chart);

/// Tricubic interpolation of a field at an arbitrary y; zero outside the grid.
Vec3 interpolate(const VectorField3& u, const Vec3& y);

struct Reconstruction {
  VectorField3 omega_x;
  VectorField3 v_x;
};

/// omega(t, x) = u(t, y(t, x))/(rho - t) on an x-space grid, v = Biot-Savart(omega).
Reconstruction reconstruct_vorticity_velocity(const VectorField3& u, const ConeChart& chart,
                                              double t, const Grid3& x_grid,
                                              Quadrature quadrature = Quadrature::direct_sum);

}  // namespace conevort
