#include "conevort/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "conevort/errors.hpp"

namespace conevort {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

void require_finite_x(const Vec3& x) {
  for (double xj : x) {
    if (!std::isfinite(xj)) {
      throw InputError("non-finite spatial coordinate");
    }
    if (std::abs(xj) > kMaxAbsX) {
      throw InputError("spatial coordinate exceeds |x| <= 1e12");
    }
  }
}

}  // namespace

ConeChart::ConeChart(double rho) : rho_(rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw InputError("rho must be positive and finite");
  }
}

void ConeChart::require_time(double t) const {
  if (!std::isfinite(t) || t < 0.0) {
    throw DomainError("time must be finite and non-negative");
  }
  if (t >= rho_) {
    throw DomainError("time t=" + std::to_string(t) + " is not below rho=" +
                      std::to_string(rho_));
  }
}

double ConeChart::sigma_of(double t) const {
  require_time(t);
  return t / std::sqrt((rho_ - t) * (rho_ + t));
}

double ConeChart::t_of(double sigma) const {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw DomainError("sigma must be finite and non-negative");
  }
  return rho_ * sigma / std::sqrt(1.0 + sigma * sigma);
}

double ConeChart::y_of(double t, double x) const {
  return (rho_ - t) * kTwoOverPi * std::atan(x);
}

double ConeChart::x_of(double t, double y) const {
  return std::tan(0.5 * std::numbers::pi * y / (rho_ - t));
}

ChartPoint ConeChart::forward_transform(double t, const Vec3& x) const {
  require_time(t);
  require_finite_x(x);
  ChartPoint p;
  p.sigma = sigma_of(t);
  for (std::size_t j = 0; j < 3; ++j) p.y[j] = y_of(t, x[j]);
  return p;
}

OriginalPoint ConeChart::inverse_transform(double sigma, const Vec3& y) const {
  OriginalPoint p;
  p.t = t_of(sigma);
  if (p.t >= rho_) {
    throw DomainError("sigma maps onto the tip time");
  }
  const double half_width = rho_ - p.t;
  for (std::size_t j = 0; j < 3; ++j) {
    if (!std::isfinite(y[j])) throw InputError("non-finite transformed coordinate");
    if (std::abs(y[j]) >= half_width) {
      throw OutsideConeError("transformed point outside the open cone cross-section");
    }
    p.x[j] = x_of(p.t, y[j]);
  }
  return p;
}

double ConeChart::mu_bar(double t) const {
  require_time(t);
  const double s = (rho_ - t) * (rho_ + t);
  return s * std::sqrt(s) / (rho_ * rho_);
}

double ConeChart::damping(double t) const {
  require_time(t);
  const double tau = t / rho_;
  const double one_plus = 1.0 + tau;
  return std::sqrt(1.0 - tau) * one_plus * std::sqrt(one_plus);
}

double ConeChart::dsigma_dt(double t) const {
  require_time(t);
  const double s = (rho_ - t) * (rho_ + t);
  return rho_ * rho_ / (s * std::sqrt(s));
}

TransformCoefficients ConeChart::coefficients_at(double t, const Vec3& x) const {
  require_time(t);
  require_finite_x(x);
  TransformCoefficients c;
  for (std::size_t j = 0; j < 3; ++j) {
    c.b_t[j] = -kTwoOverPi * std::atan(x[j]);
    c.b_spatial_diag[j] = kTwoOverPi / (1.0 + x[j] * x[j]);
  }
  c.mu_bar = mu_bar(t);
  c.damping = damping(t);
  c.dsigma_dt = dsigma_dt(t);
  return c;
}

bool ConeChart::cone_contains(double t, const Vec3& y) const {
  const double half_width = rho_ - t;
  if (!(half_width > 0.0)) return false;
  return std::all_of(y.begin(), y.end(),
                     [half_width](double yj) { return std::abs(yj) < half_width; });
}

double damping_supremum(double rho, std::size_t samples) {
  if (samples < 2) throw InputError("damping_supremum needs at least 2 samples");
  const ConeChart chart(rho);
  double best = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = rho * static_cast<double>(k) / static_cast<double>(samples);
    best = std::max(best, chart.damping(t));
  }
  return best;
}

}  // namespace conevort
