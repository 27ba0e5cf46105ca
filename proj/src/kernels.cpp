#include "conevort/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "conevort/errors.hpp"
#include "conevort/parallel.hpp"

namespace conevort {

namespace {

constexpr double kInvFourPi = 0.25 / std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Sources in structure-of-arrays form: position and (weighted) strength.
struct SourceSet {
  std::vector<double> px, py, pz;
  std::vector<double> sx, sy, sz;

  void push(const Vec3& p, const Vec3& s) {
    px.push_back(p[0]);
    py.push_back(p[1]);
    pz.push_back(p[2]);
    sx.push_back(s[0]);
    sy.push_back(s[1]);
    sz.push_back(s[2]);
  }
  std::size_t size() const { return px.size(); }
};

// sum_s s_s x (target - p_s) / |target - p_s|^3, skipping coincident points.
Vec3 sum_kernel(const SourceSet& src, const Vec3& target) {
  double vx = 0.0, vy = 0.0, vz = 0.0;
  const std::size_t n = src.size();
  const double* px = src.px.data();
  const double* py = src.py.data();
  const double* pz = src.pz.data();
  const double* sx = src.sx.data();
  const double* sy = src.sy.data();
  const double* sz = src.sz.data();
  for (std::size_t s = 0; s < n; ++s) {
    const double dx = target[0] - px[s];
    const double dy = target[1] - py[s];
    const double dz = target[2] - pz[s];
    const double r2 = dx * dx + dy * dy + dz * dz;
    const double inv = r2 > 0.0 ? 1.0 / (r2 * std::sqrt(r2)) : 0.0;
    vx += (sy[s] * dz - sz[s] * dy) * inv;
    vy += (sz[s] * dx - sx[s] * dz) * inv;
    vz += (sx[s] * dy - sy[s] * dx) * inv;
  }
  return {vx, vy, vz};
}

}  // namespace

Vec3 biot_savart_kernel(const Vec3& x, const Vec3& h) {
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (r2 == 0.0) return {0.0, 0.0, 0.0};
  const double f = kInvFourPi / (r2 * std::sqrt(r2));
  return {(h[1] * x[2] - h[2] * x[1]) * f, (h[2] * x[0] - h[0] * x[2]) * f,
          (h[0] * x[1] - h[1] * x[0]) * f};
}

// Zero-padded periodic extension of size M = 2N per axis; kernel and sources
// are transformed once per apply, so the linear convolution is exact.
struct BiotSavartOperator::FftPlan {
  int n = 0;
  int m = 0;
  std::size_t real_size = 0;
  std::size_t spec_size = 0;
  std::array<std::vector<std::complex<double>>, 3> kernel_hat;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit FftPlan(const Grid3& grid) : n(grid.n()), m(2 * grid.n()) {
    real_size = static_cast<std::size_t>(m) * m * m;
    spec_size = static_cast<std::size_t>(m) * m * (m / 2 + 1);
    real_buf = fftw_alloc_real(real_size);
    spec_buf = fftw_alloc_complex(spec_size);
    {
      std::lock_guard lock(fftw_planner_mutex());
      forward = fftw_plan_dft_r2c_3d(m, m, m, real_buf, spec_buf, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_3d(m, m, m, spec_buf, real_buf, FFTW_ESTIMATE);
    }
    const double h = grid.spacing();
    const double cell = h * h * h;
    for (int c = 0; c < 3; ++c) {
      std::fill(real_buf, real_buf + real_size, 0.0);
      for (int a = -(n - 1); a <= n - 1; ++a) {
        for (int b = -(n - 1); b <= n - 1; ++b) {
          for (int d = -(n - 1); d <= n - 1; ++d) {
            if (a == 0 && b == 0 && d == 0) continue;
            const Vec3 off{a * h, b * h, d * h};
            const double r2 = off[0] * off[0] + off[1] * off[1] + off[2] * off[2];
            const double g = kInvFourPi * cell / (r2 * std::sqrt(r2));
            const std::size_t idx =
                (static_cast<std::size_t>((a + m) % m) * m + (b + m) % m) * m + (d + m) % m;
            real_buf[idx] = off[static_cast<std::size_t>(c)] * g;
          }
        }
      }
      fftw_execute(forward);
      kernel_hat[static_cast<std::size_t>(c)].assign(
          reinterpret_cast<std::complex<double>*>(spec_buf),
          reinterpret_cast<std::complex<double>*>(spec_buf) + spec_size);
    }
  }

  ~FftPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real_buf);
    fftw_free(spec_buf);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
};

BiotSavartOperator::BiotSavartOperator(const Grid3& grid, Quadrature quadrature)
    : grid_(grid), quadrature_(quadrature) {
  if (quadrature_ == Quadrature::fft_periodic) fft_ = std::make_unique<FftPlan>(grid_);
}

BiotSavartOperator::~BiotSavartOperator() = default;
BiotSavartOperator::BiotSavartOperator(BiotSavartOperator&&) noexcept = default;
BiotSavartOperator& BiotSavartOperator::operator=(BiotSavartOperator&&) noexcept = default;

VectorField3 BiotSavartOperator::apply(const VectorField3& omega) const {
  if (!(omega.grid() == grid_)) throw InputError("vorticity field is on a different grid");
  return quadrature_ == Quadrature::direct_sum ? apply_direct(omega) : apply_fft(omega);
}

VectorField3 BiotSavartOperator::apply_direct(const VectorField3& omega) const {
  const Grid3& g = grid_;
  const int n = g.n();
  const double cell = std::pow(g.spacing(), 3);
  SourceSet src;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const Vec3 w = omega.value(g.index(i, j, k));
        if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0) continue;
        src.push(g.node(i, j, k), {w[0] * cell, w[1] * cell, w[2] * cell});
      }
    }
  }
  VectorField3 v(g, omega.time_label());
  if (src.size() == 0) return v;
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx % n);
      const Vec3 s = sum_kernel(src, g.node(i, j, k));
      for (int c = 0; c < 3; ++c) v.at(c, idx) = kInvFourPi * s[static_cast<std::size_t>(c)];
    }
  });
  return v;
}

VectorField3 BiotSavartOperator::apply_fft(const VectorField3& omega) const {
  FftPlan& p = *fft_;
  const int n = p.n;
  const int m = p.m;
  std::array<std::vector<std::complex<double>>, 3> omega_hat;
  for (int c = 0; c < 3; ++c) {
    std::fill(p.real_buf, p.real_buf + p.real_size, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          p.real_buf[(static_cast<std::size_t>(i) * m + j) * m + k] =
              omega.at(c, grid_.index(i, j, k));
        }
      }
    }
    fftw_execute(p.forward);
    omega_hat[static_cast<std::size_t>(c)].assign(
        reinterpret_cast<std::complex<double>*>(p.spec_buf),
        reinterpret_cast<std::complex<double>*>(p.spec_buf) + p.spec_size);
  }
  VectorField3 v(grid_, omega.time_label());
  const double scale = 1.0 / static_cast<double>(p.real_size);
  auto* spec = reinterpret_cast<std::complex<double>*>(p.spec_buf);
  for (int c = 0; c < 3; ++c) {
    const auto a = static_cast<std::size_t>((c + 1) % 3);
    const auto b = static_cast<std::size_t>((c + 2) % 3);
    for (std::size_t s = 0; s < p.spec_size; ++s) {
      spec[s] = omega_hat[a][s] * p.kernel_hat[b][s] - omega_hat[b][s] * p.kernel_hat[a][s];
    }
    fftw_execute(p.backward);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          v.at(c, grid_.index(i, j, k)) =
              p.real_buf[(static_cast<std::size_t>(i) * m + j) * m + k] * scale;
        }
      }
    }
  }
  return v;
}

VectorField3 biot_savart_velocity(const VectorField3& omega, Quadrature quadrature) {
  return BiotSavartOperator(omega.grid(), quadrature).apply(omega);
}

VectorField3 transformed_kernel_apply(const VectorField3& u, const ConeChart& chart, double t,
                                      const TransformedKernelOptions& options) {
  if (!std::isfinite(t) || t < 0.0 || t >= chart.rho()) {
    throw DomainError("transformed kernel needs 0 <= t < rho");
  }
  const Grid3& g = u.grid();
  const int n = g.n();
  const double half_width = chart.rho() - t;
  const double h = g.spacing();

  // Per-axis node data: inside flag, x coordinate and 1D measure factor.
  // Only nodes whose whole cell lies in the cross-section carry quadrature
  // weight; dx/dy is unbounded at the cone boundary.
  std::vector<char> inside(static_cast<std::size_t>(n));
  std::vector<double> xs(static_cast<std::size_t>(n), 0.0);
  std::vector<double> jac(static_cast<std::size_t>(n), 0.0);
  const double axis_const = options.measure_constant ? 0.5 * std::numbers::pi : 1.0;
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double y = std::abs(g.coord(i));
    inside[ii] = y < half_width;
    if (!inside[ii]) continue;
    xs[ii] = chart.x_of(t, g.coord(i));
    if (y + 0.5 * h <= half_width) {
      jac[ii] = axis_const * (1.0 + xs[ii] * xs[ii]) / half_width * h;
    }
  }

  SourceSet src;
  std::vector<std::size_t> targets;
  for (int i = 0; i < n; ++i) {
    if (!inside[static_cast<std::size_t>(i)]) continue;
    for (int j = 0; j < n; ++j) {
      if (!inside[static_cast<std::size_t>(j)]) continue;
      for (int k = 0; k < n; ++k) {
        if (!inside[static_cast<std::size_t>(k)]) continue;
        const std::size_t idx = g.index(i, j, k);
        targets.push_back(idx);
        const Vec3 w = u.value(idx);
        if (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0) continue;
        if (jac[static_cast<std::size_t>(i)] == 0.0 || jac[static_cast<std::size_t>(j)] == 0.0 ||
            jac[static_cast<std::size_t>(k)] == 0.0) {
          continue;
        }
        const double weight = jac[static_cast<std::size_t>(i)] *
                              jac[static_cast<std::size_t>(j)] *
                              jac[static_cast<std::size_t>(k)];
        src.push({xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)],
                  xs[static_cast<std::size_t>(k)]},
                 {w[0] * weight, w[1] * weight, w[2] * weight});
      }
    }
  }

  VectorField3 out(g, t);
  out.set_cone_supported(true);
  if (src.size() == 0) return out;
  parallel_for(targets.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t ti = begin; ti < end; ++ti) {
      const std::size_t idx = targets[ti];
      const int i = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
      const int j = static_cast<int>((idx / n) % n);
      const int k = static_cast<int>(idx % n);
      const Vec3 x{xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)],
                   xs[static_cast<std::size_t>(k)]};
      const Vec3 s = sum_kernel(src, x);
      for (int c = 0; c < 3; ++c) out.at(c, idx) = kInvFourPi * s[static_cast<std::size_t>(c)];
    }
  });
  return out;
}

}  // namespace conevort
