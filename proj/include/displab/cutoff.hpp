#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "displab/quadrature.hpp"

namespace displab {

/// Smooth dyadic cutoff.  The transition profile theta is 1 on [0, 1],
/// 0 on [2, inf) and in between the complement of the normalized integral
/// of the mollifier bump exp(-c/(x(1-x))); the annulus bump is
/// psi(zeta) = theta(|zeta|) - theta(2|zeta|), supported in 1/2 <= |zeta| <= 2,
/// and dyadic sums of psi telescope exactly through theta.
///
/// The transition is tabulated once at construction (cumulative
/// Gauss-Legendre integration of the bump) and evaluated by cubic Hermite
/// interpolation with the exact derivative at the knots; interpolation error
/// is at machine-precision level.  The clamped regions are exact, which
/// makes partition-of-unity sums exact wherever the telescoped endpoints
/// land in them.
class SpectralCutoff {
 public:
  explicit SpectralCutoff(double sharpness = 1.0) : sharpness_(sharpness) {
    if (!(sharpness > 0.0))
      throw std::invalid_argument("SpectralCutoff: sharpness must be positive");
    build_tables();
  }

  double sharpness() const { return sharpness_; }

  /// theta(rho): 1 for rho <= 1, 0 for rho >= 2, smooth monotone between.
  double profile(double rho) const {
    if (rho <= 1.0) return 1.0;
    if (rho >= 2.0) return 0.0;
    const double v = hermite(theta_, dtheta_, (rho - 1.0) * knots_per_unit_);
    return std::clamp(v, 0.0, 1.0);
  }

  /// d theta / d rho (exactly -bump(rho-1)/I in the transition).
  double profile_deriv(double rho) const {
    if (rho <= 1.0 || rho >= 2.0) return 0.0;
    return -bump(rho - 1.0) * inv_norm_;
  }

  /// psi(rho) = theta(rho) - theta(2 rho).
  double psi(double rho) const { return profile(rho) - profile(2.0 * rho); }

  double psi_deriv(double rho) const {
    return profile_deriv(rho) - 2.0 * profile_deriv(2.0 * rho);
  }

  /// psi as a function of u = rho^2; the hot path of kernel quadrature
  /// (avoids the square root).  Tabulated over [1/4, 4], zero outside.
  double psi_radius2(double u) const {
    if (u <= 0.25 || u >= 4.0) return 0.0;
    const double v = hermite(psi_u_, dpsi_u_, (u - 0.25) * uknots_per_unit_);
    return std::clamp(v, 0.0, 1.0);
  }

 private:
  double bump(double x) const {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(-sharpness_ / (x * (1.0 - x)));
  }

  static double hermite(const std::vector<double>& v,
                        const std::vector<double>& d, double pos) {
    const std::size_t i = static_cast<std::size_t>(pos);
    const double t = pos - static_cast<double>(i);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * v[i] + h10 * d[i] + h01 * v[i + 1] + h11 * d[i + 1];
  }

  void build_tables() {
    constexpr std::size_t kKnots = 8192;
    const double h = 1.0 / kKnots;
    knots_per_unit_ = static_cast<double>(kKnots);

    // Cumulative integral of the bump over [0,1] on the knot lattice.
    const auto& gl = gauss_legendre(12);
    std::vector<double> cum(kKnots + 1, 0.0);
    for (std::size_t i = 0; i < kKnots; ++i) {
      const double a = i * h, b = (i + 1) * h;
      double s = 0.0;
      for (std::size_t g = 0; g < gl.nodes.size(); ++g)
        s += gl.weights[g] * bump(0.5 * (a + b) + 0.5 * h * gl.nodes[g]);
      cum[i + 1] = cum[i] + 0.5 * h * s;
    }
    inv_norm_ = 1.0 / cum[kKnots];

    theta_.assign(kKnots + 1, 0.0);
    dtheta_.assign(kKnots + 1, 0.0);
    for (std::size_t i = 0; i <= kKnots; ++i) {
      theta_[i] = 1.0 - cum[i] * inv_norm_;
      dtheta_[i] = -bump(i * h) * inv_norm_ * h;  // d/d(pos), pos = x/h
    }
    theta_.front() = 1.0;
    theta_.back() = 0.0;

    // psi(sqrt(u)) over u in [1/4, 4].
    constexpr std::size_t kUKnots = 8192;
    const double uh = 3.75 / kUKnots;
    uknots_per_unit_ = 1.0 / uh;
    psi_u_.assign(kUKnots + 1, 0.0);
    dpsi_u_.assign(kUKnots + 1, 0.0);
    for (std::size_t i = 0; i <= kUKnots; ++i) {
      const double u = 0.25 + i * uh;
      const double rho = std::sqrt(u);
      psi_u_[i] = profile(rho) - profile(2.0 * rho);
      const double der =
          (profile_deriv(rho) - 2.0 * profile_deriv(2.0 * rho)) / (2.0 * rho);
      dpsi_u_[i] = der * uh;
    }
    psi_u_.front() = 0.0;
    psi_u_.back() = 0.0;
  }

  double sharpness_ = 1.0;
  double inv_norm_ = 1.0;
  double knots_per_unit_ = 1.0;
  double uknots_per_unit_ = 1.0;
  std::vector<double> theta_, dtheta_;
  std::vector<double> psi_u_, dpsi_u_;
};

inline SpectralCutoff build_cutoff(double sharpness = 1.0) {
  return SpectralCutoff(sharpness);
}

/// Dyadic band index j: psi_j(zeta) = psi(2^-j zeta) lives on
/// {2^(j-1) <= |zeta| <= 2^(j+1)}.
struct FrequencyBand {
  int j = 0;
};

}  // namespace displab
