#pragma once

// The three rotation-invariant smoothing families on S^m (rim shifts, cap
// averages, Steklov means) described through their multipliers mu_t^k.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/integrate.hpp"
#include "sphkern/sphere_math.hpp"

namespace sphkern {

enum class Family { shifting, caps, steklov };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::shifting: return "shifting";
    case Family::caps: return "caps";
    case Family::steklov: return "steklov";
  }
  return "?";
}

inline std::optional<Family> parse_family(std::string_view s) {
  if (s == "shifting") return Family::shifting;
  if (s == "caps") return Family::caps;
  if (s == "steklov") return Family::steklov;
  return std::nullopt;
}

/// A multiplier family on S^m together with the structural description
///   mu_t^k = c_{k,m} v_m(t)^{-1} P^beta_{alpha(k)}(cos t) (sin t)^gamma
/// used by the finite-rank construction. P is normalized to P(1) = 1
/// throughout, which makes c_{k,m} = omega_{m-1}/m for cap averages.
class MultiplierFamily {
public:
  MultiplierFamily(Family family, int m) : family_(family), m_(SphereDim(m).value()) {}

  Family family() const noexcept { return family_; }
  int m() const noexcept { return m_; }

  /// Gegenbauer index beta of the structural form.
  double beta() const noexcept {
    return family_ == Family::shifting ? 0.5 * (m_ - 1) : 0.5 * (m_ + 1);
  }
  /// Sine exponent gamma.
  double gamma() const noexcept { return family_ == Family::shifting ? 0.0 : m_; }
  /// Degree map alpha(k); -1 where undefined (k = 0 for caps/steklov).
  int alpha(int k) const noexcept { return family_ == Family::shifting ? k : k - 1; }
  /// Inverse degree map: the largest k with alpha(k) <= degree.
  int alpha_inverse(int degree) const noexcept {
    return family_ == Family::shifting ? degree : degree + 1;
  }
  /// c_{k,m}.
  double c(int /*k*/) const {
    return family_ == Family::shifting ? 1.0 : surface_volume(m_ - 1) / m_;
  }
  /// Whether mu_t^k really has the structural product form. The Steklov mean
  /// is (1 - P_k(cos t)) / (k(k+m-1) D_m(t)), which does not.
  bool product_form() const noexcept { return family_ != Family::steklov; }

  /// r = 2 beta - gamma for the product-form families; the Steklov family
  /// uses r = m.
  int auto_r() const noexcept {
    switch (family_) {
      case Family::shifting: return m_ - 1;
      case Family::caps: return 1;
      case Family::steklov: return m_;
    }
    return 0;
  }

  /// Asymptotic exponent of v_m(t) ~ t^{c(m)} as t -> 0. Shifting: 0, caps: m;
  /// for Steklov D_m(t) ~ t^2 / (2m), so 2 (compare fit_normalizer_exponent).
  double normalizer_exponent() const noexcept {
    switch (family_) {
      case Family::shifting: return 0.0;
      case Family::caps: return m_;
      case Family::steklov: return 2.0;
    }
    return 0.0;
  }

private:
  Family family_;
  int m_;
};

/// v_m(t): 1, C_m(t) or D_m(t).
inline double normalizer_v(const MultiplierFamily& f, double t) {
  detail::require_open_angle(t, "normalizer_v");
  switch (f.family()) {
    case Family::shifting: return 1.0;
    case Family::caps: return cap_volume(f.m(), t);
    case Family::steklov: return steklov_normalizer(f.m(), t);
  }
  return 1.0;
}

/// mu_t^k v_m(t) without forming v_m: the quantity integrated by the
/// approximation operators. Valid on [0, pi] (0 at the ends where v_m vanishes).
inline double weighted_multiplier(const MultiplierFamily& f, double t, int k) {
  const int m = f.m();
  const double x = std::cos(t);
  switch (f.family()) {
    case Family::shifting:
      return ultraspherical(0.5 * (m - 1), k, x);
    case Family::caps:
      if (k == 0) return cap_volume(m, t);
      return surface_volume(m - 1) / m * std::pow(std::sin(t), m) *
             ultraspherical(0.5 * (m + 1), k - 1, x);
    case Family::steklov:
      if (k == 0) return steklov_normalizer(m, t);
      {
        std::vector<double> q(static_cast<std::size_t>(k) + 1);
        gegenbauer_defect_all(m, t, q);
        return q[k] / (static_cast<double>(k) * (k + m - 1));
      }
  }
  return 0.0;
}

/// mu_t^k for t in (0, pi).
inline double multiplier(const MultiplierFamily& f, double t, int k) {
  detail::require_open_angle(t, "multiplier");
  detail::require(k >= 0, "multiplier: degree must be >= 0");
  if (k == 0) return 1.0;
  switch (f.family()) {
    case Family::shifting:
      return weighted_multiplier(f, t, k);
    case Family::caps:
      return weighted_multiplier(f, t, k) / cap_volume(f.m(), t);
    case Family::steklov:
      return weighted_multiplier(f, t, k) / steklov_normalizer(f.m(), t);
  }
  return 0.0;
}

/// mu_t^k for k = 0..kmax, sharing one normalizer evaluation.
inline std::vector<double> multipliers(const MultiplierFamily& f, double t, int kmax) {
  detail::require_open_angle(t, "multipliers");
  detail::require(kmax >= 0, "multipliers: kmax must be >= 0");
  const int m = f.m();
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
  const double x = std::cos(t);
  switch (f.family()) {
    case Family::shifting:
      ultraspherical_all(0.5 * (m - 1), x, out);
      break;
    case Family::caps: {
      out[0] = 1.0;
      if (kmax == 0) break;
      std::vector<double> p(static_cast<std::size_t>(kmax));
      ultraspherical_all(0.5 * (m + 1), x, p);
      const double scale =
          surface_volume(m - 1) / m * std::pow(std::sin(t), m) / cap_volume(m, t);
      for (int k = 1; k <= kmax; ++k) out[k] = scale * p[k - 1];
      break;
    }
    case Family::steklov: {
      std::vector<double> q(out.size());
      gegenbauer_defect_all(m, t, q);
      const double d = steklov_normalizer(m, t);
      out[0] = 1.0;
      for (int k = 1; k <= kmax; ++k) {
        out[k] = q[k] / (static_cast<double>(k) * (k + m - 1) * d);
      }
      break;
    }
  }
  return out;
}

/// Cap multiplier from its defining integral,
/// (omega_{m-1} / C_m(t)) int_0^t P_k(cos h) (sin h)^{m-1} dh.
inline double caps_multiplier_integral(int m, double t, int k) {
  const SphereDim dim(m);
  detail::require_open_angle(t, "caps_multiplier_integral");
  detail::require(k >= 0, "caps_multiplier_integral: degree must be >= 0");
  const double lambda = dim.gegenbauer_index();
  auto integrand = [&](double h) {
    return ultraspherical(lambda, k, std::cos(h)) * std::pow(std::sin(h), m - 1);
  };
  const double cap = cap_volume(m, t);
  const double omega = surface_volume(m - 1);
  SimpsonOptions opt;
  opt.abs_tol = 1e-13 * cap / omega;
  opt.min_panels = 16 + 2 * k;
  return omega * adaptive_simpson(integrand, 0.0, t, opt) / cap;
}

/// Steklov multiplier from its definition as a C_m/R_m-weighted average of cap
/// multipliers: D_m(t)^{-1} int_0^t (C_m(s)/R_m(s)) mu_{Z_s}^k ds.
inline double steklov_multiplier_integral(int m, double t, int k) {
  const MultiplierFamily caps(Family::caps, m);
  detail::require_open_angle(t, "steklov_multiplier_integral");
  detail::require(k >= 0, "steklov_multiplier_integral: degree must be >= 0");
  const double inv_omega = 1.0 / surface_volume(m - 1);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double ratio = cap_volume(m, s) * inv_omega / std::pow(std::sin(s), m - 1);
    return ratio * multiplier(caps, s, k);
  };
  SimpsonOptions opt;
  opt.abs_tol = 1e-14;
  opt.min_panels = 16 + 2 * k;
  return adaptive_simpson(integrand, 0.0, t, opt) / steklov_normalizer(m, t);
}

/// {lambda_k mu_t^k}: coefficients of K(x, .) * mu_t for an isotropic kernel.
inline std::vector<double> convolve_coefficients(std::span<const double> lambdas,
                                                 const MultiplierFamily& f, double t) {
  if (lambdas.empty()) return {};
  const auto mu = multipliers(f, t, static_cast<int>(lambdas.size()) - 1);
  std::vector<double> out(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) out[k] = lambdas[k] * mu[k];
  return out;
}

struct ExponentFit {
  double exponent;
  double amplitude;
};

/// Least-squares fit of log v_m(t) = c log t + log a over log-spaced
/// t in [t_lo, t_hi].
inline ExponentFit fit_normalizer_exponent(const MultiplierFamily& f, double t_lo = 1e-3,
                                           double t_hi = 1e-1, int points = 20) {
  detail::require(points >= 2 && t_lo > 0.0 && t_hi > t_lo,
                  "fit_normalizer_exponent: bad grid");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double lt = std::log(t_lo) + (std::log(t_hi) - std::log(t_lo)) * i / (points - 1);
    const double lv = std::log(normalizer_v(f, std::exp(lt)));
    sx += lt;
    sy += lv;
    sxx += lt * lt;
    sxy += lt * lv;
  }
  const double n = points;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  return {slope, std::exp(icpt)};
}

}  // namespace sphkern
