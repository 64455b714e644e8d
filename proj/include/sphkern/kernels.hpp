#pragma once

// Isotropic kernel profiles K(x, y) = K_i(x . y) on S^m.

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/sphere_math.hpp"

namespace sphkern {

enum class ProfileKind { closed_form, power_series, eigen_series };

inline const char* to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::closed_form: return "closed_form";
    case ProfileKind::power_series: return "power_series";
    case ProfileKind::eigen_series: return "eigen_series";
  }
  return "?";
}

/// The isotropic part K_i of a kernel, held in one of three forms:
///  - closed_form:  an evaluator u -> K_i(u);
///  - power_series: coefficients b_0..b_T of sum_k b_k u^k;
///  - eigen_series: Mercer coefficients lambda_0..lambda_K on S^m, with
///    K_i(u) = sum_k lambda_k (d_k^m / omega_m) P_k^{(m-1)/2}(u).
/// Immutable once built.
class IsotropicProfile {
public:
  using Evaluator = std::function<double(double)>;

  static IsotropicProfile closed_form(std::string name, Evaluator f) {
    if (!f) throw DomainError("closed_form profile needs an evaluator");
    IsotropicProfile p(ProfileKind::closed_form, std::move(name));
    p.eval_ = std::move(f);
    return p;
  }

  static IsotropicProfile power_series(std::string name, std::vector<double> coeffs) {
    if (coeffs.empty()) throw DomainError("power_series profile needs coefficients");
    for (double c : coeffs) {
      if (!std::isfinite(c)) throw DomainError("power_series coefficient is not finite");
    }
    IsotropicProfile p(ProfileKind::power_series, std::move(name));
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  static IsotropicProfile eigen_series(std::string name, int m, std::vector<double> lambdas) {
    const SphereDim dim(m);
    if (lambdas.empty()) throw DomainError("eigen_series profile needs eigenvalues");
    for (double l : lambdas) {
      if (!std::isfinite(l) || l < 0.0) {
        throw DomainError("eigen_series eigenvalues must be finite and >= 0");
      }
    }
    IsotropicProfile p(ProfileKind::eigen_series, std::move(name));
    p.m_ = dim.value();
    p.coeffs_ = std::move(lambdas);
    return p;
  }

  ProfileKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  /// Power-series or eigen-series coefficients (empty for closed_form).
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  /// Sphere dimension an eigen_series profile is tied to (0 otherwise).
  int eigen_m() const noexcept { return m_; }

  double operator()(double u) const {
    detail::require(std::abs(u) <= 1.0, "profile_eval: |u| must be <= 1");
    switch (kind_) {
      case ProfileKind::closed_form:
        return eval_(u);
      case ProfileKind::power_series: {
        double acc = 0.0;
        for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * u + coeffs_[j];
        return acc;
      }
      case ProfileKind::eigen_series: {
        std::vector<double> p(coeffs_.size());
        ultraspherical_all(0.5 * (m_ - 1), u, p);
        const double inv_omega = 1.0 / surface_volume(m_);
        double acc = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
          acc += coeffs_[k] * static_cast<double>(harmonic_dim(m_, static_cast<int>(k))) *
                 inv_omega * p[k];
        }
        return acc;
      }
    }
    return 0.0;
  }

private:
  IsotropicProfile(ProfileKind kind, std::string name)
      : kind_(kind), name_(std::move(name)) {}

  ProfileKind kind_;
  std::string name_;
  Evaluator eval_;
  std::vector<double> coeffs_;
  int m_ = 0;
};

inline double profile_eval(const IsotropicProfile& p, double u) { return p(u); }

inline IsotropicProfile constant_profile(double c) {
  return IsotropicProfile::power_series("constant", {c});
}

/// K_i(u) = u.
inline IsotropicProfile linear_profile() {
  return IsotropicProfile::power_series("linear", {0.0, 1.0});
}

/// Gaussian-like kernel exp(-2 sigma^{-2} (1 - x.y)) on S^m.
class GaussianKernel {
public:
  GaussianKernel(int m, double sigma) : m_(SphereDim(m).value()), sigma_(sigma) {
    if (!(sigma > 0.0)) throw DomainError("GaussianKernel: sigma must be > 0");
  }

  int m() const noexcept { return m_; }
  double sigma() const noexcept { return sigma_; }
  /// Exponent rate 2 / sigma^2.
  double rate() const noexcept { return 2.0 / (sigma_ * sigma_); }

  double operator()(double u) const { return std::exp(-rate() * (1.0 - u)); }

  IsotropicProfile profile() const {
    const double z = rate();
    return IsotropicProfile::closed_form(
        "gaussian", [z](double u) { return std::exp(-z * (1.0 - u)); });
  }

  /// Taylor coefficients e^{-z} z^j / j!, truncated once they drop below
  /// 1e-300 past the peak at j ~ z.
  IsotropicProfile power_profile() const {
    const double z = rate();
    const double lz = std::log(z);
    std::vector<double> b;
    for (int j = 0;; ++j) {
      const double lb = -z + j * lz - log_gamma(j + 1.0);
      if (j > z && lb < std::log(1e-300)) break;
      b.push_back(std::exp(lb));
    }
    return IsotropicProfile::power_series("gaussian", std::move(b));
  }

private:
  int m_;
  double sigma_;
};

/// e^{-2/sigma^2} sigma^{m-1} I_{k+(m-1)/2}(2/sigma^2) Gamma((m+1)/2): the
/// eigenvalue for the normalized surface measure sigma_m / omega_m.
inline double gaussian_eigenvalue_normalized(int m, double sigma, int k) {
  const SphereDim dim(m);
  if (!(sigma > 0.0)) throw DomainError("gaussian eigenvalue: sigma must be > 0");
  detail::require(k >= 0, "gaussian eigenvalue: degree must be >= 0");
  const double z = 2.0 / (sigma * sigma);
  const double nu = k + 0.5 * (m - 1);
  return std::exp(-z + (m - 1) * std::log(sigma) + log_gamma(0.5 * (m + 1))) *
         modified_bessel_i(nu, z);
}

/// Funk–Hecke eigenvalue of the Gaussian kernel's integral operator on
/// L^2(S^m, sigma_m): omega_m times the normalized-measure value.
inline double gaussian_eigenvalue_closed(int m, double sigma, int k) {
  return surface_volume(m) * gaussian_eigenvalue_normalized(m, sigma, k);
}

/// Dot-power kernel 1 + sum_{k>=1} b_k (x.y)^k with
/// b_k = 2^{k+1} k^{(m-1)/2} / k^{1 + k eps/m}, eps > m/2.
class DotPowerKernel {
public:
  DotPowerKernel(int m, double eps) : m_(SphereDim(m).value()), eps_(eps) {
    if (!(eps > 0.5 * m)) {
      throw DomainError("DotPowerKernel: eps must exceed m/2");
    }
    coeffs_.push_back(1.0);
    double sum = 1.0;
    for (int k = 1;; ++k) {
      const double b = coefficient(k);
      coeffs_.push_back(b);
      sum += b;
      if (b < 1e-16 * sum) break;
      if (k > 100000) throw NumericalError("DotPowerKernel: truncation did not terminate");
    }
  }

  int m() const noexcept { return m_; }
  double eps() const noexcept { return eps_; }
  /// Truncation degree T.
  int truncation() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  /// b_k evaluated in log space.
  double coefficient(int k) const { return dotpower_coefficient(m_, eps_, k); }

  static double dotpower_coefficient(int m, double eps, int k) {
    detail::require(k >= 1, "dotpower_coefficient: k must be >= 1");
    const double lk = std::log(static_cast<double>(k));
    return std::exp((k + 1) * std::numbers::ln2 + 0.5 * (m - 1) * lk -
                    (1.0 + k * eps / m) * lk);
  }

  IsotropicProfile profile() const {
    return IsotropicProfile::power_series("dotpower", coeffs_);
  }

private:
  int m_;
  double eps_;
  std::vector<double> coeffs_;
};

inline double dotpower_coefficient(int m, double eps, int k) {
  return DotPowerKernel::dotpower_coefficient(m, eps, k);
}

/// k^{2 eps} b_k / b_{k-1} for k = 2..kmax, as a sequence indexed from k = 2.
inline std::vector<double> dotpower_ratio_sequence(int m, double eps, int kmax) {
  std::vector<double> out;
  for (int k = 2; k <= kmax; ++k) {
    const double lk = std::log(static_cast<double>(k));
    const double lratio = std::log(dotpower_coefficient(m, eps, k)) -
                          std::log(dotpower_coefficient(m, eps, k - 1));
    out.push_back(std::exp(2.0 * eps * lk + lratio));
  }
  return out;
}

/// ||K||_1 = (omega_{m-1} / omega_m) int |K_i(u)| (1-u^2)^{(m-2)/2} du.
inline double l1_norm(const IsotropicProfile& p, int m, const QuadratureRule& q) {
  const SphereDim dim(m);
  if (q.m() != m) throw DimensionError("l1_norm: quadrature rule built for another m");
  const double integral = q.integrate([&](double u) { return std::abs(p(u)); });
  return surface_volume(m - 1) / surface_volume(m) * integral;
}

}  // namespace sphkern
