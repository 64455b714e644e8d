#pragma once

// Special functions and spherical geometry on S^m: Gegenbauer polynomials in
// the P_k(1) = 1 normalization, harmonic space dimensions, sphere and cap
// volumes, Gauss–Gegenbauer quadrature and the modified Bessel function I_nu.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/integrate.hpp"
#include "sphkern/symmetric_eigen.hpp"

namespace sphkern {

/// Dimension parameter of the sphere S^m in R^{m+1}.
class SphereDim {
public:
  explicit SphereDim(int m) : m_(m) {
    detail::require(m >= 2, "sphere dimension m must be >= 2, got " +
                                std::to_string(m));
  }
  int value() const noexcept { return m_; }
  /// Gegenbauer index (m-1)/2 of the zonal harmonics on S^m.
  double gegenbauer_index() const noexcept { return 0.5 * (m_ - 1); }
  friend bool operator==(SphereDim, SphereDim) = default;

private:
  int m_;
};

/// log Gamma(x) for x > 0, without touching the global signgam.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

/// omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2), the volume of S^m.
inline double surface_volume(int m) {
  detail::require(m >= 1, "surface_volume: m must be >= 1");
  if (m == 1) return 2.0 * std::numbers::pi;
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("harmonic_dim: 64-bit overflow");
  }
  return r;
}

/// Exact binomial coefficient C(n, r); every partial product is itself a
/// binomial coefficient so the division is exact.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t g = std::gcd(acc, i);
    acc = checked_mul(acc / g, (n - r + i) / (i / g));
  }
  return acc;
}

}  // namespace detail

/// d_k^m = dim H_k^m = C(k+m, m) - C(k+m-2, m).
inline std::uint64_t harmonic_dim(int m, int k) {
  detail::require(m >= 2, "harmonic_dim: m must be >= 2");
  detail::require(k >= 0, "harmonic_dim: degree k must be >= 0");
  const auto km = static_cast<std::uint64_t>(k + m);
  const std::uint64_t all = detail::binomial(km, m);
  const std::uint64_t lower = k >= 2 ? detail::binomial(km - 2, m) : 0;
  return all - lower;
}

/// Normalized ultraspherical polynomial P_k^lambda(u) with P_k(1) = 1,
/// lambda >= 0 (lambda = 0 gives Chebyshev T_k).
inline double ultraspherical(double lambda, int k, double u) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = u;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * (j + lambda)) * u * cur - j * prev) /
                        (j + 2.0 * lambda);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// All degrees 0..out.size()-1 of P_k^lambda(u) in one recurrence pass.
inline void ultraspherical_all(double lambda, double u, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = u;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    out[j + 1] = ((2.0 * (j + lambda)) * u * out[j] - j * out[j - 1]) /
                 (j + 2.0 * lambda);
  }
}

/// P_k^{(m-1)/2}(u), the zonal polynomial of degree k on S^m.
inline double gegenbauer(int m, int k, double u) {
  detail::require(m >= 2, "gegenbauer: m must be >= 2");
  detail::require(k >= 0, "gegenbauer: degree must be >= 0");
  detail::require(std::abs(u) <= 1.0, "gegenbauer: |u| must be <= 1");
  return ultraspherical(0.5 * (m - 1), k, u);
}

/// Degrees 0..K of P_k^{(m-1)/2}(u).
inline std::vector<double> gegenbauer_all(int m, int K, double u) {
  detail::require(m >= 2, "gegenbauer_all: m must be >= 2");
  detail::require(K >= 0, "gegenbauer_all: degree must be >= 0");
  detail::require(std::abs(u) <= 1.0, "gegenbauer_all: |u| must be <= 1");
  std::vector<double> out(static_cast<std::size_t>(K) + 1);
  ultraspherical_all(0.5 * (m - 1), u, out);
  return out;
}

/// 1 - P_k^{(m-1)/2}(cos t) for k = 0..out.size()-1. The recurrence runs on
/// the defect itself with 1 - cos t = 2 sin^2(t/2), so small t loses no digits.
inline void gegenbauer_defect_all(int m, double t, std::span<double> out) {
  detail::require(m >= 2, "gegenbauer_defect_all: m must be >= 2");
  if (out.empty()) return;
  const double lambda = 0.5 * (m - 1);
  const double h = std::sin(0.5 * t);
  const double s = 2.0 * h * h;
  out[0] = 0.0;
  if (out.size() == 1) return;
  out[1] = s;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    const double q = out[j];
    out[j + 1] = (2.0 * (j + lambda) * (q + s * (1.0 - q)) - j * out[j - 1]) / (j + 2.0 * lambda);
  }
}

/// Gauss rule for the weight (1-u^2)^{(m-2)/2} on [-1, 1].
class QuadratureRule {
public:
  QuadratureRule(int m, std::vector<double> nodes, std::vector<double> weights)
      : m_(m), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

  int m() const noexcept { return m_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(nodes_[i]);
    return acc;
  }

private:
  int m_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Integral of (1-u^2)^{(m-2)/2} over [-1, 1], i.e. omega_m / omega_{m-1}.
inline double gegenbauer_weight_mass(int m) {
  const double a = 0.5 * (m - 1);  // lambda
  return std::exp(0.5 * std::log(std::numbers::pi) + log_gamma(a + 0.5) -
                  log_gamma(a + 1.0));
}

namespace detail {

/// Off-diagonal entry b_k (k >= 1) of the Jacobi matrix of the orthonormal
/// polynomials for weight (1-u^2)^{lambda-1/2}.
inline double jacobi_offdiag(double lambda, int k) {
  if (k == 1) return std::sqrt(0.5 / (1.0 + lambda));
  const double num = k * (k + 2.0 * lambda - 1.0);
  const double den = 4.0 * (k + lambda) * (k + lambda - 1.0);
  return std::sqrt(num / den);
}

}  // namespace detail

/// N-node Gauss–Gegenbauer rule, exact for polynomials of degree <= 2N-1
/// against (1-u^2)^{(m-2)/2}. Nodes are Jacobi-matrix eigenvalues polished by
/// Newton's method on the orthonormal recurrence; weights come from the
/// Christoffel function. Any m >= 1 is accepted (m = 1: Chebyshev weight).
inline QuadratureRule gegenbauer_quadrature(int m, int N) {
  detail::require(m >= 1, "gegenbauer_quadrature: m must be >= 1");
  detail::require(N >= 1, "gegenbauer_quadrature: N must be >= 1");
  const double lambda = 0.5 * (m - 1);
  const double p0 = 1.0 / std::sqrt(gegenbauer_weight_mass(m));

  std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
  for (int k = 1; k <= N; ++k) b[k] = detail::jacobi_offdiag(lambda, k);

  // p_N(x) and p_N'(x) for the orthonormal family
  auto eval = [&](double x, double& p, double& dp) {
    double pm1 = 0.0, p_k = p0, dpm1 = 0.0, dp_k = 0.0;
    for (int k = 0; k < N; ++k) {
      const double pn = (x * p_k - b[k] * pm1) / b[k + 1];
      const double dpn = (p_k + x * dp_k - b[k] * dpm1) / b[k + 1];
      pm1 = p_k;
      p_k = pn;
      dpm1 = dp_k;
      dp_k = dpn;
    }
    p = p_k;
    dp = dp_k;
  };

  // Golub–Welsch eigenvalues seed the Newton polish on p_N.
  std::vector<double> diag(static_cast<std::size_t>(N), 0.0);
  std::vector<double> off(b.begin() + 1, b.begin() + N);
  std::vector<double> nodes = tridiagonal_eigenvalues(diag, off);
  for (int i = 0; i < N; ++i) {
    double x = nodes[i];
    double last_step = 1.0;
    for (int it = 0; it < 20; ++it) {
      double p = 0.0, dp = 0.0;
      eval(x, p, dp);
      if (dp == 0.0) break;
      const double dx = p / dp;
      const double step = std::abs(dx);
      // stop at 1e-15, or once rounding noise stops the steps from shrinking
      if (step >= last_step) break;
      x -= dx;
      if (step <= 1e-15) break;
      last_step = step;
    }
    if (!(std::abs(x) < 1.0)) {
      std::ostringstream os;
      os << "gegenbauer_quadrature: node " << i << " of " << N
         << " left (-1, 1) (m=" << m << ")";
      throw NumericalError(os.str());
    }
    nodes[i] = x;
  }
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i] < nodes[i + 1])) {
      throw NumericalError("gegenbauer_quadrature: duplicate nodes");
    }
  }

  std::vector<double> weights(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    double pm1 = 0.0, p_k = p0, sum = p0 * p0;
    for (int k = 0; k + 1 < N; ++k) {
      const double pn = (x * p_k - b[k] * pm1) / b[k + 1];
      pm1 = p_k;
      p_k = pn;
      sum += p_k * p_k;
    }
    weights[i] = 1.0 / sum;
  }
  return QuadratureRule(m, std::move(nodes), std::move(weights));
}

/// Modified Bessel function of the first kind by its ascending series.
inline double modified_bessel_i(double nu, double x) {
  detail::require(x > 0.0, "modified_bessel_i: x must be > 0");
  detail::require(nu >= 0.0, "modified_bessel_i: order must be >= 0");
  const double half = 0.5 * x;
  const double q = half * half;
  double term = std::exp(nu * std::log(half) - log_gamma(nu + 1.0));
  double sum = term;
  for (int j = 1; j < 100000; ++j) {
    term *= q / (j * (nu + j));
    sum += term;
    if (term < 1e-18 * sum) return sum;
  }
  throw NumericalError("modified_bessel_i: series did not converge");
}

namespace detail {

inline void require_open_angle(double t, const char* who) {
  if (!(t > 0.0 && t < std::numbers::pi)) {
    std::ostringstream os;
    os << who << ": t must lie in (0, pi), got " << t;
    throw DomainError(os.str());
  }
}

/// 20-point Gauss–Legendre rule, built once.
inline const QuadratureRule& legendre20() {
  static const QuadratureRule rule = gegenbauer_quadrature(2, 20);
  return rule;
}

/// Composite Gauss–Legendre on [a, b] with panels no wider than 0.5; for
/// entire integrands such as sin^j this is exact to rounding.
template <class F>
double gauss_legendre_composite(F&& f, double a, double b) {
  const auto& rule = legendre20();
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      acc += rule.weights()[i] * f(mid + 0.5 * h * rule.nodes()[i]);
    }
  }
  return 0.5 * h * acc;
}

}  // namespace detail

/// R_m(t) = omega_{m-1} (sin t)^{m-1}: volume of the rim {x.y = cos t}.
inline double rim_volume(int m, double t) {
  detail::require(m >= 2, "rim_volume: m must be >= 2");
  detail::require_open_angle(t, "rim_volume");
  return surface_volume(m - 1) * std::pow(std::sin(t), m - 1);
}

/// C_m(t) = int_0^t R_m(s) ds, the volume of a cap of angular radius t.
/// Defined on [0, pi]; C_m(pi) = omega_m.
inline double cap_volume(int m, double t) {
  detail::require(m >= 2, "cap_volume: m must be >= 2");
  detail::require(t >= 0.0 && t <= std::numbers::pi,
                  "cap_volume: t must lie in [0, pi]");
  if (t == 0.0) return 0.0;
  return surface_volume(m - 1) *
         detail::gauss_legendre_composite(
             [m](double s) { return std::pow(std::sin(s), m - 1); }, 0.0, t);
}

/// D_m(t) = int_0^t C_m(s) / R_m(s) ds, the Steklov normalizer. The
/// integrand behaves like s/m at 0 and like (pi-s)^{1-m} at pi, so D_m is
/// finite only on (0, pi).
inline double steklov_normalizer(int m, double t) {
  detail::require(m >= 2, "steklov_normalizer: m must be >= 2");
  detail::require_open_angle(t, "steklov_normalizer");
  const double inv_omega = 1.0 / surface_volume(m - 1);
  auto ratio = [m, inv_omega](double s) {
    if (s <= 0.0) return 0.0;
    return cap_volume(m, s) * inv_omega / std::pow(std::sin(s), m - 1);
  };
  SimpsonOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-12;
  opt.min_panels = 8;
  return adaptive_simpson(ratio, 0.0, t, opt);
}

struct CapFunctions {
  double rim;     ///< R_m(t)
  double cap;     ///< C_m(t)
  double steklov; ///< D_m(t)
};

inline CapFunctions cap_functions(int m, double t) {
  detail::require_open_angle(t, "cap_functions");
  return {rim_volume(m, t), cap_volume(m, t), steklov_normalizer(m, t)};
}

}  // namespace sphkern
