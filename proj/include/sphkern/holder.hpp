#pragma once

// Numerical check of the (mu_t, B, rho)-Hölder condition
//   |(K(x, .) * mu_t)(y) - K(x, y)| <= B t^rho
// for isotropic kernels, where the left side depends on x.y = u only.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/kernels.hpp"
#include "sphkern/multipliers.hpp"
#include "sphkern/parallel.hpp"
#include "sphkern/spectra.hpp"
#include "sphkern/sphere_math.hpp"

namespace sphkern {

/// Chebyshev–Lobatto points cos(pi j / (N-1)), j = 0..N-1, on [-1, 1].
inline std::vector<double> chebyshev_grid(int points = 201) {
  detail::require(points >= 2, "chebyshev_grid: need at least 2 points");
  std::vector<double> u(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) u[j] = std::cos(std::numbers::pi * j / (points - 1));
  u.front() = 1.0;
  u.back() = -1.0;
  return u;
}

/// count log-spaced points from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int count) {
  detail::require(lo > 0.0 && hi > lo, "log_grid: need 0 < lo < hi");
  detail::require(count >= 2, "log_grid: need at least 2 points");
  std::vector<double> t(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
  t.front() = lo;
  t.back() = hi;
  return t;
}

/// max_u |sum_k lambda_k (d_k / omega_m) (mu^k - 1) P_k(u)| for a given
/// multiplier sequence mu^0..mu^kmax.
inline double holder_deviation_from(const Spectrum& s, std::span<const double> mu,
                                    std::span<const double> ugrid) {
  const SphereDim dim(s.m());
  if (ugrid.empty()) throw DomainError("holder_deviation: ugrid is empty");
  if (mu.size() < static_cast<std::size_t>(s.kmax()) + 1) {
    throw DimensionError("holder_deviation: multiplier sequence shorter than the spectrum");
  }
  const std::size_t K1 = static_cast<std::size_t>(s.kmax()) + 1;
  const double inv_omega = 1.0 / surface_volume(dim.value());
  std::vector<double> coef(K1, 0.0);
  for (const auto& e : s.entries()) {
    coef[e.k] = e.lambda * static_cast<double>(e.multiplicity) * inv_omega * (mu[e.k] - 1.0);
  }
  std::vector<double> p(K1);
  double best = 0.0;
  for (double u : ugrid) {
    detail::require(std::abs(u) <= 1.0, "holder_deviation: ugrid values must lie in [-1, 1]");
    ultraspherical_all(dim.gegenbauer_index(), u, p);
    double acc = 0.0;
    for (std::size_t k = 0; k < K1; ++k) acc += coef[k] * p[k];
    best = std::max(best, std::abs(acc));
  }
  return best;
}

inline double holder_deviation(const Spectrum& s, const MultiplierFamily& f, double t,
                               std::span<const double> ugrid) {
  if (f.m() != s.m()) throw DimensionError("holder_deviation: family and spectrum differ in m");
  const auto mu = multipliers(f, t, s.kmax());
  return holder_deviation_from(s, mu, ugrid);
}

struct HolderPoint {
  double t;
  double deviation;
  double fitted;  ///< b_hat t^rho_hat (NaN for excluded points)
};

struct HolderFit {
  double rho_hat = 0.0;
  double b_hat = 0.0;
  double residual = 0.0;  ///< max |log deviation - fitted line|
  std::pair<double, double> t_range;
  std::vector<double> excluded;  ///< t values with zero deviation
  std::vector<HolderPoint> points;
};

/// Least-squares line through (log t, log deviation). Points with zero
/// deviation are excluded and listed.
inline HolderFit fit_power_law(std::span<const double> ts, std::span<const double> devs) {
  if (ts.size() != devs.size()) throw DimensionError("fit_power_law: size mismatch");
  if (ts.size() < 5) throw DomainError("fit_power_law: need at least 5 t values");
  const auto [lo, hi] = std::minmax_element(ts.begin(), ts.end());
  if (!(*lo > 0.0 && *hi < std::numbers::pi)) {
    throw DomainError("fit_power_law: t values must lie in (0, pi)");
  }
  if (*hi < 10.0 * *lo) throw DomainError("fit_power_law: t values must span a decade");

  HolderFit fit;
  fit.t_range = {*lo, *hi};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(devs[i] > 0.0)) {
      fit.excluded.push_back(ts[i]);
      continue;
    }
    const double x = std::log(ts[i]);
    const double y = std::log(devs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2) {
    throw NumericalError("fit_power_law: deviation vanishes on the grid; exponent undefined");
  }
  const double n = used;
  fit.rho_hat = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - fit.rho_hat * sx) / n;
  fit.b_hat = std::exp(icpt);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    HolderPoint pt{ts[i], devs[i], std::numeric_limits<double>::quiet_NaN()};
    if (devs[i] > 0.0) {
      const double line = icpt + fit.rho_hat * std::log(ts[i]);
      pt.fitted = std::exp(line);
      fit.residual = std::max(fit.residual, std::abs(std::log(devs[i]) - line));
    }
    fit.points.push_back(pt);
  }
  return fit;
}

/// Deviation on tgrid (in parallel) followed by fit_power_law.
inline HolderFit estimate_exponent(const Spectrum& s, const MultiplierFamily& f,
                                   std::span<const double> tgrid,
                                   std::span<const double> ugrid) {
  std::vector<double> devs(tgrid.size());
  parallel_for(tgrid.size(),
               [&](std::size_t i) { devs[i] = holder_deviation(s, f, tgrid[i], ugrid); });
  return fit_power_law(tgrid, devs);
}

inline HolderFit estimate_exponent(const Spectrum& s, const MultiplierFamily& f) {
  const auto t = log_grid(1e-3, 1e-1, 20);
  const auto u = chebyshev_grid(201);
  return estimate_exponent(s, f, t, u);
}

/// max over tgrid of deviation(t) / t^rho: the empirical B for a fixed rho.
inline double max_deviation_ratio(const Spectrum& s, const MultiplierFamily& f, double rho,
                                  std::span<const double> tgrid,
                                  std::span<const double> ugrid) {
  std::vector<double> ratio(tgrid.size());
  parallel_for(tgrid.size(), [&](std::size_t i) {
    ratio[i] = holder_deviation(s, f, tgrid[i], ugrid) / std::pow(tgrid[i], rho);
  });
  return ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
}

/// B = (sum_k k^2 lambda_k d_k^m)^{1/2} with lambda_k the Gaussian eigenvalues
/// for the normalized surface measure. The tail past kmax is bounded through
/// I_nu(x) < (x/2)^nu e^x / Gamma(nu+1) and a geometric majorant; it must stay
/// below 1e-14 of the partial sum.
inline double gaussian_B_bound(int m, double sigma, int kmax) {
  const SphereDim dim(m);
  detail::require(kmax >= 1, "gaussian_B_bound: kmax must be >= 1");
  double partial = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    partial += static_cast<double>(k) * k * gaussian_eigenvalue_normalized(m, sigma, k) *
               static_cast<double>(harmonic_dim(m, k));
  }
  // Luke majorant of k^2 d_k lambda_k, in logs.
  const double z = 2.0 / (sigma * sigma);
  auto log_term = [&](int k) {
    const double nu = k + 0.5 * (m - 1);
    return 2.0 * std::log(static_cast<double>(k)) +
           std::log(static_cast<double>(harmonic_dim(m, k))) + (m - 1) * std::log(sigma) +
           log_gamma(0.5 * (m + 1)) + nu * std::log(0.5 * z) - log_gamma(nu + 1.0);
  };
  const int k1 = kmax + 1;
  // successive ratios of the majorant decrease in k, so the first one bounds the rest
  const double q = std::exp(log_term(k1 + 1) - log_term(k1));
  const double tail = q < 1.0 ? std::exp(log_term(k1)) / (1.0 - q)
                              : std::numeric_limits<double>::infinity();
  if (!(tail <= 1e-14 * partial)) {
    std::ostringstream os;
    os << "gaussian_B_bound: tail bound " << tail << " exceeds 1e-14 of the partial sum "
       << partial << " at kmax=" << kmax << "; increase kmax";
    throw NumericalError(os.str());
  }
  return std::sqrt(partial);
}

}  // namespace sphkern
