#include <gtest/gtest.h>

#include <cmath>

#include "sphkern/holder.hpp"

using namespace sphkern;

namespace {

Spectrum gaussian_spectrum(int m, double sigma, int kmax) {
  return funk_hecke_eigenvalues(GaussianKernel(m, sigma).power_profile(), m, kmax);
}

}  // namespace

TEST(Grids, ChebyshevAndLog) {
  const auto u = chebyshev_grid(5);
  EXPECT_EQ(u.front(), 1.0);
  EXPECT_EQ(u.back(), -1.0);
  EXPECT_NEAR(u[2], 0.0, 1e-16);
  const auto t = log_grid(1e-3, 1e-1, 3);
  EXPECT_EQ(t.front(), 1e-3);
  EXPECT_NEAR(t[1], 1e-2, 1e-17);
  EXPECT_THROW(log_grid(0.0, 1.0, 4), DomainError);
}

TEST(Deviation, ConstantKernelHasNone) {
  const auto s = funk_hecke_eigenvalues(constant_profile(2.0), 2, 10);
  const auto u = chebyshev_grid();
  for (Family fam : {Family::shifting, Family::caps, Family::steklov}) {
    EXPECT_EQ(holder_deviation(s, MultiplierFamily(fam, 2), 0.3, u), 0.0);
  }
}

TEST(Deviation, LinearKernelOnShifting) {
  // K(u) = u: deviation = max_u |(cos t - 1) u| = 1 - cos t
  const auto s = funk_hecke_eigenvalues(linear_profile(), 2, 3);
  const auto u = chebyshev_grid();
  for (double t : {0.01, 0.5, 2.0}) {
    EXPECT_NEAR(holder_deviation(s, MultiplierFamily(Family::shifting, 2), t, u), 1 - std::cos(t),
                1e-14);
  }
}

TEST(Deviation, VanishesAsTShrinks) {
  const auto s = gaussian_spectrum(2, 1.0, 40);
  const auto u = chebyshev_grid();
  const MultiplierFamily f(Family::caps, 2);
  double prev = INFINITY;
  for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double d = holder_deviation(s, f, t, u);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Deviation, InputValidation) {
  const auto s = gaussian_spectrum(2, 1.0, 10);
  const auto u = chebyshev_grid();
  EXPECT_THROW(holder_deviation(s, MultiplierFamily(Family::caps, 3), 0.1, u), DimensionError);
  const std::vector<double> shortmu(5, 1.0);
  EXPECT_THROW(holder_deviation_from(s, shortmu, u), DimensionError);
  EXPECT_THROW(holder_deviation_from(s, std::vector<double>(11, 1.0), std::vector<double>{}),
               DomainError);
}

TEST(Fit, RecoversSyntheticPowerLaw) {
  // deviation exactly B t^rho
  for (double rho : {0.5, 1.0, 2.0, 1.37}) {
    const auto t = log_grid(1e-3, 1e-1, 12);
    std::vector<double> d;
    for (double x : t) d.push_back(3.5 * std::pow(x, rho));
    const auto fit = fit_power_law(t, d);
    EXPECT_NEAR(fit.rho_hat, rho, 1e-10);
    EXPECT_NEAR(fit.b_hat, 3.5, 1e-8);
    EXPECT_LT(fit.residual, 1e-10);
  }
}

TEST(Fit, PreconditionsAndDegenerateData) {
  const auto t = log_grid(1e-3, 1e-1, 8);
  std::vector<double> d(8, 0.0);
  EXPECT_THROW(fit_power_law(t, d), NumericalError);
  d.assign(8, 1.0);
  d[3] = 0.0;
  const auto fit = fit_power_law(t, d);
  ASSERT_EQ(fit.excluded.size(), 1u);
  EXPECT_EQ(fit.excluded[0], t[3]);
  EXPECT_TRUE(std::isnan(fit.points[3].fitted));

  const auto narrow = log_grid(1e-2, 5e-2, 8);
  EXPECT_THROW(fit_power_law(narrow, d), DomainError);
  const auto few = log_grid(1e-3, 1e-1, 4);
  EXPECT_THROW(fit_power_law(few, std::vector<double>(4, 1.0)), DomainError);
  const std::vector<double> big = {0.01, 0.1, 1.0, 2.0, 3.5};
  EXPECT_THROW(fit_power_law(big, std::vector<double>(5, 1.0)), DomainError);
}

TEST(Estimate, GaussianIsSmoothOfOrderTwo) {
  for (int m : {2, 3}) {
    for (Family fam : {Family::shifting, Family::caps, Family::steklov}) {
      const auto fit = estimate_exponent(gaussian_spectrum(m, 1.0, 40), MultiplierFamily(fam, m));
      EXPECT_GE(fit.rho_hat, 1.9) << m << " " << to_string(fam);
      EXPECT_LE(fit.rho_hat, 2.1) << m << " " << to_string(fam);
    }
  }
}

TEST(Estimate, DotPowerKernelOrder) {
  const DotPowerKernel k(2, 2.0);
  const auto s = funk_hecke_eigenvalues(k.profile(), 2, 40);
  const auto fit = estimate_exponent(s, MultiplierFamily(Family::shifting, 2));
  EXPECT_GE(fit.rho_hat, 1.9);
  EXPECT_LE(fit.rho_hat, 2.1);
}

TEST(Estimate, StableUnderUGridRefinement) {
  const auto s = gaussian_spectrum(2, 1.0, 40);
  const MultiplierFamily f(Family::caps, 2);
  const auto t = log_grid(1e-3, 1e-1, 10);
  const double coarse = max_deviation_ratio(s, f, 2.0, t, chebyshev_grid(101));
  const double fine = max_deviation_ratio(s, f, 2.0, t, chebyshev_grid(401));
  EXPECT_NEAR(coarse / fine, 1.0, 0.01);
}

TEST(Estimate, DeterministicAcrossRuns) {
  const auto s = gaussian_spectrum(2, 1.5, 30);
  const MultiplierFamily f(Family::steklov, 2);
  const auto a = estimate_exponent(s, f);
  const auto b = estimate_exponent(s, f);
  EXPECT_EQ(a.rho_hat, b.rho_hat);
  EXPECT_EQ(a.b_hat, b.b_hat);
}

TEST(Ordering, AveragedFamiliesDoNotExceedShifting) {
  // caps average shifting over s <= t, Steklov averages caps: the averaged
  // deviation is bounded by the largest deviation of the finer family
  const auto s = gaussian_spectrum(2, 1.0, 40);
  const auto u = chebyshev_grid();
  const MultiplierFamily sh(Family::shifting, 2), caps(Family::caps, 2), st(Family::steklov, 2);
  for (double t : {0.05, 0.2, 0.8}) {
    double max_sh = 0.0, max_caps = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double x = t * i / 200;
      max_sh = std::max(max_sh, holder_deviation(s, sh, x, u));
      max_caps = std::max(max_caps, holder_deviation(s, caps, x, u));
    }
    EXPECT_LE(holder_deviation(s, caps, t, u), max_sh * (1 + 1e-12));
    EXPECT_LE(holder_deviation(s, st, t, u), max_caps * (1 + 1e-12));
  }
}

TEST(GaussianBound, ConvergedTailAndAgreement) {
  const double a = gaussian_B_bound(2, 1.0, 40);
  const double b = gaussian_B_bound(2, 1.0, 60);
  EXPECT_NEAR(a, b, 1e-12 * b);
  EXPECT_THROW(gaussian_B_bound(2, 1.0, 3), NumericalError);
  EXPECT_THROW(gaussian_B_bound(2, 1.0, 0), DomainError);
}

TEST(GaussianBound, DominatesEmpiricalRatio) {
  // 1 - P_k(cos t) <= k(k+m-1) t^2 / (2m) <= k^2 t^2, so deviation / t^2 <= B^2
  const int m = 2;
  const auto s = gaussian_spectrum(m, 1.0, 40);
  const auto t = log_grid(1e-3, 1e-1, 10);
  const double emp = max_deviation_ratio(s, MultiplierFamily(Family::shifting, m), 2.0, t,
                                         chebyshev_grid());
  const double b = gaussian_B_bound(m, 1.0, 40);
  EXPECT_LE(emp, b * b);
}
