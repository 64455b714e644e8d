#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sphkern/spectra.hpp"

using namespace sphkern;

TEST(FunkHecke, GaussianMomentRouteMatchesBessel) {
  for (int m : {2, 3, 4}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const auto s = funk_hecke_eigenvalues(GaussianKernel(m, sigma).power_profile(), m, 30);
      for (int k = 0; k <= 30; ++k) {
        const double want = gaussian_eigenvalue_closed(m, sigma, k);
        EXPECT_NEAR(s.lambda(k), want, 1e-11 * want) << m << " " << sigma << " " << k;
      }
    }
  }
}

TEST(FunkHecke, QuadratureRouteAgreesWhereResolvable) {
  // absolute accuracy of the Gauss route is ~1e-16 lambda_0, so compare
  // only degrees whose eigenvalue is far above that
  const GaussianKernel g(2, 1.0);
  const auto s = funk_hecke_eigenvalues(g.profile(), 2, 30);
  for (int k = 0; k <= 8; ++k) {
    const double want = gaussian_eigenvalue_closed(2, 1.0, k);
    EXPECT_NEAR(s.lambda(k), want, 1e-9 * want);
  }
  for (int k = 9; k <= 30; ++k) {
    EXPECT_NEAR(s.lambda(k), gaussian_eigenvalue_closed(2, 1.0, k), 1e-14);
  }
}

TEST(FunkHecke, ThreeSphereAgainstChebyshevIntegral) {
  // lambda_k = omega_2 int_0^pi K(cos a) U_k(cos a)/(k+1) sin^2 a da
  const auto p = IsotropicProfile::closed_form("cosexp", [](double u) { return std::exp(u); });
  const auto s = funk_hecke_eigenvalues(p, 3, 8);
  for (int k = 0; k <= 8; ++k) {
    const long double want =
        4 * oracle::pi() *
        oracle::integrate(
            [&](long double a) {
              const double ad = static_cast<double>(a);
              return std::exp(std::cos(ad)) * oracle::chebyshev_u_normalized(k, ad) *
                     std::sin(ad) * std::sin(ad);
            },
            0.0L, oracle::pi());
    EXPECT_NEAR(s.lambda(k), static_cast<double>(want), 1e-13);
  }
}

TEST(FunkHecke, ConstantAndLinearKernels) {
  const auto c = funk_hecke_eigenvalues(constant_profile(2.0), 2, 5);
  EXPECT_NEAR(c.lambda(0), 8 * std::numbers::pi, 1e-13);
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(c.lambda(k), 0.0);
  const auto l = funk_hecke_eigenvalues(linear_profile(), 2, 5);
  EXPECT_NEAR(l.lambda(1), 4 * std::numbers::pi / 3, 1e-13);
  EXPECT_EQ(l.lambda(0), 0.0);
  EXPECT_EQ(l.lambda(2), 0.0);
}

TEST(FunkHecke, EigenSeriesRoundTrip) {
  const std::vector<double> lam = {3.0, 1.0, 0.25, 0.0, 0.01};
  const auto p = IsotropicProfile::eigen_series("e", 3, lam);
  const auto s = funk_hecke_eigenvalues(p, 3, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(s.lambda(k), lam[k], 1e-13);
  EXPECT_THROW(funk_hecke_eigenvalues(p, 2, 4), DimensionError);
}

TEST(FunkHecke, TraceIdentity) {
  for (int m : {2, 3}) {
    const GaussianKernel g(m, 1.0);
    const auto s = funk_hecke_eigenvalues(g.power_profile(), m, 60);
    EXPECT_NEAR(s.trace(), surface_volume(m) * g(1.0), 1e-10 * surface_volume(m));
  }
}

TEST(FunkHecke, IndefiniteKernelIsRejected) {
  const auto p = IsotropicProfile::power_series("neg", {0.0, 0.0, -1.0});
  EXPECT_THROW(funk_hecke_eigenvalues(p, 2, 4), NotPositiveDefinite);
}

TEST(FunkHecke, InputValidation) {
  const auto q = gegenbauer_quadrature(3, 10);
  EXPECT_THROW(funk_hecke_eigenvalues(constant_profile(1), 2, 4, q), DimensionError);
  EXPECT_THROW(funk_hecke_eigenvalues(constant_profile(1), 2, -1), DomainError);
  const auto small = gegenbauer_quadrature(2, 3);
  const auto g = GaussianKernel(2, 1).profile();
  EXPECT_THROW(funk_hecke_eigenvalues(g, 2, 10, small), DomainError);
}

TEST(Spectrum, SortedBlocksAndWidths) {
  const auto s = funk_hecke_eigenvalues(GaussianKernel(2, 1.0).power_profile(), 2, 20);
  const auto flat = sorted_eigenvalues(s, 100);
  ASSERT_EQ(flat.size(), 100u);
  EXPECT_TRUE(std::is_sorted(flat.rbegin(), flat.rend()));
  // Gaussian eigenvalues strictly decrease, so blocks come in degree order
  std::uint64_t pos = 0;
  for (int k = 0; k < 9; ++k) {
    for (std::uint64_t j = 0; j < 2u * k + 1; ++j) EXPECT_EQ(flat[pos++], s.lambda(k));
  }
  const auto w = kolmogorov_widths(s, 99);
  for (std::size_t n = 0; n < 100; ++n) {
    EXPECT_EQ(w.values[n], std::sqrt(flat[n]));
  }
  EXPECT_EQ(w.sources[0].k, 0);
  EXPECT_EQ(w.sources[1].k, 1);
  EXPECT_EQ(w.sources[3].slot, 3u);
  EXPECT_EQ(w.sources[4].k, 2);
}

TEST(Spectrum, ConstantKernelWidths) {
  const auto s = funk_hecke_eigenvalues(constant_profile(1.5), 2, 4);
  const auto w = kolmogorov_widths(s, 10);
  EXPECT_NEAR(w.values[0], std::sqrt(4 * std::numbers::pi * 1.5), 1e-14);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(w.values[n], 0.0);
}

TEST(Spectrum, RangeErrorsNameKmax) {
  const auto s = funk_hecke_eigenvalues(constant_profile(1), 2, 2);
  EXPECT_THROW(kolmogorov_widths(s, 9), RangeError);
  try {
    s.value_at(9);
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("kmax"), std::string::npos);
  }
}

TEST(Spectrum, MonotoneInPositiveScaling) {
  const auto s = funk_hecke_eigenvalues(GaussianKernel(3, 1.0).power_profile(), 3, 15);
  std::vector<double> scaled;
  for (const auto& e : s.entries()) scaled.push_back(3 * e.lambda);
  const Spectrum t(3, scaled);
  const auto a = sorted_eigenvalues(s, 200);
  const auto b = sorted_eigenvalues(t, 200);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(b[i], 3 * a[i]);
}

TEST(Spectrum, SortedViewOfShuffledSyntheticEntries) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<SpectrumEntry> entries;
  std::vector<double> expanded;
  for (int k = 0; k < 40; ++k) {
    const double v = dist(rng);
    const std::uint64_t mult = 1 + k % 4;
    entries.push_back({k, v, mult});
    for (std::uint64_t j = 0; j < mult; ++j) expanded.push_back(v);
  }
  std::sort(expanded.rbegin(), expanded.rend());
  const Spectrum s(0, entries);
  EXPECT_EQ(sorted_eigenvalues(s), expanded);
  for (std::size_t i = 0; i < expanded.size(); ++i) EXPECT_EQ(s.value_at(i), expanded[i]);
}

TEST(Spectrum, OptimalSubspaceFlagsTies) {
  const auto s = funk_hecke_eigenvalues(GaussianKernel(2, 1.0).power_profile(), 2, 10);
  const auto full = optimal_subspace(s, 4);
  EXPECT_FALSE(full.non_unique);
  ASSERT_EQ(full.indices.size(), 4u);
  EXPECT_EQ(full.indices[0], (HarmonicIndex{0, 1}));
  EXPECT_EQ(full.indices[3], (HarmonicIndex{1, 3}));
  EXPECT_TRUE(optimal_subspace(s, 2).non_unique);
  EXPECT_THROW(optimal_subspace(s, 0), DomainError);
}

TEST(Decay, DiagnosticAndEnvelope) {
  const auto s = funk_hecke_eigenvalues(GaussianKernel(2, 1.0).power_profile(), 2, 40);
  const auto d = decay_diagnostic(s, 2.0, 500);
  ASSERT_EQ(d.values.size(), 500u);
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    EXPECT_DOUBLE_EQ(d.values[i], s.value_at(i) * std::pow(i + 1.0, 2.0));
  }
  EXPECT_TRUE(d.bounded);
  const auto env = decay_block_envelope(s, 2.0, 500);
  ASSERT_GT(env.size(), 10u);
  EXPECT_EQ(env[0].first, 1u);
  EXPECT_EQ(env[1].first, 4u);
  for (std::size_t i = 4; i < env.size(); ++i) EXPECT_LT(env[i].second, env[i - 1].second);
  EXPECT_THROW(decay_diagnostic(s, 2.5, 10), DomainError);
  EXPECT_THROW(decay_diagnostic(s, 0.0, 10), DomainError);
}
