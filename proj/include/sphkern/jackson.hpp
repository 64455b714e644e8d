#pragma once

// Generalized Jackson kernels J_{l,n} and the normalized approximation
// operators A_{n,r} f = int_0^pi J'_{l,n}(t) (f * mu_t) v_m(t) (sin t)^r dt,
// which act on H_k^m as multiplication by
//   g^k = c_{n,r}^{-1} int_0^pi J_{l,n}(t) mu_t^k v_m(t) (sin t)^r dt.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "sphkern/errors.hpp"
#include "sphkern/integrate.hpp"
#include "sphkern/multipliers.hpp"
#include "sphkern/parallel.hpp"
#include "sphkern/spectra.hpp"
#include "sphkern/sphere_math.hpp"

namespace sphkern {

/// Order l and degree parameter n of J_{l,n}; J_{l,n} is an even
/// trigonometric polynomial of degree l n.
class JacksonParams {
public:
  JacksonParams(int l, int n) : l_(l), n_(n) {
    detail::require(l >= 1, "Jackson order l must be >= 1");
    detail::require(n >= 1, "Jackson degree parameter n must be >= 1");
  }
  int l() const noexcept { return l_; }
  int n() const noexcept { return n_; }
  int degree() const noexcept { return l_ * n_; }

private:
  int l_;
  int n_;
};

/// J_{l,n}(t) = [sin((n+1)t/2) / sin(t/2)]^{2l}, with J(0) = (n+1)^{2l}.
inline double jackson_eval(int l, int n, double t) {
  detail::require(l >= 1 && n >= 1, "jackson_eval: l and n must be >= 1");
  detail::require(t >= 0.0 && t <= std::numbers::pi, "jackson_eval: t must lie in [0, pi]");
  const double ratio = t == 0.0 ? static_cast<double>(n + 1)
                                 : std::sin(0.5 * (n + 1) * t) / std::sin(0.5 * t);
  return std::pow(ratio, 2 * l);
}

inline double jackson_eval(const JacksonParams& p, double t) {
  return jackson_eval(p.l(), p.n(), t);
}

/// The diagonal form of a normalized operator A_{n,r}.
struct ApproxOperator {
  MultiplierFamily family;
  JacksonParams params;
  int r;
  double c;               ///< c_{n,r}
  std::vector<double> g;  ///< g^k, k = 0..kmax

  int m() const noexcept { return family.m(); }
  int kmax() const noexcept { return static_cast<int>(g.size()) - 1; }
};

namespace detail {

/// v_m(t) (sin t)^r on [0, pi], continuous at both ends.
inline double normalizer_weight(const MultiplierFamily& f, int r, double t) {
  const double s = std::sin(t);
  const double sr = r == 0 ? 1.0 : std::pow(s, r);
  switch (f.family()) {
    case Family::shifting:
      return sr;
    case Family::caps:
      return cap_volume(f.m(), t) * sr;
    case Family::steklov:
      if (t <= 0.0) return 0.0;
      if (t >= std::numbers::pi) return 0.0;  // D_m (sin t)^r -> 0 for r >= 1
      return steklov_normalizer(f.m(), t) * sr;
  }
  return sr;
}

inline SimpsonOptions jackson_simpson(const JacksonParams& p, int k, double abs_tol,
                                      double rel_tol) {
  SimpsonOptions opt;
  opt.abs_tol = abs_tol;
  opt.rel_tol = rel_tol;
  opt.min_panels = 4 * (p.degree() + k) + 16;
  return opt;
}

/// Gauss rule in u = cos t for int_0^pi F(cos t) (sin t)^r dt with F a
/// polynomial of degree <= degree.
inline QuadratureRule shifting_rule(int r, int degree) {
  return gegenbauer_quadrature(r + 1, degree / 2 + 2);
}

inline void check_r(const MultiplierFamily& f, int r) {
  detail::require(r >= 0, "approximation operator: r must be >= 0");
  if (f.family() == Family::steklov && r == 0) {
    throw DomainError("steklov normalizer diverges at t = pi; use r >= 1");
  }
}

/// Composite 20-point Gauss–Legendre nodes on [0, pi] with D_m tabulated at
/// every node by cumulative integration of C_m / R_m between neighbours.
struct SteklovTable {
  std::vector<double> t, w, d;
};

inline SteklovTable steklov_table(int m, int panels) {
  const auto& rule = legendre20();
  const double h = std::numbers::pi / panels;
  const double inv_omega = 1.0 / surface_volume(m - 1);
  auto ratio = [&](double s) {
    return cap_volume(m, s) * inv_omega / std::pow(std::sin(s), m - 1);
  };
  SteklovTable tab;
  const std::size_t total = static_cast<std::size_t>(panels) * rule.size();
  tab.t.reserve(total);
  tab.w.reserve(total);
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      tab.t.push_back(mid + 0.5 * h * rule.nodes()[i]);
      tab.w.push_back(0.5 * h * rule.weights()[i]);
    }
  }
  tab.d.resize(total);
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < total; ++j) {
    const double a = prev;
    const double b = tab.t[j];
    double piece = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      piece += rule.weights()[i] * ratio(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes()[i]);
    }
    acc += 0.5 * (b - a) * piece;
    tab.d[j] = acc;
    prev = b;
  }
  return tab;
}

/// (c, g) for the Steklov family on a fixed table.
inline std::pair<double, std::vector<double>> steklov_on_table(const SteklovTable& tab, int m,
                                                               const JacksonParams& p, int r,
                                                               int kmax) {
  const std::size_t K1 = static_cast<std::size_t>(kmax) + 1;
  std::vector<double> g(K1, 0.0);
  std::vector<double> poly(K1);
  double c = 0.0;
  for (std::size_t j = 0; j < tab.t.size(); ++j) {
    const double t = tab.t[j];
    const double base = tab.w[j] * jackson_eval(p, t) * std::pow(std::sin(t), r);
    c += base * tab.d[j];
    gegenbauer_defect_all(m, t, poly);
    for (std::size_t k = 1; k < K1; ++k) {
      g[k] += base * poly[k] / (static_cast<double>(k) * (k + m - 1));
    }
  }
  g[0] = c;
  for (double& v : g) v /= c;
  return {c, std::move(g)};
}

/// Panel doubling until c and every g^k agree to 1e-11 between refinements.
inline std::pair<double, std::vector<double>> steklov_coefficients(int m, const JacksonParams& p,
                                                                   int r, int kmax) {
  int panels = 8 + (p.degree() + kmax) / 4;
  auto prev = steklov_on_table(steklov_table(m, panels), m, p, r, kmax);
  for (int round = 0; round < 8; ++round) {
    panels *= 2;
    auto next = steklov_on_table(steklov_table(m, panels), m, p, r, kmax);
    double diff = std::abs(next.first - prev.first) / next.first;
    for (std::size_t k = 0; k < next.second.size(); ++k) {
      diff = std::max(diff, std::abs(next.second[k] - prev.second[k]));
    }
    if (diff <= 1e-11) return next;
    prev = std::move(next);
  }
  std::ostringstream os;
  os << "steklov operator coefficients did not settle (l=" << p.l() << ", n=" << p.n()
     << ", r=" << r << ", kmax=" << kmax << ", panels=" << panels << ")";
  throw NumericalError(os.str());
}

}  // namespace detail

/// c_{n,r} = int_0^pi J_{l,n}(t) v_m(t) (sin t)^r dt.
inline double normalization_c(const MultiplierFamily& f, const JacksonParams& p, int r) {
  detail::check_r(f, r);
  double c = 0.0;
  if (f.family() == Family::shifting) {
    const auto rule = detail::shifting_rule(r, p.degree());
    c = rule.integrate([&](double u) { return jackson_eval(p, std::acos(u)); });
  } else if (f.family() == Family::steklov) {
    c = detail::steklov_coefficients(f.m(), p, r, 0).first;
  } else {
    auto integrand = [&](double t) {
      return jackson_eval(p, t) * detail::normalizer_weight(f, r, t);
    };
    c = adaptive_simpson(integrand, 0.0, std::numbers::pi,
                         detail::jackson_simpson(p, 0, 1e-300, 1e-12));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    std::ostringstream os;
    os << "normalization_c: non-positive or non-finite result " << c << " (family "
       << to_string(f.family()) << ", l=" << p.l() << ", n=" << p.n() << ", r=" << r << ")";
    throw NumericalError(os.str());
  }
  return c;
}

/// g^k for k = 0..kmax. The shifting family integrates in u = cos t with a
/// Gauss–Gegenbauer rule exact for the polynomial integrand. Caps use adaptive
/// Simpson on (0, pi) with absolute tolerance 1e-12 c_{n,r}. Steklov uses
/// composite Gauss–Legendre with D_m tabulated once per refinement level,
/// since evaluating D_m pointwise inside Simpson costs a nested quadrature.
inline ApproxOperator operator_coefficients(const MultiplierFamily& f, const JacksonParams& p,
                                            int r, int kmax) {
  detail::require(kmax >= 0, "operator_coefficients: kmax must be >= 0");
  if (f.family() == Family::steklov) {
    detail::check_r(f, r);
    auto [c, g] = detail::steklov_coefficients(f.m(), p, r, kmax);
    return ApproxOperator{f, p, r, c, std::move(g)};
  }
  const double c = normalization_c(f, p, r);
  std::vector<double> g(static_cast<std::size_t>(kmax) + 1, 0.0);
  const int m = f.m();

  if (f.family() == Family::shifting) {
    const auto rule = detail::shifting_rule(r, p.degree() + kmax);
    const std::size_t N = rule.size();
    const std::size_t K1 = g.size();
    std::vector<double> wj(N);
    std::vector<double> poly(N * K1);
    for (std::size_t i = 0; i < N; ++i) {
      const double u = rule.nodes()[i];
      wj[i] = rule.weights()[i] * jackson_eval(p, std::acos(u));
      ultraspherical_all(0.5 * (m - 1), u, std::span<double>(poly.data() + i * K1, K1));
    }
    parallel_for(K1, [&](std::size_t k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) acc += wj[i] * poly[i * K1 + k];
      g[k] = acc / c;
    });
  } else {
    parallel_for(g.size(), [&](std::size_t kk) {
      const int k = static_cast<int>(kk);
      if (k == 0) {
        g[0] = 1.0;
        return;
      }
      auto integrand = [&](double t) {
        const double sr = r == 0 ? 1.0 : std::pow(std::sin(t), r);
        return jackson_eval(p, t) * weighted_multiplier(f, t, k) * sr;
      };
      g[kk] = adaptive_simpson(integrand, 0.0, std::numbers::pi,
                               detail::jackson_simpson(p, k, 1e-12 * c, 0.0)) /
              c;
    });
  }
  return ApproxOperator{f, p, r, c, std::move(g)};
}

/// Default relative tolerance separating exact zeros from quadrature residue.
inline constexpr double kRankTolerance = 1e-10;

/// sum of d_k^m over degrees with |g^k| > tol max_j |g^j|.
inline std::uint64_t numerical_rank(const ApproxOperator& a, double tol = kRankTolerance) {
  if (!(tol > 0.0)) throw DomainError("numerical_rank: tol must be > 0");
  double gmax = 0.0;
  for (double v : a.g) gmax = std::max(gmax, std::abs(v));
  std::uint64_t rank = 0;
  for (std::size_t k = 0; k < a.g.size(); ++k) {
    if (std::abs(a.g[k]) > tol * gmax) rank += harmonic_dim(a.m(), static_cast<int>(k));
  }
  return rank;
}

/// sum_{k <= alpha^{-1}(l n)} d_k^m: the rank bound from Gegenbauer
/// orthogonality for product-form families at r = auto_r().
inline std::uint64_t rank_bound(const MultiplierFamily& f, const JacksonParams& p) {
  std::uint64_t total = 0;
  const int top = f.alpha_inverse(p.degree());
  for (int k = 0; k <= top; ++k) total += harmonic_dim(f.m(), k);
  return total;
}

/// max_k |g^k|: the L^2 operator norm of the diagonal operator.
inline double operator_norm_bound(const ApproxOperator& a) {
  double best = 0.0;
  for (double v : a.g) best = std::max(best, std::abs(v));
  return best;
}

struct HsDefect {
  double defect = 0.0;         ///< ||K^{1/2} - A K^{1/2}||_HS
  std::uint64_t rank = 0;      ///< q = numerical_rank(A)
  double sqrt_lambda_next = std::numeric_limits<double>::quiet_NaN();  ///< sqrt(lambda_{q+1})
  bool chain_checked = false;  ///< lambda_{q+1} was available
  bool chain_holds = false;    ///< sqrt(lambda_{q+1}) <= defect
  double a_2q = std::numeric_limits<double>::quiet_NaN();  ///< sqrt(lambda_{2q})
  double q_times_a_2q = std::numeric_limits<double>::quiet_NaN();
  double sqrt_q_times_a_2q = std::numeric_limits<double>::quiet_NaN();
};

/// Hilbert–Schmidt norm of K^{1/2} - A_{n,r} K^{1/2}; both are diagonal on
/// the harmonic spaces so the norm is (sum_k d_k lambda_k (1 - g^k)^2)^{1/2}.
inline HsDefect hs_defect(const Spectrum& s, const ApproxOperator& a,
                          double rank_tol = kRankTolerance) {
  if (s.m() != a.m()) throw DimensionError("hs_defect: spectrum and operator differ in m");
  if (s.kmax() != a.kmax()) {
    std::ostringstream os;
    os << "hs_defect: spectrum kmax " << s.kmax() << " != operator kmax " << a.kmax();
    throw DimensionError(os.str());
  }
  HsDefect out;
  double acc = 0.0;
  for (const auto& e : s.entries()) {
    const double gap = 1.0 - a.g[static_cast<std::size_t>(e.k)];
    acc += static_cast<double>(e.multiplicity) * e.lambda * gap * gap;
  }
  out.defect = std::sqrt(acc);
  out.rank = numerical_rank(a, rank_tol);
  const std::uint64_t q = out.rank;
  if (q + 1 <= s.total_count()) {
    out.sqrt_lambda_next = std::sqrt(s.value_at(q));
    out.chain_checked = true;
    out.chain_holds = out.sqrt_lambda_next <= out.defect;
  }
  if (q >= 1 && 2 * q <= s.total_count()) {
    out.a_2q = std::sqrt(s.value_at(2 * q - 1));
    out.q_times_a_2q = static_cast<double>(q) * out.a_2q;
    out.sqrt_q_times_a_2q = std::sqrt(static_cast<double>(q)) * out.a_2q;
  }
  return out;
}

/// Smallest l with 2l >= rho + c(m) + r + 1.
inline int minimal_jackson_order(const MultiplierFamily& f, double rho, int r) {
  const double need = rho + f.normalizer_exponent() + r + 1.0;
  return std::max(1, static_cast<int>(std::ceil(0.5 * need - 1e-12)));
}

/// c_{n,r}^{-1} int_0^pi J_{l,n}(t) t^{rho/2} v_m(t) (sin t)^r dt, the
/// Jackson moment bounding the Hilbert–Schmidt defect up to a constant.
inline double jackson_moment(const MultiplierFamily& f, const JacksonParams& p, int r,
                             double rho) {
  const double c = normalization_c(f, p, r);
  auto integrand = [&](double t) {
    return jackson_eval(p, t) * std::pow(t, 0.5 * rho) * detail::normalizer_weight(f, r, t);
  };
  return adaptive_simpson(integrand, 0.0, std::numbers::pi,
                          detail::jackson_simpson(p, 0, 1e-300, 1e-10)) /
         c;
}

}  // namespace sphkern
