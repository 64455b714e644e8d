#pragma once

// Command dispatch for the sphkern tool: builds kernels from a RunConfig,
// runs one experiment and renders the result as CSV or JSON.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "sphkern/sphkern.hpp"

namespace sphkern::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Thrown for configurations rejected before any computation.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  int m = 2;
  std::string kernel = "gaussian:sigma=1";
  std::string kernel_kind = "power";
  std::string family = "shifting";
  int kmax = 30;
  int nmax = 20;
  std::string l = "2";
  std::vector<int> n;  ///< empty: per-command default
  std::string r = "auto";
  double rho = 2.0;
  std::vector<double> t;  ///< explicit t values; empty: log grid
  double t_min = 1e-3;
  double t_max = 1e-1;
  int t_count = 20;
  int ugrid = 201;
  int ntheta = 60;
  int nphi = 120;
  int count = 50;
  double floor = 1e-12;
  int quad_nodes = 0;  ///< 0: default size for kmax
  std::string format = "csv";
  std::string out;  ///< empty: stdout
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "spectrum",     "widths",     "multiplier",     "approx-op",
      "hs-defect",    "holder-fit", "oracle-compare", "decay-check"};
  return names;
}

using Cell = std::variant<std::string, std::int64_t, double>;
using Json = nlohmann::ordered_json;

struct Result {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json summary = Json::object();
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON text with every floating value printed to 17 significant digits
/// (non-finite values become null); nlohmann handles string escaping.
inline void write_json(const Json& j, std::string& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write_json(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_json(v, out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string render_csv(const Result& res) {
  std::string out;
  for (std::size_t i = 0; i < res.columns.size(); ++i) {
    if (i) out += ',';
    out += res.columns[i];
  }
  out += '\n';
  for (const auto& row : res.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
              out += v;
            } else if constexpr (std::is_same_v<T, double>) {
              out += format_double(v);
            } else {
              out += std::to_string(v);
            }
          },
          row[i]);
    }
    out += '\n';
  }
  return out;
}

inline Json config_echo(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["m"] = c.m;
  j["kernel"] = c.kernel;
  j["kernel_kind"] = c.kernel_kind;
  j["family"] = c.family;
  j["kmax"] = c.kmax;
  j["nmax"] = c.nmax;
  j["l"] = c.l;
  j["n"] = c.n;
  j["r"] = c.r;
  j["rho"] = c.rho;
  j["t"] = c.t;
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max;
  j["t_count"] = c.t_count;
  j["ugrid"] = c.ugrid;
  j["ntheta"] = c.ntheta;
  j["nphi"] = c.nphi;
  j["count"] = c.count;
  j["floor"] = c.floor;
  j["quad_nodes"] = c.quad_nodes;
  j["format"] = c.format;
  return j;
}

inline std::string render_json(const RunConfig& c, const Result& res) {
  Json doc;
  doc["metadata"] = {{"tool", "sphkern"}, {"version", kToolVersion}, {"config", config_echo(c)}};
  doc["columns"] = res.columns;
  Json rows = Json::array();
  for (const auto& row : res.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[res.columns[i]] = v; }, row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  doc["summary"] = res.summary;
  std::string out;
  write_json(doc, out);
  out += '\n';
  return out;
}

// ---- kernel selection -----------------------------------------------------

struct KernelSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::string path;  ///< csv only
};

inline KernelSpec parse_kernel_spec(const std::string& text) {
  KernelSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  const std::string rest = text.substr(colon + 1);
  if (spec.name == "csv") {
    if (rest.empty()) throw ConfigError("kernel csv: missing path");
    spec.path = rest;
    return spec;
  }
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("kernel parameter '" + item + "' is not key=value");
    }
    spec.params.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return spec;
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not a finite number");
  }
}

inline long long parse_integer(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + s + "' is not an integer");
  }
}

/// Reads `k,coeff` rows; missing degrees are zero, duplicates are rejected.
inline std::vector<double> read_coefficient_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("kernel csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("kernel csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "k,coeff") throw ConfigError("kernel csv: header must be 'k,coeff'");
  std::vector<double> coeffs;
  std::vector<bool> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = "kernel csv line " + std::to_string(lineno);
    if (comma == std::string::npos) throw ConfigError(where + ": expected k,coeff");
    const long long k = parse_integer(line.substr(0, comma), where + " degree");
    const double v = parse_double(line.substr(comma + 1), where + " coefficient");
    if (k < 0 || k > 100000) throw ConfigError(where + ": degree out of range");
    const auto ku = static_cast<std::size_t>(k);
    if (ku >= coeffs.size()) {
      coeffs.resize(ku + 1, 0.0);
      seen.resize(ku + 1, false);
    }
    if (seen[ku]) throw ConfigError(where + ": duplicate degree " + std::to_string(k));
    seen[ku] = true;
    coeffs[ku] = v;
  }
  if (coeffs.empty()) throw ConfigError("kernel csv: no coefficient rows");
  return coeffs;
}

struct KernelChoice {
  IsotropicProfile profile;
  bool eigen = false;  ///< profile holds Mercer coefficients
  bool closed = false; ///< spectrum by Gauss–Gegenbauer quadrature
};

inline KernelChoice make_kernel(const RunConfig& c) {
  const auto spec = parse_kernel_spec(c.kernel);
  auto param = [&](const std::string& key) -> std::optional<std::string> {
    for (const auto& [k, v] : spec.params) {
      if (k == key) return v;
    }
    return std::nullopt;
  };
  auto only = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : spec.params) {
      bool ok = false;
      for (auto key : keys) ok = ok || k == key;
      if (!ok) throw ConfigError("kernel " + spec.name + ": unknown parameter '" + k + "'");
    }
  };
  if (spec.name == "gaussian") {
    only({"sigma", "form"});
    const auto s = param("sigma");
    if (!s) throw ConfigError("kernel gaussian: sigma is required");
    const double sigma = parse_double(*s, "sigma");
    if (!(sigma > 0.0)) throw ConfigError("kernel gaussian: sigma must be > 0");
    const std::string form = param("form").value_or("power");
    const GaussianKernel g(c.m, sigma);
    if (form == "power") return {g.power_profile(), false, false};
    if (form == "closed") return {g.profile(), false, true};
    throw ConfigError("kernel gaussian: form must be power or closed");
  }
  if (spec.name == "dotpower") {
    only({"eps"});
    const auto e = param("eps");
    if (!e) throw ConfigError("kernel dotpower: eps is required");
    const double eps = parse_double(*e, "eps");
    if (!(eps > 0.5 * c.m)) throw ConfigError("kernel dotpower: eps must exceed m/2");
    return {DotPowerKernel(c.m, eps).profile(), false, false};
  }
  if (spec.name == "constant") {
    only({"c"});
    const auto v = param("c");
    if (!v) throw ConfigError("kernel constant: c is required");
    const double cst = parse_double(*v, "c");
    if (!(cst >= 0.0)) throw ConfigError("kernel constant: c must be >= 0");
    return {constant_profile(cst), false, false};
  }
  if (spec.name == "linear") {
    only({});
    return {linear_profile(), false, false};
  }
  if (spec.name == "csv") {
    auto coeffs = read_coefficient_csv(spec.path);
    if (c.kernel_kind == "power") {
      return {IsotropicProfile::power_series("csv", std::move(coeffs)), false, false};
    }
    for (double v : coeffs) {
      if (v < 0.0) throw ConfigError("kernel csv: eigen coefficients must be >= 0");
    }
    return {IsotropicProfile::eigen_series("csv", c.m, std::move(coeffs)), true, false};
  }
  throw ConfigError("unknown kernel '" + spec.name +
                    "' (expected gaussian, dotpower, constant, linear or csv:PATH)");
}

inline Spectrum make_spectrum(const RunConfig& c, const KernelChoice& k) {
  if (k.eigen) {
    std::vector<double> lambdas(static_cast<std::size_t>(c.kmax) + 1, 0.0);
    const auto coeffs = k.profile.coefficients();
    for (std::size_t i = 0; i < lambdas.size() && i < coeffs.size(); ++i) lambdas[i] = coeffs[i];
    return Spectrum(c.m, lambdas);
  }
  if (k.closed || c.quad_nodes > 0) {
    const int nodes = c.quad_nodes > 0 ? c.quad_nodes : default_quadrature_nodes(c.kmax);
    return funk_hecke_eigenvalues(k.profile, c.m, c.kmax, gegenbauer_quadrature(c.m, nodes));
  }
  return funk_hecke_eigenvalues(k.profile, c.m, c.kmax);
}

inline MultiplierFamily make_family(const RunConfig& c) {
  const auto f = parse_family(c.family);
  if (!f) throw ConfigError("family must be shifting, caps or steklov");
  return MultiplierFamily(*f, c.m);
}

inline int resolve_r(const RunConfig& c, const MultiplierFamily& f) {
  if (c.r == "auto") return f.auto_r();
  const long long r = parse_integer(c.r, "--r");
  if (r < 0 || r > 64) throw ConfigError("--r must be auto or an integer in [0, 64]");
  if (f.family() == Family::steklov && r == 0) {
    throw ConfigError("--r 0 is not allowed for steklov (normalizer diverges at pi)");
  }
  return static_cast<int>(r);
}

inline int resolve_l(const RunConfig& c, const MultiplierFamily& f, int r) {
  if (c.l == "auto") return minimal_jackson_order(f, c.rho, r);
  const long long l = parse_integer(c.l, "--l");
  if (l < 1 || l > 64) throw ConfigError("--l must be auto or an integer in [1, 64]");
  return static_cast<int>(l);
}

inline std::vector<double> t_values(const RunConfig& c) {
  if (!c.t.empty()) return c.t;
  return log_grid(c.t_min, c.t_max, c.t_count);
}

/// Range checks that do not need any computation.
inline void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& name : command_names()) known = known || name == c.command;
  if (!known) throw ConfigError("unknown command '" + c.command + "'");
  if (c.m < 2 || c.m > 64) throw ConfigError("--m must lie in [2, 64]");
  if (c.kmax < 0 || c.kmax > 5000) throw ConfigError("--kmax must lie in [0, 5000]");
  if (c.nmax < 0) throw ConfigError("--nmax must be >= 0");
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
  if (c.kernel_kind != "power" && c.kernel_kind != "eigen") {
    throw ConfigError("--kernel-kind must be power or eigen");
  }
  if (!parse_family(c.family)) throw ConfigError("--family must be shifting, caps or steklov");
  for (int n : c.n) {
    if (n < 1 || n > 4096) throw ConfigError("--n values must lie in [1, 4096]");
  }
  if (!(c.rho > 0.0 && c.rho <= 2.0)) throw ConfigError("--rho must lie in (0, 2]");
  for (double t : c.t) {
    if (!(t > 0.0 && t < std::numbers::pi)) throw ConfigError("--t values must lie in (0, pi)");
  }
  if (c.t.empty()) {
    if (!(c.t_min > 0.0 && c.t_max > c.t_min && c.t_max < std::numbers::pi)) {
      throw ConfigError("need 0 < --t-min < --t-max < pi");
    }
    if (c.t_count < 2) throw ConfigError("--t-count must be >= 2");
  }
  if (c.ugrid < 2) throw ConfigError("--ugrid must be >= 2");
  if (c.ntheta < 2 || c.nphi < 4) throw ConfigError("need --ntheta >= 2 and --nphi >= 4");
  if (c.count < 1) throw ConfigError("--count must be >= 1");
  if (!(c.floor >= 0.0)) throw ConfigError("--floor must be >= 0");
  if (c.quad_nodes < 0) throw ConfigError("--quad-nodes must be >= 0");
}

// ---- commands -------------------------------------------------------------

inline Result cmd_spectrum(const RunConfig& c) {
  const auto kernel = make_kernel(c);
  const auto s = make_spectrum(c, kernel);
  Result res;
  res.columns = {"k", "lambda_k", "multiplicity"};
  for (const auto& e : s.entries()) {
    res.rows.push_back({std::int64_t{e.k}, e.lambda, static_cast<std::int64_t>(e.multiplicity)});
  }
  const double trace = s.trace();
  const double expected = surface_volume(c.m) * kernel.profile(1.0);
  res.summary["trace"] = trace;
  res.summary["omega_m_times_K1"] = expected;
  res.summary["trace_rel_err"] = expected != 0.0 ? std::abs(trace - expected) / expected : 0.0;
  res.summary["profile_kind"] = to_string(kernel.profile.kind());
  return res;
}

inline Result cmd_widths(const RunConfig& c) {
  const auto s = make_spectrum(c, make_kernel(c));
  const auto w = kolmogorov_widths(s, c.nmax);
  Result res;
  res.columns = {"n", "d_n", "k", "slot"};
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    res.rows.push_back({static_cast<std::int64_t>(i), w.values[i],
                        std::int64_t{w.sources[i].k},
                        static_cast<std::int64_t>(w.sources[i].slot)});
  }
  const auto sub = optimal_subspace(s, static_cast<std::uint64_t>(c.nmax) + 1);
  res.summary["subspace_dimension"] = c.nmax + 1;
  res.summary["subspace_non_unique"] = sub.non_unique;
  return res;
}

inline Result cmd_multiplier(const RunConfig& c) {
  const auto f = make_family(c);
  Result res;
  res.columns = {"family", "m", "t", "k", "mu"};
  for (double t : t_values(c)) {
    const auto mu = multipliers(f, t, c.kmax);
    for (int k = 0; k <= c.kmax; ++k) {
      res.rows.push_back({std::string(to_string(f.family())), std::int64_t{c.m}, t,
                          std::int64_t{k}, mu[k]});
    }
  }
  res.summary["normalizer_exponent"] = f.normalizer_exponent();
  res.summary["product_form"] = f.product_form();
  return res;
}

inline Result cmd_approx_op(const RunConfig& c) {
  const auto f = make_family(c);
  const int r = resolve_r(c, f);
  const int l = resolve_l(c, f, r);
  if (c.n.size() > 1) throw ConfigError("approx-op takes a single --n");
  const int n = c.n.empty() ? 5 : c.n.front();
  const JacksonParams p(l, n);
  const auto a = operator_coefficients(f, p, r, c.kmax);
  Result res;
  res.columns = {"family", "m", "l", "n", "r", "k", "g_k"};
  for (int k = 0; k <= c.kmax; ++k) {
    res.rows.push_back({std::string(to_string(f.family())), std::int64_t{c.m}, std::int64_t{l},
                        std::int64_t{n}, std::int64_t{r}, std::int64_t{k}, a.g[k]});
  }
  res.summary["c"] = a.c;
  res.summary["numerical_rank"] = numerical_rank(a);
  res.summary["rank_tolerance"] = kRankTolerance;
  res.summary["product_form"] = f.product_form();
  if (f.product_form() && r == f.auto_r()) {
    res.summary["rank_bound"] = rank_bound(f, p);
    res.summary["vanishing_degree"] = f.alpha_inverse(p.degree());
  }
  res.summary["operator_norm_bound"] = operator_norm_bound(a);
  return res;
}

inline Result cmd_hs_defect(const RunConfig& c) {
  const auto s = make_spectrum(c, make_kernel(c));
  const auto f = make_family(c);
  const int r = resolve_r(c, f);
  const int l = resolve_l(c, f, r);
  const std::vector<int> ns = c.n.empty() ? std::vector<int>{1, 2, 4, 8, 16} : c.n;
  Result res;
  res.columns = {"n", "rank", "hs_defect"};
  Json details = Json::array();
  bool chain_ok = true;
  bool decreasing = true;
  double prev = 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto a = operator_coefficients(f, JacksonParams(l, ns[i]), r, c.kmax);
    const auto h = hs_defect(s, a);
    res.rows.push_back({std::int64_t{ns[i]}, static_cast<std::int64_t>(h.rank), h.defect});
    Json d;
    d["n"] = ns[i];
    d["sqrt_lambda_next"] = h.sqrt_lambda_next;
    d["chain_checked"] = h.chain_checked;
    d["chain_holds"] = h.chain_holds;
    d["sqrt_lambda_2q"] = h.a_2q;
    d["q_times_sqrt_lambda_2q"] = h.q_times_a_2q;
    d["sqrt_q_times_sqrt_lambda_2q"] = h.sqrt_q_times_a_2q;
    details.push_back(std::move(d));
    if (h.chain_checked && !h.chain_holds) chain_ok = false;
    if (i > 0 && !(h.defect < prev)) decreasing = false;
    prev = h.defect;
    if (h.defect > 0.0) {
      const double x = std::log(static_cast<double>(ns[i]));
      const double y = std::log(h.defect);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
  }
  res.summary["l"] = l;
  res.summary["r"] = r;
  res.summary["chain_holds"] = chain_ok;
  res.summary["strictly_decreasing"] = decreasing;
  const double cnt = static_cast<double>(ns.size());
  if (ns.size() >= 2 && cnt * sxx - sx * sx > 0.0) {
    res.summary["loglog_slope"] = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  res.summary["per_n"] = std::move(details);
  return res;
}

inline Result cmd_holder_fit(const RunConfig& c) {
  const auto s = make_spectrum(c, make_kernel(c));
  const auto f = make_family(c);
  const auto ts = t_values(c);
  const auto u = chebyshev_grid(c.ugrid);
  const auto fit = estimate_exponent(s, f, ts, u);
  Result res;
  res.columns = {"t", "deviation", "fitted_line"};
  for (const auto& pt : fit.points) res.rows.push_back({pt.t, pt.deviation, pt.fitted});
  res.summary["rho_hat"] = fit.rho_hat;
  res.summary["b_hat"] = fit.b_hat;
  res.summary["residual"] = fit.residual;
  res.summary["t_range"] = {fit.t_range.first, fit.t_range.second};
  res.summary["excluded"] = fit.excluded;
  const auto full = log_grid(ts.front(), 3.0, 40);
  res.summary["full_range_max_ratio"] = max_deviation_ratio(s, f, c.rho, full, u);
  res.summary["full_range_rho"] = c.rho;
  return res;
}

inline Result cmd_oracle_compare(const RunConfig& c) {
  if (c.m != 2) throw ConfigError("oracle-compare runs on S^2 only (--m 2)");
  const auto kernel = make_kernel(c);
  const auto s = make_spectrum(c, kernel);
  const auto grid = build_grid(c.ntheta, c.nphi);
  if (static_cast<std::size_t>(c.count) > grid.size()) {
    throw ConfigError("--count exceeds the grid size");
  }
  if (s.total_count() < static_cast<std::uint64_t>(c.count)) {
    throw ConfigError("--kmax too small for --count eigenvalues with multiplicity");
  }
  const auto all = gram_spectrum(kernel.profile, grid);
  const std::vector<double> oracle(all.begin(), all.begin() + c.count);
  const auto ref = sorted_eigenvalues(s, static_cast<std::uint64_t>(c.count));
  const auto cmp = compare_spectra(oracle, ref, c.floor);
  Result res;
  res.columns = {"n", "oracle", "reference", "rel_err"};
  for (int i = 0; i < c.count; ++i) {
    const double rel = ref[i] > 0.0 ? std::abs(oracle[i] - ref[i]) / ref[i]
                                    : std::numeric_limits<double>::quiet_NaN();
    res.rows.push_back({std::int64_t{i + 1}, oracle[i], ref[i], rel});
  }
  res.summary["n_theta"] = c.ntheta;
  res.summary["n_phi"] = c.nphi;
  res.summary["grid_size"] = grid.size();
  res.summary["matched"] = cmp.matched;
  res.summary["max_rel_err"] = cmp.max_rel_err;
  std::vector<std::uint64_t> expected;
  std::uint64_t covered = 0;
  for (const auto& b : s.blocks()) {
    if (covered + b.multiplicity > static_cast<std::uint64_t>(c.count)) break;
    expected.push_back(b.multiplicity);
    covered += b.multiplicity;
  }
  const auto plateaus = plateau_lengths(oracle);
  res.summary["plateaus"] = plateaus;
  res.summary["expected_plateaus"] = expected;
  bool match = plateaus.size() >= expected.size();
  for (std::size_t i = 0; match && i < expected.size(); ++i) match = plateaus[i] == expected[i];
  res.summary["plateaus_match"] = match;
  res.summary["min_eigenvalue_over_max"] = all.back() / all.front();
  return res;
}

inline Result cmd_decay_check(const RunConfig& c) {
  const auto s = make_spectrum(c, make_kernel(c));
  const std::uint64_t count = static_cast<std::uint64_t>(c.nmax) + 1;
  if (s.total_count() < count) {
    throw ConfigError("--kmax too small: spectrum holds " + std::to_string(s.total_count()) +
                      " eigenvalues with multiplicity, --nmax+1 = " + std::to_string(count));
  }
  const auto d = decay_diagnostic(s, c.rho, count);
  const double wexp = 0.5 + c.rho / (2.0 * c.m);
  Result res;
  res.columns = {"n", "lambda_n", "diagnostic", "width_diagnostic"};
  double wsup = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const double lam = s.value_at(i);
    // d_{n-1} n^{1/2 + rho/(2m)} with d_{n-1} = sqrt(lambda_n)
    const double wd = std::sqrt(lam) * std::pow(static_cast<double>(i + 1), wexp);
    wsup = std::max(wsup, wd);
    res.rows.push_back({static_cast<std::int64_t>(i + 1), lam, d.values[i], wd});
  }
  res.summary["rho"] = c.rho;
  res.summary["sup"] = d.sup;
  res.summary["argmax"] = d.argmax;
  res.summary["bounded"] = d.bounded;
  res.summary["width_sup"] = wsup;
  Json env = Json::array();
  for (const auto& [n, v] : decay_block_envelope(s, c.rho, count)) env.push_back({n, v});
  res.summary["block_envelope"] = std::move(env);
  return res;
}

inline Result dispatch(const RunConfig& c) {
  if (c.command == "spectrum") return cmd_spectrum(c);
  if (c.command == "widths") return cmd_widths(c);
  if (c.command == "multiplier") return cmd_multiplier(c);
  if (c.command == "approx-op") return cmd_approx_op(c);
  if (c.command == "hs-defect") return cmd_hs_defect(c);
  if (c.command == "holder-fit") return cmd_holder_fit(c);
  if (c.command == "oracle-compare") return cmd_oracle_compare(c);
  if (c.command == "decay-check") return cmd_decay_check(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline void report_error(std::ostream& err, const std::string& command, const char* kind,
                         const std::string& message) {
  Json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["command"] = command;
  j["message"] = message;
  std::string text;
  write_json(j, text);
  err << text << '\n';
}

/// Runs one command. Output goes to c.out if set, otherwise to `out`.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
    const Result res = dispatch(c);
    const std::string text = c.format == "json" ? render_json(c, res) : render_csv(res);
    if (c.out.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot open output file '" + c.out + "'");
      file << text;
      if (!file) throw ConfigError("failed writing output file '" + c.out + "'");
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    report_error(err, c.command, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {  // ConfigError, DimensionError
    report_error(err, c.command, "invalid_config", e.what());
    return kExitConfig;
  } catch (const std::domain_error& e) {
    report_error(err, c.command, "invalid_config", e.what());
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    report_error(err, c.command, "invalid_config", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    report_error(err, c.command, "numerical", e.what());
    return kExitNumerical;
  }
}

}  // namespace sphkern::cli
