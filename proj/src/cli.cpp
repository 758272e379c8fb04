#include "opsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "opsim/car.hpp"
#include "opsim/dilation.hpp"
#include "opsim/dominance.hpp"
#include "opsim/error.hpp"
#include "opsim/instances.hpp"
#include "opsim/nearness.hpp"
#include "opsim/renorm.hpp"
#include "opsim/rng.hpp"
#include "opsim/sequences.hpp"
#include "opsim/shifts.hpp"

namespace opsim::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kMatrixKeys{"t", "t1", "t2", "c", "v1", "v2", "x"};
const std::set<std::string> kCommonKeys{"seed", "subcommand", "description"};

const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"nearness", {"t1", "t2", "beta", "nmax"}},
      {"renorm", {"t", "c", "v1", "v2", "beta", "gamma", "d", "p", "x"}},
      {"rota", {"t", "beta", "d", "p", "x", "family_count"}},
      {"dominance", {"t1", "t2", "family", "degree", "level", "count", "vanishing", "csv", "expect_max"}},
      {"foguel", {"alpha", "N", "m", "nmax", "kmax"}},
      {"alpha", {"alpha", "kmax", "nmax", "powers", "abel_n"}},
      {"crho", {"t", "rho", "rmax", "grid", "ntrunc"}},
      {"shift", {"beta", "N", "multiplicity", "emit_matrix", "expect_two_isometry"}},
      {"pipeline", {"chain", "t", "beta", "d", "nmax", "alpha", "N", "m", "gamma"}},
  };
  return table;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
Json optional_number(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

// Reads typed values out of the config and records the effective value of
// every key it touches, so the echo reproduces the run exactly.
class Inputs {
 public:
  Inputs(const Json& cfg, fs::path base, std::uint64_t seed)
      : cfg_(cfg), base_(std::move(base)), seed_(seed) {}

  Json echo = Json::object();

  bool has(const std::string& key) const { return cfg_.contains(key) && !cfg_[key].is_null(); }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw InputError("/" + key, "missing required number");
      echo[key] = *fallback;
      return *fallback;
    }
    const Json& v = cfg_[key];
    if (!v.is_number()) throw InputError("/" + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError("/" + key, "non-finite number");
    echo[key] = v;
    return x;
  }

  long integer(const std::string& key, std::optional<long> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw InputError("/" + key, "missing required integer");
      echo[key] = *fallback;
      return *fallback;
    }
    const Json& v = cfg_[key];
    if (!v.is_number_integer()) throw InputError("/" + key, "expected an integer");
    echo[key] = v;
    return v.get<long>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) {
      echo[key] = fallback;
      return fallback;
    }
    if (!cfg_[key].is_boolean()) throw InputError("/" + key, "expected true or false");
    echo[key] = cfg_[key];
    return cfg_[key].get<bool>();
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    if (!has(key)) {
      if (!fallback) throw InputError("/" + key, "missing required string");
      echo[key] = *fallback;
      return *fallback;
    }
    if (!cfg_[key].is_string()) throw InputError("/" + key, "expected a string");
    echo[key] = cfg_[key];
    return cfg_[key].get<std::string>();
  }

  fs::path path(const std::string& key) {
    const fs::path p = fs::absolute(base_ / text(key)).lexically_normal();
    echo[key] = p.string();
    return p;
  }

  std::optional<Operator> optional_matrix(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return matrix(key);
  }

  Operator matrix(const std::string& key) {
    const std::string ptr = "/" + key;
    if (!has(key)) throw InputError(ptr, "missing required matrix");
    const Json& v = cfg_[key];
    if (v.is_string()) {
      const fs::path p = fs::absolute(base_ / v.get<std::string>()).lexically_normal();
      echo[key] = p.string();
      Json doc;
      try {
        doc = read_json_file(p);
      } catch (const InputError& e) {
        throw InputError(ptr, e.what());
      }
      return matrix_from_json(doc, ptr + "@" + p.string());
    }
    if (v.is_object() && v.contains("generate")) {
      const Json& g = v["generate"];
      if (!g.is_object()) throw InputError(ptr + "/generate", "expected an object");
      const std::string kind = g.value("kind", "gaussian");
      const int n = g.value("n", 4);
      const double cap = g.value("cap", 0.5);
      const std::uint64_t seed = g.contains("seed") ? g["seed"].get<std::uint64_t>()
                                                    : stream_seed(seed_, "input/" + key);
      echo[key] = {{"generate", {{"kind", kind}, {"n", n}, {"cap", cap}}}};
      if (g.contains("seed")) echo[key]["generate"]["seed"] = g["seed"];
      try {
        return gen_instance(kind, n, cap, seed);
      } catch (const InputError& e) {
        throw InputError(ptr + "/generate" + e.pointer(), e.what());
      }
    }
    const Operator A = matrix_from_json(v, ptr);
    echo[key] = matrix_to_json(A);
    return A;
  }

  BetaWeight beta(const std::string& key = "beta") {
    const std::string ptr = "/" + key;
    BetaWeight b = BetaWeight::constant(1.0);
    if (has(key)) {
      const Json& v = cfg_[key];
      if (v.is_string()) {
        b = parse_beta(v.get<std::string>(), ptr);
      } else {
        b = BetaWeight::from_json(v, ptr);
      }
    }
    echo[key] = b.to_json();
    return b;
  }

  AlphaSeq alpha(const std::string& key = "alpha") {
    const std::string ptr = "/" + key;
    if (!has(key)) throw InputError(ptr, "missing alpha specifier");
    const Json& v = cfg_[key];
    AlphaSeq a = v.is_string() ? parse_alpha(v.get<std::string>(), ptr) : AlphaSeq::from_json(v, ptr);
    echo[key] = a.to_json();
    return a;
  }

  RhoSeq rho(const std::string& key = "rho") {
    if (!has(key)) throw InputError("/" + key, "missing rho specifier");
    RhoSeq r = RhoSeq::from_json(cfg_[key], "/" + key);
    echo[key] = r.to_json();
    return r;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) {
      echo[key] = fallback;
      return fallback;
    }
    const Json& v = cfg_[key];
    if (!v.is_array()) throw InputError("/" + key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw InputError("/" + key + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    echo[key] = v;
    return out;
  }

  bool gamma_is_number() const { return has("gamma") && cfg_["gamma"].is_number(); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::vector<double> csv_numbers(const std::string& s, const std::string& ptr) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InputError(ptr, "not a number: '" + item + "'");
      }
    }
    return out;
  }

  static BetaWeight parse_beta(const std::string& s, const std::string& ptr) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    try {
      if (kind == "const") return BetaWeight::constant(rest.empty() ? 1.0 : csv_numbers(rest, ptr).at(0));
      if (kind == "sqrt") return BetaWeight::sqrt_weight();
      if (kind == "table") return BetaWeight::table(csv_numbers(rest, ptr));
    } catch (const InputError& e) {
      throw InputError(ptr, e.what());
    }
    throw InputError(ptr, "cannot parse beta specifier '" + s + "'");
  }

  static AlphaSeq parse_alpha(const std::string& s, const std::string& ptr) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "example32") return AlphaSeq::example32();
    if (kind == "pisier") return AlphaSeq::pisier(rest.empty() ? 1.0 : csv_numbers(rest, ptr).at(0));
    if (kind == "geometric" && !rest.empty()) return AlphaSeq::geometric(csv_numbers(rest, ptr).at(0));
    if (kind == "explicit" && !rest.empty()) return AlphaSeq::explicit_values(csv_numbers(rest, ptr));
    throw InputError(ptr, "cannot parse alpha specifier '" + s + "'");
  }

  const Json& cfg_;
  fs::path base_;
  std::uint64_t seed_;
};

class Verdicts {
 public:
  void add(const std::string& name, Verdict status, double margin, double tolerance,
           Json truncation = Json::object()) {
    list_.push_back({{"name", name},
                     {"status", verdict_name(status)},
                     {"margin", number_or_null(margin)},
                     {"tolerance", tolerance},
                     {"truncation", std::move(truncation)}});
    if (status == Verdict::Fail) failed_ = true;
  }
  // Passes when margin >= -tolerance.
  void check(const std::string& name, double margin, double tolerance, Json truncation = Json::object()) {
    add(name, margin >= -tolerance ? Verdict::Pass : Verdict::Fail, margin, tolerance, std::move(truncation));
  }
  void prefix_all(const std::string& p, std::size_t from) {
    for (std::size_t i = from; i < list_.size(); ++i) list_[i]["name"] = p + list_[i]["name"].get<std::string>();
  }
  std::size_t size() const { return list_.size(); }
  bool failed() const { return failed_; }
  const Json& json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool failed_ = false;
};

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(number_or_null(x));
  return out;
}

Json nearness_json(const NearnessReport& r) {
  return {{"s", r.s},
          {"u", r.u},
          {"s_partial", vector_json(r.s_partial)},
          {"term_norms", vector_json(r.term_norms)},
          {"tail_bound", optional_number(r.tail_bound)},
          {"N_used", r.N_used},
          {"monotone", r.monotone}};
}

void nearness_verdicts(const NearnessReport& r, Verdicts& v) {
  double min_step = 0.0;
  for (std::size_t i = 1; i < r.s_partial.size(); ++i)
    min_step = std::min(min_step, r.s_partial[i] - r.s_partial[i - 1]);
  const Json trunc = {{"N", r.N_used}};
  v.add("s_partial_nondecreasing", r.monotone ? Verdict::Pass : Verdict::Fail, min_step, 1e-13, trunc);
  v.check("s_le_u", r.u - r.s, 1e-10, trunc);
}

Json cert_json(const GramCertificate& c, bool with_matrices) {
  Json j = {{"s_d", c.s_d},
            {"gamma", c.gamma},
            {"eig_lo", c.eig_lo},
            {"eig_hi", c.eig_hi},
            {"bound_lo", number_or_null(c.bound_lo)},
            {"bound_hi", c.bound_hi},
            {"sim_const", c.sim_const},
            {"sim_bound", c.sim_bound},
            {"norm_T1", c.norm_T1},
            {"condition_estimate", c.condition_estimate},
            {"d", c.d},
            {"rota", c.rota}};
  if (with_matrices) {
    j["G"] = matrix_to_json(c.G);
    j["L"] = matrix_to_json(c.L);
    j["T1"] = matrix_to_json(c.T1);
  }
  return j;
}

void cert_verdicts(const GramCertificate& c, const RenormConfig& cfg, bool auto_gamma, Verdicts& v) {
  const EquivalenceMargins m = equivalence_check(c, cfg);
  const Json trunc = {{"d", c.d}};
  v.check("equivalence_lower", m.lower, 1e-8, trunc);
  v.check("equivalence_upper", m.upper, 1e-8, trunc);
  if (auto_gamma || c.rota) v.check("similarity_constant_bound", c.sim_bound * (1.0 + 1e-6) - c.sim_const, 0.0, trunc);
}

Json run_nearness(Inputs& in, Verdicts& v) {
  const Operator T1 = in.matrix("t1");
  const Operator T2 = in.matrix("t2");
  const BetaWeight beta = in.beta();
  const long nmax = in.integer("nmax", 64);
  const NearnessReport r = quadratic_nearness(T1, T2, beta, nmax);
  nearness_verdicts(r, v);
  return nearness_json(r);
}

Vector read_x(Inputs& in, Eigen::Index n) {
  if (!in.has("x")) return Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  const Operator X = in.matrix("x");
  if (X.cols() != 1 || X.rows() != n) throw InputError("/x", "x must be a dim(T) x 1 matrix");
  return X.col(0);
}

Json run_renorm(Inputs& in, Verdicts& v, bool rota) {
  RenormConfig cfg;
  cfg.T = in.matrix("t");
  if (!rota) {
    cfg.C = in.optional_matrix("c");
    if (auto m = in.optional_matrix("v1")) cfg.V1 = *m;
    if (auto m = in.optional_matrix("v2")) cfg.V2 = *m;
  }
  cfg.beta = in.beta();
  cfg.d = static_cast<int>(in.integer("d", 16));
  cfg.p = in.number("p", 2.0);
  bool auto_gamma = true;
  if (!rota) {
    if (in.gamma_is_number()) {
      cfg.gamma = in.number("gamma");
      if (!(*cfg.gamma > 0.0)) throw InputError("/gamma", "gamma must be positive");
      auto_gamma = false;
    } else if (in.text("gamma", "auto") != "auto") {
      throw InputError("/gamma", "expected \"auto\" or a positive number");
    }
  }
  if (cfg.d < 0) throw InputError("/d", "d must be >= 0");

  Json results;
  if (cfg.p != 2.0) {
    if (!cfg.rota()) throw InputError("/p", "p != 2 is supported in Rota mode (no C) only");
    const Vector x = read_x(in, cfg.T.rows());
    const double value = banach_norm_value(cfg.T, x, cfg.p, cfg.beta, cfg.d);
    results = {{"norm_value", value}, {"p", cfg.p}, {"d", cfg.d}};
    v.check("length_one_upper_bound", cfg.beta(0) * x.norm() - value, 1e-8 * std::max(1.0, value),
            {{"d", cfg.d}});
    return results;
  }
  const GramCertificate cert = build_gram(cfg);
  results = cert_json(cert, true);
  cert_verdicts(cert, cfg, auto_gamma, v);
  if (in.has("x")) {
    const Vector x = read_x(in, cfg.T.rows());
    const double gram = std::sqrt(gram_norm_sq(cert.G, x));
    results["x_norm_gram"] = gram;
    if (cfg.rota()) {
      const double value = banach_norm_value(cfg.T, x, 2.0, cfg.beta, cfg.d);
      results["x_norm_descent"] = value;
      v.check("descent_matches_gram", 1e-6 * gram - std::abs(value - gram), 0.0, {{"d", cfg.d}});
    }
  }
  if (rota) {
    const Json trunc = {{"d", cert.d}};
    v.check("T1_contraction", 1.0 + 1e-8 - cert.norm_T1, 0.0, trunc);
    PolyFamily fam;
    fam.count = static_cast<int>(in.integer("family_count", 16));
    fam.degree_max = 4;
    fam.seed = stream_seed(in.seed(), "rota/paulsen");
    const RatioResult pr = paulsen_ratio(cert.T1, fam, 1);
    results["paulsen_ratio_T1"] = pr.max_ratio;
    results["paulsen_label"] = "lower bound";
    v.check("paulsen_T1", 1.0 + 1e-6 - pr.max_ratio, 0.0, {{"d", cert.d}, {"grid", 1024}});
  }
  return results;
}

Json run_dominance(Inputs& in, Verdicts& v, std::string& csv) {
  const Operator T1 = in.matrix("t1");
  const std::optional<Operator> T2 = in.optional_matrix("t2");
  PolyFamily fam;
  fam.kind = PolyFamily::parse_kind(in.text("family", "random_coeff"));
  fam.degree_max = static_cast<int>(in.integer("degree", 3));
  fam.count = static_cast<int>(in.integer("count", 32));
  fam.d = static_cast<int>(in.integer("vanishing", 0));
  fam.seed = stream_seed(in.seed(), "dominance/family");
  const int level = static_cast<int>(in.integer("level", 1));
  const auto family = sample_family(fam, level);
  const RatioResult r = T2 ? dominance_ratio(T1, *T2, family) : paulsen_ratio(T1, family);

  std::ostringstream out;
  out << "index,ratio\r\n";
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    out << i << ',';
    if (std::isfinite(r.ratios[i])) out << Json(r.ratios[i]).dump();
    out << "\r\n";
  }
  csv = out.str();
  if (in.has("csv")) in.path("csv");

  Json results = {{"mode", T2 ? "dominance" : "paulsen"},
                  {"label", "lower bound"},
                  {"max_ratio", r.max_ratio},
                  {"witness_index", r.witness_index},
                  {"skipped", r.skipped},
                  {"evaluated", r.ratios.size()}};
  if (in.has("expect_max")) {
    const double bound = in.number("expect_max");
    v.check("ratio_le_expected", bound - r.max_ratio, 1e-8 * std::max(1.0, bound),
            {{"level", level}, {"count", fam.count}});
  }
  return results;
}

Json quantity_b_json(const QuantityB& q) {
  return {{"partial", q.partial}, {"converged", q.converged}, {"bound", optional_number(q.bound)}};
}

Json run_foguel(Inputs& in, Verdicts& v) {
  const AlphaSeq alpha = in.alpha();
  const int N = static_cast<int>(in.integer("N", 2));
  if (N < 1) throw InputError("/N", "N must be >= 1");
  const int m = static_cast<int>(in.integer("m", 2 * N - 1));
  if (m < 2 * N - 1) throw InputError("/m", "insufficient modes: need m >= 2N - 1");
  if (m > 12) throw InputError("/m", "m must be <= 12");
  const int nmax = static_cast<int>(in.integer("nmax", 2 * N - 1));
  const long kmax = in.integer("kmax", 1000);
  if (nmax < 1) throw InputError("/nmax", "nmax must be >= 1");

  const QuantityA A = quantity_A(alpha, kmax);
  const QuantityB B2 = quantity_B(alpha, 2.0, kmax);
  const QuantityB B3 = quantity_B(alpha, 3.0, kmax);
  const FoguelHankel fh = foguel_hankel(alpha, N, m);
  // The truncated operator only sees alpha_0 .. alpha_{2N-2}.
  const AlphaSeq seen = alpha.truncated(2 * N - 1);

  Json diffs = Json::array();
  long double sum_sq = 0.0L;
  int literal_violations = 0;
  for (int n = 1; n <= nmax; ++n) {
    const double value = power_diff_norm(fh, n);
    const double literal = power_diff_bound_literal(alpha, n);
    const double shifted = power_diff_bound_shifted(alpha, n);
    if (value > literal + 1e-10) ++literal_violations;
    sum_sq += static_cast<long double>(value) * value;
    diffs.push_back({{"n", n}, {"value", value}, {"bound", literal}, {"bound_shifted", shifted}});
    v.check("power_diff_bound_n" + std::to_string(n), shifted - value, 1e-10, {{"N", N}, {"m", m}});
  }
  const AbelSwap abel = abel_swap_check(seen.table());
  long double tail_side = 0.0L;
  const auto tails = seen.tails(2 * N - 2);
  for (int n = 0; n <= 2 * N - 2; ++n) tail_side += static_cast<long double>(n + 1) * (n + 1) * tails[n];
  v.check("b3_sum", static_cast<double>(tail_side - sum_sq), 1e-8, {{"N", N}, {"m", m}, {"nmax", nmax}});
  v.check("b3_rhs_abel", 1e-12 * std::max(1.0, abel.rhs) - std::abs(static_cast<double>(tail_side) - abel.rhs),
          0.0);

  return {{"alpha_spec", alpha.to_json()},
          {"N", N},
          {"m", m},
          {"A", number_or_null(A.value)},
          {"A_diverged", A.diverged},
          {"B2", quantity_b_json(B2)},
          {"B3", quantity_b_json(B3)},
          {"norm_Y", op_norm(fh.Y)},
          {"power_diffs", diffs},
          {"sum_power_diff_sq", static_cast<double>(sum_sq)},
          {"sum_weighted_tails", static_cast<double>(tail_side)},
          {"literal_bound_violations", literal_violations}};
}

Json run_alpha(Inputs& in, Verdicts& v) {
  const AlphaSeq alpha = in.alpha();
  const long kmax = in.integer("kmax", 1000);
  const long nmax = in.integer("nmax", 1000);
  const std::vector<double> powers = in.numbers("powers", {2.0, 3.0});
  const long abel_n = in.integer(
      "abel_n", alpha.kind() == AlphaSeq::Kind::Explicit ? std::max<long>(1, alpha.table().size()) : 50);
  if (abel_n < 1) throw InputError("/abel_n", "abel_n must be >= 1");

  const QuantityA A = quantity_A(alpha, kmax);
  Json B = Json::array();
  for (double p : powers) {
    Json q = quantity_b_json(quantity_B(alpha, p, nmax));
    q["power"] = p;
    B.push_back(q);
  }
  const AlphaSeq trunc = alpha.truncated(abel_n);
  const AbelSwap abel = abel_swap_check(trunc.table());
  v.check("abel_identity", 1e-12 * std::max(abel.lhs, 1.0) - abel.defect, 0.0, {{"terms", abel_n}});
  const long shown = std::min<long>(kmax, 16);
  const auto tails = alpha.tails(shown);
  return {{"alpha_spec", alpha.to_json()},
          {"A", number_or_null(A.value)},
          {"A_diverged", A.diverged},
          {"B", B},
          {"abel", {{"lhs", abel.lhs}, {"rhs", abel.rhs}, {"defect", abel.defect}}},
          {"tails_head", vector_json(tails)}};
}

Json run_crho(Inputs& in, Verdicts& v) {
  const Operator T = in.matrix("t");
  const RhoSeq rho = in.rho();
  const double rmax = in.number("rmax", 0.99);
  const int grid = static_cast<int>(in.integer("grid", 256));
  const int ntrunc = static_cast<int>(in.integer("ntrunc", 64));
  const CrhoResult r = crho_positivity(T, rho, rmax, grid, ntrunc);
  const Json trunc = {{"rmax", rmax}, {"grid", grid}, {"radii", r.radii}, {"ntrunc", ntrunc}};
  v.add("crho_positivity", r.verdict, r.min_eig + r.tail_bound.value_or(0.0), 1e-10, trunc);
  return {{"min_eig", r.min_eig},
          {"tail_bound", optional_number(r.tail_bound)},
          {"verdict", verdict_name(r.verdict)},
          {"witness", {r.witness.real(), r.witness.imag()}},
          {"witness_modulus", std::abs(r.witness)}};
}

Json run_shift(Inputs& in, Verdicts& v) {
  const BetaWeight beta = in.beta();
  const long N = in.integer("N", 16);
  const long mult = in.integer("multiplicity", 1);
  const bool emit = in.flag("emit_matrix", false);
  const bool expect = in.flag("expect_two_isometry", false);
  if (N < 2) throw InputError("/N", "N must be >= 2");
  if (mult < 1 || N * mult > 4096) throw InputError("/multiplicity", "multiplicity must be in [1, 4096/N]");
  const TruncatedShift S = truncated_weighted_shift(beta, N, mult);
  Json out = {{"N", N}, {"multiplicity", mult}, {"weights", vector_json(S.weights)}};
  if (N >= 4) {
    const double defect = two_isometry_defect(S);
    out["two_isometry_defect"] = defect;
    if (expect) v.check("two_isometry", 1e-12 - defect, 0.0, {{"N", N}, {"window", N - 2}});
  } else if (expect) {
    throw InputError("/N", "two-isometry check needs N >= 4");
  }
  if (emit) out["matrix"] = matrix_to_json(S.matrix);
  return out;
}

Json run_pipeline(Inputs& in, Verdicts& v) {
  const std::string chain = in.text("chain");
  Json stages = Json::object();
  if (chain == "rota") {
    const Operator T = in.matrix("t");
    const BetaWeight beta = in.beta();
    const int d = static_cast<int>(in.integer("d", 48));
    const long nmax = in.integer("nmax", 64);
    std::size_t mark = v.size();
    const Operator Z = Operator::Zero(T.rows(), T.cols());
    const NearnessReport near = quadratic_nearness(T, Z, beta, nmax);
    stages["nearness"] = nearness_json(near);
    v.add("near_zero_tail_controlled", near.tail_bound ? Verdict::Pass : Verdict::Inconclusive,
          near.tail_bound.value_or(NAN), 0.0, {{"N", nmax}});
    v.prefix_all("nearness/", mark);

    mark = v.size();
    RenormConfig cfg;
    cfg.T = T;
    cfg.beta = beta;
    cfg.d = d;
    const GramCertificate cert = build_gram(cfg);
    stages["renorm"] = cert_json(cert, false);
    cert_verdicts(cert, cfg, true, v);
    v.check("T1_contraction", 1.0 + 1e-8 - cert.norm_T1, 0.0, {{"d", d}});
    v.prefix_all("renorm/", mark);

    mark = v.size();
    PolyFamily fam;
    fam.count = 16;
    fam.degree_max = 4;
    fam.seed = stream_seed(in.seed(), "pipeline/paulsen");
    const RatioResult pr = paulsen_ratio(cert.T1, fam, 2);
    stages["paulsen"] = {{"max_ratio", pr.max_ratio}, {"label", "lower bound"}, {"level", 2}};
    v.check("T1_polynomially_bounded", 1.0 + 1e-6 - pr.max_ratio, 0.0, {{"level", 2}, {"count", 2 * fam.count}});
    v.prefix_all("paulsen/", mark);
  } else if (chain == "b3") {
    const AlphaSeq alpha = in.alpha();
    const int N = static_cast<int>(in.integer("N", 2));
    const int m = static_cast<int>(in.integer("m", 2 * N - 1));
    const int d = static_cast<int>(in.integer("d", 8));
    if (N < 1 || m < 2 * N - 1 || m > 12) throw InputError("/m", "need 1 <= N and 2N - 1 <= m <= 12");
    if (2L * N * (1L << m) > 256) throw InputError("/m", "pipeline renorm is dense: need 2N 2^m <= 256");
    const AlphaSeq seen = alpha.truncated(2 * N - 1);

    std::size_t mark = v.size();
    const QuantityB B3 = quantity_B(seen, 3.0, 2 * N - 2);
    const AbelSwap abel = abel_swap_check(seen.table());
    stages["b3"] = {{"B3", quantity_b_json(B3)}, {"abel_rhs", abel.rhs}, {"abel_defect", abel.defect}};
    v.check("abel_identity", 1e-12 * std::max(abel.lhs, 1.0) - abel.defect, 0.0);
    v.prefix_all("b3/", mark);

    mark = v.size();
    const FoguelHankel fh = foguel_hankel(alpha, N, m);
    long double sum_sq = 0.0L;
    for (int n = 1; n <= 2 * N - 1; ++n) sum_sq += std::pow(static_cast<long double>(power_diff_norm(fh, n)), 2);
    stages["power_diffs"] = {{"sum_sq", static_cast<double>(sum_sq)}};
    v.check("sum_le_abel_rhs", abel.rhs - static_cast<double>(sum_sq), 1e-8);
    v.prefix_all("power_diffs/", mark);

    mark = v.size();
    const Operator R = fh.R.toDense();
    const Operator R0 = fh.R0.toDense();
    const NearnessReport near = quadratic_nearness(R, R0, BetaWeight::constant(1.0), 2 * N);
    stages["nearness"] = nearness_json(near);
    v.check("s_sq_le_sum", static_cast<double>(sum_sq) - near.s * near.s, 1e-10);
    v.prefix_all("nearness/", mark);

    mark = v.size();
    RenormConfig cfg;
    cfg.T = R;
    cfg.C = R0;
    cfg.d = d;
    bool auto_gamma = true;
    if (in.gamma_is_number()) {
      cfg.gamma = in.number("gamma");
      auto_gamma = false;
    } else if (in.text("gamma", "auto") != "auto") {
      throw InputError("/gamma", "expected \"auto\" or a positive number");
    }
    const GramCertificate cert = build_gram(cfg);
    stages["renorm"] = cert_json(cert, false);
    cert_verdicts(cert, cfg, auto_gamma, v);
    v.prefix_all("renorm/", mark);
  } else {
    throw InputError("/chain", "unknown chain '" + chain + "' (expected rota or b3)");
  }
  return {{"chain", chain}, {"stages", stages}};
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> subs = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : key_table()) out.push_back(k);
    return out;
  }();
  return subs;
}

const std::vector<std::string>& keys_for(const std::string& subcommand) {
  const auto it = key_table().find(subcommand);
  if (it == key_table().end()) throw InputError("/subcommand", "unknown subcommand '" + subcommand + "'");
  return it->second;
}

RunOutput run_config(const std::string& subcommand, const Json& config, const fs::path& base_dir) {
  const auto& keys = keys_for(subcommand);
  if (!config.is_object()) throw InputError("", "config must be a JSON object");
  for (const auto& [key, _] : config.items()) {
    if (kCommonKeys.count(key)) continue;
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw InputError("/" + key, "unknown key for subcommand '" + subcommand + "'");
  }
  if (config.contains("subcommand") && config["subcommand"] != subcommand)
    throw InputError("/subcommand", "config is for '" + config["subcommand"].dump() + "'");
  std::uint64_t seed = 0;
  if (config.contains("seed")) {
    if (!config["seed"].is_number_unsigned() && !config["seed"].is_number_integer())
      throw InputError("/seed", "seed must be a nonnegative integer");
    seed = config["seed"].get<std::uint64_t>();
  }

  const auto start = std::chrono::steady_clock::now();
  Inputs in(config, base_dir, seed);
  Verdicts v;
  RunOutput out;
  Json results;
  if (subcommand == "nearness") results = run_nearness(in, v);
  else if (subcommand == "renorm") results = run_renorm(in, v, false);
  else if (subcommand == "rota") results = run_renorm(in, v, true);
  else if (subcommand == "dominance") results = run_dominance(in, v, out.csv);
  else if (subcommand == "foguel") results = run_foguel(in, v);
  else if (subcommand == "alpha") results = run_alpha(in, v);
  else if (subcommand == "crho") results = run_crho(in, v);
  else if (subcommand == "shift") results = run_shift(in, v);
  else if (subcommand == "pipeline") results = run_pipeline(in, v);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json echo = in.echo;
  echo["subcommand"] = subcommand;
  echo["seed"] = seed;
  if (config.contains("description")) echo["description"] = config["description"];
  out.report = {{"tool", "opsim"},
                {"version", "0.1.0"},
                {"subcommand", subcommand},
                {"config", echo},
                {"results", results},
                {"verdicts", v.json()},
                {"timings", {{"total_seconds", seconds}}}};
  out.exit_code = v.failed() ? kExitFail : kExitOk;
  return out;
}

int main(int argc, char** argv) {
  CLI::App app{"opsim: numerical similarity and renorming laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::map<std::string, std::map<std::string, std::string>> overrides;
  for (const auto& sub : subcommands()) {
    CLI::App* sc = app.add_subcommand(sub, "run the " + sub + " workflow");
    sc->add_option("--config", config_path, "JSON config file")->required();
    sc->add_option("--out", out_path, "report path (stdout when absent)");
    for (const auto& key : keys_for(sub)) sc->add_option("--" + key, overrides[sub][key], "override config key");
    sc->add_option("--seed", overrides[sub]["seed"], "override the seed");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    const fs::path cfg_file = fs::absolute(config_path);
    Json config = read_json_file(cfg_file);
    if (!config.is_object()) throw InputError("", "config must be a JSON object");
    for (const auto& [key, raw] : overrides[sub]) {
      if (raw.empty()) continue;
      Json value;
      try {
        value = Json::parse(raw);
      } catch (const Json::parse_error&) {
        value = raw;
      }
      if (value.is_string() && (kMatrixKeys.count(key) || key == "csv"))
        value = fs::absolute(value.get<std::string>()).lexically_normal().string();
      config[key] = value;
    }
    RunOutput result = run_config(sub, config, cfg_file.parent_path());
    const std::string text = result.report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_file_atomic(out_path, text);
    }
    if (!result.csv.empty()) {
      fs::path csv_path;
      if (result.report["config"].contains("csv")) {
        csv_path = result.report["config"]["csv"].get<std::string>();
      } else if (!out_path.empty()) {
        csv_path = fs::path(out_path).replace_extension(".csv");
      }
      if (!csv_path.empty()) write_file_atomic(csv_path, result.csv);
    }
    for (const auto& verdict : result.report["verdicts"])
      if (verdict["status"] == "fail")
        std::cerr << "FAIL " << verdict["name"].get<std::string>() << " margin " << verdict["margin"].dump() << "\n";
    return result.exit_code;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace opsim::cli
