#include "opsim/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opsim/error.hpp"

namespace opsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double example32_sq(long i) {
  if (i < 1) return 0.0;
  const double t = static_cast<double>(i + 1);
  return 1.0 / (t * t * t * std::log(t));
}

// Integral upper bound of sum_{i >= cut} alpha_i^2 for the example32 rule:
// sum_{t >= cut+1} 1/(t^3 ln t) <= int_cut^inf dt/(t^3 ln t) = E1(2 ln cut).
double example32_remainder(long cut) {
  const double x = 2.0 * std::log(static_cast<double>(cut));
  return -std::expint(-x);
}

long example32_cut(long k) { return std::max<long>(4 * k, 1000); }

// Smallest j with 2^j - 1 >= k.
long pisier_first_index(long k) {
  long j = 0;
  while ((1L << j) - 1 < k) ++j;
  return j;
}

std::vector<double> read_number_array(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(where + "/" + std::to_string(i), "expected a number");
    const double v = j[i].get<double>();
    if (!std::isfinite(v)) throw InputError(where + "/" + std::to_string(i), "non-finite entry");
    out.push_back(v);
  }
  return out;
}

}  // namespace

AlphaSeq AlphaSeq::explicit_values(std::vector<double> table) {
  for (double v : table)
    if (!std::isfinite(v)) throw InputError("", "alpha table has a non-finite entry");
  return AlphaSeq(Kind::Explicit, 0.0, std::move(table));
}

AlphaSeq AlphaSeq::pisier(double c) {
  if (!std::isfinite(c)) throw InputError("", "pisier ratio must be finite");
  return AlphaSeq(Kind::Pisier, c, {});
}

AlphaSeq AlphaSeq::example32() { return AlphaSeq(Kind::Example32, 0.0, {}); }

AlphaSeq AlphaSeq::geometric(double c) {
  if (!std::isfinite(c)) throw InputError("", "geometric ratio must be finite");
  return AlphaSeq(Kind::Geometric, c, {});
}

AlphaSeq AlphaSeq::from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InputError(pointer + "/kind", "alpha specifier needs a string kind");
  const std::string kind = j["kind"];
  auto ratio = [&](double fallback) {
    if (!j.contains("ratio")) return fallback;
    if (!j["ratio"].is_number()) throw InputError(pointer + "/ratio", "expected a number");
    return j["ratio"].get<double>();
  };
  if (kind == "explicit") {
    if (!j.contains("table")) throw InputError(pointer + "/table", "missing field");
    return explicit_values(read_number_array(j["table"], pointer + "/table"));
  }
  if (kind == "pisier") return pisier(ratio(1.0));
  if (kind == "example32") return example32();
  if (kind == "geometric") {
    if (!j.contains("ratio")) throw InputError(pointer + "/ratio", "missing field");
    return geometric(ratio(0.0));
  }
  throw InputError(pointer + "/kind", "unknown alpha kind '" + kind + "'");
}

Json AlphaSeq::to_json() const {
  switch (kind_) {
    case Kind::Explicit:
      return {{"kind", "explicit"}, {"table", table_}};
    case Kind::Pisier:
      return {{"kind", "pisier"}, {"ratio", ratio_}};
    case Kind::Example32:
      return {{"kind", "example32"}};
    case Kind::Geometric:
      return {{"kind", "geometric"}, {"ratio", ratio_}};
  }
  return {};
}

std::string AlphaSeq::name() const {
  switch (kind_) {
    case Kind::Explicit: return "explicit";
    case Kind::Pisier: return "pisier";
    case Kind::Example32: return "example32";
    case Kind::Geometric: return "geometric";
  }
  return "";
}

double AlphaSeq::operator[](long k) const {
  if (k < 0) return 0.0;
  switch (kind_) {
    case Kind::Explicit:
      return k < static_cast<long>(table_.size()) ? table_[k] : 0.0;
    case Kind::Pisier: {
      const unsigned long m = static_cast<unsigned long>(k) + 1;
      if ((m & (m - 1)) != 0) return 0.0;
      long j = 0;
      while ((1UL << j) < m) ++j;
      return std::pow(ratio_, static_cast<double>(j));
    }
    case Kind::Example32:
      return std::sqrt(example32_sq(k));
    case Kind::Geometric:
      return std::pow(ratio_, static_cast<double>(k));
  }
  return 0.0;
}

double AlphaSeq::tail(long k) const {
  k = std::max<long>(k, 0);
  switch (kind_) {
    case Kind::Explicit: {
      long double s = 0.0L;
      for (long i = static_cast<long>(table_.size()) - 1; i >= k; --i)
        s += static_cast<long double>(table_[i]) * table_[i];
      return static_cast<double>(s);
    }
    case Kind::Pisier: {
      const double x = ratio_ * ratio_;
      if (x >= 1.0) return kInf;
      return std::pow(x, static_cast<double>(pisier_first_index(k))) / (1.0 - x);
    }
    case Kind::Geometric: {
      const double x = ratio_ * ratio_;
      if (x >= 1.0) return kInf;
      return std::pow(x, static_cast<double>(k)) / (1.0 - x);
    }
    case Kind::Example32: {
      const long cut = example32_cut(k);
      long double s = example32_remainder(cut);
      for (long i = cut - 1; i >= k; --i) s += example32_sq(i);
      return static_cast<double>(s);
    }
  }
  return 0.0;
}

std::vector<double> AlphaSeq::tails(long k_max) const {
  std::vector<double> out(k_max + 1);
  if (kind_ == Kind::Example32) {
    const long cut = example32_cut(k_max);
    long double s = example32_remainder(cut);
    for (long i = cut - 1; i >= 0; --i) {
      s += example32_sq(i);
      if (i <= k_max) out[i] = static_cast<double>(s);
    }
    return out;
  }
  if (kind_ == Kind::Explicit) {
    long double s = 0.0L;
    const long len = static_cast<long>(table_.size());
    for (long i = std::max(len, k_max + 1) - 1; i >= 0; --i) {
      if (i < len) s += static_cast<long double>(table_[i]) * table_[i];
      if (i <= k_max) out[i] = static_cast<double>(s);
    }
    return out;
  }
  for (long k = 0; k <= k_max; ++k) out[k] = tail(k);
  return out;
}

AlphaSeq AlphaSeq::truncated(long n) const {
  std::vector<double> t(n);
  for (long k = 0; k < n; ++k) t[k] = (*this)[k];
  return explicit_values(std::move(t));
}

BetaWeight BetaWeight::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw InputError("", "beta must be positive");
  return BetaWeight(Kind::Const, value, {});
}

BetaWeight BetaWeight::sqrt_weight() { return BetaWeight(Kind::Sqrt, 0.0, {}); }

BetaWeight BetaWeight::table(std::vector<double> values) {
  if (values.empty()) throw InputError("", "beta table is empty");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("", "beta table entries must be positive");
  return BetaWeight(Kind::Table, 0.0, std::move(values));
}

BetaWeight BetaWeight::from_json(const Json& j, const std::string& pointer) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InputError(pointer + "/kind", "beta specifier needs a string kind");
  const std::string kind = j["kind"];
  try {
    if (kind == "const") {
      if (j.contains("value") && !j["value"].is_number())
        throw InputError(pointer + "/value", "expected a number");
      return constant(j.value("value", 1.0));
    }
    if (kind == "sqrt") return sqrt_weight();
    if (kind == "table") {
      if (!j.contains("table")) throw InputError(pointer + "/table", "missing field");
      return table(read_number_array(j["table"], pointer + "/table"));
    }
  } catch (const InputError& e) {
    if (!e.pointer().empty()) throw;
    throw InputError(pointer, e.what());
  }
  throw InputError(pointer + "/kind", "unknown beta kind '" + kind + "'");
}

Json BetaWeight::to_json() const {
  switch (kind_) {
    case Kind::Const: return {{"kind", "const"}, {"value", value_}};
    case Kind::Sqrt: return {{"kind", "sqrt"}};
    case Kind::Table: return {{"kind", "table"}, {"table", table_}};
  }
  return {};
}

double BetaWeight::operator()(long n) const {
  if (n < 0) throw Error("beta index must be nonnegative");
  switch (kind_) {
    case Kind::Const: return value_;
    case Kind::Sqrt: return std::sqrt(static_cast<double>(n) + 1.0);
    case Kind::Table:
      if (n >= static_cast<long>(table_.size()))
        throw InputError("", "beta table too short: index " + std::to_string(n) + " requested, " +
                                 std::to_string(table_.size()) + " entries");
      return table_[n];
  }
  return 1.0;
}

double BetaWeight::max_upto(long d) const {
  double m = 0.0;
  for (long n = 0; n <= d; ++n) m = std::max(m, (*this)(n));
  return m;
}

double BetaWeight::min_upto(long d) const {
  double m = kInf;
  for (long n = 0; n <= d; ++n) m = std::min(m, (*this)(n));
  return m;
}

std::vector<double> shift_weights(const BetaWeight& beta, long N) {
  if (N < 1) throw InputError("", "shift_weights: N must be >= 1");
  std::vector<double> w(N);
  for (long n = 0; n < N; ++n) {
    const double a = beta(n);
    const double b = beta(n + 1);
    if (!(a > 0.0) || !(b > 0.0)) throw Error("beta must be positive");
    // The square-root weight uses the closed form so weights are exact to one rounding.
    w[n] = beta.kind() == BetaWeight::Kind::Sqrt ? std::sqrt((n + 2.0) / (n + 1.0)) : b / a;
  }
  return w;
}

QuantityA quantity_A(const AlphaSeq& alpha, long k_max) {
  if (k_max < 1) throw InputError("", "quantity_A: k_max must be >= 1");
  const std::vector<double> t = alpha.tails(k_max);
  std::vector<double> sup(k_max + 1);
  double running = 0.0;
  for (long k = 0; k <= k_max; ++k) {
    const double kk = static_cast<double>(k + 1);
    running = std::max(running, kk * kk * t[k]);
    sup[k] = running;
  }
  QuantityA out;
  out.value = running;
  if (!std::isfinite(running)) {
    out.diverged = true;
    return out;
  }
  // Growth heuristic: the running sup more than doubled over the last decade.
  const long k0 = k_max / 10;
  if (k0 >= 1 && sup[k_max] > 2.0 * sup[k0]) out.diverged = true;
  // Analytic verdicts for the rules.
  const double c = std::abs(alpha.ratio());
  if (alpha.kind() == AlphaSeq::Kind::Pisier && c > 0.5) out.diverged = true;
  if (alpha.kind() == AlphaSeq::Kind::Geometric && c >= 1.0) out.diverged = true;
  return out;
}

QuantityB quantity_B(const AlphaSeq& alpha, double power, long n_max) {
  if (!(power >= 2.0)) throw InputError("", "quantity_B: power must be >= 2");
  if (n_max < 0) throw InputError("", "quantity_B: n_max must be >= 0");
  QuantityB out;
  long double s = 0.0L;
  for (long k = 0; k <= n_max; ++k) {
    const double a = alpha[k];
    if (a == 0.0) continue;
    s += std::pow(static_cast<long double>(k + 1), power) * a * a;
  }
  out.partial = static_cast<double>(s);

  const double c = alpha.ratio();
  switch (alpha.kind()) {
    case AlphaSeq::Kind::Explicit: {
      long double rest = 0.0L;
      const auto& t = alpha.table();
      for (long k = static_cast<long>(t.size()) - 1; k > n_max; --k)
        rest += std::pow(static_cast<long double>(k + 1), power) * t[k] * t[k];
      out.converged = true;
      out.bound = static_cast<double>(s + rest);
      break;
    }
    case AlphaSeq::Kind::Example32:
      // (k+1)^power alpha_k^2 = (k+1)^{power-3} / ln(k+1) >= 1/((k+1) ln(k+1)).
      out.converged = false;
      break;
    case AlphaSeq::Kind::Geometric: {
      const double x = c * c;
      out.converged = x < 1.0;
      if (out.converged) {
        const double nn = static_cast<double>(n_max);
        const double q = std::pow((nn + 3.0) / (nn + 2.0), power) * x;
        if (q < 1.0) {
          const double first = std::pow(nn + 2.0, power) * std::pow(x, nn + 1.0);
          out.bound = out.partial + first / (1.0 - q);
        }
      }
      break;
    }
    case AlphaSeq::Kind::Pisier: {
      // Nonzero terms sit at k = 2^j - 1 and equal (2^power c^2)^j.
      const double q = std::pow(2.0, power) * c * c;
      out.converged = q < 1.0;
      if (out.converged) {
        const long j1 = pisier_first_index(n_max + 1);
        out.bound = out.partial + std::pow(q, static_cast<double>(j1)) / (1.0 - q);
      }
      break;
    }
  }
  return out;
}

AbelSwap abel_swap_check(const std::vector<double>& alpha) {
  const long n = static_cast<long>(alpha.size());
  AbelSwap out;
  long double tail = 0.0L;
  long double lhs = 0.0L;
  long double rhs = 0.0L;
  for (long i = n - 1; i >= 0; --i) {
    const long double a2 = static_cast<long double>(alpha[i]) * alpha[i];
    tail += a2;
    lhs += static_cast<long double>(i + 1) * (i + 1) * tail;
    rhs += static_cast<long double>(i + 1) * (i + 2) * (2 * i + 3) / 6.0L * a2;
  }
  out.lhs = static_cast<double>(lhs);
  out.rhs = static_cast<double>(rhs);
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

bool decade_divergence(const std::vector<double>& partial) {
  const std::size_t n = partial.size();
  if (n < 100) return false;
  const double a = partial[n / 100 - 1];
  const double b = partial[n / 10 - 1];
  const double c = partial[n - 1];
  const double last = c - b;
  const double prev = b - a;
  if (!std::isfinite(c)) return true;
  if (last <= 0.0) return false;
  return last >= 0.5 * prev;
}

}  // namespace opsim
