#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opsim/matrix_json.hpp"

namespace opsim {

/// Square-summable scalar sequence, either an explicit finite table or one
/// of three closed-form rules.
class AlphaSeq {
 public:
  enum class Kind { Explicit, Pisier, Example32, Geometric };

  static AlphaSeq explicit_values(std::vector<double> table);
  /// alpha_{2^j - 1} = c^j, zero elsewhere. c = 1 is the literal (divergent) rule.
  static AlphaSeq pisier(double c = 1.0);
  /// alpha_k = (k+1)^{-3/2} log(k+1)^{-1/2} for k >= 1, alpha_0 = 0.
  static AlphaSeq example32();
  static AlphaSeq geometric(double c);

  static AlphaSeq from_json(const Json& j, const std::string& pointer = "");
  Json to_json() const;

  Kind kind() const { return kind_; }
  double ratio() const { return ratio_; }
  const std::vector<double>& table() const { return table_; }
  std::string name() const;

  double operator[](long k) const;
  /// sum_{i >= k} |alpha_i|^2; +inf when the rule is not square summable.
  /// Example32 tails add an integral upper bound for the far remainder.
  double tail(long k) const;
  /// tail(0) .. tail(k_max), in one backward pass.
  std::vector<double> tails(long k_max) const;
  /// alpha_0 .. alpha_{n-1} as an explicit table.
  AlphaSeq truncated(long n) const;

 private:
  AlphaSeq(Kind kind, double ratio, std::vector<double> table)
      : kind_(kind), ratio_(ratio), table_(std::move(table)) {}

  Kind kind_;
  double ratio_;
  std::vector<double> table_;
};

/// Strictly positive weight beta(n), n >= 0.
class BetaWeight {
 public:
  enum class Kind { Const, Sqrt, Table };

  static BetaWeight constant(double value = 1.0);
  /// beta(n) = sqrt(n + 1): the weight whose shift is the Dirichlet shift.
  static BetaWeight sqrt_weight();
  static BetaWeight table(std::vector<double> values);

  static BetaWeight from_json(const Json& j, const std::string& pointer = "");
  Json to_json() const;

  Kind kind() const { return kind_; }
  double operator()(long n) const;
  /// max over n <= d of beta(n), and the min.
  double max_upto(long d) const;
  double min_upto(long d) const;

 private:
  BetaWeight(Kind kind, double value, std::vector<double> table)
      : kind_(kind), value_(value), table_(std::move(table)) {}

  Kind kind_;
  double value_;
  std::vector<double> table_;
};

/// (w_0, ..., w_{N-1}) with w_n = beta(n+1) / beta(n).
std::vector<double> shift_weights(const BetaWeight& beta, long N);

struct QuantityA {
  double value = 0.0;
  bool diverged = false;
};

/// sup_{0<=k<=k_max} (k+1)^2 tail(k).
QuantityA quantity_A(const AlphaSeq& alpha, long k_max);

struct QuantityB {
  double partial = 0.0;
  bool converged = true;
  /// Upper bound on the whole series when an analytic tail bound exists.
  std::optional<double> bound;
};

/// sum_{k<=n_max} (k+1)^power |alpha_k|^2 with convergence decided analytically
/// for the rule sequences.
QuantityB quantity_B(const AlphaSeq& alpha, double power, long n_max);

struct AbelSwap {
  double lhs = 0.0;
  double rhs = 0.0;
  double defect = 0.0;
};

/// lhs = sum_n (n+1)^2 sum_{i>=n} a_i^2, rhs = sum_i (i+1)(i+2)(2i+3)/6 a_i^2.
AbelSwap abel_swap_check(const std::vector<double>& alpha);

/// True when the increments of `partial` over the last decade of indices are
/// at least half those of the previous decade: the sequence is not settling.
bool decade_divergence(const std::vector<double>& partial);

}  // namespace opsim
