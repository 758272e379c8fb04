#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opsim/linalg.hpp"
#include "opsim/matrix_json.hpp"
#include "opsim/nearness.hpp"
#include "opsim/shifts.hpp"

namespace opsim {

/// Positive sequence rho_n, n >= 1. Tables repeat their last entry past the
/// end; `power` is rho_n = base + scale * n^{-exponent}.
class RhoSeq {
 public:
  enum class Kind { Const, Table, Power };

  static RhoSeq constant(double value);
  static RhoSeq table(std::vector<double> values);
  static RhoSeq power(double base, double scale, double exponent);
  /// "const:2", "table:1,2,3", or a JSON object.
  static RhoSeq parse(const std::string& text);
  static RhoSeq from_json(const Json& j, const std::string& pointer = "");
  Json to_json() const;

  Kind kind() const { return kind_; }
  double operator()(long n) const;
  /// inf over m > n of rho_m.
  double inf_after(long n) const;

 private:
  RhoSeq(Kind kind, double a, double b, double c, std::vector<double> t)
      : kind_(kind), a_(a), b_(b), c_(c), table_(std::move(t)) {}
  Kind kind_;
  double a_, b_, c_;
  std::vector<double> table_;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

struct CrhoResult {
  double min_eig = 0.0;
  std::optional<double> tail_bound;
  Verdict verdict = Verdict::Inconclusive;
  Complex witness = 0.0;  // grid point attaining min_eig
  double r_max = 0.0;
  int grid = 0;
  int radii = 0;
  int N_trunc = 0;
};

/// Minimum eigenvalue of Re[I + sum_{n<=N} 2 lambda^n T^n / rho_n] over a polar
/// grid of the disk |lambda| <= r_max.
CrhoResult crho_positivity(const Operator& T, const RhoSeq& rho, double r_max, int grid, int N_trunc);

/// max_{1<=n<=n_max} |T^n - rho_n V* U^n V|.
double rho_dilation_check(const Operator& T, const Operator& U, const Operator& V, const RhoSeq& rho,
                          int n_max);

struct RaczDeficiency {
  double partial = 0.0;  // sum_{n<=N} (rho_{nk} - M)^2
  bool converged = false;
  std::optional<double> tail_estimate;  // power-law extrapolation of the remainder
  std::vector<double> majorants;        // |rho_{nk} - M|, n = 1..min(N, 4096)
};

RaczDeficiency racz_deficiency(const RhoSeq& rho, int k, double M, long N);

struct RaczPipeline {
  RaczDeficiency racz;
  double dilation_defect = 0.0;
  NearnessReport nearness;
  double bound = 0.0;  // (1-M)^2 + sum_n (defect_n + |rho_{nk} - M|)^2
  bool ok = false;     // s^2 <= bound
};

/// S = T^k against M V* U^{nk} V, given dilation data valid for nk <= 2N_dil.
RaczPipeline racz_pipeline(const Operator& T, const Dilation& dil, const RhoSeq& rho, int k, double M,
                           int N);

}  // namespace opsim
