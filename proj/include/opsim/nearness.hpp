#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "opsim/linalg.hpp"
#include "opsim/sequences.hpp"

namespace opsim {

struct NearnessReport {
  /// s_partial[N] = |A_N|^{1/2}, A_N = sum_{n<=N} D_n D_n* / beta(n)^2.
  std::vector<double> s_partial;
  double s = 0.0;
  /// (sum_{n<=N} |D_n|^2 / beta(n)^2)^{1/2}; always >= s.
  double u = 0.0;
  /// Bound on (sum_{n>N} |D_n|^2 / beta(n)^2)^{1/2}, when the powers decay.
  std::optional<double> tail_bound;
  long N_used = 0;
  /// |D_n| / beta(n) for n = 0..N.
  std::vector<double> term_norms;
  /// s_partial nondecreasing up to roundoff (relative 1e-13).
  bool monotone = true;
};

/// D_n = T1^n - T2^n.
NearnessReport quadratic_nearness(const Operator& T1, const Operator& T2, const BetaWeight& beta,
                                  long N_max);

/// D_n = T^n - V1 C^n V2, including the n = 0 term I - V1 V2.
NearnessReport factored_nearness(const Operator& T, const Operator& V1, const Operator& C,
                                 const Operator& V2, const BetaWeight& beta, long N_max);

/// max over sampled y of sum_{n<=N} |D_n* y|^2 / beta(n)^2 / |y|^2. Each
/// sample gets two power-iteration steps with A_N before it is scored.
double row_form_check(const Operator& T1, const Operator& T2, const BetaWeight& beta, long N,
                      int samples, std::uint64_t seed = 7);

struct AsymptoticNearness {
  std::vector<double> norms;  // |T1^n - T2^n|, n = 0..n_max
  double last_quarter_max = 0.0;
};

AsymptoticNearness asymptotic_nearness(const Operator& T1, const Operator& T2, long n_max);

struct SandwichResult {
  bool premise_ok = false;
  double premise_max = 0.0;  // max_{1<=m<=m_max} |T^m - W^m|
  /// min over samples and m of |T^m x|/|x| - (1 - r) and (1 + r) - |T^m x|/|x|.
  std::optional<double> worst_lower;
  std::optional<double> worst_upper;
};

SandwichResult sandwich_check(const Operator& T, const Operator& W, double r, int m_max, int samples,
                              std::uint64_t seed = 11);

/// Finite Cesaro average of T*^m T^m (m < M) and the conjugate it induces.
/// Diagnostic only: nothing is claimed about convergence in M.
struct CesaroDiagnostic {
  Operator gram;
  double conj_norm = 0.0;      // |L T L^{-1}| with L = gram^{1/2}
  double lower_norm = 0.0;     // |L^{-1}|^{-1}, 0 if gram is singular
  bool invertible = false;
};

CesaroDiagnostic cesaro_diagnostic(const Operator& T, int M);

}  // namespace opsim
