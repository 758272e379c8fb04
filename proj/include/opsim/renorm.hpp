#pragma once

#include <optional>

#include "opsim/linalg.hpp"
#include "opsim/sequences.hpp"

namespace opsim {

/// Inputs of the renorming. Without C the objective has no C-term (Rota mode).
struct RenormConfig {
  Operator T;
  std::optional<Operator> C;
  Operator V1;  // dim(T) x dim(C); empty means identity
  Operator V2;  // dim(C) x dim(T); empty means identity
  BetaWeight beta = BetaWeight::constant(1.0);
  std::optional<double> gamma;  // empty means automatic
  int d = 0;
  double p = 2.0;

  bool rota() const { return !C.has_value(); }
};

struct GramCertificate {
  Operator G;
  Operator L;
  Operator L_inv;
  Operator T1;  // L T L^{-1}
  double s_d = 0.0;
  double gamma = 0.0;
  double eig_lo = 0.0;
  double eig_hi = 0.0;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  double sim_const = 0.0;
  double sim_bound = 0.0;
  double norm_T1 = 0.0;
  double condition_estimate = 0.0;  // upper bound on cond(Q)
  int d = 0;
  bool rota = false;
};

/// |x|^2 = x* G x is the minimum of gamma^2 |sum_k C^k V2 x_k|^2 +
/// sum_k beta(k)^2 |x_k|^2 over x = sum_{k<=d} T^k x_k. Evaluated in closed
/// form through the Woodbury identity, never forming the n(d+1) system.
GramCertificate build_gram(const RenormConfig& cfg);

/// sqrt(beta0 |V1| / (s |V2|)); empty when s = 0. Throws when |V2| = 0.
std::optional<double> gamma_opt(const Operator& V1, const Operator& V2, double beta0, double s);

struct EquivalenceMargins {
  double lower = 0.0;  // eig_lo - bound_lo^2
  double upper = 0.0;  // bound_hi^2 - eig_hi
  bool ok = true;      // both >= -1e-8
  Vector witness;      // eigenvector of the violated side, if any
};

EquivalenceMargins equivalence_check(const GramCertificate& cert, const RenormConfig& cfg);

struct DominanceStep {
  double lhs = 0.0;
  double rhs = 0.0;
  double norm_PC = 0.0;  // 0 in Rota mode
  double norm_PS = 0.0;
  bool ok = false;
};

/// |P(T) x| in the (d+e)-truncated norm against
/// max(|P(C)|, |P(S_trunc)|) |x| in the d-truncated norm, at matrix level
/// P.size(); x stacks P.size() vectors of dim(T).
DominanceStep dominance_step_check(const RenormConfig& cfg, const MatrixPolynomial& P, const Vector& x,
                                   int e);
/// Same with both certificates precomputed (cert_de must use cert_d's gamma).
DominanceStep dominance_step_check(const RenormConfig& cfg, const GramCertificate& cert_d,
                                   const GramCertificate& cert_de, const MatrixPolynomial& P,
                                   const Vector& x);

/// min (sum_{k<=d} beta(k)^p |x_k|^p)^{1/p} over x = sum_k T^k x_k, by L-BFGS
/// on the eliminated variables x_1..x_d.
double banach_norm_value(const Operator& T, const Vector& x, double p, const BetaWeight& beta, int d);

/// x* G x summed over the blocks of a stacked vector.
double gram_norm_sq(const Operator& G, const Vector& stacked);

}  // namespace opsim
