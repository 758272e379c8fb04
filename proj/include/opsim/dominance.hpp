#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opsim/linalg.hpp"
#include "opsim/nearness.hpp"
#include "opsim/rng.hpp"

namespace opsim {

struct PolyFamily {
  enum class Kind { RandomCoeff, ChebyshevLike, ZdVanishing, Monomials };
  Kind kind = Kind::RandomCoeff;
  int degree_max = 3;
  int d = 0;  // vanishing order for ZdVanishing
  int count = 32;
  std::uint64_t seed = 1;

  static Kind parse_kind(const std::string& name);
  static std::string kind_name(Kind kind);
};

/// level x level polynomial with complex Gaussian coefficients of degree
/// `degree`, scaled so that its circle sup norm is 1.
MatrixPolynomial random_matrix_polynomial(Rng& rng, int level, int degree);

/// Samples of the family at the given level. For level > 1 the first `count`
/// members are the level-1 samples embedded diagonally, followed by `count`
/// genuinely matrix-valued members.
std::vector<MatrixPolynomial> sample_family(const PolyFamily& fam, int level);

struct RatioResult {
  double max_ratio = 0.0;  // a lower bound on the dominance constant
  int witness_index = -1;
  MatrixPolynomial witness;
  std::vector<double> ratios;  // NaN where the denominator was skipped
  int skipped = 0;
};

/// max over the family of |P(T1)| / |P(T2)|; denominators below 1e-13 skipped.
RatioResult dominance_ratio(const Operator& T1, const Operator& T2, const PolyFamily& fam, int level);
RatioResult dominance_ratio(const Operator& T1, const Operator& T2,
                            const std::vector<MatrixPolynomial>& family);

/// max over the family of |P(T)| / sup_{|z|=1} |P(z)|.
RatioResult paulsen_ratio(const Operator& T, const PolyFamily& fam, int level);
RatioResult paulsen_ratio(const Operator& T, const std::vector<MatrixPolynomial>& family);

/// Checks T^k = V1 C^k V2 for d <= k <= N_max (error beyond 1e-8) and returns
/// the factored nearness, whose terms then vanish past d.
NearnessReport zd_pipeline_check(const Operator& T, const Operator& V1, const Operator& C,
                                 const Operator& V2, int d, int N_max);

}  // namespace opsim
