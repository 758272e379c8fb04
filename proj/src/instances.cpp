#include "opsim/instances.hpp"

#include <algorithm>

#include "opsim/error.hpp"
#include "opsim/rng.hpp"

namespace opsim {

Operator gen_instance(const std::string& kind, int n, double cap, std::uint64_t seed) {
  if (n < 1) throw InputError("/n", "n must be >= 1");
  if (!(cap >= 0.0)) throw InputError("/cap", "cap must be >= 0");
  Rng rng(stream_seed(seed, "instance/" + kind));
  if (kind == "gaussian") {
    Operator A = random_gaussian_matrix(rng, n, n);
    if (cap == 0.0) return A.triangularView<Eigen::StrictlyUpper>();
    return A * (cap / spectral_radius(A));
  }
  if (kind == "normal") {
    Eigen::VectorXcd lambda(n);
    for (int i = 0; i < n; ++i) lambda(i) = rng.complex_gaussian();
    const double m = lambda.cwiseAbs().maxCoeff();
    lambda *= (m > 0.0 ? cap / m : 0.0);
    const Operator U = random_unitary(rng, n);
    return U * lambda.asDiagonal() * U.adjoint();
  }
  if (kind == "contraction") {
    const Operator A = random_gaussian_matrix(rng, n, n);
    return A * (cap / op_norm(A));
  }
  throw InputError("/kind", "unknown instance kind '" + kind + "'");
}

FactoredInstance factored_instance(int n, int k, double noise, std::uint64_t seed) {
  if (n < 1 || k < 2) throw InputError("", "factored_instance needs n >= 1, k >= 2");
  Rng rng(stream_seed(seed, "instance/factored"));
  FactoredInstance f;
  f.C = Operator::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) f.C(i + 1, i) = 1.0;
  f.V1 = random_gaussian_matrix(rng, n, k);
  f.V1 /= op_norm(f.V1);
  f.V2 = random_gaussian_matrix(rng, k, n);
  f.V2 /= op_norm(f.V2);
  f.T = f.V1 * f.C * f.V2 + noise * gen_instance("gaussian", n, 0.5, seed);
  return f;
}

}  // namespace opsim
