#include <algorithm>
#include <cmath>

#include "opsim/error.hpp"
#include "opsim/linalg.hpp"

namespace opsim {

double op_norm(const SparseOperator& A) {
  if (A.rows() == 0 || A.cols() == 0) throw Error("empty operator");
  if (std::min(A.rows(), A.cols()) < 1024) return op_norm(Operator(A));
  const SparseOperator Ah = A.adjoint();
  if (A.cols() <= A.rows()) {
    return std::sqrt(lanczos_max_eigenvalue([&](const Vector& v) { return Vector(Ah * (A * v)); },
                                            A.cols()));
  }
  return std::sqrt(
      lanczos_max_eigenvalue([&](const Vector& v) { return Vector(A * (Ah * v)); }, A.rows()));
}

}  // namespace opsim
