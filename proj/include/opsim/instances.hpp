#pragma once

#include <cstdint>
#include <string>

#include "opsim/linalg.hpp"

namespace opsim {

/// Seeded test operator.
///   gaussian    complex Gaussian rescaled to spectral radius `cap`; cap = 0
///               gives a strictly upper triangular (nilpotent) sample
///   normal      unitary conjugate of a diagonal with max modulus `cap`
///   contraction complex Gaussian rescaled to operator norm `cap`
Operator gen_instance(const std::string& kind, int n, double cap, std::uint64_t seed);

struct FactoredInstance {
  Operator T;
  Operator V1;
  Operator C;
  Operator V2;
};

/// C the k-dimensional truncated unweighted shift, V1 and V2 Gaussian with
/// unit operator norm, and T = V1 C V2 plus a perturbation of spectral
/// radius 0.5 times `noise`.
FactoredInstance factored_instance(int n, int k, double noise, std::uint64_t seed);

}  // namespace opsim
