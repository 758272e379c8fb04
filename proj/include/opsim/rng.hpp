#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace opsim {

/// Seeded generator with platform-independent variates. Standard library
/// distributions are implementation-defined, so normals are produced with
/// Box-Muller on top of the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double gaussian();
  /// Circular complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_gaussian();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Derives an independent seed for a named stream, so that adding a stage
/// that draws from its own label never perturbs the draws of another label.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view label);

Eigen::MatrixXcd random_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Eigen::VectorXcd random_gaussian_vector(Rng& rng, Eigen::Index n);
/// Haar-distributed unitary (QR of a Gaussian matrix with the phase fix).
Eigen::MatrixXcd random_unitary(Rng& rng, Eigen::Index n);

}  // namespace opsim
