#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mixint/types.hpp"

namespace mixint {

/// Deterministic random stream. Independent streams are derived from a
/// base seed plus a stream id, so results do not depend on thread
/// scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

  Vector normal_vec(Index q) {
    Vector z(q);
    for (Index i = 0; i < q; ++i) z[i] = normal();
    return z;
  }

  /// Gamma with given shape and scale.
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(eng_);
  }

  double beta(double a, double b) {
    double u = gamma(a, 1.0);
    double v = gamma(b, 1.0);
    return u / (u + v);
  }

  /// Inverse gamma with shape a and rate b (mean b/(a-1) for a > 1).
  double inverse_gamma(double shape, double rate) {
    return rate / gamma(shape, 1.0);
  }

  /// Uniform over {0, ..., n-1}.
  int uniform_int(int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(eng_);
  }

  std::vector<int> permutation(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      int j = uniform_int(i + 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    return idx;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mixint
