#pragma once

#include <stdexcept>
#include <string>

namespace nlc {

/// Linear solver failed to reach its tolerance within max_iter.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations(iterations), residual(residual) {}
  int iterations;
  double residual;
};

/// Pure Neumann / periodic Poisson right-hand side with non-negligible mean.
class IncompatibleRhs : public std::runtime_error {
 public:
  explicit IncompatibleRhs(double mean)
      : std::runtime_error("Poisson rhs has nonzero mean " +
                           std::to_string(mean)),
        mean(mean) {}
  double mean;
};

/// Two fields on different grids were combined.
class GridMismatch : public std::runtime_error {
 public:
  explicit GridMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Picard contraction kept failing after the configured number of slab
/// halvings. Carries the data-size proxy of the slab-start state so the
/// caller can report whether the data was large.
class MaxHalvingsExceeded : public std::runtime_error {
 public:
  MaxHalvingsExceeded(int halvings, double data_size_proxy)
      : std::runtime_error(
            "Picard iteration failed to contract after " +
            std::to_string(halvings) +
            " slab halvings (data-size proxy U0 = " +
            std::to_string(data_size_proxy) + ")"),
        halvings(halvings),
        data_size_proxy(data_size_proxy) {}
  int halvings;
  double data_size_proxy;
};

}  // namespace nlc
