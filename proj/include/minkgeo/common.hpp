#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace minkgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
/// Scalar values on the parameter grid, shape (n2, n1).
using Grid = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed parameters, non-unit directions, invalid ranges.
struct InvalidArgumentError : Error {
  using Error::Error;
};

/// The body's boundary fails the positive-curvature requirement at some direction.
struct NotPositivelyCurvedError : Error {
  using Error::Error;
};

/// A chart stopped being an immersion at some node.
struct DegenerateChartError : Error {
  DegenerateChartError(const std::string& msg, int node) : Error(msg), node_index(node) {}
  int node_index = -1;
};

/// The assembled d_eta has a non-tangential component beyond tolerance.
struct FrameConsistencyError : Error {
  using Error::Error;
};

/// Mass matrix of the spectral basis is numerically singular.
struct BasisDegeneracyError : Error {
  using Error::Error;
};

/// Specification file could not be parsed or is inconsistent.
struct SpecParseError : Error {
  using Error::Error;
};

/// Fixed-order pairwise summation. Summation order depends only on the length,
/// so repeated runs produce bit-identical reductions.
inline double pairwise_sum(const double* data, std::ptrdiff_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::ptrdiff_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::ptrdiff_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), static_cast<std::ptrdiff_t>(v.size()));
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

/// SplitMix64. Used instead of <random> engines so that seeded test fields are
/// bit-identical across standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [-1, 1).
  double uniform_sym() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace minkgeo
