#pragma once

#include <complex>

#include "minkgeo/common.hpp"

namespace minkgeo {

struct Quadrature1D {
  Vec nodes;
  Vec weights;
};

/// Gauss-Legendre nodes and weights on (-1, 1), by Newton iteration on the
/// Legendre recurrence. Nodes are strictly interior, so sphere charts are
/// never evaluated at the coordinate poles.
inline Quadrature1D gauss_legendre(int n) {
  if (n < 1) throw InvalidArgumentError("gauss_legendre: n must be positive");
  Quadrature1D q;
  q.nodes = Vec::Zero(n);
  q.weights = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess for the i-th root, ascending order.
    double x = -std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = x;
    q.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return q;
}

/// Equispaced periodic nodes on [0, 2*pi) with trapezoid weights.
inline Quadrature1D periodic_trapezoid(int n) {
  if (n < 1) throw InvalidArgumentError("periodic_trapezoid: n must be positive");
  Quadrature1D q;
  q.nodes = Vec::LinSpaced(n, 0.0, 2.0 * kPi * (n - 1) / n);
  q.weights = Vec::Constant(n, 2.0 * kPi / n);
  return q;
}

/// Barycentric Lagrange differentiation matrix on arbitrary distinct nodes.
inline Mat lagrange_diff_matrix(const Vec& s) {
  const int n = static_cast<int>(s.size());
  Vec w = Vec::Ones(n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (k != j) w[j] /= (s[j] - s[k]);
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (s[i] - s[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

/// Spectral differentiation matrix for 2*pi-periodic data on n equispaced
/// nodes (n even): exact for trigonometric polynomials below the Nyquist mode.
inline Mat fourier_diff_matrix(int n) {
  if (n % 2 != 0) throw InvalidArgumentError("fourier_diff_matrix: n must be even");
  Mat d = Mat::Zero(n, n);
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * h * k);
    }
  return d;
}

/// Dense DFT pair for mode-wise processing along a periodic axis.
/// forward(i, k) = exp(-i 2 pi i k / n); inverse includes the 1/n factor.
struct DftPair {
  Eigen::MatrixXcd forward;
  Eigen::MatrixXcd inverse;
  std::vector<int> signed_freq;

  explicit DftPair(int n) : forward(n, n), inverse(n, n), signed_freq(n) {
    const std::complex<double> im(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double phase = 2.0 * kPi * i * k / n;
        forward(i, k) = std::exp(-im * phase);
        inverse(k, i) = std::exp(im * phase) / static_cast<double>(n);
      }
    for (int k = 0; k < n; ++k) signed_freq[k] = (k <= n / 2) ? k : k - n;
  }
};

}  // namespace minkgeo
