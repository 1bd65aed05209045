#include <gtest/gtest.h>

#include <numeric>

#include <minkgeo/spectral.hpp>
#include <minkgeo/surface.hpp>

using namespace minkgeo;

TEST(GaussLegendre, MatchesReferenceNodes) {
  const Quadrature1D q = gauss_legendre(8);
  EXPECT_NEAR(q.nodes[0], -0.96028985649753618, 1e-15);
  EXPECT_NEAR(q.weights[0], 0.10122853629037669, 1e-15);
  EXPECT_NEAR(q.nodes[4], 0.18343464249564978, 1e-15);
  EXPECT_NEAR(q.weights[4], 0.36268378337836177, 1e-15);
}

TEST(GaussLegendre, ExactForPolynomials) {
  // n-point rule is exact through degree 2n - 1.
  const Quadrature1D q = gauss_legendre(8);
  double s14 = 0.0, s15 = 0.0;
  for (int i = 0; i < 8; ++i) {
    s14 += q.weights[i] * std::pow(q.nodes[i], 14);
    s15 += q.weights[i] * std::pow(q.nodes[i], 15);
  }
  EXPECT_NEAR(s14, 2.0 / 15.0, 1e-14);
  EXPECT_NEAR(s15, 0.0, 1e-14);
  EXPECT_NEAR(q.weights.sum(), 2.0, 1e-14);
}

TEST(LagrangeDiff, ExactOnInterpolatedPolynomials) {
  const Quadrature1D q = gauss_legendre(8);
  const Mat d = lagrange_diff_matrix(q.nodes);
  Vec p(8), dp(8);
  for (int i = 0; i < 8; ++i) {
    const double x = q.nodes[i];
    p[i] = 1.0 + x * (2.0 + x * (-1.5 + x * (0.25 + x * x * x * 0.125)));
    dp[i] = 2.0 - 3.0 * x + 0.75 * x * x + 0.75 * std::pow(x, 5);
  }
  EXPECT_LT((d * p - dp).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FourierDiff, ExactOnTrigPolynomials) {
  const int n = 16;
  const Mat d = fourier_diff_matrix(n);
  Vec f(n), df(n);
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    f[i] = std::sin(3.0 * t + 1.0) + 0.5 * std::cos(5.0 * t);
    df[i] = 3.0 * std::cos(3.0 * t + 1.0) - 2.5 * std::sin(5.0 * t);
  }
  EXPECT_LT((d * f - df).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FourierDiff, RejectsOddSize) { EXPECT_THROW(fourier_diff_matrix(15), InvalidArgumentError); }

TEST(Trapezoid, ExactForResolvedTrig) {
  const Quadrature1D q = periodic_trapezoid(16);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += q.weights[i] * std::pow(std::cos(5.0 * q.nodes[i]), 2);
  EXPECT_NEAR(s, kPi, 1e-13);
}

TEST(PairwiseSum, AgreesWithSequentialSum) {
  SplitMix64 rng(1);
  std::vector<double> v(1000);
  for (auto& x : v) x = rng.uniform_sym();
  const double a = pairwise_sum(v);
  const double b = std::accumulate(v.begin(), v.end(), 0.0);
  EXPECT_NEAR(a, b, 1e-12 * 1000);
  EXPECT_EQ(a, pairwise_sum(v));  // bit-identical on repeat
}

TEST(SplitMix64, MatchesReferenceStream) {
  SplitMix64 rng(42);
  EXPECT_DOUBLE_EQ(rng.uniform_sym(), 0.48312975754364662);
  EXPECT_DOUBLE_EQ(rng.uniform_sym(), -0.68017921424615979);
  EXPECT_DOUBLE_EQ(rng.uniform_sym(), -0.44279773948972267);
}

// The polar-axis derivative on sphere grids must handle the (1-s^2)^{k/2}
// structure of smooth surface functions; plain polynomial differentiation of
// odd azimuthal modes would lose most digits near the poles.
TEST(SphereCalculus, PolarDerivativeOfSmoothFields) {
  const SurfaceChart chart = make_round_sphere(1.0, Vec::Zero(3));
  const SampledSurface surf = sample(chart, {32, 16});
  const SurfaceCalculus calc(surf);

  // f = x restricted to the sphere: f(theta,s) = sqrt(1-s^2) cos(theta).
  Grid f(surf.n2, surf.n1), dfs(surf.n2, surf.n1), dft(surf.n2, surf.n1);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const double s = surf.p2[j], th = surf.p1[i];
      const double w = std::sqrt(1.0 - s * s);
      f(j, i) = w * std::cos(th);
      dfs(j, i) = -(s / w) * std::cos(th);
      dft(j, i) = -w * std::sin(th);
    }
  EXPECT_LT((calc.d2(f) - dfs).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((calc.d1(f) - dft).cwiseAbs().maxCoeff(), 1e-10);

  // Even mode: f = z^2 - fully polynomial in s.
  Grid g(surf.n2, surf.n1), dgs(surf.n2, surf.n1);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      g(j, i) = surf.p2[j] * surf.p2[j];
      dgs(j, i) = 2.0 * surf.p2[j];
    }
  EXPECT_LT((calc.d2(g) - dgs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SphereCalculus, MixedModeField) {
  // f = x * z: odd azimuthal mode times odd polynomial.
  const SampledSurface surf = sample(make_round_sphere(1.0, Vec::Zero(3)), {32, 16});
  const SurfaceCalculus calc(surf);
  Grid f(surf.n2, surf.n1), dfs(surf.n2, surf.n1);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const double s = surf.p2[j], th = surf.p1[i];
      const double w = std::sqrt(1.0 - s * s);
      f(j, i) = w * s * std::cos(th);
      dfs(j, i) = (1.0 - 2.0 * s * s) / w * std::cos(th);
    }
  EXPECT_LT((calc.d2(f) - dfs).cwiseAbs().maxCoeff(), 1e-10);
}
