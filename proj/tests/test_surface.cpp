#include <gtest/gtest.h>

#include <minkgeo/body.hpp>
#include <minkgeo/surface.hpp>

using namespace minkgeo;

namespace {

Mat diag3(double a, double b, double c) {
  Mat q = Mat::Zero(3, 3);
  q(0, 0) = a;
  q(1, 1) = b;
  q(2, 2) = c;
  return q;
}

double area(const SampledSurface& s) { return s.integrate(Vec(Vec::Ones(s.nodes()))); }

double enclosed_volume(const SampledSurface& s) {
  Vec v(s.nodes());
  for (int id = 0; id < s.nodes(); ++id) v[id] = s.x[id].dot(s.xi[id]);
  return s.integrate(v) / s.dim;
}

}  // namespace

TEST(RoundSphere, UnitSphereArea) {
  const SampledSurface s = sample(make_round_sphere(1.0, Vec::Zero(3)), {64, 32});
  EXPECT_NEAR(area(s), 4.0 * kPi, 1e-10 * 4.0 * kPi);
}

TEST(RoundSphere, CircleLength) {
  const SampledSurface s = sample(make_round_sphere(2.0, Vec::Zero(2)), {128, 1});
  EXPECT_NEAR(area(s), 4.0 * kPi, 1e-13);
  const SampledSurface s2 = sample(make_round_sphere(1.0, Vec::Zero(2)), {64, 1});
  EXPECT_NEAR(area(s2), 2.0 * kPi, 1e-13);
}

TEST(RoundSphere, TranslationLeavesAreaAndShiftsPositions) {
  Vec c(3);
  c << 5, 0, 0;
  const SampledSurface a = sample(make_round_sphere(1.0, Vec::Zero(3)), {32, 16});
  const SampledSurface b = sample(make_round_sphere(1.0, c), {32, 16});
  EXPECT_NEAR(area(a), area(b), 1e-12 * area(a));
  for (int id = 0; id < a.nodes(); id += 37) EXPECT_LT((b.x[id] - a.x[id] - c).norm(), 1e-14);
}

TEST(RoundSphere, RejectsNonpositiveRadius) {
  EXPECT_THROW(make_round_sphere(0.0, Vec::Zero(3)), InvalidArgumentError);
  EXPECT_THROW(make_round_sphere(-2.0, Vec::Zero(2)), InvalidArgumentError);
}

TEST(MinkowskiSphere, UnitBallGivesRoundSphere) {
  const ConvexBody ball = ConvexBody::ball(3, 1.0);
  const SampledSurface ms = sample(make_minkowski_sphere(ball, 1.5, Vec::Zero(3)), {32, 16});
  const SampledSurface rs = sample(make_round_sphere(1.5, Vec::Zero(3)), {32, 16});
  for (int id = 0; id < ms.nodes(); id += 17) EXPECT_LT((ms.x[id] - rs.x[id]).norm(), 1e-13);
}

TEST(MinkowskiSphere, LambdaOneIsTheBodyBoundary) {
  const ConvexBody body = ConvexBody::ellipsoid(diag3(4, 1, 1));
  const SampledSurface s = sample(make_minkowski_sphere(body, 1.0, Vec::Zero(3)), {32, 16});
  // On the boundary, <x, xi> equals the support value of the normal.
  for (int id = 0; id < s.nodes(); id += 11)
    EXPECT_NEAR(s.x[id].dot(s.xi[id]), body.support_value(s.xi[id]), 1e-11);
}

TEST(RadialGraph, ConstantRadiusIsUnitSphere) {
  const SampledSurface g = sample(make_radial_graph(3, 1.0, {}), {32, 16});
  const SampledSurface s = sample(make_round_sphere(1.0, Vec::Zero(3)), {32, 16});
  for (int id = 0; id < g.nodes(); id += 23) EXPECT_LT((g.x[id] - s.x[id]).norm(), 1e-14);
}

TEST(RadialGraph, SmoothOvaloidImmersionPasses) {
  // r = 1 + 0.1 nu_z, then an ellipsoid-like r = 1 + 0.15 (2z^2 - x^2 - y^2).
  EXPECT_NO_THROW(sample(make_radial_graph(3, 1.0, {0.1}), {32, 16}));
  EXPECT_NO_THROW(sample(make_radial_graph(3, 1.0, {0, 0, 0, 0, 0, 0, 0, 0.15}), {32, 16}));
}

TEST(RadialGraph, NonpositiveRadiusRejected) {
  EXPECT_THROW(make_radial_graph(3, 1.0, {2.0}), InvalidArgumentError);
}

TEST(Torus, ClosedFormAreaAndVolume) {
  const SampledSurface s = sample(make_torus(2.0, 0.5), {64, 64});
  EXPECT_NEAR(area(s), 4.0 * kPi * kPi, 1e-8);
  EXPECT_NEAR(enclosed_volume(s), kPi * kPi / 2.0, 1e-8);
  const SampledSurface s2 = sample(make_torus(2.0, 0.5), {64, 32});
  EXPECT_NEAR(area(s2), 4.0 * kPi * kPi, 1e-8);
}

TEST(Torus, SelfIntersectionRejected) {
  EXPECT_THROW(make_torus(1.0, 1.0), InvalidArgumentError);
  EXPECT_THROW(make_torus(0.5, 2.0), InvalidArgumentError);
}

TEST(Sample, ResolutionPreconditions) {
  EXPECT_THROW(sample(make_round_sphere(1.0, Vec::Zero(3)), {4, 16}), InvalidArgumentError);
  EXPECT_THROW(sample(make_round_sphere(1.0, Vec::Zero(3)), {16, 4}), InvalidArgumentError);
}

TEST(Sample, DegenerateChartReportsNode) {
  // A mapping that pinches to a point along one meridian.
  SurfaceChart bad(3, Topology::sphere, SurfaceKind::radial_graph, true,
                   [](double th, double s) {
                     detail::SphereParam p(th, s);
                     const double pinch = 0.5 * (1.0 + std::tanh(20.0 * (s - 0.99)));
                     ChartJet j;
                     j.x = (1.0 - pinch) * p.m;
                     j.d1 = {Vec((1.0 - pinch) * p.m_t), Vec(Vec::Zero(3))};
                     j.d2 = {Vec(Vec::Zero(3)), Vec(Vec::Zero(3)), Vec(Vec::Zero(3))};
                     return j;
                   },
                   "pinched");
  try {
    sample(bad, {16, 8});
    FAIL() << "expected DegenerateChartError";
  } catch (const DegenerateChartError& e) {
    EXPECT_GE(e.node_index, 0);
  }
}

TEST(Sample, Periodicity) {
  const SurfaceChart chart = make_torus(2.0, 0.5);
  for (double second : {0.0, 1.1}) {
    const ChartJet a = chart.eval(0.0, second);
    const ChartJet b = chart.eval(2.0 * kPi, second);
    EXPECT_LT((a.x - b.x).norm(), 1e-12);
  }
}

TEST(Sample, QuadratureConvergenceOrder) {
  const ConvexBody body = ConvexBody::perturbed_ball(3, 1.0, 0.15,
                                                     {0.3, 0.2, -0.1, 0.15, 0.1, -0.2, 0.1, 0.12});
  const SurfaceChart chart = make_minkowski_sphere(body, 1.0, Vec::Zero(3));
  const double a16 = area(sample(chart, {16, 8}));
  const double a32 = area(sample(chart, {32, 16}));
  const double a64 = area(sample(chart, {64, 32}));
  const double ref = area(sample(chart, {128, 64}));
  const double e16 = std::abs(a16 - ref), e32 = std::abs(a32 - ref), e64 = std::abs(a64 - ref);
  // Spectral quadrature: each refinement gains far more than 4th order until
  // the error floor.
  EXPECT_LT(e32, std::max(e16 / 16.0, 1e-13 * ref));
  EXPECT_LT(e64, std::max(e32 / 16.0, 1e-13 * ref));
}

TEST(Sample, OutwardOrientationForStarShapedCharts) {
  const ConvexBody body = ConvexBody::ellipsoid(diag3(4, 1, 1));
  for (const SurfaceChart& chart :
       {make_round_sphere(1.0, Vec::Zero(3)), make_minkowski_sphere(body, 2.0, Vec::Zero(3)),
        make_radial_graph(3, 1.0, {0.1})}) {
    const SampledSurface s = sample(chart, {16, 8});
    for (int id = 0; id < s.nodes(); ++id) EXPECT_GT(s.x[id].dot(s.xi[id]), 0.0);
  }
  // Torus: outward means pointing away from the core circle.
  const SampledSurface t = sample(make_torus(2.0, 0.5), {16, 8});
  for (int id = 0; id < t.nodes(); ++id) {
    Vec core = t.x[id];
    core[2] = 0.0;
    core *= 2.0 / core.norm();
    EXPECT_GT((t.x[id] - core).dot(t.xi[id]), 0.0);
  }
}

TEST(Sample, ChartHessianMatchesCrossFiniteDifference) {
  // Differentiates the analytic first partials; exercises the third
  // derivative of the support function through the Minkowski-sphere chart.
  const ConvexBody body = ConvexBody::perturbed_ball(3, 1.0, 0.15,
                                                     {0.3, 0.2, -0.1, 0.15, 0.1, -0.2, 0.1, 0.12});
  Vec c(3);
  c << 0.2, -0.1, 0.3;
  const std::vector<SurfaceChart> charts{make_minkowski_sphere(body, 2.0, c),
                                         make_radial_graph(3, 1.0, {0.1, 0, 0, 0, 0, 0, 0, 0.15}),
                                         make_torus(2.0, 0.5)};
  const double h = 1e-6;
  for (const auto& chart : charts) {
    SplitMix64 rng(23);
    for (int k = 0; k < 6; ++k) {
      const double th = kPi * (1.0 + rng.uniform_sym());
      const double s2 = chart.topology == Topology::torus ? kPi * (1.0 + rng.uniform_sym())
                                                          : 0.85 * rng.uniform_sym();
      const ChartJet j0 = chart.eval(th, s2);
      const Vec d11 = (chart.eval(th + h, s2).d1[0] - chart.eval(th - h, s2).d1[0]) / (2 * h);
      const Vec d12 = (chart.eval(th, s2 + h).d1[0] - chart.eval(th, s2 - h).d1[0]) / (2 * h);
      const Vec d22 = (chart.eval(th, s2 + h).d1[1] - chart.eval(th, s2 - h).d1[1]) / (2 * h);
      EXPECT_LT((j0.d2[0] - d11).norm(), 1e-7);
      EXPECT_LT((j0.d2[1] - d12).norm(), 1e-7);
      EXPECT_LT((j0.d2[2] - d22).norm(), 1e-7);
    }
  }
}

TEST(Sample, TwoDimensionalMinkowskiCircle) {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 2.25;
  q(1, 1) = 1.0;
  const ConvexBody body = ConvexBody::ellipsoid(q);
  const SampledSurface s = sample(make_minkowski_sphere(body, 1.0, Vec::Zero(2)), {128, 1});
  // Ellipse circumference with a=1.5, b=1: reference from the series value.
  for (int id = 0; id < s.nodes(); id += 13)
    EXPECT_NEAR(s.x[id].dot(s.xi[id]), body.support_value(s.xi[id]), 1e-11);
}
