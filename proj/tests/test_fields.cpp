#include <gtest/gtest.h>

#include <minkgeo/fields.hpp>

using namespace minkgeo;

namespace {

struct Scene {
  SampledSurface surf;
  SurfaceCalculus calc;
  FrameSet frames;
  Scene(const ConvexBody& body, const SurfaceChart& chart, Resolution res)
      : surf(sample(chart, res)), calc(surf), frames(compute_frames(body, surf)) {}
};

}  // namespace

TEST(ScalarField, ConstantHasZeroGradient) {
  const ConvexBody body = ConvexBody::ball(3, 1.0);
  Scene s(body, make_round_sphere(1.0, Vec::Zero(3)), {32, 16});
  const ScalarField f =
      make_scalar_field(s.calc, s.frames, Grid::Constant(s.surf.n2, s.surf.n1, 3.7));
  for (const auto& g : f.grad) EXPECT_LT(g.norm(), 1e-10);
}

TEST(ScalarField, GradientIsTangential) {
  const ConvexBody body = ConvexBody::perturbed_ball(3, 1.0, 0.15, {0.3, 0.2, -0.1, 0.15});
  Scene s(body, make_radial_graph(3, 1.0, {0.1, 0, 0, 0.05}), {32, 16});
  const ScalarField f =
      make_scalar_field(s.calc, s.frames, random_surface_field(s.surf, 5, 3));
  for (int id = 0; id < s.surf.nodes(); ++id)
    EXPECT_LT(std::abs(f.grad[static_cast<std::size_t>(id)].dot(s.surf.xi[id])), 1e-10);
}

TEST(ScalarField, KnownGradientOnUnitSphere) {
  // f = z on the unit sphere: grad f = e_z - z x, |grad f|^2 = 1 - z^2.
  const ConvexBody body = ConvexBody::ball(3, 1.0);
  Scene s(body, make_round_sphere(1.0, Vec::Zero(3)), {32, 16});
  Grid z(s.surf.n2, s.surf.n1);
  for (int j = 0; j < s.surf.n2; ++j)
    for (int i = 0; i < s.surf.n1; ++i) z(j, i) = s.surf.x[s.surf.index(i, j)][2];
  const ScalarField f = make_scalar_field(s.calc, s.frames, z);
  for (int id = 0; id < s.surf.nodes(); id += 9) {
    Vec expect = -s.surf.x[id][2] * s.surf.x[id];
    expect[2] += 1.0;
    EXPECT_LT((f.grad[static_cast<std::size_t>(id)] - expect).norm(), 1e-10);
  }
}

TEST(ScalarField, DupinGradientAppliesTheHessian) {
  const ConvexBody body = ConvexBody::ellipsoid((Mat(3, 3) << 1.5625, 0, 0, 0, 1, 0, 0, 0, 0.64).finished());
  Scene s(body, make_minkowski_sphere(body, 1.0, Vec::Zero(3)), {24, 12});
  const ScalarField f = make_scalar_field(s.calc, s.frames, random_surface_field(s.surf, 9, 2));
  for (int id = 0; id < s.surf.nodes(); id += 7) {
    const Mat du = body.inverse_gauss_jacobian(s.surf.xi[id]);
    const Vec expect = du * f.grad[static_cast<std::size_t>(id)];
    EXPECT_LT((f.dupin_grad[static_cast<std::size_t>(id)] - expect).norm(), 1e-11);
  }
}

TEST(RandomField, DeterministicPerSeed) {
  const SampledSurface surf = sample(make_round_sphere(1.0, Vec::Zero(3)), {16, 8});
  const Grid a = random_surface_field(surf, 7, 3);
  const Grid b = random_surface_field(surf, 7, 3);
  const Grid c = random_surface_field(surf, 8, 3);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(RandomField, MeanProjection) {
  const ConvexBody body = ConvexBody::ball(3, 1.0);
  Scene s(body, make_round_sphere(1.0, Vec::Zero(3)), {24, 12});
  Grid f = random_surface_field(s.surf, 21, 3);
  const double mean = dw_mean(s.surf, s.frames, f);
  f.array() -= mean;
  EXPECT_LT(std::abs(dw_mean(s.surf, s.frames, f)), 1e-14 * (1.0 + std::abs(mean)));
}

TEST(TranslationField, MatchesDirectFormula) {
  const ConvexBody body = ConvexBody::perturbed_ball(3, 1.0, 0.15, {0.3, 0.2});
  Scene s(body, make_minkowski_sphere(body, 1.0, Vec::Zero(3)), {16, 8});
  Vec v(3);
  v << 0.3, -1.0, 0.2;
  const Grid t = translation_field(s.surf, s.frames, v);
  for (int j = 0; j < s.surf.n2; j += 3)
    for (int i = 0; i < s.surf.n1; i += 5) {
      const int id = s.surf.index(i, j);
      EXPECT_NEAR(t(j, i), v.dot(s.surf.xi[id]) / body.support_value(s.surf.xi[id]), 1e-13);
    }
}
