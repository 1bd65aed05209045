#include <gtest/gtest.h>

#include <minkgeo/body.hpp>

using namespace minkgeo;

namespace {

Mat diag3(double a, double b, double c) {
  Mat q = Mat::Zero(3, 3);
  q(0, 0) = a;
  q(1, 1) = b;
  q(2, 2) = c;
  return q;
}

Vec unit3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v / v.norm();
}

/// Dense-sample oracle: support of an ellipsoid { x : x^T Q^{-1} x <= 1 } as
/// max <v, x> over boundary points x = Q^{1/2} m, m on the unit sphere.
struct EllipsoidSampleOracle {
  Mat sqrt_q;
  std::vector<Vec> boundary;

  explicit EllipsoidSampleOracle(const Mat& q, int n_theta = 400, int n_s = 200) {
    Eigen::SelfAdjointEigenSolver<Mat> es(q);
    sqrt_q = es.operatorSqrt();
    for (int j = 0; j < n_s; ++j) {
      const double s = -1.0 + (j + 0.5) * 2.0 / n_s;
      const double w = std::sqrt(1.0 - s * s);
      for (int i = 0; i < n_theta; ++i) {
        const double th = 2.0 * kPi * i / n_theta;
        Vec m(3);
        m << w * std::cos(th), w * std::sin(th), s;
        boundary.push_back(sqrt_q * m);
      }
    }
  }

  double support(const Vec& v) const {
    double best = -1e300;
    for (const auto& x : boundary) best = std::max(best, v.dot(x));
    return best;
  }

  Vec argmax(const Vec& v) const {
    double best = -1e300;
    Vec arg;
    for (const auto& x : boundary) {
      const double d = v.dot(x);
      if (d > best) {
        best = d;
        arg = x;
      }
    }
    return arg;
  }
};

/// Richardson-extrapolated central difference of the inverse Gauss map,
/// independent of the analytic Hessian path.
Mat fd_inverse_gauss_jacobian(const ConvexBody& body, const Vec& nu) {
  const int d = body.dimension();
  auto grad_ext = [&](const Vec& v) { return body.support_gradient(v); };
  Mat h(d, d);
  const double step = 1e-4;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = step;
    const Vec d1 = (grad_ext(nu + e) - grad_ext(nu - e)) / (2.0 * step);
    const Vec d2 = (grad_ext(nu + 0.5 * e) - grad_ext(nu - 0.5 * e)) / step;
    h.col(i) = (4.0 * d2 - d1) / 3.0;
  }
  return h;
}

const std::vector<double> kPbCoeffs{0.3, 0.2, -0.1, 0.15, 0.1, -0.2, 0.1, 0.12, 0.08, -0.05};

}  // namespace

TEST(Support, UnitBallIsOne) {
  const ConvexBody b = ConvexBody::ball(3, 1.0);
  EXPECT_DOUBLE_EQ(b.support_value(unit3(0, 0, 1)), 1.0);
  EXPECT_DOUBLE_EQ(b.support_value(unit3(1, 2, -2)), 1.0);
}

TEST(Support, BallScalesWithRadius) {
  const ConvexBody b = ConvexBody::ball(3, 2.5);
  EXPECT_NEAR(b.support_value(unit3(3, -1, 2)), 2.5, 1e-14);
}

TEST(Support, EllipsoidAxisValueAgainstDenseSample) {
  const Mat q = diag3(4, 1, 1);
  const ConvexBody b = ConvexBody::ellipsoid(q);
  Vec e1(3);
  e1 << 1, 0, 0;
  EXPECT_NEAR(b.support_value(e1), 2.0, 1e-13);

  const EllipsoidSampleOracle oracle(q);
  EXPECT_NEAR(oracle.support(e1), 2.0, 2e-3);
  SplitMix64 rng(3);
  for (int k = 0; k < 6; ++k) {
    const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
    EXPECT_NEAR(b.support_value(nu), oracle.support(nu), 2e-3);
  }
}

TEST(Support, Homogeneity) {
  const ConvexBody b = ConvexBody::perturbed_ball(3, 1.0, 0.15, kPbCoeffs);
  SplitMix64 rng(5);
  for (int k = 0; k < 8; ++k) {
    const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
    const double h = b.support_value(nu);
    for (double lam : {0.5, 2.0})
      EXPECT_NEAR(b.support_extension(lam * nu) / lam, h, 1e-10 * std::abs(h));
  }
}

TEST(InverseGauss, BallIsIdentityOnSphere) {
  const ConvexBody b = ConvexBody::ball(3, 1.0);
  const Vec nu = unit3(1, -2, 0.5);
  EXPECT_LT((b.inverse_gauss(nu) - nu).norm(), 1e-14);
}

TEST(InverseGauss, EllipsoidClosedFormAndArgmaxOracle) {
  const Mat q = diag3(4, 1, 1);
  const ConvexBody b = ConvexBody::ellipsoid(q);
  const EllipsoidSampleOracle oracle(q);
  SplitMix64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
    const Vec expected = q * nu / std::sqrt(nu.dot(q * nu));
    EXPECT_LT((b.inverse_gauss(nu) - expected).norm(), 1e-12);
    EXPECT_LT((oracle.argmax(nu) - expected).norm(), 3e-2);  // grid-resolution agreement
  }
}

TEST(InverseGauss, PerturbedBallWithZeroEpsilonReducesToBall) {
  const ConvexBody b = ConvexBody::perturbed_ball(3, 1.7, 0.0, kPbCoeffs);
  const Vec nu = unit3(0.3, -0.4, 0.86);
  EXPECT_LT((b.inverse_gauss(nu) - 1.7 * nu).norm(), 1e-13);
}

TEST(InverseGauss, EulerRelationOnGrid) {
  for (const ConvexBody& b :
       {ConvexBody::ellipsoid(diag3(4, 1, 1)), ConvexBody::perturbed_ball(3, 1.0, 0.15, kPbCoeffs)}) {
    SplitMix64 rng(11);
    for (int k = 0; k < 20; ++k) {
      const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
      const double h = b.support_value(nu);
      EXPECT_NEAR(b.inverse_gauss(nu).dot(nu), h, 1e-10 * std::abs(h));
    }
  }
}

TEST(Jacobian, BallRestrictionIsRadiusTimesIdentity) {
  const ConvexBody b = ConvexBody::ball(3, 1.6);
  const Vec nu = unit3(0.6, 0.0, 0.8);
  const Mat du = b.inverse_gauss_jacobian(nu);
  const Mat t = ConvexBody::tangent_basis_of(nu);
  EXPECT_LT((t.transpose() * du * t - 1.6 * Mat::Identity(2, 2)).norm(), 1e-13);
  EXPECT_LT((du * nu).norm(), 1e-13);  // nu spans the kernel
}

TEST(Jacobian, EllipsoidAxisDirectionClosedForm) {
  const ConvexBody b = ConvexBody::ellipsoid(diag3(4, 1, 1));
  Vec e1(3);
  e1 << 1, 0, 0;
  const Mat du = b.inverse_gauss_jacobian(e1);
  // Complementary-axis entries Q_jj / sqrt(Q_11).
  EXPECT_NEAR(du(1, 1), 1.0 / 2.0, 1e-13);
  EXPECT_NEAR(du(2, 2), 1.0 / 2.0, 1e-13);
  EXPECT_NEAR(du(0, 0), 0.0, 1e-13);
}

TEST(Jacobian, MatchesRichardsonFdOracle) {
  const std::vector<ConvexBody> bodies{ConvexBody::ball(3, 1.3),
                                       ConvexBody::ellipsoid(diag3(4, 1, 1)),
                                       ConvexBody::perturbed_ball(3, 1.0, 0.15, kPbCoeffs)};
  SplitMix64 rng(13);
  for (const auto& b : bodies)
    for (int k = 0; k < 5; ++k) {
      const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
      const Mat analytic = b.inverse_gauss_jacobian(nu);
      const Mat fd = fd_inverse_gauss_jacobian(b, nu);
      EXPECT_LT((analytic - fd).norm() / analytic.norm(), 1e-6);
    }
}

TEST(Jacobian, HessianSymmetryInRandomTangentDirections) {
  const ConvexBody b = ConvexBody::perturbed_ball(3, 1.0, 0.15, kPbCoeffs);
  SplitMix64 rng(17);
  for (int k = 0; k < 10; ++k) {
    const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
    const Mat du = b.inverse_gauss_jacobian(nu);
    const Mat t = ConvexBody::tangent_basis_of(nu);
    Vec a(2), c(2);
    a << rng.uniform_sym(), rng.uniform_sym();
    c << rng.uniform_sym(), rng.uniform_sym();
    const Vec v = t * a, w = t * c;
    const double lhs = (du * v).dot(w), rhs = v.dot(du * w);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(std::abs(lhs), 1.0));
  }
}

TEST(Validate, UnitBall) {
  const BodyValidationReport rep = ConvexBody::ball(3, 1.0).validate(32);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.min_tangential_hessian_eig, 1.0, 1e-10);
  EXPECT_LT(rep.max_support_residual, 1e-12);
}

TEST(Validate, BallRadiusGivesMinEigenvalue) {
  const BodyValidationReport rep = ConvexBody::ball(3, 2.25).validate(16);
  EXPECT_NEAR(rep.min_tangential_hessian_eig, 2.25, 1e-10);
}

TEST(Validate, EllipsoidPasses) {
  const BodyValidationReport rep = ConvexBody::ellipsoid(diag3(4, 1, 1)).validate(32);
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.min_tangential_hessian_eig, 0.0);
}

TEST(Validate, OverlargePerturbationIsRejectedAtConstruction) {
  EXPECT_THROW(ConvexBody::perturbed_ball(3, 1.0, 0.9, kPbCoeffs), NotPositivelyCurvedError);
}

TEST(Validate, NonConvexGenericBodyFailsWithWorstNode) {
  // 1-homogeneous but not a support function of a convex body.
  auto h = [](const Vec& v) {
    const double n = v.norm();
    const double c = v[0] / n;
    return n * (1.0 + 0.5 * c * c * c * c);
  };
  const ConvexBody b = ConvexBody::generic(3, h);
  const BodyValidationReport rep = b.validate(16);
  EXPECT_FALSE(rep.pass);
  EXPECT_GE(rep.worst_node, 0);
  EXPECT_FALSE(rep.failures.empty());
}

TEST(Validate, RejectsTooCoarseGrid) {
  EXPECT_THROW(ConvexBody::ball(3, 1.0).validate(4), InvalidArgumentError);
}

TEST(Directions, NormalizationWindow) {
  const ConvexBody b = ConvexBody::ball(3, 1.0);
  Vec nu = unit3(1, 1, 1);
  EXPECT_NO_THROW(b.support_value(nu * (1.0 + 5e-9)));
  EXPECT_THROW(b.support_value(nu * 1.1), InvalidArgumentError);
  EXPECT_THROW(b.support_value(nu * 0.0), InvalidArgumentError);
}

TEST(Jacobian, IndefiniteDirectionRaises) {
  auto h = [](const Vec& v) {
    const double n = v.norm();
    const double c = v[0] / n;
    return n * (1.0 + 0.5 * c * c * c * c);
  };
  const ConvexBody b = ConvexBody::generic(3, h);
  Vec e1(3);
  e1 << 1, 0, 0;
  EXPECT_THROW(b.inverse_gauss_jacobian(e1), NotPositivelyCurvedError);
}

TEST(GenericBody, FdDerivativesMatchAnalyticFamily) {
  const Mat q = diag3(1.5625, 1.0, 0.64);
  const ConvexBody exact = ConvexBody::ellipsoid(q);
  const ConvexBody fd =
      ConvexBody::generic(3, [q](const Vec& v) { return std::sqrt(v.dot(q * v)); });
  SplitMix64 rng(19);
  for (int k = 0; k < 5; ++k) {
    const Vec nu = unit3(rng.uniform_sym(), rng.uniform_sym(), rng.uniform_sym());
    EXPECT_LT((fd.inverse_gauss(nu) - exact.inverse_gauss(nu)).norm(), 1e-8);
    EXPECT_LT((fd.inverse_gauss_jacobian(nu) - exact.inverse_gauss_jacobian(nu)).norm(), 1e-5);
  }
}

TEST(TwoDimensional, EllipseSupport) {
  Mat q = Mat::Zero(2, 2);
  q(0, 0) = 4.0;
  q(1, 1) = 1.0;
  const ConvexBody b = ConvexBody::ellipsoid(q);
  Vec e1(2);
  e1 << 1, 0;
  EXPECT_NEAR(b.support_value(e1), 2.0, 1e-14);
  EXPECT_TRUE(b.validate(32).pass);
}

TEST(Construction, RejectsBadParameters) {
  EXPECT_THROW(ConvexBody::ball(3, -1.0), InvalidArgumentError);
  EXPECT_THROW(ConvexBody::ellipsoid(diag3(1, 1, -2)), InvalidArgumentError);
  Mat skew = diag3(1, 1, 1);
  skew(0, 1) = 0.5;  // not symmetric
  EXPECT_THROW(ConvexBody::ellipsoid(skew), InvalidArgumentError);
}
