#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>
#include <variant>

#include "minkgeo/common.hpp"
#include "minkgeo/polynomial.hpp"
#include "minkgeo/spectral.hpp"

namespace minkgeo {

/// Report produced by ConvexBody::validate. A failed invariant does not throw;
/// callers inspect `pass` and the worst-node diagnostics.
struct BodyValidationReport {
  bool pass = true;
  int grid_nodes = 0;
  double min_tangential_hessian_eig = 0.0;
  double max_support_residual = 0.0;   // |<u(nu),nu> - h(nu)| / (1 + h)
  double max_gauge_residual = 0.0;     // |max_mu <u(nu),mu>/h(mu) - 1|
  double gauge_tolerance = 0.0;        // grid-resolution limited
  int worst_node = -1;
  Vec worst_direction;
  std::vector<std::string> failures;
};

/// Smooth convex gauge body with the origin in its interior, represented by
/// its support function h(v) = max_{x in B} <v, x>. The positively
/// 1-homogeneous extension is differentiated analytically for the built-in
/// families; its gradient at a unit direction nu is the inverse Gauss map
/// u(nu) (the boundary point with outward normal nu) and its Hessian
/// restricted to the tangent plane of the sphere is du(nu).
class ConvexBody {
 public:
  struct Ball {
    double radius;
  };
  struct EllipsoidBody {
    Mat q;  // h(v) = sqrt(v^T Q v); the body is { x : x^T Q^{-1} x <= 1 }
  };
  struct PerturbedBall {
    double radius;
    double epsilon;
    std::vector<double> coeffs;  // against harmonic_basis(dim)
  };
  struct Generic {
    std::function<double(const Vec&)> support;  // evaluated on the 1-homogeneous extension
    // Optional analytic derivatives; finite differences of `support` otherwise.
    std::function<Vec(const Vec&)> gradient;
    std::function<Mat(const Vec&)> hessian;
  };

  static ConvexBody ball(int dim, double radius) {
    if (radius <= 0.0) throw InvalidArgumentError("ball: radius must be positive");
    return ConvexBody(dim, Ball{radius});
  }

  static ConvexBody ellipsoid(const Mat& q) {
    const int dim = static_cast<int>(q.rows());
    if (dim != 2 && dim != 3) throw InvalidArgumentError("ellipsoid: Q must be 2x2 or 3x3");
    if (q.cols() != dim) throw InvalidArgumentError("ellipsoid: Q must be square");
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * q.cwiseAbs().maxCoeff())
      throw InvalidArgumentError("ellipsoid: Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(q);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw InvalidArgumentError("ellipsoid: Q must be positive definite");
    return ConvexBody(dim, EllipsoidBody{q});
  }

  static ConvexBody perturbed_ball(int dim, double radius, double epsilon,
                                   std::vector<double> coeffs) {
    if (radius <= 0.0) throw InvalidArgumentError("perturbed_ball: radius must be positive");
    if (coeffs.size() > harmonic_basis(dim).size())
      throw InvalidArgumentError("perturbed_ball: too many coefficients for the harmonic family");
    ConvexBody b(dim, PerturbedBall{radius, epsilon, std::move(coeffs)});
    // Validate convexity at construction; epsilon large enough to create an
    // indefinite node is rejected here rather than at first use.
    auto report = b.validate(32);
    if (!report.pass) {
      std::ostringstream os;
      os << "perturbed_ball: not convex at the requested amplitude;"
         << " min tangential Hessian eigenvalue " << report.min_tangential_hessian_eig;
      throw NotPositivelyCurvedError(os.str());
    }
    return b;
  }

  static ConvexBody generic(int dim, std::function<double(const Vec&)> support,
                            std::function<Vec(const Vec&)> gradient = {},
                            std::function<Mat(const Vec&)> hessian = {}) {
    if (dim != 2 && dim != 3) throw InvalidArgumentError("generic body: dimension must be 2 or 3");
    return ConvexBody(dim, Generic{std::move(support), std::move(gradient), std::move(hessian)});
  }

  int dimension() const { return dim_; }

  std::string family_name() const {
    if (std::holds_alternative<Ball>(family_)) return "ball";
    if (std::holds_alternative<EllipsoidBody>(family_)) return "ellipsoid";
    if (std::holds_alternative<PerturbedBall>(family_)) return "perturbed_ball";
    return "generic";
  }

  /// h_B at a unit direction.
  double support_value(const Vec& nu) const { return support_extension(unit(nu)); }

  /// u(nu): gradient of the 1-homogeneous extension; the point of the boundary
  /// whose outward Euclidean normal is nu.
  Vec inverse_gauss(const Vec& nu) const { return support_gradient(unit(nu)); }

  /// du(nu): Hessian of the 1-homogeneous extension. As an ambient matrix it
  /// is symmetric with nu in its kernel; the restriction to the tangent plane
  /// must be positive definite (positive Gauss curvature of the boundary).
  Mat inverse_gauss_jacobian(const Vec& nu) const {
    const Vec v = unit(nu);
    Mat h = support_hessian(v);
    Mat t = tangent_basis_of(v);
    Mat restricted = t.transpose() * h * t;
    Eigen::SelfAdjointEigenSolver<Mat> es(restricted);
    if (es.eigenvalues().minCoeff() <= 0.0) {
      std::ostringstream os;
      os << "boundary is not positively curved at direction (";
      for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
      os << "); min tangential eigenvalue = " << es.eigenvalues().minCoeff();
      throw NotPositivelyCurvedError(os.str());
    }
    return h;
  }

  // Extension-scale evaluations used internally and by the derivative tests;
  // no unit-length requirement.
  double support_extension(const Vec& v) const;
  Vec support_gradient(const Vec& v) const;
  Mat support_hessian(const Vec& v) const;
  std::vector<Mat> support_third(const Vec& v) const;

  /// Grid check of all body invariants. Directions are sampled pole-free.
  BodyValidationReport validate(int grid_resolution) const;

  /// Orthonormal basis of nu-perp as columns.
  static Mat tangent_basis_of(const Vec& nu) {
    const int d = static_cast<int>(nu.size());
    Mat t(d, d - 1);
    if (d == 2) {
      t(0, 0) = -nu[1];
      t(1, 0) = nu[0];
    } else {
      Vec a = std::abs(nu[0]) < 0.9 ? Vec(Eigen::Vector3d(1, 0, 0)) : Vec(Eigen::Vector3d(0, 1, 0));
      Vec e1 = a - nu * nu.dot(a);
      e1.normalize();
      Eigen::Vector3d e2 = Eigen::Vector3d(nu).cross(Eigen::Vector3d(e1));
      t.col(0) = e1;
      t.col(1) = e2;
    }
    return t;
  }

 private:
  ConvexBody(int dim, std::variant<Ball, EllipsoidBody, PerturbedBall, Generic> fam)
      : dim_(dim), family_(std::move(fam)) {}

  /// Directions are re-normalized when within 1e-8 of unit length and
  /// rejected otherwise, so scaling bugs surface instead of propagating.
  Vec unit(const Vec& nu) const {
    if (nu.size() != dim_) throw InvalidArgumentError("direction has wrong dimension");
    const double n = nu.norm();
    if (std::abs(n - 1.0) > 1e-8) {
      std::ostringstream os;
      os << "direction is not unit length (|nu| = " << n << ")";
      throw InvalidArgumentError(os.str());
    }
    return nu / n;
  }

  int dim_;
  std::variant<Ball, EllipsoidBody, PerturbedBall, Generic> family_;
};

// ---------------------------------------------------------------------------
// Support-function evaluation per family.

namespace detail {

struct RadialPower {
  // g(v) = |v|^m and derivatives through third order.
  double value;
  Vec grad;
  Mat hess;
  std::vector<Mat> third;

  RadialPower(const Vec& v, double m) {
    const int d = static_cast<int>(v.size());
    const double r2 = v.squaredNorm();
    const double r = std::sqrt(r2);
    value = std::pow(r, m);
    const double rm2 = std::pow(r, m - 2.0);
    const double rm4 = std::pow(r, m - 4.0);
    const double rm6 = std::pow(r, m - 6.0);
    grad = m * rm2 * v;
    hess = m * rm2 * Mat::Identity(d, d) + m * (m - 2.0) * rm4 * v * v.transpose();
    third.assign(d, Mat::Zero(d, d));
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double t = m * (m - 2.0) * rm4 *
                     ((i == j ? v[k] : 0.0) + (i == k ? v[j] : 0.0) + (j == k ? v[i] : 0.0));
          t += m * (m - 2.0) * (m - 4.0) * rm6 * v[i] * v[j] * v[k];
          third[k](i, j) = t;
        }
  }
};

// Derivatives of P(v) * |v|^m by the Leibniz rule, for symmetric tensors.
inline void accumulate_product(const Polynomial& p, const RadialPower& g, const Vec& v,
                               double scale, double& val, Vec& grad, Mat& hess,
                               std::vector<Mat>* third) {
  const int d = static_cast<int>(v.size());
  const double pv = p.value(v);
  const Vec pg = p.gradient(v);
  const Mat ph = p.hessian(v);
  val += scale * pv * g.value;
  grad += scale * (g.value * pg + pv * g.grad);
  hess += scale * (g.value * ph + pg * g.grad.transpose() + g.grad * pg.transpose() + pv * g.hess);
  if (third) {
    const std::vector<Mat> pt = p.third(v);
    for (int k = 0; k < d; ++k) {
      Mat t = pt[k] * g.value + pv * g.third[k];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          t(i, j) += ph(i, j) * g.grad[k] + ph(i, k) * g.grad[j] + ph(j, k) * g.grad[i] +
                     pg[i] * g.hess(j, k) + pg[j] * g.hess(i, k) + pg[k] * g.hess(i, j);
      (*third)[k] += scale * t;
    }
  }
}

// 4th-order central difference stencils for generic (function-only) bodies.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& v, double h) {
  const int d = static_cast<int>(v.size());
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = h;
    g[i] = (8.0 * (f(v + e) - f(v - e)) - (f(v + 2 * e) - f(v - 2 * e))) / (12.0 * h);
  }
  return g;
}

}  // namespace detail

inline double ConvexBody::support_extension(const Vec& v) const {
  if (const auto* b = std::get_if<Ball>(&family_)) return b->radius * v.norm();
  if (const auto* e = std::get_if<EllipsoidBody>(&family_)) return std::sqrt(v.dot(e->q * v));
  if (const auto* p = std::get_if<PerturbedBall>(&family_)) {
    double s = p->radius * v.norm();
    const auto& basis = harmonic_basis(dim_);
    for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
      if (p->coeffs[k] == 0.0) continue;
      const double m = 1.0 - basis[k].degree();
      s += p->epsilon * p->coeffs[k] * basis[k].value(v) * std::pow(v.norm(), m);
    }
    return s;
  }
  return std::get<Generic>(family_).support(v);
}

inline Vec ConvexBody::support_gradient(const Vec& v) const {
  if (const auto* b = std::get_if<Ball>(&family_)) return b->radius * v / v.norm();
  if (const auto* e = std::get_if<EllipsoidBody>(&family_)) {
    const Vec qv = e->q * v;
    return qv / std::sqrt(v.dot(qv));
  }
  if (const auto* p = std::get_if<PerturbedBall>(&family_)) {
    Vec g = p->radius * v / v.norm();
    double val = 0.0;
    Mat hdummy = Mat::Zero(dim_, dim_);
    const auto& basis = harmonic_basis(dim_);
    for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
      if (p->coeffs[k] == 0.0) continue;
      detail::RadialPower rp(v, 1.0 - basis[k].degree());
      detail::accumulate_product(basis[k], rp, v, p->epsilon * p->coeffs[k], val, g, hdummy,
                                 nullptr);
    }
    return g;
  }
  const auto& g = std::get<Generic>(family_);
  if (g.gradient) return g.gradient(v);
  return detail::fd_gradient(g.support, v, 1e-5);
}

inline Mat ConvexBody::support_hessian(const Vec& v) const {
  const int d = dim_;
  if (const auto* b = std::get_if<Ball>(&family_)) {
    const double r = v.norm();
    const Vec vh = v / r;
    return b->radius * (Mat::Identity(d, d) - vh * vh.transpose()) / r;
  }
  if (const auto* e = std::get_if<EllipsoidBody>(&family_)) {
    const Vec qv = e->q * v;
    const double q = v.dot(qv);
    return e->q / std::sqrt(q) - qv * qv.transpose() / std::pow(q, 1.5);
  }
  if (const auto* p = std::get_if<PerturbedBall>(&family_)) {
    const double r = v.norm();
    const Vec vh = v / r;
    Mat h = p->radius * (Mat::Identity(d, d) - vh * vh.transpose()) / r;
    double val = 0.0;
    Vec gdummy = Vec::Zero(d);
    const auto& basis = harmonic_basis(dim_);
    for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
      if (p->coeffs[k] == 0.0) continue;
      detail::RadialPower rp(v, 1.0 - basis[k].degree());
      detail::accumulate_product(basis[k], rp, v, p->epsilon * p->coeffs[k], val, gdummy, h,
                                 nullptr);
    }
    return h;
  }
  const auto& g = std::get<Generic>(family_);
  if (g.hessian) return g.hessian(v);
  auto grad = [&](const Vec& p) {
    return g.gradient ? g.gradient(p) : detail::fd_gradient(g.support, p, 1e-5);
  };
  Mat h(d, d);
  const double step = 1e-4;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = step;
    h.col(i) = (8.0 * (grad(v + e) - grad(v - e)) - (grad(v + 2 * e) - grad(v - 2 * e))) /
               (12.0 * step);
  }
  return 0.5 * (h + h.transpose());
}

inline std::vector<Mat> ConvexBody::support_third(const Vec& v) const {
  const int d = dim_;
  if (const auto* b = std::get_if<Ball>(&family_)) {
    const double r = v.norm();
    const Vec vh = v / r;
    const Mat proj = Mat::Identity(d, d) - vh * vh.transpose();
    std::vector<Mat> t(d, Mat::Zero(d, d));
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          t[k](i, j) = -b->radius * (proj(i, k) * vh[j] + proj(j, k) * vh[i] + proj(i, j) * vh[k]) /
                       (r * r);
    return t;
  }
  if (const auto* e = std::get_if<EllipsoidBody>(&family_)) {
    const Vec qv = e->q * v;
    const double q = v.dot(qv);
    const double q32 = std::pow(q, 1.5), q52 = std::pow(q, 2.5);
    std::vector<Mat> t(d, Mat::Zero(d, d));
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          t[k](i, j) = -(e->q(i, j) * qv[k] + e->q(i, k) * qv[j] + e->q(j, k) * qv[i]) / q32 +
                       3.0 * qv[i] * qv[j] * qv[k] / q52;
    return t;
  }
  if (const auto* p = std::get_if<PerturbedBall>(&family_)) {
    std::vector<Mat> t = ball(dim_, p->radius).support_third(v);
    double val = 0.0;
    Vec gdummy = Vec::Zero(d);
    Mat hdummy = Mat::Zero(d, d);
    const auto& basis = harmonic_basis(dim_);
    for (std::size_t k = 0; k < p->coeffs.size(); ++k) {
      if (p->coeffs[k] == 0.0) continue;
      detail::RadialPower rp(v, 1.0 - basis[k].degree());
      detail::accumulate_product(basis[k], rp, v, p->epsilon * p->coeffs[k], val, gdummy, hdummy,
                                 &t);
    }
    return t;
  }
  // Generic bodies: difference the FD Hessian. Accuracy is limited; the
  // analytic families are the ones used for tight-tolerance work.
  std::vector<Mat> t(d);
  const double step = 2e-3;
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Zero(d);
    e[k] = step;
    t[k] = (8.0 * (support_hessian(v + e) - support_hessian(v - e)) -
            (support_hessian(v + 2 * e) - support_hessian(v - 2 * e))) /
           (12.0 * step);
  }
  return t;
}

inline BodyValidationReport ConvexBody::validate(int grid_resolution) const {
  if (grid_resolution < 8) throw InvalidArgumentError("validate: grid_resolution must be >= 8");
  BodyValidationReport rep;
  std::vector<Vec> dirs;
  if (dim_ == 2) {
    const int n = 4 * grid_resolution;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 * kPi * i / n;
      dirs.push_back(Vec(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
  } else {
    const int nt = grid_resolution;
    const int ns = std::max(4, grid_resolution / 2);
    // Gauss nodes in s keep the sampling away from the coordinate poles.
    const Vec s = gauss_legendre(ns).nodes;
    for (int j = 0; j < ns; ++j)
      for (int i = 0; i < nt; ++i) {
        const double th = 2.0 * kPi * i / nt;
        const double w = std::sqrt(1.0 - s[j] * s[j]);
        dirs.push_back(Vec(Eigen::Vector3d(w * std::cos(th), w * std::sin(th), s[j])));
      }
  }
  rep.grid_nodes = static_cast<int>(dirs.size());

  std::vector<double> hvals(dirs.size());
  std::vector<Vec> uvals(dirs.size());
  rep.min_tangential_hessian_eig = std::numeric_limits<double>::infinity();
  double worst_metric = -1.0;
  for (std::size_t idx = 0; idx < dirs.size(); ++idx) {
    const Vec& nu = dirs[idx];
    const double h = support_extension(nu);
    hvals[idx] = h;
    uvals[idx] = support_gradient(nu);
    double violation = 0.0;
    if (h <= 0.0) {
      rep.pass = false;
      rep.failures.push_back("support not positive");
      violation = std::max(violation, -h + 1.0);
    }
    const double supp_res = std::abs(uvals[idx].dot(nu) - h) / (1.0 + std::abs(h));
    rep.max_support_residual = std::max(rep.max_support_residual, supp_res);
    if (supp_res > 1e-9) {
      rep.pass = false;
      rep.failures.push_back("supporting-hyperplane residual above tolerance");
      violation = std::max(violation, supp_res);
    }
    Mat t = tangent_basis_of(nu);
    Eigen::SelfAdjointEigenSolver<Mat> es(t.transpose() * support_hessian(nu) * t);
    const double mineig = es.eigenvalues().minCoeff();
    if (mineig < rep.min_tangential_hessian_eig) rep.min_tangential_hessian_eig = mineig;
    if (mineig <= 0.0) {
      rep.pass = false;
      rep.failures.push_back("tangential Hessian not positive definite");
      violation = std::max(violation, -mineig + 1.0);
    }
    if (violation > worst_metric) {
      worst_metric = violation;
      rep.worst_node = static_cast<int>(idx);
      rep.worst_direction = nu;
    }
  }

  // Gauge consistency: u(nu) must lie on the boundary, i.e. its gauge
  // max_mu <u(nu),mu>/h(mu) equals 1. The sampled max is grid-limited.
  rep.gauge_tolerance = 20.0 / (grid_resolution * grid_resolution);
  for (std::size_t idx = 0; idx < dirs.size(); ++idx) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < dirs.size(); ++m)
      best = std::max(best, uvals[idx].dot(dirs[m]) / hvals[m]);
    rep.max_gauge_residual = std::max(rep.max_gauge_residual, std::abs(best - 1.0));
  }
  if (rep.max_gauge_residual > rep.gauge_tolerance) {
    rep.pass = false;
    rep.failures.push_back("gauge consistency of u(nu) above grid tolerance");
  }
  // De-duplicate failure messages.
  std::sort(rep.failures.begin(), rep.failures.end());
  rep.failures.erase(std::unique(rep.failures.begin(), rep.failures.end()), rep.failures.end());
  return rep;
}

}  // namespace minkgeo
