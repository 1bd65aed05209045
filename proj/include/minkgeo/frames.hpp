#pragma once

#include <sstream>

#include "minkgeo/body.hpp"
#include "minkgeo/surface.hpp"

namespace minkgeo {

/// Geometric state of one surface node: Euclidean normal xi, Birkhoff normal
/// eta = u(xi), the differential d_eta as an endomorphism of the tangent
/// plane, the Dupin Gram matrix b_ij = <du(xi)^{-1} e_i, e_j>, and the
/// Minkowski principal curvatures (eigenvalues of d_eta, real because d_eta
/// is self-adjoint in the Dupin metric).
struct PointFrame {
  Vec position;
  Mat tangent_basis;  // columns e_1..e_{n-1}, orthonormalized chart partials
  Mat metric;         // Gram matrix of the raw chart partials
  Vec xi;
  Vec eta;
  double support_at_normal = 0.0;  // <eta, xi> = h_B(xi)
  Mat d_eta;                       // in tangent_basis coordinates
  Mat du_restricted;               // du(xi) in tangent_basis coordinates
  Mat dupin_gram;                  // its inverse
  Vec lambdas;                     // ascending
  Mat eigenvectors;                // Dupin-normalized, sign-fixed columns
  double H_m = 0.0;
  double K_m = 0.0;
  double B_m_sq = 0.0;
  double rho = 0.0;                // <x, xi> / <eta, xi>
  double tangential_residual = 0.0;
};

struct FrameSet {
  int dim = 3;
  std::vector<PointFrame> nodes;

  double max_tangential_residual = 0.0;   // normal leakage of d_eta, relative
  double max_dupin_asymmetry = 0.0;       // || B A - A^T B || / || B A ||
  double max_reconstruction_error = 0.0;  // || d_eta - V diag(lambda) V^{-1} || / || d_eta ||
  double min_support = 0.0;
  double h_m_min = 0.0, h_m_max = 0.0;
  double h_m_spread() const { return h_m_max - h_m_min; }

  Grid field(const SampledSurface& surf, double PointFrame::*member) const {
    Grid g(surf.n2, surf.n1);
    for (int j = 0; j < surf.n2; ++j)
      for (int i = 0; i < surf.n1; ++i) g(j, i) = nodes[surf.index(i, j)].*member;
    return g;
  }
};

/// Per-node frame assembly. d_eta is obtained by differentiating eta composed
/// with the chart (chain rule through the analytic normal derivatives) and
/// projecting on the tangent plane; the discarded normal component is kept as
/// a consistency metric and must stay below 1e-6 relative.
inline FrameSet compute_frames(const ConvexBody& body, const SampledSurface& surf) {
  if (body.dimension() != surf.dim)
    throw InvalidArgumentError("compute_frames: body and surface dimensions differ");
  const int tdim = surf.dim - 1;
  FrameSet fs;
  fs.dim = surf.dim;
  fs.nodes.resize(static_cast<std::size_t>(surf.nodes()));
  fs.min_support = std::numeric_limits<double>::infinity();
  fs.h_m_min = std::numeric_limits<double>::infinity();
  fs.h_m_max = -std::numeric_limits<double>::infinity();

  for (int id = 0; id < surf.nodes(); ++id) {
    PointFrame& f = fs.nodes[static_cast<std::size_t>(id)];
    f.position = surf.x[id];
    f.xi = surf.xi[id];
    f.metric = surf.metric[id];

    // Gram-Schmidt on the chart partials; deterministic and well conditioned
    // for non-degenerate charts.
    Mat e(surf.dim, tdim);
    Vec e1 = surf.x1[id] / surf.x1[id].norm();
    e.col(0) = e1;
    if (tdim == 2) {
      Vec e2 = surf.x2[id] - surf.x2[id].dot(e1) * e1;
      e.col(1) = e2 / e2.norm();
    }
    f.tangent_basis = e;

    // d_xi(e_k): express e_k in chart partials, combine the analytic
    // parameter derivatives of the normal.
    Mat coeff(tdim, tdim);  // chart-partial coordinates of e columns
    for (int k = 0; k < tdim; ++k) {
      Vec rhs(tdim);
      rhs[0] = surf.x1[id].dot(e.col(k));
      if (tdim == 2) rhs[1] = surf.x2[id].dot(e.col(k));
      coeff.col(k) = surf.metric_inv[id] * rhs;
    }
    Mat dxi(surf.dim, tdim);
    for (int k = 0; k < tdim; ++k) {
      dxi.col(k) = coeff(0, k) * surf.dxi1[id];
      if (tdim == 2) dxi.col(k) += coeff(1, k) * surf.dxi2[id];
    }
    Mat weingarten = e.transpose() * dxi;

    f.eta = body.inverse_gauss(f.xi);
    f.support_at_normal = body.support_value(f.xi);
    const Mat du = body.inverse_gauss_jacobian(f.xi);

    Mat deta_ambient = du * dxi;  // columns d_eta(e_k)
    double leak = 0.0, scale = 0.0;
    for (int k = 0; k < tdim; ++k) {
      leak = std::max(leak, std::abs(f.xi.dot(deta_ambient.col(k))));
      scale = std::max(scale, deta_ambient.col(k).norm());
    }
    f.tangential_residual = leak / (scale > 0.0 ? scale : 1.0);
    fs.max_tangential_residual = std::max(fs.max_tangential_residual, f.tangential_residual);

    f.d_eta = e.transpose() * deta_ambient;
    f.du_restricted = e.transpose() * du * e;
    f.dupin_gram = f.du_restricted.inverse();

    // Self-adjointness of d_eta in the Dupin metric: B A = W (up to numerics).
    const Mat ba = f.dupin_gram * f.d_eta;
    const double ba_norm = ba.norm();
    fs.max_dupin_asymmetry =
        std::max(fs.max_dupin_asymmetry, (ba - ba.transpose()).norm() / (ba_norm > 0 ? ba_norm : 1));

    // lambda from the symmetric-definite pencil W v = lambda B v, which is
    // the d_eta eigenproblem with realness enforced structurally.
    const Mat w_sym = 0.5 * (weingarten + weingarten.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(w_sym, f.dupin_gram);
    if (ges.info() != Eigen::Success)
      throw FrameConsistencyError("generalized eigensolve failed at a node");
    f.lambdas = ges.eigenvalues();
    f.eigenvectors = ges.eigenvectors();
    for (int k = 0; k < tdim; ++k) {
      for (int r = 0; r < tdim; ++r) {
        if (std::abs(f.eigenvectors(r, k)) > 1e-14) {
          if (f.eigenvectors(r, k) < 0) f.eigenvectors.col(k) *= -1.0;
          break;
        }
      }
    }

    const Mat recon = f.eigenvectors * f.lambdas.asDiagonal() *
                      f.eigenvectors.inverse();
    const double dn = f.d_eta.norm();
    fs.max_reconstruction_error =
        std::max(fs.max_reconstruction_error, (recon - f.d_eta).norm() / (dn > 0 ? dn : 1));

    f.H_m = f.lambdas.mean();
    f.K_m = f.lambdas.prod();
    f.B_m_sq = f.lambdas.squaredNorm();
    f.rho = f.position.dot(f.xi) / f.support_at_normal;

    fs.min_support = std::min(fs.min_support, f.support_at_normal);
    fs.h_m_min = std::min(fs.h_m_min, f.H_m);
    fs.h_m_max = std::max(fs.h_m_max, f.H_m);
  }

  if (fs.max_tangential_residual > 1e-6) {
    std::ostringstream os;
    os << "d_eta has a non-tangential component (relative residual "
       << fs.max_tangential_residual << "); chart or body derivatives are inconsistent";
    throw FrameConsistencyError(os.str());
  }
  return fs;
}

/// Max residual of the pointwise identity
///   e_i(rho) = <eta,xi>^{-1} <x - rho eta, d_xi(e_i)>,
/// with the left side differentiated spectrally along the chart and the right
/// side taken from frame data; normalized by (max |grad rho| + 1).
inline double check_drho_identity(const FrameSet& frames, const SurfaceCalculus& calc) {
  const SampledSurface& surf = calc.surface();
  const Grid rho = frames.field(surf, &PointFrame::rho);
  const std::vector<Vec> grad = calc.gradient(rho);
  double worst = 0.0, scale = 0.0;
  for (int id = 0; id < surf.nodes(); ++id) scale = std::max(scale, grad[id].norm());
  scale += 1.0;
  const int tdim = surf.dim - 1;
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& f = frames.nodes[static_cast<std::size_t>(id)];
    const Vec y = f.position - f.rho * f.eta;
    for (int k = 0; k < tdim; ++k) {
      const Vec e = f.tangent_basis.col(k);
      Vec rhs_coord(tdim);
      rhs_coord[0] = surf.x1[id].dot(e);
      if (tdim == 2) rhs_coord[1] = surf.x2[id].dot(e);
      const Vec ab = surf.metric_inv[id] * rhs_coord;
      Vec dxie = ab[0] * surf.dxi1[id];
      if (tdim == 2) dxie += ab[1] * surf.dxi2[id];
      const double lhs = grad[id].dot(e);
      const double rhs = y.dot(dxie) / f.support_at_normal;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst / scale;
}

struct UmbilicityReport {
  double max_spread = 0.0;        // max over nodes of lambda_max - lambda_min
  double umbilic_fraction = 0.0;  // nodes with spread <= tol * (|H_m| + 1)
  int umbilic_count = 0;
  double tolerance = 1e-8;
  int min_spread_node = -1;       // where the surface is closest to umbilic
};

inline UmbilicityReport umbilicity_report(const FrameSet& frames, double tol = 1e-8) {
  UmbilicityReport rep;
  rep.tolerance = tol;
  double min_spread = std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < frames.nodes.size(); ++id) {
    const PointFrame& f = frames.nodes[id];
    const double spread = f.lambdas.maxCoeff() - f.lambdas.minCoeff();
    rep.max_spread = std::max(rep.max_spread, spread);
    if (spread < min_spread) {
      min_spread = spread;
      rep.min_spread_node = static_cast<int>(id);
    }
    if (spread <= tol * (std::abs(f.H_m) + 1.0)) ++rep.umbilic_count;
  }
  if (!frames.nodes.empty())
    rep.umbilic_fraction = static_cast<double>(rep.umbilic_count) / frames.nodes.size();
  return rep;
}

}  // namespace minkgeo
