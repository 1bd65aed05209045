#pragma once

#include <optional>

#include "minkgeo/fields.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/functionals.hpp"

namespace minkgeo {

enum class VariationKind { birkhoff_normal, scaling, translation, general };
enum class FunctionalKind { area_minkowski, volume, j_m };

/// One-parameter deformation F(t, p) = x(p) + t * W(p), carried as the
/// displacement field W with its parameter partials so that deformed
/// functionals can be evaluated from first derivatives alone.
struct DisplacementField {
  std::vector<Vec> w, w1, w2;
};

/// Birkhoff-normal displacement W = f * eta. The parameter derivatives of
/// eta come from the chain rule du(xi) d_xi, which is exact for analytic
/// charts; f is differentiated spectrally.
inline DisplacementField birkhoff_normal_displacement(const SurfaceCalculus& calc,
                                                      const FrameSet& frames, const Grid& f) {
  const SampledSurface& surf = calc.surface();
  const Grid f1 = calc.d1(f);
  const Grid f2 = calc.d2(f);
  DisplacementField d;
  const int m = surf.nodes();
  d.w.resize(m);
  d.w1.resize(m);
  d.w2.resize(m);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
      // ambient Hessian action: d(eta)/d(param) = du(xi) * d(xi)/d(param)
      const Vec eta1 = fr.tangent_basis *
                       (fr.du_restricted * (fr.tangent_basis.transpose() * surf.dxi1[id]));
      const Vec eta2 = fr.tangent_basis *
                       (fr.du_restricted * (fr.tangent_basis.transpose() * surf.dxi2[id]));
      d.w[id] = f(j, i) * fr.eta;
      d.w1[id] = f1(j, i) * fr.eta + f(j, i) * eta1;
      d.w2[id] = f2(j, i) * fr.eta + f(j, i) * eta2;
    }
  return d;
}

inline DisplacementField scaling_displacement(const SampledSurface& surf) {
  DisplacementField d;
  d.w = surf.x;
  d.w1 = surf.x1;
  d.w2 = surf.x2;
  return d;
}

inline DisplacementField translation_displacement(const SampledSurface& surf, const Vec& v) {
  DisplacementField d;
  const int m = surf.nodes();
  d.w.assign(m, v);
  d.w1.assign(m, Vec::Zero(surf.dim));
  d.w2.assign(m, Vec::Zero(surf.dim));
  return d;
}

/// General ambient vector field W given componentwise on the grid.
inline DisplacementField general_displacement(const SurfaceCalculus& calc,
                                              const std::vector<Grid>& components) {
  const SampledSurface& surf = calc.surface();
  if (static_cast<int>(components.size()) != surf.dim)
    throw InvalidArgumentError("general_displacement: need one grid per ambient component");
  DisplacementField d;
  const int m = surf.nodes();
  d.w.assign(m, Vec::Zero(surf.dim));
  d.w1.assign(m, Vec::Zero(surf.dim));
  d.w2.assign(m, Vec::Zero(surf.dim));
  for (int c = 0; c < surf.dim; ++c) {
    const Grid& g = components[static_cast<std::size_t>(c)];
    const Grid g1 = calc.d1(g);
    const Grid g2 = calc.d2(g);
    for (int j = 0; j < surf.n2; ++j)
      for (int i = 0; i < surf.n1; ++i) {
        const int id = surf.index(i, j);
        d.w[id][c] = g(j, i);
        d.w1[id][c] = g1(j, i);
        d.w2[id][c] = g2(j, i);
      }
  }
  return d;
}

struct VariationSpec {
  VariationKind kind = VariationKind::birkhoff_normal;
  DisplacementField displacement;
  /// Base step of the Richardson table, relative to the surface scale.
  double step_relative = 1e-3;
};

namespace detail {

/// Evaluates the requested functional on the deformed node set
/// x + t W. Only first parameter derivatives enter the area element and the
/// normal, so the displacement jet suffices.
inline double functional_along(const ConvexBody& body, const SampledSurface& surf,
                               const DisplacementField& disp, double t, FunctionalKind which,
                               double h_m_ref) {
  const int n = surf.dim;
  Vec am_vals = Vec::Zero(surf.nodes());
  Vec v_vals = Vec::Zero(surf.nodes());
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const Vec x = surf.x[id] + t * disp.w[id];
      const Vec x1 = surf.x1[id] + t * disp.w1[id];
      Vec xi(n);
      double jac = 0.0;
      if (n == 3) {
        const Vec x2 = surf.x2[id] + t * disp.w2[id];
        const Eigen::Vector3d cr = Eigen::Vector3d(x1).cross(Eigen::Vector3d(x2));
        jac = cr.norm();
        if (!(jac > 1e-12 * (1.0 + x1.norm() * x2.norm())))
          throw DegenerateChartError("deformed surface is degenerate at a stencil point", id);
        xi = cr / jac;
      } else {
        jac = x1.norm();
        if (!(jac > 1e-12))
          throw DegenerateChartError("deformed curve is degenerate at a stencil point", id);
        xi = Vec(2);
        xi << x1[1], -x1[0];
        xi /= jac;
      }
      const double wq = surf.w1[i] * surf.w2[j] * jac;
      am_vals[id] = wq * body.support_extension(xi);
      if (which != FunctionalKind::area_minkowski) v_vals[id] = wq * x.dot(xi) / n;
    }
  const double am = pairwise_sum(am_vals.data(), am_vals.size());
  if (which == FunctionalKind::area_minkowski) return am;
  const double vol = pairwise_sum(v_vals.data(), v_vals.size());
  if (which == FunctionalKind::volume) return vol;
  return am - (n - 1) * h_m_ref * vol;
}

}  // namespace detail

struct FdDerivative {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Central finite difference of a functional along the variation at t = 0,
/// with a two-level Richardson table over steps h, h/2, h/4. If a stencil
/// point degenerates the step is reduced once before giving up.
inline FdDerivative fd_functional_derivative(const ConvexBody& body, const SampledSurface& surf,
                                             const VariationSpec& spec, FunctionalKind which,
                                             int order, double h_m_ref = 0.0) {
  if (order != 1 && order != 2)
    throw InvalidArgumentError("fd_functional_derivative: order must be 1 or 2");
  double scale = 0.0;
  for (int id = 0; id < surf.nodes(); ++id) scale = std::max(scale, surf.x[id].norm());
  double h = spec.step_relative * std::max(scale, 1e-12);

  auto table_at = [&](double step) {
    auto eval = [&](double t) {
      return detail::functional_along(body, surf, spec.displacement, t, which, h_m_ref);
    };
    std::array<double, 3> d{};
    if (order == 1) {
      for (int k = 0; k < 3; ++k) {
        const double hh = step / (1 << k);
        d[static_cast<std::size_t>(k)] = (eval(hh) - eval(-hh)) / (2.0 * hh);
      }
    } else {
      const double f0 = eval(0.0);
      for (int k = 0; k < 3; ++k) {
        const double hh = step / (1 << k);
        d[static_cast<std::size_t>(k)] = (eval(hh) - 2.0 * f0 + eval(-hh)) / (hh * hh);
      }
    }
    // error in h^2 powers in both cases
    const double r1 = (4.0 * d[1] - d[0]) / 3.0;
    const double r2 = (4.0 * d[2] - d[1]) / 3.0;
    FdDerivative out;
    out.value = (16.0 * r2 - r1) / 15.0;
    out.error_estimate = std::abs(r2 - r1);
    return out;
  };

  try {
    return table_at(h);
  } catch (const DegenerateChartError&) {
    return table_at(h / 10.0);  // one retry with a smaller step
  }
}

/// First variation for Birkhoff-normal variations (eq. of the area measure):
/// (n-1) * integral of H_m f d(omega). N_eta(f eta) = f.
inline double first_variation_formula(const FrameSet& frames, const SampledSurface& surf,
                                      const Grid& f) {
  Vec vals(surf.nodes());
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
      vals[id] = (surf.dim - 1) * fr.H_m * f(j, i) * fr.support_at_normal;
    }
  return surf.integrate(vals);
}

/// General first variation: project W on the eta direction of the
/// decomposition R^n = T_p M + <eta>, N_eta(W) = <W,xi>/<eta,xi>.
inline double first_variation_general(const FrameSet& frames, const SampledSurface& surf,
                                      const std::vector<Vec>& w_field) {
  Vec vals(surf.nodes());
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
    const double neta = w_field[static_cast<std::size_t>(id)].dot(fr.xi) / fr.support_at_normal;
    vals[id] = (surf.dim - 1) * fr.H_m * neta * fr.support_at_normal;
  }
  return surf.integrate(vals);
}

/// The anisotropic Laplacian
///   Delta_m f = <eta,xi>^{-1} div( <eta,xi>^2 du(grad f) ).
/// Reduces to Laplace-Beltrami when the body is the Euclidean unit ball.
inline Grid minkowski_laplacian(const SurfaceCalculus& calc, const FrameSet& frames,
                                const ScalarField& f) {
  const SampledSurface& surf = calc.surface();
  std::vector<Vec> flux(static_cast<std::size_t>(surf.nodes()));
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
    flux[static_cast<std::size_t>(id)] =
        fr.support_at_normal * fr.support_at_normal * f.dupin_grad[static_cast<std::size_t>(id)];
  }
  Grid div = calc.divergence(flux);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i)
      div(j, i) /= frames.nodes[static_cast<std::size_t>(surf.index(i, j))].support_at_normal;
  return div;
}

struct SecondVariationValue {
  double value = 0.0;
  double mean_removed = 0.0;  // dw-mean subtracted before evaluation
};

namespace detail {

inline Grid project_mean_zero(const SampledSurface& surf, const FrameSet& frames, const Grid& f,
                              double* removed) {
  const double mean = dw_mean(surf, frames, f);
  if (removed) *removed = mean;
  return f.array() - mean;
}

}  // namespace detail

/// Gradient form of the second variation:
///   integral of ( -B_m^2 f^2 + <eta,xi> (grad^b f, grad^b f)_b ) d(omega),
/// where (du grad f, du grad f)_b = <grad f, du grad f>.
inline SecondVariationValue second_variation_gradient_form(const SurfaceCalculus& calc,
                                                           const FrameSet& frames, const Grid& f0) {
  const SampledSurface& surf = calc.surface();
  SecondVariationValue out;
  const Grid f = detail::project_mean_zero(surf, frames, f0, &out.mean_removed);
  const ScalarField sf = make_scalar_field(calc, frames, f);
  Vec vals(surf.nodes());
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
      const double quad = sf.grad[static_cast<std::size_t>(id)].dot(
          sf.dupin_grad[static_cast<std::size_t>(id)]);
      vals[id] =
          (-fr.B_m_sq * f(j, i) * f(j, i) + fr.support_at_normal * quad) * fr.support_at_normal;
    }
  out.value = surf.integrate(vals);
  return out;
}

/// Divergence form of the second variation:
///   - integral of f ( B_m^2 f + Delta_m f ) d(omega).
/// Independent code path from the gradient form; their agreement is the
/// numerical integration-by-parts identity.
inline SecondVariationValue second_variation_divergence_form(const SurfaceCalculus& calc,
                                                             const FrameSet& frames,
                                                             const Grid& f0) {
  const SampledSurface& surf = calc.surface();
  SecondVariationValue out;
  const Grid f = detail::project_mean_zero(surf, frames, f0, &out.mean_removed);
  const ScalarField sf = make_scalar_field(calc, frames, f);
  const Grid lap = minkowski_laplacian(calc, frames, sf);
  Vec vals(surf.nodes());
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
      vals[id] = -f(j, i) * (fr.B_m_sq * f(j, i) + lap(j, i)) * fr.support_at_normal;
    }
  out.value = surf.integrate(vals);
  return out;
}

/// Relative residual of the Minkowski identity
///   integral of rho H_m d(omega) = integral of d(omega),
/// which holds for every closed immersion.
inline double minkowski_identity_residual(const FrameSet& frames, const SampledSurface& surf) {
  Vec num(surf.nodes()), den(surf.nodes());
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
    num[id] = (1.0 - fr.rho * fr.H_m) * fr.support_at_normal;
    den[id] = fr.support_at_normal;
  }
  return std::abs(surf.integrate(num)) / surf.integrate(den);
}

struct CmcCertificate {
  double deficit = 0.0;   // integral of (B_m^2 - (n-1) H_m^2) d(omega), >= 0
  double h_m_spread = 0.0;
};

/// For a stable CMC surface the deficit must vanish (forcing umbilicity
/// everywhere); it is strictly positive away from Minkowski spheres.
inline CmcCertificate cmc_stability_certificate(const FrameSet& frames,
                                                const SampledSurface& surf) {
  CmcCertificate cert;
  Vec vals(surf.nodes());
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
    vals[id] = (fr.B_m_sq - (surf.dim - 1) * fr.H_m * fr.H_m) * fr.support_at_normal;
  }
  cert.deficit = surf.integrate(vals);
  cert.h_m_spread = frames.h_m_spread();
  return cert;
}

struct LaplacianRhoResult {
  bool applicable = false;  // identity is only claimed for constant H_m
  double residual = 0.0;
  double h_m_spread = 0.0;
};

/// Max-norm residual of Delta_m rho = (n-1) H_m - rho B_m^2 on CMC surfaces.
/// Non-CMC inputs return a not-applicable marker instead of a residual.
inline LaplacianRhoResult laplacian_rho_check(const SurfaceCalculus& calc, const FrameSet& frames,
                                              double cmc_tolerance = 1e-6) {
  const SampledSurface& surf = calc.surface();
  LaplacianRhoResult res;
  res.h_m_spread = frames.h_m_spread();
  if (res.h_m_spread > cmc_tolerance) return res;
  res.applicable = true;
  const Grid rho = frames.field(surf, &PointFrame::rho);
  const ScalarField sf = make_scalar_field(calc, frames, rho);
  const Grid lap = minkowski_laplacian(calc, frames, sf);
  double worst = 0.0;
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const PointFrame& fr = frames.nodes[static_cast<std::size_t>(surf.index(i, j))];
      const double rhs = (surf.dim - 1) * fr.H_m - fr.rho * fr.B_m_sq;
      worst = std::max(worst, std::abs(lap(j, i) - rhs));
    }
  res.residual = worst;
  return res;
}

}  // namespace minkgeo
