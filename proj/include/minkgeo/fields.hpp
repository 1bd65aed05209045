#pragma once

#include "minkgeo/frames.hpp"
#include "minkgeo/polynomial.hpp"
#include "minkgeo/surface.hpp"

namespace minkgeo {

/// Smooth scalar function on the surface, given by grid values with spectral
/// derivative access: parameter partials, the induced surface gradient, and
/// the Dupin gradient du(grad f).
struct ScalarField {
  Grid values;
  Grid d1, d2;
  std::vector<Vec> grad;        // ambient tangent vectors
  std::vector<Vec> dupin_grad;  // du(xi) applied to grad
};

inline ScalarField make_scalar_field(const SurfaceCalculus& calc, const FrameSet& frames,
                                     Grid values) {
  const SampledSurface& surf = calc.surface();
  if (values.rows() != surf.n2 || values.cols() != surf.n1)
    throw InvalidArgumentError("make_scalar_field: grid shape mismatch");
  ScalarField f;
  f.values = std::move(values);
  f.d1 = calc.d1(f.values);
  f.d2 = calc.d2(f.values);
  f.grad = calc.gradient(f.values);
  f.dupin_grad.resize(f.grad.size());
  for (int id = 0; id < surf.nodes(); ++id) {
    const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
    const Vec coords = fr.tangent_basis.transpose() * f.grad[id];
    f.dupin_grad[id] = fr.tangent_basis * (fr.du_restricted * coords);
  }
  return f;
}

/// Integral of f against the Minkowski area measure d(omega) = <eta,xi> dS.
inline double integrate_dw(const SampledSurface& surf, const FrameSet& frames, const Grid& f) {
  Vec vals(surf.nodes());
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      vals[id] = f(j, i) * frames.nodes[static_cast<std::size_t>(id)].support_at_normal;
    }
  return surf.integrate(vals);
}

inline double dw_mean(const SampledSurface& surf, const FrameSet& frames, const Grid& f) {
  const Grid ones = Grid::Ones(surf.n2, surf.n1);
  return integrate_dw(surf, frames, f) / integrate_dw(surf, frames, ones);
}

/// Restriction of a seeded random ambient polynomial to the surface. Smooth
/// across sphere-chart poles by construction and reproducible bit-for-bit.
inline Grid random_surface_field(const SampledSurface& surf, std::uint64_t seed, int degree = 3) {
  const Polynomial p = random_ambient_polynomial(surf.dim, seed, degree);
  Grid g(surf.n2, surf.n1);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) g(j, i) = p.value(surf.x[surf.index(i, j)]);
  return g;
}

/// Normal component of a constant translation field in the eta-decomposition:
/// N_eta(v) = <v, xi> / <eta, xi>. These span the kernel of the second
/// variation on Minkowski spheres.
inline Grid translation_field(const SampledSurface& surf, const FrameSet& frames, const Vec& v) {
  Grid g(surf.n2, surf.n1);
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& f = frames.nodes[static_cast<std::size_t>(id)];
      g(j, i) = v.dot(f.xi) / f.support_at_normal;
    }
  return g;
}

}  // namespace minkgeo
