#pragma once

#include "minkgeo/fields.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/variation.hpp"

namespace minkgeo {

namespace detail {

/// Fully normalized associated Legendre values P_l^m(s) for all sample
/// points, by the standard stable recurrence. With the sqrt(2) azimuthal
/// factor these give orthonormal real spherical harmonics.
inline Vec normalized_assoc_legendre(int l, int m, const Vec& s) {
  const Vec w = (1.0 - s.array().square()).sqrt().matrix();
  Vec pmm = Vec::Constant(s.size(), 1.0 / std::sqrt(4.0 * kPi));
  for (int i = 1; i <= m; ++i)
    pmm = std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * w.cwiseProduct(pmm);
  if (l == m) return pmm;
  Vec pm1 = std::sqrt(2.0 * m + 3.0) * s.cwiseProduct(pmm);
  if (l == m + 1) return pm1;
  Vec plm;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) / (static_cast<double>(ll) * ll - m * m));
    const double b =
        std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) / (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    plm = a * (s.cwiseProduct(pm1) - b * pmm);
    pmm = pm1;
    pm1 = plm;
  }
  return pm1;
}

}  // namespace detail

struct BasisFunction {
  Grid values;
  std::string label;
};

/// Degree-graded smooth basis on the parameter grid, constant mode excluded
/// (it is annihilated by the mean projection). Sphere charts use real
/// spherical harmonics (azimuthal Fourier modes times associated Legendre
/// functions in s) which are pole-regular; tori use tensor Fourier modes and
/// circles plain Fourier modes.
inline std::vector<BasisFunction> spectrum_basis(const SampledSurface& surf, int size) {
  std::vector<BasisFunction> basis;
  basis.reserve(static_cast<std::size_t>(size));
  auto label = [](const char* fmt, int a, int b) {
    std::ostringstream os;
    os << fmt << "(" << a << "," << b << ")";
    return os.str();
  };
  if (surf.topo == Topology::sphere) {
    for (int l = 1; static_cast<int>(basis.size()) < size; ++l) {
      for (int m = 0; m <= l && static_cast<int>(basis.size()) < size; ++m) {
        const Vec p = detail::normalized_assoc_legendre(l, m, surf.p2);
        if (m == 0) {
          Grid g(surf.n2, surf.n1);
          for (int j = 0; j < surf.n2; ++j) g.row(j).setConstant(p[j]);
          basis.push_back({std::move(g), label("Y", l, 0)});
          continue;
        }
        Grid gc(surf.n2, surf.n1), gs(surf.n2, surf.n1);
        for (int j = 0; j < surf.n2; ++j)
          for (int i = 0; i < surf.n1; ++i) {
            gc(j, i) = std::sqrt(2.0) * p[j] * std::cos(m * surf.p1[i]);
            gs(j, i) = std::sqrt(2.0) * p[j] * std::sin(m * surf.p1[i]);
          }
        basis.push_back({std::move(gc), label("Yc", l, m)});
        if (static_cast<int>(basis.size()) < size)
          basis.push_back({std::move(gs), label("Ys", l, m)});
      }
    }
  } else if (surf.topo == Topology::torus) {
    for (int total = 1; static_cast<int>(basis.size()) < size; ++total) {
      for (int k1 = 0; k1 <= total && static_cast<int>(basis.size()) < size; ++k1) {
        const int k2 = total - k1;
        for (int t1 = 0; t1 < (k1 ? 2 : 1); ++t1)
          for (int t2 = 0; t2 < (k2 ? 2 : 1); ++t2) {
            if (static_cast<int>(basis.size()) >= size) break;
            Grid g(surf.n2, surf.n1);
            for (int j = 0; j < surf.n2; ++j)
              for (int i = 0; i < surf.n1; ++i) {
                const double a1 =
                    t1 ? std::sin(k1 * surf.p1[i]) : std::cos(k1 * surf.p1[i]);
                const double a2 =
                    t2 ? std::sin(k2 * surf.p2[j]) : std::cos(k2 * surf.p2[j]);
                g(j, i) = a1 * a2;
              }
            basis.push_back({std::move(g), label(t1 ? "s" : "c", k1, k2)});
          }
      }
    }
  } else {
    for (int k = 1; static_cast<int>(basis.size()) < size; ++k) {
      Grid gc(1, surf.n1), gs(1, surf.n1);
      for (int i = 0; i < surf.n1; ++i) {
        gc(0, i) = std::cos(k * surf.p1[i]);
        gs(0, i) = std::sin(k * surf.p1[i]);
      }
      basis.push_back({std::move(gc), label("cos", k, 0)});
      if (static_cast<int>(basis.size()) < size) basis.push_back({std::move(gs), label("sin", k, 0)});
    }
  }
  return basis;
}

struct SpectrumReport {
  Vec eigenvalues;           // ascending
  Mat coefficients;          // columns: coefficient vectors in the basis
  std::vector<std::string> basis_labels;
  double mass_condition = 0.0;
  double max_residual = 0.0;          // ||Q v - mu M v|| / (||Q|| ||v||)
  double q_scale = 0.0;               // max |mu|: spectral norm of the pencil
  std::vector<double> mean_projection_magnitude;
};

/// Lowest eigenvalues of the second-variation form on the dw-mean-zero
/// subspace: assemble Q(f,g) and the mass M(f,g) = integral of f g d(omega)
/// over the basis, mass-orthonormalize by a symmetric-definite
/// factorization, and solve the reduced symmetric problem.
inline SpectrumReport stability_spectrum(const SurfaceCalculus& calc, const FrameSet& frames,
                                         int basis_size) {
  const SampledSurface& surf = calc.surface();
  if (basis_size < surf.dim + 2)
    throw InvalidArgumentError("stability_spectrum: basis_size must be at least n + 2");

  std::vector<BasisFunction> basis = spectrum_basis(surf, basis_size);
  SpectrumReport rep;
  const double am = integrate_dw(surf, frames, Grid::Ones(surf.n2, surf.n1));
  for (auto& b : basis) {
    const double mean = integrate_dw(surf, frames, b.values) / am;
    rep.mean_projection_magnitude.push_back(std::abs(mean));
    b.values.array() -= mean;
    rep.basis_labels.push_back(b.label);
  }

  const int k = static_cast<int>(basis.size());
  std::vector<ScalarField> fields;
  fields.reserve(static_cast<std::size_t>(k));
  for (const auto& b : basis) fields.push_back(make_scalar_field(calc, frames, b.values));

  Mat q(k, k), mass(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) {
      Vec qv(surf.nodes()), mv(surf.nodes());
      for (int j = 0; j < surf.n2; ++j)
        for (int i = 0; i < surf.n1; ++i) {
          const int id = surf.index(i, j);
          const PointFrame& fr = frames.nodes[static_cast<std::size_t>(id)];
          const double fa = fields[static_cast<std::size_t>(a)].values(j, i);
          const double fb = fields[static_cast<std::size_t>(b)].values(j, i);
          const double quad = fields[static_cast<std::size_t>(a)].grad[static_cast<std::size_t>(id)].dot(
              fields[static_cast<std::size_t>(b)].dupin_grad[static_cast<std::size_t>(id)]);
          qv[id] = (-fr.B_m_sq * fa * fb + fr.support_at_normal * quad) * fr.support_at_normal;
          mv[id] = fa * fb * fr.support_at_normal;
        }
      q(a, b) = q(b, a) = surf.integrate(qv);
      mass(a, b) = mass(b, a) = surf.integrate(mv);
    }

  Eigen::SelfAdjointEigenSolver<Mat> mes(mass);
  const Vec mev = mes.eigenvalues();
  rep.mass_condition = mev.maxCoeff() / mev.minCoeff();
  if (!(mev.minCoeff() > 1e-10 * mev.maxCoeff())) {
    std::ostringstream os;
    os << "mass matrix is numerically singular (condition " << rep.mass_condition
       << "); lower basis_size below " << basis_size;
    throw BasisDegeneracyError(os.str());
  }
  const Mat t = mes.eigenvectors() * mev.cwiseSqrt().cwiseInverse().asDiagonal();
  const Mat q_reduced = t.transpose() * q * t;
  Eigen::SelfAdjointEigenSolver<Mat> qes(0.5 * (q_reduced + q_reduced.transpose()));
  rep.eigenvalues = qes.eigenvalues();
  rep.coefficients = t * qes.eigenvectors();
  rep.q_scale = rep.eigenvalues.cwiseAbs().maxCoeff();

  const double qnorm = q.norm();
  for (int c = 0; c < k; ++c) {
    const Vec v = rep.coefficients.col(c);
    const double res = (q * v - rep.eigenvalues[c] * (mass * v)).norm() /
                       ((qnorm > 0 ? qnorm : 1.0) * v.norm());
    rep.max_residual = std::max(rep.max_residual, res);
  }
  return rep;
}

/// Grid values of the c-th computed eigenfunction.
inline Grid spectrum_eigenfunction(const SurfaceCalculus& calc, const FrameSet& frames,
                                   const SpectrumReport& rep, int c) {
  const SampledSurface& surf = calc.surface();
  std::vector<BasisFunction> basis =
      spectrum_basis(surf, static_cast<int>(rep.basis_labels.size()));
  const double am = integrate_dw(surf, frames, Grid::Ones(surf.n2, surf.n1));
  Grid g = Grid::Zero(surf.n2, surf.n1);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const double mean = integrate_dw(surf, frames, basis[a].values) / am;
    basis[a].values.array() -= mean;
    g += rep.coefficients(static_cast<int>(a), c) * basis[a].values;
  }
  return g;
}

/// Largest principal angle (radians) between two spans of grid functions in
/// the d(omega) inner product.
inline double max_principal_angle(const SampledSurface& surf, const FrameSet& frames,
                                  const std::vector<Grid>& span_a,
                                  const std::vector<Grid>& span_b) {
  auto inner = [&](const Grid& x, const Grid& y) {
    Vec vals(surf.nodes());
    for (int j = 0; j < surf.n2; ++j)
      for (int i = 0; i < surf.n1; ++i) {
        const int id = surf.index(i, j);
        vals[id] = x(j, i) * y(j, i) *
                   frames.nodes[static_cast<std::size_t>(id)].support_at_normal;
      }
    return surf.integrate(vals);
  };
  const int na = static_cast<int>(span_a.size()), nb = static_cast<int>(span_b.size());
  Mat ga(na, na), gb(nb, nb), gab(na, nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) ga(i, j) = inner(span_a[static_cast<std::size_t>(i)], span_a[static_cast<std::size_t>(j)]);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) gb(i, j) = inner(span_b[static_cast<std::size_t>(i)], span_b[static_cast<std::size_t>(j)]);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) gab(i, j) = inner(span_a[static_cast<std::size_t>(i)], span_b[static_cast<std::size_t>(j)]);
  const Mat la = ga.llt().matrixL();
  const Mat lb = gb.llt().matrixL();
  const Mat y = la.triangularView<Eigen::Lower>().solve(gab);
  const Mat c = lb.triangularView<Eigen::Lower>().solve(y.transpose()).transpose();
  Eigen::JacobiSVD<Mat> svd(c);
  const double smin = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  return std::acos(smin);
}

}  // namespace minkgeo
