#pragma once

#include "minkgeo/fields.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/functionals.hpp"
#include "minkgeo/io.hpp"
#include "minkgeo/variation.hpp"

namespace minkgeo {

enum class CheckStatus { pass, fail, not_applicable };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "FAIL";
    default: return "not-applicable";
  }
}

struct CheckRow {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  double tol_scale = 1.0;
  int field_count = 5;
  int field_degree = 3;
};

struct SuiteReport {
  std::vector<CheckRow> rows;
  bool pass = true;
  SuiteOptions options;

  void add(std::string name, double residual, double tol, std::string note = {}) {
    CheckRow r{std::move(name), residual, tol,
               residual <= tol ? CheckStatus::pass : CheckStatus::fail, std::move(note)};
    if (r.status == CheckStatus::fail) pass = false;
    rows.push_back(std::move(r));
  }
  void add_na(std::string name, std::string note) {
    rows.push_back({std::move(name), 0.0, 0.0, CheckStatus::not_applicable, std::move(note)});
  }
};

/// Runs every pointwise and integral identity on one body/surface pair:
/// frame consistency, the rho-derivative identity, the Minkowski identity,
/// the CMC Laplacian identity, first and second variation against the
/// finite-difference oracle, the two second-variation forms against each
/// other, divergence-theorem and self-adjointness checks for the anisotropic
/// Laplacian, and the isoperimetric inequality.
inline SuiteReport run_identity_suite(const ConvexBody& body, const SurfaceChart& chart,
                                      Resolution res = {}, SuiteOptions opts = {}) {
  SuiteReport rep;
  rep.options = opts;
  const double ts = opts.tol_scale;
  const int n = chart.dimension;

  const SampledSurface surf = sample(chart, res);
  const SurfaceCalculus calc(surf);
  const FrameSet frames = compute_frames(body, surf);
  const bool cmc = frames.h_m_spread() <= 1e-6;

  rep.add("frame_tangential_residual", frames.max_tangential_residual, 1e-6 * ts);
  rep.add("dupin_self_adjointness", frames.max_dupin_asymmetry, 1e-8 * ts);
  rep.add("eigen_reconstruction", frames.max_reconstruction_error, 1e-8 * ts);

  double ineq_violation = 0.0;
  for (const auto& f : frames.nodes)
    ineq_violation = std::max(ineq_violation, (n - 1) * f.H_m * f.H_m - f.B_m_sq);
  rep.add("curvature_norm_inequality", ineq_violation, 1e-10 * ts,
          "B_m^2 >= (n-1) H_m^2 pointwise");

  rep.add("drho_identity", check_drho_identity(frames, calc), 1e-6 * ts);
  rep.add("minkowski_identity", minkowski_identity_residual(frames, surf), 1e-8 * ts);

  const LaplacianRhoResult lap_rho = laplacian_rho_check(calc, frames);
  if (lap_rho.applicable)
    rep.add("laplacian_rho", lap_rho.residual, 1e-6 * ts);
  else
    rep.add_na("laplacian_rho", "surface is not CMC (H_m spread " +
                                    std::to_string(lap_rho.h_m_spread) + ")");

  // First variation against the Richardson FD oracle over seeded fields.
  const double am = integrate_dw(surf, frames, Grid::Ones(surf.n2, surf.n1));
  const double h_ref = integrate_dw(surf, frames, frames.field(surf, &PointFrame::H_m)) / am;
  {
    double worst = 0.0;
    for (int k = 0; k < opts.field_count; ++k) {
      const Grid f = random_surface_field(surf, opts.seed + static_cast<std::uint64_t>(k),
                                          opts.field_degree);
      VariationSpec spec;
      spec.displacement = birkhoff_normal_displacement(calc, frames, f);
      const FdDerivative fd =
          fd_functional_derivative(body, surf, spec, FunctionalKind::area_minkowski, 1);
      worst = std::max(worst, rel_diff(fd.value, first_variation_formula(frames, surf, f)));
    }
    rep.add("first_variation_vs_fd", worst, 1e-6 * ts);
  }

  // Translation invariance: A_m'(0) = 0 for constant fields.
  {
    double worst = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      Vec v = Vec::Zero(n);
      v[axis] = 1.0;
      std::vector<Vec> w(static_cast<std::size_t>(surf.nodes()), v);
      const double val = first_variation_general(frames, surf, w);
      Vec mag(surf.nodes());
      for (int id = 0; id < surf.nodes(); ++id) {
        const auto& fr = frames.nodes[static_cast<std::size_t>(id)];
        mag[id] = std::abs((n - 1) * fr.H_m * v.dot(fr.xi));
      }
      const double scale = surf.integrate(mag);
      worst = std::max(worst, std::abs(val) / scale);
    }
    rep.add("translation_first_variation", worst, 1e-8 * ts);
  }

  // Scaling: the position field gives (n-1) A_m(0).
  {
    const double val = first_variation_general(frames, surf, surf.x);
    rep.add("scaling_first_variation", rel_diff(val, (n - 1) * am), 1e-8 * ts);
  }

  // Second variation: both analytic forms and, on CMC surfaces, the FD of J_m.
  {
    double worst_forms = 0.0, worst_fd = 0.0;
    for (int k = 0; k < opts.field_count; ++k) {
      const Grid f = random_surface_field(
          surf, opts.seed + 100 + static_cast<std::uint64_t>(k), opts.field_degree);
      const SecondVariationValue qg = second_variation_gradient_form(calc, frames, f);
      const SecondVariationValue qd = second_variation_divergence_form(calc, frames, f);
      const double m0 = std::max(std::abs(qg.value), std::abs(qd.value));
      worst_forms = std::max(worst_forms, std::abs(qg.value - qd.value) / m0);
      if (cmc) {
        Grid fz = f.array() - dw_mean(surf, frames, f);
        VariationSpec spec;
        spec.displacement = birkhoff_normal_displacement(calc, frames, fz);
        const FdDerivative fd =
            fd_functional_derivative(body, surf, spec, FunctionalKind::j_m, 2, h_ref);
        const double m1 = std::max({std::abs(qg.value), std::abs(qd.value), std::abs(fd.value)});
        worst_fd = std::max(worst_fd, std::max(std::abs(qg.value - fd.value),
                                               std::abs(qd.value - fd.value)) / m1);
      }
    }
    rep.add("second_variation_forms", worst_forms, 1e-6 * ts);
    if (cmc)
      rep.add("second_variation_vs_fd", worst_fd, 1e-5 * ts);
    else
      rep.add_na("second_variation_vs_fd", "A_m'' = J_m'' requires constant H_m");
  }

  // Translations are in the kernel of the second variation at CMC surfaces.
  if (cmc) {
    double worst = 0.0;
    for (int axis = 0; axis < n; ++axis) {
      Vec v = Vec::Zero(n);
      v[axis] = 1.0;
      const Grid t = translation_field(surf, frames, v);
      const SecondVariationValue q = second_variation_gradient_form(calc, frames, t);
      const ScalarField sf = make_scalar_field(calc, frames, t);
      Vec mag(surf.nodes());
      for (int j = 0; j < surf.n2; ++j)
        for (int i = 0; i < surf.n1; ++i) {
          const int id = surf.index(i, j);
          const auto& fr = frames.nodes[static_cast<std::size_t>(id)];
          mag[id] = (std::abs(fr.B_m_sq * t(j, i) * t(j, i)) +
                     std::abs(fr.support_at_normal *
                              sf.grad[static_cast<std::size_t>(id)].dot(
                                  sf.dupin_grad[static_cast<std::size_t>(id)]))) *
                    fr.support_at_normal;
        }
      worst = std::max(worst, std::abs(q.value) / surf.integrate(mag));
    }
    rep.add("translation_second_variation", worst, 1e-6 * ts);
  } else {
    rep.add_na("translation_second_variation", "surface is not CMC");
  }

  // Divergence theorem and self-adjointness of the anisotropic Laplacian.
  {
    const Grid f = random_surface_field(surf, opts.seed + 200, opts.field_degree);
    const Grid g = random_surface_field(surf, opts.seed + 201, opts.field_degree);
    const ScalarField sf = make_scalar_field(calc, frames, f);
    const ScalarField sg = make_scalar_field(calc, frames, g);
    const Grid lf = minkowski_laplacian(calc, frames, sf);
    const Grid lg = minkowski_laplacian(calc, frames, sg);
    const double int_lap = integrate_dw(surf, frames, lf);
    const double scale_lap = integrate_dw(surf, frames, Grid(lf.cwiseAbs())) + 1e-300;
    rep.add("divergence_theorem", std::abs(int_lap) / scale_lap, 1e-8 * ts);
    const Grid f_lg = (f.array() * lg.array()).matrix();
    const Grid g_lf = (g.array() * lf.array()).matrix();
    const double a = integrate_dw(surf, frames, f_lg);
    const double b = integrate_dw(surf, frames, g_lf);
    const double scale_sa = integrate_dw(surf, frames, Grid(f_lg.cwiseAbs())) + 1e-300;
    rep.add("laplacian_self_adjointness", std::abs(a - b) / scale_sa, 1e-7 * ts);
  }

  // CMC deficit is nonnegative for every surface (equality iff umbilic).
  {
    const CmcCertificate cert = cmc_stability_certificate(frames, surf);
    rep.add("cmc_deficit_nonnegative", std::max(0.0, -cert.deficit), 1e-9 * am * ts,
            "deficit = " + std::to_string(cert.deficit));
  }

  // Isoperimetric inequality for embedded charts.
  if (chart.embedded) {
    const FunctionalReport fr = functional_report(body, surf, frames);
    rep.add("isoperimetric_inequality", std::max(0.0, 1.0 - fr.isoperimetric_ratio), 1e-8 * ts,
            "ratio = " + std::to_string(fr.isoperimetric_ratio));
  } else {
    rep.add_na("isoperimetric_inequality", "chart is not embedded");
  }

  return rep;
}

inline Json to_json(const SuiteReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["seed"] = rep.options.seed;
  j["tol_scale"] = rep.options.tol_scale;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json row;
    row["name"] = r.name;
    row["status"] = to_string(r.status);
    if (r.status != CheckStatus::not_applicable) {
      row["residual"] = r.residual;
      row["tolerance"] = r.tolerance;
    }
    if (!r.note.empty()) row["note"] = r.note;
    rows.push_back(row);
  }
  j["checks"] = rows;
  return j;
}

}  // namespace minkgeo
