// Command-line front end: loads body/surface/variation specs, runs the
// geometric computations and emits JSON/CSV reports plus plot-data files.
//
// Exit codes: 0 success, 1 check failure, 2 input error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <minkgeo/minkgeo.hpp>

namespace fs = std::filesystem;
using namespace minkgeo;

namespace {

struct CommonArgs {
  std::string body_path;
  std::string surface_path;
  std::string variation_path;
  std::string res_text;
  std::string out_dir = ".";
  int basis = 25;
  std::uint64_t seed = 7;
  double tol_scale = 1.0;
};

Resolution parse_resolution(const std::string& text) {
  if (text.empty()) return {};
  Resolution r;
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      r.n1 = std::stoi(text);
      r.n2 = r.n1 / 2;
    } else {
      r.n1 = std::stoi(text.substr(0, comma));
      r.n2 = std::stoi(text.substr(comma + 1));
    }
  } catch (const std::exception&) {
    throw SpecParseError("cannot parse resolution '" + text + "' (expected N or N,M)");
  }
  if (r.n1 < 8 || r.n1 > 1024 || r.n2 < 1 || r.n2 > 1024)
    throw SpecParseError("resolution out of range [8, 1024]");
  return r;
}

void write_report(const fs::path& dir, const std::string& name, const Json& j) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw Error("cannot write report to " + (dir / name).string());
  out << j.dump(2) << "\n";
}

struct Loaded {
  ConvexBody body;
  SurfaceChart chart;
  SampledSurface surf;
};

Loaded load_pair(const CommonArgs& args) {
  if (args.body_path.empty() || args.surface_path.empty())
    throw SpecParseError("this command needs --body and --surface");
  ConvexBody body = load_body_spec(load_json_file(args.body_path));
  SurfaceChart chart = load_surface_spec(load_json_file(args.surface_path), body);
  Resolution res = parse_resolution(args.res_text);
  if (res.n1 == 0) res = default_resolution(chart.dimension, chart.topology);
  return Loaded{std::move(body), std::move(chart), sample(chart, res)};
}

int cmd_body_info(const CommonArgs& args) {
  if (args.body_path.empty()) throw SpecParseError("body-info needs --body");
  const ConvexBody body = load_body_spec(load_json_file(args.body_path));
  Resolution res = parse_resolution(args.res_text);
  const int grid = res.n1 ? res.n1 : 32;
  const BodyValidationReport rep = body.validate(grid);
  Json j;
  j["family"] = body.family_name();
  j["dimension"] = body.dimension();
  j["validation"] = to_json(rep);
  write_report(args.out_dir, "report.json", j);
  write_wulff_csv((fs::path(args.out_dir) / "wulff.csv").string(), body, grid);
  std::cout << "body: " << body.family_name() << " (n=" << body.dimension() << ")  validation "
            << (rep.pass ? "pass" : "FAIL")
            << "  min tangential Hessian eig = " << rep.min_tangential_hessian_eig << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_surface_report(const CommonArgs& args) {
  Loaded l = load_pair(args);
  const FrameSet frames = compute_frames(l.body, l.surf);
  const double am = integrate_dw(l.surf, frames, Grid::Ones(l.surf.n2, l.surf.n1));
  const double h_ref = integrate_dw(l.surf, frames, frames.field(l.surf, &PointFrame::H_m)) / am;
  const FunctionalReport fun = functional_report(l.body, l.surf, frames, h_ref);
  const UmbilicityReport umb = umbilicity_report(frames);

  double lam_min = std::numeric_limits<double>::infinity(), lam_max = -lam_min;
  for (const auto& f : frames.nodes) {
    lam_min = std::min(lam_min, f.lambdas.minCoeff());
    lam_max = std::max(lam_max, f.lambdas.maxCoeff());
  }
  Json j;
  j["surface"] = l.chart.describe();
  j["resolution"] = {l.surf.n1, l.surf.n2};
  j["lambda_min"] = lam_min;
  j["lambda_max"] = lam_max;
  j["h_m_mean"] = h_ref;
  j["h_m_spread"] = frames.h_m_spread();
  j["umbilic_fraction"] = umb.umbilic_fraction;
  j["max_lambda_spread"] = umb.max_spread;
  j["functionals"] = to_json(fun);
  write_report(args.out_dir, "report.json", j);
  write_frames_csv((fs::path(args.out_dir) / "frames.csv").string(), l.surf, frames);
  std::cout << l.chart.describe() << ": H_m in [" << frames.h_m_min << ", " << frames.h_m_max
            << "], A_m = " << fun.area_minkowski << ", iso ratio = " << fun.isoperimetric_ratio
            << "\n";
  return 0;
}

int cmd_functionals(const CommonArgs& args) {
  Loaded l = load_pair(args);
  const FrameSet frames = compute_frames(l.body, l.surf);
  const double am = integrate_dw(l.surf, frames, Grid::Ones(l.surf.n2, l.surf.n1));
  const double h_ref = integrate_dw(l.surf, frames, frames.field(l.surf, &PointFrame::H_m)) / am;
  const FunctionalReport fun = functional_report(l.body, l.surf, frames, h_ref);
  Json j = to_json(fun);
  j["surface"] = l.chart.describe();
  write_report(args.out_dir, "report.json", j);
  write_csv((fs::path(args.out_dir) / "functionals.csv").string(),
            {"area_euclidean", "area_minkowski", "volume", "body_volume", "mixed_volume",
             "isoperimetric_ratio", "j_m"},
            {{fun.area_euclidean, fun.area_minkowski, fun.volume, fun.body_volume,
              fun.mixed_volume, fun.isoperimetric_ratio, fun.j_m.value_or(0.0)}});
  std::cout << "A_m = " << fun.area_minkowski << "  V = " << fun.volume
            << "  V(Omega,B) = " << fun.mixed_volume << "  ratio = " << fun.isoperimetric_ratio
            << "\n";
  return 0;
}

int cmd_variation_check(const CommonArgs& args) {
  if (args.variation_path.empty()) throw SpecParseError("variation-check needs --variation");
  Loaded l = load_pair(args);
  const VariationExperiment ex = load_variation_spec(load_json_file(args.variation_path));
  const SurfaceCalculus calc(l.surf);
  const FrameSet frames = compute_frames(l.body, l.surf);
  const double am = integrate_dw(l.surf, frames, Grid::Ones(l.surf.n2, l.surf.n1));
  const double h_ref = integrate_dw(l.surf, frames, frames.field(l.surf, &PointFrame::H_m)) / am;
  const bool cmc = frames.h_m_spread() <= 1e-6;

  Grid f;
  VariationSpec spec;
  if (ex.variation == "birkhoff_normal") {
    if (ex.field.kind == "random")
      f = random_surface_field(l.surf, ex.field.seed ? ex.field.seed : args.seed, ex.field.degree);
    else if (ex.field.kind == "translation_component")
      f = translation_field(l.surf, frames, ex.field.v);
    else
      f = Grid::Constant(l.surf.n2, l.surf.n1, ex.field.c);
    spec.kind = VariationKind::birkhoff_normal;
    spec.displacement = birkhoff_normal_displacement(calc, frames, f);
  } else if (ex.variation == "scaling") {
    spec.kind = VariationKind::scaling;
    spec.displacement = scaling_displacement(l.surf);
  } else {
    spec.kind = VariationKind::translation;
    spec.displacement = translation_displacement(l.surf, ex.translation);
  }

  Json rows = Json::array();
  bool all_pass = true;
  for (int order : ex.orders) {
    Json row;
    row["order"] = order;
    if (order == 1) {
      const FdDerivative fd =
          fd_functional_derivative(l.body, l.surf, spec, FunctionalKind::area_minkowski, 1);
      const double analytic = first_variation_general(frames, l.surf, spec.displacement.w);
      const double err = rel_diff(fd.value, analytic);
      row["fd_dAm"] = fd.value;
      row["analytic_dAm"] = analytic;
      row["rel_diff"] = err;
      row["fd_error_estimate"] = fd.error_estimate;
      const bool ok = err <= 1e-6 * args.tol_scale;
      row["status"] = ok ? "pass" : "FAIL";
      all_pass = all_pass && ok;
    } else if (order == 2) {
      if (spec.kind != VariationKind::birkhoff_normal || !cmc) {
        row["status"] = "not-applicable";
        row["note"] = "second order needs a Birkhoff-normal variation of a CMC surface";
      } else {
        const SecondVariationValue qg = second_variation_gradient_form(calc, frames, f);
        const SecondVariationValue qd = second_variation_divergence_form(calc, frames, f);
        Grid fz = f.array() - dw_mean(l.surf, frames, f);
        VariationSpec zspec;
        zspec.displacement = birkhoff_normal_displacement(calc, frames, fz);
        const FdDerivative fd =
            fd_functional_derivative(l.body, l.surf, zspec, FunctionalKind::j_m, 2, h_ref);
        const double m =
            std::max({std::abs(qg.value), std::abs(qd.value), std::abs(fd.value), 1e-300});
        const double err = std::max({std::abs(qg.value - qd.value), std::abs(qg.value - fd.value),
                                     std::abs(qd.value - fd.value)}) / m;
        row["gradient_form"] = qg.value;
        row["divergence_form"] = qd.value;
        row["fd_ddJm"] = fd.value;
        row["rel_spread"] = err;
        const bool ok = err <= 1e-5 * args.tol_scale;
        row["status"] = ok ? "pass" : "FAIL";
        all_pass = all_pass && ok;
      }
    } else {
      throw SpecParseError("variation orders must be 1 or 2");
    }
    rows.push_back(row);
  }
  Json j;
  j["variation"] = ex.variation;
  j["surface"] = l.chart.describe();
  j["results"] = rows;
  write_report(args.out_dir, "report.json", j);
  std::cout << "variation-check: " << (all_pass ? "pass" : "FAIL") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_identity_suite(const CommonArgs& args) {
  Loaded l = load_pair(args);
  SuiteOptions opts;
  opts.seed = args.seed;
  opts.tol_scale = args.tol_scale;
  const SuiteReport rep =
      run_identity_suite(l.body, l.chart, Resolution{l.surf.n1, l.surf.n2}, opts);
  Json j;
  j["body"] = l.body.family_name();
  j["surface"] = l.chart.describe();
  j["resolution"] = {l.surf.n1, l.surf.n2};
  j["suite"] = to_json(rep);
  write_report(args.out_dir, "report.json", j);
  std::cout << std::left;
  for (const auto& row : rep.rows) {
    std::cout << "  " << std::setw(34) << row.name << std::setw(16) << to_string(row.status);
    if (row.status != CheckStatus::not_applicable)
      std::cout << "residual " << std::setprecision(3) << std::scientific << row.residual
                << "  (tol " << row.tolerance << ")" << std::defaultfloat;
    else if (!row.note.empty())
      std::cout << row.note;
    std::cout << "\n";
  }
  std::cout << "identity-suite: " << (rep.pass ? "pass" : "FAIL") << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_stability(const CommonArgs& args) {
  Loaded l = load_pair(args);
  const SurfaceCalculus calc(l.surf);
  const FrameSet frames = compute_frames(l.body, l.surf);
  const SpectrumReport rep = stability_spectrum(calc, frames, args.basis);
  Json j = to_json(rep);
  j["surface"] = l.chart.describe();
  const double tol = 1e-5 * rep.q_scale;
  int near_zero = 0;
  for (int i = 0; i < rep.eigenvalues.size(); ++i)
    if (std::abs(rep.eigenvalues[i]) <= tol) ++near_zero;
  j["near_zero_count"] = near_zero;
  j["near_zero_tolerance"] = tol;
  write_report(args.out_dir, "spectrum.json", j);
  write_eigenfunctions_csv((fs::path(args.out_dir) / "eigenfunctions.csv").string(), calc, frames,
                           rep, std::min<int>(8, static_cast<int>(rep.eigenvalues.size())));
  std::cout << "lowest eigenvalues:";
  for (int i = 0; i < std::min<int>(8, static_cast<int>(rep.eigenvalues.size())); ++i)
    std::cout << " " << rep.eigenvalues[i];
  std::cout << "\nnear-zero: " << near_zero << " (tol " << tol << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic (Minkowski) surface geometry toolkit"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* cmd, bool needs_surface) {
    cmd->add_option("--body", args.body_path, "body spec (JSON)");
    if (needs_surface) cmd->add_option("--surface", args.surface_path, "surface spec (JSON)");
    cmd->add_option("--res", args.res_text, "resolution N or N,M");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "seed for generated test fields");
    cmd->add_option("--tol-scale", args.tol_scale, "scale factor on all tolerances");
  };

  auto* c_body = app.add_subcommand("body-info", "validate a body and dump its Wulff shape");
  add_common(c_body, false);
  auto* c_surf = app.add_subcommand("surface-report", "frames summary and functionals");
  add_common(c_surf, true);
  auto* c_fun = app.add_subcommand("functionals", "global integral quantities");
  add_common(c_fun, true);
  auto* c_var = app.add_subcommand("variation-check", "FD vs analytic variation formulas");
  add_common(c_var, true);
  c_var->add_option("--variation", args.variation_path, "variation experiment spec (JSON)");
  auto* c_suite = app.add_subcommand("identity-suite", "run every identity check");
  add_common(c_suite, true);
  auto* c_stab = app.add_subcommand("stability", "second-variation spectrum");
  add_common(c_stab, true);
  c_stab->add_option("--basis", args.basis, "basis size for the spectral problem");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_body->parsed()) return cmd_body_info(args);
    if (c_surf->parsed()) return cmd_surface_report(args);
    if (c_fun->parsed()) return cmd_functionals(args);
    if (c_var->parsed()) return cmd_variation_check(args);
    if (c_suite->parsed()) return cmd_identity_suite(args);
    if (c_stab->parsed()) return cmd_stability(args);
  } catch (const SpecParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgumentError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
