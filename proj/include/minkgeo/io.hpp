#pragma once

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "minkgeo/body.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/functionals.hpp"
#include "minkgeo/spectrum.hpp"
#include "minkgeo/surface.hpp"

namespace minkgeo {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Spec loading

inline Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw SpecParseError("expected a numeric array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

inline ConvexBody load_body_spec(const Json& j) {
  try {
    const int dim = j.value("dimension", 3);
    const std::string family = j.at("family").get<std::string>();
    if (family == "ball") return ConvexBody::ball(dim, j.at("radius").get<double>());
    if (family == "ellipsoid") {
      const Json& qj = j.at("Q");
      Mat q(qj.size(), qj.size());
      for (std::size_t r = 0; r < qj.size(); ++r) {
        if (qj[r].size() != qj.size()) throw SpecParseError("ellipsoid Q must be square");
        for (std::size_t c = 0; c < qj.size(); ++c) q(static_cast<int>(r), static_cast<int>(c)) = qj[r][c].get<double>();
      }
      return ConvexBody::ellipsoid(q);
    }
    if (family == "perturbed_ball") {
      std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
      return ConvexBody::perturbed_ball(dim, j.at("radius").get<double>(),
                                        j.at("epsilon").get<double>(), std::move(coeffs));
    }
    throw SpecParseError("unknown body family '" + family + "'");
  } catch (const Json::exception& e) {
    throw SpecParseError(std::string("body spec: ") + e.what());
  }
}

inline SurfaceChart load_surface_spec(const Json& j, const ConvexBody& body) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int dim = j.value("dimension", body.dimension());
    if (kind == "round_sphere") {
      Vec center = j.contains("center") ? vec_from_json(j.at("center")) : Vec(Vec::Zero(dim));
      return make_round_sphere(j.at("radius").get<double>(), center);
    }
    if (kind == "minkowski_sphere") {
      Vec center = j.contains("center") ? vec_from_json(j.at("center")) : Vec(Vec::Zero(dim));
      return make_minkowski_sphere(body, j.at("lambda").get<double>(), center);
    }
    if (kind == "radial_graph") {
      return make_radial_graph(dim, j.value("base", 1.0), j.at("coeffs").get<std::vector<double>>());
    }
    if (kind == "torus") return make_torus(j.at("R").get<double>(), j.at("r").get<double>());
    throw SpecParseError("unknown surface kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw SpecParseError(std::string("surface spec: ") + e.what());
  }
}

struct FieldSpec {
  std::string kind;  // "random" | "translation_component" | "constant"
  std::uint64_t seed = 7;
  int degree = 3;
  Vec v;
  double c = 1.0;
};

struct VariationExperiment {
  std::string variation;  // "birkhoff_normal" | "scaling" | "translation"
  FieldSpec field;
  Vec translation;
  std::vector<int> orders{1};
};

inline VariationExperiment load_variation_spec(const Json& j) {
  try {
    VariationExperiment ex;
    ex.variation = j.at("variation").get<std::string>();
    if (ex.variation != "birkhoff_normal" && ex.variation != "scaling" &&
        ex.variation != "translation")
      throw SpecParseError("unknown variation kind '" + ex.variation + "'");
    if (j.contains("orders")) ex.orders = j.at("orders").get<std::vector<int>>();
    if (ex.variation == "translation") {
      ex.translation = vec_from_json(j.at("v"));
      return ex;
    }
    if (ex.variation == "birkhoff_normal") {
      const Json& fj = j.at("field");
      ex.field.kind = fj.at("kind").get<std::string>();
      if (ex.field.kind == "random") {
        ex.field.seed = fj.value("seed", 7);
        ex.field.degree = fj.value("degree", 3);
      } else if (ex.field.kind == "translation_component") {
        ex.field.v = vec_from_json(fj.at("v"));
      } else if (ex.field.kind == "constant") {
        ex.field.c = fj.value("c", 1.0);
      } else {
        throw SpecParseError("unknown field kind '" + ex.field.kind + "'");
      }
    }
    return ex;
  } catch (const Json::exception& e) {
    throw SpecParseError(std::string("variation spec: ") + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw SpecParseError("parse error in '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Report serialization

inline Json to_json(const BodyValidationReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["grid_nodes"] = r.grid_nodes;
  j["min_tangential_hessian_eig"] = r.min_tangential_hessian_eig;
  j["max_support_residual"] = r.max_support_residual;
  j["max_gauge_residual"] = r.max_gauge_residual;
  j["gauge_tolerance"] = r.gauge_tolerance;
  if (!r.pass) {
    j["worst_node"] = r.worst_node;
    j["worst_direction"] = std::vector<double>(r.worst_direction.data(),
                                               r.worst_direction.data() + r.worst_direction.size());
    j["failures"] = r.failures;
  }
  return j;
}

inline Json to_json(const FunctionalReport& r) {
  Json j;
  j["area_euclidean"] = r.area_euclidean;
  j["area_minkowski"] = r.area_minkowski;
  j["volume"] = r.volume;
  j["body_volume"] = r.body_volume;
  j["mixed_volume"] = r.mixed_volume;
  j["isoperimetric_ratio"] = r.isoperimetric_ratio;
  if (r.j_m) {
    j["h_m_ref"] = *r.h_m_ref;
    j["j_m"] = *r.j_m;
  }
  return j;
}

inline Json to_json(const SpectrumReport& r, int keep = -1) {
  Json j;
  const int k = keep < 0 ? static_cast<int>(r.eigenvalues.size())
                         : std::min<int>(keep, static_cast<int>(r.eigenvalues.size()));
  std::vector<double> evs(r.eigenvalues.data(), r.eigenvalues.data() + k);
  j["eigenvalues"] = evs;
  j["basis_size"] = r.basis_labels.size();
  j["basis"] = "degree-graded smooth modes: " +
               (r.basis_labels.empty() ? std::string() : r.basis_labels.front() + " .. " +
                                                             r.basis_labels.back());
  j["mass_condition"] = r.mass_condition;
  j["max_residual"] = r.max_residual;
  j["q_scale"] = r.q_scale;
  return j;
}

// ---------------------------------------------------------------------------
// CSV emission

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), row[c]);
      if (c) out << ",";
      out.write(buf, res.ptr - buf);
    }
    out << "\n";
  }
}

inline void write_frames_csv(const std::string& path, const SampledSurface& surf,
                             const FrameSet& frames) {
  std::vector<std::string> header{"node", "p1", "p2"};
  const int d = surf.dim;
  for (const char* base : {"x", "xi", "eta"})
    for (int c = 0; c < d; ++c) header.push_back(std::string(base) + std::to_string(c));
  for (int c = 0; c < d - 1; ++c) header.push_back("lambda" + std::to_string(c + 1));
  header.insert(header.end(), {"H_m", "K_m", "B_m_sq", "rho"});
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      const int id = surf.index(i, j);
      const PointFrame& f = frames.nodes[static_cast<std::size_t>(id)];
      std::vector<double> row{static_cast<double>(id), surf.p1[i], surf.p2[j]};
      for (int c = 0; c < d; ++c) row.push_back(f.position[c]);
      for (int c = 0; c < d; ++c) row.push_back(f.xi[c]);
      for (int c = 0; c < d; ++c) row.push_back(f.eta[c]);
      for (int c = 0; c < d - 1; ++c) row.push_back(f.lambdas[c]);
      row.insert(row.end(), {f.H_m, f.K_m, f.B_m_sq, f.rho});
      rows.push_back(std::move(row));
    }
  write_csv(path, header, rows);
}

/// Point cloud of the body boundary (the Wulff shape) for plotting.
inline void write_wulff_csv(const std::string& path, const ConvexBody& body, int resolution) {
  std::vector<std::string> header{"node"};
  const int d = body.dimension();
  for (int c = 0; c < d; ++c) header.push_back("nu" + std::to_string(c));
  for (int c = 0; c < d; ++c) header.push_back("x" + std::to_string(c));
  header.push_back("h");
  std::vector<Vec> dirs;
  if (d == 2) {
    for (int i = 0; i < 4 * resolution; ++i) {
      const double t = 2.0 * kPi * i / (4 * resolution);
      dirs.push_back(Vec(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
  } else {
    const Vec s = gauss_legendre(std::max(4, resolution / 2)).nodes;
    for (int j = 0; j < s.size(); ++j)
      for (int i = 0; i < resolution; ++i) {
        const double th = 2.0 * kPi * i / resolution;
        const double w = std::sqrt(1.0 - s[j] * s[j]);
        dirs.push_back(Vec(Eigen::Vector3d(w * std::cos(th), w * std::sin(th), s[j])));
      }
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Vec u = body.inverse_gauss(dirs[k]);
    std::vector<double> row{static_cast<double>(k)};
    for (int c = 0; c < d; ++c) row.push_back(dirs[k][c]);
    for (int c = 0; c < d; ++c) row.push_back(u[c]);
    row.push_back(body.support_value(dirs[k]));
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

inline void write_eigenfunctions_csv(const std::string& path, const SurfaceCalculus& calc,
                                     const FrameSet& frames, const SpectrumReport& rep,
                                     int count) {
  const SampledSurface& surf = calc.surface();
  count = std::min<int>(count, static_cast<int>(rep.eigenvalues.size()));
  std::vector<std::string> header{"node", "p1", "p2"};
  for (int c = 0; c < count; ++c) header.push_back("ef" + std::to_string(c));
  std::vector<Grid> efs;
  for (int c = 0; c < count; ++c) efs.push_back(spectrum_eigenfunction(calc, frames, rep, c));
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < surf.n2; ++j)
    for (int i = 0; i < surf.n1; ++i) {
      std::vector<double> row{static_cast<double>(surf.index(i, j)), surf.p1[i], surf.p2[j]};
      for (int c = 0; c < count; ++c) row.push_back(efs[static_cast<std::size_t>(c)](j, i));
      rows.push_back(std::move(row));
    }
  write_csv(path, header, rows);
}

}  // namespace minkgeo
