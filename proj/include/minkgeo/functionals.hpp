#pragma once

#include <optional>

#include "minkgeo/fields.hpp"
#include "minkgeo/frames.hpp"
#include "minkgeo/surface.hpp"

namespace minkgeo {

struct FunctionalReport {
  double area_euclidean = 0.0;
  double area_minkowski = 0.0;  // A_m = integral of <eta, xi> dS
  double volume = 0.0;          // V = (1/n) integral of <x, xi> dS
  double body_volume = 0.0;
  double mixed_volume = 0.0;    // A_m / n
  double isoperimetric_ratio = 0.0;
  std::optional<double> j_m;    // A_m - (n-1) H_ref V
  std::optional<double> h_m_ref;
};

/// Volume enclosed by the boundary of the body, computed on the body's own
/// boundary chart (the divergence-theorem volume of the lambda = 1 sphere).
inline double body_volume(const ConvexBody& body, Resolution res = {}) {
  const SurfaceChart chart = make_minkowski_sphere(body, 1.0, Vec::Zero(body.dimension()));
  const SampledSurface s = sample(chart, res);
  Vec vals(s.nodes());
  for (int id = 0; id < s.nodes(); ++id) vals[id] = s.x[id].dot(s.xi[id]);
  return s.integrate(vals) / s.dim;
}

inline FunctionalReport functional_report(const ConvexBody& body, const SampledSurface& surf,
                                          const FrameSet& frames,
                                          std::optional<double> h_m_ref = std::nullopt) {
  FunctionalReport rep;
  const int n = surf.dim;
  Vec ones = Vec::Ones(surf.nodes());
  rep.area_euclidean = surf.integrate(ones);

  Vec hvals(surf.nodes()), xvals(surf.nodes());
  for (int id = 0; id < surf.nodes(); ++id) {
    hvals[id] = frames.nodes[static_cast<std::size_t>(id)].support_at_normal;
    xvals[id] = surf.x[id].dot(surf.xi[id]);
  }
  rep.area_minkowski = surf.integrate(hvals);
  rep.volume = surf.integrate(xvals) / n;
  rep.mixed_volume = rep.area_minkowski / n;
  rep.body_volume = body_volume(body, Resolution{surf.n1, surf.topo == Topology::circle ? 1 : surf.n2});
  rep.isoperimetric_ratio =
      rep.mixed_volume /
      (std::pow(rep.volume, (n - 1.0) / n) * std::pow(rep.body_volume, 1.0 / n));
  if (h_m_ref) {
    rep.h_m_ref = h_m_ref;
    rep.j_m = rep.area_minkowski - (n - 1) * (*h_m_ref) * rep.volume;
  }
  return rep;
}

struct IsoperimetricRow {
  std::string surface;
  double ratio = 0.0;
  bool pass = false;          // ratio >= 1 - 1e-8
  bool equality = false;      // |ratio - 1| <= 1e-8
  bool is_minkowski_sphere = false;
};

struct IsoperimetricTable {
  std::vector<IsoperimetricRow> rows;
  bool all_pass = true;
  /// Flagged equality on a surface that is not homothetic to the body would
  /// contradict the equality case of the mixed volume inequality.
  bool equality_cases_consistent = true;
};

/// Mixed-volume (Minkowski isoperimetric) inequality check over embedded
/// surfaces: V(Omega, B) >= vol(Omega)^{(n-1)/n} vol(B)^{1/n}.
inline IsoperimetricTable isoperimetric_check(
    const ConvexBody& body, const std::vector<const SurfaceChart*>& charts, Resolution res = {}) {
  IsoperimetricTable table;
  for (const SurfaceChart* chart : charts) {
    if (!chart->embedded)
      throw InvalidArgumentError("isoperimetric_check: non-embedded chart kind rejected");
    Resolution r = res.n1 ? res : default_resolution(chart->dimension, chart->topology);
    const SampledSurface s = sample(*chart, r);
    const FrameSet fr = compute_frames(body, s);
    const FunctionalReport rep = functional_report(body, s, fr);
    IsoperimetricRow row;
    row.surface = chart->describe();
    row.ratio = rep.isoperimetric_ratio;
    row.pass = row.ratio >= 1.0 - 1e-8;
    row.equality = std::abs(row.ratio - 1.0) <= 1e-8;
    row.is_minkowski_sphere =
        chart->kind == SurfaceKind::minkowski_sphere ||
        (chart->kind == SurfaceKind::round_sphere && body.family_name() == "ball");
    if (row.equality && !row.is_minkowski_sphere) table.equality_cases_consistent = false;
    table.all_pass = table.all_pass && row.pass;
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace minkgeo
