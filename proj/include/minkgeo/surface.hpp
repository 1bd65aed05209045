#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <tuple>

#include "minkgeo/body.hpp"
#include "minkgeo/common.hpp"
#include "minkgeo/spectral.hpp"

namespace minkgeo {

enum class Topology { circle, sphere, torus };
enum class SurfaceKind { round_sphere, minkowski_sphere, radial_graph, torus };

inline const char* to_string(Topology t) {
  switch (t) {
    case Topology::circle: return "circle";
    case Topology::sphere: return "sphere";
    default: return "torus";
  }
}

inline const char* to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::round_sphere: return "round_sphere";
    case SurfaceKind::minkowski_sphere: return "minkowski_sphere";
    case SurfaceKind::radial_graph: return "radial_graph";
    default: return "torus";
  }
}

/// Position and chart derivatives at one parameter point.
/// Parameters: circle (t, unused); sphere-type (theta, s = cos phi);
/// torus (theta, psi). All periodic parameters live on [0, 2*pi).
struct ChartJet {
  Vec x;
  std::array<Vec, 2> d1;   // first partials
  std::array<Vec, 3> d2;   // second partials: (11), (12), (22)
};

/// Closed parametric hypersurface. Built-in charts are oriented so the
/// computed normal is outward for embedded surfaces.
class SurfaceChart {
 public:
  using Evaluator = std::function<ChartJet(double, double)>;

  SurfaceChart(int dim, Topology topo, SurfaceKind kind, bool embedded, Evaluator eval,
               std::string description)
      : dimension(dim),
        topology(topo),
        kind(kind),
        embedded(embedded),
        eval_(std::move(eval)),
        description_(std::move(description)) {}

  int dimension;
  Topology topology;
  SurfaceKind kind;
  bool embedded;

  ChartJet eval(double a, double b = 0.0) const { return eval_(a, b); }
  const std::string& describe() const { return description_; }

 private:
  Evaluator eval_;
  std::string description_;
};

namespace detail {

/// Unit-sphere parameterization m(theta, s) with derivatives, s = cos(phi).
struct SphereParam {
  Vec m, m_t, m_s, m_tt, m_ts, m_ss;
  SphereParam(double th, double s) {
    const double w = std::sqrt(1.0 - s * s);
    const double c = std::cos(th), sn = std::sin(th);
    m = Vec(3);
    m << w * c, w * sn, s;
    m_t = Vec(3);
    m_t << -w * sn, w * c, 0.0;
    m_s = Vec(3);
    m_s << -(s / w) * c, -(s / w) * sn, 1.0;
    m_tt = Vec(3);
    m_tt << -w * c, -w * sn, 0.0;
    m_ts = Vec(3);
    m_ts << (s / w) * sn, -(s / w) * c, 0.0;
    const double w3 = w * w * w;
    m_ss = Vec(3);
    m_ss << -c / w3, -sn / w3, 0.0;
  }
};

inline Vec circle_dir(double t, int order) {
  Vec v(2);
  switch (order % 4) {
    case 0: v << std::cos(t), std::sin(t); break;
    case 1: v << -std::sin(t), std::cos(t); break;
    case 2: v << -std::cos(t), -std::sin(t); break;
    default: v << std::sin(t), -std::cos(t); break;
  }
  return v;
}

inline Vec apply_third(const std::vector<Mat>& t, const Vec& a, const Vec& b) {
  const int d = static_cast<int>(a.size());
  Vec out = Vec::Zero(d);
  for (int k = 0; k < d; ++k) out += b[k] * (t[k] * a);
  return out;
}

}  // namespace detail

inline SurfaceChart make_round_sphere(double radius, const Vec& center) {
  if (radius <= 0.0) throw InvalidArgumentError("make_round_sphere: radius must be positive");
  const int dim = static_cast<int>(center.size());
  if (dim != 2 && dim != 3) throw InvalidArgumentError("make_round_sphere: center must be 2d or 3d");
  std::ostringstream desc;
  desc << "round_sphere r=" << radius;
  if (dim == 2) {
    Vec c = center;
    double r = radius;
    return SurfaceChart(2, Topology::circle, SurfaceKind::round_sphere, true,
                        [c, r](double t, double) {
                          ChartJet j;
                          j.x = c + r * detail::circle_dir(t, 0);
                          j.d1[0] = r * detail::circle_dir(t, 1);
                          j.d2[0] = r * detail::circle_dir(t, 2);
                          return j;
                        },
                        desc.str());
  }
  Vec c = center;
  double r = radius;
  return SurfaceChart(3, Topology::sphere, SurfaceKind::round_sphere, true,
                      [c, r](double th, double s) {
                        detail::SphereParam p(th, s);
                        ChartJet j;
                        j.x = c + r * p.m;
                        j.d1 = {r * p.m_t, r * p.m_s};
                        j.d2 = {r * p.m_tt, r * p.m_ts, r * p.m_ss};
                        return j;
                      },
                      desc.str());
}

/// Chart nu -> center + lambda * u(nu): the boundary of a scaled translate of
/// the body. Its Birkhoff-Gauss map is eta = u(xi) with d_eta = (1/lambda) id.
inline SurfaceChart make_minkowski_sphere(const ConvexBody& body, double lambda,
                                          const Vec& center) {
  if (lambda <= 0.0) throw InvalidArgumentError("make_minkowski_sphere: lambda must be positive");
  if (center.size() != body.dimension())
    throw InvalidArgumentError("make_minkowski_sphere: center dimension mismatch");
  std::ostringstream desc;
  desc << "minkowski_sphere lambda=" << lambda << " body=" << body.family_name();
  const int dim = body.dimension();
  ConvexBody b = body;
  Vec c = center;
  if (dim == 2) {
    return SurfaceChart(2, Topology::circle, SurfaceKind::minkowski_sphere, true,
                        [b, c, lambda](double t, double) {
                          const Vec nu = detail::circle_dir(t, 0);
                          const Vec nu1 = detail::circle_dir(t, 1);
                          const Vec nu2 = detail::circle_dir(t, 2);
                          const Mat du = b.support_hessian(nu);
                          const auto d3 = b.support_third(nu);
                          ChartJet j;
                          j.x = c + lambda * b.support_gradient(nu);
                          j.d1[0] = lambda * du * nu1;
                          j.d2[0] = lambda * (detail::apply_third(d3, nu1, nu1) + du * nu2);
                          return j;
                        },
                        desc.str());
  }
  return SurfaceChart(3, Topology::sphere, SurfaceKind::minkowski_sphere, true,
                      [b, c, lambda](double th, double s) {
                        detail::SphereParam p(th, s);
                        const Mat du = b.support_hessian(p.m);
                        const auto d3 = b.support_third(p.m);
                        ChartJet j;
                        j.x = c + lambda * b.support_gradient(p.m);
                        j.d1 = {lambda * du * p.m_t, lambda * du * p.m_s};
                        j.d2 = {lambda * (detail::apply_third(d3, p.m_t, p.m_t) + du * p.m_tt),
                                lambda * (detail::apply_third(d3, p.m_t, p.m_s) + du * p.m_ts),
                                lambda * (detail::apply_third(d3, p.m_s, p.m_s) + du * p.m_ss)};
                        return j;
                      },
                      desc.str());
}

/// Star-shaped graph nu -> r(nu) nu with r = base + sum coeffs[k] * Y_k over
/// the fixed harmonic family. Positivity of r is checked at sampling time.
inline SurfaceChart make_radial_graph(int dim, double base, const std::vector<double>& coeffs) {
  if (dim != 2 && dim != 3) throw InvalidArgumentError("make_radial_graph: dim must be 2 or 3");
  if (coeffs.size() > harmonic_basis(dim).size())
    throw InvalidArgumentError("make_radial_graph: too many coefficients");
  std::ostringstream desc;
  desc << "radial_graph base=" << base;
  auto radial = [dim, base, coeffs](const Vec& m) {
    double r = base;
    Vec g = Vec::Zero(dim);
    Mat h = Mat::Zero(dim, dim);
    const auto& basis = harmonic_basis(dim);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs[k] == 0.0) continue;
      r += coeffs[k] * basis[k].value(m);
      g += coeffs[k] * basis[k].gradient(m);
      h += coeffs[k] * basis[k].hessian(m);
    }
    return std::make_tuple(r, g, h);
  };
  {
    // Positivity of the radius field on a validation grid.
    double rmin = std::numeric_limits<double>::infinity();
    if (dim == 2) {
      for (int i = 0; i < 128; ++i)
        rmin = std::min(rmin, std::get<0>(radial(detail::circle_dir(2.0 * kPi * i / 128, 0))));
    } else {
      const Vec s = gauss_legendre(16).nodes;
      for (int j = 0; j < s.size(); ++j)
        for (int i = 0; i < 32; ++i)
          rmin = std::min(rmin, std::get<0>(radial(detail::SphereParam(2.0 * kPi * i / 32, s[j]).m)));
    }
    if (!(rmin > 0.0)) {
      std::ostringstream os;
      os << "make_radial_graph: radius field is not positive (min " << rmin
         << " on the validation grid)";
      throw InvalidArgumentError(os.str());
    }
  }
  if (dim == 2) {
    return SurfaceChart(2, Topology::circle, SurfaceKind::radial_graph, true,
                        [radial](double t, double) {
                          const Vec m = detail::circle_dir(t, 0);
                          const Vec m1 = detail::circle_dir(t, 1);
                          const Vec m2 = detail::circle_dir(t, 2);
                          auto [r, g, h] = radial(m);
                          const double r1 = g.dot(m1);
                          const double r2 = m1.dot(h * m1) + g.dot(m2);
                          ChartJet j;
                          j.x = r * m;
                          j.d1[0] = r1 * m + r * m1;
                          j.d2[0] = r2 * m + 2.0 * r1 * m1 + r * m2;
                          return j;
                        },
                        desc.str());
  }
  return SurfaceChart(3, Topology::sphere, SurfaceKind::radial_graph, true,
                      [radial](double th, double s) {
                        detail::SphereParam p(th, s);
                        auto [r, g, h] = radial(p.m);
                        const double rt = g.dot(p.m_t), rs = g.dot(p.m_s);
                        auto second = [&](const Vec& a, const Vec& b, const Vec& mab) {
                          return a.dot(h * b) + g.dot(mab);
                        };
                        ChartJet j;
                        j.x = r * p.m;
                        j.d1 = {rt * p.m + r * p.m_t, rs * p.m + r * p.m_s};
                        j.d2 = {second(p.m_t, p.m_t, p.m_tt) * p.m + 2.0 * rt * p.m_t + r * p.m_tt,
                                second(p.m_t, p.m_s, p.m_ts) * p.m + rt * p.m_s + rs * p.m_t +
                                    r * p.m_ts,
                                second(p.m_s, p.m_s, p.m_ss) * p.m + 2.0 * rs * p.m_s + r * p.m_ss};
                        return j;
                      },
                      desc.str());
}

/// Standard torus of revolution, R > r > 0 (n = 3 only).
inline SurfaceChart make_torus(double big_r, double small_r) {
  if (!(big_r > small_r && small_r > 0.0))
    throw InvalidArgumentError("make_torus: need R > r > 0 (self-intersection otherwise)");
  std::ostringstream desc;
  desc << "torus R=" << big_r << " r=" << small_r;
  return SurfaceChart(3, Topology::torus, SurfaceKind::torus, true,
                      [big_r, small_r](double th, double ps) {
                        const double ct = std::cos(th), st = std::sin(th);
                        const double cp = std::cos(ps), sp = std::sin(ps);
                        const double w = big_r + small_r * cp;
                        ChartJet j;
                        j.x = Vec(3);
                        j.x << w * ct, w * st, small_r * sp;
                        j.d1[0] = Vec(3);
                        j.d1[0] << -w * st, w * ct, 0.0;
                        j.d1[1] = Vec(3);
                        j.d1[1] << -small_r * sp * ct, -small_r * sp * st, small_r * cp;
                        j.d2[0] = Vec(3);
                        j.d2[0] << -w * ct, -w * st, 0.0;
                        j.d2[1] = Vec(3);
                        j.d2[1] << small_r * sp * st, -small_r * sp * ct, 0.0;
                        j.d2[2] = Vec(3);
                        j.d2[2] << -small_r * cp * ct, -small_r * cp * st, -small_r * sp;
                        return j;
                      },
                      desc.str());
}

struct Resolution {
  int n1 = 0;
  int n2 = 0;
};

inline Resolution default_resolution(int dim, Topology topo) {
  if (dim == 2) return {128, 1};
  (void)topo;
  return {64, 32};
}

/// Tensor-grid sampling of a chart with positions, two derivative orders,
/// quadrature weights, metric, area density and the (analytic) normal field
/// with its parameter derivatives.
struct SampledSurface {
  int dim = 3;
  Topology topo = Topology::sphere;
  SurfaceKind kind = SurfaceKind::round_sphere;
  bool embedded = true;
  int n1 = 0, n2 = 0;

  Vec p1, p2;  // parameter values
  Vec w1, w2;  // 1-d quadrature weights

  // Per node, index = j * n1 + i (row j along axis 2).
  std::vector<Vec> x, x1, x2, x11, x12, x22;
  std::vector<Vec> xi, dxi1, dxi2;
  std::vector<Mat> metric;      // Gram of raw chart partials, (dim-1)^2
  std::vector<Mat> metric_inv;
  Vec area_density;             // |x1 ^ x2| resp. |x'|

  int nodes() const { return n1 * n2; }
  int index(int i, int j) const { return j * n1 + i; }

  /// Deterministic quadrature of per-node values against dS.
  double integrate(const Vec& node_values) const {
    std::vector<double> buf(static_cast<std::size_t>(nodes()));
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const int id = index(i, j);
        buf[static_cast<std::size_t>(id)] = w1[i] * w2[j] * area_density[id] * node_values[id];
      }
    return pairwise_sum(buf);
  }

  double integrate(const Grid& grid_values) const {
    Vec v(nodes());
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) v[index(i, j)] = grid_values(j, i);
    return integrate(v);
  }

  Grid to_grid(const Vec& node_values) const {
    Grid g(n2, n1);
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) g(j, i) = node_values[index(i, j)];
    return g;
  }
};

namespace detail {

inline void normal_and_derivatives(SampledSurface& s, int id) {
  if (s.dim == 3) {
    const Eigen::Vector3d a = s.x1[id], b = s.x2[id];
    const Eigen::Vector3d cr = a.cross(b);
    const double n = cr.norm();
    s.area_density[id] = n;
    const Vec xi = cr / n;
    s.xi[id] = xi;
    const Eigen::Vector3d c1 =
        Eigen::Vector3d(s.x11[id]).cross(b) + a.cross(Eigen::Vector3d(s.x12[id]));
    const Eigen::Vector3d c2 =
        Eigen::Vector3d(s.x12[id]).cross(b) + a.cross(Eigen::Vector3d(s.x22[id]));
    s.dxi1[id] = (Vec(c1) - xi * xi.dot(Vec(c1))) / n;
    s.dxi2[id] = (Vec(c2) - xi * xi.dot(Vec(c2))) / n;
  } else {
    const Vec t = s.x1[id];
    const double n = t.norm();
    s.area_density[id] = n;
    Vec rot(2), rot2(2);
    rot << t[1], -t[0];
    s.xi[id] = rot / n;
    rot2 << s.x11[id][1], -s.x11[id][0];
    s.dxi1[id] = (rot2 - s.xi[id] * s.xi[id].dot(rot2)) / n;
    s.dxi2[id] = Vec::Zero(2);
  }
}

}  // namespace detail

inline SampledSurface sample(const SurfaceChart& chart, Resolution res = {}) {
  if (res.n1 == 0) res = default_resolution(chart.dimension, chart.topology);
  SampledSurface s;
  s.dim = chart.dimension;
  s.topo = chart.topology;
  s.kind = chart.kind;
  s.embedded = chart.embedded;
  s.n1 = res.n1;
  s.n2 = (chart.topology == Topology::circle) ? 1 : res.n2;
  if (s.n1 < 8 || (s.topo != Topology::circle && s.n2 < 8))
    throw InvalidArgumentError("sample: resolution must be at least 8 per axis");

  const Quadrature1D q1 = periodic_trapezoid(s.n1);
  s.p1 = q1.nodes;
  s.w1 = q1.weights;
  if (s.topo == Topology::sphere) {
    const Quadrature1D q2 = gauss_legendre(s.n2);
    s.p2 = q2.nodes;
    s.w2 = q2.weights;
  } else if (s.topo == Topology::torus) {
    const Quadrature1D q2 = periodic_trapezoid(s.n2);
    s.p2 = q2.nodes;
    s.w2 = q2.weights;
  } else {
    s.p2 = Vec::Zero(1);
    s.w2 = Vec::Ones(1);
  }

  const int m = s.nodes();
  s.x.resize(m);
  s.x1.resize(m);
  s.x2.resize(m);
  s.x11.resize(m);
  s.x12.resize(m);
  s.x22.resize(m);
  s.xi.resize(m);
  s.dxi1.resize(m);
  s.dxi2.resize(m);
  s.metric.resize(m);
  s.metric_inv.resize(m);
  s.area_density = Vec::Zero(m);

  const int tdim = s.dim - 1;
  for (int j = 0; j < s.n2; ++j)
    for (int i = 0; i < s.n1; ++i) {
      const int id = s.index(i, j);
      ChartJet jet = chart.eval(s.p1[i], s.p2[j]);
      s.x[id] = jet.x;
      s.x1[id] = jet.d1[0];
      s.x11[id] = jet.d2[0];
      if (tdim == 2) {
        s.x2[id] = jet.d1[1];
        s.x12[id] = jet.d2[1];
        s.x22[id] = jet.d2[2];
      } else {
        s.x2[id] = Vec::Zero(s.dim);
        s.x12[id] = Vec::Zero(s.dim);
        s.x22[id] = Vec::Zero(s.dim);
      }

      Mat jac(s.dim, tdim);
      jac.col(0) = s.x1[id];
      if (tdim == 2) jac.col(1) = s.x2[id];
      Eigen::JacobiSVD<Mat> svd(jac);
      const double smin = svd.singularValues().minCoeff();
      const double smax = svd.singularValues().maxCoeff();
      if (!(smin > 1e-8 * (1.0 + smax))) {
        std::ostringstream os;
        os << "chart is degenerate at node " << id << " (min singular value " << smin << ")";
        throw DegenerateChartError(os.str(), id);
      }

      Mat g = jac.transpose() * jac;
      s.metric[id] = g;
      s.metric_inv[id] = g.inverse();
      detail::normal_and_derivatives(s, id);
    }
  return s;
}

/// Differential operators on grid fields for one sampled surface.
///
/// Periodic axes use Fourier differentiation. The Gauss-Legendre axis of
/// sphere-type grids uses polynomial differentiation applied per azimuthal
/// Fourier mode, with odd modes divided by sqrt(1-s^2) first: smooth
/// functions on the sphere have mode profiles (1-s^2)^{k/2} * smooth, so the
/// divided profiles are polynomial-like and the endpoint singularities of
/// half-integer powers never enter the differentiation.
class SurfaceCalculus {
 public:
  explicit SurfaceCalculus(const SampledSurface& surf)
      : surf_(&surf), d_theta_(fourier_diff_matrix(surf.n1)) {
    if (surf.topo == Topology::sphere) {
      dft_ = std::make_unique<DftPair>(surf.n1);
      d_s_ = lagrange_diff_matrix(surf.p2);
      d_s_c_ = d_s_.cast<std::complex<double>>();
      const Vec w = (1.0 - surf.p2.array().square()).sqrt().matrix();
      w_c_ = w.cast<std::complex<double>>();
      s_over_w_c_ = surf.p2.cwiseQuotient(w).cast<std::complex<double>>();
    } else if (surf.topo == Topology::torus) {
      d_s_ = fourier_diff_matrix(surf.n2);
    }
  }

  const SampledSurface& surface() const { return *surf_; }

  /// d/d(theta): along rows.
  Grid d1(const Grid& f) const { return f * d_theta_.transpose(); }

  /// d/d(second parameter): along columns. Zero for circle topology.
  Grid d2(const Grid& f) const {
    const auto& s = *surf_;
    if (s.topo == Topology::circle) return Grid::Zero(1, s.n1);
    if (s.topo == Topology::torus) return d_s_ * f;
    Eigen::MatrixXcd modes = f.cast<std::complex<double>>() * dft_->forward;
    Eigen::MatrixXcd out(s.n2, s.n1);
    for (int k = 0; k < s.n1; ++k) {
      const int freq = dft_->signed_freq[k];
      if (freq % 2 != 0) {
        const Eigen::VectorXcd t = modes.col(k).cwiseQuotient(w_c_);
        out.col(k) = w_c_.cwiseProduct(d_s_c_ * t) - s_over_w_c_.cwiseProduct(t);
      } else {
        out.col(k) = d_s_c_ * modes.col(k);
      }
    }
    return (out * dft_->inverse).real();
  }

  /// Surface gradient: per-node ambient tangent vector g^{ab} (d_b f) x_a.
  std::vector<Vec> gradient(const Grid& f) const {
    const auto& s = *surf_;
    const Grid f1 = d1(f);
    const Grid f2 = d2(f);
    std::vector<Vec> grad(static_cast<std::size_t>(s.nodes()));
    for (int j = 0; j < s.n2; ++j)
      for (int i = 0; i < s.n1; ++i) {
        const int id = s.index(i, j);
        if (s.dim == 2) {
          grad[id] = (f1(j, i) * s.metric_inv[id](0, 0)) * s.x1[id];
        } else {
          const double a = s.metric_inv[id](0, 0) * f1(j, i) + s.metric_inv[id](0, 1) * f2(j, i);
          const double b = s.metric_inv[id](1, 0) * f1(j, i) + s.metric_inv[id](1, 1) * f2(j, i);
          grad[id] = a * s.x1[id] + b * s.x2[id];
        }
      }
    return grad;
  }

  /// Surface divergence of a tangential ambient vector field:
  /// (1/sqrt g) d_a (sqrt g X^a).
  Grid divergence(const std::vector<Vec>& field) const {
    const auto& s = *surf_;
    Grid a1(s.n2, s.n1), a2(s.n2, s.n1);
    for (int j = 0; j < s.n2; ++j)
      for (int i = 0; i < s.n1; ++i) {
        const int id = s.index(i, j);
        const double c1 = field[id].dot(s.x1[id]);
        const double sg = s.area_density[id];
        if (s.dim == 2) {
          a1(j, i) = sg * s.metric_inv[id](0, 0) * c1;
          a2(j, i) = 0.0;
        } else {
          const double c2 = field[id].dot(s.x2[id]);
          a1(j, i) = sg * (s.metric_inv[id](0, 0) * c1 + s.metric_inv[id](0, 1) * c2);
          a2(j, i) = sg * (s.metric_inv[id](1, 0) * c1 + s.metric_inv[id](1, 1) * c2);
        }
      }
    Grid out = d1(a1);
    if (s.topo != Topology::circle) out += d2(a2);
    for (int j = 0; j < s.n2; ++j)
      for (int i = 0; i < s.n1; ++i) out(j, i) /= s.area_density[s.index(i, j)];
    return out;
  }

 private:
  const SampledSurface* surf_;
  Mat d_theta_;
  Mat d_s_;
  Eigen::MatrixXcd d_s_c_;
  Eigen::VectorXcd w_c_, s_over_w_c_;
  std::unique_ptr<DftPair> dft_;
};

}  // namespace minkgeo
