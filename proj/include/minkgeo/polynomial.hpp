#pragma once

#include <array>
#include <vector>

#include "minkgeo/common.hpp"

namespace minkgeo {

/// Multivariate polynomial in 2 or 3 ambient variables with analytic
/// derivatives through third order. Third derivatives are needed because
/// charts built from a body's inverse Gauss map require two derivative
/// orders of that map.
class Polynomial {
 public:
  struct Monomial {
    double coeff;
    std::array<int, 3> exp;  // z-exponent is zero for dim == 2
  };

  Polynomial() = default;
  Polynomial(int dim, std::vector<Monomial> terms) : dim_(dim), terms_(std::move(terms)) {}

  int dim() const { return dim_; }
  int degree() const {
    int d = 0;
    for (const auto& m : terms_) d = std::max(d, m.exp[0] + m.exp[1] + m.exp[2]);
    return d;
  }

  double value(const Vec& v) const {
    double s = 0.0;
    for (const auto& m : terms_) s += m.coeff * pow_term(v, m.exp);
    return s;
  }

  Vec gradient(const Vec& v) const {
    Vec g = Vec::Zero(dim_);
    for (const auto& m : terms_)
      for (int i = 0; i < dim_; ++i) {
        if (m.exp[i] == 0) continue;
        auto e = m.exp;
        --e[i];
        g[i] += m.coeff * m.exp[i] * pow_term(v, e);
      }
    return g;
  }

  Mat hessian(const Vec& v) const {
    Mat h = Mat::Zero(dim_, dim_);
    for (const auto& m : terms_)
      for (int i = 0; i < dim_; ++i) {
        if (m.exp[i] == 0) continue;
        auto ei = m.exp;
        --ei[i];
        for (int j = 0; j < dim_; ++j) {
          if (ei[j] == 0) continue;
          auto eij = ei;
          --eij[j];
          h(i, j) += m.coeff * m.exp[i] * ei[j] * pow_term(v, eij);
        }
      }
    return h;
  }

  /// T[k](i,j) = d^3 P / dv_i dv_j dv_k.
  std::vector<Mat> third(const Vec& v) const {
    std::vector<Mat> t(dim_, Mat::Zero(dim_, dim_));
    for (const auto& m : terms_)
      for (int i = 0; i < dim_; ++i) {
        if (m.exp[i] == 0) continue;
        auto ei = m.exp;
        --ei[i];
        for (int j = 0; j < dim_; ++j) {
          if (ei[j] == 0) continue;
          auto eij = ei;
          --eij[j];
          for (int k = 0; k < dim_; ++k) {
            if (eij[k] == 0) continue;
            auto eijk = eij;
            --eijk[k];
            t[k](i, j) += m.coeff * m.exp[i] * ei[j] * eij[k] * pow_term(v, eijk);
          }
        }
      }
    return t;
  }

 private:
  static double pow_term(const Vec& v, const std::array<int, 3>& e) {
    double p = 1.0;
    for (int i = 0; i < v.size(); ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) p *= v[i];
    return p;
  }

  int dim_ = 3;
  std::vector<Monomial> terms_;
};

/// Fixed family of low-degree harmonic polynomials used by perturbed-ball
/// bodies and radial-graph surfaces. Restricted to the unit sphere these are
/// (unnormalized) spherical harmonics; on the circle they are cos/sin of
/// multiples of the angle.
inline const std::vector<Polynomial>& harmonic_basis(int dim) {
  static const std::vector<Polynomial> basis3 = {
      Polynomial(3, {{1.0, {0, 0, 1}}}),                                      // z
      Polynomial(3, {{1.0, {1, 0, 0}}}),                                      // x
      Polynomial(3, {{1.0, {0, 1, 0}}}),                                      // y
      Polynomial(3, {{1.0, {1, 1, 0}}}),                                      // xy
      Polynomial(3, {{1.0, {1, 0, 1}}}),                                      // xz
      Polynomial(3, {{1.0, {0, 1, 1}}}),                                      // yz
      Polynomial(3, {{1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}}),                   // x^2 - y^2
      Polynomial(3, {{2.0, {0, 0, 2}}, {-1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}}),  // 2z^2 - x^2 - y^2
      Polynomial(3, {{2.0, {0, 0, 3}}, {-3.0, {2, 0, 1}}, {-3.0, {0, 2, 1}}}),  // 2z^3 - 3(x^2+y^2)z
      Polynomial(3, {{1.0, {3, 0, 0}}, {-3.0, {1, 2, 0}}}),                   // x^3 - 3xy^2
  };
  static const std::vector<Polynomial> basis2 = {
      Polynomial(2, {{1.0, {1, 0, 0}}}),                    // x
      Polynomial(2, {{1.0, {0, 1, 0}}}),                    // y
      Polynomial(2, {{1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}}),  // x^2 - y^2
      Polynomial(2, {{2.0, {1, 1, 0}}}),                    // 2xy
      Polynomial(2, {{1.0, {3, 0, 0}}, {-3.0, {1, 2, 0}}}),  // x^3 - 3xy^2
      Polynomial(2, {{3.0, {2, 1, 0}}, {-1.0, {0, 3, 0}}}),  // 3x^2 y - y^3
  };
  if (dim == 3) return basis3;
  if (dim == 2) return basis2;
  throw InvalidArgumentError("harmonic_basis: dimension must be 2 or 3");
}

/// Random polynomial of the ambient coordinates with coefficients drawn from
/// SplitMix64(seed). Restrictions of these to any chart are smooth surface
/// fields, including across sphere-chart poles.
inline Polynomial random_ambient_polynomial(int dim, std::uint64_t seed, int degree) {
  SplitMix64 rng(seed);
  std::vector<Polynomial::Monomial> terms;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b) {
      if (dim == 2) {
        terms.push_back({rng.uniform_sym(), {a, b, 0}});
      } else {
        for (int c = 0; a + b + c <= degree; ++c) terms.push_back({rng.uniform_sym(), {a, b, c}});
      }
    }
  return Polynomial(dim, std::move(terms));
}

}  // namespace minkgeo
