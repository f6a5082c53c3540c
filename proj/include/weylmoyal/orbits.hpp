#pragma once

// Two worked families of Poisson structures on vector spaces:
//
//  - the Lorentz orbit of the reference symplectic form on R^4, with its
//    two computable fingerprints (rank 4 and the sign of the Pfaffian, which
//    splits the orbit into two components), stabilizer sampling, and the
//    associated-bundle trivialization;
//  - the linear Poisson structure on R^3 with sigma^{ij}(x) = eps^{ijk} x_k,
//    whose symplectic leaves are the spheres (rank 2 off the origin, rank 0
//    at it), sampled along a leaf.
//
// Conventions: eta = diag(1,-1,-1,-1); the orbit component is the Pfaffian
// sign normalized to the reference form (component(sigma) =
// sign(Pf(sigma)/Pf(sigma0))), so the reference form lies in component +1 and
// component(g sigma0 g^T) = sign(det g).  The associated-bundle class
// [g, u] ~ [gh, h^{-1}u] is trivialized by [g, u] -> (g sigma0 g^T, g u),
// which is constant on classes.

#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "bivector.hpp"
#include "core.hpp"

namespace weylmoyal {

// Reference symplectic form [[0, I2], [-I2, 0]] on R^4.
inline Bivector dfr_sigma0() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 2) = 1.0;
  m(1, 3) = 1.0;
  m(2, 0) = -1.0;
  m(3, 1) = -1.0;
  return Bivector(m);
}

inline Matrix minkowski_metric() {
  Vector d(4);
  d << 1.0, -1.0, -1.0, -1.0;
  return d.asDiagonal();
}

inline bool is_lorentz(const Matrix& g, double tol = 1e-10) {
  if (g.rows() != 4 || g.cols() != 4) return false;
  const Matrix eta = minkowski_metric();
  return (g.transpose() * eta * g - eta).cwiseAbs().maxCoeff() <= tol;
}

struct LorentzGenerator {
  int axis = 0;          // 0, 1, 2 (spatial axis)
  double parameter = 0;  // rapidity for boosts, angle for rotations
  bool is_boost = false;
};

inline Matrix lorentz_boost(int axis, double rapidity) {
  if (axis < 0 || axis > 2) throw BadInput("lorentz_boost: axis must be 0, 1 or 2");
  Matrix g = Matrix::Identity(4, 4);
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  g(0, 0) = ch;
  g(0, axis + 1) = sh;
  g(axis + 1, 0) = sh;
  g(axis + 1, axis + 1) = ch;
  return g;
}

inline Matrix lorentz_rotation(int axis, double angle) {
  if (axis < 0 || axis > 2) throw BadInput("lorentz_rotation: axis must be 0, 1 or 2");
  const int a = (axis + 1) % 3 + 1, b = (axis + 2) % 3 + 1;  // rotate the other two axes
  Matrix g = Matrix::Identity(4, 4);
  const double c = std::cos(angle), s = std::sin(angle);
  g(a, a) = c;
  g(a, b) = -s;
  g(b, a) = s;
  g(b, b) = c;
  return g;
}

inline Matrix parity_flip() {
  Vector d(4);
  d << 1.0, -1.0, -1.0, -1.0;
  return d.asDiagonal();
}

struct OrbitSample {
  std::vector<Matrix> group_elements;
  std::vector<Bivector> sigmas;    // g sigma0 g^T per element
  std::vector<int> component;      // sign of det g
};

// Sign of the Pfaffian normalized to the reference form.
inline int orbit_component(const Bivector& sigma) {
  if (sigma.n() != 4) throw DimensionMismatch("orbit_component: need a 4x4 form");
  if (rank(sigma) < 4) throw Degenerate("orbit_component: form is degenerate");
  const double p = pfaffian(sigma) / pfaffian(dfr_sigma0());
  return p >= 0.0 ? 1 : -1;
}

inline OrbitSample lorentz_orbit_sample(const std::vector<LorentzGenerator>& generators,
                                        bool include_parity = false) {
  OrbitSample out;
  std::vector<Matrix> elements;
  for (const LorentzGenerator& gen : generators) {
    if (!std::isfinite(gen.parameter))
      throw BadInput("lorentz_orbit_sample: parameter must be finite");
    elements.push_back(gen.is_boost ? lorentz_boost(gen.axis, gen.parameter)
                                    : lorentz_rotation(gen.axis, gen.parameter));
  }
  if (include_parity) {
    const Matrix P = parity_flip();
    const std::size_t base = elements.size();
    for (std::size_t i = 0; i < base; ++i) elements.push_back(P * elements[i]);
  }
  const Bivector s0 = dfr_sigma0();
  for (const Matrix& g : elements) {
    if (!is_lorentz(g))
      throw NotLorentz("lorentz_orbit_sample: element does not preserve the metric");
    out.group_elements.push_back(g);
    out.sigmas.push_back(Bivector(g * s0.matrix * g.transpose()));
    out.component.push_back(g.determinant() >= 0.0 ? 1 : -1);
  }
  return out;
}

// Basis of the two-dimensional Lie algebra of the stabilizer of the reference
// form inside the Lorentz group: solutions of A^T eta + eta A = 0 and
// A sigma0 + sigma0 A^T = 0.
inline std::vector<Matrix> stabilizer_algebra_basis() {
  // Lorentz algebra basis: boosts K_1..K_3, rotations J_1..J_3
  std::vector<Matrix> gens;
  for (int a = 0; a < 3; ++a) {
    Matrix K = Matrix::Zero(4, 4);
    K(0, a + 1) = 1.0;
    K(a + 1, 0) = 1.0;
    gens.push_back(K);
  }
  for (int a = 0; a < 3; ++a) {
    const int i = (a + 1) % 3 + 1, j = (a + 2) % 3 + 1;
    Matrix J = Matrix::Zero(4, 4);
    J(i, j) = -1.0;
    J(j, i) = 1.0;
    gens.push_back(J);
  }
  // linear condition A sigma0 + sigma0 A^T = 0 on the coefficients
  const Matrix s0 = dfr_sigma0().matrix;
  Matrix C(16, 6);
  for (int k = 0; k < 6; ++k) {
    const Matrix cond = gens[k] * s0 + s0 * gens[k].transpose();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) C(4 * i + j, k) = cond(i, j);
  }
  const Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thr = sv(0) * 6.0 * 1e-12;
  int rankC = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++rankC;
  std::vector<Matrix> basis;
  for (int k = rankC; k < 6; ++k) {
    Matrix A = Matrix::Zero(4, 4);
    for (int g = 0; g < 6; ++g) A += svd.matrixV()(g, k) * gens[g];
    basis.push_back(A);
  }
  return basis;
}

// Group elements exp(t A) along each stabilizer algebra direction, one per
// (direction, parameter) pair; every element preserves both eta and sigma0.
inline std::vector<Matrix> lorentz_stabilizer_sample(const std::vector<double>& parameters) {
  const std::vector<Matrix> basis = stabilizer_algebra_basis();
  const Matrix s0 = dfr_sigma0().matrix;
  std::vector<Matrix> out;
  for (const Matrix& A : basis)
    for (double t : parameters) {
      Matrix h = (t * A).exp();
      if (!is_lorentz(h) || (h * s0 * h.transpose() - s0).cwiseAbs().maxCoeff() > 1e-10)
        throw NotLorentz("lorentz_stabilizer_sample: exponential left the stabilizer");
      out.push_back(std::move(h));
    }
  return out;
}

// Trivialization of the associated bundle: class [g, u] -> (g sigma0 g^T, g u).
inline std::pair<Bivector, Vector> trivialization_roundtrip(const Matrix& g, const Vector& u0) {
  if (!is_lorentz(g)) throw NotLorentz("trivialization_roundtrip: g does not preserve the metric");
  if (u0.size() != 4) throw DimensionMismatch("trivialization_roundtrip: fiber vector must be 4d");
  const Matrix s0 = dfr_sigma0().matrix;
  return {Bivector(g * s0 * g.transpose()), g * u0};
}

// ============================================================
// linear Poisson structure on R^3
// ============================================================

// sigma^{ij}(x) = eps^{ijk} x_k
inline Bivector su2_poisson(const Vector& x) {
  if (x.size() != 3) throw DimensionMismatch("su2_poisson: need a 3-vector");
  Matrix m(3, 3);
  m << 0.0, x(2), -x(1),
      -x(2), 0.0, x(0),
       x(1), -x(0), 0.0;
  return Bivector(m);
}

struct LinearPoissonSample {
  std::vector<Vector> points;
  std::vector<Bivector> sigmas;
};

// Deterministic near-uniform sphere sample (golden-spiral layout) of the
// symplectic leaf of given radius.
inline LinearPoissonSample leaf_sample(double radius, int count) {
  if (radius <= 0.0) throw BadInput("leaf_sample: radius must be positive");
  if (count < 1) throw BadInput("leaf_sample: count must be positive");
  LinearPoissonSample out;
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = count == 1 ? 0.0 : 1.0 - 2.0 * (i + 0.5) / count;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Vector x(3);
    x << radius * rho * std::cos(phi), radius * rho * std::sin(phi), radius * z;
    out.points.push_back(x);
    out.sigmas.push_back(su2_poisson(x));
  }
  return out;
}

}  // namespace weylmoyal
