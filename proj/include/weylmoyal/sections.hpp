#pragma once

// Fields of phase-space functions over a sampled base: a finite point cloud
// stands in for the base manifold, each point carries an antisymmetric form
// on a fixed fiber, and sections assign a phase-space function to every
// point (all on one common fiber lattice).
//
// "Vanishing at infinity" is modeled by flagged compactification points at
// which norms must fall below a decay tolerance.  Quantized operations
// (section_cstar_norm, irrep_at_point) read the common lattice labels as
// Darboux-chart coordinates of the point in question; the quantized product
// identities are exact when sigma(m) is already in standard block form
// [[0,I_r,0],[-I_r,0,0],[0,0,0]] on that lattice, and the norm inequalities
// hold for every sigma(m).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bivector.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "star_product.hpp"
#include "weyl_system.hpp"

namespace weylmoyal {

struct BaseSample {
  std::vector<Vector> points;
  std::vector<bool> is_compactification_point;

  std::size_t size() const { return points.size(); }
};

inline BaseSample make_base(std::vector<Vector> points, std::vector<bool> at_infinity = {}) {
  if (points.empty()) throw BadInput("make_base: need at least one base point");
  if (at_infinity.empty()) at_infinity.assign(points.size(), false);
  if (at_infinity.size() != points.size())
    throw BadInput("make_base: flag count differs from point count");
  for (const Vector& p : points)
    if (!p.allFinite()) throw BadInput("make_base: base coordinates must be finite");
  return BaseSample{std::move(points), std::move(at_infinity)};
}

inline bool same_base(const BaseSample& a, const BaseSample& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.is_compactification_point[i] != b.is_compactification_point[i]) return false;
    if (a.points[i].size() != b.points[i].size()) return false;
    if ((a.points[i] - b.points[i]).cwiseAbs().maxCoeff() > 1e-12) return false;
  }
  return true;
}

struct PoissonBundleSample {
  BaseSample base;
  int fiber_dim = 0;
  std::vector<Bivector> sigma_field;  // one form per base point
};

inline PoissonBundleSample make_bundle(BaseSample base, int fiber_dim,
                                       std::vector<Bivector> sigma_field) {
  if (sigma_field.size() != base.size())
    throw BadInput("make_bundle: need one form per base point");
  for (const Bivector& s : sigma_field) {
    if (s.n() != fiber_dim) throw BadInput("make_bundle: form size differs from fiber_dim");
    require_antisymmetric(s.matrix, "make_bundle");
  }
  return PoissonBundleSample{std::move(base), fiber_dim, std::move(sigma_field)};
}

struct SectionField {
  PoissonBundleSample bundle;
  std::vector<PhaseSpaceFunction> values;  // one fiber function per point
  double decay_tolerance = 1e-8;
};

inline SectionField make_section(PoissonBundleSample bundle,
                                 std::vector<PhaseSpaceFunction> values,
                                 double decay_tolerance = 1e-8) {
  if (values.size() != bundle.base.size())
    throw BadInput("make_section: need one fiber value per base point");
  const LatticeSpec& lat = values.front().lattice;
  if (lat.n != bundle.fiber_dim)
    throw BadInput("make_section: lattice dimension differs from fiber_dim");
  for (const PhaseSpaceFunction& f : values)
    if (f.lattice != lat) throw BadInput("make_section: fiber values on different lattices");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (bundle.base.is_compactification_point[i] && l1check_norm(values[i]) > decay_tolerance)
      throw BadInput("make_section: value at compactification point " + std::to_string(i) +
                     " exceeds the decay tolerance");
  return SectionField{std::move(bundle), std::move(values), decay_tolerance};
}

struct ScalarField {
  BaseSample base;
  CVector values;
  bool vanishing_at_infinity = false;
};

inline ScalarField make_scalar_field(BaseSample base, CVector values,
                                     bool vanishing_at_infinity = false,
                                     double decay_tolerance = 1e-8) {
  if (static_cast<std::size_t>(values.size()) != base.size())
    throw BadInput("make_scalar_field: need one value per base point");
  if (!values.allFinite()) throw BadInput("make_scalar_field: values must be finite");
  if (vanishing_at_infinity)
    for (std::size_t i = 0; i < base.size(); ++i)
      if (base.is_compactification_point[i] && std::abs(values(i)) > decay_tolerance)
        throw BadInput("make_scalar_field: nonvanishing value at compactification point " +
                       std::to_string(i));
  return ScalarField{std::move(base), std::move(values), vanishing_at_infinity};
}

// ============================================================
// norms
// ============================================================

// sup over base points of the fiber l1check norms
inline double section_sup_l1_norm(const SectionField& phi) {
  double best = 0.0;
  for (const PhaseSpaceFunction& f : phi.values) best = std::max(best, l1check_norm(f));
  return best;
}

// sup over base points of the quantized operator norms; each supplied system
// must fit the section lattice and reduce the point's form to standard shape
// through its Darboux frame.
inline double section_cstar_norm(const SectionField& phi,
                                 const std::vector<FiniteWeylSystem>& systems) {
  if (systems.size() != phi.bundle.base.size())
    throw SystemMismatch("section_cstar_norm: need one system per base point");
  const LatticeSpec& lat = phi.values.front().lattice;
  double best = 0.0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const FiniteWeylSystem& sys = systems[i];
    if (model_lattice(sys) != lat)
      throw SystemMismatch("section_cstar_norm: system at point " + std::to_string(i) +
                           " does not fit the section lattice");
    const Matrix reduced =
        sys.darboux.basis.transpose() * phi.bundle.sigma_field[i].matrix * sys.darboux.basis;
    if ((reduced - standard_form(sys.n(), sys.r).matrix).cwiseAbs().maxCoeff() > 1e-8)
      throw SystemMismatch("section_cstar_norm: system at point " + std::to_string(i) +
                           " does not reduce the point's form to standard shape");
    best = std::max(best, cstar_norm_estimate(phi.values[i], sys));
  }
  return best;
}

// ============================================================
// evaluation and module structure
// ============================================================

inline const PhaseSpaceFunction& evaluate(const SectionField& phi, std::size_t point) {
  if (point >= phi.values.size())
    throw UnknownPoint("evaluate: point index " + std::to_string(point) + " out of range");
  return phi.values[point];
}

inline const PhaseSpaceFunction& evaluate(const SectionField& phi, const Vector& coords) {
  for (std::size_t i = 0; i < phi.bundle.base.size(); ++i) {
    const Vector& p = phi.bundle.base.points[i];
    if (p.size() == coords.size() && (p - coords).cwiseAbs().maxCoeff() <= 1e-12)
      return phi.values[i];
  }
  throw UnknownPoint("evaluate: no base point at the given coordinates");
}

// pointwise scalar multiplication (f phi)(m) = f(m) * phi(m)
inline SectionField module_action(const ScalarField& f, const SectionField& phi) {
  if (!same_base(f.base, phi.bundle.base))
    throw BaseMismatch("module_action: scalar field lives on a different base");
  std::vector<PhaseSpaceFunction> out;
  out.reserve(phi.values.size());
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    PhaseSpaceFunction h;
    h.lattice = phi.values[i].lattice;
    h.values = f.values(i) * phi.values[i].values;
    h.dual_values = f.values(i) * phi.values[i].dual_values;
    out.push_back(std::move(h));
  }
  SectionField res;
  res.bundle = phi.bundle;
  res.values = std::move(out);
  res.decay_tolerance = phi.decay_tolerance;
  return res;
}

// fiberwise star with each point's own form
inline SectionField section_star(const SectionField& phi, const SectionField& psi) {
  if (!same_base(phi.bundle.base, psi.bundle.base))
    throw BaseMismatch("section_star: operands live on different bases");
  if (phi.bundle.fiber_dim != psi.bundle.fiber_dim)
    throw BaseMismatch("section_star: operands have different fiber dimensions");
  if (phi.values.front().lattice != psi.values.front().lattice)
    throw LatticeMismatch("section_star: operands use different lattices");
  std::vector<PhaseSpaceFunction> out;
  out.reserve(phi.values.size());
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    out.push_back(star(phi.values[i], psi.values[i], phi.bundle.sigma_field[i]));
  SectionField res;
  res.bundle = phi.bundle;
  res.values = std::move(out);
  res.decay_tolerance = phi.decay_tolerance;
  return res;
}

// ============================================================
// irreducible representations of the section algebra
// ============================================================

// Representation "evaluate at the point, then quantize in its highest-weight
// system".  Multiplicative against section_star when the point's form is in
// standard block shape on the section lattice (so lattice labels are Darboux
// coordinates); for a constant scalar section it returns that scalar times
// the identity regardless of the form.
struct PointRepresentation {
  std::size_t point = 0;
  WeylSystemMap map;

  WeylOperator operator()(const SectionField& phi) const {
    return weyl_quantize_rep(map, evaluate(phi, point));
  }
};

inline PointRepresentation irrep_at_point(const PoissonBundleSample& bundle, std::size_t point,
                                          const HighestWeight& v, int N) {
  if (point >= bundle.base.size())
    throw UnknownPoint("irrep_at_point: point index " + std::to_string(point) + " out of range");
  const Bivector& sigma_m = bundle.sigma_field[point];
  const KernelSplit split = kernel_split(sigma_m);
  const FiniteWeylSystem sys = finite_weyl_system(N, split.r, split.kernel_dim());
  return PointRepresentation{point, highest_weight_rep(split, sys, v)};
}

}  // namespace weylmoyal
