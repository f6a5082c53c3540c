#pragma once

// Heisenberg Lie algebra and group attached to a bivector: elements (xi, lambda)
// with bracket (0, sigma(xi_a, xi_b)) and the group law carrying the -1/2 sigma
// cocycle. Elements live in the original basis; sigma is passed explicitly so
// one element type serves every fiber.

#include "bivector.hpp"
#include "core.hpp"

namespace weylmoyal {

struct HeisenbergElement {
  Vector xi;
  double lambda = 0.0;

  HeisenbergElement() = default;
  HeisenbergElement(Vector x, double l) : xi(std::move(x)), lambda(l) {}

  int n() const { return static_cast<int>(xi.size()); }
};

namespace detail {

inline void require_same_dims(const HeisenbergElement& a, const HeisenbergElement& b,
                              const Bivector& sigma, const char* who) {
  if (a.n() != b.n() || a.n() != sigma.n())
    throw DimensionMismatch(std::string(who) + ": element/bivector dimensions differ");
}

}  // namespace detail

inline HeisenbergElement bracket(const HeisenbergElement& a, const HeisenbergElement& b,
                                 const Bivector& sigma) {
  detail::require_same_dims(a, b, sigma, "bracket");
  return {Vector::Zero(a.n()), sigma(a.xi, b.xi)};
}

inline HeisenbergElement group_product(const HeisenbergElement& a,
                                       const HeisenbergElement& b,
                                       const Bivector& sigma) {
  detail::require_same_dims(a, b, sigma, "group_product");
  return {a.xi + b.xi, a.lambda + b.lambda - 0.5 * sigma(a.xi, b.xi)};
}

inline HeisenbergElement group_inverse(const HeisenbergElement& a) {
  return {-a.xi, -a.lambda};
}

}  // namespace weylmoyal
