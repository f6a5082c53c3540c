#pragma once

// Phase-space discretization: a periodic box lattice for V, its dual lattice,
// and function samples with cached Fourier coefficients.
//
// Conventions (fixed so the round trip is exactly the identity):
//   dual coefficient   fcheck(m) = (2pi)^{-n} * dx^n * sum_x f(x) e^{-i<eta(m),x>}
//   primal synthesis   f(x)      = dxi^n * sum_m fcheck(m) e^{+i<eta(m),x>}
// with dx = L/K, dxi = 2pi/L, x = k*dx (k in [0,K)^n), eta(m) = (2pi/L)*m and
// integer labels m per axis in the symmetric window [-(K/2), -(K/2)+K-1].

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "core.hpp"

namespace weylmoyal {

struct LatticeSpec {
  int n = 0;                // number of axes
  int points_per_axis = 0;  // K
  double box_length = 0.0;  // L, same for every axis

  double primal_spacing() const { return box_length / points_per_axis; }
  double dual_spacing() const { return 2.0 * pi / box_length; }
  double primal_cell() const { return std::pow(primal_spacing(), n); }
  double dual_cell() const { return std::pow(dual_spacing(), n); }

  // first integer label of the symmetric dual window
  int window_min() const { return -(points_per_axis / 2); }
  int window_max() const { return window_min() + points_per_axis - 1; }

  std::ptrdiff_t total() const {
    std::ptrdiff_t t = 1;
    for (int a = 0; a < n; ++a) t *= points_per_axis;
    return t;
  }

  bool operator==(const LatticeSpec& o) const {
    return n == o.n && points_per_axis == o.points_per_axis &&
           std::abs(box_length - o.box_length) <=
               1e-12 * std::max(1.0, std::abs(box_length));
  }
  bool operator!=(const LatticeSpec& o) const { return !(*this == o); }

  // row-major decoding, axis 0 slowest
  void decode(std::ptrdiff_t flat, int* idx) const {
    for (int a = n - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % points_per_axis);
      flat /= points_per_axis;
    }
  }
  std::ptrdiff_t encode(const int* idx) const {
    std::ptrdiff_t flat = 0;
    for (int a = 0; a < n; ++a) flat = flat * points_per_axis + idx[a];
    return flat;
  }

  // position of primal grid point, axis component
  double position(int k) const { return k * primal_spacing(); }
  // integer dual label of dual storage index t in [0,K)
  int label(int t) const { return window_min() + t; }
  // physical dual frequency for a label
  double frequency(int m) const { return m * dual_spacing(); }
};

namespace detail {

// K x K matrix of the per-axis analysis step, A[t,k] = e^{-2pi i (wmin+t) k / K}.
inline CMatrix axis_analysis_matrix(const LatticeSpec& lat) {
  const int K = lat.points_per_axis;
  const int wmin = lat.window_min();
  CMatrix A(K, K);
  for (int t = 0; t < K; ++t)
    for (int k = 0; k < K; ++k) {
      const double ang = -2.0 * pi * static_cast<double>(wmin + t) * k / K;
      A(t, k) = Complex(std::cos(ang), std::sin(ang));
    }
  return A;
}

// Applies the same K x K matrix along axes [axis_begin, axis_end) of a
// row-major n-d array (axis 0 slowest).
inline CVector transform_axes(const LatticeSpec& lat, CVector cur, const CMatrix& A,
                              int axis_begin, int axis_end) {
  const int K = lat.points_per_axis;
  const std::ptrdiff_t total = cur.size();
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (int a = axis_begin; a < axis_end; ++a) {
    std::ptrdiff_t stride = 1;
    for (int b = a + 1; b < lat.n; ++b) stride *= K;
    const std::ptrdiff_t block = K * stride;
    const std::ptrdiff_t outer = total / block;
    CVector next(total);
    for (std::ptrdiff_t o = 0; o < outer; ++o) {
      Eigen::Map<const RowMat> in(cur.data() + o * block, K, stride);
      Eigen::Map<RowMat> out(next.data() + o * block, K, stride);
      out.noalias() = A * in;
    }
    cur.swap(next);
  }
  return cur;
}

inline CVector transform_all_axes(const LatticeSpec& lat, CVector cur, const CMatrix& A) {
  return transform_axes(lat, std::move(cur), A, 0, lat.n);
}

}  // namespace detail

// Samples of a phase-space function on the lattice, with the dual coefficients
// computed once at construction (write-once; safe to share across threads).
struct PhaseSpaceFunction {
  LatticeSpec lattice;
  CVector values;       // f(x), row-major primal samples
  CVector dual_values;  // fcheck at label(t) per axis, same row-major layout

  PhaseSpaceFunction() = default;

  static PhaseSpaceFunction from_values(const LatticeSpec& lat, CVector vals) {
    if (vals.size() != lat.total())
      throw DimensionMismatch("PhaseSpaceFunction: sample count does not match lattice");
    PhaseSpaceFunction f;
    f.lattice = lat;
    f.values = std::move(vals);
    const CMatrix A = detail::axis_analysis_matrix(lat);
    f.dual_values = detail::transform_all_axes(lat, f.values, A);
    f.dual_values *= std::pow(2.0 * pi, -lat.n) * lat.primal_cell();
    return f;
  }

  static PhaseSpaceFunction from_dual(const LatticeSpec& lat, CVector dual) {
    if (dual.size() != lat.total())
      throw DimensionMismatch("PhaseSpaceFunction: dual sample count does not match lattice");
    PhaseSpaceFunction f;
    f.lattice = lat;
    f.dual_values = std::move(dual);
    const CMatrix A = detail::axis_analysis_matrix(lat).adjoint();  // synthesis step
    f.values = detail::transform_all_axes(lat, f.dual_values, A);
    f.values *= lat.dual_cell();
    return f;
  }
};

// Dual coefficients of f (the cached analysis result).
inline const CVector& inv_fourier(const PhaseSpaceFunction& f) { return f.dual_values; }

// Function synthesized from dual coefficients.
inline PhaseSpaceFunction fourier(const LatticeSpec& lat, CVector dual) {
  return PhaseSpaceFunction::from_dual(lat, std::move(dual));
}

// ============================================================
// norms
// ============================================================

// sum_m |fcheck(m)| * dual cell weight
inline double l1check_norm(const PhaseSpaceFunction& f) {
  return f.dual_values.cwiseAbs().sum() * f.lattice.dual_cell();
}

inline double sup_norm(const PhaseSpaceFunction& f) {
  return f.values.size() == 0 ? 0.0 : f.values.cwiseAbs().maxCoeff();
}

inline PhaseSpaceFunction conj(const PhaseSpaceFunction& f) {
  return PhaseSpaceFunction::from_values(f.lattice, f.values.conjugate());
}

// ============================================================
// generators
// ============================================================

// Plane-wave character e_m(x) = e^{i<eta(m),x>} for an integer label vector.
inline PhaseSpaceFunction character(const LatticeSpec& lat, const IVector& m) {
  if (m.size() != lat.n) throw DimensionMismatch("character: label size != lattice n");
  CVector vals(lat.total());
  std::vector<int> idx(lat.n);
  for (std::ptrdiff_t i = 0; i < vals.size(); ++i) {
    lat.decode(i, idx.data());
    double ang = 0.0;
    for (int a = 0; a < lat.n; ++a)
      ang += 2.0 * pi * static_cast<double>(m(a)) * idx[a] / lat.points_per_axis;
    vals(i) = Complex(std::cos(ang), std::sin(ang));
  }
  return PhaseSpaceFunction::from_values(lat, std::move(vals));
}

// Product of per-axis Gaussians exp(-(x-c)^2/(2w^2)) * exp(i p (x-c)).
inline PhaseSpaceFunction gaussian(const LatticeSpec& lat, const Vector& center,
                                   const Vector& width, const Vector& momentum) {
  if (center.size() != lat.n || width.size() != lat.n || momentum.size() != lat.n)
    throw DimensionMismatch("gaussian: parameter size != lattice n");
  CVector vals(lat.total());
  std::vector<int> idx(lat.n);
  for (std::ptrdiff_t i = 0; i < vals.size(); ++i) {
    lat.decode(i, idx.data());
    double quad = 0.0, ang = 0.0;
    for (int a = 0; a < lat.n; ++a) {
      const double d = lat.position(idx[a]) - center(a);
      quad += d * d / (2.0 * width(a) * width(a));
      ang += momentum(a) * d;
    }
    vals(i) = std::exp(-quad) * Complex(std::cos(ang), std::sin(ang));
  }
  return PhaseSpaceFunction::from_values(lat, std::move(vals));
}

// Seeded iid complex-normal samples; used by the randomized verification suites.
inline PhaseSpaceFunction random_function(const LatticeSpec& lat, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector vals(lat.total());
  for (std::ptrdiff_t i = 0; i < vals.size(); ++i)
    vals(i) = Complex(normal(rng), normal(rng));
  return PhaseSpaceFunction::from_values(lat, std::move(vals));
}

}  // namespace weylmoyal
