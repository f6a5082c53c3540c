#pragma once

// Unitary Weyl systems.
//
// FiniteWeylSystem is an exact model over Z_N built from clock and shift
// matrices: per symplectic pair, pi(a,b) = e^{i pi a b / N} X^a Z^b acting on
// C^N, tensored over the r pairs of a Darboux frame.  With integer labels
// (a_1..a_r, b_1..b_r) this satisfies the Weyl relation
//
//   pi(m) pi(m') = e^{-(i/2) (2pi/N) m^T J m'} pi(m + m')
//
// exactly, for ALL integers, where J is the standard symplectic matrix.  The
// model therefore represents the rescaled form (2pi/N)*sigma on the integer
// Darboux lattice; kernel directions act through a scalar character, fixed
// to 1 here (nontrivial characters enter via highest_weight_rep).
//
// pi is not N-periodic in its labels: the relation itself forces
// pi(m + N e) = (+-1) pi(m).  Folding identities live in star_product.hpp.
//
// GridRep is a truncated-grid model of the Schrodinger representation with
// position and Fourier-conjugated momentum matrices; its commutator
// identities hold only to discretization accuracy, unlike the finite model.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "bivector.hpp"
#include "core.hpp"
#include "lattice.hpp"

namespace weylmoyal {

struct WeylOperator {
  CMatrix matrix;

  std::ptrdiff_t size() const { return matrix.rows(); }
};

// largest singular value
inline double operator_norm(const WeylOperator& A) {
  if (A.matrix.size() == 0) return 0.0;
  return A.matrix.bdcSvd().singularValues()(0);
}

// ============================================================
// finite Weyl system
// ============================================================

struct FiniteWeylSystem {
  int N = 0;           // lattice size per Darboux direction
  int r = 0;           // half-rank
  int kernel_dim = 0;  // n - 2r
  DarbouxFrame darboux;
  Matrix darboux_inverse;

  int n() const { return 2 * r + kernel_dim; }
  std::ptrdiff_t hilbert_dim() const {
    std::ptrdiff_t d = 1;
    for (int j = 0; j < r; ++j) d *= N;
    return d;
  }
};

inline FiniteWeylSystem finite_weyl_system(int N, int r, int kernel_dim = 0) {
  if (N < 2 || r < 0 || kernel_dim < 0)
    throw BadInput("finite_weyl_system: need N >= 2, r >= 0, kernel_dim >= 0");
  FiniteWeylSystem sys;
  sys.N = N;
  sys.r = r;
  sys.kernel_dim = kernel_dim;
  sys.darboux.basis = Matrix::Identity(2 * r + kernel_dim, 2 * r + kernel_dim);
  sys.darboux.r = r;
  sys.darboux_inverse = sys.darboux.basis;
  return sys;
}

// Model for a general antisymmetric form: labels are integer coordinates in
// the computed Darboux frame.
inline FiniteWeylSystem finite_weyl_system(int N, const Bivector& sigma) {
  DarbouxFrame frame = darboux_frame(sigma);
  FiniteWeylSystem sys;
  sys.N = N;
  sys.r = frame.r;
  sys.kernel_dim = frame.n() - 2 * frame.r;
  sys.darboux = frame;
  sys.darboux_inverse = frame.basis.inverse();
  return sys;
}

// Dual lattice the model quantizes from: one axis per Darboux coordinate,
// N points, box length N, so the dual spacing is 2pi/N and labels run over
// the symmetric window.
inline LatticeSpec model_lattice(const FiniteWeylSystem& sys) {
  return LatticeSpec{sys.n(), sys.N, static_cast<double>(sys.N)};
}

// Antisymmetric form on the model lattice's physical dual coordinates whose
// values reproduce the Weyl phases: (N/2pi) * standard form, so that on
// frequencies eta(m) = (2pi/N) m it evaluates to (2pi/N) m^T J m'.
inline Bivector model_bivector(const FiniteWeylSystem& sys) {
  Bivector b = standard_form(sys.n(), sys.r);
  b.matrix *= sys.N / (2.0 * pi);
  return b;
}

namespace detail {

// Single-pair unitary e^{i pi a b / N} X^a Z^b for arbitrary integers a, b.
// X is the cyclic shift (X|k> = |k+1 mod N>), Z = diag(omega^k).
inline CMatrix clock_shift_unitary(int N, long long a, long long b) {
  CMatrix M = CMatrix::Zero(N, N);
  const double base = pi * static_cast<double>(a) * static_cast<double>(b) / N;
  const int ashift = static_cast<int>(((a % N) + N) % N);
  for (int k = 0; k < N; ++k) {
    const int row = (k + ashift) % N;
    const double ang = base + 2.0 * pi * static_cast<double>(b) * k / N;
    M(row, k) = Complex(std::cos(ang), std::sin(ang));
  }
  return M;
}

}  // namespace detail

// Unitary for an integer Darboux label vector; size 2r (symplectic labels
// only) or n (trailing kernel labels ignored — their character is 1).
inline CMatrix system_unitary(const FiniteWeylSystem& sys, const IVector& m) {
  if (m.size() != 2 * sys.r && m.size() != sys.n())
    throw DimensionMismatch("system_unitary: label vector must have size 2r or n");
  CMatrix M = CMatrix::Identity(1, 1);
  for (int j = 0; j < sys.r; ++j)
    M = Eigen::kroneckerProduct(M, detail::clock_shift_unitary(sys.N, m(j), m(sys.r + j))).eval();
  return M;
}

// Unitary for a point of V* given in ambient coordinates; its symplectic
// Darboux coordinates must be integers.
inline WeylOperator weyl_unitary(const FiniteWeylSystem& sys, const Vector& xi) {
  if (xi.size() != sys.n())
    throw DimensionMismatch("weyl_unitary: vector size does not match the model dimension");
  const Vector c = sys.darboux_inverse * xi;
  IVector m(2 * sys.r);
  for (int j = 0; j < 2 * sys.r; ++j) {
    const double rounded = std::round(c(j));
    if (std::abs(c(j) - rounded) > 1e-9)
      throw OffLattice("weyl_unitary: Darboux coordinate " + std::to_string(j) +
                       " = " + std::to_string(c(j)) + " is not an integer label");
    m(j) = static_cast<int>(rounded);
  }
  return WeylOperator{system_unitary(sys, m)};
}

// ============================================================
// quantization
// ============================================================

// W f = sum_m fcheck(m) dxi^n pi(m) over the model's dual window.
// Summation runs in lexicographic lattice order for determinism.
inline WeylOperator weyl_quantize(const FiniteWeylSystem& sys, const PhaseSpaceFunction& f) {
  const LatticeSpec lat = model_lattice(sys);
  if (f.lattice != lat)
    throw LatticeMismatch("weyl_quantize: function lattice does not match the model lattice");
  const double w = lat.dual_cell();
  const std::ptrdiff_t dim = sys.hilbert_dim();
  CMatrix acc = CMatrix::Zero(dim, dim);
  std::vector<int> idx(lat.n);
  IVector m(2 * sys.r);
  for (std::ptrdiff_t i = 0; i < f.dual_values.size(); ++i) {
    const Complex coeff = f.dual_values(i) * w;
    if (coeff == Complex(0.0, 0.0)) continue;
    lat.decode(i, idx.data());
    for (int j = 0; j < 2 * sys.r; ++j) m(j) = lat.label(idx[j]);
    acc.noalias() += coeff * system_unitary(sys, m);
  }
  return WeylOperator{std::move(acc)};
}

// Inverse of weyl_quantize on the nondegenerate model, from the trace
// orthogonality tr(pi(m)^dag pi(m')) = N^r delta_{mm'} on window labels.
inline PhaseSpaceFunction weyl_dequantize(const FiniteWeylSystem& sys, const WeylOperator& A) {
  if (sys.kernel_dim != 0)
    throw Degenerate("weyl_dequantize: kernel directions make quantization non-injective");
  const LatticeSpec lat = model_lattice(sys);
  const std::ptrdiff_t dim = sys.hilbert_dim();
  if (A.matrix.rows() != dim || A.matrix.cols() != dim)
    throw DimensionMismatch("weyl_dequantize: operator size does not match the model");
  const double scale = 1.0 / (static_cast<double>(dim) * lat.dual_cell());
  CVector dual(lat.total());
  std::vector<int> idx(lat.n);
  IVector m(2 * sys.r);
  for (std::ptrdiff_t i = 0; i < dual.size(); ++i) {
    lat.decode(i, idx.data());
    for (int j = 0; j < 2 * sys.r; ++j) m(j) = lat.label(idx[j]);
    const CMatrix U = system_unitary(sys, m);
    dual(i) = U.conjugate().cwiseProduct(A.matrix).sum() * scale;
  }
  return PhaseSpaceFunction::from_dual(lat, std::move(dual));
}

// ============================================================
// quantization against an arbitrary Weyl system
// ============================================================

// A representation given as label -> unitary, together with the lattice the
// labels live on and the antisymmetric form (on physical dual coordinates)
// entering its Weyl relation.  The map must accept arbitrary integer labels.
struct WeylSystemMap {
  LatticeSpec lattice;
  Matrix sigma;
  std::function<CMatrix(const IVector&)> unitary;
};

inline WeylSystemMap system_as_map(const FiniteWeylSystem& sys) {
  FiniteWeylSystem base = sys;
  auto u = [base](const IVector& m) { return system_unitary(base, m); };
  return WeylSystemMap{model_lattice(sys), model_bivector(sys).matrix, u};
}

namespace detail {

// Checks pi(p) pi(q) = e^{-(i/2) sigma(eta(p),eta(q))} pi(p+q) on a small
// deterministic set of label pairs.
inline void spot_check_weyl_relation(const WeylSystemMap& pi, double tol) {
  const int n = pi.lattice.n;
  std::vector<IVector> probes;
  for (int a = 0; a < n; ++a) {
    IVector e = IVector::Zero(n);
    e(a) = 1;
    probes.push_back(e);
  }
  IVector mixed(n);
  for (int a = 0; a < n; ++a) mixed(a) = 1 + (a % 2);
  probes.push_back(mixed);
  const double dxi = pi.lattice.dual_spacing();
  for (const IVector& p : probes)
    for (const IVector& q : probes) {
      const Vector ep = dxi * p.cast<double>();
      const Vector eq = dxi * q.cast<double>();
      const double s = ep.dot(pi.sigma * eq);
      const Complex tau(std::cos(0.5 * s), -std::sin(0.5 * s));
      const CMatrix lhs = pi.unitary(p) * pi.unitary(q);
      const CMatrix rhs = tau * pi.unitary(IVector(p + q));
      if ((lhs - rhs).norm() > tol)
        throw NotAWeylSystem("weyl_quantize_rep: supplied map violates the Weyl relation");
    }
}

}  // namespace detail

// W_pi f = sum_m fcheck(m) dxi^n pi(m); the map is spot-checked first.
inline WeylOperator weyl_quantize_rep(const WeylSystemMap& pi, const PhaseSpaceFunction& f) {
  if (f.lattice != pi.lattice)
    throw LatticeMismatch("weyl_quantize_rep: function lattice does not match the map lattice");
  detail::spot_check_weyl_relation(pi, 1e-8);
  const LatticeSpec& lat = pi.lattice;
  const double w = lat.dual_cell();
  CMatrix acc;
  std::vector<int> idx(lat.n);
  IVector m(lat.n);
  for (std::ptrdiff_t i = 0; i < f.dual_values.size(); ++i) {
    lat.decode(i, idx.data());
    for (int a = 0; a < lat.n; ++a) m(a) = lat.label(idx[a]);
    const Complex coeff = f.dual_values(i) * w;
    if (acc.size() == 0)
      acc = coeff * pi.unitary(m);
    else if (coeff != Complex(0.0, 0.0))
      acc.noalias() += coeff * pi.unitary(m);
  }
  return WeylOperator{std::move(acc)};
}

// ============================================================
// highest-weight representations
// ============================================================

struct HighestWeight {
  Vector v;  // point of V; only its class modulo the kernel annihilator matters
};

// Representation pi_[v](m) = e^{i<xi_ker, v>} pi'(m_sympl) on labels ordered
// [2r symplectic | kernel], where xi_ker = (2pi/N) sum_k m_k * kernel direction.
// Weights differing by an element of (ker sigma)^perp give identical maps.
inline WeylSystemMap highest_weight_rep(const KernelSplit& split, const FiniteWeylSystem& sys,
                                        const HighestWeight& hw) {
  if (sys.r != split.r)
    throw DimensionMismatch("highest_weight_rep: system half-rank differs from the split");
  if (hw.v.size() != split.kernel_basis.rows())
    throw DimensionMismatch("highest_weight_rep: weight vector size does not match the split");
  const int r = split.r;
  const int kdim = split.kernel_dim();
  const int n = 2 * r + kdim;
  const Vector kernel_weights = split.kernel_basis.transpose() * hw.v;
  const double scale = 2.0 * pi / sys.N;
  FiniteWeylSystem base = sys;
  auto u = [base, kernel_weights, r, kdim, scale](const IVector& m) -> CMatrix {
    if (m.size() != 2 * r + kdim)
      throw DimensionMismatch("highest-weight unitary: bad label size");
    double ang = 0.0;
    for (int k = 0; k < kdim; ++k) ang += scale * m(2 * r + k) * kernel_weights(k);
    const IVector ms = m.head(2 * r);
    return Complex(std::cos(ang), std::sin(ang)) * system_unitary(base, ms);
  };
  Bivector sig = standard_form(n, r);
  sig.matrix *= sys.N / (2.0 * pi);
  return WeylSystemMap{LatticeSpec{n, sys.N, static_cast<double>(sys.N)}, sig.matrix, u};
}

// ============================================================
// commutant geometry of the finite model
// ============================================================

struct CommutantDefect {
  double max_commutator = 0.0;    // max Frobenius norm of [A, pi(m)] over window labels
  double sum_sq = 0.0;            // sum of squared Frobenius norms
  double scalar_distance = 0.0;   // Frobenius distance from A to C*identity
};

// On the nondegenerate model the window unitaries form a matrix basis and
//   dist_F(A, scalars)^2 = sum_m ||[A, pi(m)]||_F^2 / (2 N^{2r}),
// so near-commuting matrices are near-scalar with an explicit constant.
inline CommutantDefect commutant_defect(const FiniteWeylSystem& sys, const CMatrix& A) {
  const std::ptrdiff_t dim = sys.hilbert_dim();
  if (A.rows() != dim || A.cols() != dim)
    throw DimensionMismatch("commutant_defect: matrix size does not match the model");
  CommutantDefect out;
  const LatticeSpec lat = model_lattice(sys);
  std::vector<int> idx(lat.n);
  IVector m(2 * sys.r);
  const std::ptrdiff_t total = lat.total();
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    lat.decode(i, idx.data());
    for (int j = 0; j < 2 * sys.r; ++j) m(j) = lat.label(idx[j]);
    const CMatrix U = system_unitary(sys, m);
    const double c = (A * U - U * A).norm();
    out.max_commutator = std::max(out.max_commutator, c);
    out.sum_sq += c * c;
  }
  const Complex mean = A.trace() / static_cast<double>(dim);
  out.scalar_distance = (A - mean * CMatrix::Identity(dim, dim)).norm();
  return out;
}

// ============================================================
// truncated-grid Schrodinger representation
// ============================================================

struct GridRep {
  int points_per_axis = 0;
  double box_length = 0.0;
  int dims = 0;  // configuration-space dimension
};

namespace detail {

inline CMatrix embed_axis(const CMatrix& base, int axis, int dims, int K) {
  CMatrix M = CMatrix::Identity(1, 1);
  for (int a = 0; a < dims; ++a) {
    if (a == axis)
      M = Eigen::kroneckerProduct(M, base).eval();
    else
      M = Eigen::kroneckerProduct(M, CMatrix::Identity(K, K)).eval();
  }
  return M;
}

}  // namespace detail

// Position matrices Q^j = diag(x_k) on the centered box and momenta
// P^j = F^dag diag(2pi m / L) F with the unitary DFT F over the symmetric
// frequency window.  Hermitian by construction; [P^j, Q^k] ~ -i delta^{jk}
// only to discretization accuracy on smooth states.
inline std::pair<std::vector<WeylOperator>, std::vector<WeylOperator>> schrodinger_pq(
    const GridRep& rep) {
  const int K = rep.points_per_axis;
  const double L = rep.box_length;
  if (K < 2 || L <= 0.0 || rep.dims < 1)
    throw BadInput("schrodinger_pq: need points_per_axis >= 2, box_length > 0, dims >= 1");
  const int wmin = -(K / 2);
  CMatrix Qbase = CMatrix::Zero(K, K);
  for (int k = 0; k < K; ++k) Qbase(k, k) = -L / 2.0 + k * (L / K);
  CMatrix F(K, K);
  const double scale = 1.0 / std::sqrt(static_cast<double>(K));
  for (int t = 0; t < K; ++t)
    for (int k = 0; k < K; ++k) {
      const double ang = -2.0 * pi * static_cast<double>(wmin + t) * k / K;
      F(t, k) = scale * Complex(std::cos(ang), std::sin(ang));
    }
  CVector freqs(K);
  for (int t = 0; t < K; ++t) freqs(t) = 2.0 * pi * (wmin + t) / L;
  const CMatrix Pbase = F.adjoint() * freqs.asDiagonal() * F;
  std::vector<WeylOperator> P, Q;
  for (int j = 0; j < rep.dims; ++j) {
    P.push_back(WeylOperator{detail::embed_axis(Pbase, j, rep.dims, K)});
    Q.push_back(WeylOperator{detail::embed_axis(Qbase, j, rep.dims, K)});
  }
  return {std::move(P), std::move(Q)};
}

}  // namespace weylmoyal
