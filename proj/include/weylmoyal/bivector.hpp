#pragma once

// Linear algebra of (possibly degenerate) antisymmetric bilinear forms:
// numeric rank, Darboux frames via pivoted symplectic elimination on top of
// an SVD kernel/complement split, and the Pfaffian.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "core.hpp"

namespace weylmoyal {

// Antisymmetric bilinear form on the dual space, stored as its coefficient
// matrix sigma(v^i, v^j) in a chosen basis.
struct Bivector {
  Matrix matrix;

  Bivector() = default;
  explicit Bivector(Matrix m) : matrix(std::move(m)) {}

  int n() const { return static_cast<int>(matrix.rows()); }

  // sigma(xi, eta) = xi^T M eta
  double operator()(const Vector& xi, const Vector& eta) const {
    return xi.dot(matrix * eta);
  }
};

// Columns of `basis` are the Darboux basis vectors expressed in the original
// coordinates; layout [e_1..e_r | f_1..f_r | kernel...], so that
// basis^T sigma basis = [[0, I_r, 0], [-I_r, 0, 0], [0, 0, 0]].
struct DarbouxFrame {
  Matrix basis;
  int r = 0;

  int n() const { return static_cast<int>(basis.rows()); }
};

struct KernelSplit {
  Matrix kernel_basis;       // n x (n-2r), basis of ker sigma in V*
  Matrix complement_basis;   // n x 2r, complement on which sigma is nondegenerate
  Matrix annihilator_basis;  // n x 2r, basis of (ker sigma)^perp in V
  Matrix sigma_prime;        // 2r x 2r, restriction of sigma to the complement
  int r = 0;

  int n() const { return static_cast<int>(kernel_basis.rows()); }
  int kernel_dim() const { return static_cast<int>(kernel_basis.cols()); }
};

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols())
    throw DimensionMismatch(std::string(who) + ": matrix is not square");
}

inline void require_antisymmetric(const Matrix& m, const char* who) {
  require_square(m, who);
  const double scale = m.cwiseAbs().maxCoeff();
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * scale)
    throw NonAntisymmetric(std::string(who) + ": matrix is not antisymmetric");
}

// ============================================================
// standard form and rank
// ============================================================

// Block matrix [[0, I_r, 0], [-I_r, 0, 0], [0, 0, 0]] of size n.
inline Bivector standard_form(int n, int r) {
  if (n < 0 || r < 0 || 2 * r > n)
    throw RankTooLarge("standard_form: need 2r <= n");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) {
    m(i, r + i) = 1.0;
    m(r + i, i) = -1.0;
  }
  return Bivector(m);
}

namespace detail {

// Numeric rank threshold: singular values below smax * n * 1e-12 count as zero.
inline double rank_threshold(const Eigen::VectorXd& sv, int n) {
  if (sv.size() == 0) return 0.0;
  return sv(0) * static_cast<double>(n) * 1e-12;
}

inline int even_rank_from_singular_values(const Eigen::VectorXd& sv, int n) {
  const double thr = rank_threshold(sv, n);
  int count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > thr) ++count;
  if (count % 2 != 0) --count;  // singular values of antisymmetric matrices pair up
  return count;
}

}  // namespace detail

inline int rank(const Bivector& sigma) {
  require_antisymmetric(sigma.matrix, "rank");
  if (sigma.n() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(sigma.matrix);
  return detail::even_rank_from_singular_values(svd.singularValues(), sigma.n());
}

// ============================================================
// Darboux frame
// ============================================================

inline DarbouxFrame darboux_frame(const Bivector& sigma) {
  require_antisymmetric(sigma.matrix, "darboux_frame");
  const int n = sigma.n();
  const Matrix& M = sigma.matrix;

  if (n == 0 || M.cwiseAbs().maxCoeff() == 0.0)
    return DarbouxFrame{Matrix::Identity(n, n), 0};

  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const int rank2 = detail::even_rank_from_singular_values(svd.singularValues(), n);
  const int r = rank2 / 2;

  // Already in standard form: keep the identity frame.
  if ((M - standard_form(n, r).matrix).cwiseAbs().maxCoeff() == 0.0)
    return DarbouxFrame{Matrix::Identity(n, n), r};

  const Matrix V = svd.matrixV();
  const Matrix C = V.leftCols(rank2);        // complement of the kernel
  const Matrix K = V.rightCols(n - rank2);   // kernel of sigma
  const Matrix B = C.transpose() * M * C;    // nondegenerate on the complement

  // Pivoted symplectic elimination on B, in complement coordinates.
  std::vector<Vector> cand;
  cand.reserve(rank2);
  for (int i = 0; i < rank2; ++i) cand.push_back(Vector::Unit(rank2, i));
  std::vector<Vector> es, fs;

  for (int step = 0; step < r; ++step) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < cand.size(); ++i)
      for (std::size_t j = i + 1; j < cand.size(); ++j) {
        const double val = std::abs(cand[i].dot(B * cand[j]));
        if (val > best) { best = val; bi = i; bj = j; }
      }
    Vector u = cand[bi];
    Vector v = cand[bj] / u.dot(B * cand[bj]);  // sigma(u, v) = 1
    std::vector<Vector> next;
    next.reserve(cand.size() - 2);
    for (std::size_t k = 0; k < cand.size(); ++k) {
      if (k == bi || k == bj) continue;
      const Vector& w = cand[k];
      next.push_back(w - w.dot(B * v) * u + w.dot(B * u) * v);
    }
    es.push_back(u);
    fs.push_back(v);
    cand.swap(next);
  }

  Matrix D(n, n);
  for (int i = 0; i < r; ++i) D.col(i) = C * es[i];
  for (int i = 0; i < r; ++i) D.col(r + i) = C * fs[i];
  if (n > rank2) D.rightCols(n - rank2) = K;
  return DarbouxFrame{std::move(D), r};
}

// ============================================================
// kernel / complement / annihilator split
// ============================================================

inline KernelSplit kernel_split(const Bivector& sigma, const DarbouxFrame& frame) {
  const int n = sigma.n();
  const int r = frame.r;
  KernelSplit split;
  split.r = r;
  split.complement_basis = frame.basis.leftCols(2 * r);
  split.kernel_basis = frame.basis.rightCols(n - 2 * r);
  split.sigma_prime =
      split.complement_basis.transpose() * sigma.matrix * split.complement_basis;

  if (n == 2 * r) {
    split.annihilator_basis = Matrix::Identity(n, n);
  } else {
    // (ker sigma)^perp in V = Euclidean orthocomplement of the kernel columns.
    Eigen::JacobiSVD<Matrix> svd(split.kernel_basis, Eigen::ComputeFullU);
    split.annihilator_basis = svd.matrixU().rightCols(2 * r);
  }
  return split;
}

inline KernelSplit kernel_split(const Bivector& sigma) {
  return kernel_split(sigma, darboux_frame(sigma));
}

// ============================================================
// Pfaffian
// ============================================================

namespace detail {

inline double pfaffian_impl(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  if (n == 2) return a(0, 1);
  double acc = 0.0;
  double sign = 1.0;  // (-1)^j for j = 2..n in 1-based indexing
  for (int j = 1; j < n; ++j) {
    if (a(0, j) != 0.0) {
      Matrix sub(n - 2, n - 2);
      int rr = 0;
      for (int p = 1; p < n; ++p) {
        if (p == j) continue;
        int cc = 0;
        for (int q = 1; q < n; ++q) {
          if (q == j) continue;
          sub(rr, cc++) = a(p, q);
        }
        ++rr;
      }
      acc += sign * a(0, j) * pfaffian_impl(sub);
    }
    sign = -sign;
  }
  return acc;
}

}  // namespace detail

// Standard combinatorial convention: pfaffian([[0,1],[-1,0]]) = +1.
inline double pfaffian(const Bivector& sigma) {
  require_antisymmetric(sigma.matrix, "pfaffian");
  return detail::pfaffian_impl(sigma.matrix);
}

}  // namespace weylmoyal
