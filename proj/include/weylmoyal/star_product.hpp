#pragma once

// Weyl-Moyal star product as a twisted convolution on the dual lattice:
//
//   (f * g)ˇ(zeta) = dxi^n  sum_{p+q ~ zeta}  fˇ(p) gˇ(q) e^{-(i/2) sigma(eta(p),eta(q))} phi
//
// followed by Fourier synthesis.  The phase convention is the one forced by
// the quantization homomorphism W(f)W(g) = W(f*g): with the Weyl relation
// pi(p)pi(q) = e^{-(i/2)sigma(p,q)} pi(p+q), the inner phase must be taken on
// the two input frequencies.
//
// p + q ~ zeta means equality up to a dual-lattice period; phi is the wrap
// phase that identifies out-of-window frequencies with their folded images
// the same way the finite Weyl model does,
//
//   phi(zeta, t) = e^{(i/2) sigma(eta(zeta), P t)} * e^{(i/2) sum_{a<b} (Pt)_a (Pt)_b sigma_ab},
//
// where P = points_per_axis * dxi is the dual period and t the integer period
// shift.  On the model lattice of a FiniteWeylSystem this makes the
// homomorphism machine-exact; for sigma = 0 it reduces to the plain circular
// convolution (pointwise product); for functions whose dual coefficients decay
// below roundoff at the window edge the wrap terms are negligible anyway.
//
// Two evaluation paths compute the same sum: a blocked direct sum with
// precomputed per-axis-pair phase tables (any n), and a shear path for n = 2
// that does one FFT-accelerated linear convolution per fixed pair of
// second-axis frequencies.

#include <cmath>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "bivector.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "weyl_system.hpp"

namespace weylmoyal {

enum class StarPath { Auto, Blocked, Shear };

namespace detail {

// Wrap phase for output label vector mlab and period-shift vector t.
inline Complex wrap_phase(const Matrix& S, const double* mlab_phys, const int* t, int n,
                          double period) {
  double ang = 0.0;
  for (int b = 0; b < n; ++b) {
    if (t[b] == 0) continue;
    double row = 0.0;
    for (int a = 0; a < n; ++a) row += mlab_phys[a] * S(a, b);
    ang += row * period * t[b];
    for (int a = 0; a < b; ++a)
      if (t[a] != 0) ang += period * period * t[a] * t[b] * S(a, b);
  }
  ang *= 0.5;
  return Complex(std::cos(ang), std::sin(ang));
}

// Direct evaluation, one output at a time, parallel over outputs.
inline CVector twisted_convolution_blocked(const LatticeSpec& lat, const CVector& F,
                                           const CVector& G, const Matrix& S) {
  const int n = lat.n;
  const int K = lat.points_per_axis;
  const int wmin = lat.window_min();
  const int wmax = lat.window_max();
  const double dxi = lat.dual_spacing();
  const double period = K * dxi;
  const std::ptrdiff_t total = lat.total();

  struct PairTable {
    int a, b;
    CMatrix T;  // T(i,j) = e^{-(i/2) dxi^2 S(a,b) label(i) label(j)}
  };
  std::vector<PairTable> tables;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (S(a, b) == 0.0) continue;
      CMatrix T(K, K);
      const double c = 0.5 * dxi * dxi * S(a, b);
      for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
          const double ang = -c * (wmin + i) * (wmin + j);
          T(i, j) = Complex(std::cos(ang), std::sin(ang));
        }
      tables.push_back(PairTable{a, b, std::move(T)});
    }

  std::vector<std::ptrdiff_t> stride(n);
  std::ptrdiff_t s = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride[a] = s;
    s *= K;
  }

  int tpow = 1;
  for (int a = 0; a < n; ++a) tpow *= 3;

  CVector out(total);
  parallel_for_index(total, [&](std::ptrdiff_t oi) {
    std::vector<int> mi(n);
    lat.decode(oi, mi.data());
    std::vector<double> mphys(n);
    for (int a = 0; a < n; ++a) mphys[a] = dxi * (wmin + mi[a]);

    // per-axis fold of q = m - p: index and period shift as functions of p's index
    std::vector<int> qidx(static_cast<size_t>(n) * K), qshift(static_cast<size_t>(n) * K);
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < K; ++i) {
        int ql = mi[a] - i;  // label difference
        int c = 0;
        if (ql < wmin) {
          ql += K;
          c = 1;
        } else if (ql > wmax) {
          ql -= K;
          c = -1;
        }
        qidx[static_cast<size_t>(a) * K + i] = ql - wmin;
        qshift[static_cast<size_t>(a) * K + i] = c;
      }

    // wrap phases for every period-shift combination, indexed base 3
    std::vector<Complex> phi(tpow);
    std::vector<int> t(n);
    for (int code = 0; code < tpow; ++code) {
      int rem = code;
      for (int a = 0; a < n; ++a) {
        t[a] = rem % 3 - 1;
        rem /= 3;
      }
      phi[code] = wrap_phase(S, mphys.data(), t.data(), n, period);
    }

    Complex acc(0.0, 0.0);
    std::vector<int> p(n, 0);
    for (std::ptrdiff_t pi = 0; pi < total; ++pi) {
      const Complex fv = F(pi);
      if (fv != Complex(0.0, 0.0)) {
        std::ptrdiff_t qflat = 0;
        int code = 0;
        int pw = 1;
        for (int a = 0; a < n; ++a) {
          const size_t at = static_cast<size_t>(a) * K + p[a];
          qflat += qidx[at] * stride[a];
          code += (qshift[at] + 1) * pw;
          pw *= 3;
        }
        const Complex gv = G(qflat);
        if (gv != Complex(0.0, 0.0)) {
          Complex phase = phi[code];
          for (const PairTable& tab : tables)
            phase *= tab.T(p[tab.a], qidx[static_cast<size_t>(tab.b) * K + p[tab.b]]) *
                     std::conj(tab.T(p[tab.b], qidx[static_cast<size_t>(tab.a) * K + p[tab.a]]));
          acc += fv * gv * phase;
        }
      }
      for (int a = n - 1; a >= 0; --a) {  // odometer, axis 0 slowest
        if (++p[a] < K) break;
        p[a] = 0;
      }
    }
    out(oi) = acc * lat.dual_cell();
  });
  return out;
}

// n = 2 path: for each pair of second-axis frequencies the phase factorizes
// into modulations of the two operands, leaving an FFT linear convolution
// along the first axis.
inline CVector twisted_convolution_shear(const LatticeSpec& lat, const CVector& F,
                                         const CVector& G, double s12) {
  const int K = lat.points_per_axis;
  const int wmin = lat.window_min();
  const int wmax = lat.window_max();
  const double dxi = lat.dual_spacing();
  const double period = K * dxi;
  const double w = lat.dual_cell();

  CMatrix T(K, K);  // T(i,j) = e^{-(i/2) dxi^2 s12 label(i) label(j)}
  const double c = 0.5 * dxi * dxi * s12;
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      const double ang = -c * (wmin + i) * (wmin + j);
      T(i, j) = Complex(std::cos(ang), std::sin(ang));
    }

  // fold of the convolution output label Z = 2*wmin + z along axis 0
  const int nz = 2 * K - 1;
  std::vector<int> m0idx(nz), t0(nz);
  for (int z = 0; z < nz; ++z) {
    int Z = 2 * wmin + z;
    int c0 = 0;
    if (Z < wmin) {
      Z += K;
      c0 = 1;
    } else if (Z > wmax) {
      Z -= K;
      c0 = -1;
    }
    m0idx[z] = Z - wmin;
    t0[z] = -c0;  // p+q = folded + K*t
  }

  Eigen::FFT<double> fft;
  const int M = 2 * K;
  std::vector<Complex> a(M), b(M), fa(M), fb(M), conv(M);

  CVector out = CVector::Zero(lat.total());
  for (int p1 = 0; p1 < K; ++p1)
    for (int q1 = 0; q1 < K; ++q1) {
      int m1l = (wmin + p1) + (wmin + q1);
      int t1 = 0;  // p1 + q1 = folded + K * t1
      if (m1l < wmin) {
        m1l += K;
        t1 = -1;
      } else if (m1l > wmax) {
        m1l -= K;
        t1 = 1;
      }
      const int m1idx = m1l - wmin;
      bool any = false;
      for (int i = 0; i < K; ++i) {
        a[i] = F(static_cast<std::ptrdiff_t>(i) * K + p1) * T(i, q1);
        b[i] = G(static_cast<std::ptrdiff_t>(i) * K + q1) * std::conj(T(i, p1));
        if (a[i] != Complex(0.0, 0.0) || b[i] != Complex(0.0, 0.0)) any = true;
      }
      if (!any) continue;
      std::fill(a.begin() + K, a.end(), Complex(0.0, 0.0));
      std::fill(b.begin() + K, b.end(), Complex(0.0, 0.0));
      fft.fwd(fa, a);
      fft.fwd(fb, b);
      for (int i = 0; i < M; ++i) fa[i] *= fb[i];
      fft.inv(conv, fa);
      for (int z = 0; z < nz; ++z) {
        const int tt0 = t0[z];
        Complex phase(1.0, 0.0);
        if (tt0 != 0 || t1 != 0) {
          const double m0phys = dxi * (wmin + m0idx[z]);
          const double m1phys = dxi * m1l;
          const double ang = 0.5 * (period * s12 * (m0phys * t1 - m1phys * tt0) +
                                    period * period * s12 * tt0 * t1);
          phase = Complex(std::cos(ang), std::sin(ang));
        }
        out(static_cast<std::ptrdiff_t>(m0idx[z]) * K + m1idx) += w * conv[z] * phase;
      }
    }
  return out;
}

}  // namespace detail

inline PhaseSpaceFunction star(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g,
                               const Bivector& sigma, StarPath path = StarPath::Auto) {
  if (f.lattice != g.lattice) throw LatticeMismatch("star: operand lattices differ");
  const LatticeSpec& lat = f.lattice;
  if (sigma.n() != lat.n)
    throw DimensionMismatch("star: form dimension does not match the lattice dimension");
  require_antisymmetric(sigma.matrix, "star");
  StarPath chosen = path;
  if (chosen == StarPath::Auto) chosen = lat.n == 2 ? StarPath::Shear : StarPath::Blocked;
  if (chosen == StarPath::Shear && lat.n != 2)
    throw DimensionMismatch("star: the shear path needs a two-axis lattice");
  CVector dual =
      chosen == StarPath::Shear
          ? detail::twisted_convolution_shear(lat, f.dual_values, g.dual_values,
                                              sigma.matrix(0, 1))
          : detail::twisted_convolution_blocked(lat, f.dual_values, g.dual_values, sigma.matrix);
  return PhaseSpaceFunction::from_dual(lat, std::move(dual));
}

// Star product through the kernel/symplectic factorization: pointwise product
// along kernel coordinates, Moyal product with the restricted form along the
// symplectic ones.  Requires the lattice axes to be ordered
// [2r symplectic | kernel] in the coordinates the split was computed in.
inline PhaseSpaceFunction star_degenerate_factor(const PhaseSpaceFunction& f,
                                                 const PhaseSpaceFunction& g,
                                                 const KernelSplit& split) {
  if (f.lattice != g.lattice)
    throw LatticeMismatch("star_degenerate_factor: operand lattices differ");
  const LatticeSpec& lat = f.lattice;
  if (split.n() != lat.n)
    throw DimensionMismatch("star_degenerate_factor: split dimension does not match the lattice");
  const int r2 = 2 * split.r;
  const int kdim = split.kernel_dim();
  const int K = lat.points_per_axis;

  if (kdim == 0) {
    CVector dual =
        detail::twisted_convolution_blocked(lat, f.dual_values, g.dual_values, split.sigma_prime);
    return PhaseSpaceFunction::from_dual(lat, std::move(dual));
  }

  // mixed representation: synthesize along the kernel axes only
  const CMatrix analysis = detail::axis_analysis_matrix(lat);
  const CMatrix synthesis = analysis.adjoint();
  const double dxi = lat.dual_spacing();
  const double kern_weight = std::pow(dxi, kdim);
  CVector Fmix = detail::transform_axes(lat, f.dual_values, synthesis, r2, lat.n) * kern_weight;
  CVector Gmix = detail::transform_axes(lat, g.dual_values, synthesis, r2, lat.n) * kern_weight;

  // per kernel point: twisted convolution of the symplectic slices
  LatticeSpec sub{r2, K, lat.box_length};
  std::ptrdiff_t ksize = 1;
  for (int a = 0; a < kdim; ++a) ksize *= K;
  const std::ptrdiff_t ssize = sub.total();
  CVector Hmix(lat.total());
  for (std::ptrdiff_t kp = 0; kp < ksize; ++kp) {
    CVector fs(ssize), gs(ssize);
    for (std::ptrdiff_t i = 0; i < ssize; ++i) {
      fs(i) = Fmix(i * ksize + kp);
      gs(i) = Gmix(i * ksize + kp);
    }
    const CVector hs = detail::twisted_convolution_blocked(sub, fs, gs, split.sigma_prime);
    for (std::ptrdiff_t i = 0; i < ssize; ++i) Hmix(i * ksize + kp) = hs(i);
  }

  // back to dual coefficients along the kernel axes
  const double back_weight = std::pow(lat.primal_spacing() / (2.0 * pi), kdim);
  CVector dual = detail::transform_axes(lat, std::move(Hmix), analysis, r2, lat.n) * back_weight;
  return PhaseSpaceFunction::from_dual(lat, std::move(dual));
}

// Operator norm of the Weyl quantization of f on the given finite model.
inline double cstar_norm_estimate(const PhaseSpaceFunction& f, const FiniteWeylSystem& sys) {
  return operator_norm(weyl_quantize(sys, f));
}

}  // namespace weylmoyal
