#pragma once

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace weylmoyal {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using IVector = Eigen::VectorXi;

inline constexpr double pi = 3.14159265358979323846;

// ============================================================
// errors
// ============================================================

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonAntisymmetric : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct RankTooLarge : Error { using Error::Error; };
struct OffLattice : Error { using Error::Error; };
struct LatticeMismatch : Error { using Error::Error; };
struct NotAWeylSystem : Error { using Error::Error; };
struct UnknownPoint : Error { using Error::Error; };
struct BaseMismatch : Error { using Error::Error; };
struct SystemMismatch : Error { using Error::Error; };
struct Degenerate : Error { using Error::Error; };
struct NotLorentz : Error { using Error::Error; };
struct BadInput : Error { using Error::Error; };

// ============================================================
// threading
// ============================================================

// Thread cap from WEYLMOYAL_THREADS; defaults to 1 (sequential).
inline int max_threads() {
  const char* env = std::getenv("WEYLMOYAL_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  if (v < 1) return 1;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw > 0 && v > static_cast<int>(hw)) v = static_cast<int>(hw);
  return v;
}

// Runs fn(i) for i in [0, count). Chunks are disjoint, so results are
// deterministic as long as fn writes only to slot i.
template <typename Fn>
void parallel_for_index(std::ptrdiff_t count, Fn&& fn) {
  const int threads = max_threads();
  if (threads <= 1 || count < 2 * threads) {
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::ptrdiff_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::ptrdiff_t lo = t * chunk;
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace weylmoyal
