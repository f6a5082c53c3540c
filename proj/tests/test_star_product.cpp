#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <weylmoyal/star_product.hpp>

#include "support/oracles.hpp"

using namespace weylmoyal;

namespace {

Bivector rotation_form(double c) {
  Matrix m(2, 2);
  m << 0, c, -c, 0;
  return Bivector(m);
}

PhaseSpaceFunction normalized(PhaseSpaceFunction f) {
  const double n = l1check_norm(f);
  f.values /= n;
  f.dual_values /= n;
  return f;
}

PhaseSpaceFunction outer_product(const LatticeSpec& full, const PhaseSpaceFunction& a,
                                 const PhaseSpaceFunction& b) {
  const int K = full.points_per_axis;
  CVector vals(full.total());
  for (std::ptrdiff_t s = 0; s < a.values.size(); ++s)
    for (int k = 0; k < K; ++k) vals(s * K + k) = a.values(s) * b.values(k);
  return PhaseSpaceFunction::from_values(full, std::move(vals));
}

}  // namespace

TEST_CASE("vanishing form degenerates to the pointwise product") {
  // one axis (every antisymmetric 1x1 form is zero)
  const LatticeSpec line{1, 64, 16.0};
  const PhaseSpaceFunction f1 = random_function(line, 21);
  const PhaseSpaceFunction g1 = random_function(line, 22);
  const PhaseSpaceFunction h1 = star(f1, g1, Bivector(Matrix::Zero(1, 1)));
  REQUIRE(oracles::max_abs_diff(h1.values, f1.values.cwiseProduct(g1.values)) <= 1e-10);

  // two axes, both evaluation paths
  const LatticeSpec plane{2, 64, 16.0};
  const PhaseSpaceFunction f2 = random_function(plane, 23);
  const PhaseSpaceFunction g2 = random_function(plane, 24);
  const CVector expect = f2.values.cwiseProduct(g2.values);
  REQUIRE(oracles::max_abs_diff(star(f2, g2, rotation_form(0.0), StarPath::Blocked).values,
                                expect) <= 1e-10);
  REQUIRE(oracles::max_abs_diff(star(f2, g2, rotation_form(0.0), StarPath::Shear).values,
                                expect) <= 1e-10);
}

TEST_CASE("plane waves compose with the half-form phase") {
  const LatticeSpec lat{2, 8, 4.0};
  const Bivector sigma = rotation_form(1.0);
  IVector p(2), q(2);
  p << 1, 0;
  q << 0, 1;
  const PhaseSpaceFunction ep = character(lat, p);
  const PhaseSpaceFunction eq = character(lat, q);

  const double dxi = lat.dual_spacing();
  const Complex phase = std::polar(1.0, -0.5 * dxi * dxi);  // sigma(eta(p), eta(q)) = dxi^2
  IVector sum(2);
  sum << 1, 1;
  const CVector expect = phase * character(lat, sum).values;

  REQUIRE(oracles::max_abs_diff(star(ep, eq, sigma, StarPath::Blocked).values, expect) <= 1e-12);
  REQUIRE(oracles::max_abs_diff(star(ep, eq, sigma, StarPath::Shear).values, expect) <= 1e-12);
}

TEST_CASE("quantization turns the star product into the matrix product") {
  for (int N : {4, 5}) {
    const FiniteWeylSystem sys = finite_weyl_system(N, 1);
    const LatticeSpec lat = model_lattice(sys);
    const Bivector sigma = model_bivector(sys);
    std::mt19937_64 seeds(1000 + N);
    for (int trial = 0; trial < 10; ++trial) {
      const PhaseSpaceFunction f = normalized(random_function(lat, seeds()));
      const PhaseSpaceFunction g = normalized(random_function(lat, seeds()));
      const CMatrix product = weyl_quantize(sys, f).matrix * weyl_quantize(sys, g).matrix;
      for (StarPath path : {StarPath::Blocked, StarPath::Shear}) {
        const CMatrix quantized = weyl_quantize(sys, star(f, g, sigma, path)).matrix;
        REQUIRE((quantized - product).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("associativity on the finite model") {
  const FiniteWeylSystem sys = finite_weyl_system(5, 1);
  const LatticeSpec lat = model_lattice(sys);
  const Bivector sigma = model_bivector(sys);
  std::mt19937_64 seeds(31);
  for (int trial = 0; trial < 10; ++trial) {
    const PhaseSpaceFunction f = normalized(random_function(lat, seeds()));
    const PhaseSpaceFunction g = normalized(random_function(lat, seeds()));
    const PhaseSpaceFunction h = normalized(random_function(lat, seeds()));
    const PhaseSpaceFunction left = star(star(f, g, sigma), h, sigma);
    const PhaseSpaceFunction right = star(f, star(g, h, sigma), sigma);
    REQUIRE(oracles::max_abs_diff(left.values, right.values) <= 1e-10);
  }
}

TEST_CASE("pointwise conjugation reverses the product order") {
  // On a model form with a symmetric (odd) dual window the identity is exact
  // for arbitrary functions: the frequency-wrap phases are real there, and
  // every label has a mirror partner.
  const FiniteWeylSystem odd_sys = finite_weyl_system(9, 1);
  const LatticeSpec odd = model_lattice(odd_sys);
  const Bivector sigma = model_bivector(odd_sys);
  const PhaseSpaceFunction f = random_function(odd, 41);
  const PhaseSpaceFunction g = random_function(odd, 42);
  const PhaseSpaceFunction lhs = conj(star(f, g, sigma));
  const PhaseSpaceFunction rhs = star(conj(g), conj(f), sigma);
  REQUIRE(oracles::max_abs_diff(lhs.values, rhs.values) <= 1e-12);

  // even window: exact up to the unpaired edge labels, negligible for
  // functions whose dual mass decays well inside half the window
  const LatticeSpec lat{2, 48, 14.0};
  Vector c(2), w(2), p1(2), p2(2);
  c << 7.0, 7.0;
  w << 1.0, 1.0;
  p1 << 0.4, -0.2;
  p2 << -0.3, 0.4;
  const PhaseSpaceFunction a = gaussian(lat, c, w, p1);
  const PhaseSpaceFunction b = gaussian(lat, c, w, p2);
  REQUIRE(oracles::max_abs_diff(conj(star(a, b, sigma)).values,
                                star(conj(b), conj(a), sigma).values) <= 1e-10);
}

TEST_CASE("both evaluation paths compute the same twisted convolution") {
  const LatticeSpec lat{2, 12, 7.0};
  const Bivector sigma = rotation_form(0.53);
  std::mt19937_64 seeds(7);
  for (int trial = 0; trial < 5; ++trial) {
    const PhaseSpaceFunction f = random_function(lat, seeds());
    const PhaseSpaceFunction g = random_function(lat, seeds());
    const PhaseSpaceFunction blocked = star(f, g, sigma, StarPath::Blocked);
    const PhaseSpaceFunction shear = star(f, g, sigma, StarPath::Shear);
    REQUIRE(oracles::max_abs_diff(blocked.values, shear.values) <= 1e-12);
  }
}

TEST_CASE("star of decaying functions matches the literal double sum") {
  // sized so that both the primal mass at the box edge and the dual mass at
  // HALF the window (where a pair of frequencies can fold) sit below 1e-11
  const LatticeSpec lat{2, 48, 14.0};
  const Bivector sigma = rotation_form(1.0);
  Vector c1(2), c2(2), w(2), p1(2), p2(2);
  c1 << 6.75, 7.0;
  c2 << 7.25, 7.0;
  w << 0.95, 0.95;
  p1 << 0.3, 0.0;
  p2 << 0.0, -0.3;
  const PhaseSpaceFunction f = gaussian(lat, c1, w, p1);
  const PhaseSpaceFunction g = gaussian(lat, c2, w, p2);

  const CVector expect =
      oracles::star_values_nofold(lat, f.dual_values, g.dual_values, sigma.matrix);
  REQUIRE(oracles::max_abs_diff(star(f, g, sigma, StarPath::Shear).values, expect) <= 1e-9);
  REQUIRE(oracles::max_abs_diff(star(f, g, sigma, StarPath::Blocked).values, expect) <= 1e-9);
}

TEST_CASE("kernel factorization agrees with the full product") {
  const Bivector sigma(standard_form(3, 1));
  const KernelSplit split = kernel_split(sigma);
  const LatticeSpec lat{3, 6, 6.0};
  std::mt19937_64 seeds(63);
  for (int trial = 0; trial < 5; ++trial) {
    const PhaseSpaceFunction f = random_function(lat, seeds());
    const PhaseSpaceFunction g = random_function(lat, seeds());
    const PhaseSpaceFunction full = star(f, g, sigma);
    const PhaseSpaceFunction split_path = star_degenerate_factor(f, g, split);
    REQUIRE(oracles::max_abs_diff(full.values, split_path.values) <= 1e-9);
  }

  // nondegenerate split short-circuits to the plain product
  const KernelSplit flat = kernel_split(standard_form(2, 1));
  const LatticeSpec lat2{2, 8, 6.0};
  const PhaseSpaceFunction u = random_function(lat2, 11);
  const PhaseSpaceFunction v = random_function(lat2, 12);
  REQUIRE(oracles::max_abs_diff(star_degenerate_factor(u, v, flat).values,
                                star(u, v, standard_form(2, 1)).values) <= 1e-12);
}

TEST_CASE("separable inputs factorize across the kernel split") {
  const Bivector sigma(standard_form(3, 1));
  const KernelSplit split = kernel_split(sigma);
  const LatticeSpec full{3, 6, 6.0};
  const LatticeSpec sympl{2, 6, 6.0};
  const LatticeSpec kern{1, 6, 6.0};

  const PhaseSpaceFunction a1 = random_function(sympl, 101);
  const PhaseSpaceFunction a2 = random_function(sympl, 102);
  const PhaseSpaceFunction b1 = random_function(kern, 103);
  const PhaseSpaceFunction b2 = random_function(kern, 104);

  const PhaseSpaceFunction f = outer_product(full, a1, b1);
  const PhaseSpaceFunction g = outer_product(full, a2, b2);

  // factorized reference: Moyal product on the symplectic pair, pointwise
  // product along the kernel direction
  const PhaseSpaceFunction a12 = star(a1, a2, standard_form(2, 1));
  const PhaseSpaceFunction b12 =
      PhaseSpaceFunction::from_values(kern, b1.values.cwiseProduct(b2.values));
  const PhaseSpaceFunction expect = outer_product(full, a12, b12);

  for (const PhaseSpaceFunction& result :
       {star(f, g, sigma), star_degenerate_factor(f, g, split)}) {
    REQUIRE(oracles::max_abs_diff(result.values, expect.values) <= 1e-10);
  }

  // functions of the kernel coordinate alone multiply pointwise
  const PhaseSpaceFunction ones = PhaseSpaceFunction::from_values(
      sympl, CVector::Ones(sympl.total()));
  const PhaseSpaceFunction kf = outer_product(full, ones, b1);
  const PhaseSpaceFunction kg = outer_product(full, ones, b2);
  REQUIRE(oracles::max_abs_diff(star(kf, kg, sigma).values,
                                kf.values.cwiseProduct(kg.values)) <= 1e-10);

  // functions of the symplectic coordinates alone reduce to the plain product
  const PhaseSpaceFunction kones =
      PhaseSpaceFunction::from_values(kern, CVector::Ones(kern.total()));
  const PhaseSpaceFunction sf = outer_product(full, a1, kones);
  const PhaseSpaceFunction sg = outer_product(full, a2, kones);
  REQUIRE(oracles::max_abs_diff(star(sf, sg, sigma).values,
                                outer_product(full, a12, kones).values) <= 1e-10);
}

TEST_CASE("norm chain and Banach inequality") {
  const FiniteWeylSystem sys = finite_weyl_system(5, 1);
  const LatticeSpec lat = model_lattice(sys);
  const Bivector sigma = model_bivector(sys);
  std::mt19937_64 seeds(404);
  for (int trial = 0; trial < 10; ++trial) {
    const PhaseSpaceFunction f = random_function(lat, seeds());
    const PhaseSpaceFunction g = random_function(lat, seeds());
    REQUIRE(sup_norm(f) <= l1check_norm(f) + 1e-12);
    REQUIRE(cstar_norm_estimate(f, sys) <= l1check_norm(f) + 1e-12);
    REQUIRE(l1check_norm(star(f, g, sigma)) <= l1check_norm(f) * l1check_norm(g) + 1e-10);
  }

  const PhaseSpaceFunction one = PhaseSpaceFunction::from_values(lat, CVector::Ones(lat.total()));
  REQUIRE(cstar_norm_estimate(one, sys) == Catch::Approx(1.0).margin(1e-12));
  IVector m(2);
  m << 1, -2;
  REQUIRE(cstar_norm_estimate(character(lat, m), sys) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("operator norm of a conjugated square obeys the C* identity") {
  const FiniteWeylSystem sys = finite_weyl_system(5, 1);
  const LatticeSpec lat = model_lattice(sys);
  const Bivector sigma = model_bivector(sys);
  std::mt19937_64 seeds(505);
  for (int trial = 0; trial < 5; ++trial) {
    const PhaseSpaceFunction f = random_function(lat, seeds());
    const double direct = cstar_norm_estimate(f, sys);
    const double squared = cstar_norm_estimate(star(conj(f), f, sigma), sys);
    REQUIRE(squared == Catch::Approx(direct * direct).margin(1e-9));
  }
}

TEST_CASE("operand checks") {
  const LatticeSpec lat{2, 8, 4.0};
  const PhaseSpaceFunction f = random_function(lat, 1);
  REQUIRE_THROWS_AS(star(f, random_function(LatticeSpec{2, 8, 5.0}, 2), rotation_form(1.0)),
                    LatticeMismatch);
  REQUIRE_THROWS_AS(star(f, f, Bivector(Matrix::Zero(3, 3))), DimensionMismatch);
  Matrix bad(2, 2);
  bad << 0, 1, 1, 0;
  Bivector sneaky;
  sneaky.matrix = bad;
  REQUIRE_THROWS_AS(star(f, f, sneaky), NonAntisymmetric);

  const LatticeSpec cube{3, 4, 4.0};
  const PhaseSpaceFunction h = random_function(cube, 3);
  REQUIRE_THROWS_AS(star(h, h, Bivector(Matrix::Zero(3, 3)), StarPath::Shear),
                    DimensionMismatch);
}
