#include <catch2/catch_amalgamated.hpp>

#include <weylmoyal/io_json.hpp>

#include "support/oracles.hpp"

using namespace weylmoyal;
using io::json;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("antisymmetric forms round-trip through JSON") {
  const Bivector s = standard_form(4, 2);
  const json j = io::to_json(s);
  REQUIRE(j["n"] == 4);
  const Bivector back = io::bivector_from_json(j);
  REQUIRE((back.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);

  json no_n = j;
  no_n.erase("n");
  REQUIRE_THROWS_WITH(io::bivector_from_json(no_n), ContainsSubstring("missing field 'n'"));

  json no_matrix = j;
  no_matrix.erase("matrix");
  REQUIRE_THROWS_WITH(io::bivector_from_json(no_matrix),
                      ContainsSubstring("missing field 'matrix'"));

  json wrong_size = j;
  wrong_size["n"] = 3;
  REQUIRE_THROWS_WITH(io::bivector_from_json(wrong_size), ContainsSubstring("'matrix'"));

  const json not_antisym{{"n", 2}, {"matrix", {{0.0, 1.0}, {1.0, 0.0}}}};
  REQUIRE_THROWS_WITH(io::bivector_from_json(not_antisym), ContainsSubstring("form.matrix"));

  const json bad_entry{{"n", 2}, {"matrix", {{0.0, "x"}, {-1.0, 0.0}}}};
  REQUIRE_THROWS_WITH(io::bivector_from_json(bad_entry),
                      ContainsSubstring("entry 1 not a number"));
}

TEST_CASE("frames round-trip through JSON") {
  const DarbouxFrame f = darboux_frame(standard_form(4, 2));
  const DarbouxFrame back = io::frame_from_json(io::to_json(f));
  REQUIRE(back.r == f.r);
  REQUIRE((back.basis - f.basis).cwiseAbs().maxCoeff() == 0.0);

  json bad = io::to_json(f);
  bad["r"] = 3;  // 2r exceeds the basis size
  REQUIRE_THROWS_WITH(io::frame_from_json(bad), ContainsSubstring("'r' out of range"));
}

TEST_CASE("lattices round-trip through JSON") {
  const LatticeSpec lat{2, 16, 8.5};
  const LatticeSpec back = io::lattice_from_json(io::to_json(lat));
  REQUIRE(back == lat);

  json j = io::to_json(lat);
  j["n"] = 0;
  REQUIRE_THROWS_WITH(io::lattice_from_json(j), ContainsSubstring("'n' must be positive"));
  j["n"] = 2.5;
  REQUIRE_THROWS_WITH(io::lattice_from_json(j), ContainsSubstring("'n' must be an integer"));
  j["n"] = 2;
  j["points_per_axis"] = 1;
  REQUIRE_THROWS_WITH(io::lattice_from_json(j), ContainsSubstring("'points_per_axis'"));
  j["points_per_axis"] = 16;
  j["box_length"] = -1.0;
  REQUIRE_THROWS_WITH(io::lattice_from_json(j), ContainsSubstring("'box_length'"));
}

TEST_CASE("phase-space functions round-trip through JSON") {
  const LatticeSpec lat{2, 8, 5.0};
  const PhaseSpaceFunction f = random_function(lat, 99);
  const PhaseSpaceFunction back = io::function_from_json(io::to_json(f));
  REQUIRE(back.lattice == lat);
  REQUIRE(oracles::max_abs_diff(back.values, f.values) == 0.0);
  REQUIRE(oracles::max_abs_diff(back.dual_values, f.dual_values) == 0.0);

  SECTION("generator form produces the same samples as the library call") {
    Vector c(2), w(2), p(2);
    c << 2.5, 2.0;
    w << 0.8, 1.1;
    p << 0.3, -0.4;
    const json j{{"lattice", io::to_json(lat)},
                 {"type", "gaussian"},
                 {"center", io::detail::vector_to(c)},
                 {"width", io::detail::vector_to(w)},
                 {"momentum", io::detail::vector_to(p)}};
    const PhaseSpaceFunction g = io::function_from_json(j);
    REQUIRE(oracles::max_abs_diff(g.values, gaussian(lat, c, w, p).values) == 0.0);

    json bad = j;
    bad["width"] = io::detail::vector_to(Vector::Zero(2));
    REQUIRE_THROWS_WITH(io::function_from_json(bad),
                        ContainsSubstring("'width' must be positive"));
    bad = j;
    bad["type"] = "lorentzian";
    REQUIRE_THROWS_WITH(io::function_from_json(bad), ContainsSubstring("'type'"));
    bad = j;
    bad["center"] = io::detail::vector_to(Vector::Zero(3));
    REQUIRE_THROWS_WITH(io::function_from_json(bad), ContainsSubstring("length n"));
  }

  SECTION("sampled form validation") {
    json j = io::to_json(f);
    j["re"].erase(5);
    REQUIRE_THROWS_WITH(io::function_from_json(j), ContainsSubstring("equal length"));

    json short_doc{{"lattice", io::to_json(lat)},
                   {"re", json::array({1.0, 2.0})},
                   {"im", json::array({0.0, 0.0})}};
    REQUIRE_THROWS_WITH(io::function_from_json(short_doc), ContainsSubstring("64 samples"));

    json bad_sample = io::to_json(f);
    bad_sample["im"][3] = "oops";
    REQUIRE_THROWS_WITH(io::function_from_json(bad_sample),
                        ContainsSubstring("sample 3 not a number"));
  }
}

TEST_CASE("operators round-trip through JSON") {
  const FiniteWeylSystem sys = finite_weyl_system(4, 1);
  const WeylOperator A = weyl_quantize(sys, random_function(model_lattice(sys), 5));
  const WeylOperator back = io::operator_from_json(io::to_json(A));
  REQUIRE((back.matrix - A.matrix).cwiseAbs().maxCoeff() == 0.0);

  json j = io::to_json(A);
  j["size"] = 3;
  REQUIRE_THROWS_WITH(io::operator_from_json(j), ContainsSubstring("size x size"));
  j = io::to_json(A);
  j.erase("im");
  REQUIRE_THROWS_WITH(io::operator_from_json(j), ContainsSubstring("missing field 'im'"));
}

TEST_CASE("systems round-trip through JSON") {
  const FiniteWeylSystem sys = finite_weyl_system(5, 1, 2);
  const json j = io::to_json(sys);
  REQUIRE(j == json{{"N", 5}, {"r", 1}, {"kernel_dim", 2}});
  const FiniteWeylSystem back = io::system_from_json(j);
  REQUIRE(back.N == 5);
  REQUIRE(back.r == 1);
  REQUIRE(back.kernel_dim == 2);

  json bad = j;
  bad["N"] = 1;
  REQUIRE_THROWS_WITH(io::system_from_json(bad), ContainsSubstring("'N' must be >= 2"));
  bad = j;
  bad["r"] = -1;
  REQUIRE_THROWS_WITH(io::system_from_json(bad), ContainsSubstring("'r'"));
}

TEST_CASE("bundles round-trip through JSON") {
  Vector p0(1), p1(1);
  p0 << 0.0;
  p1 << 3.0;
  const PoissonBundleSample bundle =
      make_bundle(make_base({p0, p1}, {false, true}), 2,
                  {standard_form(2, 1), standard_form(2, 0)});
  const json j = io::to_json(bundle);
  const PoissonBundleSample back = io::bundle_from_json(j);
  REQUIRE(same_base(back.base, bundle.base));
  REQUIRE(back.fiber_dim == 2);
  for (int i = 0; i < 2; ++i)
    REQUIRE((back.sigma_field[i].matrix - bundle.sigma_field[i].matrix).cwiseAbs().maxCoeff() ==
            0.0);

  json bad = j;
  bad["base"]["points"][1].erase("coords");
  REQUIRE_THROWS_WITH(io::bundle_from_json(bad),
                      ContainsSubstring("points[1]: missing field 'coords'"));
  bad = j;
  bad["base"]["points"][0]["at_infinity"] = 1;
  REQUIRE_THROWS_WITH(io::bundle_from_json(bad),
                      ContainsSubstring("'at_infinity' must be a boolean"));
  bad = j;
  bad["sigma_field"].erase(1);
  REQUIRE_THROWS_WITH(io::bundle_from_json(bad),
                      ContainsSubstring("one matrix per base point"));
  bad = j;
  bad["sigma_field"][1] = io::detail::matrix_to(Matrix::Zero(3, 3));
  REQUIRE_THROWS_WITH(io::bundle_from_json(bad),
                      ContainsSubstring("sigma_field[1]: size differs from fiber_dim"));
}

TEST_CASE("sections round-trip through JSON") {
  Vector p0(1), p1(1);
  p0 << 0.0;
  p1 << 3.0;
  const PoissonBundleSample bundle =
      make_bundle(make_base({p0, p1}, {false, true}), 2,
                  {standard_form(2, 1), standard_form(2, 1)});
  const LatticeSpec lat{2, 6, 6.0};
  const PhaseSpaceFunction f = random_function(lat, 17);
  const PhaseSpaceFunction zero =
      PhaseSpaceFunction::from_values(lat, CVector::Zero(lat.total()));
  const SectionField phi = make_section(bundle, {f, zero});

  const json j = io::to_json_section(phi);
  const SectionField back = io::section_from_json(bundle, j);
  REQUIRE(oracles::max_abs_diff(back.values[0].values, f.values) == 0.0);
  REQUIRE(oracles::max_abs_diff(back.values[1].values, zero.values) == 0.0);

  json missing = j;
  missing.erase("1");
  REQUIRE_THROWS_WITH(io::section_from_json(bundle, missing),
                      ContainsSubstring("missing value for point 1"));
  json bad_key = j;
  bad_key["x"] = j["0"];
  REQUIRE_THROWS_WITH(io::section_from_json(bundle, bad_key),
                      ContainsSubstring("'x' is not a point index"));
  json out_of_range = j;
  out_of_range["7"] = j["0"];
  REQUIRE_THROWS_WITH(io::section_from_json(bundle, out_of_range),
                      ContainsSubstring("'7' exceeds the base size"));
}

TEST_CASE("orbit and leaf samples serialize") {
  const OrbitSample orbit = lorentz_orbit_sample({{0, 0.4, true}, {2, 1.0, false}}, true);
  const json oj = io::to_json(orbit);
  REQUIRE(oj["group_elements"].size() == 4);
  REQUIRE(oj["sigmas"].size() == 4);
  REQUIRE(oj["component"] == json::array({1, 1, -1, -1}));

  const LinearPoissonSample leaf = leaf_sample(1.25, 6);
  const LinearPoissonSample back = io::leaf_from_json(io::to_json(leaf));
  REQUIRE(back.points.size() == 6);
  for (std::size_t i = 0; i < back.points.size(); ++i) {
    REQUIRE((back.points[i] - leaf.points[i]).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((back.sigmas[i].matrix - leaf.sigmas[i].matrix).cwiseAbs().maxCoeff() == 0.0);
  }

  json bad = io::to_json(leaf);
  bad["sigmas"].erase(0);
  REQUIRE_THROWS_WITH(io::leaf_from_json(bad), ContainsSubstring("matching nonempty arrays"));
}
