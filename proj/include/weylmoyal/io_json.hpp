#pragma once

// JSON round trips for the library's value types.  Parsing errors throw
// BadInput naming the offending field.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bivector.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "orbits.hpp"
#include "sections.hpp"
#include "weyl_system.hpp"

namespace weylmoyal {
namespace io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* name, const std::string& ctx) {
  if (!j.is_object()) throw BadInput(ctx + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw BadInput(ctx + ": missing field '" + name + "'");
  return *it;
}

inline int int_field(const json& j, const char* name, const std::string& ctx) {
  const json& v = field(j, name, ctx);
  if (!v.is_number_integer()) throw BadInput(ctx + ": field '" + name + "' must be an integer");
  return v.get<int>();
}

inline double number_field(const json& j, const char* name, const std::string& ctx) {
  const json& v = field(j, name, ctx);
  if (!v.is_number()) throw BadInput(ctx + ": field '" + name + "' must be a number");
  return v.get<double>();
}

inline Vector vector_from(const json& v, const std::string& where) {
  if (!v.is_array()) throw BadInput(where + ": expected an array of numbers");
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw BadInput(where + ": entry " + std::to_string(i) + " not a number");
    out(i) = v[i].get<double>();
  }
  return out;
}

inline Matrix matrix_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw BadInput(where + ": expected a nonempty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t i = 0; i < rows; ++i) {
    const Vector row = vector_from(v[i], where + " row " + std::to_string(i));
    if (i == 0) {
      cols = static_cast<std::size_t>(row.size());
      out.resize(rows, cols);
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw BadInput(where + ": rows have different lengths");
    }
    out.row(i) = row.transpose();
  }
  return out;
}

inline json vector_to(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_to(m.row(i).transpose()));
  return rows;
}

}  // namespace detail

// ---------- antisymmetric forms and frames ----------

inline json to_json(const Bivector& b) {
  return json{{"n", b.n()}, {"matrix", detail::matrix_to(b.matrix)}};
}

inline Bivector bivector_from_json(const json& j) {
  const std::string ctx = "form";
  const int n = detail::int_field(j, "n", ctx);
  Matrix m = detail::matrix_from(detail::field(j, "matrix", ctx), ctx + ".matrix");
  if (m.rows() != n || m.cols() != n)
    throw BadInput(ctx + ": field 'matrix' must be " + std::to_string(n) + "x" +
                   std::to_string(n));
  require_antisymmetric(m, "form.matrix");
  return Bivector(std::move(m));
}

inline json to_json(const DarbouxFrame& f) {
  return json{{"r", f.r}, {"basis", detail::matrix_to(f.basis)}};
}

inline DarbouxFrame frame_from_json(const json& j) {
  const std::string ctx = "frame";
  DarbouxFrame f;
  f.r = detail::int_field(j, "r", ctx);
  f.basis = detail::matrix_from(detail::field(j, "basis", ctx), ctx + ".basis");
  if (f.r < 0 || 2 * f.r > f.basis.rows()) throw BadInput(ctx + ": field 'r' out of range");
  return f;
}

// ---------- lattices and phase-space functions ----------

inline json to_json(const LatticeSpec& lat) {
  return json{{"n", lat.n},
              {"points_per_axis", lat.points_per_axis},
              {"box_length", lat.box_length}};
}

inline LatticeSpec lattice_from_json(const json& j) {
  const std::string ctx = "lattice";
  LatticeSpec lat;
  lat.n = detail::int_field(j, "n", ctx);
  lat.points_per_axis = detail::int_field(j, "points_per_axis", ctx);
  lat.box_length = detail::number_field(j, "box_length", ctx);
  if (lat.n < 1) throw BadInput(ctx + ": field 'n' must be positive");
  if (lat.points_per_axis < 2) throw BadInput(ctx + ": field 'points_per_axis' must be >= 2");
  if (lat.box_length <= 0.0) throw BadInput(ctx + ": field 'box_length' must be positive");
  return lat;
}

inline json to_json(const PhaseSpaceFunction& f) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    re.push_back(f.values(i).real());
    im.push_back(f.values(i).imag());
  }
  return json{{"lattice", to_json(f.lattice)}, {"re", re}, {"im", im}};
}

// Accepts either sampled form {"lattice", "re", "im"} or the generator form
// {"lattice", "type": "gaussian", "center", "width", "momentum"}.
inline PhaseSpaceFunction function_from_json(const json& j) {
  const std::string ctx = "function";
  const LatticeSpec lat = lattice_from_json(detail::field(j, "lattice", ctx));
  if (j.contains("type")) {
    const json& t = j["type"];
    if (!t.is_string() || t.get<std::string>() != "gaussian")
      throw BadInput(ctx + ": field 'type' must be the string \"gaussian\"");
    const Vector center = detail::vector_from(detail::field(j, "center", ctx), ctx + ".center");
    const Vector width = detail::vector_from(detail::field(j, "width", ctx), ctx + ".width");
    const Vector momentum =
        detail::vector_from(detail::field(j, "momentum", ctx), ctx + ".momentum");
    if (center.size() != lat.n || width.size() != lat.n || momentum.size() != lat.n)
      throw BadInput(ctx + ": fields 'center'/'width'/'momentum' must have length n");
    if ((width.array() <= 0.0).any()) throw BadInput(ctx + ": field 'width' must be positive");
    return gaussian(lat, center, width, momentum);
  }
  const json& re = detail::field(j, "re", ctx);
  const json& im = detail::field(j, "im", ctx);
  if (!re.is_array() || !im.is_array() || re.size() != im.size())
    throw BadInput(ctx + ": fields 're' and 'im' must be arrays of equal length");
  if (static_cast<std::ptrdiff_t>(re.size()) != lat.total())
    throw BadInput(ctx + ": fields 're'/'im' must hold " + std::to_string(lat.total()) +
                   " samples");
  CVector vals(lat.total());
  for (std::size_t i = 0; i < re.size(); ++i) {
    if (!re[i].is_number() || !im[i].is_number())
      throw BadInput(ctx + ": sample " + std::to_string(i) + " not a number");
    vals(static_cast<Eigen::Index>(i)) = Complex(re[i].get<double>(), im[i].get<double>());
  }
  return PhaseSpaceFunction::from_values(lat, std::move(vals));
}

// ---------- operators and systems ----------

inline json to_json(const WeylOperator& A) {
  const Eigen::Index d = A.matrix.rows();
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < d; ++i) {
    json rrow = json::array(), irow = json::array();
    for (Eigen::Index k = 0; k < d; ++k) {
      rrow.push_back(A.matrix(i, k).real());
      irow.push_back(A.matrix(i, k).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return json{{"size", d}, {"re", re}, {"im", im}};
}

inline WeylOperator operator_from_json(const json& j) {
  const std::string ctx = "operator";
  const int d = detail::int_field(j, "size", ctx);
  const Matrix re = detail::matrix_from(detail::field(j, "re", ctx), ctx + ".re");
  const Matrix im = detail::matrix_from(detail::field(j, "im", ctx), ctx + ".im");
  if (re.rows() != d || re.cols() != d || im.rows() != d || im.cols() != d)
    throw BadInput(ctx + ": fields 're'/'im' must be size x size matrices");
  WeylOperator A;
  A.matrix = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  return A;
}

inline json to_json(const FiniteWeylSystem& sys) {
  return json{{"N", sys.N}, {"r", sys.r}, {"kernel_dim", sys.kernel_dim}};
}

inline FiniteWeylSystem system_from_json(const json& j) {
  const std::string ctx = "system";
  const int N = detail::int_field(j, "N", ctx);
  const int r = detail::int_field(j, "r", ctx);
  const int kdim = detail::int_field(j, "kernel_dim", ctx);
  if (N < 2) throw BadInput(ctx + ": field 'N' must be >= 2");
  if (r < 0 || kdim < 0) throw BadInput(ctx + ": fields 'r' and 'kernel_dim' must be >= 0");
  return finite_weyl_system(N, r, kdim);
}

// ---------- bundles and sections ----------

inline json to_json(const PoissonBundleSample& bundle) {
  json pts = json::array();
  for (std::size_t i = 0; i < bundle.base.size(); ++i)
    pts.push_back(json{{"coords", detail::vector_to(bundle.base.points[i])},
                       {"at_infinity", bool(bundle.base.is_compactification_point[i])}});
  json sigmas = json::array();
  for (const Bivector& s : bundle.sigma_field) sigmas.push_back(detail::matrix_to(s.matrix));
  return json{{"base", json{{"points", pts}}},
              {"fiber_dim", bundle.fiber_dim},
              {"sigma_field", sigmas}};
}

inline PoissonBundleSample bundle_from_json(const json& j) {
  const std::string ctx = "bundle";
  const json& base = detail::field(j, "base", ctx);
  const json& pts = detail::field(base, "points", ctx + ".base");
  if (!pts.is_array() || pts.empty())
    throw BadInput(ctx + ".base: field 'points' must be a nonempty array");
  std::vector<Vector> coords;
  std::vector<bool> inf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pctx = ctx + ".base.points[" + std::to_string(i) + "]";
    coords.push_back(detail::vector_from(detail::field(pts[i], "coords", pctx), pctx + ".coords"));
    const json& flag = detail::field(pts[i], "at_infinity", pctx);
    if (!flag.is_boolean()) throw BadInput(pctx + ": field 'at_infinity' must be a boolean");
    inf.push_back(flag.get<bool>());
  }
  const int fiber_dim = detail::int_field(j, "fiber_dim", ctx);
  const json& sf = detail::field(j, "sigma_field", ctx);
  if (!sf.is_array() || sf.size() != pts.size())
    throw BadInput(ctx + ": field 'sigma_field' must hold one matrix per base point");
  std::vector<Bivector> sigmas;
  for (std::size_t i = 0; i < sf.size(); ++i) {
    Matrix m = detail::matrix_from(sf[i], ctx + ".sigma_field[" + std::to_string(i) + "]");
    if (m.rows() != fiber_dim)
      throw BadInput(ctx + ".sigma_field[" + std::to_string(i) + "]: size differs from fiber_dim");
    sigmas.push_back(Bivector(std::move(m)));
  }
  return make_bundle(make_base(std::move(coords), std::move(inf)), fiber_dim, std::move(sigmas));
}

// Sections are stored as a map from the base point index to a function doc.
inline json to_json_section(const SectionField& phi) {
  json out = json::object();
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    out[std::to_string(i)] = to_json(phi.values[i]);
  return out;
}

inline SectionField section_from_json(const PoissonBundleSample& bundle, const json& j,
                                      double decay_tolerance = 1e-8) {
  const std::string ctx = "section";
  if (!j.is_object()) throw BadInput(ctx + ": expected an object keyed by point index");
  std::vector<PhaseSpaceFunction> values(bundle.base.size());
  std::vector<bool> seen(bundle.base.size(), false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::size_t idx = 0;
    try {
      idx = static_cast<std::size_t>(std::stoul(it.key()));
    } catch (...) {
      throw BadInput(ctx + ": key '" + it.key() + "' is not a point index");
    }
    if (idx >= bundle.base.size())
      throw BadInput(ctx + ": key '" + it.key() + "' exceeds the base size");
    values[idx] = function_from_json(it.value());
    seen[idx] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw BadInput(ctx + ": missing value for point " + std::to_string(i));
  return make_section(bundle, std::move(values), decay_tolerance);
}

// ---------- orbit and leaf samples ----------

inline json to_json(const OrbitSample& orbit) {
  json elems = json::array(), sigmas = json::array(), comps = json::array();
  for (const Matrix& g : orbit.group_elements) elems.push_back(detail::matrix_to(g));
  for (const Bivector& s : orbit.sigmas) sigmas.push_back(detail::matrix_to(s.matrix));
  for (int c : orbit.component) comps.push_back(c);
  return json{{"group_elements", elems}, {"sigmas", sigmas}, {"component", comps}};
}

inline json to_json(const LinearPoissonSample& leaf) {
  json pts = json::array(), sigmas = json::array();
  for (const Vector& x : leaf.points) pts.push_back(detail::vector_to(x));
  for (const Bivector& s : leaf.sigmas) sigmas.push_back(detail::matrix_to(s.matrix));
  return json{{"points", pts}, {"sigmas", sigmas}};
}

inline LinearPoissonSample leaf_from_json(const json& j) {
  const std::string ctx = "leaf";
  const json& pts = detail::field(j, "points", ctx);
  const json& sigmas = detail::field(j, "sigmas", ctx);
  if (!pts.is_array() || !sigmas.is_array() || pts.size() != sigmas.size() || pts.empty())
    throw BadInput(ctx + ": fields 'points' and 'sigmas' must be matching nonempty arrays");
  LinearPoissonSample out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.points.push_back(detail::vector_from(pts[i], ctx + ".points[" + std::to_string(i) + "]"));
    out.sigmas.push_back(
        Bivector(detail::matrix_from(sigmas[i], ctx + ".sigmas[" + std::to_string(i) + "]")));
  }
  return out;
}

}  // namespace io
}  // namespace weylmoyal
