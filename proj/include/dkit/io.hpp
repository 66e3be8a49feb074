#pragma once

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dkit/descent.hpp"
#include "dkit/graded.hpp"

namespace dkit {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// scalars, fields, matrices

inline Json field_to_json(FieldSpec f) {
  if (f.is_rationals()) return Json("Q");
  Json mod = Json::array();
  for (const auto& c : f.modulus()) mod.push_back(format_rational(c));
  return Json{{"kind", "quotient"}, {"modulus", mod}};
}

inline FieldSpec field_from_json(const Json& j) {
  if (j.is_string()) {
    require(j.get<std::string>() == "Q", errc::parse_error,
            "unknown field '" + j.get<std::string>() + "'");
    return FieldSpec::rationals();
  }
  require(j.is_object() && j.value("kind", "") == "quotient" && j.contains("modulus"),
          errc::parse_error, "field must be \"Q\" or {kind: quotient, modulus: [...]}");
  Poly mod;
  for (const auto& c : j.at("modulus")) mod.push_back(parse_rational(c.get<std::string>()));
  return FieldSpec::quotient(std::move(mod));
}

/// Elements over Q serialize as "p/q"; number-field elements as coefficient
/// lists ["c0", "c1", ...].
inline Json element_to_json(const FieldElement& e) {
  if (e.size() == 1) return Json(format_rational(e.coeff(0)));
  Json arr = Json::array();
  for (int i = 0; i < e.size(); ++i) arr.push_back(format_rational(e.coeff(i)));
  return arr;
}

inline FieldElement element_from_json(FieldSpec f, const Json& j) {
  if (j.is_string()) return FieldElement(f, parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return FieldElement(f, rational(j.get<long>()));
  require(j.is_array(), errc::parse_error, "field element must be a string or coefficient list");
  std::vector<Rational> coeffs;
  for (const auto& c : j) coeffs.push_back(parse_rational(c.get<std::string>()));
  return FieldElement::from_coeffs(f, std::move(coeffs));
}

inline Json matrix_to_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(element_to_json(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

inline ExactMatrix matrix_from_json(FieldSpec f, const Json& j) {
  if (j.is_array()) {  // bare array-of-arrays form
    const int r = static_cast<int>(j.size());
    const int c = r == 0 ? 0 : static_cast<int>(j.at(0).size());
    ExactMatrix m(r, c, f);
    for (int i = 0; i < r; ++i) {
      require(static_cast<int>(j.at(static_cast<size_t>(i)).size()) == c, errc::parse_error,
              "ragged matrix");
      for (int q = 0; q < c; ++q)
        m.at(i, q) = element_from_json(f, j.at(static_cast<size_t>(i)).at(static_cast<size_t>(q)));
    }
    return m;
  }
  require(j.is_object() && j.contains("entries"), errc::parse_error, "matrix must be an array or object");
  ExactMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>(), f);
  const Json& rows = j.at("entries");
  for (int i = 0; i < m.rows(); ++i)
    for (int q = 0; q < m.cols(); ++q)
      m.at(i, q) = element_from_json(f, rows.at(static_cast<size_t>(i)).at(static_cast<size_t>(q)));
  return m;
}

inline Json subspace_to_json(const LinearSubspace& s) {
  return Json{{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", matrix_to_json(s.basis())}};
}

// ---------------------------------------------------------------------------
// algebras and dimodules

inline Flavor flavor_from_string(const std::string& s) {
  if (s == "lie") return Flavor::lie;
  if (s == "associative") return Flavor::associative;
  if (s == "jordan") return Flavor::jordan;
  if (s == "generic") return Flavor::generic;
  fail(errc::parse_error, "unknown flavor '" + s + "'");
}

inline Json algebra_to_json(const Algebra& a) {
  Json structure = Json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      for (int l = 0; l < a.dim(); ++l) {
        const FieldElement& c = a.structure_coeff(i, j, l);
        if (!c.is_zero()) structure.push_back(Json::array({i, j, l, element_to_json(c)}));
      }
  return Json{{"field", field_to_json(a.field())},
              {"dim", a.dim()},
              {"basis", a.basis_names()},
              {"flavor", flavor_name(a.flavor())},
              {"structure", std::move(structure)}};
}

/// Structured algebra file: fields "field", "dim", "basis", "flavor",
/// "structure": [[i, j, l, c], ...]; unspecified constants are zero and
/// indices are 0-based.
inline Algebra algebra_from_json(const Json& j) {
  require(j.is_object() && j.contains("dim"), errc::parse_error, "algebra file needs a dim field");
  FieldSpec f = j.contains("field") ? field_from_json(j.at("field")) : FieldSpec::rationals();
  const int dim = j.at("dim").get<int>();
  std::vector<std::string> names;
  if (j.contains("basis")) names = j.at("basis").get<std::vector<std::string>>();
  Flavor flavor = flavor_from_string(j.value("flavor", "generic"));
  std::vector<StructureEntry> entries;
  for (const auto& e : j.value("structure", Json::array())) {
    require(e.is_array() && e.size() == 4, errc::parse_error,
            "structure entries are [i, j, l, coefficient]");
    entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                       element_from_json(f, e.at(3))});
  }
  return Algebra::create(f, dim, std::move(names), flavor, entries);
}

inline Json dimodule_to_json(const Dimodule& m) {
  const Algebra& a = m.algebra();
  Json left = Json::array(), right = Json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int x = 0; x < m.dim(); ++x)
      for (int b = 0; b < m.dim(); ++b) {
        const FieldElement& lc = m.left_coeff(i, x, b);
        if (!lc.is_zero()) left.push_back(Json::array({i, x, b, element_to_json(lc)}));
        const FieldElement& rc = m.right_coeff(x, i, b);
        if (!rc.is_zero()) right.push_back(Json::array({x, i, b, element_to_json(rc)}));
      }
  return Json{{"dim", m.dim()}, {"left", std::move(left)}, {"right", std::move(right)}};
}

inline Dimodule dimodule_from_json(const Algebra& a, const Json& j) {
  require(j.is_object() && j.contains("dim"), errc::parse_error, "dimodule file needs a dim field");
  FieldSpec f = a.field();
  const int dim = j.at("dim").get<int>();
  std::vector<ActionEntry> left, right;
  for (const auto& e : j.value("left", Json::array()))
    left.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                    element_from_json(f, e.at(3))});
  for (const auto& e : j.value("right", Json::array()))
    right.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>(),
                     element_from_json(f, e.at(3))});
  return Dimodule::create(a, dim, left, right);
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::parse_error, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(errc::parse_error, std::string("in ") + path + ": " + e.what());
  }
}

inline Algebra load_algebra_file(const std::string& path) { return algebra_from_json(load_json_file(path)); }

/// Catalog lookup with the DKIT_CATALOG_DIR fallback for user algebras.
inline Algebra resolve_algebra(const std::string& name) {
  try {
    return catalog_get(name);
  } catch (const Error& e) {
    if (e.code() != errc::unknown_name) throw;
    const char* dir = std::getenv("DKIT_CATALOG_DIR");
    if (dir != nullptr) {
      std::string path = std::string(dir) + "/" + name + ".json";
      if (std::ifstream(path).good()) return load_algebra_file(path);
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// run-spec files

struct LoopSpecFile {
  std::string base = "sl2";
  std::string automorphism = "id";
  int order = 1;
  int delta_lo = 0, delta_hi = 0;
  int window = 6;
};

inline LoopSpecFile loop_spec_from_json(const Json& j) {
  LoopSpecFile s;
  s.base = j.value("base", s.base);
  s.automorphism = j.value("automorphism", s.automorphism);
  s.order = j.value("order", s.order);
  if (j.contains("deltas")) {
    s.delta_lo = j.at("deltas").at(0).get<int>();
    s.delta_hi = j.at("deltas").at(1).get<int>();
  }
  s.window = j.value("window", s.window);
  return s;
}

/// Descent spec file: base algebra name, FieldSpec for S, Gamma matrices on
/// S, cocycle matrices on A_S; all entries "p/q".
inline DescentCase descent_case_from_json(const Json& j) {
  require(j.is_object() && j.contains("base") && j.contains("s") && j.contains("gamma") &&
              j.contains("cocycle"),
          errc::parse_error, "descent spec needs base, s, gamma, cocycle");
  Algebra a = resolve_algebra(j.at("base").get<std::string>());
  FieldSpec s = field_from_json(j.at("s"));
  FieldSpec q = FieldSpec::rationals();
  std::vector<ExactMatrix> gam, z;
  for (const auto& g : j.at("gamma")) gam.push_back(matrix_from_json(q, g));
  for (const auto& zz : j.at("cocycle")) z.push_back(matrix_from_json(q, zz));
  GaloisSetup setup = make_galois_setup(s, std::move(gam));
  return DescentCase{std::move(a), std::move(setup), Cocycle{std::move(z)}};
}

// ---------------------------------------------------------------------------
// reports

/// Output of the pointwise solver commands (der/cent/ider/h1/hh1).
struct SolverReport {
  std::string command;
  std::string algebra;
  std::string module;
  std::string over = "k";
  int dim = 0;
  int dim_inner = -1;  // -1: not computed
  int h1 = -1;
  LinearSubspace basis;

  friend bool operator==(const SolverReport&, const SolverReport&) = default;
};

inline Json report_to_json(const SolverReport& r) {
  Json j{{"command", r.command}, {"algebra", r.algebra},   {"module", r.module},
         {"over", r.over},       {"dim", r.dim},           {"dim_inner", r.dim_inner},
         {"h1", r.h1},           {"ambient", r.basis.ambient_dim()},
         {"field", field_to_json(r.basis.field())},        {"basis", matrix_to_json(r.basis.basis())}};
  return j;
}

inline SolverReport solver_report_from_json(const Json& j) {
  SolverReport r;
  r.command = j.at("command").get<std::string>();
  r.algebra = j.at("algebra").get<std::string>();
  r.module = j.at("module").get<std::string>();
  r.over = j.at("over").get<std::string>();
  r.dim = j.at("dim").get<int>();
  r.dim_inner = j.at("dim_inner").get<int>();
  r.h1 = j.at("h1").get<int>();
  FieldSpec f = field_from_json(j.at("field"));
  ExactMatrix basis = matrix_from_json(f, j.at("basis"));
  require(basis.cols() == j.at("ambient").get<int>(), errc::parse_error, "basis/ambient mismatch");
  r.basis = LinearSubspace::from_rows(basis);
  return r;
}

inline std::string render_text(const SolverReport& r) {
  std::ostringstream out;
  if (r.command == "der")
    out << "dim Der = " << r.dim;
  else if (r.command == "cent")
    out << "dim Cent = " << r.dim;
  else if (r.command == "ider")
    out << "dim IDer = " << r.dim;
  else
    out << "dim Der = " << r.dim;
  if (r.dim_inner >= 0 && r.command != "ider") out << "; dim IDer = " << r.dim_inner;
  if (r.h1 >= 0) out << (r.command == "hh1" ? "; HH1 = " : "; H1 = ") << r.h1;
  out << "\n";
  if (r.basis.dim() > 0) {
    out << "canonical basis (" << r.basis.dim() << " x " << r.basis.ambient_dim() << "):\n";
    for (int i = 0; i < r.basis.dim(); ++i) {
      out << "  [";
      for (int j = 0; j < r.basis.ambient_dim(); ++j) {
        if (j) out << ", ";
        const FieldElement& e = r.basis.basis().at(i, j);
        out << (e.size() == 1 ? format_rational(e.coeff(0)) : element_to_json(e).dump());
      }
      out << "]\n";
    }
  }
  return out.str();
}

/// Per-degree table produced by the loop command.
struct LoopRow {
  int delta = 0;
  int dim_b = 0;
  int raw_dim = 0;
  int restricted_dim = 0;
  int predicted = -1;
  bool stabilized = false;
  std::string status;

  friend bool operator==(const LoopRow&, const LoopRow&) = default;
};

struct LoopTableReport {
  std::string base, automorphism, kind;  // kind: "der" or "cent"
  int m = 1;
  int window = 0;
  std::vector<LoopRow> rows;

  bool inconclusive() const {
    for (const auto& r : rows)
      if (!r.stabilized) return true;
    return false;
  }

  friend bool operator==(const LoopTableReport&, const LoopTableReport&) = default;
};

inline Json report_to_json(const LoopTableReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"delta", row.delta},
                        {"dim_b", row.dim_b},
                        {"raw_dim", row.raw_dim},
                        {"restricted_dim", row.restricted_dim},
                        {"predicted", row.predicted},
                        {"stabilized", row.stabilized},
                        {"status", row.status}});
  return Json{{"base", r.base},     {"automorphism", r.automorphism}, {"kind", r.kind},
              {"m", r.m},           {"window", r.window},             {"rows", std::move(rows)}};
}

inline LoopTableReport loop_report_from_json(const Json& j) {
  LoopTableReport r;
  r.base = j.at("base").get<std::string>();
  r.automorphism = j.at("automorphism").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.m = j.at("m").get<int>();
  r.window = j.at("window").get<int>();
  for (const auto& row : j.at("rows"))
    r.rows.push_back(LoopRow{row.at("delta").get<int>(), row.at("dim_b").get<int>(),
                             row.at("raw_dim").get<int>(), row.at("restricted_dim").get<int>(),
                             row.at("predicted").get<int>(), row.at("stabilized").get<bool>(),
                             row.at("status").get<std::string>()});
  return r;
}

inline std::string render_text(const LoopTableReport& r) {
  std::ostringstream out;
  out << "loop " << r.base << " / " << r.automorphism << " (m = " << r.m << ", W = " << r.window
      << ", " << r.kind << ")\n";
  out << "delta | dim B_d | raw | central | predicted | status\n";
  for (const auto& row : r.rows) {
    auto num = [](int v) { return v < 0 ? std::string("-") : std::to_string(v); };
    char buf[96];
    std::snprintf(buf, sizeof buf, "%5d | %7d | %3d | %7s | %9s | %s\n", row.delta, row.dim_b,
                  row.raw_dim, num(row.restricted_dim).c_str(), num(row.predicted).c_str(),
                  row.status.c_str());
    out << buf;
  }
  return out.str();
}

inline Json report_to_json(const GradedVerifyReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"delta", row.delta},
                        {"dim_b", row.dim_b_delta},
                        {"raw_dim", row.raw_dim},
                        {"restricted_dim", row.restricted_dim},
                        {"predicted", row.predicted},
                        {"h1", row.h1},
                        {"cent_dim", row.cent_dim},
                        {"cent_predicted", row.cent_predicted},
                        {"dims_match", row.dims_match},
                        {"spanning_ok", row.spanning_ok},
                        {"identity_c_ok", row.identity_c_ok},
                        {"cent_ok", row.cent_ok},
                        {"stabilized", row.stabilized},
                        {"status", row.status == WindowStatus::ok ? "ok" : "inconclusive"}});
  return Json{{"m", r.m},
              {"window", r.W},
              {"deltas", Json::array({r.delta_lo, r.delta_hi})},
              {"assumptions", r.assumptions},
              {"rows", std::move(rows)},
              {"inconclusive", r.inconclusive},
              {"identities_passed", r.identities_passed},
              {"first_failure", r.first_failure}};
}

inline GradedVerifyReport graded_report_from_json(const Json& j) {
  GradedVerifyReport r;
  r.m = j.at("m").get<int>();
  r.W = j.at("window").get<int>();
  r.delta_lo = j.at("deltas").at(0).get<int>();
  r.delta_hi = j.at("deltas").at(1).get<int>();
  r.assumptions = j.at("assumptions").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    GradedDeltaRow d;
    d.delta = row.at("delta").get<int>();
    d.dim_b_delta = row.at("dim_b").get<int>();
    d.raw_dim = row.at("raw_dim").get<int>();
    d.restricted_dim = row.at("restricted_dim").get<int>();
    d.predicted = row.at("predicted").get<int>();
    d.h1 = row.at("h1").get<int>();
    d.cent_dim = row.at("cent_dim").get<int>();
    d.cent_predicted = row.at("cent_predicted").get<int>();
    d.dims_match = row.at("dims_match").get<bool>();
    d.spanning_ok = row.at("spanning_ok").get<bool>();
    d.identity_c_ok = row.at("identity_c_ok").get<bool>();
    d.cent_ok = row.at("cent_ok").get<bool>();
    d.stabilized = row.at("stabilized").get<bool>();
    d.status = row.at("status").get<std::string>() == "ok" ? WindowStatus::ok : WindowStatus::inconclusive;
    r.rows.push_back(d);
  }
  r.inconclusive = j.at("inconclusive").get<bool>();
  r.identities_passed = j.at("identities_passed").get<bool>();
  r.first_failure = j.at("first_failure").get<std::string>();
  return r;
}

inline std::string render_text(const GradedVerifyReport& r) {
  std::ostringstream out;
  out << "graded verification (m = " << r.m << ", W = " << r.W << ", deltas " << r.delta_lo
      << ".." << r.delta_hi << ")\n";
  for (const auto& note : r.assumptions) out << "  assumption: " << note << "\n";
  out << "delta | dim B_d | central | predicted | H1 | cent | checks | status\n";
  for (const auto& row : r.rows) {
    auto num = [](int v) { return v < 0 ? std::string("-") : std::to_string(v); };
    char buf[128];
    std::snprintf(buf, sizeof buf, "%5d | %7d | %7s | %9s | %2s | %4s | %s%s%s%s | %s\n",
                  row.delta, row.dim_b_delta, num(row.restricted_dim).c_str(),
                  num(row.predicted).c_str(), num(row.h1).c_str(), num(row.cent_dim).c_str(),
                  row.dims_match ? "D" : "-", row.spanning_ok ? "S" : "-",
                  row.identity_c_ok ? "I" : "-", row.cent_ok ? "C" : "-",
                  row.status == WindowStatus::ok ? "ok" : "inconclusive");
    out << buf;
  }
  if (r.all_passed())
    out << "verdict: PASS (window dims = predicted decomposition; explicit spanning set; "
           "double-restriction identity; centroid prediction)\n";
  else if (r.inconclusive)
    out << "verdict: INCONCLUSIVE (" << r.first_failure << "); raise the window W\n";
  else
    out << "verdict: FAIL (" << r.first_failure << ")\n";
  return out.str();
}

inline Json report_to_json(const FdVerifyReport& r) {
  return Json{{"dim_b", r.dim_b},
              {"b_perfect", r.b_perfect},
              {"b_central", r.b_central},
              {"dim_der_b", r.dim_der_b},
              {"dim_ider_b", r.dim_ider_b},
              {"hh1", r.hh1},
              {"dim_der_r_of_center", r.dim_der_r_of_center},
              {"dim_cent_b", r.dim_cent_b},
              {"collapse_ok", r.collapse_ok},
              {"pi_idempotent", r.pi_idempotent},
              {"pi_image_is_b", r.pi_image_is_b},
              {"pi_module_identities", r.pi_module_identities},
              {"rho_preserves_der", r.rho_preserves_der},
              {"rho_surjects_der", r.rho_surjects_der},
              {"rho_preserves_cent", r.rho_preserves_cent},
              {"rho_r_linear", r.rho_r_linear},
              {"dual_der", r.dual_der},
              {"dual_ider", r.dual_ider},
              {"dual_cent", r.dual_cent}};
}

inline FdVerifyReport fd_report_from_json(const Json& j) {
  FdVerifyReport r;
  r.dim_b = j.at("dim_b").get<int>();
  r.b_perfect = j.at("b_perfect").get<bool>();
  r.b_central = j.at("b_central").get<bool>();
  r.dim_der_b = j.at("dim_der_b").get<int>();
  r.dim_ider_b = j.at("dim_ider_b").get<int>();
  r.hh1 = j.at("hh1").get<int>();
  r.dim_der_r_of_center = j.at("dim_der_r_of_center").get<int>();
  r.dim_cent_b = j.at("dim_cent_b").get<int>();
  r.collapse_ok = j.at("collapse_ok").get<bool>();
  r.pi_idempotent = j.at("pi_idempotent").get<bool>();
  r.pi_image_is_b = j.at("pi_image_is_b").get<bool>();
  r.pi_module_identities = j.at("pi_module_identities").get<bool>();
  r.rho_preserves_der = j.at("rho_preserves_der").get<bool>();
  r.rho_surjects_der = j.at("rho_surjects_der").get<bool>();
  r.rho_preserves_cent = j.at("rho_preserves_cent").get<bool>();
  r.rho_r_linear = j.at("rho_r_linear").get<bool>();
  r.dual_der = j.at("dual_der").get<int>();
  r.dual_ider = j.at("dual_ider").get<int>();
  r.dual_cent = j.at("dual_cent").get<int>();
  return r;
}

inline std::string render_text(const FdVerifyReport& r) {
  std::ostringstream out;
  auto line = [&](const char* name, bool ok) { out << "  " << name << ": " << (ok ? "pass" : "FAIL") << "\n"; };
  out << "finite Galois descent report\n";
  out << "  dim B = " << r.dim_b << ", dim Der = " << r.dim_der_b << ", dim IDer = " << r.dim_ider_b
      << ", HH1 = " << r.hh1 << ", dim Cent = " << r.dim_cent_b
      << ", dim Der(Q, Z(B)) = " << r.dim_der_r_of_center << "\n";
  line("B perfect", r.b_perfect);
  line("B central", r.b_central);
  line("relative = absolute derivations (collapse over R = Q)", r.collapse_ok);
  line("pi idempotent", r.pi_idempotent);
  line("pi image = B", r.pi_image_is_b);
  line("pi module identities", r.pi_module_identities);
  line("rho preserves derivations", r.rho_preserves_der);
  line("rho onto Der(B)", r.rho_surjects_der);
  line("rho preserves centroids", r.rho_preserves_cent);
  line("rho R-linear on centroids", r.rho_r_linear);
  out << "  dual dimodule: dim Der = " << r.dual_der << ", dim IDer = " << r.dual_ider
      << ", dim Cent = " << r.dual_cent << "\n";
  out << "verdict: " << (r.passed() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace dkit
