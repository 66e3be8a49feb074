#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "dkit/io.hpp"

using namespace dkit;

namespace {
FieldSpec Q = FieldSpec::rationals();

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/dkit_io_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}
}  // namespace

TEST_CASE("field spec round trip") {
  CHECK(field_from_json(field_to_json(Q)) == Q);
  FieldSpec gauss = FieldSpec::quotient({rational(1), rational(0), rational(1)});
  CHECK(field_from_json(field_to_json(gauss)) == gauss);
  CHECK_THROWS_AS(field_from_json(Json("R")), Error);
}

TEST_CASE("element and matrix round trip") {
  FieldSpec c3 = cyclotomic_field(3);
  FieldElement z = primitive_root_of_unity(c3, 3);
  FieldElement e = z * fe(c3, 3, 2) + fe(c3, 1, 7);
  CHECK(element_from_json(c3, element_to_json(e)) == e);

  ExactMatrix m(2, 2, c3);
  m.at(0, 0) = e;
  m.at(1, 0) = z;
  CHECK(matrix_from_json(c3, matrix_to_json(m)) == m);
  // rational entries serialize as bare "p/q" strings
  CHECK(element_to_json(fe(Q, -3, 2)) == Json("-3/2"));
}

TEST_CASE("algebra file round trip preserves the structure") {
  Algebra sl2 = catalog_get("sl2");
  Json j = algebra_to_json(sl2);
  Algebra back = algebra_from_json(j);
  CHECK(back == sl2);
  CHECK(back.flavor() == Flavor::lie);
  CHECK(back.basis_names() == sl2.basis_names());
}

TEST_CASE("algebra files validate on load") {
  // lie flavor with a non-antisymmetric table must be rejected
  std::string path = write_temp("bad_algebra.json", R"({
    "field": "Q", "dim": 2, "basis": ["x", "y"], "flavor": "lie",
    "structure": [[0, 0, 1, "1"]]
  })");
  try {
    (void)load_algebra_file(path);
    FAIL("expected ValidationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == errc::validation_failed);
  }
  CHECK_THROWS_AS(load_algebra_file("/tmp/dkit_io_does_not_exist.json"), Error);
  std::string garbled = write_temp("garbled.json", "{ not json");
  try {
    (void)load_algebra_file(garbled);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == errc::parse_error);
  }
}

TEST_CASE("dimodule file round trip") {
  Algebra sl2 = catalog_get("sl2");
  Dimodule v2 = catalog_module(sl2, "V2");
  Json j = dimodule_to_json(v2);
  Dimodule back = dimodule_from_json(sl2, j);
  CHECK(back.dim() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.left_op(i) == v2.left_op(i));
    CHECK(back.right_op(i) == v2.right_op(i));
  }
}

TEST_CASE("catalog directory fallback") {
  Algebra sl2 = catalog_get("sl2");
  std::string dir = "/tmp/dkit_io_catalog";
  std::system(("mkdir -p " + dir).c_str());
  {
    std::ofstream out(dir + "/mylie.json");
    out << algebra_to_json(sl2).dump();
  }
  setenv("DKIT_CATALOG_DIR", dir.c_str(), 1);
  Algebra resolved = resolve_algebra("mylie");
  CHECK(resolved == sl2);
  try {
    (void)resolve_algebra("not-there-at-all");
    FAIL("expected UnknownName");
  } catch (const Error& e) {
    CHECK(e.code() == errc::unknown_name);
  }
  unsetenv("DKIT_CATALOG_DIR");
}

TEST_CASE("solver report round trip") {
  Algebra sl2 = catalog_get("sl2");
  Dimodule adj = catalog_module(sl2, "adjoint");
  DerivationSpace d = der_space(sl2, adj);
  SolverReport rep{"der", "sl2", "adjoint", "k", d.dim(), 3, 0, d.space};
  SolverReport back = solver_report_from_json(report_to_json(rep));
  CHECK(back == rep);
  CHECK(render_text(rep).find("dim Der = 3; dim IDer = 3; H1 = 0") == 0);
}

TEST_CASE("loop table report round trip") {
  LoopTableReport rep;
  rep.base = "sl3";
  rep.automorphism = "diagram2";
  rep.kind = "der";
  rep.m = 2;
  rep.window = 8;
  rep.rows = {{0, 3, 4, 4, 4, true, "ok"}, {1, 5, 5, 5, 5, true, "ok"}};
  CHECK(loop_report_from_json(report_to_json(rep)) == rep);
  CHECK_FALSE(rep.inconclusive());
  rep.rows[1].stabilized = false;
  CHECK(rep.inconclusive());
}

TEST_CASE("graded verify report round trip") {
  auto entry = catalog_automorphism("sl2", "id");
  LoopAlgebra loop = loop_from_automorphism(entry.g, entry.sigma, 1);
  GradedVerifyReport rep = verify_main_theorem_graded(loop, 0, 1, 5);
  GradedVerifyReport back = graded_report_from_json(report_to_json(rep));
  CHECK(back == rep);
  CHECK(render_text(rep).find("verdict: PASS") != std::string::npos);
}

TEST_CASE("fd verify report round trip") {
  DescentCase c = descent_case("quaternion");
  FdVerifyReport rep = verify_main_theorem_fd(c.a, c.setup, c.z);
  FdVerifyReport back = fd_report_from_json(report_to_json(rep));
  CHECK(back == rep);
}

TEST_CASE("descent spec file loads and verifies") {
  DescentCase c = descent_case("quaternion");
  Json spec{{"base", "m2"},
            {"s", field_to_json(c.setup.s_field)},
            {"gamma", Json::array()},
            {"cocycle", Json::array()}};
  for (const auto& g : c.setup.gamma) spec["gamma"].push_back(matrix_to_json(g));
  for (const auto& z : c.z.z) spec["cocycle"].push_back(matrix_to_json(z));
  std::string path = write_temp("descent.json", spec.dump());
  DescentCase loaded = descent_case_from_json(load_json_file(path));
  TwistedForm form = twisted_form(loaded.a, loaded.setup, loaded.z);
  CHECK(form.b.dim() == 4);
  CHECK(is_central(form.b));
}

TEST_CASE("loop spec file") {
  std::string path = write_temp("loop.json", R"({
    "base": "sl3", "automorphism": "diagram2", "order": 2,
    "deltas": [-1, 1], "window": 7
  })");
  LoopSpecFile f = loop_spec_from_json(load_json_file(path));
  CHECK(f.base == "sl3");
  CHECK(f.order == 2);
  CHECK(f.delta_lo == -1);
  CHECK(f.delta_hi == 1);
  CHECK(f.window == 7);
}
