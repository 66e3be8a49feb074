#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "dkit/io.hpp"

using namespace dkit;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(DKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("der command prints dims and exits 0") {
  RunResult r = run_cli("der --algebra sl2 --module adjoint");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("dim Der = 3; dim IDer = 3; H1 = 0") != std::string::npos);

  RunResult ab = run_cli("der --algebra abelian1");
  CHECK(ab.exit_code == 0);
  CHECK(ab.out.find("dim Der = 1") != std::string::npos);
}

TEST_CASE("hh1 of the quaternions is 0") {
  RunResult r = run_cli("hh1 --algebra 'quaternion(-1,-1)'");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("HH1 = 0") != std::string::npos);
}

TEST_CASE("relative solve over an extension") {
  RunResult r = run_cli("der --algebra sl2 --module adjoint --extend dual2 --over K");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("dim Der = 6") != std::string::npos);
}

TEST_CASE("validation failures exit 2") {
  CHECK(run_cli("der --algebra so7").exit_code == 2);
  CHECK(run_cli("der").exit_code == 2);                          // no algebra given
  CHECK(run_cli("der --algebra sl2 --over K").exit_code == 2);   // no extension recorded
  CHECK(run_cli("verify --case unknown-case").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("loop command prints the per-degree table") {
  RunResult r = run_cli("loop --base sl2 --auto id --order 1 --deltas 0..0 --window 6");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("delta | dim B_d | raw | central | predicted | status") != std::string::npos);
  CHECK(r.out.find("| ok") != std::string::npos);
}

TEST_CASE("empty delta range exits 0 with an empty table") {
  RunResult r = run_cli("loop --base sl2 --auto id --order 1 --deltas 1..0 --window 6");
  CHECK(r.exit_code == 0);
}

TEST_CASE("window below the stabilization floor exits 3") {
  RunResult r = run_cli("loop --base sl3 --auto diagram2 --order 2 --deltas 4..4 --window 3");
  CHECK(r.exit_code == 3);
  // no dimension table was printed for the failed degree
  CHECK(r.out.find("| ok") == std::string::npos);
}

TEST_CASE("verify command passes on shipped cases") {
  RunResult graded = run_cli("verify --case a1-untwisted --deltas 0..1 --window 5");
  CHECK(graded.exit_code == 0);
  CHECK(graded.out.find("verdict: PASS") != std::string::npos);

  RunResult fd = run_cli("verify --case quaternion");
  CHECK(fd.exit_code == 0);
  CHECK(fd.out.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("structured output round-trips") {
  RunResult r = run_cli("der --algebra sl2 --module adjoint --format structured");
  REQUIRE(r.exit_code == 0);
  Json j = Json::parse(r.out);
  SolverReport rep = solver_report_from_json(j);
  CHECK(report_to_json(rep) == j);
  CHECK(rep.dim == 3);

  RunResult v = run_cli("verify --case a1-untwisted --deltas 0..0 --window 5 --format structured");
  REQUIRE(v.exit_code == 0);
  Json vj = Json::parse(v.out);
  GradedVerifyReport vrep = graded_report_from_json(vj);
  CHECK(report_to_json(vrep) == vj);
}

TEST_CASE("parallel sweep output matches sequential") {
  RunResult seq = run_cli("loop --base sl3 --auto diagram2 --order 2 --deltas -1..1 --window 6 --format structured");
  RunResult par = run_cli("loop --base sl3 --auto diagram2 --order 2 --deltas -1..1 --window 6 --format structured --parallel");
  REQUIRE(seq.exit_code == 0);
  REQUIRE(par.exit_code == 0);
  CHECK(Json::parse(seq.out) == Json::parse(par.out));
}

TEST_CASE("algebra and dimodule spec files drive the pointwise commands") {
  Json alg{{"field", "Q"},
           {"dim", 2},
           {"basis", Json::array({"x", "y"})},
           {"flavor", "lie"},
           {"structure", Json::array()}};
  Json mod{{"dim", 1}, {"left", Json::array()}, {"right", Json::array()}};
  std::string apath = "/tmp/dkit_cli_algebra.json", mpath = "/tmp/dkit_cli_module.json";
  {
    std::ofstream a(apath), m(mpath);
    a << alg.dump();
    m << mod.dump();
  }
  // abelian plane into the trivial line: every map is a derivation, none inner
  RunResult r = run_cli("h1 --spec " + apath + " --module-spec " + mpath);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("dim Der = 2; dim IDer = 0; H1 = 2") != std::string::npos);
}

TEST_CASE("catalog directory fallback works through the CLI") {
  Json alg = algebra_to_json(catalog_get("sl2"));
  std::system("mkdir -p /tmp/dkit_cli_catalog");
  {
    std::ofstream out("/tmp/dkit_cli_catalog/usersl2.json");
    out << alg.dump();
  }
  std::string cmd = std::string("DKIT_CATALOG_DIR=/tmp/dkit_cli_catalog ") + DKIT_CLI_PATH +
                    " der --algebra usersl2 --module regular 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(out.find("dim Der = 3") != std::string::npos);
}

TEST_CASE("spec files drive the loop command") {
  Json spec{{"base", "sl2"}, {"automorphism", "id"}, {"order", 1},
            {"deltas", Json::array({0, 0})}, {"window", 6}};
  std::string path = "/tmp/dkit_cli_loop_spec.json";
  {
    std::ofstream out(path);
    out << spec.dump();
  }
  RunResult r = run_cli("loop --spec " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("| ok") != std::string::npos);
}
