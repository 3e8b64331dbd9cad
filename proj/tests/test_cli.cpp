// Drives the installed command line binary as a subprocess and checks exit
// codes, artifact formats, and determinism. The binary path arrives as the
// first non-flag argument (wired up by the test harness).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

using nlohmann::json;

namespace {

std::string g_cli;
std::string g_dir;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
}

RunResult run_cli(const std::string& args) {
  const std::string out_f = g_dir + "/stdout.txt";
  const std::string err_f = g_dir + "/stderr.txt";
  const std::string cmd = g_cli + " " + args + " >" + out_f + " 2>" + err_f;
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = (rc == -1) ? -1 : WEXITSTATUS(rc);
  r.out = slurp(out_f);
  r.err = slurp(err_f);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("help text and bad invocations") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("stability --mu 1").exit_code == 2);
  CHECK(run_cli("nbody").exit_code == 2);
  CHECK(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("stability point report") {
  const RunResult r = run_cli("stability --mu 3 --gamma 1");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("problem") == "stability");
  CHECK(j.at("verdict") == "unstable");
  CHECK(j.at("spectrally_unstable") == true);
  CHECK(j.at("nilpotent") == false);
  CHECK(j.at("f_nonsingular") == false);
  CHECK(j.at("dim_ker_m") == 2);
  CHECK(j.at("dim_ker_m2") == 2);
  REQUIRE(j.at("eigenvalues").size() == 12);
  CHECK(j.at("max_real_part").get<double>() ==
        doctest::Approx(0.0294627812).epsilon(1e-6));
  // leading eigenvalue equals the reported growth rate
  CHECK(j.at("eigenvalues")[0].at("re").get<double>() ==
        doctest::Approx(j.at("max_real_part").get<double>()).epsilon(1e-12));
}

TEST_CASE("stability sweep covers the default grid") {
  const RunResult r = run_cli("stability sweep");
  REQUIRE(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 17);
  CHECK(lines[0] == "mu,gamma,det_f,dim_ker_m,dim_ker_m2,verdict");
  for (size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i].find(",2,2,unstable") != std::string::npos);
  }
  CHECK(lines[1].rfind("0.5,0.5,", 0) == 0);
  CHECK(lines[16].rfind("2,2,", 0) == 0);

  SUBCASE("custom grids change the row count") {
    const RunResult r2 = run_cli("stability sweep --mu-grid 1,2 --gamma-grid 1");
    REQUIRE(r2.exit_code == 0);
    CHECK(lines_of(r2.out).size() == 3);
  }
}

TEST_CASE("artifacts are byte identical and written atomically") {
  const std::string p1 = g_dir + "/rep1.json";
  const std::string p2 = g_dir + "/rep2.json";
  REQUIRE(run_cli("stability --mu 1.5 --gamma 0.5 --out " + p1).exit_code == 0);
  REQUIRE(run_cli("stability --mu 1.5 --gamma 0.5 --out " + p2).exit_code == 0);
  const std::string a = slurp(p1), b = slurp(p2);
  REQUIRE(!a.empty());
  CHECK(a == b);
  CHECK(slurp(p1 + ".tmp").empty());  // no temp sibling left behind
}

TEST_CASE("central force propagation through the cli") {
  SUBCASE("circular orbit conserves its invariants") {
    const RunResult r =
        run_cli("central-force --q 2,0,0,0 --p 0,0.7071067811865476,0,0 "
                "--steps 400 --every 200");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("stop") == "completed");
    CHECK(j.at("collided") == false);
    REQUIRE(j.at("samples").size() == 3);
    for (const auto& s : j.at("samples")) {
      CHECK(s.at("energy").get<double>() == doctest::Approx(-0.25).epsilon(1e-9));
      CHECK(s.at("mu1").get<double>() ==
            doctest::Approx(2.0 * 0.7071067811865476).epsilon(1e-12));
      CHECK(s.at("area_xy").get<double>() ==
            doctest::Approx(0.7071067811865476).epsilon(1e-12));
    }
  }

  SUBCASE("csv format emits one row per sample") {
    const RunResult r =
        run_cli("central-force --q 2,0,0,0 --p 0,0.7071067811865476,0,0 "
                "--steps 100 --every 50 --format csv");
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "t,q0,q1,q2,q3,p0,p1,p2,p3,energy,mu1,mu2,area_xy,area_zw");
  }

  SUBCASE("momentum-free infall exits with the numerical-failure code") {
    const std::string cfg = g_dir + "/infall.json";
    spit(cfg, R"({
      "problem": "central",
      "potential": {"kind": "newtonian", "k": 1.0},
      "params": {"q": [0.5, 0, 0, 0], "p": [0, 0, 0, 0]},
      "integrator": {"dt": 1e-4, "steps": 20000, "output_every": 2000,
                     "collision_threshold": 1e-3}
    })");
    const std::string out = g_dir + "/infall_out.json";
    const RunResult r = run_cli("central-force --config " + cfg + " --out " + out);
    CHECK(r.exit_code == 3);
    const json j = json::parse(slurp(out));
    CHECK(j.at("stop") == "collision");
    CHECK(j.at("collided") == true);
    // free fall from r = 1/2 hits the threshold just before (pi/2) sqrt(r^3/2k)
    CHECK(j.at("final_time").get<double>() == doctest::Approx(0.3927).epsilon(0.01));
  }
}

TEST_CASE("configuration schema is enforced") {
  const std::string cfg = g_dir + "/bad.json";

  spit(cfg, R"({"problem": "nbody",
                "params": {"masses": [1.0, -1.0],
                           "positions": [[1,0,0,0],[-1,0,0,0]]}})");
  RunResult r = run_cli("nbody --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("masses") != std::string::npos);

  spit(cfg, R"({"problem": "nbody", "extra_field": 1,
                "params": {"masses": [1.0, 1.0],
                           "positions": [[1,0,0,0],[-1,0,0,0]]}})");
  r = run_cli("nbody --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("unknown key") != std::string::npos);

  spit(cfg, R"({"problem": "ngon"})");
  r = run_cli("nbody --config " + cfg);
  CHECK(r.exit_code == 2);

  spit(cfg, "{not json");
  r = run_cli("nbody --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("JSON") != std::string::npos);
}

TEST_CASE("find-re reports balance and centrality") {
  const std::string cfg = g_dir + "/triangle.json";
  spit(cfg, R"({
    "problem": "nbody",
    "potential": {"kind": "newtonian", "k": 1.0},
    "params": {
      "masses": [1.0, 1.0, 1.0],
      "positions": [[1, 0, 0, 0],
                    [-0.5, 0.8660254037844386, 0, 0],
                    [-0.5, -0.8660254037844386, 0, 0]]
    }
  })");
  const RunResult r = run_cli("find-re --config " + cfg);
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("balanced") == true);
  CHECK(j.at("central") == true);
  CHECK(j.at("omega2_undetermined") == true);
  // omega^2 = 3k/d^3 with d = sqrt 3
  const double w = std::sqrt(3.0 / std::pow(std::sqrt(3.0), 3.0));
  CHECK(j.at("omega1").get<double>() == doctest::Approx(w).epsilon(1e-9));
  CHECK(j.at("lambda").get<double>() == doctest::Approx(-w * w).epsilon(1e-9));

  SUBCASE("an unbalanced cluster exits with the domain code but leaves a record") {
    const std::string bad = g_dir + "/lopsided.json";
    spit(bad, R"({
      "problem": "nbody",
      "params": {
        "masses": [1.0, 2.0, 1.5],
        "positions": [[0.3, 0.1, -0.2, 0.5],
                      [1.1, -0.4, 0.2, -0.3],
                      [-0.9, 0.8, 0.6, 0.1]]
      }
    })");
    const std::string out = g_dir + "/lopsided_out.json";
    const RunResult r2 = run_cli("find-re --config " + bad + " --out " + out);
    CHECK(r2.exit_code == 4);
    const json j2 = json::parse(slurp(out));
    CHECK(j2.at("balanced") == false);
    CHECK(!j2.at("message").get<std::string>().empty());
  }
}

TEST_CASE("ngon commands") {
  SUBCASE("pentagon and pentagram projections classify as the first skew kind") {
    const RunResult r = run_cli("ngon classify --a1 1 --b1 5 --a2 2 --b2 5 --r1 1 --r2 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("tag") == "TypeI");
    CHECK(j.at("n") == 5);
    CHECK(j.at("proj1") == 5);
    CHECK(j.at("proj2") == 5);
    CHECK(j.at("synchronised") == false);
  }

  SUBCASE("triangle against digon is the second skew kind") {
    const RunResult r = run_cli("ngon classify --a1 1 --b1 3 --a2 1 --b2 2 --r1 1 --r2 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("tag") == "TypeII");
    CHECK(j.at("n") == 6);
    CHECK(j.at("synchronised").is_null());
  }

  SUBCASE("build emits all vertices") {
    const RunResult r = run_cli("ngon build --a1 1 --b1 4 --r1 2 --r2 0 --format csv");
    REQUIRE(r.exit_code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "x,y,z,w");
  }

  SUBCASE("solved planar triangle radii satisfy the hand-derived relation") {
    const RunResult r = run_cli("ngon solve-re --a1 1 --b1 3 --r2 0 --c1 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    // c1^2 = r1 / sqrt 3 for the planar newtonian triangle
    CHECK(j.at("r1").get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-10));
    CHECK(j.at("r2").get<double>() == 0.0);
    CHECK(j.at("residual_norm").get<double>() < 1e-12);
  }
}

TEST_CASE("three-body commands") {
  SUBCASE("equilateral equilibrium from the momentum pair") {
    const RunResult r = run_cli("three-body equilibrium --mu1 3 --mu2 3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("state").at("r1").get<double>() ==
          doctest::Approx(8.48528137423857).epsilon(1e-12));
    CHECK(j.at("branch") == "isosceles");
    CHECK(j.at("eom_norm").get<double>() < 1e-10);
    const double d12 = j.at("distances").at("d12").get<double>();
    const double d13 = j.at("distances").at("d13").get<double>();
    CHECK(d12 == doctest::Approx(d13).epsilon(1e-12));
  }

  SUBCASE("reduction of an equilateral triangle in a principal plane") {
    const std::string cfg = g_dir + "/reduce.json";
    spit(cfg, R"({
      "problem": "threebody",
      "params": {
        "masses": [1.0, 1.0, 1.0],
        "positions": [[1, 0, 0, 0],
                      [-0.5, 0.8660254037844386, 0, 0],
                      [-0.5, -0.8660254037844386, 0, 0]],
        "momenta": [[0, 0.3, 0, 0], [-0.26, -0.15, 0, 0], [0.26, -0.15, 0, 0]]
      }
    })");
    const RunResult r = run_cli("three-body reduce --config " + cfg);
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    // |q2 - q1| = sqrt 3 for a unit-circumradius triangle
    CHECK(j.at("state").at("r1").get<double>() ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(j.at("state").at("r2").get<double>() == 0.0);
    CHECK(j.at("distances").at("d12").get<double>() ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  }

  SUBCASE("simulation holds the reduced energy") {
    const std::string cfg = g_dir + "/sim.json";
    spit(cfg, R"({
      "problem": "threebody",
      "potential": {"kind": "newtonian", "k": 1.0},
      "params": {
        "masses": [1.0, 1.0, 1.0],
        "state": {
          "r1": 8.4852813742385695, "r2": 8.4852813742385695,
          "s1": 7.3484692283495336, "s2": 7.3484692283495336,
          "phi1": -1.5707963267948966, "phi2": -1.5707963267948966,
          "p_r1": 0.05, "p_r2": 0, "p_s1": 0, "p_s2": 0,
          "p_phi1": 1.5, "p_phi2": 1.5,
          "mu1": 3.0, "mu2": 3.0
        }
      },
      "integrator": {"dt": 0.002, "steps": 500, "output_every": 100}
    })");
    const RunResult r = run_cli("three-body simulate --config " + cfg);
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j.at("samples").size() == 6);
    const double h0 = j.at("samples")[0].at("energy").get<double>();
    for (const auto& s : j.at("samples"))
      CHECK(s.at("energy").get<double>() == doctest::Approx(h0).epsilon(1e-10));
  }
}

int main(int argc, char** argv) {
  std::vector<char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (!a.empty() && a[0] != '-')
      g_cli = a;
    else
      pass.push_back(argv[i]);
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli-binary> [doctest flags]\n");
    return 1;
  }
  char tmpl[] = "/tmp/r4nb_cli_XXXXXX";
  const char* dir = mkdtemp(tmpl);
  if (!dir) {
    std::fprintf(stderr, "cannot create scratch directory\n");
    return 1;
  }
  g_dir = dir;
  doctest::Context ctx(static_cast<int>(pass.size()), pass.data());
  return ctx.run();
}
