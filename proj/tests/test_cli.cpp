#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "imf/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string output;
};

// Runs the CLI with the given arguments, capturing stdout and stderr.
Run run_cli(const std::string& args) {
  const std::string command = std::string(IMF_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  while (std::fgets(buffer, sizeof buffer, pipe) != nullptr) r.output += buffer;
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("imf_cli_test_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& content = {}) const {
    const auto p = dir / name;
    if (!content.empty()) std::ofstream(p, std::ios::binary) << content;
    return p.string();
  }
};

const char* kCascade =
    R"({"kind": "lognormal", "sigma2": 0.05, "integral_scale": 5, "grid_step": 0.01, "length": 20})";

}  // namespace

TEST_CASE("cli: usage errors exit with 2 and name the field") {
  Scratch s("usage");
  const auto bad = s.file("bad.json",
                          R"({"kind": "lognormal", "sigma2": 0.05, "integral_scale": 5,
                              "grid_step": 0.01, "lenght": 20})");
  auto r = run_cli("simulate-cascade --seed 1 --config " + bad + " --output " + s.file("y.csv"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("cascade.lenght") != std::string::npos);

  r = run_cli("simulate-cascade --config " + s.file("ok.json", kCascade) + " --output " + s.file("y.csv"));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("--seed") != std::string::npos);
}

TEST_CASE("cli: numerical failures exit with 1") {
  Scratch s("numerical");
  const auto cfg = s.file("c.json", kCascade);
  const auto y = s.file("y.csv");
  REQUIRE(run_cli("simulate-cascade --seed 3 --config " + cfg + " --output " + y).exit_code == 0);
  const auto jumps = s.file("n.csv", "jump_time,jump_size\n0.5,1\n");
  const auto r = run_cli("simulate-count --seed 3 --clock " + y + " --jumps-input " + jumps +
                         " --horizon 1 --output " + s.file("x.csv"));
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("HorizonExceeded") != std::string::npos);
}

TEST_CASE("cli: identical seeds give identical bytes") {
  Scratch s("determinism");
  const auto cfg = s.file("c.json", kCascade);
  for (const char* name : {"a.csv", "b.csv"}) {
    REQUIRE(run_cli("simulate-cascade --seed 11 --replicates 3 --config " + cfg + " --output " +
                    s.file(name))
                .exit_code == 0);
  }
  for (int r = 0; r < 3; ++r) {
    const auto suffix = "_r" + std::to_string(r) + ".csv";
    const auto a = slurp(s.dir / ("a" + suffix));
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(s.dir / ("b" + suffix)));
  }
  CHECK(slurp(s.dir / "a_r0.csv") != slurp(s.dir / "a_r1.csv"));
}

TEST_CASE("cli: adding replicates leaves earlier ones unchanged") {
  Scratch s("replicates");
  const auto cfg = s.file("c.json", kCascade);
  REQUIRE(run_cli("simulate-cascade --seed 12 --replicates 2 --config " + cfg + " --output " +
                  s.file("few.csv"))
              .exit_code == 0);
  REQUIRE(run_cli("simulate-cascade --seed 12 --replicates 5 --config " + cfg + " --output " +
                  s.file("many.csv"))
              .exit_code == 0);
  CHECK(slurp(s.dir / "few_r0.csv") == slurp(s.dir / "many_r0.csv"));
  CHECK(slurp(s.dir / "few_r1.csv") == slurp(s.dir / "many_r1.csv"));
}

TEST_CASE("cli: saved jumps reproduce the count path") {
  Scratch s("roundtrip");
  const auto y = s.file("y.csv");
  REQUIRE(run_cli("simulate-cascade --seed 13 --config " + s.file("c.json", kCascade) + " --output " + y)
              .exit_code == 0);
  const auto jumps = s.file("jumps.json", R"({"pmf": {"1": 0.5, "2": 0.5}})");
  REQUIRE(run_cli("simulate-count --seed 14 --clock " + y + " --jumps " + jumps + " --output " +
                  s.file("x.csv") + " --jumps-output " + s.file("n.csv"))
              .exit_code == 0);

  std::ifstream n_in(s.dir / "n.csv");
  const auto n = imf::io::read_jump_path_csv(n_in, 1e9);
  const double horizon = n.jump_times().empty() ? 1.0 : n.jump_times().back() + 1.0;
  std::ifstream y_in(s.dir / "y.csv");
  const double needed = imf::io::read_path_csv(y_in).values.maxCoeff();
  const auto r = run_cli("simulate-count --seed 99 --clock " + y + " --jumps-input " + s.file("n.csv") +
                         " --horizon " + imf::io::format_double(std::max(horizon, needed)) +
                         " --output " + s.file("again.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(s.dir / "x.csv") == slurp(s.dir / "again.csv"));
}

TEST_CASE("cli: moments for the identity clock") {
  Scratch s("moments");
  const auto cfg = s.file("m.json", R"({"order": 3, "t": [2],
      "cascade": {"kind": "lognormal", "sigma2": 0, "integral_scale": 5, "grid_step": 0.01}})");
  const auto out = s.file("m_out.json");
  REQUIRE(run_cli("moments --seed 1 --config " + cfg + " --output " + out).exit_code == 0);
  const auto j = imf::io::read_json_file(out);
  CHECK(j["predictions"][0]["raw"].get<double>() == doctest::Approx(22.0));
}
