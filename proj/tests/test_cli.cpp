#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

// Runs the command-line tool and compares its output with files under tests/golden.
// SMOOTHCOVER_UPDATE_GOLDEN=1 rewrites the files instead.

namespace {

struct Run {
  std::string out;
  int status;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SMOOTHCOVER_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int raw = pclose(pipe);
  return {out, WIFEXITED(raw) ? WEXITSTATUS(raw) : -1};
}

std::string golden_path(const std::string& name) { return std::string(SMOOTHCOVER_GOLDEN_DIR) + "/" + name; }

void check_golden(const std::string& name, const std::string& args) {
  const Run r = run(args);
  CHECK(r.status == 0);
  const std::string path = golden_path(name);
  if (std::getenv("SMOOTHCOVER_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << r.out;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
  std::ostringstream want;
  want << in.rdbuf();
  CHECK_MESSAGE(r.out == want.str(), "output of `" << args << "` differs from " << name);
}

const std::string z2 = R"('{"type":"integer","n":2}')";

}  // namespace

TEST_CASE("golden outputs") {
  check_golden("radii_z2_ball.json", "radii --lattice " + z2 + R"( --body '{"type":"ball","n":2,"radius":1}')");
  check_golden("eta_tile.json", "eta --lattice " + z2 +
                                    R"( --body '{"type":"half_open_box","lower":[0,0],"upper":[1.1,1.1]}' --method net)");
  check_golden("eta_fp_line.json", R"(eta-fp --p 3 --n 2 --a-spec '{"kind":"list","members":[[1,1]]}' --subspace-seed 4 --r 1 --exact)");
  check_golden("eta_fp_sampled.csv",
               R"(eta-fp --format csv --p 7 --n 2 --a-spec '{"kind":"random","size":12}' --set-seed 3 --m 9 --samples 20 --seed 8)");
  check_golden("params_nonlattice.json", "params --rule nonlattice --n 20 --epsilon 0.5");
  check_golden("params_cor14.csv", "params --format csv --rule cor14-ball --n 6 --epsilon 0.5 --delta 0.5");
  check_golden("phi_cube.csv", "phi-check --lattice " + z2 +
                                   R"( --body '{"type":"half_open_box","lower":[0,0],"upper":[1,1]}' --epsilon 0.8)");
  check_golden("dd.csv", "experiment --format csv --config " + golden_path("dd_config.json"));
  check_golden("dd.json", "experiment --format json --config " + golden_path("dd_config.json"));
  check_golden("nonlattice.csv", "experiment --format csv --config " + golden_path("nonlattice_config.json"));
}

TEST_CASE("seed override changes the output and is echoed") {
  const Run a = run("experiment --format json --seed 1 --config " + golden_path("dd_config.json"));
  const Run b = run("experiment --format json --seed 2 --config " + golden_path("dd_config.json"));
  CHECK(a.status == 0);
  CHECK(a.out != b.out);
  CHECK(a.out.find("\"seed\": 1") != std::string::npos);
}

TEST_CASE("thread count does not change results") {
  const std::string args = "radii --lattice " + z2 + R"( --body '{"type":"ball","n":2,"radius":1}')";
  CHECK(run("--threads 1 " + args).out == run("--threads 3 " + args).out);
}

TEST_CASE("exit codes") {
  CHECK(run("params --rule theorem15 --n 4 --b 3 --epsilon 0.5 --delta 0.5").status == 2);
  CHECK(run(R"(radii --lattice '{"type":"integer"}' --body '{}')").status == 2);
  CHECK(run("experiment --config /nonexistent/config.json").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run(R"(eta-fp --p 101 --n 5 --a-spec '{"kind":"full"}' --subspace-seed 1 --r 2 --exact)").status == 3);
  CHECK(run("eta --lattice " + z2 + R"( --body '{"type":"ball","n":2,"radius":0.1}' --net-p 2)").status == 4);
  const std::string budget = std::string("env SMOOTHCOVER_BUDGET=10 ") + SMOOTHCOVER_CLI + " radii --lattice " + z2 +
                             R"( --body '{"type":"ball","n":2,"radius":1}' 2>/dev/null)";
  const int raw = std::system(budget.c_str());
  CHECK(WEXITSTATUS(raw) == 3);
}

TEST_CASE("help documents the CSV columns") {
  const Run h = run("experiment --help");
  CHECK(h.status == 0);
  CHECK(h.out.find("stream_id") != std::string::npos);
}
