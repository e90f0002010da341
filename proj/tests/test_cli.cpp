#include "doctest.h"
#include "swe/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace swe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

fs::path workdir() {
  const fs::path dir = fs::temp_directory_path() / "swe_cli_tests";
  fs::create_directories(dir);
  return dir;
}

Outcome invoke(const std::string& args) {
  const fs::path log = workdir() / "last.log";
  const std::string command = std::string("\"") + SWE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  std::stringstream text;
  text << std::ifstream(log).rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text.str()};
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("run writes every export") {
  const fs::path out = workdir() / "run";
  fs::remove_all(out);
  const Outcome r = invoke("run --case w2 --degree 1 --n 4 --t-end-days 0.01 --out-dir " + quoted(out));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  for (const char* f : {"norms.csv", "grid.csv", "latlon.csv", "field.json"}) CHECK(fs::exists(out / f));
  const CsvTable norms = read_csv((out / "norms.csv").string());
  REQUIRE(norms.rows.size() >= 2);
  CHECK(parse_double(norms.rows.back()[norms.column("time_days")]) == doctest::Approx(0.01));
  // K = 1 on N = 4 carries a projection error near 1e-2.
  CHECK(parse_double(norms.rows.back()[norms.column("h_l2")]) < 5e-2);
  CHECK(read_csv((out / "latlon.csv").string()).rows.size() == std::size_t(90 * 180));

  SUBCASE("plotdata re-exports the stored field identically") {
    const fs::path again = out / "again.csv";
    const Outcome p = invoke("plotdata --field " + quoted(out / "field.json") + " --out " + quoted(again));
    REQUIRE_MESSAGE(p.code == 0, p.output);
    std::stringstream a, b;
    a << std::ifstream(out / "latlon.csv").rdbuf();
    b << std::ifstream(again).rdbuf();
    CHECK(a.str() == b.str());
  }
}

TEST_CASE("argument errors exit with 1, numerical and I/O errors with 2") {
  CHECK(invoke("run --case nowhere --n 2").code == 1);
  CHECK(invoke("run --case w2 --flux roe --n 2").code == 1);
  CHECK(invoke("run --case w2 --set bogus=1 --n 2").code == 1);
  CHECK(invoke("frobnicate").code == 1);
  CHECK(invoke("--help").code == 0);
  CHECK(invoke("plotdata --field " + quoted(workdir() / "absent.json")).code == 2);
  CHECK(invoke("run --case w2 --n 2 --set h0=-100 --t-end-days 0.001 --out-dir " + quoted(workdir() / "neg")).code ==
        2);
}

TEST_CASE("configuration files supply flags and explicit flags win") {
  const fs::path cfg = workdir() / "deform.cfg";
  const fs::path out = workdir() / "cfg";
  fs::remove_all(out);
  std::ofstream(cfg) << "# small deformational run\ncase = deform\nn = 4\ndegree = 1\nt-end-days = 0.002\n";
  const Outcome r = invoke("run --config " + quoted(cfg) + " --n 3 --out-dir " + quoted(out));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  // 6·3² cells × 3² nodes at K = 1.
  CHECK(read_csv((out / "grid.csv").string()).rows.size() == std::size_t(6 * 9 * 9));

  std::ofstream(cfg) << "case = w2\nno equals sign here\n";
  CHECK(invoke("run --config " + quoted(cfg)).code == 1);
}

TEST_CASE("convergence prints a table with observed orders") {
  const Outcome r = invoke("convergence --case w2 --degree 1 --ns 3,6 --t-end-days 0.05");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("order") != std::string::npos);
  CHECK(r.output.find('6') != std::string::npos);
}

TEST_CASE("verify runs the property suites") {
  const Outcome r = invoke("verify --samples 20");
  CHECK_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("PASS") != std::string::npos);
}
