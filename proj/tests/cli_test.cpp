// End-to-end checks of the installed command-line surface; every test drives
// the real binary through a shell.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "support.hpp"
#include "tiletuner/space.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path out_file =
      fs::temp_directory_path() /
      ("tiletuner-cli-out-" + std::to_string(::getpid()) + "-" +
       std::to_string(counter++));
  std::string cmd = env.empty() ? std::string() : env + " ";
  cmd += TILETUNER_CLI_PATH;
  cmd += " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  result.output.assign((std::istreambuf_iterator<char>(in)), {});
  fs::remove(out_file);
  return result;
}

std::string last_line(const std::string& text) {
  std::size_t end = text.size();
  while (end > 0 && text[end - 1] == '\n') --end;
  const std::size_t start = text.rfind('\n', end - 1);
  return text.substr(start == std::string::npos ? 0 : start + 1,
                     end - (start == std::string::npos ? 0 : start + 1));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

}  // namespace

TEST_CASE("spaces prints the dump with the exact totals") {
  RunResult r = run_cli("spaces lu large");
  CHECK(r.exit_code == 0);
  CHECK(last_line(r.output) == "total_size: 400");
  CHECK(r.output.find("P0 2000 20_candidates: 1,2,4,5,8,10,16,20,25,40,") !=
        std::string::npos);

  r = run_cli("spaces cholesky extralarge");
  CHECK(r.exit_code == 0);
  CHECK(last_line(r.output) == "total_size: 576");

  // mm3 accepted as an alias; the total is the product of the divisor counts
  // of the six split extents, computed here by trial division.
  std::uint64_t mini_total = 1;
  for (int extent : {16, 20, 20, 24, 16, 24}) {
    mini_total *= testsupport::brute_force_divisors(extent).size();
  }
  r = run_cli("spaces mm3 mini");
  CHECK(r.exit_code == 0);
  CHECK(last_line(r.output) == "total_size: " + std::to_string(mini_total));
  CHECK(run_cli("spaces 3mm mini").output == r.output);
}

TEST_CASE("tune writes byte-identical reproducible traces") {
  const auto dir = testsupport::make_temp_dir("cli-tune");
  const std::string base = "tune lu large --tuner bayesopt --synthetic "
                           "--seed 11 --reproducible --out ";
  const RunResult r1 = run_cli(base + (dir / "a.trace").string());
  const RunResult r2 = run_cli(base + (dir / "b.trace").string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(r1.output.find("evals: 100") != std::string::npos);  // default budget
  const std::string a = slurp(dir / "a.trace");
  CHECK(!a.empty());
  CHECK(a == slurp(dir / "b.trace"));
  fs::remove_all(dir);
}

TEST_CASE("tune with a grid tuner exhausts the space early") {
  const auto dir = testsupport::make_temp_dir("cli-grid");
  const RunResult r =
      run_cli("tune lu large --tuner grid --max-evals 500 --synthetic --out " +
              (dir / "g.trace").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("evals: 400") != std::string::npos);
  CHECK(r.output.find("best_runtime_s: 1\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("verify exits by outcome") {
  RunResult r = run_cli("verify lu mini --samples 100");  // sweeps all 49
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
  CHECK(r.output.find("FAIL") == std::string::npos);

  r = run_cli("verify lu mini --samples 3", "TILETUNER_TEST_CORRUPT=1");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("FAIL") != std::string::npos);

  r = run_cli("verify lu mini --samples 0");
  CHECK(r.exit_code == 2);

  r = run_cli("verify 3mm mini --samples 4");
  CHECK(r.exit_code == 0);
}

TEST_CASE("compare produces five traces, a summary, and two plots") {
  const auto dir = testsupport::make_temp_dir("cli-compare");
  const RunResult r = run_cli("compare lu large --synthetic --max-evals 40 "
                              "--seed 2 --reproducible --out " + dir.string());
  CHECK(r.exit_code == 0);
  int traces = 0;
  for (const char* tuner :
       {"random", "grid", "genetic", "boosted", "bayesopt"}) {
    if (fs::exists(dir / ("lu_large_" + std::string(tuner) + ".trace"))) {
      ++traces;
    }
  }
  CHECK(traces == 5);
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / "trace.svg"));
  CHECK(fs::exists(dir / "minimum.svg"));

  const std::string summary = slurp(dir / "summary.txt");
  int rows = 0;
  std::size_t pos = 0;
  while ((pos = summary.find("tuner: ", pos)) != std::string::npos) {
    ++rows;
    pos += 7;
  }
  CHECK(rows == 5);
  CHECK(testsupport::xml_well_formed(slurp(dir / "trace.svg")));
  CHECK(testsupport::xml_well_formed(slurp(dir / "minimum.svg")));
  fs::remove_all(dir);
}

TEST_CASE("plot re-renders stored traces") {
  const auto dir = testsupport::make_temp_dir("cli-plot");
  run_cli("tune lu large --tuner random --synthetic --max-evals 20 --seed 1 "
          "--out " + (dir / "r.trace").string());
  run_cli("tune lu large --tuner grid --synthetic --max-evals 20 --seed 1 "
          "--out " + (dir / "g.trace").string());
  const RunResult r = run_cli("plot " + (dir / "r.trace").string() + " " +
                              (dir / "g.trace").string() + " --out " +
                              (dir / "plots").string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "plots" / "trace.svg"));
  CHECK(fs::exists(dir / "plots" / "minimum.svg"));
  CHECK(testsupport::xml_well_formed(slurp(dir / "plots" / "trace.svg")));
  fs::remove_all(dir);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate lu large").exit_code == 2);
  CHECK(run_cli("spaces lu large --bogus-flag").exit_code == 2);
  CHECK(run_cli("spaces qr large").exit_code == 2);
  CHECK(run_cli("spaces lu gigantic").exit_code == 2);
  CHECK(run_cli("tune lu large --tuner annealing --synthetic").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("domain errors exit with code 1") {
  // Reading a trace that does not parse is a domain failure.
  const auto dir = testsupport::make_temp_dir("cli-domain");
  std::ofstream(dir / "junk.trace") << "not a trace\n";
  const RunResult r = run_cli("plot " + (dir / "junk.trace").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error:") != std::string::npos);
  fs::remove_all(dir);
}
