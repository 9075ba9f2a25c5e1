#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::temp_directory_path() / "strategem_cli_test";

// Runs the CLI with `args`, capturing stdout and stderr into files under kTmp.
int cli(const std::string& args) {
  fs::create_directories(kTmp);
  const std::string cmd = std::string("\"") + STRATEGEM_CLI + "\" " + args + " > \"" +
                          (kTmp / "stdout.txt").string() + "\" 2> \"" +
                          (kTmp / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string out() { return slurp(kTmp / "stdout.txt"); }
std::string err() { return slurp(kTmp / "stderr.txt"); }

const std::string kDefault = std::string(STRATEGEM_SOURCE_DIR) + "/configs/default.ini";

}  // namespace

TEST_CASE("validate echoes the shipped default config") {
  REQUIRE(cli("validate --config \"" + kDefault + "\"") == 0);
  const std::string text = out();
  CHECK(text.find("n_firms = 200\n") != std::string::npos);
  CHECK(text.find("n_markets = 20\n") != std::string::npos);
  CHECK(text.find("n_cycles = 200\n") != std::string::npos);

  // the echo is itself a valid config that reproduces itself
  std::ofstream(kTmp / "echo.ini") << text;
  REQUIRE(cli("validate --config \"" + (kTmp / "echo.ini").string() + "\"") == 0);
  CHECK(out() == text);
}

TEST_CASE("flags override the config file") {
  REQUIRE(cli("validate --config \"" + kDefault + "\" --cycles 7 --set maintenance_rate=0.25") == 0);
  CHECK(out().find("n_cycles = 7\n") != std::string::npos);
  CHECK(out().find("maintenance_rate = 0.25\n") != std::string::npos);
  REQUIRE(cli("validate --set n_cycles=9 --cycles 8") == 0);
  CHECK(out().find("n_cycles = 8\n") != std::string::npos);
}

TEST_CASE("run with zero cycles writes only the initialization rows") {
  const fs::path dir = kTmp / "run0";
  fs::remove_all(dir);
  REQUIRE(cli("run --seed 42 --cycles 0 --out \"" + dir.string() + "\"") == 0);
  std::istringstream trace(slurp(dir / "trace.csv"));
  std::string line;
  std::getline(trace, line);
  CHECK(line.rfind("run_id,cycle,firm_id", 0) == 0);
  int rows = 0;
  while (std::getline(trace, line)) {
    ++rows;
    CHECK(line.rfind("0,0,", 0) == 0);
  }
  CHECK(rows == 200);
  CHECK(fs::exists(dir / "config.ini"));
  CHECK(fs::exists(dir / "runs.csv"));
}

TEST_CASE("aggregate reproduces the batch aggregate and is idempotent") {
  const fs::path dir = kTmp / "batch";
  fs::remove_all(dir);
  REQUIRE(cli("batch --runs 3 --cycles 25 --firms 40 --markets 6 --out \"" + dir.string() + "\"") == 0);
  const std::string batch_agg = slurp(dir / "aggregate.csv");
  CHECK_FALSE(batch_agg.empty());

  const fs::path again = kTmp / "again";
  fs::remove_all(again);
  REQUIRE(cli("aggregate \"" + (dir / "runs.csv").string() + "\" --out \"" + again.string() + "\"") == 0);
  CHECK(slurp(again / "aggregate.csv") == batch_agg);

  REQUIRE(cli("aggregate --out \"" + dir.string() + "\"") == 0);
  CHECK(slurp(dir / "aggregate.csv") == batch_agg);

  // the echoed config re-runs to the same bytes
  const fs::path rerun = kTmp / "rerun";
  fs::remove_all(rerun);
  REQUIRE(cli("batch --config \"" + (dir / "config.ini").string() + "\" --out \"" + rerun.string() + "\"") == 0);
  CHECK(slurp(rerun / "runs.csv") == slurp(dir / "runs.csv"));
}

TEST_CASE("batch --trace writes one trace per run") {
  const fs::path dir = kTmp / "traced";
  fs::remove_all(dir);
  REQUIRE(cli("batch --runs 2 --cycles 3 --firms 4 --markets 2 --trace --out \"" + dir.string() + "\"") == 0);
  CHECK(fs::exists(dir / "traces" / "run_0.csv"));
  CHECK(fs::exists(dir / "traces" / "run_1.csv"));
}

TEST_CASE("errors map to exit codes") {
  CHECK(cli("validate --no-such-flag") == 1);
  CHECK_FALSE(err().empty());
  CHECK(cli("") == 1);
  CHECK(cli("validate --firms 3") == 1);
  CHECK(err().find("even") != std::string::npos);
  CHECK(cli("validate --set bogus=1") == 1);

  std::ofstream(kTmp / "broken.ini") << "[sim]\nn_firms = lots\n";
  CHECK(cli("validate --config \"" + (kTmp / "broken.ini").string() + "\"") == 1);
  CHECK(cli("validate --config \"" + (kTmp / "absent.ini").string() + "\"") == 1);

  CHECK(cli("aggregate \"" + (kTmp / "absent.csv").string() + "\"") == 2);
  std::ofstream(kTmp / "garbage.csv") << "not,a\nruns,table,at,all\n";
  CHECK(cli("aggregate \"" + (kTmp / "garbage.csv").string() + "\" --out \"" + kTmp.string() + "\"") == 2);
}

TEST_CASE("STRATEGEM_WORKERS sets the default worker count") {
  REQUIRE(::setenv("STRATEGEM_WORKERS", "5", 1) == 0);
  REQUIRE(cli("validate") == 0);
  CHECK(out().find("workers = 5\n") != std::string::npos);
  REQUIRE(cli("validate --workers 2") == 0);
  CHECK(out().find("workers = 2\n") != std::string::npos);
  ::unsetenv("STRATEGEM_WORKERS");
}
