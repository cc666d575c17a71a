// Exercises the built binary end to end: exit-code contract, output formats
// and byte-level determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code;
  std::string output;
};

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "sinkblock_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
  fs::path p = work_dir() / name;
  std::ofstream os(p, std::ios::binary);
  os << content;
  return p;
}

CliResult run_cli(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  std::string cmd = std::string(SB_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream is(out, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  return {WEXITSTATUS(rc), buf.str()};
}

const char* kHallMatrix = "3 3\n1 1 1\n2 1 1\n3 1 1\n3 2 1\n3 3 1\n";
const char* kHallGraph = "3 3\n1 1\n2 1\n3 1\n3 2\n3 3\n";

}  // namespace

TEST_CASE("scale reports zero divergence on the flat matrix") {
  fs::path m = write_file("flat.txt", "2 2\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n");
  CliResult res = run_cli("scale --input " + m.string() + " --iters 10");
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.output);
  CHECK(j["divergence"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("scale approaches ln 2 divergence on the hall matrix") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  CliResult res = run_cli("scale --input " + m.string() + " --iters 100000 --tol 0 --record-stride 10000");
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.output);
  CHECK(j["divergence"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("scale trajectory csv has k, divergence, change and marginals") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  CliResult res = run_cli("scale --input " + m.string() +
                          " --iters 10 --tol 0 --format csv --record-stride 5");
  CHECK(res.exit_code == 0);
  std::istringstream is(res.output);
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);  // k, div, change, 3 marginals
  }
  CHECK(lines == 3);  // k = 0, 5, 10
}

TEST_CASE("scale exit codes for parse and dimension errors") {
  fs::path bad = write_file("bad.txt", "2 x\n");
  CHECK(run_cli("scale --input " + bad.string()).exit_code == 2);

  fs::path m = write_file("flat2.txt", "2 2\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n");
  fs::path r = write_file("short.txt", "1\n");
  CHECK(run_cli("scale --input " + m.string() + " --row-marginals " + r.string()).exit_code == 3);
  CHECK(run_cli("scale --input " + work_dir().string() + "/absent.txt").exit_code == 2);
}

TEST_CASE("decompose emits the partition report") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  CliResult res = run_cli("decompose --input " + m.string());
  CHECK(res.exit_code == 0);
  auto j = nlohmann::json::parse(res.output);
  CHECK(j["theta"] == 2);
  CHECK(j["p_star"] == nlohmann::json::array({"1/2", "1/2", "2"}));

  fs::path e2 = write_file("e2.txt", "2 2\n1 1 1\n1 2 1\n2 2 1\n");
  auto j2 = nlohmann::json::parse(run_cli("decompose --input " + e2.string()).output);
  CHECK(j2["theta"] == 1);
  CHECK(j2["critical_lambdas"] == nlohmann::json::array({"1/2"}));
  CHECK(j2["fine_blocks"][0].size() == 2);

  fs::path flat = write_file("flat3.txt", "2 2\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n");
  auto j3 = nlohmann::json::parse(run_cli("decompose --input " + flat.string()).output);
  CHECK(j3["theta"] == 1);

  // --with-limit attaches the block-diagonal pair as 1-based entry lists
  auto j4 = nlohmann::json::parse(
      run_cli("decompose --input " + m.string() + " --with-limit").output);
  REQUIRE(j4.contains("limit"));
  double n_mass = 0;
  for (const auto& entry : j4["limit"]["N"]) n_mass += entry[2].get<double>();
  CHECK(n_mass == doctest::Approx(3.0));  // N* has the column total
  for (const auto& entry : j4["limit"]["M"])
    if (entry[1].get<int>() != 1) CHECK(entry[0].get<int>() == 3);  // rows 1,2 live in column 1
}

TEST_CASE("blocker exit codes and report") {
  fs::path diag = write_file("diag.txt", "3 3\n1 1\n2 2\n3 3\n");
  CliResult ok = run_cli("blocker --input " + diag.string() + " --iters 100");
  CHECK(ok.exit_code == 0);
  auto j = nlohmann::json::parse(ok.output);
  CHECK(j["deficiency"] == 0);
  CHECK(j["has_perfect_matching"] == true);

  fs::path hall = write_file("hallg.txt", kHallGraph);
  CliResult blocked = run_cli("blocker --input " + hall.string() + " --iters 100000");
  CHECK(blocked.exit_code == 1);
  auto jb = nlohmann::json::parse(blocked.output);
  CHECK(jb["best_set"] == nlohmann::json::array({1, 2}));
  CHECK(jb["matching_number"] == 2);
  CHECK(jb["budget_mode"] == "fixed");

  CliResult theorem = run_cli("blocker --input " + hall.string() + " --iters theorem");
  CHECK(theorem.exit_code == 1);
  CHECK(nlohmann::json::parse(theorem.output)["budget_mode"] == "theorem");

  CliResult aut = run_cli("blocker --input " + hall.string() + " --iters auto");
  CHECK(aut.exit_code == 1);
  CHECK(nlohmann::json::parse(aut.output)["budget_mode"] == "auto");

  fs::path iso = write_file("iso.txt", "2 2\n1 1\n2 1\n");
  CHECK(run_cli("blocker --input " + iso.string()).exit_code == 4);
}

TEST_CASE("oracle-check agrees on the fixtures and rejects oversize input") {
  fs::path hall = write_file("hall.txt", kHallMatrix);
  CHECK(run_cli("oracle-check --input " + hall.string()).exit_code == 0);

  std::ostringstream big;
  big << "17 17\n";
  for (int i = 1; i <= 17; ++i) big << i << ' ' << i << " 1\n" << i << " " << (i % 17) + 1 << " 1\n";
  fs::path oversize = write_file("big.txt", big.str());
  CHECK(run_cli("oracle-check --input " + oversize.string()).exit_code == 2);
}

TEST_CASE("oracle-check sweeps agree exhaustively") {
  CHECK(run_cli("oracle-check --sweep 2").exit_code == 0);
  CHECK(run_cli("oracle-check --sweep 3").exit_code == 0);
}

TEST_CASE("scale text format and --out write the same report") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  fs::path out = work_dir() / "scale_out.txt";
  CliResult direct = run_cli("scale --input " + m.string() + " --iters 50 --format text");
  CHECK(direct.exit_code == 0);
  CHECK(direct.output.find("divergence") != std::string::npos);
  CHECK(run_cli("scale --input " + m.string() + " --iters 50 --format text --out " +
                out.string())
            .exit_code == 0);
  std::ifstream is(out, std::ios::binary);
  std::stringstream buf;
  buf << is.rdbuf();
  CHECK(buf.str() == direct.output);
}

TEST_CASE("iteration modes are rejected where they do not apply") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  CHECK(run_cli("scale --input " + m.string() + " --iters theorem").exit_code == 2);
  CHECK(run_cli("decompose --input " + m.string() + " --iters auto").exit_code == 2);
}

TEST_CASE("identical invocations produce identical bytes") {
  fs::path m = write_file("hall.txt", kHallMatrix);
  std::string args = "decompose --input " + m.string();
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  CHECK(a.output == b.output);
  CHECK(!a.output.empty());

  fs::path g = write_file("hallg.txt", kHallGraph);
  std::string bargs = "blocker --input " + g.string() + " --iters 5000";
  CHECK(run_cli(bargs).output == run_cli(bargs).output);
}
