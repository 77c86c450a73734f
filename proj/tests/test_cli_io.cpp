#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "modeguide/report.hpp"
#include "modeguide/run_record.hpp"

using namespace modeguide;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("modeguide_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

Run run(const std::string& args, const std::string& env = "") {
  const char* cli = std::getenv("MODEGUIDE_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "MODEGUIDE_CLI not set");
  const fs::path d = scratch_dir();
  const std::string cmd = env + " '" + std::string(cli) + "' " + args + " > '" + (d / "stdout").string() + "' 2> '" +
                          (d / "stderr").string() + "'";
  const int st = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(d / "stdout");
  r.err = slurp(d / "stderr");
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) break;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

int col(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  FAIL("missing column " << name);
  return -1;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-30) == "-2.4999999999999999e-30");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("tables and records round trip") {
  Table t;
  t.columns = {"j", "parity", "lambda"};
  t.rows.push_back({1L, std::string("even"), 0.85883513797192035});
  t.rows.push_back({2L, std::string("a,\"b\""), 1.0 / 3.0});
  CHECK(t.to_csv() == "j,parity,lambda\n1,even,0.85883513797192035\n2,\"a,\"\"b\"\"\",0.33333333333333331\n");
  CHECK(Table::from_json(t.to_json()) == t);

  RunRecord r;
  r.command = "single";
  r.config = default_config();
  r.config["a"] = 1.0;
  r.provenance = {{"truncation", {{"N", 40}, {"J", 512}}}};
  r.outputs["table"] = t.to_json();
  r.timestamp = "2026-01-01T00:00:00Z";
  const auto text = r.to_json(true).dump();
  const RunRecord back = RunRecord::from_json(nlohmann::json::parse(text));
  CHECK(back == r);
  CHECK(Table::from_json(back.outputs["table"]) == t);
  CHECK_FALSE(r.to_json(false).contains("timestamp"));
  RunRecord other = r;
  other.config["a"] = 2.0;
  CHECK(cache_key(r.command, r.config) == cache_key(back.command, back.config));
  CHECK(cache_key(r.command, r.config) != cache_key(other.command, other.config));
}

TEST_CASE("range syntax") {
  CHECK(parse_range("4:9:1").size() == 6);
  CHECK(parse_range("3:6:0.5").size() == 7);
  CHECK(parse_range("3:6:0.5").back() == 6.0);
  CHECK(parse_range("6") == std::vector<double>{6.0});
  CHECK_THROWS_AS(parse_range("9:4:1"), UsageError);
  CHECK_THROWS_AS(parse_range("4:9:0"), UsageError);
  CHECK_THROWS_AS(parse_range("4:x:1"), UsageError);
  CHECK_THROWS_AS(parse_range("4:9"), UsageError);
  CHECK_THROWS_AS(parse_range(""), UsageError);
}

TEST_CASE("cli: usage errors") {
  Run r = run("single --a -1");
  CHECK(r.code == 2);
  CHECK(r.err.find("a > 0") != std::string::npos);
  r = run("frobnicate");
  CHECK(r.code == 2);
  CHECK(r.err.find("single") != std::string::npos);
  CHECK(run("").code == 2);
  CHECK(run("split --a 1 --l 9:4:1").code == 2);
  CHECK(run("split --a 1 --l 0.5:2:1").code == 2);
  CHECK(run("critical --n 0").code == 2);
  CHECK(run("single --a 1 --format xml").code == 2);
  CHECK(run("single --a 1 --modes 2").code == 2);
  CHECK(run("single").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("cli: single") {
  const Run r = run("single --a 2");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() >= 2);
  const int c = col(rows[0], "lambda");
  for (size_t i = 1; i < rows.size(); ++i) {
    const double lam = std::stod(rows[i][c]);
    CHECK(lam > 0.25);
    CHECK(lam < 1.0);
  }
  const int ma = col(rows[0], "mu_alpha"), mi = col(rows[0], "mu_integral");
  CHECK(std::stod(rows[1][ma]) == doctest::Approx(std::stod(rows[1][mi])).epsilon(1e-3));
}

TEST_CASE("cli: json output round trips and replays") {
  const Run r = run("single --a 1 --format json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const RunRecord rec = RunRecord::from_json(j);
  CHECK(rec.to_json(false) == j);
  CHECK(rec.command == "single");
  CHECK(rec.config.at("a") == 1.0);
  CHECK(rec.provenance.at("truncation").at("N") == 40);
  const RunRecord again = replay(rec);
  CHECK(again.outputs == rec.outputs);
}

TEST_CASE("cli: physical units") {
  const Run r = run("single --d 6.283185307179586 --a 2");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  const int c = col(rows[0], "lambda"), p = col(rows[0], "lambda_phys");
  CHECK(std::stod(rows[1][p]) == std::stod(rows[1][c]) / 4);
  const Run canon = run("single --a 1");
  CHECK(csv_rows(canon.out)[1][c] == rows[1][c]);
}

TEST_CASE("cli: config file with flag precedence") {
  const fs::path cfg = scratch_dir() / "run.cfg";
  std::ofstream(cfg) << "a = 2\nformat = \"json\"\n";
  Run r = run("single --config '" + cfg.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("config").at("a") == 2.0);
  r = run("single --config '" + cfg.string() + "' --a 1");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out).at("config").at("a") == 1.0);
}

TEST_CASE("cli: split sweep, determinism, sidecar, plot and cache") {
  const fs::path d1 = scratch_dir() / "split1", d2 = scratch_dir() / "split2", cache = scratch_dir() / "cache";
  Run r = run("split --a 1 --l 4:9:1 --out '" + d1.string() + "'");
  REQUIRE(r.code == 0);
  r = run("split --a 1 --l 4:9:1 --out '" + d2.string() + "'");
  REQUIRE(r.code == 0);
  const std::string csv = slurp(d1 / "split.csv");
  CHECK(csv == slurp(d2 / "split.csv"));
  CHECK(slurp(d1 / "split_fit.csv") == slurp(d2 / "split_fit.csv"));
  CHECK(slurp(d1 / "split_plot.gp") == slurp(d2 / "split_plot.gp"));
  CHECK(slurp(d1 / "split_plot.gp").find("plot $j1") != std::string::npos);
  const auto side = nlohmann::json::parse(slurp(d1 / "split.record.json"));
  CHECK(side.contains("timestamp"));
  CHECK(csv.find(side.at("timestamp").get<std::string>()) == std::string::npos);

  const auto rows = csv_rows(csv);
  REQUIRE(rows.size() == 7);
  const int lj = col(rows[0], "lambda_j"), lp = col(rows[0], "lambda_plus"), lm = col(rows[0], "lambda_minus");
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][lp]) <= std::stod(rows[i][lj]));
    CHECK(std::stod(rows[i][lj]) <= std::stod(rows[i][lm]));
  }
  const auto fits = csv_rows(slurp(d1 / "split_fit.csv"));
  CHECK(fits.size() == 3);

  const std::string env = "MODEGUIDE_CACHE='" + cache.string() + "'";
  const Run a = run("split --a 1 --l 4:9:1", env);
  const Run b = run("split --a 1 --l 4:9:1", env);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(b.err.find("cache hit") != std::string::npos);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind(csv, 0) == 0);
}

TEST_CASE("cli: critical widths") {
  const Run r = run("critical --n 1");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  const auto& h = rows[0];
  CHECK(std::stod(rows[1][col(h, "a_n")]) > 0);
  CHECK(std::stod(rows[1][col(h, "beta")]) != 0);
  CHECK(std::stod(rows[1][col(h, "mu_beta")]) ==
        doctest::Approx(std::stod(rows[1][col(h, "mu_integral")])).epsilon(1e-3));
  CHECK(rows[1][col(h, "kappa_pred")].find("exp(-3.46410161513775") != std::string::npos);
}

TEST_CASE("cli: threshold") {
  Run r = run("threshold --a 1 --l 4:6:1");
  CHECK(r.code == 4);
  CHECK(r.err.find("critical") != std::string::npos);
  r = run("threshold --l 4:6:1");
  REQUIRE(r.code == 0);
  const Run again = run("threshold --l 4:6:1");
  CHECK(again.out == r.out);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  const int g = col(rows[0], "gap"), p = col(rows[0], "gap_pred");
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][g]) > 0);
    CHECK(std::stod(rows[i][g]) == doctest::Approx(std::stod(rows[i][p])).epsilon(0.05));
  }
  CHECK(r.out.find("# fits") != std::string::npos);
  // the critical width itself is accepted
  const Run c = run("critical --n 1 --format json");
  const double a1 = nlohmann::json::parse(c.out)["outputs"]["table"]["rows"][0][1].get<double>();
  r = run("threshold --a " + format_double(a1) + " --l 5");
  CHECK(r.code == 0);
}

TEST_CASE("cli: oracle") {
  const Run r = run("oracle --a 1 --h 0.015625");
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() >= 2);
  const auto& h = rows[0];
  CHECK(rows[1][col(h, "parity")] == "even");
  CHECK(std::stod(rows[1][col(h, "extrapolated")]) == doctest::Approx(0.85883).epsilon(1e-3));
  CHECK(std::stod(rows[1][col(h, "error_bound")]) > 0);
  CHECK(std::stod(rows[1][col(h, "error_bound")]) < 1e-2);
  CHECK(run("oracle --a 1.03 --h 0.015625").code == 2);
}
