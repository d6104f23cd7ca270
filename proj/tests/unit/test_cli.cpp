#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "mlkit/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mlkit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

double parse_value(const std::string& line) {
  const auto p = line.find("value=");
  REQUIRE(p != std::string::npos);
  return std::stod(line.substr(p + 6));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  if (header != nullptr) {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

/// Points MLKIT_OUTPUT_DIR at a fresh directory for the lifetime of the object.
struct ScratchDir {
  fs::path dir;
  ScratchDir() {
    dir = fs::temp_directory_path() / ("mlkit_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    ::setenv("MLKIT_OUTPUT_DIR", dir.c_str(), 1);
  }
  ~ScratchDir() {
    ::unsetenv("MLKIT_OUTPUT_DIR");
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

}  // namespace

TEST_CASE("eval prints a single result line") {
  const Outcome o = call({"eval", "ml", "--alpha", "1", "--beta", "1", "--x", "1"});
  CHECK(o.code == 0);
  CHECK(o.out.rfind("value=", 0) == 0);
  CHECK(o.out.find("est_error=") != std::string::npos);
  CHECK(std::fabs(parse_value(o.out) - std::exp(1.0)) < 1e-12);

  CHECK(call({"eval", "wright", "--alpha", "1", "--mu", "1", "--x", "1"}).code == 0);
  CHECK(std::fabs(parse_value(call({"eval", "laguerre", "--x", "1"}).out) - 2.279585302336067) < 1e-12);
  CHECK(std::fabs(parse_value(call({"eval", "rgamma", "--x", "3"}).out) - 0.5) < 1e-15);
  CHECK(std::fabs(parse_value(call({"eval", "trig", "--alpha", "1", "--x", "0.3", "--part", "sin"}).out) -
                  std::sin(0.3)) < 1e-14);
}

TEST_CASE("exit code 2 names the offending flag") {
  Outcome o = call({"eval", "ml", "--alpha", "-1", "--beta", "1", "--x", "0"});
  CHECK(o.code == 2);
  CHECK(o.err.find("--alpha") != std::string::npos);
  CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);

  o = call({"eval", "ml", "--alpha", "inf", "--x", "0"});
  CHECK(o.code == 2);
  CHECK(o.err.find("--alpha") != std::string::npos);

  o = call({"eval", "ml", "--alpha", "0.5"});
  CHECK(o.code == 2);
  CHECK(o.err.find("--x") != std::string::npos);

  o = call({"eval", "esab", "--s", "1", "--alpha", "0.5", "--x", "-1"});
  CHECK(o.code == 2);
  CHECK(o.err.find("--alpha") != std::string::npos);

  CHECK(call({"compose", "power", "--x", "1", "--y", "1", "--n", "-2", "--alpha", "0.5"}).code == 2);
  CHECK(call({"integrate", "stretched", "--alpha", "1", "--gamma", "0.5"}).code == 2);
  CHECK(call({"pde", "diffusion", "--alpha", "3.5", "--t", "1", "--out", "/dev/null"}).code == 2);
  CHECK(call({"pde", "drift", "--a", "1", "--b", "1", "--alpha", "1.5", "--t", "1"}).code == 2);
  CHECK(call({"dist", "laskin", "--alpha", "0.3", "--lambda", "1"}).code == 2);
  CHECK(call({"dist", "laskin", "--alpha", "0.8"}).code == 2);
  CHECK(call({"figures", "fig1", "--alpha", "1"}).code == 2);
  CHECK(call({"figures", "fig2", "--a", "1", "--alpha", "1", "--t", "1"}).code == 2);
  CHECK(call({"figures", "fig3"}).code == 2);
  CHECK(call({"figures", "fig4"}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({}).code == 2);
}

TEST_CASE("exit code 3 on non-convergence") {
  Outcome o = call({"compose", "semigroup", "--x", "3", "--y", "3", "--alpha", "0.5", "--n-max", "5"});
  CHECK(o.code == 3);
  CHECK(o.out.rfind("value=", 0) == 0);
  o = call({"eval", "esab", "--s", "1", "--alpha", "0.5", "--x", "-30", "--cap", "20"});
  CHECK(o.code == 3);
}

TEST_CASE("compose and integrate") {
  const Outcome o = call({"compose", "semigroup", "--x", "0.2", "--y", "0.3", "--alpha", "0.5"});
  CHECK(o.code == 0);
  CHECK(std::fabs(parse_value(o.out) - 1.8500442226215930673) < 1e-10);
  const Outcome g = call({"integrate", "gaussian", "--alpha", "1", "--beta", "1"});
  CHECK(std::fabs(parse_value(g.out) - std::sqrt(M_PI)) < 1e-14);
}

TEST_CASE("help and version exit 0") {
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"eval", "ml", "--help"}).code == 0);
  CHECK(call({"--version"}).code == 0);
}

TEST_CASE("dist writes a normalized CSV under MLKIT_OUTPUT_DIR") {
  ScratchDir scratch;
  const Outcome o = call({"dist", "laskin", "--alpha", "0.8", "--lambda", "1.0", "--out", "d.csv"});
  REQUIRE(o.code == 0);
  std::vector<std::string> header;
  const auto rows = read_csv(scratch.dir / "d.csv", &header);
  CHECK(header == std::vector<std::string>{"m", "probability"});
  double total = 0.0;
  for (const auto& r : rows) total += r[1];
  CHECK(std::fabs(total - 1.0) < 1e-6);

  REQUIRE(call({"dist", "schrodinger", "--alpha", "0.9", "--omega", "1", "--t", "1.2", "--out", "s.json"}).code == 0);
  const auto doc = nlohmann::json::parse(slurp(scratch.dir / "s.json"));
  CHECK(doc["metadata"]["parameters"]["intensity"].get<double>() ==
        doctest::Approx(std::pow(1.2, 1.8)).epsilon(1e-14));
  CHECK(doc["columns"][1] == "probability");
  CHECK(doc["metadata"]["tail_converged"] == true);

  REQUIRE(call({"dist", "laskin", "--alpha", "0.8", "--lambda", "1", "--samples", "50", "--seed", "9",
                "--out", "a.csv"})
              .code == 0);
  REQUIRE(call({"dist", "laskin", "--alpha", "0.8", "--lambda", "1", "--samples", "50", "--seed", "9",
                "--out", "b.csv"})
              .code == 0);
  CHECK(slurp(scratch.dir / "a.csv") == slurp(scratch.dir / "b.csv"));
  CHECK(read_csv(scratch.dir / "a.csv").size() == 50);
}

TEST_CASE("config file with flag precedence") {
  ScratchDir scratch;
  const fs::path cfg = scratch.dir / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment\nalpha = 0.5\nbeta=1\nx = 2\n";
  }
  Outcome o = call({"eval", "ml", "--config", cfg.string(), "--x", "1"});
  REQUIRE(o.code == 0);
  CHECK(std::fabs(parse_value(o.out) - std::exp(1.0) * std::erfc(-1.0)) < 1e-12);

  {
    std::ofstream f(cfg);
    f << "alpha = 0.5\nbogus = 3\n";
  }
  o = call({"eval", "ml", "--config", cfg.string(), "--x", "1"});
  CHECK(o.code == 2);
  CHECK(o.err.find("bogus") != std::string::npos);
  CHECK(call({"eval", "ml", "--config", (scratch.dir / "missing.cfg").string(), "--x", "1"}).code == 2);

  {
    std::ofstream f(cfg);
    f << "alpha = 1.5\nt = 1\nexperimental = true\npoints = 64\n";
  }
  o = call({"figures", "fig1", "--config", cfg.string(), "--alpha", "3.5", "--out", "e.csv"});
  CHECK(o.code == 0);
}

TEST_CASE("figure families") {
  ScratchDir scratch;
  SUBCASE("fig1 emits one curve per time over [-10, 10]") {
    REQUIRE(call({"figures", "fig1", "--alpha", "1.5", "--t", "0.2,0.6,1.0", "--points", "256"}).code == 0);
    std::vector<std::string> header;
    const auto rows = read_csv(scratch.dir / "fig1.csv", &header);
    CHECK(header == std::vector<std::string>{"curve", "alpha", "t", "x", "value"});
    CHECK(rows.size() == 3 * 257);
    CHECK(rows.front()[3] == -10.0);
    CHECK(rows[256][3] == 10.0);
    CHECK(rows.back()[0] == 2.0);
    CHECK(call({"figures", "fig1", "--alpha", "3.5", "--t", "1"}).code == 2);
  }
  SUBCASE("fig2 at alpha 1 follows the Weyl form") {
    REQUIRE(call({"figures", "fig2", "--a", "1", "--b", "0.5", "--alpha", "1,0.5", "--t", "0.4", "--points",
                  "200"})
                .code == 0);
    const auto rows = read_csv(scratch.dir / "fig2.csv");
    CHECK(rows.size() == 2 * 201);
    double worst = 0.0;
    for (const auto& r : rows) {
      if (r[0] != 0.0) continue;
      const double x = r[5];
      const double t = 0.4;
      const double want = std::exp(x * t - 0.5 * 0.5 * t * t) * std::exp(-(x - 0.5 * t) * (x - 0.5 * t));
      worst = std::max(worst, std::fabs(r[6] - want));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("fig3 vanishes at alpha 1") {
    REQUIRE(call({"figures", "fig3", "--t", "0.5,1,2"}).code == 0);
    const auto rows = read_csv(scratch.dir / "fig3.csv");
    CHECK(rows.size() == 150);
    int anchors = 0;
    for (const auto& r : rows) {
      if (r[3] == 1.0) {
        ++anchors;
        CHECK(std::fabs(r[4]) < 1e-12);
      } else {
        CHECK(r[4] > 0.0);
      }
    }
    CHECK(anchors == 3);
  }
  SUBCASE("fig4 at alpha 1 and m 1 is X exp(-X)") {
    REQUIRE(call({"figures", "fig4", "--alpha", "1", "--m", "1,2,4"}).code == 0);
    const auto rows = read_csv(scratch.dir / "fig4.csv");
    CHECK(rows.size() == 3 * 101);
    for (const auto& r : rows) {
      if (r[1] == 1.0) CHECK(std::fabs(r[4] - r[3] * std::exp(-r[3])) < 1e-10);
    }
  }
  SUBCASE("reruns are byte-identical") {
    const std::vector<std::string> args = {"figures", "fig4", "--alpha", "0.7", "--points", "20"};
    REQUIRE(call(args).code == 0);
    const std::string first = slurp(scratch.dir / "fig4.csv");
    REQUIRE(call(args).code == 0);
    CHECK(slurp(scratch.dir / "fig4.csv") == first);
    REQUIRE(call({"figures", "fig3", "--t", "1", "--format", "json"}).code == 0);
    const std::string j1 = slurp(scratch.dir / "fig3.json");
    REQUIRE(call({"figures", "fig3", "--t", "1", "--format", "json"}).code == 0);
    CHECK(slurp(scratch.dir / "fig3.json") == j1);
  }
}

TEST_CASE("pde commands write grids") {
  ScratchDir scratch;
  REQUIRE(call({"pde", "diffusion", "--alpha", "1", "--t", "0.5", "--points", "128", "--out", "h.csv"}).code == 0);
  const auto rows = read_csv(scratch.dir / "h.csv");
  CHECK(rows.size() == 128);
  for (const auto& r : rows) {
    const double want = std::exp(-r[0] * r[0] / 3.0) / std::sqrt(3.0);
    CHECK(std::fabs(r[1] - want) < 1e-6);
  }
  CHECK(call({"pde", "drift", "--a", "1", "--b", "0.5", "--alpha", "0.8", "--t", "0.3", "--out", "d.json"}).code == 0);
  CHECK(fs::exists(scratch.dir / "d.json"));
}

TEST_CASE("installed tool honours the exit-code contract") {
  const char* tool = std::getenv("MLKIT_TOOL");
  if (tool == nullptr) return;
  const std::string t = std::string("\"") + tool + "\"";
  CHECK(std::system((t + " eval ml --alpha 1 --beta 1 --x 1 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((t + " eval ml --alpha -1 --beta 1 --x 0 2> /dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system(
            (t + " compose semigroup --x 3 --y 3 --alpha 0.5 --n-max 5 > /dev/null 2>&1").c_str())) == 3);
}
