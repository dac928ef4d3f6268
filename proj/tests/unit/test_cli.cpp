#include "cli/commands.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using mvop::cli::run;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> model(const std::string& a, const std::string& b, const std::string& n,
                               const std::string& omega) {
  return {"--alpha", a, "--beta", b, "--order-n", n, "--omega", omega};
}

std::vector<std::string> concat(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

/// Data rows of a CSV document as numbers; the header goes to `header`.
std::vector<std::vector<std::string>> csv_rows(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      if (header) *header = line;
      first = false;
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path temp_path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "mvop_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("verify passes on a Legendre instance") {
  const Result r = invoke(concat({"verify"}, model("0", "0", "8", "0.2")));
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["command"] == "verify");
  CHECK(j["status"] == "pass");
  CHECK(j["params"]["N"] == 8);
  bool found = false;
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c["pass"] == true);
    CHECK(c["residual"].get<double>() <= c["threshold"].get<double>());
    if (c["name"] == "commutator") {
      found = true;
      CHECK(c["residual"].get<double>() <= 1e-11);
    }
  }
  CHECK(found);
}

TEST_CASE("verify includes the Chebyshev golden checks") {
  const Result r = invoke(concat({"verify"}, model("0.5", "-0.5", "5", "0.7")));
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  std::vector<std::string> names;
  for (const auto& c : j["checks"]) names.push_back(c["name"]);
  for (const char* n : {"chebyshev_weight", "chebyshev_monic_norm", "chebyshev_dtilde_coefficients",
                        "chebyshev_kernel", "first_order_ode"}) {
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  }
}

TEST_CASE("invalid parameters exit 2 with a message") {
  const Result r = invoke(concat({"verify"}, model("0", "0", "4", "1.5")));
  CHECK(r.code == 2);
  CHECK(r.err.find("Omega must lie in (-1, 1]") != std::string::npos);
  CHECK(invoke(concat({"spectrum"}, model("-1", "0", "4", "0.5"))).code == 2);
  CHECK(invoke({"verify", "--alpha", "0"}).code == 2);
  CHECK(invoke({"nonsense"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke(concat({"spectrum", "--format", "xml"}, model("0", "0", "4", "0.5"))).code == 2);
  CHECK(invoke(concat({"verify", "--quad-order", "3"}, model("0", "0", "4", "0.5"))).code == 2);
}

TEST_CASE("unwritable output exits 2") {
  const Result r =
      invoke(concat({"spectrum", "--output", "/nonexistent-dir/sub/out.csv"}, model("0", "0", "2", "0.5")));
  CHECK(r.code == 2);
}

TEST_CASE("fault injection makes verify fail") {
  const Result r = invoke(
      concat({"verify", "--inject-ltilde-fault", "2", "3", "1e-6"}, model("0.3", "1.2", "6", "0.4")));
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j["status"] == "fail");
  bool oracle_failed = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "ltilde_oracle") oracle_failed = (c["pass"] == false);
  }
  CHECK(oracle_failed);
}

TEST_CASE("spectrum CSV") {
  std::string header;
  const Result full = invoke(concat({"spectrum"}, model("0.3", "1.2", "3", "1")));
  CHECK(full.code == 0);
  const auto rows_full = csv_rows(full.out, &header);
  CHECK(header == "sector,index,lambda,chi");
  CHECK(rows_full.size() == 8);
  for (const auto& row : rows_full) CHECK(std::abs(std::stod(row[2]) - 1.0) <= 1e-12);

  const Result r = invoke(concat({"spectrum"}, model("0", "0", "20", "0.2")));
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 42);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == rows[i - 1][0]) CHECK(std::stod(rows[i][2]) <= std::stod(rows[i - 1][2]));
  }
}

TEST_CASE("spectrum CSV file writes a gap sidecar") {
  const fs::path out = temp_path("spectrum.csv");
  fs::remove(out);
  fs::remove(out.string() + ".gaps.csv");
  const Result r = invoke(concat({"spectrum", "--output", out.string()}, model("0", "0", "5", "0.2")));
  CHECK(r.code == 0);
  CHECK(csv_rows(read_file(out)).size() == 12);
  std::string header;
  const auto gaps = csv_rows(read_file(out.string() + ".gaps.csv"), &header);
  CHECK(header == "sector,gap_M,gap_Ltilde,ratio,M_unresolved");
  CHECK(gaps.size() == 2);
}

TEST_CASE("spectrum JSON schema") {
  const Result r = invoke(concat({"spectrum", "--format", "json"}, model("0", "0", "20", "0.2")));
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j.contains("params"));
  REQUIRE(j["sectors"].size() == 2);
  for (const auto& s : j["sectors"]) {
    CHECK(s["lambda"].size() == 21);
    CHECK(s["chi"].size() == 21);
    CHECK(s["gaps"].contains("M"));
    CHECK(s["gaps"].contains("Ltilde"));
    CHECK(s["gaps"]["Ltilde"].get<double>() / s["gaps"]["M"].get<double>() >= 1e3);
  }
}

TEST_CASE("eigenfunctions CSV") {
  std::string header;
  const Result r0 = invoke(concat({"eigenfunctions", "--grid-points", "5"}, model("0.3", "1.2", "0", "0.4")));
  CHECK(r0.code == 0);
  const auto rows0 = csv_rows(r0.out, &header);
  REQUIRE(rows0.size() == 5);
  CHECK(header.rfind("x,phi0_1,phi0_2,phi1_1,phi1_2", 0) == 0);
  for (std::size_t c = 1; c < rows0[0].size(); ++c) {
    for (const auto& row : rows0) CHECK(std::stod(row[c]) == doctest::Approx(std::stod(rows0[0][c])).epsilon(1e-13));
  }

  const Result r3 = invoke(concat({"eigenfunctions", "--grid-points", "3"}, model("0", "0", "6", "0.2")));
  CHECK(r3.code == 0);
  const auto rows3 = csv_rows(r3.out);
  REQUIRE(rows3.size() == 3);
  CHECK(rows3[0].size() == 9);
  CHECK(std::stod(rows3[0][0]) == doctest::Approx(-1 + 1e-6));
  CHECK(std::stod(rows3[2][0]) == doctest::Approx(0.2 - 1e-6));

  const Result rc =
      invoke(concat({"eigenfunctions", "--grid-points", "9", "--check", "--top-k", "3"}, model("0.3", "1.2", "6", "0.4")));
  CHECK(rc.code == 0);
  const auto rowsc = csv_rows(rc.out, &header);
  CHECK(header.find(",residual") != std::string::npos);
  for (const auto& row : rowsc) {
    CHECK(row.size() == 8);
    CHECK(std::stod(row.back()) <= 1e-8);
  }
}

TEST_CASE("kernel CSV") {
  std::string header;
  const Result r0 = invoke(concat({"kernel", "--grid-points", "4"}, model("0", "0", "0", "0.5")));
  CHECK(r0.code == 0);
  const auto rows0 = csv_rows(r0.out, &header);
  CHECK(header == "x,y,k11,k12,k21,k22");
  REQUIRE(rows0.size() == 16);
  for (const auto& row : rows0) {
    CHECK(std::stod(row[2]) == doctest::Approx(0.5));
    CHECK(std::stod(row[3]) == 0.0);
    CHECK(std::stod(row[4]) == 0.0);
    CHECK(std::stod(row[5]) == doctest::Approx(0.5));
  }

  const Result r = invoke(concat({"kernel", "--grid-points", "5"}, model("0.5", "-0.5", "2", "0.7")));
  CHECK(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 25);
  // k12(x, y) = k21(y, x): row (i, j) against row (j, i).
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const auto& a = rows[5 * i + j];
      const auto& b = rows[5 * j + i];
      CHECK(a[0] == b[1]);
      CHECK(std::abs(std::stod(a[3]) - std::stod(b[4])) <= 1e-13 * (1 + std::abs(std::stod(a[3]))));
    }
  }
}

TEST_CASE("identical configurations give bit-identical files") {
  const std::vector<std::vector<std::string>> commands = {
      concat({"verify"}, model("0.3", "1.2", "6", "0.4")),
      concat({"spectrum", "--format", "json"}, model("0", "0", "12", "0.2")),
      concat({"eigenfunctions", "--check", "--grid-points", "11"}, model("0.5", "-0.5", "5", "0.7")),
      concat({"kernel", "--grid-points", "7"}, model("1.7", "-0.5", "4", "-0.6")),
  };
  int k = 0;
  for (const auto& cmd : commands) {
    const fs::path a = temp_path("det_a_" + std::to_string(k));
    const fs::path b = temp_path("det_b_" + std::to_string(k));
    ++k;
    CHECK(invoke(concat(cmd, {"--output", a.string()})).code == 0);
    CHECK(invoke(concat(cmd, {"--output", b.string()})).code == 0);
    const std::string sa = read_file(a);
    CHECK(!sa.empty());
    CHECK(sa == read_file(b));
  }
}

TEST_CASE("seed changes the sample set but not the verdict") {
  const Result a = invoke(concat({"verify", "--seed", "1"}, model("0", "0", "4", "0.3")));
  const Result b = invoke(concat({"verify", "--seed", "2"}, model("0", "0", "4", "0.3")));
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(json::parse(a.out)["seed"] == 1);
  CHECK(a.out != b.out);
}
