// Drives the installed command line binary end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(MOMENT_TOC_BIN) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/moment_toc_test_") + name;
}

}  // namespace

TEST_CASE("solve exit codes and JSON content") {
  const RunResult ok = run("solve --x0 1,-2,-6,2 --json");
  CHECK(ok.exit_code == 0);
  const json rep = json::parse(ok.out);
  CHECK(rep.at("schema_version") == "1");
  CHECK(rep.at("verdict") == "optimal_found");
  CHECK(rep.at("best").at("case_id") == 4);
  CHECK(std::abs(rep.at("best").at("theta").get<double>() - 11.34087) < 1e-3);
  // Candidate array is sorted by case id and includes rejections.
  int prev = 0;
  bool any_rejected = false;
  for (const auto& c : rep.at("candidates")) {
    CHECK(c.at("case_id").get<int>() >= prev);
    prev = c.at("case_id").get<int>();
    if (!c.at("accepted").get<bool>()) any_rejected = true;
  }
  CHECK(any_rejected);

  CHECK(run("solve --x0 1,-2,-2.39,2").exit_code == 2);
  CHECK(run("solve --x0 0,1,1,1").exit_code == 3);
  CHECK(run("solve --x0 bogus").exit_code == 1);
  CHECK(run("solve --x0 1,2,3").exit_code == 1);
}

TEST_CASE("JSON report round trips") {
  const RunResult ok = run("solve --x0 1,2,-3,0.5 --json");
  REQUIRE(ok.exit_code == 0);
  const json rep = json::parse(ok.out);
  const std::string dumped = rep.dump(2);
  CHECK(json::parse(dumped) == rep);
}

TEST_CASE("accepted-only filters rejections") {
  const RunResult r = run("solve --x0 1,2,-3,0.5 --json --accepted-only");
  REQUIRE(r.exit_code == 0);
  for (const auto& c : json::parse(r.out).at("candidates"))
    CHECK(c.at("accepted").get<bool>());
}

TEST_CASE("simulate writes exact monomial rows") {
  const RunResult r = run("simulate --x0 0,0,0,0 --segments +1:1 --samples 3");
  REQUIRE(r.exit_code == 0);
  std::stringstream ss(r.out);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "t,x1,x2,x3,x4,u");
  std::getline(ss, line);
  std::getline(ss, line);
  std::getline(ss, line);
  std::stringstream last(line);
  std::string field;
  std::vector<std::string> fields;
  while (std::getline(last, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 6);
  CHECK(std::stod(fields[0]) == 1.0);
  CHECK(std::stod(fields[1]) == 1.0);
  CHECK(std::stod(fields[2]) == 0.5);
  CHECK(std::abs(std::stod(fields[3]) - 1.0 / 3) < 1e-15);
  CHECK(std::stod(fields[4]) == 0.25);
  CHECK(fields[5] == "1");
}

TEST_CASE("sampling grids agree at shared times") {
  const RunResult two = run("simulate --x0 0.5,0,0,0 --segments +1:0.5,-1:1.5 --samples 2");
  const RunResult three = run("simulate --x0 0.5,0,0,0 --segments +1:0.5,-1:1.5 --samples 3");
  REQUIRE(two.exit_code == 0);
  REQUIRE(three.exit_code == 0);
  std::stringstream s2(two.out), s3(three.out);
  std::string l2, l3;
  std::getline(s2, l2);
  std::getline(s3, l3);
  CHECK(l2 == l3);
  std::getline(s2, l2);  // t = 0
  std::getline(s3, l3);
  CHECK(l2 == l3);
  std::getline(s2, l2);  // two: final row; three: midpoint then final
  std::getline(s3, l3);
  std::getline(s3, l3);
  CHECK(l2 == l3);
}

TEST_CASE("simulate from a solve report reaches the origin") {
  const std::string report = temp_path("report.json");
  REQUIRE(run("solve --x0 1,-2,-6,2 --json --out " + report).exit_code == 0);
  const RunResult sim = run("simulate --x0 1,-2,-6,2 --report " + report + " --samples 1000");
  REQUIRE(sim.exit_code == 0);
  std::stringstream ss(sim.out);
  std::string line, lastline;
  std::getline(ss, line);
  while (std::getline(ss, line))
    if (!line.empty()) lastline = line;
  std::stringstream last(lastline);
  std::string field;
  std::getline(last, field, ',');  // t
  for (int j = 1; j <= 4; ++j) {
    std::getline(last, field, ',');
    CHECK(std::abs(std::stod(field)) <= 1e-7);
  }
  std::remove(report.c_str());
}

TEST_CASE("verify agrees with the oracle and flags corrupted reports") {
  CHECK(run("verify --x0 1,-2,-6,2").exit_code == 0);
  CHECK(run("verify --x0 1,2,-3,0.5").exit_code == 0);
  CHECK(run("verify --x0 1,-2,-2.39,2").exit_code == 0);

  const std::string report = temp_path("verify.json");
  REQUIRE(run("solve --x0 1,-2,-6,2 --json --out " + report).exit_code == 0);
  json rep;
  {
    std::ifstream in(report);
    rep = json::parse(in);
  }
  rep["best"]["theta"] = rep["best"]["theta"].get<double>() / 2.0;
  {
    std::ofstream out(report);
    out << rep.dump(2);
  }
  CHECK(run("verify --x0 1,-2,-6,2 --report " + report).exit_code == 4);
  std::remove(report.c_str());

  // Oracle precondition: desk scale only.
  CHECK(run("verify --x0 1,0,0,0,0,-1").exit_code == 1);
}

TEST_CASE("single-point sweep matches solve") {
  const RunResult solved = run("solve --x0 1,-2,-6,2 --json");
  const double theta = json::parse(solved.out).at("best").at("theta").get<double>();

  const RunResult swept = run("sweep --x0 1,-2,-6,2 --sweep 3:-6:-6:1");
  REQUIRE(swept.exit_code == 0);
  std::stringstream ss(swept.out);
  std::string header, row;
  std::getline(ss, header);
  CHECK(header == "x1,x2,x3,x4,verdict,theta,case_id");
  std::getline(ss, row);
  std::stringstream rs(row);
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(rs, field, ',')) fields.push_back(field);
  REQUIRE(fields.size() == 7);
  CHECK(fields[4] == "optimal_found");
  CHECK(std::stod(fields[5]) == doctest::Approx(theta).epsilon(1e-12));
  CHECK(fields[6] == "4");
}

TEST_CASE("sweep of a mirrored line mirrors the verdicts") {
  // The third component is invariant under the sign map, so the same
  // sweep range walks corresponding points on both sides.
  const std::string out_a = temp_path("sweep_a.csv");
  const std::string out_b = temp_path("sweep_b.csv");
  REQUIRE(run("sweep --x0 1,-2,-6,2 --sweep 3:-7:-5:5 --out " + out_a).exit_code == 0);
  REQUIRE(run("sweep --x0 -1,2,-6,-2 --sweep 3:-7:-5:5 --out " + out_b).exit_code == 0);
  std::ifstream fa(out_a), fb(out_b);
  std::string la, lb;
  std::getline(fa, la);
  std::getline(fb, lb);
  int rows = 0;
  while (std::getline(fa, la) && std::getline(fb, lb)) {
    std::stringstream sa(la), sb(lb);
    std::vector<std::string> va, vb;
    std::string f;
    while (std::getline(sa, f, ',')) va.push_back(f);
    while (std::getline(sb, f, ',')) vb.push_back(f);
    REQUIRE(va.size() == 7);
    REQUIRE(vb.size() == 7);
    CHECK(va[4] == vb[4]);
    if (va[4] == "optimal_found")
      CHECK(std::stod(va[5]) == doctest::Approx(std::stod(vb[5])).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == 5);
  std::remove(out_a.c_str());
  std::remove(out_b.c_str());
}

TEST_CASE("moments subcommand prints the assembled sequence") {
  const RunResult r = run("moments --x0 1,0,0,0 --a 0 --b 1 --theta 1 --json");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  const auto c = j.at("c").get<std::vector<double>>();
  REQUIRE(c.size() == 4);
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(-0.5));
  CHECK(c[2] == doctest::Approx(-1.0 / 3));
  CHECK(c[3] == doctest::Approx(-0.25));
}
