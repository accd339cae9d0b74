#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "membench/report.hpp"

// CLI_PATH and SWEEP_DIR are provided by the build.

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) {
    r.out.append(buf, n);
    if (n < sizeof(buf)) break;
  }
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("run prints a parseable row with unit efficiency") {
  auto r = run_cli(
      "run --backend sim --pattern 1d --config R1W1 --vector 16 --halo 0 "
      "--no-interleave --freq 266.666 --size-bytes 16777216");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == membench::ReportRow::csv_header());
  const auto row = membench::ReportRow::parse_csv(lines[1]);
  CHECK(row.backend == "sim");
  CHECK(row.config == "R1W1");
  CHECK(row.vector_lanes == 16);
  CHECK(!row.interleave);
  CHECK(row.eff_expected == doctest::Approx(1.0).epsilon(0.01));
  CHECK(row.gbps_effective > 33.0);
}

TEST_CASE("invalid flags exit with code 2") {
  CHECK(run_cli("run --vector 0").exit_code == 2);
  CHECK(run_cli("run --backend quantum").exit_code == 2);
  CHECK(run_cli("advise").exit_code == 2);
  CHECK(run_cli("run --pattern 15d --dimx 1000").exit_code == 2);
}

TEST_CASE("rows round-trip losslessly through the CSV schema") {
  auto r = run_cli(
      "run --backend sim --vector 8 --halo 2 --pad 3 --freq 199.5 "
      "--no-interleave --size-bytes 8388608 --no-header");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1);
  const auto row = membench::ReportRow::parse_csv(lines[0]);
  CHECK(row.to_csv() == lines[0]);
  const auto again = membench::ReportRow::parse_csv(row.to_csv());
  CHECK(again.gbps_effective == row.gbps_effective);
  CHECK(again.freq_mhz == row.freq_mhz);
}

TEST_CASE("sweep emits one row per cross-product point") {
  const std::string spec = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/membench_sweep_spec.json";
  {
    std::ofstream os(spec);
    os << R"({"fixed": {"size_bytes": 4194304, "interleave": false},
              "axes": {"vector": [4, 8, 16], "halo": [0, 16]}})";
  }
  auto r = run_cli("sweep --spec " + spec);
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 6);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = membench::ReportRow::parse_csv(lines[i]);
    CHECK(row.to_csv() == lines[i]);
  }
  // vector is the outer axis, halo the inner one.
  CHECK(membench::ReportRow::parse_csv(lines[1]).vector_lanes == 4);
  CHECK(membench::ReportRow::parse_csv(lines[2]).halo == 16);
  CHECK(membench::ReportRow::parse_csv(lines[6]).vector_lanes == 16);
}

TEST_CASE("sweep rejects empty or unknown axes by name") {
  const std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  const std::string empty_spec = dir + "/membench_empty_axes.json";
  {
    std::ofstream os(empty_spec);
    os << R"({"axes": {"vector": []}})";
  }
  CHECK(run_cli("sweep --spec " + empty_spec).exit_code == 2);
  const std::string unknown_spec = dir + "/membench_unknown_axis.json";
  {
    std::ofstream os(unknown_spec);
    os << R"({"axes": {"voltage": [1]}})";
  }
  CHECK(run_cli("sweep --spec " + unknown_spec).exit_code == 2);
}

TEST_CASE("shipped sweep specs execute") {
  auto r = run_cli("sweep --spec " + std::string(SWEEP_DIR) +
                   "/frequency.json");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 5);
  // Linear region: each step up in frequency helps until the bus saturates.
  double prev = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = membench::ReportRow::parse_csv(lines[i]);
    CHECK(row.gbps_effective >= prev * 0.999);
    prev = row.gbps_effective;
  }
}

TEST_CASE("advise prints narrative plus JSON") {
  auto r = run_cli("advise --halo 8 --vector 16");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  const auto j = nlohmann::json::parse(lines[1]);
  CHECK(j["pad"] == 8);
  CHECK(j["class"] == "full");

  auto merge = run_cli("advise --reads 3 --writes 1");
  REQUIRE(merge.exit_code == 0);
  CHECK(nlohmann::json::parse(lines_of(merge.out)[1])["rule"] ==
        "no-straightforward-merge");

  auto trivial = run_cli("advise --halo 0 --vector 4");
  CHECK(nlohmann::json::parse(lines_of(trivial.out)[1])["pad"] == 0);
}

TEST_CASE("check runs deterministically against the shipped anchors") {
  const std::string args = std::string("check --anchors ") + ANCHORS_PATH;
  auto first = run_cli(args);
  auto second = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(first.out.find("FAIL") == std::string::npos);
}

TEST_CASE("trace exports the documented record format") {
  auto r = run_cli("trace --vector 2 --bsize 8 --halo 2 --size-bytes 16 "
                   "--max-cycles 1");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == "cycle,port,dir,elem_index,byte_addr,valid,redundant");
  CHECK(lines[1] == "0,r0,R,-2,-8,0,0");
}
