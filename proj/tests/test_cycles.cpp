#include "tacf/cycles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace tacf;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& content, const char* name) {
    path = std::filesystem::temp_directory_path() /
           (std::string("tacf_cycle_") + name + ".csv");
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("load_cycle converts mph exactly") {
  std::string content = "time_s,speed_mph\n";
  for (int t = 0; t <= 10; ++t)
    content += std::to_string(t) + "," + (t == 10 ? "60" : "30") + "\n";
  TempFile f(content, "mph");
  DriveCycle c = load_cycle(f.path.string());
  REQUIRE(c.length() == 11);
  CHECK(c.speeds[10] == Catch::Approx(26.8224).epsilon(1e-12));
  CHECK(c.speeds[0] == Catch::Approx(30 * 0.44704).epsilon(1e-12));
}

TEST_CASE("load_cycle passes m/s through and round-trips 1 Hz inputs "
          "bit-exactly") {
  std::string content = "time_s,speed_mps\n0,0\n1,3.1\n2,7.25\n3,7.25\n4,0\n";
  TempFile f(content, "mps");
  DriveCycle c = load_cycle(f.path.string());
  REQUIRE(c.length() == 5);
  CHECK(c.speeds[0] == 0.0);
  CHECK(c.speeds[1] == 3.1);
  CHECK(c.speeds[2] == 7.25);
  CHECK(c.speeds[3] == 7.25);
  CHECK(c.speeds[4] == 0.0);
}

TEST_CASE("load_cycle resamples sub-second spacing onto integer seconds") {
  std::string content = "time_s,speed_mps\n";
  // samples every 0.5 s: v(t) = 2t, so the 1 Hz grid must read 0,2,4,6
  for (int i = 0; i <= 6; ++i) {
    const double t = 0.5 * i;
    content += std::to_string(t) + "," + std::to_string(2.0 * t) + "\n";
  }
  TempFile f(content, "halfsec");
  DriveCycle c = load_cycle(f.path.string());
  REQUIRE(c.length() == 4);
  for (int t = 0; t < 4; ++t)
    CHECK(c.speeds[static_cast<std::size_t>(t)] ==
          Catch::Approx(2.0 * t).margin(1e-9));
}

TEST_CASE("load_cycle reports offending lines") {
  TempFile neg("time_s,speed_mps\n0,1\n1,-3\n", "neg");
  try {
    load_cycle(neg.path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("negative speed") != std::string::npos);
  }

  TempFile bad("time_s,speed_mps\n0,1\nbogus\n", "malformed");
  try {
    load_cycle(bad.path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }

  TempFile hdr("seconds,velocity\n0,1\n", "header");
  CHECK_THROWS_AS(load_cycle(hdr.path.string()), ParseError);
  CHECK_THROWS_AS(load_cycle("/nonexistent/nowhere.csv"), ParseError);

  TempFile nonnum("time_s,speed_mph\n0,1\n1,fast\n", "nonnum");
  try {
    load_cycle(nonnum.path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("speed") != std::string::npos);
  }
}

TEST_CASE("load_cycle accepts CRLF line endings") {
  TempFile f("time_s,speed_mps\r\n0,1\r\n1,2\r\n", "crlf");
  DriveCycle c = load_cycle(f.path.string());
  REQUIRE(c.length() == 2);
  CHECK(c.speeds[1] == 2.0);
}

TEST_CASE("preview returns the next N speeds and pads past the end") {
  DriveCycle c;
  c.name = "synthetic";
  c.speeds = {1.0, 2.0, 3.0, 4.0, 5.0};

  auto head = preview(c, 0, 3);
  REQUIRE(head.size() == 3);
  CHECK(head[0] == 2.0);
  CHECK(head[1] == 3.0);
  CHECK(head[2] == 4.0);

  auto tail = preview(c, 4, 3);
  CHECK(tail == std::vector<double>{5.0, 5.0, 5.0});

  auto mixed = preview(c, 3, 3);
  CHECK(mixed == std::vector<double>{5.0, 5.0, 5.0});

  CHECK_THROWS_AS(preview(c, 5, 3), ContractViolation);
}

TEST_CASE("preview of a constant cycle is constant") {
  DriveCycle c;
  c.speeds.assign(20, 7.0);
  for (std::size_t t = 0; t < 20; ++t)
    for (double v : preview(c, t, 4)) CHECK(v == 7.0);
}

TEST_CASE("bundled presets load and look like the advertised schedules") {
  DriveCycle us06 = resolve_cycle("us06");
  CHECK(us06.length() >= 590);
  CHECK(us06.max_speed() == Catch::Approx(80.3 * 0.44704).epsilon(1e-9));
  CHECK(us06.speeds.front() == 0.0);

  DriveCycle nycc = resolve_cycle("nycc");
  CHECK(nycc.length() >= 590);
  CHECK(nycc.max_speed() < 15.0);  // urban cycle stays slow

  CHECK_THROWS_AS(resolve_cycle("not_a_preset"), ParseError);
}
