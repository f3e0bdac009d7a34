#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beltrami/config.hpp"

using namespace beltrami;
namespace fs = std::filesystem;

namespace {

std::string header_value(const fs::path& p, const std::string& key) {
  std::ifstream in(p);
  std::string line;
  const std::string tag = "# " + key + ": ";
  while (std::getline(in, line))
    if (line.rfind(tag, 0) == 0) return line.substr(tag.size());
  return {};
}

ExperimentConfig parse(const std::string& experiment, const std::string& text) {
  std::istringstream in(text);
  return load_config(experiment, KeyValueFile::parse(in));
}

}  // namespace

TEST_CASE("numbers with a pi suffix") {
  CHECK(parse_number("16pi") == doctest::Approx(16 * std::numbers::pi));
  CHECK(parse_number("0.5 pi") == doctest::Approx(0.5 * std::numbers::pi));
  CHECK(parse_number("2*pi") == doctest::Approx(2 * std::numbers::pi));
  CHECK(parse_number("pi") == doctest::Approx(std::numbers::pi));
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK_THROWS_AS(parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(parse_number("1.0x"), ConfigError);
}

TEST_CASE("defaults validate and survive a print/parse round trip") {
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    const ExperimentConfig c = default_config(name);
    CHECK_NOTHROW(c.validate());
    std::ostringstream os;
    c.print(os);
    const ExperimentConfig back = parse(name, os.str());
    std::ostringstream os2;
    back.print(os2);
    CHECK(os.str() == os2.str());
  }
  CHECK_THROWS_AS(default_config("theorem3"), ConfigError);
}

TEST_CASE("overrides are applied") {
  const auto c = parse("theorem2", "[grid]\nn = 64\nbox_length = 4pi\n[datum]\nN = 4\nbeta = 11\n[solver]\ndt = 0.005\n");
  CHECK(c.grid.n == 64);
  CHECK(c.datum.N == 4);
  CHECK(c.datum.beta == 11);
  CHECK(c.solver.dt == 0.005);
  CHECK(c.solver.t_end == c.datum.T);
}

TEST_CASE("shipped configs load") {
  for (const auto& e : fs::directory_iterator(BELTRAMI_CONFIG_DIR)) {
    CAPTURE(e.path());
    const std::string name = e.path().stem().string();
    CHECK_NOTHROW(load_config(name, KeyValueFile::load(e.path())));
  }
}

TEST_CASE("inconsistent configs are rejected with a specific message") {
  int count = 0;
  for (const auto& e : fs::directory_iterator(BELTRAMI_INVALID_CONFIG_DIR)) {
    CAPTURE(e.path());
    const std::string command = header_value(e.path(), "command");
    const std::string expect = header_value(e.path(), "expect");
    REQUIRE(!command.empty());
    REQUIRE(!expect.empty());
    std::string message;
    try {
      load_config(command, KeyValueFile::load(e.path()));
    } catch (const ConfigError& err) {
      message = err.what();
    }
    CAPTURE(message);
    CHECK(message.find(expect) != std::string::npos);
    ++count;
  }
  CHECK(count >= 20);
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(KeyValueFile::load("/nonexistent/beltrami.cfg"), ConfigError);
}
