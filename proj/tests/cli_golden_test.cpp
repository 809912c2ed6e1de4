#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "cli_cases.hpp"
#include "cli_runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream stream(path);
  REQUIRE_MESSAGE(static_cast<bool>(stream), "missing golden file ", path);
  std::ostringstream out;
  out << stream.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("command-line reports match the golden files") {
  const std::string binary = SIMPLEXCERT_CLI_PATH;
  const std::string data_dir = SIMPLEXCERT_TEST_DATA_DIR;
  for (const auto& test_case : clicases::kCases) {
    CAPTURE(test_case.name);
    const auto result =
        clirunner::run_cli(binary, data_dir + "/fixtures", test_case.args);
    CHECK(result.exit_code == test_case.expected_exit);
    const std::string golden =
        read_file(data_dir + "/golden/" + test_case.name + ".json");
    CHECK(result.output == golden);
  }
}
