#pragma once

#include <cstdio>
#include <string>

// Runs the command-line binary from the fixtures directory and captures
// stdout and the exit code.
namespace clirunner {

struct RunResult {
  std::string output;
  int exit_code = -1;
};

inline RunResult run_cli(const std::string& binary,
                         const std::string& fixtures_dir,
                         const std::string& args) {
  // Drop any ambient seed override so the golden outputs stay fixed.
  const std::string command = "cd '" + fixtures_dir +
                              "' && unset SIMPLEX_CERT_SEED && '" + binary +
                              "' " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

}  // namespace clirunner
