#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qasurv/feature_row.hpp"
#include "qasurv/survival.hpp"

namespace fixtures {

// Twelve-post dump for the demo site: five questions (one closed, one with
// an acceptance that predates the question), six answers, one tag wiki.
// Expected feature rows are documented next to the XML in fixtures.cpp.
extern const char* const kTwelvePostDump;

// Feature CSV the twelve-post dump must produce without sampling.
extern const char* const kTwelvePostCsv;

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Exponential survival data in two groups of size n each; group "b" has
// rate multiplier exp(beta). censor_rate 0 disables censoring.
std::vector<qasurv::SurvivalRecord> two_group_exponential(
    std::size_t n, double beta, double censor_rate, std::uint64_t seed);

// Feature rows with independent covariates and exponential survival whose
// log hazard is beta_example * hasexample. All fields stay in the ranges
// the ingest layer guarantees (lengths >= 1, sumpeople >= 1).
std::vector<qasurv::FeatureRow> synthetic_rows(std::size_t n,
                                               double beta_example,
                                               double censor_rate,
                                               std::uint64_t seed,
                                               const std::string& site = "demo");

// Runs a command line, captures stdout/stderr into files under dir, and
// returns the exit code (-1 if the process did not exit normally).
struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};
RunResult run_command(const std::string& command,
                      const std::filesystem::path& dir);

// Path to the command-line binary, from the QASURV_CLI environment variable.
std::string cli_path();

}  // namespace fixtures
