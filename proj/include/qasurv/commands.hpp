#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qasurv/errors.hpp"

namespace qasurv {

// Bad flags or bad invocation shape; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

// "<1e-16" below 1e-16, otherwise three significant digits.
std::string format_p_value(double p);

struct IngestArgs {
  std::string posts;
  std::string site;
  std::string out;
  std::uint64_t seed = 1;
  std::uint64_t sample = 5000;
};

struct KmArgs {
  std::vector<std::string> features;
  double level = 0.95;
  std::string out_json;
  std::string out_svg;
  bool log_time = false;
};

struct LogrankArgs {
  std::vector<std::string> features;
  std::string out_json;
};

struct CoxfitArgs {
  std::string features;
  std::string out_model;
  std::string out_hr;
  std::string out_svg_effects;
  std::string formula_json;  // optional custom covariate plan
  std::string ties = "efron";
  std::uint64_t seed = 0;
};

struct DiagnoseArgs {
  std::string model;
  std::string features;
  std::string transform = "km";
  std::string out_json;
};

struct PredictArgs {
  std::string model;
  std::string features;
  std::string out;
};

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err);
int cmd_km(const KmArgs& args, std::ostream& out, std::ostream& err);
int cmd_logrank(const LogrankArgs& args, std::ostream& out, std::ostream& err);
int cmd_coxfit(const CoxfitArgs& args, std::ostream& out, std::ostream& err);
int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream& err);
int cmd_predict(const PredictArgs& args, std::ostream& out, std::ostream& err);

}  // namespace qasurv
