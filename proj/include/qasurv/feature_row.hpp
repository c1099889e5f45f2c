#pragma once

#include <string>
#include <vector>

namespace qasurv {

// One question's model covariates plus its event time and status.
struct FeatureRow {
  long long question_id = 0;
  std::string site;
  double tanswer = 0.0;  // minutes until resolution or censoring, > 0
  bool solved = false;   // true = accepted answer exists
  long bodylength = 0;   // printable characters of the body, HTML stripped
  long titlelength = 0;  // printable characters of the title
  bool hasexample = false;
  long tagscount = 0;
  long sumpeople = 0;    // summed audience of the question's tags
  double zscore = 0.0;   // author expertise proxy at posting time
};

// The six model covariates, addressable by name.
inline const std::vector<std::string>& covariate_names() {
  static const std::vector<std::string> names = {
      "zscore", "bodylength", "titlelength", "hasexample", "tagscount",
      "sumpeople"};
  return names;
}

// Raw (original scale) value of a named covariate. Throws
// InvalidInputError for unknown names.
double covariate_value(const FeatureRow& row, const std::string& name);

}  // namespace qasurv
