#pragma once

#include <cstdint>
#include <string>

#include "qasurv/cox.hpp"

namespace qasurv {

inline constexpr const char* kArtifactVersion = "0.1.0";

// A fitted model plus the provenance needed to reuse it: site label,
// column layout with centering means, knots and pre-transforms per
// covariate, coefficients, covariance, baseline cumulative hazard.
struct ModelArtifact {
  std::string site;
  CoxFit fit;
  std::uint64_t seed = 0;
  std::string version = kArtifactVersion;
};

// JSON (de)serialization. Doubles survive the round trip exactly.
std::string artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const std::string& json_text);

void write_artifact_file(const std::string& path, const ModelArtifact& artifact);
ModelArtifact read_artifact_file(const std::string& path);

}  // namespace qasurv
