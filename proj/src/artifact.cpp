#include "qasurv/artifact.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qasurv/errors.hpp"

namespace qasurv {

namespace {

using nlohmann::json;

json columns_to_json(const DesignInfo& info) {
  json cols = json::array();
  for (const auto& col : info.columns) {
    cols.push_back({{"label", col.label},
                    {"covariate", col.covariate},
                    {"kind", column_kind_name(col.kind)},
                    {"nonlinear_index", col.nonlinear_index},
                    {"mean", col.mean}});
  }
  return cols;
}

ColumnKind column_kind_from_name(const std::string& name) {
  if (name == "linear") return ColumnKind::kLinear;
  if (name == "nonlinear") return ColumnKind::kSplineNonlinear;
  if (name == "binary") return ColumnKind::kBinary;
  if (name == "integer") return ColumnKind::kInteger;
  throw InvalidInputError("unknown column kind: " + name);
}

DesignInfo design_info_from_json(const json& doc) {
  DesignInfo info;
  for (const auto& col : doc.at("columns")) {
    info.columns.push_back({col.at("label").get<std::string>(),
                            col.at("covariate").get<std::string>(),
                            column_kind_from_name(col.at("kind").get<std::string>()),
                            col.at("nonlinear_index").get<int>(),
                            col.at("mean").get<double>()});
  }
  const json& knots = doc.at("knots");
  const json& pre = doc.at("pre_transforms");

  // Consecutive columns of one covariate form one term.
  std::size_t i = 0;
  while (i < info.columns.size()) {
    std::size_t j = i;
    while (j < info.columns.size() &&
           info.columns[j].covariate == info.columns[i].covariate) {
      ++j;
    }
    TermLayout layout;
    layout.term.covariate = info.columns[i].covariate;
    layout.first_column = static_cast<int>(i);
    layout.column_count = static_cast<int>(j - i);
    if (pre.contains(layout.term.covariate)) {
      layout.term.pre_transform =
          pre_transform_from_name(pre.at(layout.term.covariate).get<std::string>());
    }
    if (knots.contains(layout.term.covariate)) {
      layout.term.kind = TermKind::kSpline;
      SplineSpec spec;
      spec.source_covariate = layout.term.covariate;
      spec.pre_transform = layout.term.pre_transform;
      spec.knots = knots.at(layout.term.covariate).get<std::vector<double>>();
      layout.term.spline_knots = static_cast<int>(spec.knots.size());
      if (spec.basis_dim() != layout.column_count) {
        throw InvalidInputError("artifact columns do not match the knots of '" +
                                layout.term.covariate + "'");
      }
      layout.spline = std::move(spec);
    } else {
      layout.term.kind = info.columns[i].kind == ColumnKind::kBinary
                             ? TermKind::kBinary
                             : TermKind::kLinear;
      if (layout.column_count != 1) {
        throw InvalidInputError("non-spline covariate '" + layout.term.covariate +
                                "' spans several columns");
      }
    }
    info.terms.push_back(std::move(layout));
    i = j;
  }
  return info;
}

}  // namespace

std::string artifact_to_json(const ModelArtifact& artifact) {
  const CoxFit& fit = artifact.fit;
  json doc;
  doc["site"] = artifact.site;
  doc["columns"] = columns_to_json(fit.design);

  json knots = json::object();
  json pre = json::object();
  for (const auto& layout : fit.design.terms) {
    pre[layout.term.covariate] = pre_transform_name(layout.term.pre_transform);
    if (layout.spline) knots[layout.term.covariate] = layout.spline->knots;
  }
  doc["knots"] = knots;
  doc["pre_transforms"] = pre;

  doc["beta"] = std::vector<double>(fit.beta.begin(), fit.beta.end());
  json cov = json::array();
  for (Eigen::Index r = 0; r < fit.covariance.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < fit.covariance.cols(); ++c) {
      row.push_back(fit.covariance(r, c));
    }
    cov.push_back(std::move(row));
  }
  doc["covariance"] = std::move(cov);

  json baseline = json::array();
  for (const auto& step : fit.baseline) {
    baseline.push_back({{"t", step.time}, {"H", step.cumulative_hazard}});
  }
  doc["baseline"] = std::move(baseline);

  doc["converged"] = fit.converged;
  doc["iterations"] = fit.iterations;
  doc["loglik"] = fit.log_partial_likelihood;
  doc["seed"] = artifact.seed;
  doc["version"] = artifact.version;
  return doc.dump(2) + "\n";
}

ModelArtifact artifact_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(std::string("model artifact is not valid JSON: ") +
                            e.what());
  }
  try {
    ModelArtifact artifact;
    artifact.site = doc.at("site").get<std::string>();
    artifact.seed = doc.at("seed").get<std::uint64_t>();
    artifact.version = doc.at("version").get<std::string>();

    CoxFit& fit = artifact.fit;
    fit.design = design_info_from_json(doc);

    const auto beta = doc.at("beta").get<std::vector<double>>();
    if (static_cast<int>(beta.size()) != fit.design.dimension()) {
      throw InvalidInputError("beta length does not match the columns");
    }
    fit.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                 static_cast<Eigen::Index>(beta.size()));

    const json& cov = doc.at("covariance");
    const auto p = static_cast<Eigen::Index>(beta.size());
    if (static_cast<Eigen::Index>(cov.size()) != p) {
      throw InvalidInputError("covariance shape does not match beta");
    }
    fit.covariance.resize(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      const json& row = cov.at(static_cast<std::size_t>(r));
      if (static_cast<Eigen::Index>(row.size()) != p) {
        throw InvalidInputError("covariance shape does not match beta");
      }
      for (Eigen::Index c = 0; c < p; ++c) {
        fit.covariance(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
      }
    }

    for (const auto& step : doc.at("baseline")) {
      fit.baseline.push_back(
          {step.at("t").get<double>(), step.at("H").get<double>()});
    }
    fit.converged = doc.at("converged").get<bool>();
    fit.iterations = doc.at("iterations").get<int>();
    fit.log_partial_likelihood = doc.at("loglik").get<double>();
    return artifact;
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("model artifact is missing fields: ") +
                            e.what());
  }
}

void write_artifact_file(const std::string& path, const ModelArtifact& artifact) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << artifact_to_json(artifact);
  out.flush();
  if (!out) throw InvalidInputError("failed writing " + path);
}

ModelArtifact read_artifact_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return artifact_from_json(buf.str());
}

}  // namespace qasurv
