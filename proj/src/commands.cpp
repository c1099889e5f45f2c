#include "qasurv/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <set>

#include "qasurv/artifact.hpp"
#include "qasurv/cox.hpp"
#include "qasurv/csv.hpp"
#include "qasurv/design.hpp"
#include "qasurv/ingest.hpp"
#include "qasurv/plot.hpp"
#include "qasurv/reports.hpp"
#include "qasurv/stats.hpp"
#include "qasurv/survival.hpp"
#include "qasurv/timeutil.hpp"

namespace qasurv {

namespace {

using nlohmann::json;

std::string fmt_g(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw InvalidInputError("failed writing " + path);
}

void write_json_file(const std::string& path, const json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

std::vector<FeatureRow> read_feature_files(const std::vector<std::string>& paths) {
  std::vector<FeatureRow> rows;
  for (const auto& path : paths) {
    auto part = read_feature_csv_file(path);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  if (rows.empty()) throw InvalidInputError("feature tables contain no rows");
  return rows;
}

// Site label -> rows, sorted by label for deterministic output.
std::map<std::string, std::vector<FeatureRow>> rows_by_site(
    std::vector<FeatureRow> rows) {
  std::map<std::string, std::vector<FeatureRow>> by_site;
  for (auto& row : rows) by_site[row.site].push_back(std::move(row));
  return by_site;
}

std::vector<SurvivalRecord> to_records(const std::vector<FeatureRow>& rows) {
  std::vector<SurvivalRecord> records;
  records.reserve(rows.size());
  for (const auto& row : rows) {
    records.push_back({row.tanswer, row.solved, row.site, {}});
  }
  return records;
}

json optional_to_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string optional_to_text(const std::optional<double>& v) {
  return v ? fmt_g(*v) : std::string("NA");
}

ModelPlan plan_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw UsageError("formula JSON must be a non-empty array of covariates");
  }
  ModelPlan plan;
  for (const auto& entry : doc) {
    CovariateTerm term;
    term.covariate = entry.at("covariate").get<std::string>();
    const auto kind = entry.at("kind").get<std::string>();
    if (kind == "spline") {
      term.kind = TermKind::kSpline;
      term.spline_knots = entry.value("knots", 3);
    } else if (kind == "binary") {
      term.kind = TermKind::kBinary;
    } else if (kind == "linear") {
      term.kind = TermKind::kLinear;
    } else {
      throw UsageError("unknown covariate kind '" + kind + "'");
    }
    term.pre_transform =
        pre_transform_from_name(entry.value("pre", std::string("identity")));
    plan.terms.push_back(std::move(term));
  }
  return plan;
}

void extract_times_events(const std::vector<FeatureRow>& rows,
                          std::vector<double>& times,
                          std::vector<bool>& events) {
  times.reserve(rows.size());
  events.reserve(rows.size());
  for (const auto& row : rows) {
    times.push_back(row.tanswer);
    events.push_back(row.solved);
  }
}

json diagnostics_to_json(const PHDiagnostics& diag) {
  json doc;
  doc["transform"] = time_transform_name(diag.transform);
  json covs = json::array();
  for (const auto& row : diag.per_covariate) {
    covs.push_back({{"covariate", row.covariate},
                    {"rho", row.rho},
                    {"chi_square", row.chi_square},
                    {"df", row.df},
                    {"p_value", row.p_value}});
  }
  doc["covariates"] = std::move(covs);
  json cols = json::array();
  for (const auto& row : diag.per_column) {
    cols.push_back({{"column", row.label},
                    {"rho", row.rho},
                    {"chi_square", row.chi_square},
                    {"p_value", row.p_value}});
  }
  doc["columns"] = std::move(cols);
  doc["global"] = {{"chi_square", diag.global_chi_square},
                   {"df", diag.global_df},
                   {"p_value", diag.global_p}};
  return doc;
}

void print_diagnostics(const PHDiagnostics& diag, std::ostream& out) {
  out << "proportional-hazards test (" << time_transform_name(diag.transform)
      << " time transform)\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %10s %10s %4s %8s\n", "covariate",
                "rho", "chisq", "df", "p");
  out << line;
  for (const auto& row : diag.per_covariate) {
    std::snprintf(line, sizeof(line), "%-12s %10.3g %10.4g %4d %8s\n",
                  row.covariate.c_str(), row.rho, row.chi_square, row.df,
                  format_p_value(row.p_value).c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-12s %10s %10.4g %4d %8s\n", "GLOBAL",
                "NA", diag.global_chi_square, diag.global_df,
                format_p_value(diag.global_p).c_str());
  out << line;
}

}  // namespace

std::string format_p_value(double p) {
  if (p < 1e-16) return "<1e-16";
  return fmt_g(p, 3);
}

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
  if (args.sample < 1) {
    throw UsageError("--sample must be at least 1");
  }
  if (args.site.empty()) throw UsageError("--site must not be empty");

  IngestOptions options;
  options.site = args.site;
  options.sample = args.sample;
  options.seed = args.seed;
  options.warn = [&err](const std::string& message) {
    err << "warning: " << message << "\n";
  };
  const IngestResult result = ingest_posts_file(args.posts, options);

  write_feature_csv_file(args.out, result.rows);

  const auto& c = result.counters;
  json meta;
  meta["site"] = args.site;
  meta["source"] = args.posts;
  meta["snapshot"] =
      c.posts_parsed > 0 ? json(format_timestamp_ms(result.snapshot_ms)) : json(nullptr);
  meta["seed"] = args.seed;
  meta["sample"] = args.sample;
  meta["audience_window"] = "whole-dump distinct answerers per tag";
  meta["counters"] = {{"posts_parsed", c.posts_parsed},
                      {"rows_skipped", c.rows_skipped},
                      {"questions_total", c.questions_total},
                      {"excluded_closed", c.excluded_closed},
                      {"excluded_invalid_event", c.excluded_invalid_event},
                      {"excluded_missing_fields", c.excluded_missing_fields},
                      {"emitted", c.emitted},
                      {"sampled", result.rows.size()}};
  const std::string meta_path = args.out + ".meta.json";
  write_json_file(meta_path, meta);

  out << "site " << args.site << ": parsed " << c.posts_parsed << " posts, "
      << c.rows_skipped << " malformed rows skipped\n";
  out << "questions " << c.questions_total << ": emitted " << c.emitted
      << ", closed " << c.excluded_closed << ", invalid-event "
      << c.excluded_invalid_event << ", missing-fields "
      << c.excluded_missing_fields << "\n";
  out << "sampled " << result.rows.size() << " of " << c.emitted << " (seed "
      << args.seed << ")\n";
  out << "wrote " << args.out << " and " << meta_path << "\n";
  return kExitOk;
}

int cmd_km(const KmArgs& args, std::ostream& out, std::ostream&) {
  if (!(args.level > 0.0 && args.level < 1.0)) {
    throw UsageError("--level must be inside (0, 1)");
  }
  const auto by_site = rows_by_site(read_feature_files(args.features));

  json sites = json::array();
  std::vector<PlotSeries> series;
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %8s %8s %10s %10s %10s\n", "site",
                "records", "events", "median", "lcl", "ucl");
  out << line;
  for (const auto& [site, rows] : by_site) {
    const SurvivalCurve curve = km_fit(to_records(rows), args.level);
    sites.push_back({{"site", site},
                     {"records", curve.n_records},
                     {"events", curve.n_events},
                     {"median", optional_to_json(curve.median)},
                     {"median_lower", optional_to_json(curve.median_lower)},
                     {"median_upper", optional_to_json(curve.median_upper)}});
    std::snprintf(line, sizeof(line), "%-16s %8ld %8ld %10s %10s %10s\n",
                  site.c_str(), curve.n_records, curve.n_events,
                  optional_to_text(curve.median).c_str(),
                  optional_to_text(curve.median_lower).c_str(),
                  optional_to_text(curve.median_upper).c_str());
    out << line;

    PlotSeries s;
    s.label = site;
    s.step = true;
    if (!args.log_time) {
      s.x.push_back(0.0);
      s.y.push_back(1.0);
      s.band_lower.push_back(1.0);
      s.band_upper.push_back(1.0);
    }
    for (const auto& step : curve.steps) {
      s.x.push_back(step.time);
      s.y.push_back(step.survival);
      s.band_lower.push_back(step.lower);
      s.band_upper.push_back(step.upper);
    }
    if (!s.x.empty()) series.push_back(std::move(s));
  }

  if (!args.out_json.empty()) {
    json doc;
    doc["level"] = args.level;
    doc["sites"] = std::move(sites);
    write_json_file(args.out_json, doc);
    out << "wrote " << args.out_json << "\n";
  }
  if (!args.out_svg.empty()) {
    PlotOptions options;
    options.title = "Survival of open questions";
    options.x_label = args.log_time ? "minutes (log scale)" : "minutes";
    options.y_label = "S(t)";
    options.log_x = args.log_time;
    options.y_min = 0.0;
    options.y_max = 1.0;
    write_svg_file(args.out_svg, series, options);
    out << "wrote " << args.out_svg << "\n";
  }
  return kExitOk;
}

int cmd_logrank(const LogrankArgs& args, std::ostream& out, std::ostream&) {
  const auto rows = read_feature_files(args.features);
  std::set<std::string> sites;
  for (const auto& row : rows) sites.insert(row.site);
  if (sites.size() < 2) {
    throw UsageError("log-rank needs at least two sites; got " +
                     std::to_string(sites.size()));
  }
  const LogRankResult result = logrank_test(to_records(rows));

  out << "log-rank chi-square " << fmt_g(result.chi_square, 6) << " on "
      << result.degrees_of_freedom << " df, p "
      << format_p_value(result.p_value) << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %8s %10s %10s\n", "site", "records",
                "observed", "expected");
  out << line;
  json groups = json::array();
  for (const auto& g : result.per_group) {
    std::snprintf(line, sizeof(line), "%-16s %8ld %10.6g %10.6g\n",
                  g.group.c_str(), g.records, g.observed, g.expected);
    out << line;
    groups.push_back({{"site", g.group},
                      {"records", g.records},
                      {"observed", g.observed},
                      {"expected", g.expected}});
  }
  if (!args.out_json.empty()) {
    json doc;
    doc["chi_square"] = result.chi_square;
    doc["df"] = result.degrees_of_freedom;
    doc["p_value"] = result.p_value;
    doc["groups"] = std::move(groups);
    write_json_file(args.out_json, doc);
    out << "wrote " << args.out_json << "\n";
  }
  return kExitOk;
}

namespace {

json hr_summary_to_json(const std::string& site, const HazardRatioSummary& hr) {
  json covs = json::array();
  for (const auto& entry : hr.per_covariate) {
    json intervals = json::array();
    for (const auto& ci : entry.intervals) {
      intervals.push_back(
          {{"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}});
    }
    covs.push_back({{"covariate", entry.covariate},
                    {"contrast", entry.contrast},
                    {"hazard_ratio", entry.hazard_ratio},
                    {"intervals", std::move(intervals)}});
  }
  return json{{"site", site}, {"covariates", std::move(covs)}};
}

void write_effect_svgs(const CoxFit& fit, const std::vector<FeatureRow>& rows,
                       const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  for (const auto& layout : fit.design.terms) {
    const std::string& name = layout.term.covariate;
    std::vector<double> raw;
    raw.reserve(rows.size());
    for (const auto& row : rows) raw.push_back(covariate_value(row, name));
    std::sort(raw.begin(), raw.end());

    std::vector<double> grid;
    if (layout.term.kind == TermKind::kBinary) {
      grid = {0.0, 1.0};
    } else {
      const double lo = stats::quantile_sorted(raw, 0.01);
      const double hi = stats::quantile_sorted(raw, 0.99);
      const int points = 60;
      for (int i = 0; i <= points; ++i) {
        grid.push_back(lo + (hi - lo) * i / points);
      }
    }
    const auto curve = effect_curve(fit, rows, name, grid);

    PlotSeries s;
    s.label = name;
    for (const auto& pt : curve) {
      s.x.push_back(pt.x);
      s.y.push_back(pt.log_hazard_ratio);
      s.band_lower.push_back(pt.lower);
      s.band_upper.push_back(pt.upper);
    }
    PlotOptions options;
    options.title = "Effect of " + name;
    options.x_label = name;
    options.y_label = "log hazard ratio vs median";
    options.legend = false;
    const std::string path =
        (std::filesystem::path(dir) / ("effect_" + name + ".svg")).string();
    write_svg_file(path, {s}, options);
    out << "wrote " << path << "\n";
  }
}

}  // namespace

int cmd_coxfit(const CoxfitArgs& args, std::ostream& out, std::ostream& err) {
  const auto rows = read_feature_csv_file(args.features);
  if (rows.empty()) throw InvalidInputError("feature table contains no rows");
  std::set<std::string> sites;
  for (const auto& row : rows) sites.insert(row.site);
  if (sites.size() != 1) {
    throw UsageError("the model is fit per site; the table holds " +
                     std::to_string(sites.size()) + " sites");
  }
  const std::string site = *sites.begin();

  CoxFitOptions fit_options;
  if (args.ties == "efron") {
    fit_options.ties = TieMethod::kEfron;
  } else if (args.ties == "breslow") {
    fit_options.ties = TieMethod::kBreslow;
  } else {
    throw UsageError("--ties must be efron or breslow");
  }

  const ModelPlan plan = args.formula_json.empty()
                             ? ModelPlan::standard()
                             : plan_from_file(args.formula_json);
  const DesignMatrix design = build_design(rows, plan);

  std::vector<double> times;
  std::vector<bool> events;
  extract_times_events(rows, times, events);

  CoxFit fit = cox_fit(design, times, events, fit_options);
  fit.baseline =
      baseline_cumulative_hazard(design.values, times, events, fit.beta);

  ModelArtifact artifact;
  artifact.site = site;
  artifact.fit = fit;
  artifact.seed = args.seed;
  if (!args.out_model.empty()) {
    write_artifact_file(args.out_model, artifact);
    out << "wrote " << args.out_model << "\n";
  }
  if (!fit.converged) {
    err << "error: the partial-likelihood maximization did not converge in "
        << fit.iterations << " iterations\n";
    return kExitNoConvergence;
  }

  out << "site " << site << ": " << rows.size() << " rows, fit converged in "
      << fit.iterations << " iterations, log partial likelihood "
      << fmt_g(fit.log_partial_likelihood, 10) << "\n";

  const HazardRatioSummary hr = hazard_ratio_summary(fit, rows);
  char line[200];
  std::snprintf(line, sizeof(line), "%-12s %-24s %10s %12s\n", "covariate",
                "contrast", "HR", "95% CI");
  out << line;
  for (const auto& entry : hr.per_covariate) {
    std::string ci95 = "";
    for (const auto& ci : entry.intervals) {
      if (ci.level == 0.95) {
        ci95 = "(" + fmt_g(ci.lower, 4) + ", " + fmt_g(ci.upper, 4) + ")";
      }
    }
    std::snprintf(line, sizeof(line), "%-12s %-24s %10.4g %12s\n",
                  entry.covariate.c_str(), entry.contrast.c_str(),
                  entry.hazard_ratio, ci95.c_str());
    out << line;
  }
  if (!args.out_hr.empty()) {
    write_json_file(args.out_hr, hr_summary_to_json(site, hr));
    out << "wrote " << args.out_hr << "\n";
  }
  if (!args.out_svg_effects.empty()) {
    write_effect_svgs(fit, rows, args.out_svg_effects, out);
  }
  return kExitOk;
}

int cmd_diagnose(const DiagnoseArgs& args, std::ostream& out, std::ostream&) {
  const ModelArtifact artifact = read_artifact_file(args.model);
  const auto rows = read_feature_csv_file(args.features);
  if (rows.empty()) throw InvalidInputError("feature table contains no rows");
  const TimeTransform transform = time_transform_from_name(args.transform);

  const DesignMatrix design = design_from_info(artifact.fit.design, rows);
  std::vector<double> times;
  std::vector<bool> events;
  extract_times_events(rows, times, events);

  const PHDiagnostics diag =
      schoenfeld_test(artifact.fit, design, times, events, transform);
  print_diagnostics(diag, out);
  if (!args.out_json.empty()) {
    write_json_file(args.out_json, diagnostics_to_json(diag));
    out << "wrote " << args.out_json << "\n";
  }
  return kExitOk;
}

int cmd_predict(const PredictArgs& args, std::ostream& out, std::ostream&) {
  const ModelArtifact artifact = read_artifact_file(args.model);
  if (artifact.fit.baseline.empty()) {
    throw InvalidStateError("model artifact carries no baseline hazard");
  }
  if (!artifact.fit.converged) {
    throw InvalidStateError("model artifact records a non-converged fit");
  }
  const auto rows = read_feature_csv_file(args.features);
  if (rows.empty()) throw InvalidInputError("feature table contains no rows");

  const auto& baseline = artifact.fit.baseline;
  std::string text = "question_id,predicted_median\n";
  const double log2 = std::log(2.0);
  for (const auto& row : rows) {
    const Eigen::RowVectorXd x = artifact.fit.design.centered_row(row);
    const double lp = x.dot(artifact.fit.beta);
    // S_i(t) <= 0.5 at the first step with H(t) >= log 2 * exp(-lp).
    const double threshold = log2 * std::exp(-lp);
    const auto it = std::lower_bound(
        baseline.begin(), baseline.end(), threshold,
        [](const BaselineStep& step, double h) {
          return step.cumulative_hazard < h;
        });
    text += std::to_string(row.question_id);
    text += ',';
    if (it == baseline.end()) {
      text += "censored-beyond-horizon";
    } else {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.4f", it->time);
      text += buf;
    }
    text += '\n';
  }
  write_text_file(args.out, text);
  out << "wrote predictions for " << rows.size() << " rows to " << args.out
      << "\n";
  return kExitOk;
}

}  // namespace qasurv
