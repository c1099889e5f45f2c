#include <CLI11.hpp>
#include <iostream>

#include "qasurv/commands.hpp"

namespace {

int dispatch(const std::function<int()>& command) {
  try {
    return command();
  } catch (const qasurv::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qasurv::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qasurv::kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qasurv: survival analysis of question resolution on Q&A sites"};
  app.require_subcommand(1);

  qasurv::IngestArgs ingest_args;
  auto* ingest = app.add_subcommand(
      "ingest", "Extract a feature table from a Posts XML dump");
  ingest->add_option("--posts", ingest_args.posts, "Posts XML file")
      ->required();
  ingest->add_option("--site", ingest_args.site, "Site label for the rows")
      ->required();
  ingest->add_option("--out", ingest_args.out, "Output feature CSV")
      ->required();
  ingest->add_option("--seed", ingest_args.seed, "Sampling seed (default 1)");
  ingest->add_option("--sample", ingest_args.sample,
                     "Questions to sample (default 5000)");

  qasurv::KmArgs km_args;
  auto* km = app.add_subcommand(
      "km", "Kaplan-Meier survival summaries per site");
  km->add_option("--features", km_args.features, "Feature CSV files")
      ->required()
      ->expected(-1);
  km->add_option("--level", km_args.level, "Confidence level (default 0.95)");
  km->add_option("--out-json", km_args.out_json, "Summary JSON path");
  km->add_option("--out-svg", km_args.out_svg, "Survival plot path");
  km->add_flag("--log-time", km_args.log_time, "Log-scale time axis");

  qasurv::LogrankArgs logrank_args;
  auto* logrank = app.add_subcommand(
      "logrank", "Mantel-Haenszel test across sites");
  logrank->add_option("--features", logrank_args.features, "Feature CSV files")
      ->required()
      ->expected(-1);
  logrank->add_option("--out-json", logrank_args.out_json, "Result JSON path");

  qasurv::CoxfitArgs coxfit_args;
  auto* coxfit = app.add_subcommand(
      "coxfit", "Fit the proportional-hazards model for one site");
  coxfit->add_option("--features", coxfit_args.features, "Feature CSV file")
      ->required();
  coxfit->add_option("--out-model", coxfit_args.out_model,
                     "Model artifact JSON path");
  coxfit->add_option("--out-hr", coxfit_args.out_hr,
                     "Hazard-ratio table JSON path");
  coxfit->add_option("--out-svg-effects", coxfit_args.out_svg_effects,
                     "Directory for per-covariate effect plots");
  coxfit->add_option("--formula-json", coxfit_args.formula_json,
                     "Custom covariate plan (JSON array)");
  coxfit->add_option("--ties", coxfit_args.ties,
                     "Tie handling: efron (default) or breslow");
  coxfit->add_option("--seed", coxfit_args.seed,
                     "Provenance seed recorded in the artifact");

  qasurv::DiagnoseArgs diagnose_args;
  auto* diagnose = app.add_subcommand(
      "diagnose", "Proportional-hazards diagnostics for a fitted model");
  diagnose->add_option("--model", diagnose_args.model, "Model artifact JSON")
      ->required();
  diagnose->add_option("--features", diagnose_args.features,
                       "Feature CSV the model was fit on")
      ->required();
  diagnose->add_option("--transform", diagnose_args.transform,
                       "Time transform: km (default), identity, rank, log");
  diagnose->add_option("--out-json", diagnose_args.out_json,
                       "Diagnostics JSON path");

  qasurv::PredictArgs predict_args;
  auto* predict = app.add_subcommand(
      "predict", "Predicted median resolution time for new questions");
  predict->add_option("--model", predict_args.model, "Model artifact JSON")
      ->required();
  predict->add_option("--features", predict_args.features, "Feature CSV file")
      ->required();
  predict->add_option("--out", predict_args.out, "Predictions CSV path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qasurv::kExitUsage;
  }

  if (*ingest) {
    return dispatch([&] {
      return qasurv::cmd_ingest(ingest_args, std::cout, std::cerr);
    });
  }
  if (*km) {
    return dispatch([&] { return qasurv::cmd_km(km_args, std::cout, std::cerr); });
  }
  if (*logrank) {
    return dispatch([&] {
      return qasurv::cmd_logrank(logrank_args, std::cout, std::cerr);
    });
  }
  if (*coxfit) {
    return dispatch([&] {
      return qasurv::cmd_coxfit(coxfit_args, std::cout, std::cerr);
    });
  }
  if (*diagnose) {
    return dispatch([&] {
      return qasurv::cmd_diagnose(diagnose_args, std::cout, std::cerr);
    });
  }
  return dispatch([&] {
    return qasurv::cmd_predict(predict_args, std::cout, std::cerr);
  });
}
