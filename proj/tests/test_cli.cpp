// End-to-end tests that drive the installed binary through its public
// command line. The binary path arrives via the QASURV_CLI environment
// variable so the same tests run against any build directory.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "qasurv/artifact.hpp"
#include "qasurv/commands.hpp"
#include "qasurv/csv.hpp"
#include "qasurv/design.hpp"
#include "qasurv/stats.hpp"

using namespace qasurv;
using fixtures::RunResult;
using fixtures::TempDir;
using nlohmann::json;

namespace {

std::string cli() { return fixtures::cli_path(); }

json parse_json_file(const std::filesystem::path& path) {
  return json::parse(fixtures::read_file(path));
}

void write_rows(const std::filesystem::path& path,
                const std::vector<FeatureRow>& rows) {
  write_feature_csv_file(path.string(), rows);
}

FeatureRow plain_row(long long id, double tanswer, bool solved) {
  FeatureRow row;
  row.question_id = id;
  row.site = "alpha";
  row.tanswer = tanswer;
  row.solved = solved;
  row.bodylength = 10 + id;
  row.titlelength = 5;
  row.tagscount = 1 + id % 3;
  row.sumpeople = 2;
  row.zscore = 0.1 * static_cast<double>(id);
  return row;
}

// One binary-covariate artifact with H(k) = 0.01 k for k = 1..100 and
// centering mean zero, so a hasexample=0 row predicts the baseline median.
ModelArtifact binary_artifact(double beta) {
  ModelArtifact artifact;
  artifact.site = "alpha";
  artifact.seed = 5;
  DesignInfo& info = artifact.fit.design;
  info.columns.push_back(
      {"hasexample", "hasexample", ColumnKind::kBinary, 0, 0.0});
  TermLayout layout;
  layout.term.covariate = "hasexample";
  layout.term.kind = TermKind::kBinary;
  layout.first_column = 0;
  layout.column_count = 1;
  info.terms.push_back(layout);
  artifact.fit.beta = Eigen::VectorXd::Constant(1, beta);
  artifact.fit.covariance = Eigen::MatrixXd::Constant(1, 1, 0.01);
  for (int k = 1; k <= 100; ++k) {
    artifact.fit.baseline.push_back({static_cast<double>(k), 0.01 * k});
  }
  artifact.fit.converged = true;
  artifact.fit.iterations = 1;
  artifact.fit.log_partial_likelihood = -1.0;
  return artifact;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit codes are the documented constants") {
  CHECK(kExitOk == 0);
  CHECK(kExitFailure == 1);
  CHECK(kExitUsage == 2);
  CHECK(kExitNoConvergence == 3);
}

TEST_CASE("ingest writes the expected table byte for byte, twice") {
  TempDir dir("cli-ingest");
  fixtures::write_file(dir.file("posts.xml"), fixtures::kTwelvePostDump);

  const std::string base = cli() + " ingest --posts " +
                           dir.file("posts.xml").string() +
                           " --site demo --seed 1 --sample 100 --out ";
  const RunResult first =
      fixtures::run_command(base + dir.file("run1.csv").string(), dir.path());
  REQUIRE(first.exit_code == 0);
  CHECK(first.out.find("sampled 3 of 3") != std::string::npos);

  const RunResult second =
      fixtures::run_command(base + dir.file("run2.csv").string(), dir.path());
  REQUIRE(second.exit_code == 0);

  const std::string csv1 = fixtures::read_file(dir.file("run1.csv"));
  CHECK(csv1 == fixtures::kTwelvePostCsv);
  CHECK(csv1 == fixtures::read_file(dir.file("run2.csv")));

  const json meta = parse_json_file(dir.file("run1.csv.meta.json"));
  CHECK(meta.at("site") == "demo");
  CHECK(meta.at("seed") == 1);
  CHECK(meta.at("snapshot") == "2013-01-08T00:00:00.000");
  const json& counters = meta.at("counters");
  CHECK(counters.at("posts_parsed") == 12);
  CHECK(counters.at("rows_skipped") == 0);
  CHECK(counters.at("questions_total") == 5);
  CHECK(counters.at("excluded_closed") == 1);
  CHECK(counters.at("excluded_invalid_event") == 1);
  CHECK(counters.at("excluded_missing_fields") == 0);
  CHECK(counters.at("emitted") == 3);
  CHECK(counters.at("sampled") == 3);
}

TEST_CASE("ingest reports malformed rows on stderr and keeps going") {
  TempDir dir("cli-warn");
  const std::string xml =
      "<?xml version=\"1.0\"?>\n<posts>\n"
      "  <row Id=\"1\" PostTypeId=\"1\" AcceptedAnswerId=\"2\" "
      "CreationDate=\"2013-01-01T00:00:00.000\" Body=\"&lt;p&gt;Hi&lt;/p&gt;\" "
      "OwnerUserId=\"9\" Title=\"One question\" Tags=\"&lt;r&gt;\" />\n"
      "  <row PostTypeId=\"2\" CreationDate=\"2013-01-01T00:30:00.000\" />\n"
      "  <row Id=\"2\" PostTypeId=\"2\" ParentId=\"1\" "
      "CreationDate=\"2013-01-01T00:30:00.000\" OwnerUserId=\"4\" />\n"
      "</posts>\n";
  fixtures::write_file(dir.file("posts.xml"), xml);
  const RunResult run = fixtures::run_command(
      cli() + " ingest --posts " + dir.file("posts.xml").string() +
          " --site demo --out " + dir.file("rows.csv").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.find("warning:") != std::string::npos);
  const json meta = parse_json_file(dir.file("rows.csv.meta.json"));
  CHECK(meta.at("counters").at("rows_skipped") == 1);
  CHECK(meta.at("counters").at("emitted") == 1);
}

TEST_CASE("ingest usage errors exit with 2") {
  TempDir dir("cli-usage");
  fixtures::write_file(dir.file("posts.xml"), fixtures::kTwelvePostDump);
  const std::string posts = dir.file("posts.xml").string();

  SUBCASE("--sample 0") {
    const RunResult run = fixtures::run_command(
        cli() + " ingest --posts " + posts + " --site demo --out " +
            dir.file("x.csv").string() + " --sample 0",
        dir.path());
    CHECK(run.exit_code == 2);
    CHECK(run.err.find("--sample") != std::string::npos);
  }
  SUBCASE("missing required flag") {
    const RunResult run =
        fixtures::run_command(cli() + " ingest --posts " + posts, dir.path());
    CHECK(run.exit_code == 2);
  }
  SUBCASE("unknown subcommand") {
    const RunResult run = fixtures::run_command(cli() + " frobnicate", dir.path());
    CHECK(run.exit_code == 2);
  }
  SUBCASE("no subcommand") {
    const RunResult run = fixtures::run_command(cli(), dir.path());
    CHECK(run.exit_code == 2);
  }
  SUBCASE("missing input file") {
    const RunResult run = fixtures::run_command(
        cli() + " ingest --posts " + dir.file("absent.xml").string() +
            " --site demo --out " + dir.file("x.csv").string(),
        dir.path());
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("error:") != std::string::npos);
  }
}

TEST_CASE("km reports the sample median in its JSON summary") {
  TempDir dir("cli-km");
  std::vector<FeatureRow> rows;
  for (long long i = 1; i <= 7; ++i) {
    rows.push_back(plain_row(i, static_cast<double>(i), true));
  }
  write_rows(dir.file("rows.csv"), rows);

  const RunResult run = fixtures::run_command(
      cli() + " km --features " + dir.file("rows.csv").string() +
          " --out-json " + dir.file("km.json").string() + " --out-svg " +
          dir.file("km.svg").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);
  CHECK(run.out.find("alpha") != std::string::npos);

  const json doc = parse_json_file(dir.file("km.json"));
  CHECK(doc.at("level") == 0.95);
  REQUIRE(doc.at("sites").size() == 1);
  const json& site = doc.at("sites").at(0);
  CHECK(site.at("site") == "alpha");
  CHECK(site.at("records") == 7);
  CHECK(site.at("events") == 7);
  // 7 events: S(3) = 4/7 > 1/2, S(4) = 3/7 <= 1/2.
  CHECK(site.at("median") == 4.0);

  const std::string svg = fixtures::read_file(dir.file("km.svg"));
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<path ") != std::string::npos);

  SUBCASE("log-scale time axis") {
    const RunResult log_run = fixtures::run_command(
        cli() + " km --features " + dir.file("rows.csv").string() +
            " --log-time --out-svg " + dir.file("kmlog.svg").string(),
        dir.path());
    CHECK(log_run.exit_code == 0);
  }
  SUBCASE("the same data under a second site name gets the same median") {
    auto clone = rows;
    for (auto& row : clone) row.site = "beta";
    write_rows(dir.file("beta.csv"), clone);
    const RunResult both = fixtures::run_command(
        cli() + " km --features " + dir.file("rows.csv").string() + " " +
            dir.file("beta.csv").string() + " --out-json " +
            dir.file("pair.json").string(),
        dir.path());
    REQUIRE(both.exit_code == 0);
    const json pair = parse_json_file(dir.file("pair.json"));
    REQUIRE(pair.at("sites").size() == 2);
    CHECK(pair.at("sites").at(0).at("median") ==
          pair.at("sites").at(1).at("median"));
    CHECK(pair.at("sites").at(0).at("events") ==
          pair.at("sites").at(1).at("events"));
  }
  SUBCASE("a level outside (0, 1) is a usage error") {
    const RunResult bad = fixtures::run_command(
        cli() + " km --features " + dir.file("rows.csv").string() +
            " --level 1.5",
        dir.path());
    CHECK(bad.exit_code == 2);
  }
  SUBCASE("a header-only table is a data error") {
    fixtures::write_file(dir.file("empty.csv"),
                         std::string(kFeatureCsvHeader) + "\n");
    const RunResult bad = fixtures::run_command(
        cli() + " km --features " + dir.file("empty.csv").string(), dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("no rows") != std::string::npos);
  }
}

TEST_CASE("logrank needs two sites and finds none against a clone") {
  TempDir dir("cli-logrank");
  std::vector<FeatureRow> rows;
  for (long long i = 1; i <= 20; ++i) {
    FeatureRow row = plain_row(i, static_cast<double>(i), i % 4 != 3);
    rows.push_back(row);
    row.site = "beta";
    row.question_id = 100 + i;
    rows.push_back(row);
  }
  write_rows(dir.file("rows.csv"), rows);

  SUBCASE("identical groups give a vanishing statistic") {
    const RunResult run = fixtures::run_command(
        cli() + " logrank --features " + dir.file("rows.csv").string() +
            " --out-json " + dir.file("lr.json").string(),
        dir.path());
    REQUIRE(run.exit_code == 0);
    const json doc = parse_json_file(dir.file("lr.json"));
    CHECK(doc.at("df") == 1);
    CHECK(doc.at("chi_square").get<double>() <= 1e-10);
    CHECK(doc.at("p_value").get<double>() >= 0.999);
    REQUIRE(doc.at("groups").size() == 2);
    for (const auto& g : doc.at("groups")) {
      CHECK(g.at("records") == 20);
      CHECK(g.at("observed").get<double>() ==
            doctest::Approx(g.at("expected").get<double>()).epsilon(1e-9));
    }
  }
  SUBCASE("one site is a usage error") {
    std::vector<FeatureRow> single(rows.begin(), rows.end());
    for (auto& row : single) row.site = "alpha";
    write_rows(dir.file("single.csv"), single);
    const RunResult run = fixtures::run_command(
        cli() + " logrank --features " + dir.file("single.csv").string(),
        dir.path());
    CHECK(run.exit_code == 2);
    CHECK(run.err.find("two sites") != std::string::npos);
  }
  SUBCASE("a virtually null p-value prints as a bound") {
    // Every alpha event precedes every beta event, so the statistic is
    // huge and the p-value underflows the printable range.
    std::vector<FeatureRow> split;
    for (long long i = 1; i <= 100; ++i) {
      split.push_back(plain_row(i, static_cast<double>(i), true));
      FeatureRow late = plain_row(200 + i, 1000.0 + i, true);
      late.site = "beta";
      split.push_back(late);
    }
    write_rows(dir.file("split.csv"), split);
    const RunResult run = fixtures::run_command(
        cli() + " logrank --features " + dir.file("split.csv").string() +
            " --out-json " + dir.file("split.json").string(),
        dir.path());
    REQUIRE(run.exit_code == 0);
    CHECK(run.out.find("p <1e-16") != std::string::npos);
    const json doc = parse_json_file(dir.file("split.json"));
    CHECK(doc.at("p_value").get<double>() < 1e-16);
  }
}

TEST_CASE("coxfit recovers a planted effect and records the model") {
  TempDir dir("cli-coxfit");
  const auto rows = fixtures::synthetic_rows(400, 0.8, 0.002, 91);
  write_rows(dir.file("rows.csv"), rows);

  const RunResult run = fixtures::run_command(
      cli() + " coxfit --features " + dir.file("rows.csv").string() +
          " --out-model " + dir.file("model.json").string() + " --out-hr " +
          dir.file("hr.json").string() + " --seed 91",
      dir.path());
  REQUIRE(run.exit_code == 0);
  CHECK(run.out.find("fit converged") != std::string::npos);

  const json hr_doc = parse_json_file(dir.file("hr.json"));
  CHECK(hr_doc.at("site") == "demo");
  REQUIRE(hr_doc.at("covariates").size() == 6);

  bool found = false;
  for (const auto& entry : hr_doc.at("covariates")) {
    if (entry.at("covariate") != "hasexample") continue;
    found = true;
    CHECK(entry.at("contrast") == "1 vs 0");
    const double hr = entry.at("hazard_ratio").get<double>();
    double lower95 = 0.0, upper95 = 0.0;
    for (const auto& ci : entry.at("intervals")) {
      if (ci.at("level") == 0.95) {
        lower95 = ci.at("lower").get<double>();
        upper95 = ci.at("upper").get<double>();
      }
    }
    REQUIRE(lower95 > 0.0);
    // Wald SE backed out of the reported interval.
    const double se =
        (std::log(upper95) - std::log(lower95)) / (2.0 * stats::normal_quantile(0.975));
    CHECK(std::abs(std::log(hr) - 0.8) <= 3.0 * se);
    CHECK(hr > 1.0);
  }
  CHECK(found);

  const ModelArtifact artifact =
      read_artifact_file(dir.file("model.json").string());
  CHECK(artifact.site == "demo");
  CHECK(artifact.seed == 91);
  CHECK(artifact.fit.converged);
  CHECK(!artifact.fit.baseline.empty());
  CHECK(artifact.fit.design.dimension() == 10);

  SUBCASE("breslow ties are accepted") {
    const RunResult breslow = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("rows.csv").string() +
            " --ties breslow",
        dir.path());
    CHECK(breslow.exit_code == 0);
  }
  SUBCASE("effect plots land one SVG per covariate") {
    const RunResult plots = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("rows.csv").string() +
            " --out-svg-effects " + dir.file("effects").string(),
        dir.path());
    REQUIRE(plots.exit_code == 0);
    for (const std::string name : {"zscore", "bodylength", "titlelength",
                                   "hasexample", "tagscount", "sumpeople"}) {
      const auto path = dir.file("effects") / ("effect_" + name + ".svg");
      CAPTURE(name);
      REQUIRE(std::filesystem::exists(path));
      const std::string svg = fixtures::read_file(path);
      CHECK(svg.rfind("<?xml", 0) == 0);
      CHECK(svg.find("<path ") != std::string::npos);
    }
  }
  SUBCASE("an unknown tie method is a usage error") {
    const RunResult bad = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("rows.csv").string() +
            " --ties exact",
        dir.path());
    CHECK(bad.exit_code == 2);
  }
}

TEST_CASE("coxfit failure modes map to the right exit codes") {
  TempDir dir("cli-coxfail");

  SUBCASE("fewer rows than coefficients") {
    write_rows(dir.file("tiny.csv"), fixtures::synthetic_rows(5, 0.0, 0.002, 92));
    const RunResult run = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("tiny.csv").string(),
        dir.path());
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("error:") != std::string::npos);
  }
  SUBCASE("a constant covariate is named in the error") {
    auto rows = fixtures::synthetic_rows(60, 0.0, 0.002, 93);
    for (auto& row : rows) row.hasexample = true;
    write_rows(dir.file("const.csv"), rows);
    const RunResult run = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("const.csv").string(),
        dir.path());
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("hasexample") != std::string::npos);
  }
  SUBCASE("two sites in one table") {
    auto rows = fixtures::synthetic_rows(40, 0.0, 0.002, 94);
    rows[7].site = "other";
    write_rows(dir.file("mixed.csv"), rows);
    const RunResult run = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("mixed.csv").string(),
        dir.path());
    CHECK(run.exit_code == 2);
  }
  SUBCASE("a formula file that is not an array") {
    write_rows(dir.file("rows.csv"), fixtures::synthetic_rows(80, 0.0, 0.002, 95));
    fixtures::write_file(dir.file("formula.json"), "{\"covariate\": \"zscore\"}");
    const RunResult run = fixtures::run_command(
        cli() + " coxfit --features " + dir.file("rows.csv").string() +
            " --formula-json " + dir.file("formula.json").string(),
        dir.path());
    CHECK(run.exit_code == 2);
  }
}

TEST_CASE("coxfit honors a custom covariate plan") {
  TempDir dir("cli-formula");
  write_rows(dir.file("rows.csv"), fixtures::synthetic_rows(120, 0.7, 0.002, 96));
  fixtures::write_file(dir.file("formula.json"),
                       R"([{"covariate": "hasexample", "kind": "binary"},
                           {"covariate": "zscore", "kind": "linear"}])");
  const RunResult run = fixtures::run_command(
      cli() + " coxfit --features " + dir.file("rows.csv").string() +
          " --formula-json " + dir.file("formula.json").string() +
          " --out-hr " + dir.file("hr.json").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);
  const json doc = parse_json_file(dir.file("hr.json"));
  REQUIRE(doc.at("covariates").size() == 2);
  CHECK(doc.at("covariates").at(0).at("covariate") == "hasexample");
  CHECK(doc.at("covariates").at(1).at("covariate") == "zscore");
}

TEST_CASE("diagnose summarizes the fit it is given") {
  TempDir dir("cli-diagnose");
  write_rows(dir.file("rows.csv"), fixtures::synthetic_rows(300, 0.5, 0.002, 97));
  const RunResult fit_run = fixtures::run_command(
      cli() + " coxfit --features " + dir.file("rows.csv").string() +
          " --out-model " + dir.file("model.json").string(),
      dir.path());
  REQUIRE(fit_run.exit_code == 0);

  const RunResult run = fixtures::run_command(
      cli() + " diagnose --model " + dir.file("model.json").string() +
          " --features " + dir.file("rows.csv").string() + " --out-json " +
          dir.file("diag.json").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);
  CHECK(run.out.find("GLOBAL") != std::string::npos);

  const json doc = parse_json_file(dir.file("diag.json"));
  CHECK(doc.at("transform") == "km");
  CHECK(doc.at("covariates").size() == 6);
  CHECK(doc.at("columns").size() == 10);
  CHECK(doc.at("global").at("df") == 10);
  const double global_p = doc.at("global").at("p_value").get<double>();
  CHECK(global_p >= 0.0);
  CHECK(global_p <= 1.0);

  SUBCASE("alternate transform") {
    const RunResult rank_run = fixtures::run_command(
        cli() + " diagnose --model " + dir.file("model.json").string() +
            " --features " + dir.file("rows.csv").string() +
            " --transform rank",
        dir.path());
    CHECK(rank_run.exit_code == 0);
    CHECK(rank_run.out.find("rank") != std::string::npos);
  }
  SUBCASE("unknown transform") {
    const RunResult bad = fixtures::run_command(
        cli() + " diagnose --model " + dir.file("model.json").string() +
            " --features " + dir.file("rows.csv").string() +
            " --transform sqrt",
        dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("transform") != std::string::npos);
  }
  SUBCASE("artifact naming a covariate the table lacks") {
    std::string text = fixtures::read_file(dir.file("model.json"));
    std::string patched;
    std::size_t start = 0;
    for (std::size_t pos = text.find("\"zscore\""); pos != std::string::npos;
         pos = text.find("\"zscore\"", start)) {
      patched.append(text, start, pos - start);
      patched += "\"bogus\"";
      start = pos + 8;
    }
    patched.append(text, start, text.size() - start);
    fixtures::write_file(dir.file("bogus.json"), patched);
    const RunResult bad = fixtures::run_command(
        cli() + " diagnose --model " + dir.file("bogus.json").string() +
            " --features " + dir.file("rows.csv").string(),
        dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("bogus") != std::string::npos);
  }
  SUBCASE("artifact that is not JSON") {
    fixtures::write_file(dir.file("broken.json"), "{oops");
    const RunResult bad = fixtures::run_command(
        cli() + " diagnose --model " + dir.file("broken.json").string() +
            " --features " + dir.file("rows.csv").string(),
        dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("not valid JSON") != std::string::npos);
  }
}

TEST_CASE("predict walks the baseline hazard to the median") {
  TempDir dir("cli-predict");
  write_artifact_file(dir.file("model.json").string(),
                      binary_artifact(std::log(2.0)));

  std::vector<FeatureRow> rows;
  rows.push_back(plain_row(1, 100.0, true));  // hasexample = false
  FeatureRow with = plain_row(2, 100.0, true);
  with.hasexample = true;
  rows.push_back(with);
  write_rows(dir.file("rows.csv"), rows);

  const RunResult run = fixtures::run_command(
      cli() + " predict --model " + dir.file("model.json").string() +
          " --features " + dir.file("rows.csv").string() + " --out " +
          dir.file("pred.csv").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);
  // Baseline median: first H(t) >= log 2 is t = 70. The hazard ratio of 2
  // halves the threshold, crossed at t = 35.
  CHECK(fixtures::read_file(dir.file("pred.csv")) ==
        "question_id,predicted_median\n"
        "1,70.0000\n"
        "2,35.0000\n");

  SUBCASE("a protective effect can push the median past the horizon") {
    write_artifact_file(dir.file("slow.json").string(), binary_artifact(-2.0));
    const RunResult slow = fixtures::run_command(
        cli() + " predict --model " + dir.file("slow.json").string() +
            " --features " + dir.file("rows.csv").string() + " --out " +
            dir.file("slow.csv").string(),
        dir.path());
    REQUIRE(slow.exit_code == 0);
    CHECK(fixtures::read_file(dir.file("slow.csv")) ==
          "question_id,predicted_median\n"
          "1,70.0000\n"
          "2,censored-beyond-horizon\n");
  }
  SUBCASE("a non-converged artifact is refused") {
    ModelArtifact stale = binary_artifact(0.0);
    stale.fit.converged = false;
    write_artifact_file(dir.file("stale.json").string(), stale);
    const RunResult bad = fixtures::run_command(
        cli() + " predict --model " + dir.file("stale.json").string() +
            " --features " + dir.file("rows.csv").string() + " --out " +
            dir.file("bad.csv").string(),
        dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("non-converged") != std::string::npos);
  }
  SUBCASE("an artifact without a baseline is refused") {
    ModelArtifact bare = binary_artifact(0.0);
    bare.fit.baseline.clear();
    write_artifact_file(dir.file("bare.json").string(), bare);
    const RunResult bad = fixtures::run_command(
        cli() + " predict --model " + dir.file("bare.json").string() +
            " --features " + dir.file("rows.csv").string() + " --out " +
            dir.file("bad.csv").string(),
        dir.path());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("baseline") != std::string::npos);
  }
}

TEST_CASE("a fitted null model predicts near the true median") {
  TempDir dir("cli-predict-exp");
  const auto rows = fixtures::synthetic_rows(500, 0.0, 0.0, 98);
  write_rows(dir.file("rows.csv"), rows);

  const RunResult fit_run = fixtures::run_command(
      cli() + " coxfit --features " + dir.file("rows.csv").string() +
          " --out-model " + dir.file("model.json").string(),
      dir.path());
  REQUIRE(fit_run.exit_code == 0);

  const RunResult run = fixtures::run_command(
      cli() + " predict --model " + dir.file("model.json").string() +
          " --features " + dir.file("rows.csv").string() + " --out " +
          dir.file("pred.csv").string(),
      dir.path());
  REQUIRE(run.exit_code == 0);

  // All rows share an exponential rate of 0.01, so every predicted median
  // should sit near log(2) / 0.01. Observed relative error for this seed
  // is 0.028; the slack covers the baseline estimator's step granularity.
  std::istringstream in(fixtures::read_file(dir.file("pred.csv")));
  std::string line;
  std::getline(in, line);
  REQUIRE(line == "question_id,predicted_median");
  std::vector<double> predictions;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    predictions.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(predictions.size() == rows.size());
  std::sort(predictions.begin(), predictions.end());
  const double middle = predictions[predictions.size() / 2];
  const double truth = std::log(2.0) / 0.01;
  CHECK(std::abs(middle - truth) / truth <= 0.05);
}

}  // TEST_SUITE("cli")
