#include "fixtures.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"

namespace fixtures {

// Hand-checked expectations for the dump below (snapshot is post 12 at
// 2013-01-08T00:00, audiences r={20,30,40} regex={10,20,30} data={40}):
//   q1  accepted answer 4 after 60 min; body strips to "Hix=1" (5), title 22,
//       has a <pre> block, tags r+regex so sumpeople 6, owner 10 had no
//       prior posts so zscore 0.
//   q5  unanswered-accepted, censored after 2340 min; body decodes its
//       entities to 33 printable characters, title 20, tag regex gives
//       sumpeople 3, owner 20 had 2 prior answers so zscore sqrt(2).
//   q7  accepted answer 8 after 45.5 min; body 6, title 16, tags r+data
//       give sumpeople 4, owner 30 had 1 prior answer so zscore 1.
//   q9  excluded: its accepted answer predates the question.
//   q10 excluded: closed.
const char* const kTwelvePostDump =
    "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n"
    "<posts>\n"
    "  <row Id=\"1\" PostTypeId=\"1\" AcceptedAnswerId=\"4\" "
    "CreationDate=\"2013-01-05T10:00:00.000\" Score=\"12\" "
    "Body=\"&lt;p&gt;Hi&lt;/p&gt;&lt;pre&gt;&lt;code&gt;x=1&lt;/code&gt;"
    "&lt;/pre&gt;\" OwnerUserId=\"10\" Title=\"How to parse HTML fast\" "
    "Tags=\"&lt;r&gt;&lt;regex&gt;\" AnswerCount=\"3\" />\n"
    "  <row Id=\"2\" PostTypeId=\"2\" ParentId=\"1\" "
    "CreationDate=\"2013-01-05T10:05:00.000\" Score=\"1\" "
    "Body=\"&lt;p&gt;First try.&lt;/p&gt;\" OwnerUserId=\"20\" />\n"
    "  <row Id=\"3\" PostTypeId=\"2\" ParentId=\"1\" "
    "CreationDate=\"2013-01-05T10:21:00.000\" Score=\"4\" "
    "Body=\"&lt;p&gt;Better: use a parser.&lt;/p&gt;\" OwnerUserId=\"30\" />\n"
    "  <row Id=\"4\" PostTypeId=\"2\" ParentId=\"1\" "
    "CreationDate=\"2013-01-05T11:00:00.000\" Score=\"9\" "
    "Body=\"&lt;p&gt;Final.&lt;/p&gt;\" OwnerUserId=\"20\" />\n"
    "  <row Id=\"5\" PostTypeId=\"1\" "
    "CreationDate=\"2013-01-06T09:00:00.000\" Score=\"3\" "
    "Body=\"&lt;p&gt;Need &amp;amp; want lookahead &amp;#8212; examples?"
    "&lt;/p&gt;\" OwnerUserId=\"20\" Title=\"Regex lookahead help\" "
    "Tags=\"&lt;regex&gt;\" />\n"
    "  <row Id=\"6\" PostTypeId=\"2\" ParentId=\"5\" "
    "CreationDate=\"2013-01-06T09:30:00.000\" "
    "Body=\"&lt;p&gt;Sure.&lt;/p&gt;\" OwnerUserId=\"10\" />\n"
    "  <row Id=\"7\" PostTypeId=\"1\" AcceptedAnswerId=\"8\" "
    "CreationDate=\"2013-01-06T12:00:00.000\" "
    "Body=\"&lt;p&gt;Short.&lt;/p&gt;\" OwnerUserId=\"30\" "
    "Title=\"Data frames in R\" Tags=\"&lt;r&gt;&lt;data&gt;\" />\n"
    "  <row Id=\"8\" PostTypeId=\"2\" ParentId=\"7\" "
    "CreationDate=\"2013-01-06T12:45:30.000\" "
    "Body=\"&lt;p&gt;Yes.&lt;/p&gt;\" OwnerUserId=\"40\" />\n"
    "  <row Id=\"9\" PostTypeId=\"1\" AcceptedAnswerId=\"3\" "
    "CreationDate=\"2013-01-07T08:00:00.000\" "
    "Body=\"&lt;p&gt;Weird.&lt;/p&gt;\" OwnerUserId=\"40\" "
    "Title=\"Accepted points at older post\" Tags=\"&lt;data&gt;\" />\n"
    "  <row Id=\"10\" PostTypeId=\"1\" "
    "CreationDate=\"2013-01-07T09:00:00.000\" "
    "Body=\"&lt;p&gt;Bye.&lt;/p&gt;\" OwnerUserId=\"10\" "
    "Title=\"Closed question\" Tags=\"&lt;r&gt;\" "
    "ClosedDate=\"2013-01-07T10:00:00.000\" />\n"
    "  <row Id=\"11\" PostTypeId=\"5\" "
    "CreationDate=\"2013-01-07T12:00:00.000\" "
    "Body=\"&lt;p&gt;Wiki.&lt;/p&gt;\" OwnerUserId=\"30\" />\n"
    "  <row Id=\"12\" PostTypeId=\"2\" ParentId=\"5\" "
    "CreationDate=\"2013-01-08T00:00:00.000\" "
    "Body=\"&lt;p&gt;Late answer.&lt;/p&gt;\" OwnerUserId=\"30\" />\n"
    "</posts>\n";

const char* const kTwelvePostCsv =
    "question_id,site,tanswer,solved,bodylength,titlelength,hasexample,"
    "tagscount,sumpeople,zscore\n"
    "1,demo,60.0000,1,5,22,1,2,6,0\n"
    "5,demo,2340.0000,0,33,20,0,1,3,1.414213562373095\n"
    "7,demo,45.5000,1,6,16,0,2,4,1\n";

namespace {

std::atomic<unsigned> temp_counter{0};

}  // namespace

TempDir::TempDir(const std::string& prefix) {
  std::random_device rd;
  std::ostringstream name;
  name << prefix << '-' << std::hex << rd() << '-'
       << temp_counter.fetch_add(1);
  path_ = std::filesystem::temp_directory_path() / name.str();
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<qasurv::SurvivalRecord> two_group_exponential(
    std::size_t n, double beta, double censor_rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<qasurv::SurvivalRecord> records;
  records.reserve(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const bool in_b = i >= n;
    qasurv::SurvivalRecord r;
    r.group = in_b ? "b" : "a";
    const double t = oracle::rexp(rng, std::exp(in_b ? beta : 0.0));
    if (censor_rate > 0.0) {
      const double c = oracle::rexp(rng, censor_rate);
      r.event = t <= c;
      r.time = std::min(t, c);
    } else {
      r.event = true;
      r.time = t;
    }
    records.push_back(r);
  }
  return records;
}

std::vector<qasurv::FeatureRow> synthetic_rows(std::size_t n,
                                               double beta_example,
                                               double censor_rate,
                                               std::uint64_t seed,
                                               const std::string& site) {
  std::mt19937_64 rng(seed);
  std::vector<qasurv::FeatureRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    qasurv::FeatureRow row;
    row.question_id = static_cast<long long>(i + 1);
    row.site = site;
    row.zscore = oracle::rnorm(rng);
    row.bodylength =
        1 + static_cast<long>(std::exp(0.8 * oracle::rnorm(rng) + 4.5));
    row.titlelength = 5 + static_cast<long>(oracle::runif(rng) * 70.0);
    row.hasexample = oracle::runif(rng) < 0.5;
    row.tagscount = 1 + static_cast<long>(oracle::runif(rng) * 5.0);
    row.sumpeople =
        1 + static_cast<long>(std::exp(1.2 * oracle::rnorm(rng) + 3.0));
    // Tiny samples must still have both binary levels and a varying count.
    if (i == 0) {
      row.hasexample = false;
      row.tagscount = 1;
    } else if (i == 1) {
      row.hasexample = true;
      row.tagscount = 2;
    }
    const double rate = 0.01 * std::exp(beta_example * (row.hasexample ? 1.0 : 0.0));
    const double t = oracle::rexp(rng, rate);
    if (censor_rate > 0.0) {
      const double c = oracle::rexp(rng, censor_rate);
      row.solved = t <= c;
      row.tanswer = std::min(t, c);
    } else {
      row.solved = true;
      row.tanswer = t;
    }
    rows.push_back(row);
  }
  return rows;
}

RunResult run_command(const std::string& command,
                      const std::filesystem::path& dir) {
  const auto out_path = dir / "cmd.out";
  const auto err_path = dir / "cmd.err";
  const std::string full =
      command + " >" + out_path.string() + " 2>" + err_path.string();
  const int status = std::system(full.c_str());
  RunResult result;
  if (status != -1 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  return result;
}

std::string cli_path() {
  const char* path = std::getenv("QASURV_CLI");
  if (path == nullptr || *path == '\0') {
    throw std::runtime_error("QASURV_CLI is not set");
  }
  return path;
}

}  // namespace fixtures
