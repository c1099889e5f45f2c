#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qasurv/feature_row.hpp"
#include "qasurv/xml.hpp"

namespace qasurv {

// Per-tag count of distinct users who answered at least one question
// carrying the tag, over the whole dump.
struct TagAudience {
  std::unordered_map<std::string, std::int64_t> counts;

  std::int64_t count_for(const std::string& tag) const {
    const auto it = counts.find(tag);
    return it == counts.end() ? 0 : it->second;
  }

  std::int64_t sum_for(const std::vector<std::string>& tags) const {
    std::int64_t sum = 0;
    for (const auto& tag : tags) sum += count_for(tag);
    return sum;
  }
};

// Accumulates tag audiences from a stream of posts in any order. Answers
// whose question has not been seen yet are held back and resolved in
// finish(); anonymous answers are ignored. One-shot: finish() consumes the
// accumulated state.
class AudienceBuilder {
 public:
  void add(const RawPost& post);
  TagAudience finish();

 private:
  struct Pending {
    long long parent_id;
    long long owner;
  };

  void credit(const std::vector<std::string>& tags, long long user);

  std::unordered_map<long long, std::vector<std::string>> question_tags_;
  std::unordered_map<std::string, std::unordered_set<long long>> answerers_;
  std::vector<Pending> pending_;
};

// Whole-stream convenience over AudienceBuilder.
TagAudience build_audience(const std::vector<RawPost>& posts);

// A user's posting instants split by kind, sorted ascending, for
// expertise-at-posting-time lookups.
struct AuthorHistory {
  std::vector<std::int64_t> question_times;
  std::vector<std::int64_t> answer_times;

  // Counts strictly before `when`.
  std::int64_t questions_before(std::int64_t when) const;
  std::int64_t answers_before(std::int64_t when) const;
};

struct EventOutcome {
  double tanswer_minutes = 0;
  bool solved = false;
};

// Resolution time and event status for one question. Returns nullopt
// when the accepted answer's timestamp is not after the question's
// (a corrupt record that must be dropped).
std::optional<EventOutcome> compute_event(
    const RawPost& question,
    const std::unordered_map<long long, std::int64_t>& answer_creation,
    std::int64_t snapshot_ms);

// z-expertise of an author: (a - q)/sqrt(a + q) over posts strictly
// before `when`; 0 for an empty history.
double author_zscore(const AuthorHistory& history, std::int64_t when);

struct FeatureInputs {
  const TagAudience* audience = nullptr;
  const std::unordered_map<long long, AuthorHistory>* histories = nullptr;
  std::string site;
};

// Builds the covariate row for one open question whose event outcome is
// already known. Returns nullopt when the title or body is missing or
// strips to nothing.
std::optional<FeatureRow> extract_features(const RawPost& question,
                                           const EventOutcome& outcome,
                                           const FeatureInputs& inputs);

struct IngestCounters {
  std::uint64_t posts_parsed = 0;
  std::uint64_t rows_skipped = 0;  // malformed dump rows
  std::uint64_t questions_total = 0;
  std::uint64_t excluded_closed = 0;
  std::uint64_t excluded_invalid_event = 0;
  std::uint64_t excluded_missing_fields = 0;
  std::uint64_t emitted = 0;
};

struct IngestResult {
  std::vector<FeatureRow> rows;  // after sampling, sorted by question id
  IngestCounters counters;       // emitted counts rows before sampling
  std::int64_t snapshot_ms = 0;
};

struct IngestOptions {
  std::string site;
  std::uint64_t sample = 0;  // 0 means keep everything
  std::uint64_t seed = 0;
  std::function<void(const std::string&)> warn;
};

// Two passes over the posts file: the first collects the answer-time
// index, tag audiences, author histories, and the censoring snapshot;
// the second emits one FeatureRow per usable question. Rows are then
// sampled (if requested) and sorted by question id.
IngestResult ingest_posts_file(const std::string& path,
                               const IngestOptions& options);

// Uniform without-replacement sample of min(n, rows) rows, deterministic
// for a given seed, returned sorted by question id.
std::vector<FeatureRow> sample_questions(std::vector<FeatureRow> rows,
                                         std::uint64_t n, std::uint64_t seed);

}  // namespace qasurv
