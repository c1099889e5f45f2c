#include "qasurv/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "qasurv/errors.hpp"
#include "qasurv/text.hpp"

namespace qasurv {

std::int64_t AuthorHistory::questions_before(std::int64_t when) const {
  return std::lower_bound(question_times.begin(), question_times.end(), when) -
         question_times.begin();
}

std::int64_t AuthorHistory::answers_before(std::int64_t when) const {
  return std::lower_bound(answer_times.begin(), answer_times.end(), when) -
         answer_times.begin();
}

std::optional<EventOutcome> compute_event(
    const RawPost& question,
    const std::unordered_map<long long, std::int64_t>& answer_creation,
    std::int64_t snapshot_ms) {
  if (question.accepted_answer_id) {
    const auto it = answer_creation.find(*question.accepted_answer_id);
    if (it != answer_creation.end()) {
      if (it->second <= question.creation_ms) return std::nullopt;
      return EventOutcome{
          static_cast<double>(it->second - question.creation_ms) / 60000.0,
          true};
    }
    // Accepted answer absent from the dump: observationally the same as
    // unanswered, so censor at the snapshot.
  }
  return EventOutcome{
      static_cast<double>(snapshot_ms - question.creation_ms) / 60000.0,
      false};
}

double author_zscore(const AuthorHistory& history, std::int64_t when) {
  const double a = static_cast<double>(history.answers_before(when));
  const double q = static_cast<double>(history.questions_before(when));
  if (a + q == 0.0) return 0.0;
  return (a - q) / std::sqrt(a + q);
}

std::optional<FeatureRow> extract_features(const RawPost& question,
                                           const EventOutcome& outcome,
                                           const FeatureInputs& inputs) {
  if (!question.has_body || !question.title) return std::nullopt;
  const std::int64_t bodylength = printable_length(strip_html(question.body));
  const std::int64_t titlelength =
      printable_length(strip_html(*question.title));
  if (bodylength < 1 || titlelength < 1) return std::nullopt;

  FeatureRow row;
  row.question_id = question.id;
  row.site = inputs.site;
  row.tanswer = outcome.tanswer_minutes;
  row.solved = outcome.solved;
  row.bodylength = static_cast<long>(bodylength);
  row.titlelength = static_cast<long>(titlelength);
  row.hasexample = has_code_block(question.body);
  row.tagscount = static_cast<long>(question.tags.size());
  row.sumpeople = static_cast<long>(inputs.audience->sum_for(question.tags));
  row.zscore = 0.0;
  if (question.owner_user_id) {
    const auto it = inputs.histories->find(*question.owner_user_id);
    if (it != inputs.histories->end()) {
      row.zscore = author_zscore(it->second, question.creation_ms);
    }
  }
  return row;
}

void AudienceBuilder::credit(const std::vector<std::string>& tags,
                             long long user) {
  for (const auto& tag : tags) answerers_[tag].insert(user);
}

void AudienceBuilder::add(const RawPost& post) {
  if (post.post_type == PostType::kQuestion) {
    question_tags_.emplace(post.id, post.tags);
  } else if (post.post_type == PostType::kAnswer && post.owner_user_id &&
             post.parent_id) {
    // Dumps normally list a question before its answers, so most lookups
    // hit; stragglers resolve in finish().
    const auto it = question_tags_.find(*post.parent_id);
    if (it != question_tags_.end()) {
      credit(it->second, *post.owner_user_id);
    } else {
      pending_.push_back({*post.parent_id, *post.owner_user_id});
    }
  }
}

TagAudience AudienceBuilder::finish() {
  for (const auto& entry : pending_) {
    const auto it = question_tags_.find(entry.parent_id);
    if (it != question_tags_.end()) credit(it->second, entry.owner);
  }
  TagAudience audience;
  for (const auto& [tag, users] : answerers_) {
    audience.counts.emplace(tag, static_cast<std::int64_t>(users.size()));
  }
  question_tags_.clear();
  answerers_.clear();
  pending_.clear();
  return audience;
}

TagAudience build_audience(const std::vector<RawPost>& posts) {
  AudienceBuilder builder;
  for (const auto& post : posts) builder.add(post);
  return builder.finish();
}

namespace {

struct LightIndex {
  std::unordered_map<long long, std::int64_t> answer_creation;
  std::unordered_map<long long, AuthorHistory> histories;
  AudienceBuilder audience_builder;
  std::int64_t snapshot_ms = std::numeric_limits<std::int64_t>::min();
  std::uint64_t posts = 0;
};

std::uint64_t bounded_rand(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased and the sequence
  // identical on every platform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

std::vector<FeatureRow> sample_questions(std::vector<FeatureRow> rows,
                                         std::uint64_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidInputError("sample size must be at least 1");
  const std::uint64_t keep = std::min<std::uint64_t>(n, rows.size());
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < keep; ++i) {
    const std::uint64_t j = i + bounded_rand(rng, rows.size() - i);
    std::swap(rows[i], rows[j]);
  }
  rows.resize(keep);
  std::sort(rows.begin(), rows.end(),
            [](const FeatureRow& a, const FeatureRow& b) {
              return a.question_id < b.question_id;
            });
  return rows;
}

IngestResult ingest_posts_file(const std::string& path,
                               const IngestOptions& options) {
  LightIndex index;

  DumpReaderOptions pass1;
  pass1.capture_text = false;
  pass1.warn = options.warn;
  const ParseCounters parse_counters = parse_dump_file(
      path,
      [&](RawPost&& post) {
        ++index.posts;
        index.snapshot_ms = std::max(index.snapshot_ms, post.creation_ms);
        index.audience_builder.add(post);
        if (post.post_type == PostType::kQuestion) {
          if (post.owner_user_id) {
            index.histories[*post.owner_user_id].question_times.push_back(
                post.creation_ms);
          }
        } else if (post.post_type == PostType::kAnswer) {
          index.answer_creation.emplace(post.id, post.creation_ms);
          if (post.owner_user_id) {
            index.histories[*post.owner_user_id].answer_times.push_back(
                post.creation_ms);
          }
        }
      },
      pass1);

  for (auto& [user, history] : index.histories) {
    std::sort(history.question_times.begin(), history.question_times.end());
    std::sort(history.answer_times.begin(), history.answer_times.end());
  }

  const TagAudience audience = index.audience_builder.finish();

  IngestResult result;
  result.snapshot_ms = index.snapshot_ms;
  result.counters.posts_parsed = parse_counters.rows_total -
                                 parse_counters.rows_skipped;
  result.counters.rows_skipped = parse_counters.rows_skipped;

  FeatureInputs inputs;
  inputs.audience = &audience;
  inputs.histories = &index.histories;
  inputs.site = options.site;

  DumpReaderOptions pass2;
  pass2.capture_text = true;
  parse_dump_file(
      path,
      [&](RawPost&& post) {
        if (post.post_type != PostType::kQuestion) return;
        ++result.counters.questions_total;
        if (post.closed) {
          ++result.counters.excluded_closed;
          return;
        }
        const auto outcome =
            compute_event(post, index.answer_creation, index.snapshot_ms);
        if (!outcome || !(outcome->tanswer_minutes > 0.0)) {
          ++result.counters.excluded_invalid_event;
          return;
        }
        auto row = extract_features(post, *outcome, inputs);
        if (!row) {
          ++result.counters.excluded_missing_fields;
          return;
        }
        ++result.counters.emitted;
        result.rows.push_back(std::move(*row));
      },
      pass2);

  if (options.sample > 0) {
    result.rows = sample_questions(std::move(result.rows), options.sample,
                                   options.seed);
  } else {
    std::sort(result.rows.begin(), result.rows.end(),
              [](const FeatureRow& a, const FeatureRow& b) {
                return a.question_id < b.question_id;
              });
  }
  return result;
}

}  // namespace qasurv
