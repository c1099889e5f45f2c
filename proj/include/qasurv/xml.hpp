#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace qasurv {

enum class PostType { kQuestion, kAnswer, kOther };

struct RawPost {
  long long id = 0;
  PostType post_type = PostType::kOther;
  std::int64_t creation_ms = 0;
  std::optional<long long> accepted_answer_id;
  std::optional<long long> parent_id;
  std::optional<long long> owner_user_id;
  std::optional<std::string> title;
  std::string body;
  bool has_body = false;
  std::vector<std::string> tags;
  bool closed = false;
};

struct ParseCounters {
  std::uint64_t rows_total = 0;    // row elements seen
  std::uint64_t rows_skipped = 0;  // rows missing Id/PostTypeId/CreationDate
};

struct DumpReaderOptions {
  // When false, Body and Title attribute values are scanned but not
  // retained, which keeps the light indexing pass cheap.
  bool capture_text = true;
  // Called once per skipped row with a human-readable reason.
  std::function<void(const std::string&)> warn;
};

// Streams a Stack Exchange Posts dump (a `posts` element holding `row`
// elements) and invokes `sink` for each post in document order. Memory
// use is bounded by the largest single row. Malformed XML raises
// ParseError carrying the byte offset; rows lacking a required
// attribute are counted and skipped, never fatal.
ParseCounters parse_dump(std::istream& in,
                         const std::function<void(RawPost&&)>& sink,
                         const DumpReaderOptions& options = {});

// Convenience for fixtures: parse from a filesystem path.
ParseCounters parse_dump_file(const std::string& path,
                              const std::function<void(RawPost&&)>& sink,
                              const DumpReaderOptions& options = {});

// Splits a decoded Tags attribute of the form "<a><b>" into {"a","b"}.
std::vector<std::string> split_tag_list(const std::string& tags);

}  // namespace qasurv
