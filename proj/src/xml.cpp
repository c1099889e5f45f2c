#include "qasurv/xml.hpp"

#include <charconv>
#include <fstream>
#include <vector>

#include "qasurv/errors.hpp"
#include "qasurv/text.hpp"
#include "qasurv/timeutil.hpp"

namespace qasurv {

namespace {

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in), buf_(1 << 18) {}

  // Returns the next byte or -1 at end of input.
  int get() {
    if (pos_ == len_ && !refill()) return -1;
    return static_cast<unsigned char>(buf_[pos_++]);
  }

  int peek() {
    if (pos_ == len_ && !refill()) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  // Offset of the byte peek() would return.
  std::uint64_t offset() const { return base_ + pos_; }

 private:
  bool refill() {
    base_ += len_;
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    len_ = static_cast<std::size_t>(in_.gcount());
    pos_ = 0;
    return len_ > 0;
  }

  std::istream& in_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::uint64_t base_ = 0;
};

bool is_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(int c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':';
}

bool is_name_char(int c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

class DumpParser {
 public:
  DumpParser(std::istream& in, const std::function<void(RawPost&&)>& sink,
             const DumpReaderOptions& options)
      : r_(in), sink_(sink), options_(options) {}

  ParseCounters run() {
    skip_bom();
    skip_misc();
    const std::string root = parse_open_tag_name();
    if (root != "posts") fail("expected a 'posts' document element");
    bool root_self_closed = false;
    skip_attributes(/*into=*/nullptr, &root_self_closed);
    if (!root_self_closed) {
      parse_children(root);
    }
    skip_misc();
    if (r_.peek() != -1) fail("content after the document element");
    return counters_;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(message, r_.offset());
  }

  int get_or_fail() {
    const int c = r_.get();
    if (c == -1) fail("unexpected end of input");
    return c;
  }

  void skip_bom() {
    if (r_.peek() == 0xEF) {
      r_.get();
      if (r_.get() != 0xBB || r_.get() != 0xBF) fail("malformed byte-order mark");
    }
  }

  void skip_ws() {
    while (is_space(r_.peek())) r_.get();
  }

  // Skips whitespace, XML declarations / processing instructions,
  // comments, and DOCTYPE between markup of interest.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (r_.peek() != '<') return;
      // Need lookahead beyond '<' without consuming a real tag open.
      // Consume '<' and dispatch.
      r_.get();
      const int c = r_.peek();
      if (c == '?') {
        r_.get();
        int prev = 0;
        for (;;) {
          const int t = get_or_fail();
          if (prev == '?' && t == '>') break;
          prev = t;
        }
      } else if (c == '!') {
        r_.get();
        if (r_.peek() == '-') {
          r_.get();
          if (get_or_fail() != '-') fail("malformed comment");
          int p1 = 0, p2 = 0;
          for (;;) {
            const int t = get_or_fail();
            if (p1 == '-' && p2 == '-' && t == '>') break;
            p1 = p2;
            p2 = t;
          }
        } else {
          // DOCTYPE without an internal subset.
          for (;;) {
            if (get_or_fail() == '>') break;
          }
        }
      } else {
        pending_open_ = true;
        return;
      }
    }
  }

  // Call only when skip_misc() stopped at a tag: '<' was consumed.
  std::string parse_open_tag_name() {
    if (!pending_open_) {
      skip_misc();
      if (!pending_open_) fail("expected an element");
    }
    pending_open_ = false;
    std::string name;
    if (!is_name_start(r_.peek())) fail("malformed element name");
    while (is_name_char(r_.peek())) name.push_back(static_cast<char>(r_.get()));
    return name;
  }

  struct Attribute {
    std::string name;
    std::string value;
    bool captured = true;
  };

  // Parses attributes up to '>' or '/>'. When `into` is null the values
  // are validated and discarded. Sets *self_closed accordingly.
  void skip_attributes(std::vector<Attribute>* into, bool* self_closed) {
    for (;;) {
      skip_ws();
      const int c = r_.peek();
      if (c == '>') {
        r_.get();
        *self_closed = false;
        return;
      }
      if (c == '/') {
        r_.get();
        if (get_or_fail() != '>') fail("malformed tag end");
        *self_closed = true;
        return;
      }
      if (!is_name_start(c)) fail("malformed attribute name");
      Attribute attr;
      while (is_name_char(r_.peek())) {
        attr.name.push_back(static_cast<char>(r_.get()));
      }
      skip_ws();
      if (get_or_fail() != '=') fail("expected '=' after attribute name");
      skip_ws();
      const int quote = get_or_fail();
      if (quote != '"' && quote != '\'') fail("expected quoted attribute value");
      // Body and Title dominate dump size; when the caller does not
      // want them we scan straight to the closing quote.
      const bool capture =
          into != nullptr &&
          (options_.capture_text ||
           (attr.name != "Body" && attr.name != "Title"));
      if (capture) {
        read_attribute_value(quote, attr.value);
      } else {
        for (;;) {
          const int t = get_or_fail();
          if (t == quote) break;
        }
        attr.captured = false;
      }
      if (into != nullptr) into->push_back(std::move(attr));
    }
  }

  // Strict XML text: raw '<' forbidden, '&' must start a character or
  // predefined entity reference.
  void read_attribute_value(int quote, std::string& out) {
    for (;;) {
      const int c = get_or_fail();
      if (c == quote) return;
      if (c == '<') fail("raw '<' in attribute value");
      if (c != '&') {
        out.push_back(static_cast<char>(c));
        continue;
      }
      std::string entity;
      for (;;) {
        const int t = get_or_fail();
        if (t == ';') break;
        if (entity.size() > 10) fail("unterminated entity reference");
        entity.push_back(static_cast<char>(t));
      }
      decode_entity(entity, out);
    }
  }

  void decode_entity(const std::string& entity, std::string& out) {
    if (entity == "lt") {
      out.push_back('<');
    } else if (entity == "gt") {
      out.push_back('>');
    } else if (entity == "amp") {
      out.push_back('&');
    } else if (entity == "quot") {
      out.push_back('"');
    } else if (entity == "apos") {
      out.push_back('\'');
    } else if (!entity.empty() && entity[0] == '#') {
      std::uint32_t cp = 0;
      std::size_t i = 1;
      const bool hex = i < entity.size() && (entity[i] == 'x' || entity[i] == 'X');
      if (hex) ++i;
      if (i >= entity.size()) fail("empty character reference");
      for (; i < entity.size(); ++i) {
        const char d = entity[i];
        std::uint32_t digit;
        if (d >= '0' && d <= '9') {
          digit = static_cast<std::uint32_t>(d - '0');
        } else if (hex && d >= 'a' && d <= 'f') {
          digit = static_cast<std::uint32_t>(d - 'a' + 10);
        } else if (hex && d >= 'A' && d <= 'F') {
          digit = static_cast<std::uint32_t>(d - 'A' + 10);
        } else {
          fail("malformed character reference");
        }
        cp = cp * (hex ? 16u : 10u) + digit;
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) {
        fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + entity + ";'");
    }
  }

  void parse_children(const std::string& root) {
    for (;;) {
      skip_misc();
      if (!pending_open_) {
        if (r_.peek() == -1) fail("unexpected end of input");
        fail("expected markup");
      }
      pending_open_ = false;
      if (r_.peek() == '/') {
        r_.get();
        std::string name;
        while (is_name_char(r_.peek())) {
          name.push_back(static_cast<char>(r_.get()));
        }
        skip_ws();
        if (get_or_fail() != '>') fail("malformed closing tag");
        if (name != root) fail("mismatched closing tag '" + name + "'");
        return;
      }
      std::string name;
      if (!is_name_start(r_.peek())) fail("malformed element name");
      while (is_name_char(r_.peek())) {
        name.push_back(static_cast<char>(r_.get()));
      }
      if (name != "row") fail("unexpected element '" + name + "'");
      const std::uint64_t row_offset = r_.offset();
      attrs_.clear();
      bool self_closed = false;
      skip_attributes(&attrs_, &self_closed);
      if (!self_closed) {
        // Tolerate <row ...></row> with nothing inside.
        skip_ws();
        if (get_or_fail() != '<' || get_or_fail() != '/') {
          fail("row elements must be empty");
        }
        std::string closing;
        while (is_name_char(r_.peek())) {
          closing.push_back(static_cast<char>(r_.get()));
        }
        skip_ws();
        if (get_or_fail() != '>') fail("malformed closing tag");
        if (closing != "row") fail("mismatched closing tag '" + closing + "'");
      }
      emit_row(row_offset);
    }
  }

  void emit_row(std::uint64_t row_offset) {
    ++counters_.rows_total;
    RawPost post;
    bool has_id = false, has_type = false, has_creation = false;
    std::string skip_reason;

    for (auto& attr : attrs_) {
      if (attr.name == "Id") {
        has_id = parse_ll(attr.value, post.id);
        if (!has_id) skip_reason = "unparseable Id";
      } else if (attr.name == "PostTypeId") {
        long long type_id = 0;
        has_type = parse_ll(attr.value, type_id);
        if (!has_type) {
          skip_reason = "unparseable PostTypeId";
        } else {
          post.post_type = type_id == 1   ? PostType::kQuestion
                           : type_id == 2 ? PostType::kAnswer
                                          : PostType::kOther;
        }
      } else if (attr.name == "CreationDate") {
        try {
          post.creation_ms = parse_timestamp_ms(attr.value);
          has_creation = true;
        } catch (const InvalidInputError&) {
          skip_reason = "unparseable CreationDate";
        }
      } else if (attr.name == "AcceptedAnswerId") {
        long long v;
        if (parse_ll(attr.value, v)) post.accepted_answer_id = v;
      } else if (attr.name == "ParentId") {
        long long v;
        if (parse_ll(attr.value, v)) post.parent_id = v;
      } else if (attr.name == "OwnerUserId") {
        long long v;
        if (parse_ll(attr.value, v)) post.owner_user_id = v;
      } else if (attr.name == "Title") {
        // Presence survives even when the text itself is not captured.
        post.title = attr.captured ? std::move(attr.value) : std::string();
      } else if (attr.name == "Body") {
        if (attr.captured) post.body = std::move(attr.value);
        post.has_body = true;
      } else if (attr.name == "Tags") {
        post.tags = split_tag_list(attr.value);
      } else if (attr.name == "ClosedDate") {
        post.closed = true;
      }
    }

    if (!has_id || !has_type || !has_creation) {
      ++counters_.rows_skipped;
      if (options_.warn) {
        if (skip_reason.empty()) {
          skip_reason = !has_id     ? "missing Id"
                        : !has_type ? "missing PostTypeId"
                                    : "missing CreationDate";
        }
        options_.warn("skipping row near byte " + std::to_string(row_offset) +
                      ": " + skip_reason);
      }
      return;
    }
    sink_(std::move(post));
  }

  static bool parse_ll(const std::string& s, long long& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
  }

  ByteReader r_;
  const std::function<void(RawPost&&)>& sink_;
  const DumpReaderOptions& options_;
  ParseCounters counters_;
  std::vector<Attribute> attrs_;
  bool pending_open_ = false;  // skip_misc consumed '<' of a real tag
};

}  // namespace

ParseCounters parse_dump(std::istream& in,
                         const std::function<void(RawPost&&)>& sink,
                         const DumpReaderOptions& options) {
  DumpParser parser(in, sink, options);
  return parser.run();
}

ParseCounters parse_dump_file(const std::string& path,
                              const std::function<void(RawPost&&)>& sink,
                              const DumpReaderOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open posts file: " + path);
  return parse_dump(in, sink, options);
}

std::vector<std::string> split_tag_list(const std::string& tags) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i] != '<') {
      ++i;
      continue;
    }
    const std::size_t end = tags.find('>', i + 1);
    if (end == std::string::npos) break;
    if (end > i + 1) out.push_back(tags.substr(i + 1, end - i - 1));
    i = end + 1;
  }
  return out;
}

}  // namespace qasurv
