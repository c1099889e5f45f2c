#include "qasurv/text.hpp"

#include <array>
#include <cctype>
#include <cstdlib>

namespace qasurv {

namespace {

struct NamedEntity {
  std::string_view name;
  std::uint32_t code_point;
};

// The XML five plus the HTML names that actually occur in question bodies.
constexpr std::array<NamedEntity, 14> kNamedEntities{{
    {"lt", 0x3C},
    {"gt", 0x3E},
    {"amp", 0x26},
    {"quot", 0x22},
    {"apos", 0x27},
    {"nbsp", 0xA0},
    {"ndash", 0x2013},
    {"mdash", 0x2014},
    {"hellip", 0x2026},
    {"copy", 0xA9},
    {"reg", 0xAE},
    {"trade", 0x2122},
    {"lsquo", 0x2018},
    {"rsquo", 0x2019},
}};

// Parses the reference starting at text[pos] (which is '&'). On success
// appends the decoded character and returns the index one past ';'. On
// failure appends nothing and returns pos (caller copies the '&').
std::size_t try_decode_reference(std::string_view text, std::size_t pos,
                                 std::string& out) {
  const std::size_t semi = text.find(';', pos + 1);
  if (semi == std::string_view::npos || semi == pos + 1 || semi - pos > 12) {
    return pos;
  }
  const std::string_view body = text.substr(pos + 1, semi - pos - 1);
  if (body[0] == '#') {
    std::uint32_t cp = 0;
    std::size_t i = 1;
    bool hex = i < body.size() && (body[i] == 'x' || body[i] == 'X');
    if (hex) ++i;
    if (i >= body.size()) return pos;
    for (; i < body.size(); ++i) {
      const char c = body[i];
      std::uint32_t digit;
      if (c >= '0' && c <= '9') {
        digit = static_cast<std::uint32_t>(c - '0');
      } else if (hex && c >= 'a' && c <= 'f') {
        digit = static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (hex && c >= 'A' && c <= 'F') {
        digit = static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        return pos;
      }
      cp = cp * (hex ? 16u : 10u) + digit;
      if (cp > 0x10FFFF) return pos;
    }
    if (cp == 0 || (cp >= 0xD800 && cp <= 0xDFFF)) return pos;
    append_utf8(out, cp);
    return semi + 1;
  }
  for (const auto& entity : kNamedEntities) {
    if (body == entity.name) {
      append_utf8(out, entity.code_point);
      return semi + 1;
    }
  }
  return pos;
}

}  // namespace

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_html_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '&') {
      const std::size_t next = try_decode_reference(text, i, out);
      if (next != i) {
        i = next;
        continue;
      }
    }
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

std::string strip_html(std::string_view html) {
  std::string text;
  text.reserve(html.size());
  std::size_t i = 0;
  while (i < html.size()) {
    const char c = html[i];
    if (c != '<') {
      text.push_back(c);
      ++i;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      const std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    // Skip to the closing '>', honoring quoted attribute values which
    // may legally contain '>'.
    ++i;
    char quote = 0;
    while (i < html.size()) {
      const char t = html[i];
      if (quote != 0) {
        if (t == quote) quote = 0;
      } else if (t == '"' || t == '\'') {
        quote = t;
      } else if (t == '>') {
        ++i;
        break;
      }
      ++i;
    }
  }
  return decode_html_entities(text);
}

std::int64_t printable_length(std::string_view utf8) {
  std::int64_t count = 0;
  std::size_t i = 0;
  while (i < utf8.size()) {
    const auto lead = static_cast<unsigned char>(utf8[i]);
    std::uint32_t cp;
    std::size_t len;
    if (lead < 0x80) {
      cp = lead;
      len = 1;
    } else if ((lead >> 5) == 0x6) {
      cp = lead & 0x1F;
      len = 2;
    } else if ((lead >> 4) == 0xE) {
      cp = lead & 0x0F;
      len = 3;
    } else if ((lead >> 3) == 0x1E) {
      cp = lead & 0x07;
      len = 4;
    } else {
      ++count;  // stray byte, counted as one glyph
      ++i;
      continue;
    }
    if (i + len > utf8.size()) {
      ++count;
      ++i;
      continue;
    }
    bool valid = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cont = static_cast<unsigned char>(utf8[i + k]);
      if ((cont >> 6) != 0x2) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
      ++count;
      ++i;
      continue;
    }
    i += len;
    const bool c0 = cp < 0x20;
    const bool c1 = (cp >= 0x7F && cp <= 0x9F);
    const bool ws = cp == 0x09 || cp == 0x0A || cp == 0x0B || cp == 0x0C ||
                    cp == 0x0D || cp == 0x85;
    if ((c0 || c1) && !ws) continue;
    ++count;
  }
  return count;
}

bool has_code_block(std::string_view html) {
  const auto matches_at = [&](std::size_t i, std::string_view tag) {
    if (i + 1 + tag.size() > html.size()) return false;
    for (std::size_t k = 0; k < tag.size(); ++k) {
      const char c = html[i + 1 + k];
      if (std::tolower(static_cast<unsigned char>(c)) != tag[k]) return false;
    }
    const std::size_t after = i + 1 + tag.size();
    if (after >= html.size()) return false;
    const char c = html[after];
    return c == '>' || c == '/' || c == ' ' || c == '\t' || c == '\n' ||
           c == '\r';
  };
  for (std::size_t i = 0; i + 1 < html.size(); ++i) {
    if (html[i] != '<') continue;
    if (matches_at(i, "pre") || matches_at(i, "code")) return true;
  }
  return false;
}

}  // namespace qasurv
