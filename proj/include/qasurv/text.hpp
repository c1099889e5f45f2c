#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qasurv {

// Decodes HTML character references leniently: the five XML entities,
// a small set of common named HTML entities, and numeric references.
// Anything unrecognized is kept verbatim.
std::string decode_html_entities(std::string_view text);

// Removes markup from an HTML fragment and decodes entities in the
// remaining text. Tags contribute nothing, not even whitespace, so
// "<p>Hi</p><pre>x</pre>" strips to "Hix".
std::string strip_html(std::string_view html);

// Counts Unicode code points, skipping control characters except
// whitespace. Invalid UTF-8 bytes count as one code point each.
std::int64_t printable_length(std::string_view utf8);

// True when the fragment contains a <pre> or <code> element opening tag,
// case-insensitive, attributes allowed.
bool has_code_block(std::string_view html);

// Appends the UTF-8 encoding of a code point (used by entity decoding).
void append_utf8(std::string& out, std::uint32_t code_point);

}  // namespace qasurv
