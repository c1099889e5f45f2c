#include "qasurv/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "qasurv/errors.hpp"

namespace qasurv {

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw InvalidInputError("invalid timestamp: " + std::string(text));
}

int read_int(std::string_view text, std::size_t pos, std::size_t digits,
             std::string_view whole) {
  if (pos + digits > text.size()) bad(whole);
  int value = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') bad(whole);
    value = value * 10 + (c - '0');
  }
  return value;
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30,
                                       31, 31, 30, 31, 30, 31};
  if (m == 2 && leap(y)) return 29;
  return kDays[m - 1];
}

}  // namespace

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

// Inverse of days_from_civil (same source algorithm).
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

std::int64_t parse_timestamp_ms(std::string_view text) {
  // Shortest accepted form: YYYY-MM-DDThh:mm:ss (19 chars).
  if (text.size() < 19) bad(text);
  const int year = read_int(text, 0, 4, text);
  if (text[4] != '-') bad(text);
  const int month = read_int(text, 5, 2, text);
  if (text[7] != '-') bad(text);
  const int day = read_int(text, 8, 2, text);
  if (text[10] != 'T' && text[10] != ' ') bad(text);
  const int hour = read_int(text, 11, 2, text);
  if (text[13] != ':') bad(text);
  const int minute = read_int(text, 14, 2, text);
  if (text[16] != ':') bad(text);
  const int second = read_int(text, 17, 2, text);

  int millis = 0;
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    std::size_t digits = 0;
    std::int64_t frac = 0;
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 3) frac = frac * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) bad(text);
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
    millis = static_cast<int>(frac);
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) bad(text);

  if (month < 1 || month > 12) bad(text);
  if (day < 1 ||
      static_cast<unsigned>(day) > days_in_month(year, static_cast<unsigned>(month))) {
    bad(text);
  }
  if (hour > 23 || minute > 59 || second > 60) bad(text);

  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return ((days * 24 + hour) * 60 + minute) * 60000 + second * 1000 + millis;
}

std::string format_timestamp_ms(std::int64_t epoch_ms) {
  std::int64_t days = epoch_ms / 86400000;
  std::int64_t rem = epoch_ms % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --days;
  }
  int y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const int ms = static_cast<int>(rem % 1000);
  const int sec = static_cast<int>(rem / 1000 % 60);
  const int min = static_cast<int>(rem / 60000 % 60);
  const int hour = static_cast<int>(rem / 3600000);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03d", y, m, d,
                hour, min, sec, ms);
  return buf;
}

}  // namespace qasurv
