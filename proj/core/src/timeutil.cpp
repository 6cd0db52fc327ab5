#include "riskvec/timeutil.hpp"

#include <cstdio>

#include "riskvec/errors.hpp"

namespace riskvec::timeutil {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  unsigned yoe = static_cast<unsigned>(y - era * 400);
  unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                     unsigned& d) {
  z += 719468;
  std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  unsigned doe = static_cast<unsigned>(z - era * 146097);
  unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned table[] = {31, 28, 31, 30, 31, 30,
                                   31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return table[m - 1];
}

struct Cursor {
  std::string_view s;
  std::size_t i = 0;

  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }
  char take() { return s[i++]; }
};

[[noreturn]] void bad(std::string_view s) {
  throw validation_error("invalid RFC3339 timestamp: \"" + std::string(s) +
                         "\"");
}

std::int64_t digits(Cursor& c, int count, std::string_view full) {
  std::int64_t v = 0;
  for (int k = 0; k < count; ++k) {
    if (c.done() || c.peek() < '0' || c.peek() > '9') bad(full);
    v = v * 10 + (c.take() - '0');
  }
  return v;
}

}  // namespace

std::int64_t parse_rfc3339(std::string_view s) {
  Cursor c{s};
  std::int64_t year = digits(c, 4, s);
  if (c.peek() != '-') bad(s);
  c.take();
  std::int64_t month = digits(c, 2, s);
  if (c.peek() != '-') bad(s);
  c.take();
  std::int64_t day = digits(c, 2, s);
  if (c.peek() != 'T' && c.peek() != 't' && c.peek() != ' ') bad(s);
  c.take();
  std::int64_t hour = digits(c, 2, s);
  if (c.peek() != ':') bad(s);
  c.take();
  std::int64_t minute = digits(c, 2, s);
  if (c.peek() != ':') bad(s);
  c.take();
  std::int64_t second = digits(c, 2, s);

  if (c.peek() == '.') {
    c.take();
    if (c.peek() < '0' || c.peek() > '9') bad(s);
    while (!c.done() && c.peek() >= '0' && c.peek() <= '9') c.take();
  }

  std::int64_t offset_s = 0;
  if (c.done()) bad(s);
  char z = c.take();
  if (z == 'Z' || z == 'z') {
    // UTC
  } else if (z == '+' || z == '-') {
    std::int64_t oh = digits(c, 2, s);
    if (c.peek() != ':') bad(s);
    c.take();
    std::int64_t om = digits(c, 2, s);
    if (oh > 23 || om > 59) bad(s);
    offset_s = (oh * 60 + om) * 60;
    if (z == '-') offset_s = -offset_s;
  } else {
    bad(s);
  }
  if (!c.done()) bad(s);

  if (month < 1 || month > 12) bad(s);
  if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month)))
    bad(s);
  if (hour > 23 || minute > 59 || second > 60) bad(s);
  if (second == 60) second = 59;

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                      static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset_s;
}

std::string format_rfc3339(std::int64_t unix_seconds) {
  std::int64_t days = unix_seconds / 86400;
  std::int64_t rem = unix_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return std::string(buf);
}

}  // namespace riskvec::timeutil
