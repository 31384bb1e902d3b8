#include "popabm/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>

#include "popabm/errors.hpp"

namespace popabm {

namespace chr = std::chrono;

namespace {

chr::year_month_day to_ymd(Date d) {
  return chr::year_month_day{chr::sys_days{chr::days{d.serial()}}};
}

void require_not_after(Date birthdate, Date t) {
  if (birthdate > t) {
    throw InputError("birthdate " + birthdate.to_string() + " lies after " + t.to_string());
  }
}

}  // namespace

DayDelta::DayDelta(std::int32_t days) : days_(days) {
  if (days < 0) throw InputError("negative day delta");
}

Date Date::from_ymd(int year, int month, int day) {
  if (month < 1 || month > 12 || day < 1 || day > 31) {
    throw InputError("invalid date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                     std::to_string(day));
  }
  const chr::year_month_day ymd{chr::year{year}, chr::month{static_cast<unsigned>(month)},
                                chr::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) {
    throw InputError("invalid date " + std::to_string(year) + "-" + std::to_string(month) + "-" +
                     std::to_string(day));
  }
  return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view iso) {
  auto fail = [&] { return InputError("malformed date '" + std::string(iso) + "', expected YYYY-MM-DD"); };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') throw fail();
  int y = 0, m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    const char* first = iso.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    if (ec != std::errc() || ptr != first + len) throw fail();
  };
  field(0, 4, y);
  field(5, 2, m);
  field(8, 2, d);
  return from_ymd(y, m, d);
}

int Date::year() const { return static_cast<int>(to_ymd(*this).year()); }
int Date::month() const { return static_cast<int>(static_cast<unsigned>(to_ymd(*this).month())); }
int Date::day() const { return static_cast<int>(static_cast<unsigned>(to_ymd(*this).day())); }

std::string Date::to_string() const {
  const auto ymd = to_ymd(*this);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool is_leap_year(int year) { return chr::year{year}.is_leap(); }
int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }
Date jan_first(int year) { return Date::from_ymd(year, 1, 1); }

Date anniversary(Date birthdate, int year) {
  const int m = birthdate.month();
  int d = birthdate.day();
  if (m == 2 && d == 29 && !is_leap_year(year)) d = 28;
  return Date::from_ymd(year, m, d);
}

bool is_anniversary(Date birthdate, Date t) {
  return t >= birthdate && anniversary(birthdate, t.year()) == t;
}

DayDelta delta_to_next_birthday(Date t, Date birthdate) {
  require_not_after(birthdate, t);
  Date next = anniversary(birthdate, t.year());
  if (next <= t) next = anniversary(birthdate, t.year() + 1);
  return DayDelta(days_between(t, next));
}

DayDelta delta_since_last_birthday(Date t, Date birthdate) {
  require_not_after(birthdate, t);
  Date last = anniversary(birthdate, t.year());
  if (last > t) last = anniversary(birthdate, t.year() - 1);
  return DayDelta(days_between(last, t));
}

DayDelta life_year_length(Date t, Date birthdate) {
  return delta_to_next_birthday(t, birthdate) + delta_since_last_birthday(t, birthdate);
}

int completed_years(Date birthdate, Date t) {
  require_not_after(birthdate, t);
  const int years = t.year() - birthdate.year();
  return anniversary(birthdate, t.year()) > t ? years - 1 : years;
}

Date add_months(Date d, int months) {
  const int total = d.year() * 12 + (d.month() - 1) + months;
  const int year = total >= 0 ? total / 12 : (total - 11) / 12;
  const int month = total - year * 12 + 1;
  const chr::year_month_day_last last{chr::year{year},
                                      chr::month_day_last{chr::month{static_cast<unsigned>(month)}}};
  const int max_day = static_cast<int>(static_cast<unsigned>(last.day()));
  return Date::from_ymd(year, month, std::min(d.day(), max_day));
}

Date add_years(Date d, int years) { return add_months(d, 12 * years); }

namespace {

// Latest birthdate whose holder has completed at least `age` years at `at`.
Date latest_birthdate_for(Date at, int age) {
  const int year = at.year() - age;
  const int m = at.month();
  const int d = at.day();
  if (m == 2 && d == 29 && !is_leap_year(year)) return Date::from_ymd(year, 2, 28);
  // Feb-29 birthdays are observed on Feb 28 in common years, so someone born
  // on Feb 29 has already had their birthday on Feb 28.
  if (m == 2 && d == 28 && !is_leap_year(at.year()) && is_leap_year(year)) {
    return Date::from_ymd(year, 2, 29);
  }
  return Date::from_ymd(year, m, d);
}

}  // namespace

std::pair<Date, Date> birthdate_window(Date at, int age) {
  if (age < 0) throw InputError("negative age");
  const Date last = latest_birthdate_for(at, age);
  const Date first = latest_birthdate_for(at, age + 1).plus_days(1);
  return {first, last};
}

}  // namespace popabm
