#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace popabm {

// Non-negative whole number of days.
class DayDelta {
 public:
  constexpr DayDelta() = default;
  explicit DayDelta(std::int32_t days);

  constexpr std::int32_t days() const noexcept { return days_; }
  friend constexpr auto operator<=>(DayDelta, DayDelta) = default;
  friend DayDelta operator+(DayDelta a, DayDelta b) { return DayDelta(a.days_ + b.days_); }

 private:
  std::int32_t days_ = 0;
};

// A valid proleptic Gregorian calendar date. Stored as a day serial so that
// comparisons and differences are plain integer arithmetic.
class Date {
 public:
  constexpr Date() = default;

  // Throws InputError for impossible combinations (e.g. 2021-02-29).
  static Date from_ymd(int year, int month, int day);
  // Strict ISO-8601 "YYYY-MM-DD".
  static Date parse(std::string_view iso);
  static constexpr Date from_serial(std::int32_t serial) { return Date(serial); }

  int year() const;
  int month() const;
  int day() const;
  constexpr std::int32_t serial() const noexcept { return serial_; }

  std::string to_string() const;

  Date plus_days(std::int32_t days) const { return Date(serial_ + days); }
  Date operator+(DayDelta d) const { return plus_days(d.days()); }

  friend constexpr auto operator<=>(Date, Date) = default;
  friend constexpr bool operator==(Date, Date) = default;

 private:
  constexpr explicit Date(std::int32_t serial) : serial_(serial) {}
  std::int32_t serial_ = 0;  // days since 1970-01-01
};

// Signed number of days from `from` to `to`.
constexpr std::int32_t days_between(Date from, Date to) { return to.serial() - from.serial(); }

bool is_leap_year(int year);
int days_in_year(int year);
Date jan_first(int year);

// Date on which a birthday falls in `year`. Feb-29 birthdays are observed on
// Feb 28 in common years.
Date anniversary(Date birthdate, int year);
bool is_anniversary(Date birthdate, Date t);

// Days from t to the next anniversary strictly after t (1..366).
DayDelta delta_to_next_birthday(Date t, Date birthdate);
// Days since the most recent anniversary at or before t (0..365).
DayDelta delta_since_last_birthday(Date t, Date birthdate);
// Length of the life-year containing t; always 365 or 366.
DayDelta life_year_length(Date t, Date birthdate);

// Number of anniversaries in (birthdate, t]; i.e. age in completed years.
int completed_years(Date birthdate, Date t);

// Calendar shifts anchored on `d`; the day is clamped to the month length.
Date add_months(Date d, int months);
Date add_years(Date d, int years);

// Inclusive range of birthdates for which completed_years(bd, at) == age.
std::pair<Date, Date> birthdate_window(Date at, int age);

}  // namespace popabm
