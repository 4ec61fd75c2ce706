#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace cashcast {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Throws ValidationError.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// ISO weekday: Monday = 1 ... Sunday = 7.
unsigned iso_weekday(const Date& date);
bool is_workday(const Date& date);

/// ISO-8601 week number in [1, 53].
unsigned iso_week(const Date& date);

/// First Mon-Fri date strictly after `date`.
Date next_workday(const Date& date);

}  // namespace cashcast
