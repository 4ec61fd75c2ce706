#include "cashcast/calendar.hpp"

#include "cashcast/error.hpp"

#include <charconv>
#include <cstdio>

namespace cashcast {

namespace {

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ValidationError("malformed date '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const int y = parse_field(text, 0, 4);
    const int m = parse_field(text, 5, 2);
    const int d = parse_field(text, 8, 2);
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw ValidationError("invalid calendar date '" + std::string(text) + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

unsigned iso_weekday(const Date& date) {
    return std::chrono::weekday{std::chrono::sys_days{date}}.iso_encoding();
}

bool is_workday(const Date& date) { return iso_weekday(date) <= 5; }

unsigned iso_week(const Date& date) {
    using namespace std::chrono;
    // The ISO week belongs to the year containing its Thursday.
    const sys_days day{date};
    const sys_days thursday = day + days{4 - static_cast<int>(iso_weekday(date))};
    const year iso_year = year_month_day{thursday}.year();
    const sys_days jan1{iso_year / January / 1};
    return static_cast<unsigned>((thursday - jan1).count() / 7 + 1);
}

Date next_workday(const Date& date) {
    std::chrono::sys_days day{date};
    do {
        day += std::chrono::days{1};
    } while (!is_workday(Date{day}));
    return Date{day};
}

}  // namespace cashcast
