#pragma once

#include <string>

namespace hgat {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
};

// Strict YYYY-MM-DD parsing; rejects malformed or impossible dates.
Date parse_date(const std::string& s);
std::string format_date(const Date& d);

// Days since 1970-01-01 (proleptic Gregorian), usable for lag arithmetic.
int days_from_civil(const Date& d);
Date civil_from_days(int serial);

// year * 4 + quarter-of-year (0-based); consecutive quarters differ by 1.
int quarter_index(const Date& d);

bool is_weekend(int serial);

}  // namespace hgat
