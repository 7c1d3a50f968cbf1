#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace proxnet {

// Seconds since the Unix epoch, UTC.
using Instant = std::int64_t;

// Days since 1970-01-01.
using CivilDay = std::int32_t;

CivilDay civil_day_from_ymd(int year, int month, int day);
void ymd_from_civil_day(CivilDay day, int& year, int& month, int& dayofm);
// 0 = Sunday ... 6 = Saturday.
int weekday_of(CivilDay day);

// UTC offsets of an IANA time zone, loaded from the system tzdata
// (TZif files under /usr/share/zoneinfo). Immutable once loaded.
class TimeZoneInfo {
 public:
  // Throws ConfigError if the zone name is unknown or the file unreadable.
  static TimeZoneInfo load(const std::string& iana_name);

  // UTC offset (seconds east) in effect at the given UTC instant.
  std::int64_t offset_at(Instant utc) const;

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::int64_t> transitions_;  // UTC instants, ascending
  std::vector<std::int64_t> offsets_;      // offsets_[k] applies from transitions_[k]
  std::int64_t initial_offset_ = 0;        // before the first transition
};

// Office-hours bin structure: a set of weekdays between two calendar
// dates, each day covered by contiguous fixed-width bins between
// daily_start and daily_end local time. Bins are half-open [t, t+bin).
class TimeGrid {
 public:
  struct Params {
    int start_year, start_month, start_day;
    int end_year, end_month, end_day;  // inclusive
    std::set<int> days_of_week;        // 0=Sun .. 6=Sat
    int daily_start_sec;               // seconds past local midnight
    int daily_end_sec;
    std::string timezone;  // IANA name
    int bin_seconds = 300;
  };

  // Validates invariants (bin width divides the daily window, start <= end).
  // Throws ConfigError on violation.
  explicit TimeGrid(const Params& p);

  // Reference study layout: Mon-Fri 9am-5pm, 17 Aug - 11 Sep 2015,
  // Australia/Sydney, 300 s bins.
  static TimeGrid study_default();

  std::size_t total_bins() const { return included_days_.size() * daily_bins(); }
  std::size_t daily_bins() const {
    return static_cast<std::size_t>((params_.daily_end_sec - params_.daily_start_sec) /
                                    params_.bin_seconds);
  }
  int bin_seconds() const { return params_.bin_seconds; }
  const Params& params() const { return params_; }

  // Global 0-based bin index of a UTC instant, or nullopt when the
  // instant falls outside the office-hours windows. An instant exactly
  // at daily_end maps to nullopt (half-open bins).
  std::optional<std::size_t> bin_of(Instant utc) const;

  // Inverse: half-open UTC interval [start, end) of a bin.
  std::pair<Instant, Instant> bin_interval(std::size_t bin) const;

 private:
  Params params_;
  TimeZoneInfo tz_;
  std::vector<CivilDay> included_days_;  // ascending
};

// ISO-8601 UTC ("2015-08-17T09:00:00Z"); ParseError on malformed input.
Instant parse_instant(const std::string& iso8601_utc);
std::string format_instant(Instant utc);

}  // namespace proxnet
