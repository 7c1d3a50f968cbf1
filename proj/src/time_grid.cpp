#include "proxnet/time_grid.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "proxnet/error.hpp"

namespace proxnet {

// Howard Hinnant's days-from-civil algorithm.
CivilDay civil_day_from_ymd(int y, int m, int d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

void ymd_from_civil_day(CivilDay z, int& y, int& m, int& d) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int yr = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = yr + (m <= 2);
}

int weekday_of(CivilDay day) {
  // 1970-01-01 was a Thursday (4).
  return static_cast<int>(((day % 7) + 11) % 7);
}

namespace {

std::uint32_t read_be32(const unsigned char* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::int64_t read_be64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return static_cast<std::int64_t>(v);
}

struct TzifHeader {
  char version;
  std::uint32_t isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt;
};

TzifHeader read_header(const unsigned char* p) {
  if (std::memcmp(p, "TZif", 4) != 0) throw ConfigError("not a TZif file");
  TzifHeader h;
  h.version = static_cast<char>(p[4]);
  h.isutcnt = read_be32(p + 20);
  h.isstdcnt = read_be32(p + 24);
  h.leapcnt = read_be32(p + 28);
  h.timecnt = read_be32(p + 32);
  h.typecnt = read_be32(p + 36);
  h.charcnt = read_be32(p + 40);
  return h;
}

std::size_t data_block_size(const TzifHeader& h, int time_size) {
  return h.timecnt * (time_size + 1) + h.typecnt * 6 + h.charcnt + h.leapcnt * (time_size + 4) +
         h.isstdcnt + h.isutcnt;
}

}  // namespace

TimeZoneInfo TimeZoneInfo::load(const std::string& iana_name) {
  if (iana_name.empty() || iana_name.find("..") != std::string::npos ||
      iana_name.front() == '/')
    throw ConfigError("invalid timezone name: '" + iana_name + "'");
  const std::string path = "/usr/share/zoneinfo/" + iana_name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("unknown timezone: '" + iana_name + "'");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 44) throw ConfigError("truncated tzdata for " + iana_name);

  TzifHeader h1 = read_header(buf.data());
  std::size_t off = 44;
  int time_size = 4;
  TzifHeader h = h1;
  if (h1.version >= '2') {
    // Skip the 32-bit block, use the 64-bit one.
    off += data_block_size(h1, 4);
    if (off + 44 > buf.size()) throw ConfigError("truncated tzdata for " + iana_name);
    h = read_header(buf.data() + off);
    off += 44;
    time_size = 8;
  }
  if (off + data_block_size(h, time_size) > buf.size())
    throw ConfigError("truncated tzdata for " + iana_name);

  const unsigned char* p = buf.data() + off;
  std::vector<std::int64_t> trans(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) {
    trans[i] = time_size == 8 ? read_be64(p + 8 * i)
                              : static_cast<std::int32_t>(read_be32(p + 4 * i));
  }
  const unsigned char* type_idx = p + h.timecnt * time_size;
  const unsigned char* ttinfo = type_idx + h.timecnt;
  std::vector<std::int64_t> utoff(h.typecnt);
  std::vector<bool> isdst(h.typecnt);
  for (std::uint32_t i = 0; i < h.typecnt; ++i) {
    utoff[i] = static_cast<std::int32_t>(read_be32(ttinfo + 6 * i));
    isdst[i] = ttinfo[6 * i + 4] != 0;
  }
  if (h.typecnt == 0) throw ConfigError("tzdata has no types for " + iana_name);

  TimeZoneInfo tz;
  tz.name_ = iana_name;
  tz.transitions_ = trans;
  tz.offsets_.resize(h.timecnt);
  for (std::uint32_t i = 0; i < h.timecnt; ++i) tz.offsets_[i] = utoff[type_idx[i]];
  // Before the first transition: first standard-time type, else type 0.
  tz.initial_offset_ = utoff[0];
  for (std::uint32_t i = 0; i < h.typecnt; ++i) {
    if (!isdst[i]) {
      tz.initial_offset_ = utoff[i];
      break;
    }
  }
  return tz;
}

std::int64_t TimeZoneInfo::offset_at(Instant utc) const {
  auto it = std::upper_bound(transitions_.begin(), transitions_.end(), utc);
  if (it == transitions_.begin()) return initial_offset_;
  return offsets_[static_cast<std::size_t>(it - transitions_.begin()) - 1];
}

TimeGrid::TimeGrid(const Params& p) : params_(p), tz_(TimeZoneInfo::load(p.timezone)) {
  if (p.bin_seconds <= 0) throw ConfigError("bin_seconds must be positive");
  const int window = p.daily_end_sec - p.daily_start_sec;
  if (window <= 0) throw ConfigError("daily_end must be after daily_start");
  if (window % p.bin_seconds != 0)
    throw ConfigError("bin_seconds must evenly divide the daily window");
  const CivilDay first = civil_day_from_ymd(p.start_year, p.start_month, p.start_day);
  const CivilDay last = civil_day_from_ymd(p.end_year, p.end_month, p.end_day);
  if (first > last) throw ConfigError("end_date precedes start_date");
  for (CivilDay d = first; d <= last; ++d) {
    if (p.days_of_week.count(weekday_of(d))) included_days_.push_back(d);
  }
}

TimeGrid TimeGrid::study_default() {
  Params p;
  p.start_year = 2015, p.start_month = 8, p.start_day = 17;
  p.end_year = 2015, p.end_month = 9, p.end_day = 11;
  p.days_of_week = {1, 2, 3, 4, 5};
  p.daily_start_sec = 9 * 3600;
  p.daily_end_sec = 17 * 3600;
  p.timezone = "Australia/Sydney";
  p.bin_seconds = 300;
  return TimeGrid(p);
}

std::optional<std::size_t> TimeGrid::bin_of(Instant utc) const {
  const std::int64_t local = utc + tz_.offset_at(utc);
  CivilDay day = static_cast<CivilDay>(local >= 0 ? local / 86400 : (local - 86399) / 86400);
  const std::int64_t sec_of_day = local - std::int64_t(day) * 86400;
  if (sec_of_day < params_.daily_start_sec || sec_of_day >= params_.daily_end_sec)
    return std::nullopt;
  auto it = std::lower_bound(included_days_.begin(), included_days_.end(), day);
  if (it == included_days_.end() || *it != day) return std::nullopt;
  const std::size_t day_idx = static_cast<std::size_t>(it - included_days_.begin());
  const std::size_t slot =
      static_cast<std::size_t>((sec_of_day - params_.daily_start_sec) / params_.bin_seconds);
  return day_idx * daily_bins() + slot;
}

std::pair<Instant, Instant> TimeGrid::bin_interval(std::size_t bin) const {
  const std::size_t day_idx = bin / daily_bins();
  const std::size_t slot = bin % daily_bins();
  if (day_idx >= included_days_.size()) throw ConfigError("bin index out of range");
  const std::int64_t local = std::int64_t(included_days_[day_idx]) * 86400 +
                             params_.daily_start_sec +
                             std::int64_t(slot) * params_.bin_seconds;
  // local -> UTC: the offset at the UTC instant is what matters; office-hour
  // bins never straddle a DST jump in practice, so one fixup pass suffices.
  Instant utc = local - tz_.offset_at(local);
  utc = local - tz_.offset_at(utc);
  return {utc, utc + params_.bin_seconds};
}

Instant parse_instant(const std::string& s) {
  int y, mo, d, h, mi;
  double sec;
  char zone = '\0';
  int n = std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%lf%c", &y, &mo, &d, &h, &mi, &sec, &zone);
  if (n < 6 || (n == 7 && zone != 'Z' && zone != 'z'))
    throw ParseError("malformed timestamp: '" + s + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      sec < 0 || sec >= 61)
    throw ParseError("timestamp out of range: '" + s + "'");
  return std::int64_t(civil_day_from_ymd(y, mo, d)) * 86400 + h * 3600 + mi * 60 +
         static_cast<std::int64_t>(sec);
}

std::string format_instant(Instant utc) {
  CivilDay day = static_cast<CivilDay>(utc >= 0 ? utc / 86400 : (utc - 86399) / 86400);
  std::int64_t s = utc - std::int64_t(day) * 86400;
  int y, mo, d;
  ymd_from_civil_day(day, y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                static_cast<int>(s / 3600), static_cast<int>((s / 60) % 60),
                static_cast<int>(s % 60));
  return buf;
}

}  // namespace proxnet
