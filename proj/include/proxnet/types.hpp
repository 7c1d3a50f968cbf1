#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "proxnet/time_grid.hpp"

namespace proxnet {

// Salted hash digest of a raw device identifier (lowercase hex).
struct DeviceId {
  std::string value;

  bool operator==(const DeviceId&) const = default;
  auto operator<=>(const DeviceId&) const = default;
  bool empty() const { return value.empty(); }
};

enum class Platform { platform_A, platform_B, badge };

Platform platform_from_string(const std::string& s);
std::string platform_to_string(Platform p);

struct Participant {
  std::string label;   // roster key
  DeviceId app_id;
  DeviceId badge_id;
  Platform platform = Platform::platform_A;
};

enum class Source { app, badge };
enum class EventKind { scan, detect, telemetry };

Source source_from_string(const std::string& s);
std::string source_to_string(Source s);
EventKind kind_from_string(const std::string& s);
std::string kind_to_string(EventKind k);

struct ScanEvent {
  Instant timestamp = 0;
  Source source = Source::app;
  EventKind kind = EventKind::scan;
  DeviceId scanner;
  std::optional<DeviceId> observed;  // present iff kind == detect

  bool operator==(const ScanEvent&) const = default;
  auto operator<=>(const ScanEvent&) const = default;
};

// Per-bin operating flags for one device.
struct ActivityTimeline {
  DeviceId device;
  std::vector<bool> active;

  double active_fraction() const {
    if (active.empty()) return 0.0;
    std::size_t n = 0;
    for (bool b : active) n += b;
    return static_cast<double>(n) / static_cast<double>(active.size());
  }
};

}  // namespace proxnet
