#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wsnsync/metrics.hpp"
#include "wsnsync/random.hpp"
#include "wsnsync/timebase.hpp"

namespace wsnsync {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class ProtocolMode { kProposed, kClassic };

/// One scenario. Defaults reproduce the reference experiment: one head and
/// one sensor 100 m apart, sensor skew 1 + 100 ppm, offset 1 s, 1 ns
/// timestamping noise, 100 Poisson measurements over 120 s.
struct SimConfig {
  double duration = 120.0;
  double beacon_interval = 0.1;  // also the classic sync period
  std::size_t n_measurements = 100;
  double distance_m = 100.0;
  double skew_ppm = 100.0;
  double offset_s = 1.0;
  double noise_sigma = 1e-9;
  bool scfr_enabled = true;
  ProtocolMode mode = ProtocolMode::kProposed;
  std::uint64_t seed = 1;
  double warmup_s = 10.0;
  std::size_t n_sensors = 1;
  // Optional per-sensor clocks; when empty every sensor uses the scalar
  // fields above. Otherwise the size must equal n_sensors.
  std::vector<ClockParams> sensor_clocks;

  /// Throws std::invalid_argument naming the offending flag.
  void validate() const;

  ClockParams sensor_clock(std::size_t index) const;
  double skew() const { return 1.0 + skew_ppm * 1e-6; }
};

/// Radio propagation at vacuum light speed.
double propagation_delay(double distance_m);

/// Exactly n Poisson arrival times in [0, duration): i.i.d. uniforms, sorted.
std::vector<SimTime> gen_measurement_times(std::size_t n, double duration,
                                           RandomStream& stream);

struct RunResult {
  std::vector<MeasurementRecord> records;  // sorted by measurement_id
  NodeCounters counters;
  std::vector<CfrTracePoint> cfr_trace;    // all sensors, in event order
  std::uint64_t beacons_sent = 0;
  std::uint64_t events_processed = 0;
};

/// Executes one scenario. A pure function of the config.
RunResult run(const SimConfig& config);

}  // namespace wsnsync
