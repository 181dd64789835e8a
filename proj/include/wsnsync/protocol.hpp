#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "wsnsync/random.hpp"
#include "wsnsync/scfr.hpp"
#include "wsnsync/timebase.hpp"

namespace wsnsync {

using SensorId = std::uint32_t;

/// Periodic head broadcast carrying its send timestamp.
struct Beacon {
  std::uint64_t seq = 0;
  double t1 = 0.0;  // head clock
};

/// Context of the most recent beacon, echoed back inside a report.
struct BeaconEcho {
  std::uint64_t seq = 0;
  double t1 = 0.0;  // head clock
  double t2 = 0.0;  // sensor clock (recovered if SCFR is on)
};

/// Ordinary data report from a sensor. In the reverse exchange it doubles as
/// the response to the most recent beacon.
struct Report {
  SensorId sensor_id = 0;
  std::optional<BeaconEcho> echo;  // absent until a beacon has been received
  double t3 = 0.0;                 // sensor clock at measurement/transmission
  std::uint64_t measurement_id = 0;
  // Classic mode only: t3 already mapped to the head clock by the sensor.
  std::optional<double> sensor_synced_t3;
};

struct TwoWaySample {
  double t1 = 0.0;  // head
  double t2 = 0.0;  // sensor
  double t3 = 0.0;  // sensor
  double t4 = 0.0;  // head
};

struct OffsetDelayEstimate {
  double theta = 0.0;  // sensor clock minus head clock
  double delay = 0.0;  // one-way propagation delay
};

/// theta = ((t2-t1) - (t4-t3)) / 2, delay = ((t2-t1) + (t4-t3)) / 2.
/// A negative delay is returned as is.
OffsetDelayEstimate estimate_offset_delay(const TwoWaySample& s);

/// Head-clock estimate of t3: t3 - theta = (t1 + t3 + t4 - t2) / 2.
double estimate_measurement_time(const TwoWaySample& s);

struct MessageCounters {
  std::uint64_t tx = 0;
  std::uint64_t rx = 0;
};

// Classic (TPSN-style) two-way round, initiated by the sensor.
struct SyncRequest {
  SensorId sensor_id = 0;
  double t1 = 0.0;  // sensor clock
};

struct SyncResponse {
  SensorId sensor_id = 0;
  double t1 = 0.0;  // sensor clock, echoed
  double t2 = 0.0;  // head clock, request receipt
  double t3 = 0.0;  // head clock, response send
};

class SensorNode {
 public:
  SensorNode(SensorId id, AffineClock clock, bool scfr_enabled);

  /// Handles a beacon delivered at reference time t_ref. Returns false if the
  /// beacon was ignored as a duplicate or out of order.
  bool on_beacon(const Beacon& beacon, SimTime t_ref, RandomStream& noise);

  /// Takes a measurement at t_ref and emits the report carrying it.
  Report on_measurement(SimTime t_ref, std::uint64_t measurement_id,
                        RandomStream& noise);

  SyncRequest start_sync(SimTime t_ref, RandomStream& noise);
  /// Completes a classic round; the returned theta is the head clock minus
  /// the sensor clock, i.e. mirrored relative to the reverse exchange.
  OffsetDelayEstimate finish_sync(const SyncResponse& response, SimTime t_ref,
                                  RandomStream& noise);

  SensorId id() const { return id_; }
  const AffineClock& clock() const { return clock_; }
  const RecoveredClock& recovered_clock() const { return recovered_; }
  bool scfr_enabled() const { return scfr_enabled_; }
  const std::optional<BeaconEcho>& last_beacon() const { return last_beacon_; }
  const std::optional<OffsetDelayEstimate>& classic_estimate() const {
    return classic_estimate_;
  }
  const MessageCounters& counters() const { return counters_; }
  std::uint64_t ignored_beacons() const { return ignored_beacons_; }

 private:
  double timestamp(double local) const {
    return scfr_enabled_ ? recovered_.read(local) : local;
  }

  SensorId id_;
  AffineClock clock_;
  RecoveredClock recovered_;
  bool scfr_enabled_;
  std::optional<BeaconEcho> last_beacon_;
  std::optional<OffsetDelayEstimate> classic_estimate_;
  MessageCounters counters_;
  std::uint64_t ignored_beacons_ = 0;
};

struct OffsetEntry {
  OffsetDelayEstimate estimate;
  double updated_at = 0.0;  // head clock
};

/// Latest per-sensor offset/delay estimate, kept at the head.
class OffsetTable {
 public:
  void upsert(SensorId id, const OffsetDelayEstimate& estimate,
              double head_time);
  const OffsetEntry* find(SensorId id) const;

  /// Sensor-clock time corresponding to a head-clock instant, for
  /// scheduling future operations at that sensor. Empty when the sensor has
  /// no synchronization information yet.
  std::optional<double> schedule_for_sensor(SensorId id,
                                            double head_time) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<SensorId, OffsetEntry>& entries() const { return entries_; }

 private:
  std::map<SensorId, OffsetEntry> entries_;
};

struct MeasurementEstimate {
  SensorId sensor_id = 0;
  std::uint64_t measurement_id = 0;
  double head_time = 0.0;
  // Present only for reverse-exchange estimates.
  std::optional<TwoWaySample> sample;
  std::optional<OffsetDelayEstimate> offset_delay;
};

class HeadNode {
 public:
  explicit HeadNode(AffineClock clock = AffineClock::reference());

  Beacon send_beacon(SimTime t_ref, RandomStream& noise);

  /// Timestamps the report on arrival (T4) and, if it echoes a beacon,
  /// updates the offset table and returns the measurement-time estimate.
  /// Reports without beacon context are counted as skipped.
  std::optional<MeasurementEstimate> on_report(const Report& report,
                                               SimTime t_ref,
                                               RandomStream& noise);

  /// Receives a classic request and answers immediately.
  SyncResponse on_sync_request(const SyncRequest& request, SimTime t_ref,
                               RandomStream& noise);

  const OffsetTable& offset_table() const { return table_; }
  const AffineClock& clock() const { return clock_; }
  const MessageCounters& counters() const { return counters_; }
  std::uint64_t skipped_reports() const { return skipped_reports_; }

 private:
  AffineClock clock_;
  OffsetTable table_;
  MessageCounters counters_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t skipped_reports_ = 0;
};

/// One complete classic round with zero processing delay at the head: request
/// sent at t_ref, answered at t_ref + delay, response received at
/// t_ref + 2 * delay. Returns the sensor-side estimate.
OffsetDelayEstimate classic_exchange_round(SensorNode& sensor, HeadNode& head,
                                           SimTime t_ref, double delay,
                                           RandomStream& sensor_noise,
                                           RandomStream& head_noise);

}  // namespace wsnsync
