#include "wsnsync/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "wsnsync/event_queue.hpp"
#include "wsnsync/protocol.hpp"

namespace wsnsync {

namespace {

[[noreturn]] void reject(const std::string& flag, const std::string& what) {
  throw std::invalid_argument("--" + flag + " " + what);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SimConfig::validate() const {
  if (!finite_pos(duration)) reject("duration", "must be > 0");
  if (!finite_pos(beacon_interval)) reject("beacon-interval", "must be > 0");
  if (!finite_nonneg(distance_m)) reject("distance", "must be >= 0");
  if (!std::isfinite(skew_ppm) || !(skew() > 0.0)) {
    reject("skew-ppm", "must give a positive frequency ratio (> -1e6 ppm)");
  }
  if (!std::isfinite(offset_s)) reject("offset", "must be finite");
  if (!finite_nonneg(noise_sigma)) reject("noise-std", "must be >= 0");
  if (!finite_nonneg(warmup_s)) reject("warmup", "must be >= 0");
  if (n_sensors < 1) reject("sensors", "must be >= 1");
  if (!sensor_clocks.empty() && sensor_clocks.size() != n_sensors) {
    reject("sensors", "does not match the number of per-sensor clocks");
  }
  for (const auto& c : sensor_clocks) AffineClock{c};
}

ClockParams SimConfig::sensor_clock(std::size_t index) const {
  if (!sensor_clocks.empty()) return sensor_clocks.at(index);
  return ClockParams{offset_s, skew(), noise_sigma};
}

double propagation_delay(double distance_m) {
  if (!(distance_m >= 0.0)) {
    throw std::invalid_argument("distance must be >= 0");
  }
  return distance_m / kSpeedOfLight;
}

std::vector<SimTime> gen_measurement_times(std::size_t n, double duration,
                                           RandomStream& stream) {
  std::uniform_real_distribution<double> uniform(0.0, duration);
  std::vector<SimTime> times(n);
  for (auto& t : times) {
    t = uniform(stream);
    if (t >= duration) t = std::nextafter(duration, 0.0);
  }
  std::sort(times.begin(), times.end());
  return times;
}

namespace {

struct BeaconSend {
  std::uint64_t index;
};
struct BeaconArrive {
  std::size_t sensor;
  Beacon beacon;
};
struct MeasurementOccur {
  std::size_t sensor;
  std::uint64_t measurement_id;
};
struct ReportArrive {
  Report report;
};
struct SyncStart {
  std::size_t sensor;
  std::uint64_t index;
};
struct SyncRequestArrive {
  SyncRequest request;
};
struct SyncResponseArrive {
  SyncResponse response;
};

using EventPayload =
    std::variant<BeaconSend, BeaconArrive, MeasurementOccur, ReportArrive,
                 SyncStart, SyncRequestArrive, SyncResponseArrive>;

struct PendingMeasurement {
  SimTime true_time = 0.0;
  double r_hat = 1.0;
  std::uint64_t cfr_samples = 0;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : config_(config),
        delay_(propagation_delay(config.distance_m)),
        head_noise_(make_substream(config.seed, StreamPurpose::kHeadNoise)) {
    const bool scfr =
        config.scfr_enabled && config.mode == ProtocolMode::kProposed;
    for (std::size_t i = 0; i < config.n_sensors; ++i) {
      const auto index = static_cast<std::uint32_t>(i);
      sensors_.emplace_back(index, AffineClock(config.sensor_clock(i)), scfr);
      sensor_noise_.push_back(
          make_substream(config.seed, StreamPurpose::kSensorNoise, index));
    }
    pending_.resize(config.n_sensors * config.n_measurements);
  }

  RunResult run() {
    schedule_measurements();
    if (config_.mode == ProtocolMode::kProposed) {
      queue_.push(0.0, BeaconSend{0});
    } else {
      for (std::size_t i = 0; i < sensors_.size(); ++i) {
        queue_.push(0.0, SyncStart{i, 0});
      }
    }

    while (!queue_.empty()) {
      auto ev = queue_.pop();
      ++result_.events_processed;
      std::visit([&](auto& payload) { handle(ev.time, payload); },
                 ev.payload);
    }

    std::sort(result_.records.begin(), result_.records.end(),
              [](const auto& a, const auto& b) {
                return a.measurement_id < b.measurement_id;
              });
    result_.counters.head = head_.counters();
    result_.counters.skipped_reports = head_.skipped_reports();
    for (const auto& s : sensors_) {
      result_.counters.sensors.push_back(s.counters());
      result_.counters.ignored_beacons += s.ignored_beacons();
    }
    return std::move(result_);
  }

 private:
  void schedule_measurements() {
    const auto n = config_.n_measurements;
    for (std::size_t s = 0; s < sensors_.size(); ++s) {
      auto stream = make_substream(config_.seed,
                                   StreamPurpose::kMeasurementTimes,
                                   static_cast<std::uint32_t>(s));
      const auto times = gen_measurement_times(n, config_.duration, stream);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t id = s * n + i;
        pending_[id].true_time = times[i];
        queue_.push(times[i], MeasurementOccur{s, id});
      }
    }
  }

  // k-th period start, or nothing once it falls outside the window.
  std::optional<SimTime> period_start(std::uint64_t k) const {
    const double t = static_cast<double>(k) * config_.beacon_interval;
    if (t < config_.duration) return t;
    return std::nullopt;
  }

  void handle(SimTime now, const BeaconSend& ev) {
    const Beacon beacon = head_.send_beacon(now, head_noise_);
    ++result_.beacons_sent;
    for (std::size_t s = 0; s < sensors_.size(); ++s) {
      queue_.push(now + delay_, BeaconArrive{s, beacon});
    }
    if (auto next = period_start(ev.index + 1)) {
      queue_.push(*next, BeaconSend{ev.index + 1});
    }
  }

  void handle(SimTime now, const BeaconArrive& ev) {
    auto& sensor = sensors_[ev.sensor];
    if (sensor.on_beacon(ev.beacon, now, sensor_noise_[ev.sensor])) {
      result_.cfr_trace.push_back(CfrTracePoint{
          sensor.id(), ev.beacon.seq, now, sensor.recovered_clock().ratio()});
    }
  }

  void handle(SimTime now, const MeasurementOccur& ev) {
    auto& sensor = sensors_[ev.sensor];
    auto& pending = pending_[ev.measurement_id];
    pending.r_hat = sensor.recovered_clock().ratio();
    pending.cfr_samples = sensor.recovered_clock().estimator().sample_count();
    Report report =
        sensor.on_measurement(now, ev.measurement_id, sensor_noise_[ev.sensor]);
    queue_.push(now + delay_, ReportArrive{std::move(report)});
  }

  void handle(SimTime now, const ReportArrive& ev) {
    auto estimate = head_.on_report(ev.report, now, head_noise_);
    if (!estimate) return;
    const auto& pending = pending_[estimate->measurement_id];
    result_.records.push_back(make_record(*estimate, pending.true_time,
                                          pending.r_hat, pending.cfr_samples));
  }

  void handle(SimTime now, const SyncStart& ev) {
    auto request = sensors_[ev.sensor].start_sync(now, sensor_noise_[ev.sensor]);
    queue_.push(now + delay_, SyncRequestArrive{request});
    if (auto next = period_start(ev.index + 1)) {
      queue_.push(*next, SyncStart{ev.sensor, ev.index + 1});
    }
  }

  void handle(SimTime now, const SyncRequestArrive& ev) {
    auto response = head_.on_sync_request(ev.request, now, head_noise_);
    queue_.push(now + delay_, SyncResponseArrive{response});
  }

  void handle(SimTime now, const SyncResponseArrive& ev) {
    const auto s = static_cast<std::size_t>(ev.response.sensor_id);
    sensors_[s].finish_sync(ev.response, now, sensor_noise_[s]);
  }

  const SimConfig& config_;
  double delay_;
  EventQueue<EventPayload> queue_;
  HeadNode head_;
  std::vector<SensorNode> sensors_;
  RandomStream head_noise_;
  std::vector<RandomStream> sensor_noise_;
  std::vector<PendingMeasurement> pending_;
  RunResult result_;
};

}  // namespace

RunResult run(const SimConfig& config) {
  config.validate();
  return Simulation(config).run();
}

}  // namespace wsnsync
