#include "wsnsync/protocol.hpp"

namespace wsnsync {

OffsetDelayEstimate estimate_offset_delay(const TwoWaySample& s) {
  const double forward = s.t2 - s.t1;
  const double backward = s.t4 - s.t3;
  return {(forward - backward) / 2.0, (forward + backward) / 2.0};
}

double estimate_measurement_time(const TwoWaySample& s) {
  return s.t3 - estimate_offset_delay(s).theta;
}

SensorNode::SensorNode(SensorId id, AffineClock clock, bool scfr_enabled)
    : id_(id), clock_(clock), scfr_enabled_(scfr_enabled) {}

bool SensorNode::on_beacon(const Beacon& beacon, SimTime t_ref,
                           RandomStream& noise) {
  if (last_beacon_ && beacon.seq <= last_beacon_->seq) {
    ++ignored_beacons_;
    return false;
  }
  const double local = clock_.read(t_ref, noise);
  // The estimator always sees the physical clock.
  if (!recovered_.observe(beacon.t1, local)) {
    ++ignored_beacons_;
    return false;
  }
  last_beacon_ = BeaconEcho{beacon.seq, beacon.t1, timestamp(local)};
  ++counters_.rx;
  return true;
}

Report SensorNode::on_measurement(SimTime t_ref, std::uint64_t measurement_id,
                                  RandomStream& noise) {
  Report report;
  report.sensor_id = id_;
  report.echo = last_beacon_;
  report.t3 = timestamp(clock_.read(t_ref, noise));
  report.measurement_id = measurement_id;
  if (classic_estimate_) {
    report.sensor_synced_t3 = report.t3 + classic_estimate_->theta;
  }
  ++counters_.tx;
  return report;
}

SyncRequest SensorNode::start_sync(SimTime t_ref, RandomStream& noise) {
  ++counters_.tx;
  return SyncRequest{id_, clock_.read(t_ref, noise)};
}

OffsetDelayEstimate SensorNode::finish_sync(const SyncResponse& response,
                                            SimTime t_ref,
                                            RandomStream& noise) {
  ++counters_.rx;
  const double t4 = clock_.read(t_ref, noise);
  const auto estimate = estimate_offset_delay(
      TwoWaySample{response.t1, response.t2, response.t3, t4});
  classic_estimate_ = estimate;
  return estimate;
}

void OffsetTable::upsert(SensorId id, const OffsetDelayEstimate& estimate,
                         double head_time) {
  entries_[id] = OffsetEntry{estimate, head_time};
}

const OffsetEntry* OffsetTable::find(SensorId id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<double> OffsetTable::schedule_for_sensor(SensorId id,
                                                       double head_time) const {
  const OffsetEntry* entry = find(id);
  if (entry == nullptr) return std::nullopt;
  return head_time + entry->estimate.theta;
}

HeadNode::HeadNode(AffineClock clock) : clock_(clock) {}

Beacon HeadNode::send_beacon(SimTime t_ref, RandomStream& noise) {
  ++counters_.tx;
  return Beacon{next_seq_++, clock_.read(t_ref, noise)};
}

std::optional<MeasurementEstimate> HeadNode::on_report(const Report& report,
                                                       SimTime t_ref,
                                                       RandomStream& noise) {
  ++counters_.rx;
  const double t4 = clock_.read(t_ref, noise);

  MeasurementEstimate out;
  out.sensor_id = report.sensor_id;
  out.measurement_id = report.measurement_id;

  if (report.echo) {
    const TwoWaySample sample{report.echo->t1, report.echo->t2, report.t3, t4};
    const auto od = estimate_offset_delay(sample);
    table_.upsert(report.sensor_id, od, t4);
    out.head_time = report.t3 - od.theta;
    out.sample = sample;
    out.offset_delay = od;
    return out;
  }
  if (report.sensor_synced_t3) {
    out.head_time = *report.sensor_synced_t3;
    return out;
  }
  ++skipped_reports_;
  return std::nullopt;
}

SyncResponse HeadNode::on_sync_request(const SyncRequest& request,
                                       SimTime t_ref, RandomStream& noise) {
  ++counters_.rx;
  const double t2 = clock_.read(t_ref, noise);
  const double t3 = clock_.read(t_ref, noise);
  ++counters_.tx;
  return SyncResponse{request.sensor_id, request.t1, t2, t3};
}

OffsetDelayEstimate classic_exchange_round(SensorNode& sensor, HeadNode& head,
                                           SimTime t_ref, double delay,
                                           RandomStream& sensor_noise,
                                           RandomStream& head_noise) {
  const auto request = sensor.start_sync(t_ref, sensor_noise);
  const auto response =
      head.on_sync_request(request, t_ref + delay, head_noise);
  return sensor.finish_sync(response, t_ref + 2.0 * delay, sensor_noise);
}

}  // namespace wsnsync
