#include "wsnsync/metrics.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wsnsync {

MeasurementRecord make_record(const MeasurementEstimate& estimate,
                              double true_ref_time, double r_hat,
                              std::uint64_t cfr_samples) {
  MeasurementRecord r;
  r.measurement_id = estimate.measurement_id;
  r.sensor_id = estimate.sensor_id;
  r.true_ref_time = true_ref_time;
  r.estimated_head_time = estimate.head_time;
  r.error = estimate.head_time - true_ref_time;
  r.r_hat_at_estimate = r_hat;
  r.cfr_samples = cfr_samples;
  r.sample = estimate.sample;
  r.offset_delay = estimate.offset_delay;
  return r;
}

MessageCounters NodeCounters::sensor_total() const {
  MessageCounters total;
  for (const auto& c : sensors) {
    total.tx += c.tx;
    total.rx += c.rx;
  }
  return total;
}

ErrorStats compute_error_stats(std::span<const MeasurementRecord> records,
                               double warmup_s) {
  ErrorStats stats;
  double sum = 0.0;
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  double max_abs = 0.0;
  for (const auto& r : records) {
    if (r.true_ref_time < warmup_s) continue;
    ++stats.count;
    sum += r.error;
    sum_abs += std::abs(r.error);
    sum_sq += r.error * r.error;
    max_abs = std::max(max_abs, std::abs(r.error));
  }
  if (stats.count == 0) return stats;
  const auto n = static_cast<double>(stats.count);
  stats.mean_error = sum / n;
  stats.mean_abs_error = sum_abs / n;
  stats.rmse = std::sqrt(sum_sq / n);
  stats.max_abs_error = max_abs;
  return stats;
}

SummaryStats compute_summary(std::span<const MeasurementRecord> records,
                             double warmup_s, const NodeCounters& counters) {
  SummaryStats s;
  s.errors = compute_error_stats(records, warmup_s);
  const auto sensors = counters.sensor_total();
  s.sensor_tx = sensors.tx;
  s.sensor_rx = sensors.rx;
  s.head_tx = counters.head.tx;
  s.head_rx = counters.head.rx;
  return s;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

void write_records_csv(std::span<const MeasurementRecord> records,
                       std::ostream& out) {
  std::vector<const MeasurementRecord*> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](auto* a, auto* b) {
    return a->measurement_id < b->measurement_id;
  });

  out << "measurement_id,true_ref_time_s,estimated_head_time_s,error_s,r_hat\n";
  for (const auto* r : rows) {
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r->measurement_id,
               r->true_ref_time, r->estimated_head_time, r->error,
               r->r_hat_at_estimate);
  }
}

void write_records_csv(std::span<const MeasurementRecord> records,
                       const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_records_csv(records, out);
  finish(out, path);
}

void write_cfr_trace_csv(std::span<const CfrTracePoint> trace,
                         std::ostream& out) {
  out << "beacon_index,ref_time_s,r_hat\n";
  for (const auto& p : trace) {
    fmt::print(out, "{},{:.17g},{:.17g}\n", p.beacon_index, p.ref_time,
               p.r_hat);
  }
}

void write_cfr_trace_csv(std::span<const CfrTracePoint> trace,
                         const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_cfr_trace_csv(trace, out);
  finish(out, path);
}

}  // namespace wsnsync
