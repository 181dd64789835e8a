#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wsnsync/protocol.hpp"

namespace wsnsync {

/// Ground truth vs. head estimate for one measurement.
struct MeasurementRecord {
  std::uint64_t measurement_id = 0;
  SensorId sensor_id = 0;
  double true_ref_time = 0.0;
  double estimated_head_time = 0.0;
  double error = 0.0;  // estimated_head_time - true_ref_time
  double r_hat_at_estimate = 1.0;
  // Estimator samples at the sensor when the measurement was taken.
  std::uint64_t cfr_samples = 0;
  std::optional<TwoWaySample> sample;
  std::optional<OffsetDelayEstimate> offset_delay;
};

MeasurementRecord make_record(const MeasurementEstimate& estimate,
                              double true_ref_time, double r_hat,
                              std::uint64_t cfr_samples);

struct CfrTracePoint {
  SensorId sensor_id = 0;
  std::uint64_t beacon_index = 0;
  double ref_time = 0.0;  // beacon arrival, reference time
  double r_hat = 1.0;
};

struct NodeCounters {
  MessageCounters head;
  std::vector<MessageCounters> sensors;
  std::uint64_t skipped_reports = 0;
  std::uint64_t ignored_beacons = 0;

  MessageCounters sensor_total() const;
};

/// Error statistics over post-warm-up records. Every statistic is empty when
/// count is 0.
struct ErrorStats {
  std::size_t count = 0;
  std::optional<double> mean_error;
  std::optional<double> mean_abs_error;
  std::optional<double> rmse;
  std::optional<double> max_abs_error;
};

struct SummaryStats {
  ErrorStats errors;
  std::uint64_t sensor_tx = 0;
  std::uint64_t sensor_rx = 0;
  std::uint64_t head_tx = 0;
  std::uint64_t head_rx = 0;
};

/// Drops records with true_ref_time < warmup_s and summarizes the rest.
ErrorStats compute_error_stats(std::span<const MeasurementRecord> records,
                               double warmup_s);

SummaryStats compute_summary(std::span<const MeasurementRecord> records,
                             double warmup_s,
                             const NodeCounters& counters = {});

// CSV output. Rows are ordered by measurement_id (records) or as given
// (trace). The path overloads throw std::runtime_error naming the path.
void write_records_csv(std::span<const MeasurementRecord> records,
                       std::ostream& out);
void write_records_csv(std::span<const MeasurementRecord> records,
                       const std::filesystem::path& path);
void write_cfr_trace_csv(std::span<const CfrTracePoint> trace,
                         std::ostream& out);
void write_cfr_trace_csv(std::span<const CfrTracePoint> trace,
                         const std::filesystem::path& path);

}  // namespace wsnsync
