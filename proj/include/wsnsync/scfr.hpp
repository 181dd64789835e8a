#pragma once

#include <cstdint>

namespace wsnsync {

/**
 * Cumulative ratio estimator of the local/source frequency ratio.
 *
 * The estimate is (latest_local - anchor_local) / (latest_src - anchor_src),
 * where the anchor is the first accepted (source, local) timestamp pair.
 * Intermediate pairs are not retained. Before two samples the estimate is 1.
 */
class CumulativeRatioEstimator {
 public:
  /// Returns false (and leaves the state untouched) if src_ts does not
  /// advance past the latest accepted source timestamp.
  [[nodiscard]] bool update(double src_ts, double local_ts);

  double ratio() const;

  std::uint64_t sample_count() const { return count_; }
  double anchor_src() const { return anchor_src_; }
  double anchor_local() const { return anchor_local_; }
  double latest_src() const { return latest_src_; }
  double latest_local() const { return latest_local_; }

 private:
  double anchor_src_ = 0.0;
  double anchor_local_ = 0.0;
  double latest_src_ = 0.0;
  double latest_local_ = 0.0;
  std::uint64_t count_ = 0;
};

/**
 * Local clock rescaled to run at the recovered source frequency. It is
 * syntonized, not synchronized: read(anchor_local) == anchor_local.
 */
class RecoveredClock {
 public:
  [[nodiscard]] bool observe(double src_ts, double local_ts) {
    return estimator_.update(src_ts, local_ts);
  }

  /// anchor + (local_ts - anchor) / r_hat, evaluated with the current estimate.
  double read(double local_ts) const;

  double ratio() const { return estimator_.ratio(); }
  const CumulativeRatioEstimator& estimator() const { return estimator_; }

 private:
  CumulativeRatioEstimator estimator_;
};

}  // namespace wsnsync
