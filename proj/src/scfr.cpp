#include "wsnsync/scfr.hpp"

namespace wsnsync {

bool CumulativeRatioEstimator::update(double src_ts, double local_ts) {
  if (count_ == 0) {
    anchor_src_ = latest_src_ = src_ts;
    anchor_local_ = latest_local_ = local_ts;
    count_ = 1;
    return true;
  }
  if (!(src_ts > latest_src_)) return false;
  latest_src_ = src_ts;
  latest_local_ = local_ts;
  ++count_;
  return true;
}

double CumulativeRatioEstimator::ratio() const {
  if (count_ < 2) return 1.0;
  return (latest_local_ - anchor_local_) / (latest_src_ - anchor_src_);
}

double RecoveredClock::read(double local_ts) const {
  const double anchor = estimator_.anchor_local();
  return anchor + (local_ts - anchor) / estimator_.ratio();
}

}  // namespace wsnsync
