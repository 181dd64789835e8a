#pragma once

#include "wsnsync/random.hpp"

namespace wsnsync {

/// Reference (true) time in seconds. The head clock is the reference.
using SimTime = double;

struct ClockParams {
  double offset_s = 0.0;     // offset at reference time 0
  double skew = 1.0;         // frequency ratio of this clock to the reference
  double noise_sigma = 0.0;  // std. dev. of timestamping noise, seconds
};

/**
 * A node's local clock, C(t) = offset + skew * t, read with i.i.d. Gaussian
 * timestamping noise.
 */
class AffineClock {
 public:
  /// Throws std::invalid_argument unless skew > 0 and noise_sigma >= 0.
  explicit AffineClock(ClockParams params);

  /// The ideal clock: zero offset, unit skew, no noise.
  static AffineClock reference() { return AffineClock(ClockParams{}); }

  double read_noiseless(SimTime t_ref) const {
    return params_.offset_s + params_.skew * t_ref;
  }

  /// Noisy timestamp. Consumes no randomness when noise_sigma == 0.
  double read(SimTime t_ref, RandomStream& noise) const;

  /// Instantaneous offset relative to reference time.
  double true_offset_at(SimTime t_ref) const {
    return params_.offset_s + (params_.skew - 1.0) * t_ref;
  }

  const ClockParams& params() const { return params_; }

 private:
  ClockParams params_;
};

}  // namespace wsnsync
