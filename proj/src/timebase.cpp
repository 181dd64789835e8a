#include "wsnsync/timebase.hpp"

#include <cmath>
#include <stdexcept>

namespace wsnsync {

AffineClock::AffineClock(ClockParams params) : params_(params) {
  if (!(params_.skew > 0.0) || !std::isfinite(params_.skew)) {
    throw std::invalid_argument("clock skew must be a positive finite ratio");
  }
  if (!(params_.noise_sigma >= 0.0) || !std::isfinite(params_.noise_sigma)) {
    throw std::invalid_argument("clock noise sigma must be >= 0");
  }
  if (!std::isfinite(params_.offset_s)) {
    throw std::invalid_argument("clock offset must be finite");
  }
}

double AffineClock::read(SimTime t_ref, RandomStream& noise) const {
  const double ideal = read_noiseless(t_ref);
  if (params_.noise_sigma == 0.0) return ideal;
  std::normal_distribution<double> eps(0.0, params_.noise_sigma);
  return ideal + eps(noise);
}

}  // namespace wsnsync
