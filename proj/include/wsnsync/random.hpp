#pragma once

#include <cstdint>
#include <random>

namespace wsnsync {

using RandomStream = std::mt19937_64;

/// What a substream is used for. Keeps draws for one purpose independent of
/// how many draws another purpose consumed.
enum class StreamPurpose : std::uint32_t {
  kMeasurementTimes = 1,
  kHeadNoise = 2,
  kSensorNoise = 3,
};

/// Deterministically derives an independent generator from the master seed.
RandomStream make_substream(std::uint64_t master_seed, StreamPurpose purpose,
                            std::uint32_t index = 0);

}  // namespace wsnsync
