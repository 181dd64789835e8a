#include "wsnsync/random.hpp"

namespace wsnsync {

RandomStream make_substream(std::uint64_t master_seed, StreamPurpose purpose,
                            std::uint32_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(purpose), index};
  return RandomStream(seq);
}

}  // namespace wsnsync
