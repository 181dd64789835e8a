#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsnsync/timebase.hpp"

namespace wsnsync {

template <class Payload>
struct ScheduledEvent {
  SimTime time = 0.0;
  std::uint64_t seq = 0;  // assignment order, breaks time ties
  Payload payload;
};

/// Min-queue on (time, seq). Scheduling before the last popped time throws.
template <class Payload>
class EventQueue {
 public:
  void push(SimTime time, Payload payload) {
    if (!(time >= now_)) {
      throw std::logic_error("event scheduled in the past at t=" +
                             std::to_string(time));
    }
    heap_.push(ScheduledEvent<Payload>{time, next_seq_++, std::move(payload)});
  }

  ScheduledEvent<Payload> pop() {
    ScheduledEvent<Payload> ev = heap_.top();
    heap_.pop();
    now_ = ev.time;
    return ev;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  SimTime now() const { return now_; }

 private:
  struct Later {
    bool operator()(const ScheduledEvent<Payload>& a,
                    const ScheduledEvent<Payload>& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<ScheduledEvent<Payload>,
                      std::vector<ScheduledEvent<Payload>>, Later>
      heap_;
  std::uint64_t next_seq_ = 0;
  SimTime now_ = 0.0;
};

}  // namespace wsnsync
