#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>

#include "wsnsync/event_queue.hpp"

using namespace wsnsync;

TEST_CASE("pops in time order, ties in scheduling order") {
  EventQueue<std::string> q;
  q.push(2.0, "c");
  q.push(1.0, "a");
  q.push(2.0, "d");
  q.push(1.0, "b");
  std::string order;
  while (!q.empty()) order += q.pop().payload;
  CHECK(order == "abcd");
}

TEST_CASE("scheduling in the past throws") {
  EventQueue<int> q;
  q.push(5.0, 1);
  CHECK(q.pop().time == 5.0);
  CHECK(q.now() == 5.0);
  CHECK_THROWS_AS(q.push(4.0, 2), std::logic_error);
  q.push(5.0, 3);
  CHECK(q.pop().payload == 3);
}

TEST_CASE("property: random schedules pop in strictly increasing key order") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> slot(0, 20);
  EventQueue<int> q;
  for (int i = 0; i < 5000; ++i) q.push(slot(gen) * 0.5, i);
  double last_time = -1.0;
  std::uint64_t last_seq = 0;
  bool first = true;
  while (!q.empty()) {
    const auto ev = q.pop();
    if (!first) {
      CHECK((ev.time > last_time ||
             (ev.time == last_time && ev.seq > last_seq)));
    }
    first = false;
    last_time = ev.time;
    last_seq = ev.seq;
  }
}
