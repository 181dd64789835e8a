#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "wsnsync/engine.hpp"

using namespace wsnsync;

namespace {

SimConfig noiseless(double skew_ppm, bool scfr, double beacon = 0.1) {
  SimConfig c;
  c.noise_sigma = 0.0;
  c.skew_ppm = skew_ppm;
  c.scfr_enabled = scfr;
  c.beacon_interval = beacon;
  c.seed = 17;
  return c;
}

std::string records_csv(const RunResult& r) {
  std::ostringstream out;
  write_records_csv(r.records, out);
  return out.str();
}

std::string trace_csv(const RunResult& r) {
  std::ostringstream out;
  write_cfr_trace_csv(r.cfr_trace, out);
  return out.str();
}

}  // namespace

TEST_CASE("propagation delay") {
  CHECK(propagation_delay(0.0) == 0.0);
  CHECK(propagation_delay(100.0) == 3.3356409519815204e-7);
  CHECK(propagation_delay(299792458.0) == 1.0);
  CHECK_THROWS_AS(propagation_delay(-1.0), std::invalid_argument);
}

TEST_CASE("measurement times") {
  RandomStream rng(3);
  CHECK(gen_measurement_times(0, 120.0, rng).empty());
  const auto three = gen_measurement_times(3, 120.0, rng);
  REQUIRE(three.size() == 3);
  CHECK(std::is_sorted(three.begin(), three.end()));
  for (double t : three) CHECK((t >= 0.0 && t < 120.0));
}

TEST_CASE("measurement times follow the uniform order statistics") {
  RandomStream rng(8);
  const std::size_t n = 10000;
  const auto times = gen_measurement_times(n, 120.0, rng);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = times[i] / 120.0;
    d = std::max(d, std::max(cdf - double(i) / n, double(i + 1) / n - cdf));
  }
  // Kolmogorov-Smirnov 95% critical value.
  CHECK(d <= 1.358 / std::sqrt(double(n)));
}

TEST_CASE("config validation names the flag") {
  SimConfig c;
  c.beacon_interval = 0.0;
  try {
    c.validate();
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("beacon-interval") != std::string::npos);
  }
  SimConfig d;
  d.distance_m = -1.0;
  CHECK_THROWS_AS(run(d), std::invalid_argument);
  SimConfig s;
  s.n_sensors = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  SimConfig n;
  n.noise_sigma = -1.0;
  CHECK_THROWS_AS(n.validate(), std::invalid_argument);
}

TEST_CASE("perfect clocks give exact estimates") {
  const auto r = run(noiseless(0.0, true));
  REQUIRE(!r.records.empty());
  for (const auto& rec : r.records) CHECK(std::abs(rec.error) <= 1e-12);
}

TEST_CASE("zero skew recovers the true offset and delay") {
  const auto r = run(noiseless(0.0, false));
  const double d = propagation_delay(100.0);
  for (const auto& rec : r.records) {
    REQUIRE(rec.offset_delay);
    CHECK(rec.offset_delay->theta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rec.offset_delay->delay - d) <= 1e-12);
  }
}

TEST_CASE("noiseless SCFR removes skew error after two beacons") {
  const auto r = run(noiseless(100.0, true));
  std::size_t checked = 0;
  for (const auto& rec : r.records) {
    if (rec.cfr_samples < 2) continue;
    ++checked;
    CHECK(std::abs(rec.error) <= 1e-9);
  }
  CHECK(checked >= 95);
}

TEST_CASE("error without SCFR follows the affine model") {
  const SimConfig c = noiseless(100.0, false);
  const auto r = run(c);
  const double d = propagation_delay(c.distance_m);
  const double excess = c.skew() - 1.0;
  for (const auto& rec : r.records) {
    REQUIRE(rec.sample);
    const double t1_ref = rec.sample->t1;  // head is the reference clock
    const double predicted = excess * (rec.true_ref_time - t1_ref - d) / 2.0;
    CHECK(std::abs(rec.error - predicted) <= 1e-12);
  }
}

TEST_CASE("beacon and message accounting") {
  for (double b : {0.1, 0.01}) {
    SimConfig c;
    c.beacon_interval = b;
    const auto r = run(c);
    const auto expected = static_cast<std::uint64_t>(std::ceil(c.duration / b));
    CHECK(r.beacons_sent == expected);
    CHECK(r.counters.head.tx == expected);
    CHECK(r.counters.sensors.at(0).rx == expected);
    CHECK(r.counters.sensors.at(0).tx == 100);
    CHECK(r.counters.head.rx == 100);
    CHECK(r.records.size() + r.counters.skipped_reports == 100);
  }
}

TEST_CASE("reports before the first beacon arrival are skipped") {
  SimConfig c;
  c.distance_m = 299792458.0 * 5.0;  // first beacon lands at t = 5 s
  c.n_measurements = 400;
  const auto r = run(c);
  std::size_t early = 0;
  RandomStream times_rng =
      make_substream(c.seed, StreamPurpose::kMeasurementTimes, 0);
  for (double t : gen_measurement_times(c.n_measurements, c.duration,
                                        times_rng)) {
    if (t < 5.0) ++early;
  }
  CHECK(early > 0);
  CHECK(r.counters.skipped_reports == early);
  CHECK(r.records.size() == c.n_measurements - early);
}

TEST_CASE("classic mode message counts") {
  SimConfig c;
  c.mode = ProtocolMode::kClassic;
  const auto r = run(c);
  const auto sensor_tx = r.counters.sensors.at(0).tx;
  CHECK(sensor_tx >= 1299);
  CHECK(sensor_tx <= 1301);
  CHECK(r.beacons_sent == 0);
  CHECK(r.counters.head.tx + 100 == sensor_tx);
  CHECK(r.records.size() == 100);
}

TEST_CASE("classic mode estimates stay within the skew drift bound") {
  SimConfig c = noiseless(100.0, false);
  c.mode = ProtocolMode::kClassic;
  const auto r = run(c);
  for (const auto& rec : r.records) {
    // Offset estimated at most one period (plus round trip) earlier.
    CHECK(std::abs(rec.error) <= 1e-4 * (0.1 + 1e-6) * 1.0001);
  }
}

TEST_CASE("same seed, same outputs") {
  SimConfig c;
  c.seed = 42;
  const auto a = run(c);
  const auto b = run(c);
  CHECK(records_csv(a) == records_csv(b));
  CHECK(trace_csv(a) == trace_csv(b));
  c.seed = 43;
  CHECK(records_csv(run(c)) != records_csv(a));
}

TEST_CASE("toggling SCFR keeps events and noise draws paired") {
  SimConfig on;
  on.seed = 5;
  SimConfig off = on;
  off.scfr_enabled = false;
  const auto a = run(on);
  const auto b = run(off);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.events_processed == b.events_processed);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].true_ref_time == b.records[i].true_ref_time);
    CHECK(a.records[i].sample->t1 == b.records[i].sample->t1);
    CHECK(a.records[i].sample->t4 == b.records[i].sample->t4);
  }
  REQUIRE(a.cfr_trace.size() == b.cfr_trace.size());
  for (std::size_t i = 0; i < a.cfr_trace.size(); ++i) {
    CHECK(a.cfr_trace[i].r_hat == b.cfr_trace[i].r_hat);
  }
}

TEST_CASE("trace starts at the single-sample default") {
  const auto r = run(noiseless(100.0, true));
  REQUIRE(r.cfr_trace.size() == 1200);
  CHECK(r.cfr_trace.front().beacon_index == 0);
  CHECK(r.cfr_trace.front().r_hat == 1.0);
  for (std::size_t i = 1; i < r.cfr_trace.size(); ++i) {
    CHECK(r.cfr_trace[i].r_hat == doctest::Approx(1.0001).epsilon(1e-12));
  }
}

TEST_CASE("multiple sensors with their own clocks") {
  SimConfig c = noiseless(0.0, true);
  c.n_sensors = 3;
  c.n_measurements = 50;
  c.sensor_clocks = {{1.0, 1.0001, 0.0}, {-2.0, 0.99995, 0.0},
                     {0.25, 1.0, 0.0}};
  const auto r = run(c);
  REQUIRE(r.counters.sensors.size() == 3);
  CHECK(r.counters.head.tx == 1200);
  for (const auto& s : r.counters.sensors) {
    CHECK(s.tx == 50);
    CHECK(s.rx == 1200);
  }
  CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                       [](const auto& a, const auto& b) {
                         return a.measurement_id < b.measurement_id;
                       }));
  for (const auto& rec : r.records) {
    CHECK(rec.sensor_id == rec.measurement_id / 50);
    if (rec.cfr_samples >= 2) CHECK(std::abs(rec.error) <= 1e-9);
  }

  c.sensor_clocks.pop_back();
  CHECK_THROWS_AS(run(c), std::invalid_argument);
}
