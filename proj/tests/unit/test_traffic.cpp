#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "slice/rng.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic.hpp"

using namespace slice;

TEST_CASE("csv rows split vehicles conservatively across the partition") {
  const ScenarioConfig cfg;
  const TrafficTrace trace =
      parse_trace_csv("hour,vehicles\n7,40\n", "inline", cfg);
  REQUIRE(trace.window_count() == 1);
  const TrafficWindow& w = trace.windows[0];
  CHECK(w.window_index == 0);
  CHECK(std::accumulate(w.vehicles_per_ap.begin(), w.vehicles_per_ap.end(), 0)
        == 40);
  for (int v : w.vehicles_per_ap) CHECK(v >= 0);
}

TEST_CASE("lambda equals vehicles times the per-vehicle rate") {
  const ScenarioConfig cfg;  // per_vehicle_rate_hz = 1.0
  const TrafficTrace trace =
      parse_trace_csv("hour,vehicles\n0,30\n", "inline", cfg);
  const TrafficWindow& w = trace.windows[0];
  double sum = 0.0;
  for (std::size_t i = 0; i < w.lambda_per_ap.size(); ++i) {
    CHECK(w.lambda_per_ap[i] ==
          w.vehicles_per_ap[i] * cfg.per_vehicle_rate_hz);
    sum += w.lambda_per_ap[i];
  }
  CHECK(sum == 30.0);

  ScenarioConfig half = cfg;
  half.per_vehicle_rate_hz = 0.5;
  const TrafficTrace t2 = parse_trace_csv("hour,vehicles\n0,30\n", "x", half);
  double sum2 = 0.0;
  for (double l : t2.windows[0].lambda_per_ap) sum2 += l;
  CHECK(sum2 == doctest::Approx(15.0));
}

TEST_CASE("trace parsing errors carry the origin and line number") {
  const ScenarioConfig cfg;
  CHECK_THROWS_WITH_AS(parse_trace_csv("", "empty.csv", cfg),
                       "empty.csv: no windows", std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_trace_csv("hour,vehicles\n", "h.csv", cfg),
                       "h.csv: no windows", std::runtime_error);
  CHECK_THROWS_AS(parse_trace_csv("nope\n0,1\n", "bad.csv", cfg),
                  std::runtime_error);
  try {
    parse_trace_csv("hour,vehicles\n0,5\nbogus\n", "t.csv", cfg);
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("t.csv:3") != std::string::npos);
  }
  try {
    parse_trace_csv("hour,vehicles\n0,5\n1,-2\n", "n.csv", cfg);
    FAIL("expected negative-count error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("n.csv:3") != std::string::npos);
    CHECK(msg.find("negative") != std::string::npos);
  }
  try {
    parse_trace_csv("hour,vehicles\n0,5.5\n", "f.csv", cfg);
    FAIL("expected malformed-row error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("f.csv:2") != std::string::npos);
  }
}

TEST_CASE("noise-free synthesis hits the profile extremes exactly") {
  const ScenarioConfig cfg;
  SeededStream stream(1, "trace");
  const TrafficTrace trace = synth_diurnal(24, 5, 60, 0.0, stream, cfg);
  REQUIRE(trace.window_count() == 24);
  CHECK(trace.windows[17].total_vehicles() == 60);  // profile peak 1.0
  CHECK(trace.windows[3].total_vehicles() == 5);    // profile trough 0.0
  // Morning commute shoulder sits just under the evening peak.
  CHECK(trace.windows[8].total_vehicles() > trace.windows[3].total_vehicles());
  CHECK(trace.windows[8].total_vehicles() <=
        trace.windows[17].total_vehicles());
  for (int h = 0; h < 24; ++h) {
    CHECK(trace.windows[h].window_index == h);
    CHECK(trace.windows[h].total_vehicles() >= 5);
    CHECK(trace.windows[h].total_vehicles() <= 60);
  }
}

TEST_CASE("synthesis is deterministic per seed and varies across seeds") {
  const ScenarioConfig cfg;
  SeededStream a(77, "trace");
  SeededStream b(77, "trace");
  const TrafficTrace ta = synth_diurnal(48, 5, 60, 2.0, a, cfg);
  const TrafficTrace tb = synth_diurnal(48, 5, 60, 2.0, b, cfg);
  REQUIRE(ta.window_count() == tb.window_count());
  for (int i = 0; i < ta.window_count(); ++i) {
    CHECK(ta.windows[i].vehicles_per_ap == tb.windows[i].vehicles_per_ap);
  }
  SeededStream c(78, "trace");
  const TrafficTrace tc = synth_diurnal(48, 5, 60, 2.0, c, cfg);
  bool differs = false;
  for (int i = 0; i < ta.window_count(); ++i) {
    if (ta.windows[i].total_vehicles() != tc.windows[i].total_vehicles()) {
      differs = true;
    }
  }
  CHECK(differs);
}

TEST_CASE("multi-day synthesis repeats the diurnal profile with fresh noise") {
  const ScenarioConfig cfg;
  SeededStream s(5, "trace");
  const TrafficTrace trace = synth_diurnal(72, 5, 60, 0.0, s, cfg);
  REQUIRE(trace.window_count() == 72);
  for (int day = 0; day < 3; ++day) {
    CHECK(trace.windows[24 * day + 17].total_vehicles() == 60);
    CHECK(trace.windows[24 * day + 3].total_vehicles() == 5);
  }
  CHECK(trace.windows[71].window_index == 71);
}

TEST_CASE("split_vehicles conserves totals and matches interval proportions") {
  const ScenarioConfig cfg;
  for (int total : {0, 1, 7, 40, 59, 200}) {
    const auto counts = split_vehicles(total, cfg);
    REQUIRE(counts.size() == 3);
    CHECK(std::accumulate(counts.begin(), counts.end(), 0) == total);
  }
  // Default intervals are 760 / 760 / 480 out of 2000; a multiple of 2000
  // divides without remainders.
  const auto counts = split_vehicles(2000, cfg);
  CHECK(counts[0] == 760);
  CHECK(counts[1] == 760);
  CHECK(counts[2] == 480);
  CHECK_THROWS_AS(split_vehicles(-1, cfg), std::invalid_argument);
}

TEST_CASE("arrival sampling follows the window's rate") {
  const ScenarioConfig cfg;
  TrafficWindow w = make_window(0, 30, cfg);

  SeededStream zero_stream(3, "des");
  TrafficWindow empty = make_window(0, 0, cfg);
  CHECK(sample_arrivals(empty, 0, 100.0, zero_stream).empty());

  SeededStream s(3, "des");
  // AP0 owns 760/2000 of 30 vehicles = 11.4 -> 11 or 12 by rounding.
  const double lambda = w.lambda_per_ap[0];
  REQUIRE(lambda > 0.0);
  const double duration = 20000.0;
  const auto times = sample_arrivals(w, 0, duration, s);
  const double expected = lambda * duration;
  const double sd = std::sqrt(expected);
  CHECK(std::abs(times.size() - expected) < 4.0 * sd);
  for (std::size_t i = 1; i < times.size(); ++i) {
    CHECK(times[i] > times[i - 1]);
  }
  CHECK(times.front() >= 0.0);
  CHECK(times.back() < duration);
  // Mean inter-arrival time approaches 1/lambda.
  const double mean_gap = times.back() / (times.size() - 1);
  CHECK(mean_gap == doctest::Approx(1.0 / lambda).epsilon(0.02));

  CHECK_THROWS_AS(sample_arrivals(w, 5, 10.0, s), std::invalid_argument);
  CHECK_THROWS_AS(sample_arrivals(w, 0, -1.0, s), std::invalid_argument);
}

TEST_CASE("traces round-trip through their CSV form") {
  const ScenarioConfig cfg;
  SeededStream s(9, "trace");
  const TrafficTrace trace = synth_diurnal(24, 5, 60, 2.0, s, cfg);
  const std::string csv = trace_to_csv(trace);
  const TrafficTrace back = parse_trace_csv(csv, "round", cfg);
  REQUIRE(back.window_count() == trace.window_count());
  for (int i = 0; i < trace.window_count(); ++i) {
    CHECK(back.windows[i].vehicles_per_ap == trace.windows[i].vehicles_per_ap);
    CHECK(back.windows[i].lambda_per_ap == trace.windows[i].lambda_per_ap);
  }
}
