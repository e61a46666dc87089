#pragma once

#include <string>
#include <vector>

#include "slice/rng.hpp"
#include "slice/scenario.hpp"
#include "slice/traffic_types.hpp"

namespace slice {

// Splits a total vehicle count across APs proportionally to the length of
// each AP's highway interval, largest-remainder rounding, ties to the lower
// index. Counts always sum to total.
std::vector<int> split_vehicles(int total, const ScenarioConfig& cfg);

// Builds a window from a total count: split across APs, lambdas attached.
TrafficWindow make_window(int window_index, int total_vehicles,
                          const ScenarioConfig& cfg);

// Reads a `hour,vehicles` CSV (header required, one row per planning
// window). Throws std::runtime_error naming the offending line on malformed
// input, negative counts, or an empty trace.
TrafficTrace load_trace_csv(const std::string& path,
                            const ScenarioConfig& cfg);

// Parses CSV text already in memory; `origin` names the source in errors.
TrafficTrace parse_trace_csv(const std::string& text,
                             const std::string& origin,
                             const ScenarioConfig& cfg);

// Hour-of-day shape of the synthetic generator: double-peak commuter
// profile, s[3] == 0 (trough), s[17] == 1 (peak), s[8] the morning peak.
double diurnal_profile(int hour);

// Synthetic diurnal trace: per-hour total = round(n_min + (n_max-n_min)*s(h)
// + Normal(0, noise_sd)), clamped at 0, split across APs. Deterministic
// given the stream.
TrafficTrace synth_diurnal(int hours, int n_min, int n_max, double noise_sd,
                           SeededStream& stream, const ScenarioConfig& cfg);

// Homogeneous Poisson arrival times on [0, duration) for one AP of one
// window. Rate 0 yields an empty sequence.
std::vector<double> sample_arrivals(const TrafficWindow& window, int ap,
                                    double duration_s, SeededStream& stream);

// Writes the `hour,vehicles` CSV (UTF-8, LF) for a trace.
std::string trace_to_csv(const TrafficTrace& trace);

}  // namespace slice
