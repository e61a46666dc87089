#include "slice/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "slice/queuing.hpp"

namespace slice {

int TrafficWindow::total_vehicles() const {
  int t = 0;
  for (int v : vehicles_per_ap) t += v;
  return t;
}

std::vector<int> split_vehicles(int total, const ScenarioConfig& cfg) {
  if (total < 0) throw std::invalid_argument("split_vehicles: total < 0");
  const auto partition = nearest_ap_partition(cfg);
  const int n = static_cast<int>(partition.size());
  double total_len = 0.0;
  for (const auto& iv : partition) total_len += iv.length();
  std::vector<int> counts(n, 0);
  if (total == 0 || total_len <= 0.0) return counts;

  std::vector<double> frac(n, 0.0);
  int assigned = 0;
  for (int i = 0; i < n; ++i) {
    const double quota = total * partition[i].length() / total_len;
    counts[i] = static_cast<int>(std::floor(quota));
    frac[i] = quota - counts[i];
    assigned += counts[i];
  }
  // Largest remainder; ties to the lower AP index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return frac[a] > frac[b]; });
  for (int k = 0; k < total - assigned; ++k) {
    counts[order[k % n]] += 1;
  }
  return counts;
}

TrafficWindow make_window(int window_index, int total_vehicles,
                          const ScenarioConfig& cfg) {
  TrafficWindow w;
  w.window_index = window_index;
  w.vehicles_per_ap = split_vehicles(total_vehicles, cfg);
  w.lambda_per_ap.resize(w.vehicles_per_ap.size());
  for (std::size_t i = 0; i < w.vehicles_per_ap.size(); ++i) {
    w.lambda_per_ap[i] = w.vehicles_per_ap[i] * cfg.per_vehicle_rate_hz;
  }
  return w;
}

TrafficTrace parse_trace_csv(const std::string& text,
                             const std::string& origin,
                             const ScenarioConfig& cfg) {
  cfg.validate();
  TrafficTrace trace;
  trace.source = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int window_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "hour,vehicles") {
        throw std::runtime_error(origin + ":1: expected header 'hour,vehicles'");
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected 'hour,vehicles' row");
    }
    long hour = 0;
    long vehicles = 0;
    try {
      std::size_t used = 0;
      hour = std::stol(line.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing");
      const std::string rest = line.substr(comma + 1);
      vehicles = std::stol(rest, &used);
      if (used != rest.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": malformed row '" + line + "'");
    }
    if (vehicles < 0) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": negative vehicle count");
    }
    (void)hour;  // informational; windows are indexed consecutively
    trace.windows.push_back(
        make_window(window_index++, static_cast<int>(vehicles), cfg));
  }
  if (trace.windows.empty()) {
    throw std::runtime_error(origin + ": no windows");
  }
  return trace;
}

TrafficTrace load_trace_csv(const std::string& path,
                            const ScenarioConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv(buf.str(), path, cfg);
}

double diurnal_profile(int hour) {
  static constexpr double kProfile[24] = {
      0.10, 0.05, 0.02, 0.00, 0.03, 0.12,   // overnight into the trough
      0.35, 0.72, 0.95, 0.78, 0.62, 0.55,   // morning commute peak at 8
      0.58, 0.55, 0.53, 0.62, 0.85, 1.00,   // evening commute peak at 17
      0.88, 0.65, 0.48, 0.35, 0.25, 0.16};
  const int h = ((hour % 24) + 24) % 24;
  return kProfile[h];
}

TrafficTrace synth_diurnal(int hours, int n_min, int n_max, double noise_sd,
                           SeededStream& stream, const ScenarioConfig& cfg) {
  if (hours < 1) throw std::invalid_argument("synth_diurnal: hours must be >= 1");
  if (n_min > n_max) throw std::invalid_argument("synth_diurnal: n_min > n_max");
  if (n_min < 0) throw std::invalid_argument("synth_diurnal: n_min < 0");
  if (noise_sd < 0.0) throw std::invalid_argument("synth_diurnal: noise_sd < 0");
  cfg.validate();

  TrafficTrace trace;
  trace.source = "synth-diurnal(n_min=" + std::to_string(n_min) +
                 ",n_max=" + std::to_string(n_max) + ")";
  trace.windows.reserve(hours);
  for (int h = 0; h < hours; ++h) {
    const double eps = noise_sd > 0.0 ? stream.normal(0.0, noise_sd) : 0.0;
    const double raw = n_min + (n_max - n_min) * diurnal_profile(h) + eps;
    const long total = std::max(0l, std::lround(raw));
    trace.windows.push_back(make_window(h, static_cast<int>(total), cfg));
  }
  return trace;
}

std::vector<double> sample_arrivals(const TrafficWindow& window, int ap,
                                    double duration_s, SeededStream& stream) {
  if (ap < 0 || ap >= static_cast<int>(window.lambda_per_ap.size())) {
    throw std::invalid_argument("sample_arrivals: ap index out of range");
  }
  if (duration_s < 0.0) {
    throw std::invalid_argument("sample_arrivals: negative duration");
  }
  const double lambda = window.lambda_per_ap[ap];
  std::vector<double> times;
  if (lambda <= 0.0) return times;
  times.reserve(static_cast<std::size_t>(lambda * duration_s * 1.1) + 16);
  double t = stream.exponential(lambda);
  while (t < duration_s) {
    times.push_back(t);
    t += stream.exponential(lambda);
  }
  return times;
}

std::string trace_to_csv(const TrafficTrace& trace) {
  std::string out = "hour,vehicles\n";
  for (const auto& w : trace.windows) {
    out += std::to_string(w.window_index);
    out += ',';
    out += std::to_string(w.total_vehicles());
    out += '\n';
  }
  return out;
}

}  // namespace slice
