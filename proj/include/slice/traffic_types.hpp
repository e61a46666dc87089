#pragma once

#include <string>
#include <vector>

namespace slice {

// One planning window's demand: vehicle counts per AP and the aggregate
// task-arrival rates they induce (lambda = vehicles * per_vehicle_rate).
struct TrafficWindow {
  int window_index = 0;
  std::vector<int> vehicles_per_ap;
  std::vector<double> lambda_per_ap;

  int total_vehicles() const;
};

struct TrafficTrace {
  std::vector<TrafficWindow> windows;
  std::string source;  // file path or generator descriptor

  int window_count() const { return static_cast<int>(windows.size()); }
};

}  // namespace slice
