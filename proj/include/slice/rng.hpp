#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace slice {

// Labeled deterministic random stream. Two streams constructed with the same
// (seed, label) pair produce identical draw sequences; distinct labels yield
// decorrelated sequences. All distribution transforms are implemented here so
// the draw sequence does not depend on the standard library's distribution
// internals.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::string_view label);

  // Child stream addressed as "<label>/<sub>" under the same root seed.
  SeededStream derive(std::string_view sub) const;

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Inclusive bounds, unbiased via rejection.
  int uniform_int(int lo, int hi);

  double normal(double mean, double sd);

  // Mean 1/rate. rate == 0 is the null process and must be handled by callers.
  double exponential(double rate);

 private:
  std::uint64_t root_seed_;
  std::string label_;
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace slice
