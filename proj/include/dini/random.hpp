#pragma once

#include <cstdint>
#include <random>

namespace dini {

// Seeded generator with a portable double conversion (std distributions are
// implementation-defined, which would break byte-identical outputs).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dini
