#pragma once

#include <cmath>
#include <random>
#include <string>

#include "qls/config.hpp"

namespace qls::test {

inline RunConfig scenario(const std::string& name) {
  return load_config_file(std::string(QLS_SCENARIO_DIR) + "/" + name + ".json");
}

// Fixed-seed sampler for the property tests.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed = 12345) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace qls::test
