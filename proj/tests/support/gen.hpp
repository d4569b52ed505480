#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Hand-rolled generators for property tests: a seeded engine plus a few
// shaped draws. for_all runs a property over n generated cases; failures
// report the case index so a case can be replayed with Gen(seed, index).

namespace fracrte::test {

class Gen {
 public:
  Gen(std::uint64_t seed, std::uint64_t index) : eng_(seed * 0x9E3779B97F4A7C15ULL + index) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  // Log-uniform on [a, b], a > 0.
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
  bool coin() { return integer(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

template <class Property>
void for_all(int n, std::uint64_t seed, Property&& prop) {
  for (int i = 0; i < n; ++i) {
    Gen g(seed, static_cast<std::uint64_t>(i));
    prop(g, i);
  }
}

}  // namespace fracrte::test
