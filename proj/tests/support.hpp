#pragma once

// Random-field generators shared by the unit tests.

#include <random>

#include "rtv/grid.hpp"

namespace rtv::test {

inline void fill_random(std::vector<double>& v, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  for (double& x : v) x = d(rng);
}

inline FluxField random_flux(const GridSpec& g, std::mt19937_64& rng) {
  FluxField f(g);
  fill_random(f.s1, rng);
  fill_random(f.s2, rng);
  fill_random(f.st, rng);
  return f;
}

inline VolumeField random_volume(const GridSpec& g, std::mt19937_64& rng) {
  VolumeField f(g);
  fill_random(f.values, rng);
  return f;
}

inline AveragedField random_averaged(const GridSpec& g, std::mt19937_64& rng) {
  AveragedField f(g);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (auto& v : f.values) v = {d(rng), d(rng), d(rng)};
  return f;
}

inline EdgeField random_edges(const GridSpec& g, std::mt19937_64& rng) {
  EdgeField f(g);
  fill_random(f.e1, rng);
  fill_random(f.e2, rng);
  return f;
}

inline Image random_image(int n1, int n2, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  Image u(n1, n2);
  fill_random(u.values, rng, lo, hi);
  return u;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
  return m;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(inner(a, a)); }

}  // namespace rtv::test
