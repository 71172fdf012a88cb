#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nlsb/errors.hpp"

namespace nlsb {

// Scalar diagnostic sampled at strictly increasing times.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }

  void append(double time, double v) {
    if (!t.empty() && !(time > t.back()))
      throw domain_error("time series: sample times must be strictly increasing");
    t.push_back(time);
    value.push_back(v);
  }

  double back() const {
    if (t.empty()) throw domain_error("time series: empty");
    return value.back();
  }

  // Linear interpolation; clamps outside the sampled range.
  double at(double time) const {
    if (t.empty()) throw domain_error("time series: empty");
    if (time <= t.front()) return value.front();
    if (time >= t.back()) return value.back();
    std::size_t lo = 0, hi = t.size() - 1;
    while (hi - lo > 1) {
      const std::size_t m = (lo + hi) / 2;
      (t[m] <= time ? lo : hi) = m;
    }
    const double w = (time - t[lo]) / (t[hi] - t[lo]);
    return value[lo] * (1.0 - w) + value[hi] * w;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : value) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace nlsb
