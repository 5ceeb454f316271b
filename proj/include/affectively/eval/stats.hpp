#pragma once

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace affectively::eval {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1)
  double ci95 = 0.0;    // half-width t(0.975, n - 1) s / sqrt(n)
};

inline double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double t_quantile(double p, double dof) {
  return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

// NaN entries (runs without any affect emission) are skipped. With fewer
// than two values the half-width is 0.
inline Summary summarize(const std::vector<double>& values) {
  std::vector<double> v;
  v.reserve(values.size());
  for (double x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  Summary s;
  s.n = v.size();
  s.mean = mean_of(v);
  s.stddev = sample_stddev(v);
  if (v.size() >= 2) {
    s.ci95 = t_quantile(0.975, static_cast<double>(v.size() - 1)) * s.stddev / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

}  // namespace affectively::eval
