#pragma once

#include <functional>
#include <random>

#include <Eigen/Dense>

namespace test_helpers {

// Central finite difference of a scalar-valued function.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

// Central finite difference of a vector-valued function of a vector, one
// coordinate at a time; returns the Jacobian column for coordinate k.
template <typename F>
Eigen::VectorXd central_diff_col(const F& f, const Eigen::VectorXd& x, int k,
                                 double h = 1e-6) {
  Eigen::VectorXd xp = x, xm = x;
  xp(k) += h;
  xm(k) -= h;
  return (f(xp) - f(xm)) / (2 * h);
}

inline std::mt19937 rng(unsigned seed) { return std::mt19937(seed); }

inline double uniform(std::mt19937& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

}  // namespace test_helpers
