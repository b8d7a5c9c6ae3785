#pragma once

#include <cmath>
#include <vector>

#include "core/params.hpp"

namespace testing {

inline bribesim::StrategyParams point(double alpha, double rho, double gamma, double epsilon, std::vector<double> betas) {
  bribesim::StrategyParams p;
  p.alpha = alpha;
  p.rho = rho;
  p.gamma = gamma;
  p.epsilon = epsilon;
  p.betas = std::move(betas);
  return p;
}

/// 405-point grid over alpha, beta, gamma, rho, epsilon.
inline std::vector<bribesim::StrategyParams> property_grid() {
  std::vector<bribesim::StrategyParams> out;
  for (double a : {0.05, 0.15, 0.25, 0.35, 0.45})
    for (double b : {0.05, 0.2, 0.4})
      for (double g : {0.0, 0.5, 1.0})
        for (double r : {0.0, 0.25, 0.5})
          for (double e : {0.01, 0.1, 0.2}) out.push_back(point(a, r, g, e, {b}));
  return out;
}

inline bool within_sigma(double x, double mean, double se, double k = 3.0) { return std::abs(x - mean) <= k * se; }

}  // namespace testing
