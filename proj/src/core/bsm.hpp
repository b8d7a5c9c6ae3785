#pragma once

#include <string>

#include "core/params.hpp"
#include "core/stationary.hpp"

namespace bribesim {

struct BsmState {
  enum class Kind { Zero, Ladder, LadderPrime, ZeroPrimeO, ZeroPrimeB };
  Kind kind = Kind::Zero;
  int k = 0;

  std::string label() const;
};

struct BsmWinningProbs {
  double p_public = 0.0;
  double p_private = 0.0;
  double p0o = 0.0;
  double p0b = 0.0;
};

struct BsmOccupancy {
  double p0 = 0.0;
  double primes = 0.0;  // sum over k' >= 1
  double f0o = 0.0;
  double f0b = 0.0;
  double tail_mass = 0.0;
  StationaryDistribution dist;
};

/// rho is ignored: the whole adversary power mines on the private branch.
TransitionModel build_bsm_chain(const StrategyParams& p, int depth);

BsmWinningProbs bsm_winning_probs(const StrategyParams& p);

BsmOccupancy bsm_occupancy(const StrategyParams& p, const SolverOptions& opts = {});

RewardVector bsm_rewards(const StrategyParams& p, const BsmOccupancy& occ, bool accept);
RewardVector bsm_rewards(const StrategyParams& p, bool accept, const SolverOptions& opts = {});

double bsm_adversary_reward(const StrategyParams& p, const BsmOccupancy& occ);

double bsm_epsilon_threshold(const StrategyParams& p, const BsmOccupancy& occ);
double bsm_epsilon_threshold(const StrategyParams& p, const SolverOptions& opts = {});

}  // namespace bribesim
