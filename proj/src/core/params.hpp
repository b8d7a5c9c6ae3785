#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bribesim {

enum class Model { Bssm, Bsm };

const char* model_name(Model m);

/// Attack configuration. Powers are fractions of the total hash rate.
struct StrategyParams {
  double alpha = 0.0;    // adversary power
  double rho = 0.0;      // share of adversary power mining honestly (BSSM)
  double gamma = 0.0;    // share of other pools extending the private branch in a tie
  double epsilon = 0.0;  // bribe as a fraction of the adversary's reward
  std::vector<double> betas;

  double target_power() const;
  double other_power() const;
};

/// Throws Error(InvalidParameter) naming the first violated bound.
void validate(const StrategyParams& p);

/// Non-fatal configuration remarks, e.g. rho set under BSM.
std::vector<std::string> warnings(const StrategyParams& p, Model m);

/// Same configuration with every target folded into one of power sum(betas).
StrategyParams aggregated(const StrategyParams& p);

struct SolverOptions {
  int depth = 64;
  double tolerance = 1e-12;
};

void validate(const SolverOptions& opts);

enum class ActorKind { Adversary, OtherPools, Target };

struct Actor {
  ActorKind kind = ActorKind::Adversary;
  std::size_t index = 0;  // only meaningful for targets

  static Actor adversary() { return {ActorKind::Adversary, 0}; }
  static Actor other() { return {ActorKind::OtherPools, 0}; }
  static Actor target(std::size_t i) { return {ActorKind::Target, i}; }
};

bool is_valid(const Actor& a, const StrategyParams& p);

/// Expected per-round rewards with the coinbase normalised to 1.
struct RewardVector {
  double adversary = 0.0;
  double other = 0.0;
  std::vector<double> targets;
  double bribe_paid = 0.0;
  bool accept = true;
  double tail_bound = 0.0;  // bound on reward omitted by ladder truncation

  double target_total() const;
  double total() const;
  double of(const Actor& a) const;
};

/// Checks non-negativity and total <= 1 + tol.
void check_invariants(const RewardVector& rv, double tol = 1e-9);

struct RelativeShares {
  double adversary = 0.0;
  double other = 0.0;
  std::vector<double> targets;
};

double rer(double r_new, double r_base);
RelativeShares normalize_relative(const RewardVector& rv);
double honest_reward(double power);

struct GrowthRates {
  double selfish = 0.0;
  double semi_selfish = 0.0;
  double bribery_semi_selfish = 0.0;
};

GrowthRates chain_growth_rates(const StrategyParams& p);

}  // namespace bribesim
