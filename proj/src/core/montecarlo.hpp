#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "core/params.hpp"

namespace bribesim {

enum class Strategy { Honest, Selfish, SemiSelfish, LeadStubborn, Bssm, Bsm };

const char* strategy_name(Strategy s);

struct SimConfig {
  StrategyParams params;
  Strategy strategy = Strategy::Honest;
  std::vector<bool> accept;  // per target, bribery strategies only
  std::uint64_t rounds = 1000000;
  std::uint64_t seed = 1;
  /// Tab separated records: event, finder, action, state before, state after.
  std::ostream* trace = nullptr;
};

void validate(const SimConfig& cfg);

struct StateVisit {
  std::string label;
  std::uint64_t count = 0;
  double frequency = 0.0;
  double se = 0.0;
};

/// Actor slots: 0 adversary, 1 other pools, 2 + i target i.
struct SimStats {
  std::string rng = "mt19937_64";
  std::uint64_t seed = 0;
  std::uint64_t total_events = 0;
  std::uint64_t main_chain_length = 0;
  std::uint64_t public_blocks = 0;  // blocks published on discovery
  std::vector<std::uint64_t> settled_blocks;
  double bribes_transferred = 0.0;
  std::vector<double> per_actor_reward;
  std::vector<double> per_actor_se;
  std::vector<std::vector<double>> batch_rewards;  // [batch][actor], rewards per event
  std::vector<StateVisit> visits;
  // Honest-side blocks appended to a public branch while the adversary held a
  // deep lead, and how many of them ended on the main chain.
  std::uint64_t deep_public_total = 0;
  std::uint64_t deep_public_settled = 0;

  std::size_t targets() const { return settled_blocks.size() - 2; }
  double reward(const Actor& a) const;
  /// Batch-means standard error of sum_k w_k * reward_k.
  double se_of(const std::vector<double>& weights) const;
  double visit_frequency(const std::string& label) const;
  const StateVisit* visit(const std::string& label) const;
};

SimStats simulate(const SimConfig& cfg);

struct Deviation {
  std::string component;
  double simulated = 0.0;
  double analytic = 0.0;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  double se = 0.0;
  double sigmas = 0.0;
  bool flagged = false;
};

struct DeviationReport {
  std::vector<Deviation> rows;
  bool any_flagged() const;
};

/// A single-target analytic vector is compared with the sum over simulated targets.
DeviationReport compare_closed_form(const SimStats& stats, const RewardVector& analytic, double sigma_limit = 3.0);

}  // namespace bribesim
