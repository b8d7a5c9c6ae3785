#pragma once

#include <cstddef>
#include <vector>

#include "core/params.hpp"

namespace bribesim {

/// One flag per target, true = accept the bribe.
using DecisionProfile = std::vector<bool>;

struct PayoffEntry {
  DecisionProfile profile;
  RewardVector rewards;
  std::vector<double> rer;  // per target, vs honest mining, as a fraction
};

/// Profile index bit i set means target i denies; entry 0 is all-accept and
/// the last entry is all-deny.
struct PayoffMatrix {
  Model model = Model::Bssm;
  StrategyParams params;
  std::vector<PayoffEntry> entries;

  std::size_t targets() const { return params.betas.size(); }
  std::size_t index_of(const DecisionProfile& d) const;
  const PayoffEntry& at(const DecisionProfile& d) const { return entries.at(index_of(d)); }
};

constexpr std::size_t kMaxTargets = 10;

DecisionProfile profile_from_index(std::size_t index, std::size_t n);

/// Per-target split of the single-target model. In a fork opened by target
/// t's block, t mines on the public branch; every other target follows its
/// own flag. The bribe is shared among accepting targets by power.
RewardVector multi_target_rewards(const StrategyParams& p, const DecisionProfile& d, Model model,
                                  const SolverOptions& opts = {});

PayoffMatrix payoff_matrix(const StrategyParams& p, Model model, const SolverOptions& opts = {});

/// Ties count as equilibria; a flip must gain more than 1e-12 to break one.
std::vector<DecisionProfile> find_pure_nash(const PayoffMatrix& m);

struct DilemmaReport {
  bool dilemma = false;
  bool all_accept_is_nash = false;
  std::vector<double> rer_all_accept;
  std::vector<double> rer_all_deny;
  std::vector<bool> winning_all_accept;  // RER > 0 at all-accept
  std::vector<bool> winning_all_deny;
};

DilemmaReport detect_dilemma(const PayoffMatrix& m);

}  // namespace bribesim
