#pragma once

// Thin RAII layer over the C interface.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bribesim/bribesim.h"

namespace bribesim_cli {

class ApiError : public std::runtime_error {
 public:
  ApiError(bribesim_status s, const std::string& what) : std::runtime_error(what), status_(s) {}
  bribesim_status status() const noexcept { return status_; }

 private:
  bribesim_status status_;
};

inline void check(bribesim_status s) {
  if (s != BRIBESIM_OK) throw ApiError(s, bribesim_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using ParamsPtr = std::unique_ptr<bribesim_params, Deleter<bribesim_params, bribesim_params_destroy>>;
using RewardsPtr = std::unique_ptr<bribesim_rewards, Deleter<bribesim_rewards, bribesim_rewards_destroy>>;
using AnalysisPtr = std::unique_ptr<bribesim_analysis, Deleter<bribesim_analysis, bribesim_analysis_destroy>>;
using ChainPtr = std::unique_ptr<bribesim_chain, Deleter<bribesim_chain, bribesim_chain_destroy>>;
using SimPtr = std::unique_ptr<bribesim_sim_result, Deleter<bribesim_sim_result, bribesim_sim_destroy>>;
using PayoffPtr = std::unique_ptr<bribesim_payoff, Deleter<bribesim_payoff, bribesim_payoff_destroy>>;

struct Rewards {
  bribesim_reward_view view{};
  std::vector<double> targets;
};

inline Rewards read_rewards(const bribesim_rewards* r) {
  Rewards out;
  check(bribesim_rewards_view(r, &out.view));
  out.targets.resize(out.view.targets);
  for (std::size_t i = 0; i < out.targets.size(); ++i) check(bribesim_rewards_target(r, i, &out.targets[i]));
  return out;
}

}  // namespace bribesim_cli
