#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bribesim {

/// Finite (truncated) Markov chain with labelled states and sparse rows.
class TransitionModel {
 public:
  struct Entry {
    std::size_t to;
    double p;
  };

  TransitionModel() = default;
  /// `up_rate` is the per-step probability of climbing one ladder level.
  TransitionModel(int depth, double up_rate) : depth_(depth), up_rate_(up_rate) {}

  /// `level` is the ladder index of the state, 0 for states off the ladder.
  std::size_t add_state(std::string label, int level = 0);
  /// Accumulates onto an existing entry. Zero probabilities are dropped.
  void add(std::size_t from, std::size_t to, double p);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  int level(std::size_t i) const { return levels_.at(i); }
  std::optional<std::size_t> find(const std::string& label) const;
  const std::vector<Entry>& row(std::size_t i) const { return rows_.at(i); }
  double probability(std::size_t from, std::size_t to) const;

  int depth() const { return depth_; }
  double up_rate() const { return up_rate_; }

  /// Throws Error(Structure) unless rows are stochastic and the chain is irreducible.
  void check(double tol = 1e-12) const;

  /// Copy restricted to the states reachable from `start`, which becomes state 0.
  TransitionModel reachable_from(std::size_t start = 0) const;

  /// State i of the result is state perm[i] of this model.
  TransitionModel permuted(const std::vector<std::size_t>& perm) const;

 private:
  std::vector<std::string> labels_;
  std::vector<int> levels_;
  std::vector<std::vector<Entry>> rows_;
  int depth_ = 0;
  double up_rate_ = 0.0;
};

struct StationaryDistribution {
  std::vector<std::string> labels;
  std::vector<int> levels;
  std::vector<double> probs;
  double residual = 0.0;
  double tail_mass = 0.0;
  bool used_fallback = false;

  /// Probability of the labelled state, 0 when the state is not part of the chain.
  double at(const std::string& label) const;
  /// Total mass on ladder states with index > level.
  double mass_beyond(int level) const;
};

/// Largest balance violation max_j |sum_i pi_i P_ij - pi_j|.
double balance_residual(const TransitionModel& m, const std::vector<double>& pi);

StationaryDistribution solve_stationary(const TransitionModel& m, double tol = 1e-12);

/// Bound on the stationary mass beyond depth K: r^(K-1) / (1 - r) with
/// r = u / (1 - u), u the per-step upward probability of the ladder.
double truncation_tail_bound(const TransitionModel& m);

}  // namespace bribesim
