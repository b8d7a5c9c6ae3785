#include "core/params.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace bribesim {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidParameter, msg); }

void require_unit(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << v;
    invalid(os.str());
  }
}

}  // namespace

const char* model_name(Model m) { return m == Model::Bssm ? "bssm" : "bsm"; }

double StrategyParams::target_power() const { return std::accumulate(betas.begin(), betas.end(), 0.0); }

double StrategyParams::other_power() const { return 1.0 - alpha - target_power(); }

void validate(const StrategyParams& p) {
  if (!std::isfinite(p.alpha) || p.alpha <= 0.0 || p.alpha >= 0.5) {
    std::ostringstream os;
    os << "alpha must satisfy 0 < alpha < 0.5, got " << p.alpha;
    invalid(os.str());
  }
  require_unit(p.rho, "rho");
  require_unit(p.gamma, "gamma");
  require_unit(p.epsilon, "epsilon");
  for (std::size_t i = 0; i < p.betas.size(); ++i) {
    double b = p.betas[i];
    if (!std::isfinite(b) || b < 0.0 || b >= 1.0) {
      std::ostringstream os;
      os << "beta[" << i + 1 << "] must lie in [0, 1), got " << b;
      invalid(os.str());
    }
  }
  if (p.other_power() <= 0.0) {
    std::ostringstream os;
    os << "alpha + sum(beta) must be < 1 so other pools keep positive power, got "
       << p.alpha + p.target_power();
    invalid(os.str());
  }
}

std::vector<std::string> warnings(const StrategyParams& p, Model m) {
  std::vector<std::string> out;
  if (m == Model::Bsm && p.rho != 0.0) out.emplace_back("rho is ignored under bsm (the adversary mines selfishly with all power)");
  if (p.betas.empty()) out.emplace_back("no target pools configured; bribery has no effect");
  return out;
}

StrategyParams aggregated(const StrategyParams& p) {
  StrategyParams q = p;
  q.betas = {p.target_power()};
  return q;
}

void validate(const SolverOptions& opts) {
  if (opts.depth < 3 || opts.depth > 1024) {
    throw Error(ErrorCode::InvalidParameter, "truncation depth K must lie in [3, 1024], got " + std::to_string(opts.depth));
  }
  if (!(opts.tolerance > 0.0)) throw Error(ErrorCode::InvalidParameter, "solver tolerance must be positive");
}

bool is_valid(const Actor& a, const StrategyParams& p) {
  return a.kind != ActorKind::Target || a.index < p.betas.size();
}

double RewardVector::target_total() const { return std::accumulate(targets.begin(), targets.end(), 0.0); }

double RewardVector::total() const { return adversary + other + target_total(); }

double RewardVector::of(const Actor& a) const {
  switch (a.kind) {
    case ActorKind::Adversary:
      return adversary;
    case ActorKind::OtherPools:
      return other;
    case ActorKind::Target:
      if (a.index >= targets.size()) throw Error(ErrorCode::Domain, "target index out of range");
      return targets[a.index];
  }
  return 0.0;
}

void check_invariants(const RewardVector& rv, double tol) {
  auto neg = [&](double v) { return !(v >= -tol); };
  bool bad = neg(rv.adversary) || neg(rv.other) || neg(rv.bribe_paid);
  for (double t : rv.targets) bad = bad || neg(t);
  if (bad) throw Error(ErrorCode::Numerical, "reward vector has a negative component");
  if (rv.total() > 1.0 + tol) throw Error(ErrorCode::Numerical, "reward vector total exceeds one block per round");
}

double rer(double r_new, double r_base) {
  if (!(r_base > 0.0) || !std::isfinite(r_new)) throw Error(ErrorCode::Domain, "relative extra reward needs a positive baseline");
  return (r_new - r_base) / r_base;
}

RelativeShares normalize_relative(const RewardVector& rv) {
  double total = rv.total();
  if (!(total > 0.0)) throw Error(ErrorCode::Domain, "cannot normalise a reward vector with zero total");
  RelativeShares s;
  s.adversary = rv.adversary / total;
  s.other = rv.other / total;
  s.targets.reserve(rv.targets.size());
  for (double t : rv.targets) s.targets.push_back(t / total);
  return s;
}

double honest_reward(double power) {
  if (!(power >= 0.0 && power <= 1.0)) throw Error(ErrorCode::Domain, "power must lie in [0, 1]");
  return power;
}

GrowthRates chain_growth_rates(const StrategyParams& p) {
  validate(p);
  const double a = p.alpha, r = p.rho, b = p.target_power();
  GrowthRates g;
  g.selfish = 1.0 - a;
  g.semi_selfish = (1.0 - a) + r * a;
  g.bribery_semi_selfish = (1.0 - a - b) + r * a + b;
  return g;
}

}  // namespace bribesim
