#include "core/dilemma.hpp"

#include <algorithm>

#include "core/bsm.hpp"
#include "core/bssm.hpp"
#include "core/error.hpp"

namespace bribesim {

namespace {

constexpr double kNashSlack = 1e-12;

void check_profile(const StrategyParams& p, const DecisionProfile& d) {
  if (p.betas.empty()) throw Error(ErrorCode::InvalidParameter, "at least one target is required");
  if (d.size() != p.betas.size())
    throw Error(ErrorCode::InvalidParameter, "decision profile length must equal the number of targets");
}

// Occupancy terms shared by both models.
struct Mass {
  double base = 0.0;      // states where targets mine honestly: 0, 0'o, 0'a
  double deep = 0.0;      // states settled through the deep-fork win probability
  double fork_b = 0.0;    // 0'b (aggregate)
  double fork_o = 0.0;    // 0'o
  double p_public = 0.0;
  double ra_rest = 0.0;   // adversary terms that do not depend on the profile
  double ro_rest = 0.0;   // other-pool terms that do not depend on the profile
  double tie_o = 0.0;     // o's reward in 0'o before denying targets are added
  double tie_a = 0.0;     // a's reward in 0'o before accepting targets are added
  double fork_a = 0.0;    // a's reward in 0'b_t before other accepting targets
  double fork_t = 0.0;    // t's reward in 0'b_t, excluding its own power terms
  double tail = 0.0;
};

Mass bssm_mass(const StrategyParams& q, const SolverOptions& opts) {
  const BssmOccupancy c = bssm_occupancy(q, opts);
  const double a = q.alpha, g = q.gamma, beta = q.target_power();
  const double s = (1 - q.rho) * a, h = q.rho * a, o = 1 - a - beta;
  const BssmWinningProbs w = bssm_winning_probs(q);
  const double ps = w.p_private;
  Mass m;
  m.base = c.p0 + c.f0o + c.f0a;
  m.deep = c.prime3 + c.ladder3;
  m.fork_b = c.f0b;
  m.fork_o = c.f0o;
  m.p_public = w.p_public;
  m.ra_rest = c.p0 * h + c.f0a * (2 * a + beta + o) + c.p1p * (o + beta + h) + c.p2p * (3 * o + 3 * beta + h) +
              c.prime3 * (o * (1 + ps) + beta * (1 + ps) + h) + c.p2 * (2 * o + 2 * beta) +
              c.ladder3 * (o + beta) * ps;
  m.ro_rest = c.p0 * o + c.f0b * o + c.f0a * o + m.deep * o * w.p_public;
  m.tie_o = 2 * (1 - g) * o + h + g * o;
  m.tie_a = 2 * s + h + g * o;
  m.fork_a = 2 * s + h + g * o;
  m.fork_t = (1 - g) * o + h;
  m.tail = 3.0 * c.tail_mass;
  return m;
}

Mass bsm_mass(const StrategyParams& q, const SolverOptions& opts) {
  const BsmOccupancy c = bsm_occupancy(q, opts);
  const double a = q.alpha, g = q.gamma, beta = q.target_power(), o = 1 - a - beta;
  const BsmWinningProbs w = bsm_winning_probs(q);
  const double ps = w.p_private;
  Mass m;
  m.base = c.p0 + c.f0o;
  m.deep = 0.0;
  m.fork_b = c.f0b;
  m.fork_o = c.f0o;
  m.p_public = w.p_public;
  m.ra_rest = c.primes * ((1 - g) * o * ps + g * o + (1 - g) * beta * ps + g * beta);
  m.ro_rest = c.p0 * o + c.f0b * o + c.primes * (1 - g) * (o + beta) * w.p_public;
  m.tie_o = 2 * (1 - g) * o + g * o;
  m.tie_a = 2 * a + g * o;
  m.fork_a = 2 * a + g * o;
  m.fork_t = (1 - g) * o;
  m.tail = 3.0 * c.tail_mass;
  return m;
}

RewardVector compose(const StrategyParams& p, const DecisionProfile& d, const Mass& m) {
  const std::size_t n = p.betas.size();
  const double beta = p.target_power();
  double b_acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i]) b_acc += p.betas[i];
  const double b_deny = beta - b_acc;

  double ra = m.ra_rest + m.fork_o * (m.tie_a + b_acc);
  double ro = m.ro_rest + m.fork_o * (m.tie_o + b_deny);
  std::vector<double> rt(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) rt[t] = p.betas[t] * (m.base + m.deep * m.p_public);

  for (std::size_t t = 0; t < n; ++t) {
    const double bt = p.betas[t];
    const double share = beta > 0.0 ? m.fork_b * bt / beta : 0.0;  // mass of 0'b opened by t
    if (share == 0.0) continue;
    double acc_others = 0.0, deny_others = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == t) continue;
      (d[j] ? acc_others : deny_others) += p.betas[j];
      rt[j] += share * p.betas[j];
    }
    ra += share * (m.fork_a + acc_others);
    rt[t] += share * (m.fork_t + 2 * bt + deny_others);
  }

  RewardVector rv;
  rv.accept = std::any_of(d.begin(), d.end(), [](bool x) { return x; });
  if (b_acc > 0.0) {
    rv.bribe_paid = p.epsilon * ra;
    for (std::size_t i = 0; i < n; ++i)
      if (d[i]) rt[i] += rv.bribe_paid * p.betas[i] / b_acc;
    ra -= rv.bribe_paid;
  }
  rv.adversary = ra;
  rv.other = ro;
  rv.targets = std::move(rt);
  rv.tail_bound = m.tail;
  return rv;
}

Mass mass_for(const StrategyParams& p, Model model, const SolverOptions& opts) {
  StrategyParams q = aggregated(p);
  return model == Model::Bssm ? bssm_mass(q, opts) : bsm_mass(q, opts);
}

}  // namespace

std::size_t PayoffMatrix::index_of(const DecisionProfile& d) const {
  if (d.size() != targets()) throw Error(ErrorCode::InvalidParameter, "decision profile length mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!d[i]) idx |= std::size_t{1} << i;
  return idx;
}

DecisionProfile profile_from_index(std::size_t index, std::size_t n) {
  DecisionProfile d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = ((index >> i) & 1u) == 0;
  return d;
}

RewardVector multi_target_rewards(const StrategyParams& p, const DecisionProfile& d, Model model,
                                  const SolverOptions& opts) {
  validate(p);
  check_profile(p, d);
  return compose(p, d, mass_for(p, model, opts));
}

PayoffMatrix payoff_matrix(const StrategyParams& p, Model model, const SolverOptions& opts) {
  validate(p);
  const std::size_t n = p.betas.size();
  if (n == 0) throw Error(ErrorCode::InvalidParameter, "at least one target is required");
  if (n > kMaxTargets)
    throw Error(ErrorCode::Size, "payoff matrix supports at most " + std::to_string(kMaxTargets) + " targets");
  for (double b : p.betas)
    if (!(b > 0.0)) throw Error(ErrorCode::Domain, "every target needs positive power for an RER payoff");

  const Mass m = mass_for(p, model, opts);
  PayoffMatrix out;
  out.model = model;
  out.params = p;
  const std::size_t count = std::size_t{1} << n;
  out.entries.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    PayoffEntry e;
    e.profile = profile_from_index(idx, n);
    e.rewards = compose(p, e.profile, m);
    check_invariants(e.rewards, 1e-9);
    const RelativeShares sh = normalize_relative(e.rewards);
    for (std::size_t i = 0; i < n; ++i) e.rer.push_back(rer(sh.targets[i], honest_reward(p.betas[i])));
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::vector<DecisionProfile> find_pure_nash(const PayoffMatrix& m) {
  std::vector<DecisionProfile> out;
  const std::size_t n = m.targets();
  for (std::size_t idx = 0; idx < m.entries.size(); ++idx) {
    const auto& e = m.entries[idx];
    bool stable = true;
    for (std::size_t i = 0; i < n && stable; ++i) {
      const auto& flipped = m.entries[idx ^ (std::size_t{1} << i)];
      if (flipped.rer[i] > e.rer[i] + kNashSlack) stable = false;
    }
    if (stable) out.push_back(e.profile);
  }
  return out;
}

DilemmaReport detect_dilemma(const PayoffMatrix& m) {
  DilemmaReport r;
  const auto& acc = m.entries.front();
  const auto& deny = m.entries.back();
  r.rer_all_accept = acc.rer;
  r.rer_all_deny = deny.rer;
  for (double v : acc.rer) r.winning_all_accept.push_back(v > 0.0);
  for (double v : deny.rer) r.winning_all_deny.push_back(v > 0.0);
  for (const auto& d : find_pure_nash(m))
    if (d == acc.profile) r.all_accept_is_nash = true;
  bool worse = true;
  for (std::size_t i = 0; i < acc.rer.size(); ++i) worse = worse && acc.rer[i] < deny.rer[i];
  r.dilemma = r.all_accept_is_nash && worse;
  return r;
}

}  // namespace bribesim
