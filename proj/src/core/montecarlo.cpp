#include "core/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "core/error.hpp"

namespace bribesim {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Honest:
      return "honest";
    case Strategy::Selfish:
      return "selfish";
    case Strategy::SemiSelfish:
      return "semi-selfish";
    case Strategy::LeadStubborn:
      return "lead-stubborn";
    case Strategy::Bssm:
      return "bssm";
    case Strategy::Bsm:
      return "bsm";
  }
  return "?";
}

namespace {

bool is_bribery(Strategy s) { return s == Strategy::Bssm || s == Strategy::Bsm; }

constexpr std::uint8_t kAdversary = 0;
constexpr std::uint8_t kDeep = 0x80;
constexpr std::uint8_t kOwnerMask = 0x7f;

// Finder codes: 0 a_s (or the whole adversary), 1 a_i, 2 o, 3 + j target j.
constexpr int kFinderAs = 0;
constexpr int kFinderAi = 1;
constexpr int kFinderO = 2;

inline std::uint8_t actor_of(int finder) { return finder <= kFinderAi ? kAdversary : static_cast<std::uint8_t>(finder - 1); }

// Visit codes: 0 -> "0", 1 -> 0'o, 2 -> 0'b, 3 -> 0'a, 2k+2 -> k, 2k+3 -> k'.
std::string visit_label(std::size_t code) {
  switch (code) {
    case 0:
      return "0";
    case 1:
      return "0'o";
    case 2:
      return "0'b";
    case 3:
      return "0'a";
    default:
      break;
  }
  if (code % 2 == 0) return std::to_string((code - 2) / 2);
  return std::to_string((code - 3) / 2) + "'";
}

inline std::size_t fork_code(std::uint8_t owner) { return owner == kAdversary ? 3 : owner == 1 ? 1 : 2; }

class Engine {
 public:
  explicit Engine(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    const auto& p = cfg.params;
    n_ = p.betas.size();
    const bool stubborn = cfg.strategy == Strategy::LeadStubborn || cfg.strategy == Strategy::Bsm;
    const double rho = (cfg.strategy == Strategy::SemiSelfish || cfg.strategy == Strategy::Bssm) ? p.rho : 0.0;
    const double a = p.alpha;
    weights_ = {stubborn ? a : (1.0 - rho) * a, stubborn ? 0.0 : rho * a, p.other_power()};
    for (double b : p.betas) weights_.push_back(b);
    double c = 0.0;
    for (double w : weights_) cumulative_.push_back(c += w);
    bribery_ = is_bribery(cfg.strategy);
    credits_.assign(n_ + 2, 0);
    batch_credits_.assign(n_ + 2, 0);
    batches_ = static_cast<std::size_t>(std::min<std::uint64_t>(100, cfg.rounds));
  }

  SimStats run() {
    switch (cfg_.strategy) {
      case Strategy::Honest:
        loop([this](std::uint64_t ev) { step_honest(ev); });
        break;
      case Strategy::Selfish:
      case Strategy::SemiSelfish:
      case Strategy::Bssm:
        loop([this](std::uint64_t ev) { step_selfish(ev); });
        break;
      case Strategy::LeadStubborn:
      case Strategy::Bsm:
        loop([this](std::uint64_t ev) { step_stubborn(ev); });
        break;
    }
    return finish();
  }

 private:
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  int draw_finder() {
    const double u = uniform() * cumulative_.back();
    const int last = static_cast<int>(cumulative_.size()) - 1;
    for (int i = 0; i < last; ++i)
      if (u < cumulative_[i]) return i;
    return last;
  }

  std::string finder_name(int f) const {
    const bool stubborn = cfg_.strategy == Strategy::LeadStubborn || cfg_.strategy == Strategy::Bsm;
    if (f == kFinderAs) return stubborn || cfg_.strategy == Strategy::Honest ? "a" : "a_s";
    if (f == kFinderAi) return "a_i";
    if (f == kFinderO) return "o";
    return "b" + std::to_string(f - 2);
  }

  void credit(std::uint8_t actor, std::uint64_t n = 1) {
    credits_[actor] += n;
    batch_credits_[actor] += n;
  }

  void settle_public() {
    for (std::uint8_t e : pub_) {
      credit(e & kOwnerMask);
      if (e & kDeep) {
        ++deep_total_;
        ++deep_settled_;
      }
    }
    pub_.clear();
  }

  void orphan_public() {
    for (std::uint8_t e : pub_)
      if (e & kDeep) ++deep_total_;
    pub_.clear();
  }

  // Where a non-adversary block goes when two branches of equal length compete
  // at the bribery stage.
  bool joins_private(int f) {
    if (f == kFinderAs) return true;
    if (f == kFinderAi) return false;
    if (f == kFinderO || !bribery_) return uniform() < cfg_.params.gamma;
    const std::uint8_t me = actor_of(f);
    return me != fork_owner_ && cfg_.accept[static_cast<std::size_t>(f - 3)];
  }

  template <class Step>
  void loop(Step step) {
    const std::uint64_t rounds = cfg_.rounds;
    std::size_t b = 0;
    std::uint64_t next_end = batch_end(0);
    for (std::uint64_t ev = 0; ev < rounds; ++ev) {
      step(ev);
      if (ev + 1 == next_end && b + 1 < batches_) {
        close_batch(next_end - batch_end_prev_);
        batch_end_prev_ = next_end;
        next_end = batch_end(++b);
      }
    }
    force_settle();
    close_batch(rounds - batch_end_prev_);
  }

  std::uint64_t batch_end(std::size_t b) const {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(b + 1) * cfg_.rounds) / batches_);
  }

  void visit(std::size_t code) {
    if (code >= batch_visits_.size()) batch_visits_.resize(code + 1, 0);
    ++batch_visits_[code];
  }

  void close_batch(std::uint64_t len) {
    std::vector<double> r(n_ + 2);
    const double inv = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<double>(batch_credits_[i]) * inv;
    apply_bribe(r);
    batch_rewards_.push_back(std::move(r));
    batch_lengths_.push_back(len);
    visit_batches_.push_back(batch_visits_);
    std::fill(batch_credits_.begin(), batch_credits_.end(), 0);
    std::fill(batch_visits_.begin(), batch_visits_.end(), 0);
  }

  double accepted_power() const {
    double s = 0.0;
    if (!bribery_) return s;
    for (std::size_t j = 0; j < n_; ++j)
      if (cfg_.accept[j]) s += cfg_.params.betas[j];
    return s;
  }

  // Bribe eps * (adversary settled reward) shared among accepting targets by power.
  void apply_bribe(std::vector<double>& r) const {
    const double acc = accepted_power();
    if (!(acc > 0.0)) return;
    const double bribe = cfg_.params.epsilon * r[0];
    r[0] -= bribe;
    for (std::size_t j = 0; j < n_; ++j)
      if (cfg_.accept[j]) r[2 + j] += bribe * cfg_.params.betas[j] / acc;
  }

  void trace(std::uint64_t ev, int f, const char* action, std::size_t before, std::size_t after) const {
    *cfg_.trace << ev << '\t' << finder_name(f) << '\t' << action << '\t' << visit_label(before) << '\t'
                << visit_label(after) << '\n';
  }

  // ---- honest ----

  void step_honest(std::uint64_t ev) {
    visit(0);
    const int f = draw_finder();
    ++public_;
    credit(actor_of(f));
    if (cfg_.trace) trace(ev, f, "publish", 0, 0);
  }

  // ---- selfish family: selfish, semi-selfish, bssm ----

  std::size_t selfish_code() const {
    if (fork_) return fork_code(fork_owner_);
    const auto lead = static_cast<std::size_t>(priv_ - static_cast<std::int64_t>(pub_.size()));
    if (lead == 0) return 0;
    const bool primed = !pub_.empty() && (pub_.back() & kOwnerMask) == kAdversary;
    return 2 * lead + (primed ? 3 : 2);
  }

  void reset_race() {
    priv_ = 0;
    published_ = 0;
    pub_.clear();
    fork_ = false;
    tie_ = false;
  }

  void step_selfish(std::uint64_t ev) {
    const std::size_t before = selfish_code();
    visit(before);
    const int f = draw_finder();
    const std::uint8_t me = actor_of(f);
    if (f != kFinderAs) ++public_;
    const char* action;
    if (fork_) {
      if (joins_private(f)) {
        credit(kAdversary, static_cast<std::uint64_t>(priv_));
        orphan_public();
        action = "private-wins";
      } else {
        settle_public();
        action = "public-wins";
      }
      credit(me);
      reset_race();
    } else if (f == kFinderAs) {
      ++priv_;
      action = "withhold";
    } else if (priv_ == 0) {
      credit(me);
      action = "publish";
    } else {
      const std::int64_t lead = priv_ - static_cast<std::int64_t>(pub_.size());
      if (lead == 1) {
        pub_.push_back(me);
        fork_ = true;
        fork_owner_ = me;
        action = "fork";
      } else if (lead == 2 && f != kFinderAi) {
        credit(kAdversary, static_cast<std::uint64_t>(priv_));
        orphan_public();
        reset_race();
        action = "override";
      } else {
        pub_.push_back(static_cast<std::uint8_t>(me | (lead >= 3 && f != kFinderAi ? kDeep : 0)));
        action = "append";
      }
    }
    if (cfg_.trace) trace(ev, f, action, before, selfish_code());
  }

  // ---- lead-stubborn family: lead-stubborn, bsm ----

  std::size_t stubborn_code() const {
    if (priv_ == 0) return tie_ ? fork_code(fork_owner_) : 0;
    return 2 * static_cast<std::size_t>(priv_) + (tie_ ? 3 : 2);
  }

  void step_stubborn(std::uint64_t ev) {
    // priv_ holds the adversary's withheld blocks, published_ its blocks on
    // the competing branch.
    const std::size_t before = stubborn_code();
    visit(before);
    const int f = draw_finder();
    const std::uint8_t me = actor_of(f);
    if (f != kFinderAs) ++public_;
    const char* action;
    if (priv_ == 0 && tie_) {
      if (joins_private(f)) {
        credit(kAdversary, published_);
        orphan_public();
        action = "private-wins";
      } else {
        settle_public();
        action = "public-wins";
      }
      credit(me);
      reset_race();
    } else if (f == kFinderAs) {
      ++priv_;
      action = "withhold";
    } else if (priv_ == 0) {
      credit(me);
      action = "publish";
    } else {
      if (tie_ && uniform() < cfg_.params.gamma) {
        // block lands on the adversary's published branch, which becomes the public one
        credit(kAdversary, published_);
        orphan_public();
        published_ = 0;
        pub_.push_back(me);
        action = "extend-private";
      } else {
        pub_.push_back(static_cast<std::uint8_t>(me | (tie_ ? kDeep : 0)));
        action = "match";
      }
      --priv_;
      ++published_;
      tie_ = true;
      if (priv_ == 0) fork_owner_ = me;
    }
    if (cfg_.trace) trace(ev, f, action, before, stubborn_code());
  }

  void force_settle() {
    const bool stubborn = cfg_.strategy == Strategy::LeadStubborn || cfg_.strategy == Strategy::Bsm;
    if (cfg_.strategy == Strategy::Honest) return;
    const std::uint64_t adv_len = stubborn ? published_ + static_cast<std::uint64_t>(priv_) : static_cast<std::uint64_t>(priv_);
    if (adv_len > pub_.size()) {
      credit(kAdversary, adv_len);
      orphan_public();
    } else {
      settle_public();
    }
    reset_race();
  }

  SimStats finish() {
    SimStats s;
    s.seed = cfg_.seed;
    s.total_events = cfg_.rounds;
    s.public_blocks = public_;
    s.settled_blocks = credits_;
    for (auto c : credits_) s.main_chain_length += c;
    s.deep_public_total = deep_total_;
    s.deep_public_settled = deep_settled_;

    const double inv = 1.0 / static_cast<double>(cfg_.rounds);
    s.per_actor_reward.resize(n_ + 2);
    for (std::size_t i = 0; i < n_ + 2; ++i) s.per_actor_reward[i] = static_cast<double>(credits_[i]) * inv;
    if (accepted_power() > 0.0) s.bribes_transferred = cfg_.params.epsilon * static_cast<double>(credits_[0]);
    apply_bribe(s.per_actor_reward);
    s.batch_rewards = std::move(batch_rewards_);
    s.per_actor_se.resize(n_ + 2);
    for (std::size_t i = 0; i < n_ + 2; ++i) {
      std::vector<double> w(n_ + 2, 0.0);
      w[i] = 1.0;
      s.per_actor_se[i] = s.se_of(w);
    }

    std::size_t codes = 0;
    for (const auto& v : visit_batches_) codes = std::max(codes, v.size());
    const double nb = static_cast<double>(visit_batches_.size());
    for (std::size_t c = 0; c < codes; ++c) {
      StateVisit sv;
      sv.label = visit_label(c);
      double mean = 0.0, sq = 0.0;
      for (std::size_t b = 0; b < visit_batches_.size(); ++b) {
        const std::uint64_t k = c < visit_batches_[b].size() ? visit_batches_[b][c] : 0;
        sv.count += k;
        const double fr = static_cast<double>(k) / static_cast<double>(batch_lengths_[b]);
        mean += fr;
        sq += fr * fr;
      }
      if (sv.count == 0) continue;
      sv.frequency = static_cast<double>(sv.count) * inv;
      if (nb > 1) {
        mean /= nb;
        const double var = std::max(0.0, (sq - nb * mean * mean) / (nb - 1));
        sv.se = std::sqrt(var / nb);
      }
      s.visits.push_back(std::move(sv));
    }
    return s;
  }

  const SimConfig& cfg_;
  std::mt19937_64 rng_;
  std::size_t n_ = 0;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  bool bribery_ = false;

  std::int64_t priv_ = 0;
  std::uint64_t published_ = 0;
  std::vector<std::uint8_t> pub_;
  bool fork_ = false;
  bool tie_ = false;
  std::uint8_t fork_owner_ = 0;

  std::vector<std::uint64_t> credits_;
  std::vector<std::uint64_t> batch_credits_;
  std::vector<std::uint64_t> batch_visits_;
  std::vector<std::vector<std::uint64_t>> visit_batches_;
  std::vector<std::vector<double>> batch_rewards_;
  std::vector<std::uint64_t> batch_lengths_;
  std::size_t batches_ = 1;
  std::uint64_t batch_end_prev_ = 0;
  std::uint64_t public_ = 0;
  std::uint64_t deep_total_ = 0;
  std::uint64_t deep_settled_ = 0;
};

}  // namespace

void validate(const SimConfig& cfg) {
  validate(cfg.params);
  if (cfg.rounds < 1) throw Error(ErrorCode::InvalidParameter, "rounds must be at least 1");
  if (cfg.params.betas.size() > 120) throw Error(ErrorCode::Size, "at most 120 target pools can be simulated");
  const Strategy s = cfg.strategy;
  if (cfg.params.rho != 0.0 && s != Strategy::SemiSelfish && s != Strategy::Bssm)
    throw Error(ErrorCode::InvalidParameter, std::string("rho applies only to semi-selfish and bssm, not ") + strategy_name(s));
  if (cfg.params.epsilon != 0.0 && !is_bribery(s))
    throw Error(ErrorCode::InvalidParameter, std::string("epsilon applies only to bssm and bsm, not ") + strategy_name(s));
  if (is_bribery(s) && cfg.accept.size() != cfg.params.betas.size())
    throw Error(ErrorCode::InvalidParameter, "bribery strategies need one accept/deny flag per target");
}

SimStats simulate(const SimConfig& cfg) {
  validate(cfg);
  Engine e(cfg);
  return e.run();
}

double SimStats::reward(const Actor& a) const {
  switch (a.kind) {
    case ActorKind::Adversary:
      return per_actor_reward.at(0);
    case ActorKind::OtherPools:
      return per_actor_reward.at(1);
    case ActorKind::Target:
      if (a.index >= targets()) throw Error(ErrorCode::Domain, "target index out of range");
      return per_actor_reward[2 + a.index];
  }
  return 0.0;
}

double SimStats::se_of(const std::vector<double>& weights) const {
  const std::size_t nb = batch_rewards.size();
  if (nb < 2) return 0.0;
  double mean = 0.0, sq = 0.0;
  for (const auto& r : batch_rewards) {
    double v = 0.0;
    for (std::size_t i = 0; i < weights.size() && i < r.size(); ++i) v += weights[i] * r[i];
    mean += v;
    sq += v * v;
  }
  mean /= static_cast<double>(nb);
  const double var = std::max(0.0, (sq - static_cast<double>(nb) * mean * mean) / static_cast<double>(nb - 1));
  return std::sqrt(var / static_cast<double>(nb));
}

const StateVisit* SimStats::visit(const std::string& label) const {
  for (const auto& v : visits)
    if (v.label == label) return &v;
  return nullptr;
}

double SimStats::visit_frequency(const std::string& label) const {
  const StateVisit* v = visit(label);
  return v ? v->frequency : 0.0;
}

bool DeviationReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const Deviation& d) { return d.flagged; });
}

DeviationReport compare_closed_form(const SimStats& stats, const RewardVector& analytic, double sigma_limit) {
  const std::size_t n = stats.targets();
  const bool folded = analytic.targets.size() == 1 && n > 1;
  if (!folded && analytic.targets.size() != n)
    throw Error(ErrorCode::InvalidParameter, "analytic reward vector does not match the simulated targets");

  DeviationReport rep;
  auto add = [&](std::string name, const std::vector<double>& w, double an) {
    Deviation d;
    d.component = std::move(name);
    for (std::size_t i = 0; i < w.size(); ++i) d.simulated += w[i] * stats.per_actor_reward[i];
    d.analytic = an;
    d.abs_dev = d.simulated - an;
    d.rel_dev = an != 0.0 ? d.abs_dev / an : 0.0;
    d.se = stats.se_of(w);
    if (d.se > 0.0) d.sigmas = std::abs(d.abs_dev) / d.se;
    else d.sigmas = d.abs_dev == 0.0 ? 0.0 : INFINITY;
    d.flagged = d.sigmas > sigma_limit;
    rep.rows.push_back(std::move(d));
  };
  std::vector<double> w(n + 2, 0.0);
  w[0] = 1.0;
  add("adversary", w, analytic.adversary);
  w.assign(n + 2, 0.0);
  w[1] = 1.0;
  add("other", w, analytic.other);
  if (folded) {
    w.assign(n + 2, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[2 + i] = 1.0;
    add("targets", w, analytic.targets[0]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      w.assign(n + 2, 0.0);
      w[2 + i] = 1.0;
      add("b" + std::to_string(i + 1), w, analytic.targets[i]);
    }
  }
  return rep;
}

}  // namespace bribesim
