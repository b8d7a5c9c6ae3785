#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "bribesim/bribesim.h"
#include "core/bsm.hpp"
#include "core/bssm.hpp"
#include "core/dilemma.hpp"
#include "core/error.hpp"
#include "core/montecarlo.hpp"
#include "core/params.hpp"
#include "core/stationary.hpp"

using namespace bribesim;

struct bribesim_params {
  StrategyParams p;
  std::vector<std::string> warnings;  // storage behind bribesim_params_warning
};
struct bribesim_rewards {
  RewardVector rv;
};
struct bribesim_analysis {
  bribesim_rewards accept, deny, baseline;
  double threshold = 0.0;
  bribesim_winning_probs winning{};
  double residual = 0.0;
  std::size_t states = 0;
};
struct bribesim_chain {
  StationaryDistribution dist;
  double tail_bound = 0.0;
};
struct bribesim_sim_result {
  SimStats stats;
};
struct bribesim_payoff {
  PayoffMatrix matrix;
  std::vector<bribesim_rewards> rewards;
  std::vector<char> nash;
  DilemmaReport report;
};

namespace {

thread_local std::string g_last_error;

bribesim_status fail(bribesim_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

bribesim_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidParameter:
      return BRIBESIM_ERR_INVALID_PARAMETER;
    case ErrorCode::Domain:
      return BRIBESIM_ERR_DOMAIN;
    case ErrorCode::Numerical:
      return BRIBESIM_ERR_NUMERICAL;
    case ErrorCode::Structure:
      return BRIBESIM_ERR_STRUCTURE;
    case ErrorCode::Size:
      return BRIBESIM_ERR_SIZE;
    case ErrorCode::Config:
      return BRIBESIM_ERR_CONFIG;
  }
  return BRIBESIM_ERR_INTERNAL;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
bribesim_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return BRIBESIM_OK;
  } catch (const IoError& e) {
    return fail(BRIBESIM_ERR_IO, e.what());
  } catch (const Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BRIBESIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BRIBESIM_ERR_INTERNAL, e.what());
  }
}

#define BRIBESIM_REQUIRE(ptr) \
  if (!(ptr)) return fail(BRIBESIM_ERR_NULL_ARGUMENT, #ptr " must not be null")

Model to_model(bribesim_model m) {
  if (m == BRIBESIM_MODEL_BSSM) return Model::Bssm;
  if (m == BRIBESIM_MODEL_BSM) return Model::Bsm;
  throw Error(ErrorCode::InvalidParameter, "unknown model");
}

SolverOptions to_solver(const bribesim_solver_options* o) {
  SolverOptions s;
  if (o) {
    s.depth = o->depth;
    s.tolerance = o->tolerance;
  }
  validate(s);
  return s;
}

Strategy to_strategy(bribesim_strategy s) {
  switch (s) {
    case BRIBESIM_STRATEGY_HONEST:
      return Strategy::Honest;
    case BRIBESIM_STRATEGY_SELFISH:
      return Strategy::Selfish;
    case BRIBESIM_STRATEGY_SEMI_SELFISH:
      return Strategy::SemiSelfish;
    case BRIBESIM_STRATEGY_LEAD_STUBBORN:
      return Strategy::LeadStubborn;
    case BRIBESIM_STRATEGY_BSSM:
      return Strategy::Bssm;
    case BRIBESIM_STRATEGY_BSM:
      return Strategy::Bsm;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown strategy");
}

bribesim_winning_probs winning_of(const StrategyParams& p, Model m) {
  bribesim_winning_probs w{};
  if (m == Model::Bssm) {
    const auto b = bssm_winning_probs(p);
    w = {b.p_public, b.p_private, b.p0o, b.p0b, b.p0a};
  } else {
    const auto b = bsm_winning_probs(p);
    w = {b.p_public, b.p_private, b.p0o, b.p0b, 0.0};
  }
  return w;
}

}  // namespace

extern "C" {

const char* bribesim_last_error(void) { return g_last_error.c_str(); }

const char* bribesim_version(void) { return "1.0.0"; }

bribesim_solver_options bribesim_default_solver_options(void) {
  SolverOptions s;
  return {s.depth, s.tolerance};
}

bribesim_status bribesim_params_create(bribesim_params** out) {
  BRIBESIM_REQUIRE(out);
  return guard([&] { *out = new bribesim_params{}; });
}

void bribesim_params_destroy(bribesim_params* p) { delete p; }

bribesim_status bribesim_params_set(bribesim_params* p, double alpha, double rho, double gamma, double epsilon) {
  BRIBESIM_REQUIRE(p);
  p->p.alpha = alpha;
  p->p.rho = rho;
  p->p.gamma = gamma;
  p->p.epsilon = epsilon;
  return BRIBESIM_OK;
}

bribesim_status bribesim_params_set_betas(bribesim_params* p, const double* betas, size_t n) {
  BRIBESIM_REQUIRE(p);
  if (n > 0 && !betas) return fail(BRIBESIM_ERR_NULL_ARGUMENT, "betas must not be null");
  return guard([&] { p->p.betas.assign(betas, betas + n); });
}

bribesim_status bribesim_params_validate(const bribesim_params* p) {
  BRIBESIM_REQUIRE(p);
  return guard([&] { validate(p->p); });
}

const char* bribesim_params_warning(const bribesim_params* p, bribesim_model model, size_t index) {
  if (!p) return nullptr;
  auto* mp = const_cast<bribesim_params*>(p);
  try {
    mp->warnings = warnings(p->p, to_model(model));
  } catch (...) {
    return nullptr;
  }
  return index < mp->warnings.size() ? mp->warnings[index].c_str() : nullptr;
}

bribesim_status bribesim_rer(double r_new, double r_base, double* out) {
  BRIBESIM_REQUIRE(out);
  return guard([&] { *out = rer(r_new, r_base); });
}

bribesim_status bribesim_growth_rates(const bribesim_params* p, bribesim_growth* out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    const auto g = chain_growth_rates(aggregated(p->p));
    *out = {g.selfish, g.semi_selfish, g.bribery_semi_selfish};
  });
}

bribesim_status bribesim_winning(const bribesim_params* p, bribesim_model model, bribesim_winning_probs* out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] { *out = winning_of(p->p, to_model(model)); });
}

bribesim_status bribesim_rewards_compute(const bribesim_params* p, bribesim_model model, int accept,
                                         const bribesim_solver_options* opts, bribesim_rewards** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    const SolverOptions s = to_solver(opts);
    const StrategyParams q = aggregated(p->p);
    auto r = std::make_unique<bribesim_rewards>();
    r->rv = to_model(model) == Model::Bssm ? bssm_rewards(q, accept != 0, s) : bsm_rewards(q, accept != 0, s);
    *out = r.release();
  });
}

bribesim_status bribesim_rewards_multi(const bribesim_params* p, bribesim_model model, const int* accept, size_t n,
                                       const bribesim_solver_options* opts, bribesim_rewards** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  if (n > 0 && !accept) return fail(BRIBESIM_ERR_NULL_ARGUMENT, "accept must not be null");
  return guard([&] {
    DecisionProfile d(accept, accept + n);
    auto r = std::make_unique<bribesim_rewards>();
    r->rv = multi_target_rewards(p->p, d, to_model(model), to_solver(opts));
    *out = r.release();
  });
}

void bribesim_rewards_destroy(bribesim_rewards* r) { delete r; }

bribesim_status bribesim_rewards_view(const bribesim_rewards* r, bribesim_reward_view* out) {
  BRIBESIM_REQUIRE(r);
  BRIBESIM_REQUIRE(out);
  const auto& v = r->rv;
  *out = {v.adversary, v.other, v.target_total(), v.bribe_paid, v.tail_bound, v.accept ? 1 : 0, v.targets.size()};
  return BRIBESIM_OK;
}

bribesim_status bribesim_rewards_target(const bribesim_rewards* r, size_t i, double* out) {
  BRIBESIM_REQUIRE(r);
  BRIBESIM_REQUIRE(out);
  if (i >= r->rv.targets.size()) return fail(BRIBESIM_ERR_DOMAIN, "target index out of range");
  *out = r->rv.targets[i];
  return BRIBESIM_OK;
}

bribesim_status bribesim_epsilon_threshold(const bribesim_params* p, bribesim_model model,
                                           const bribesim_solver_options* opts, double* out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    const SolverOptions s = to_solver(opts);
    const StrategyParams q = aggregated(p->p);
    *out = to_model(model) == Model::Bssm ? bssm_epsilon_threshold(q, s) : bsm_epsilon_threshold(q, s);
  });
}

bribesim_status bribesim_analyze(const bribesim_params* p, bribesim_model model, const bribesim_solver_options* opts,
                                 bribesim_analysis** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    const SolverOptions s = to_solver(opts);
    const Model m = to_model(model);
    const StrategyParams q = aggregated(p->p);
    StrategyParams base = q;
    base.betas = {0.0};
    auto a = std::make_unique<bribesim_analysis>();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (m == Model::Bssm) {
      const BssmOccupancy occ = bssm_occupancy(q, s);
      a->accept.rv = bssm_rewards(q, occ, true);
      a->deny.rv = bssm_rewards(q, occ, false);
      a->baseline.rv = bssm_rewards(base, false, s);
      a->threshold = bssm_adversary_reward(q, occ) > 0.0 ? bssm_epsilon_threshold(q, occ) : nan;
      a->residual = occ.dist.residual;
      a->states = occ.dist.probs.size();
    } else {
      const BsmOccupancy occ = bsm_occupancy(q, s);
      a->accept.rv = bsm_rewards(q, occ, true);
      a->deny.rv = bsm_rewards(q, occ, false);
      a->baseline.rv = bsm_rewards(base, false, s);
      a->threshold = bsm_adversary_reward(q, occ) > 0.0 ? bsm_epsilon_threshold(q, occ) : nan;
      a->residual = occ.dist.residual;
      a->states = occ.dist.probs.size();
    }
    a->winning = winning_of(q, m);
    *out = a.release();
  });
}

void bribesim_analysis_destroy(bribesim_analysis* a) { delete a; }
const bribesim_rewards* bribesim_analysis_accept(const bribesim_analysis* a) { return a ? &a->accept : nullptr; }
const bribesim_rewards* bribesim_analysis_deny(const bribesim_analysis* a) { return a ? &a->deny : nullptr; }
const bribesim_rewards* bribesim_analysis_baseline(const bribesim_analysis* a) { return a ? &a->baseline : nullptr; }
double bribesim_analysis_threshold(const bribesim_analysis* a) {
  return a ? a->threshold : std::numeric_limits<double>::quiet_NaN();
}
bribesim_winning_probs bribesim_analysis_winning(const bribesim_analysis* a) {
  return a ? a->winning : bribesim_winning_probs{};
}
double bribesim_analysis_residual(const bribesim_analysis* a) { return a ? a->residual : 0.0; }
size_t bribesim_analysis_states(const bribesim_analysis* a) { return a ? a->states : 0; }

bribesim_status bribesim_chain_solve(const bribesim_params* p, bribesim_model model,
                                     const bribesim_solver_options* opts, bribesim_chain** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    const SolverOptions s = to_solver(opts);
    const StrategyParams q = aggregated(p->p);
    const TransitionModel m =
        to_model(model) == Model::Bssm ? build_bssm_chain(q, s.depth) : build_bsm_chain(q, s.depth);
    auto c = std::make_unique<bribesim_chain>();
    c->dist = solve_stationary(m, s.tolerance);
    c->tail_bound = truncation_tail_bound(m);
    *out = c.release();
  });
}

void bribesim_chain_destroy(bribesim_chain* c) { delete c; }
size_t bribesim_chain_size(const bribesim_chain* c) { return c ? c->dist.probs.size() : 0; }
const char* bribesim_chain_label(const bribesim_chain* c, size_t i) {
  return c && i < c->dist.labels.size() ? c->dist.labels[i].c_str() : nullptr;
}
double bribesim_chain_probability(const bribesim_chain* c, size_t i) {
  return c && i < c->dist.probs.size() ? c->dist.probs[i] : 0.0;
}
double bribesim_chain_residual(const bribesim_chain* c) { return c ? c->dist.residual : 0.0; }
double bribesim_chain_tail_bound(const bribesim_chain* c) { return c ? c->tail_bound : 0.0; }
double bribesim_chain_at(const bribesim_chain* c, const char* label) {
  return c && label ? c->dist.at(label) : 0.0;
}

bribesim_status bribesim_simulate(const bribesim_params* p, const bribesim_sim_options* opts,
                                  bribesim_sim_result** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(opts);
  BRIBESIM_REQUIRE(out);
  if (opts->accept_count > 0 && !opts->accept) return fail(BRIBESIM_ERR_NULL_ARGUMENT, "accept must not be null");
  return guard([&] {
    SimConfig cfg;
    cfg.params = p->p;
    cfg.strategy = to_strategy(opts->strategy);
    cfg.accept.assign(opts->accept, opts->accept + opts->accept_count);
    cfg.rounds = opts->rounds;
    cfg.seed = opts->seed;
    validate(cfg);
    std::ofstream trace;
    if (opts->trace_path) {
      trace.open(opts->trace_path);
      if (!trace) throw IoError(std::string("cannot open trace file ") + opts->trace_path);
      trace << "event\tfinder\taction\tbefore\tafter\n";
      cfg.trace = &trace;
    }
    auto r = std::make_unique<bribesim_sim_result>();
    r->stats = simulate(cfg);
    *out = r.release();
  });
}

void bribesim_sim_destroy(bribesim_sim_result* s) { delete s; }
const char* bribesim_sim_rng(const bribesim_sim_result* s) { return s ? s->stats.rng.c_str() : nullptr; }
uint64_t bribesim_sim_events(const bribesim_sim_result* s) { return s ? s->stats.total_events : 0; }
uint64_t bribesim_sim_main_chain_length(const bribesim_sim_result* s) { return s ? s->stats.main_chain_length : 0; }
uint64_t bribesim_sim_public_blocks(const bribesim_sim_result* s) { return s ? s->stats.public_blocks : 0; }
double bribesim_sim_bribes(const bribesim_sim_result* s) { return s ? s->stats.bribes_transferred : 0.0; }
size_t bribesim_sim_actors(const bribesim_sim_result* s) { return s ? s->stats.settled_blocks.size() : 0; }
uint64_t bribesim_sim_settled(const bribesim_sim_result* s, size_t actor) {
  return s && actor < s->stats.settled_blocks.size() ? s->stats.settled_blocks[actor] : 0;
}
double bribesim_sim_reward(const bribesim_sim_result* s, size_t actor) {
  return s && actor < s->stats.per_actor_reward.size() ? s->stats.per_actor_reward[actor] : 0.0;
}
double bribesim_sim_reward_se(const bribesim_sim_result* s, size_t actor) {
  return s && actor < s->stats.per_actor_se.size() ? s->stats.per_actor_se[actor] : 0.0;
}
size_t bribesim_sim_visit_count(const bribesim_sim_result* s) { return s ? s->stats.visits.size() : 0; }

bribesim_status bribesim_sim_visit(const bribesim_sim_result* s, size_t i, const char** label, uint64_t* count,
                                   double* frequency, double* se) {
  BRIBESIM_REQUIRE(s);
  if (i >= s->stats.visits.size()) return fail(BRIBESIM_ERR_DOMAIN, "visit index out of range");
  const auto& v = s->stats.visits[i];
  if (label) *label = v.label.c_str();
  if (count) *count = v.count;
  if (frequency) *frequency = v.frequency;
  if (se) *se = v.se;
  return BRIBESIM_OK;
}

bribesim_status bribesim_sim_compare(const bribesim_sim_result* s, const bribesim_rewards* analytic,
                                     double sigma_limit, bribesim_deviation* out, size_t cap, size_t* rows) {
  BRIBESIM_REQUIRE(s);
  BRIBESIM_REQUIRE(analytic);
  BRIBESIM_REQUIRE(rows);
  return guard([&] {
    const DeviationReport rep = compare_closed_form(s->stats, analytic->rv, sigma_limit);
    *rows = rep.rows.size();
    for (size_t i = 0; i < rep.rows.size() && i < cap && out; ++i) {
      const auto& d = rep.rows[i];
      bribesim_deviation& o = out[i];
      std::memset(o.component, 0, sizeof o.component);
      std::strncpy(o.component, d.component.c_str(), sizeof o.component - 1);
      o.simulated = d.simulated;
      o.analytic = d.analytic;
      o.abs_dev = d.abs_dev;
      o.rel_dev = d.rel_dev;
      o.se = d.se;
      o.sigmas = d.sigmas;
      o.flagged = d.flagged ? 1 : 0;
    }
  });
}

bribesim_status bribesim_payoff_compute(const bribesim_params* p, bribesim_model model,
                                        const bribesim_solver_options* opts, bribesim_payoff** out) {
  BRIBESIM_REQUIRE(p);
  BRIBESIM_REQUIRE(out);
  return guard([&] {
    auto m = std::make_unique<bribesim_payoff>();
    m->matrix = payoff_matrix(p->p, to_model(model), to_solver(opts));
    for (const auto& e : m->matrix.entries) m->rewards.push_back({e.rewards});
    m->nash.assign(m->matrix.entries.size(), 0);
    for (const auto& d : find_pure_nash(m->matrix)) m->nash[m->matrix.index_of(d)] = 1;
    m->report = detect_dilemma(m->matrix);
    *out = m.release();
  });
}

void bribesim_payoff_destroy(bribesim_payoff* m) { delete m; }
size_t bribesim_payoff_targets(const bribesim_payoff* m) { return m ? m->matrix.targets() : 0; }
size_t bribesim_payoff_profiles(const bribesim_payoff* m) { return m ? m->matrix.entries.size() : 0; }
int bribesim_payoff_accepts(const bribesim_payoff* m, size_t profile, size_t target) {
  if (!m || profile >= m->matrix.entries.size() || target >= m->matrix.targets()) return 0;
  return m->matrix.entries[profile].profile[target] ? 1 : 0;
}
double bribesim_payoff_rer(const bribesim_payoff* m, size_t profile, size_t target) {
  if (!m || profile >= m->matrix.entries.size() || target >= m->matrix.targets())
    return std::numeric_limits<double>::quiet_NaN();
  return m->matrix.entries[profile].rer[target];
}
const bribesim_rewards* bribesim_payoff_rewards(const bribesim_payoff* m, size_t profile) {
  return m && profile < m->rewards.size() ? &m->rewards[profile] : nullptr;
}
int bribesim_payoff_is_nash(const bribesim_payoff* m, size_t profile) {
  return m && profile < m->nash.size() ? m->nash[profile] : 0;
}
bribesim_dilemma bribesim_payoff_dilemma(const bribesim_payoff* m) {
  if (!m) return {0, 0};
  return {m->report.dilemma ? 1 : 0, m->report.all_accept_is_nash ? 1 : 0};
}

}  // extern "C"
