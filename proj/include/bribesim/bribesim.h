/* C interface to the bribery mining analyzer and simulator.
 *
 * Every function that can fail returns a bribesim_status. On failure a
 * thread-local message is available from bribesim_last_error(). Handles are
 * opaque and must be released with the matching *_destroy function.
 */
#ifndef BRIBESIM_BRIBESIM_H
#define BRIBESIM_BRIBESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BRIBESIM_BUILDING)
#define BRIBESIM_API __declspec(dllexport)
#else
#define BRIBESIM_API __declspec(dllimport)
#endif
#else
#define BRIBESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  BRIBESIM_OK = 0,
  BRIBESIM_ERR_INVALID_PARAMETER = 1,
  BRIBESIM_ERR_DOMAIN = 2,
  BRIBESIM_ERR_NUMERICAL = 3,
  BRIBESIM_ERR_STRUCTURE = 4,
  BRIBESIM_ERR_SIZE = 5,
  BRIBESIM_ERR_CONFIG = 6,
  BRIBESIM_ERR_IO = 7,
  BRIBESIM_ERR_NULL_ARGUMENT = 8,
  BRIBESIM_ERR_INTERNAL = 9
} bribesim_status;

typedef enum { BRIBESIM_MODEL_BSSM = 0, BRIBESIM_MODEL_BSM = 1 } bribesim_model;

typedef enum {
  BRIBESIM_STRATEGY_HONEST = 0,
  BRIBESIM_STRATEGY_SELFISH = 1,
  BRIBESIM_STRATEGY_SEMI_SELFISH = 2,
  BRIBESIM_STRATEGY_LEAD_STUBBORN = 3,
  BRIBESIM_STRATEGY_BSSM = 4,
  BRIBESIM_STRATEGY_BSM = 5
} bribesim_strategy;

typedef struct bribesim_params bribesim_params;
typedef struct bribesim_rewards bribesim_rewards;
typedef struct bribesim_analysis bribesim_analysis;
typedef struct bribesim_chain bribesim_chain;
typedef struct bribesim_sim_result bribesim_sim_result;
typedef struct bribesim_payoff bribesim_payoff;

typedef struct {
  double adversary;
  double other;
  double target_total;
  double bribe_paid;
  double tail_bound;
  int accept;
  size_t targets;
} bribesim_reward_view;

typedef struct {
  double p_public;
  double p_private;
  double p0o;
  double p0b;
  double p0a; /* always 0 under BSM */
} bribesim_winning_probs;

typedef struct {
  double selfish;
  double semi_selfish;
  double bribery_semi_selfish;
} bribesim_growth;

typedef struct {
  int depth;        /* truncation depth K, default 64 */
  double tolerance; /* balance residual, default 1e-12 */
} bribesim_solver_options;

typedef struct {
  bribesim_strategy strategy;
  uint64_t rounds;
  uint64_t seed;
  const int* accept; /* one flag per target, bribery strategies only */
  size_t accept_count;
  const char* trace_path; /* NULL disables tracing */
} bribesim_sim_options;

typedef struct {
  char component[32];
  double simulated;
  double analytic;
  double abs_dev;
  double rel_dev;
  double se;
  double sigmas;
  int flagged;
} bribesim_deviation;

typedef struct {
  int dilemma;
  int all_accept_is_nash;
} bribesim_dilemma;

BRIBESIM_API const char* bribesim_last_error(void);
BRIBESIM_API const char* bribesim_version(void);
BRIBESIM_API bribesim_solver_options bribesim_default_solver_options(void);

/* ---- parameters ---- */
BRIBESIM_API bribesim_status bribesim_params_create(bribesim_params** out);
BRIBESIM_API void bribesim_params_destroy(bribesim_params* p);
BRIBESIM_API bribesim_status bribesim_params_set(bribesim_params* p, double alpha, double rho, double gamma,
                                                 double epsilon);
BRIBESIM_API bribesim_status bribesim_params_set_betas(bribesim_params* p, const double* betas, size_t n);
BRIBESIM_API bribesim_status bribesim_params_validate(const bribesim_params* p);
/* Returns NULL once index runs past the last warning. */
BRIBESIM_API const char* bribesim_params_warning(const bribesim_params* p, bribesim_model model, size_t index);

BRIBESIM_API bribesim_status bribesim_rer(double r_new, double r_base, double* out);
BRIBESIM_API bribesim_status bribesim_growth_rates(const bribesim_params* p, bribesim_growth* out);
BRIBESIM_API bribesim_status bribesim_winning(const bribesim_params* p, bribesim_model model,
                                              bribesim_winning_probs* out);

/* ---- closed-form rewards ---- */
/* Targets are folded into one aggregate target. */
BRIBESIM_API bribesim_status bribesim_rewards_compute(const bribesim_params* p, bribesim_model model, int accept,
                                                      const bribesim_solver_options* opts, bribesim_rewards** out);
/* Per-target rewards for a decision profile (accept[i] != 0 means target i accepts). */
BRIBESIM_API bribesim_status bribesim_rewards_multi(const bribesim_params* p, bribesim_model model, const int* accept,
                                                    size_t n, const bribesim_solver_options* opts,
                                                    bribesim_rewards** out);
BRIBESIM_API void bribesim_rewards_destroy(bribesim_rewards* r);
BRIBESIM_API bribesim_status bribesim_rewards_view(const bribesim_rewards* r, bribesim_reward_view* out);
BRIBESIM_API bribesim_status bribesim_rewards_target(const bribesim_rewards* r, size_t i, double* out);

BRIBESIM_API bribesim_status bribesim_epsilon_threshold(const bribesim_params* p, bribesim_model model,
                                                        const bribesim_solver_options* opts, double* out);

/* One stationary solve yielding accept, deny and no-bribery baseline rewards.
 * The baseline folds the targets into the other pools (beta = 0). */
BRIBESIM_API bribesim_status bribesim_analyze(const bribesim_params* p, bribesim_model model,
                                              const bribesim_solver_options* opts, bribesim_analysis** out);
BRIBESIM_API void bribesim_analysis_destroy(bribesim_analysis* a);
BRIBESIM_API const bribesim_rewards* bribesim_analysis_accept(const bribesim_analysis* a);
BRIBESIM_API const bribesim_rewards* bribesim_analysis_deny(const bribesim_analysis* a);
BRIBESIM_API const bribesim_rewards* bribesim_analysis_baseline(const bribesim_analysis* a);
/* NaN when the adversary reward is zero. */
BRIBESIM_API double bribesim_analysis_threshold(const bribesim_analysis* a);
BRIBESIM_API bribesim_winning_probs bribesim_analysis_winning(const bribesim_analysis* a);
BRIBESIM_API double bribesim_analysis_residual(const bribesim_analysis* a);
BRIBESIM_API size_t bribesim_analysis_states(const bribesim_analysis* a);

/* ---- stationary chain ---- */
BRIBESIM_API bribesim_status bribesim_chain_solve(const bribesim_params* p, bribesim_model model,
                                                  const bribesim_solver_options* opts, bribesim_chain** out);
BRIBESIM_API void bribesim_chain_destroy(bribesim_chain* c);
BRIBESIM_API size_t bribesim_chain_size(const bribesim_chain* c);
BRIBESIM_API const char* bribesim_chain_label(const bribesim_chain* c, size_t i);
BRIBESIM_API double bribesim_chain_probability(const bribesim_chain* c, size_t i);
BRIBESIM_API double bribesim_chain_residual(const bribesim_chain* c);
BRIBESIM_API double bribesim_chain_tail_bound(const bribesim_chain* c);
/* Probability of the labelled state, 0 when the chain does not contain it. */
BRIBESIM_API double bribesim_chain_at(const bribesim_chain* c, const char* label);

/* ---- Monte Carlo ---- */
BRIBESIM_API bribesim_status bribesim_simulate(const bribesim_params* p, const bribesim_sim_options* opts,
                                               bribesim_sim_result** out);
BRIBESIM_API void bribesim_sim_destroy(bribesim_sim_result* s);
BRIBESIM_API const char* bribesim_sim_rng(const bribesim_sim_result* s);
BRIBESIM_API uint64_t bribesim_sim_events(const bribesim_sim_result* s);
BRIBESIM_API uint64_t bribesim_sim_main_chain_length(const bribesim_sim_result* s);
BRIBESIM_API uint64_t bribesim_sim_public_blocks(const bribesim_sim_result* s);
BRIBESIM_API double bribesim_sim_bribes(const bribesim_sim_result* s);
/* Actor slots: 0 adversary, 1 other pools, 2 + i target i. */
BRIBESIM_API size_t bribesim_sim_actors(const bribesim_sim_result* s);
BRIBESIM_API uint64_t bribesim_sim_settled(const bribesim_sim_result* s, size_t actor);
BRIBESIM_API double bribesim_sim_reward(const bribesim_sim_result* s, size_t actor);
BRIBESIM_API double bribesim_sim_reward_se(const bribesim_sim_result* s, size_t actor);
BRIBESIM_API size_t bribesim_sim_visit_count(const bribesim_sim_result* s);
BRIBESIM_API bribesim_status bribesim_sim_visit(const bribesim_sim_result* s, size_t i, const char** label,
                                                uint64_t* count, double* frequency, double* se);
/* Writes up to cap rows; *rows receives the number available. */
BRIBESIM_API bribesim_status bribesim_sim_compare(const bribesim_sim_result* s, const bribesim_rewards* analytic,
                                                  double sigma_limit, bribesim_deviation* out, size_t cap,
                                                  size_t* rows);

/* ---- multi-target game ---- */
BRIBESIM_API bribesim_status bribesim_payoff_compute(const bribesim_params* p, bribesim_model model,
                                                     const bribesim_solver_options* opts, bribesim_payoff** out);
BRIBESIM_API void bribesim_payoff_destroy(bribesim_payoff* m);
BRIBESIM_API size_t bribesim_payoff_targets(const bribesim_payoff* m);
/* 2^n profiles; profile 0 is all-accept, the last is all-deny. */
BRIBESIM_API size_t bribesim_payoff_profiles(const bribesim_payoff* m);
BRIBESIM_API int bribesim_payoff_accepts(const bribesim_payoff* m, size_t profile, size_t target);
/* RER of the target vs honest mining, as a fraction. */
BRIBESIM_API double bribesim_payoff_rer(const bribesim_payoff* m, size_t profile, size_t target);
BRIBESIM_API const bribesim_rewards* bribesim_payoff_rewards(const bribesim_payoff* m, size_t profile);
BRIBESIM_API int bribesim_payoff_is_nash(const bribesim_payoff* m, size_t profile);
BRIBESIM_API bribesim_dilemma bribesim_payoff_dilemma(const bribesim_payoff* m);

#ifdef __cplusplus
}
#endif

#endif /* BRIBESIM_BRIBESIM_H */
