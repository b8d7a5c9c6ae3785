#include "cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "cli/api.hpp"

namespace bribesim_cli {

namespace {

// ---------------------------------------------------------------- parsing

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v)) throw ConfigError("bad number '" + s + "' in " + what);
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

int parse_flag(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "a" || s == "accept" || s == "y" || s == "yes" || s == "true") return 1;
  if (s == "0" || s == "d" || s == "deny" || s == "n" || s == "no" || s == "false") return 0;
  throw ConfigError("accept flag must be accept/deny (or 1/0), got '" + s + "'");
}

}  // namespace

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("axis must look like name=start:stop:count or name=v1,v2");
  Axis a;
  a.name = spec.substr(0, eq);
  const std::string body = spec.substr(eq + 1);
  const std::string what = "axis " + a.name;
  if (body.find(':') != std::string::npos) {
    auto parts = split(body, ':');
    if (parts.size() != 3) throw ConfigError(what + ": range must be start:stop:count");
    const double lo = parse_number(parts[0], what), hi = parse_number(parts[1], what);
    const double cnt = parse_number(parts[2], what);
    if (cnt < 1 || cnt != std::floor(cnt) || cnt > 1e6) throw ConfigError(what + ": count must be a positive integer");
    const auto n = static_cast<std::size_t>(cnt);
    if (n == 1) {
      a.values = {lo};
    } else {
      for (std::size_t i = 0; i < n; ++i) a.values.push_back(i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1));
    }
  } else {
    for (const auto& tok : split(body, ',')) a.values.push_back(parse_number(tok, what));
  }
  if (a.values.empty()) throw ConfigError(what + " is empty");
  for (std::size_t i = 1; i < a.values.size(); ++i)
    if (!(a.values[i] > a.values[i - 1])) throw ConfigError(what + ": values must be strictly increasing");
  return a;
}

namespace {

// ---------------------------------------------------------------- helpers

struct Ctx {
  std::ostream& out;
  std::ostream& err;
};

std::string fixed(double v, int prec = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

std::string percent(double frac) {
  std::ostringstream os;
  os << std::showpos << std::fixed << std::setprecision(4) << 100.0 * frac << "%";
  return os.str();
}

ParamsPtr make_params(const RunConfig& c, bool ignore_rho, std::ostream* warn) {
  bribesim_params* raw = nullptr;
  check(bribesim_params_create(&raw));
  ParamsPtr p(raw);
  double rho = c.rho;
  if (ignore_rho && rho != 0.0) {
    if (warn) *warn << "warning: rho is ignored by the bsm model\n";
    rho = 0.0;
  }
  check(bribesim_params_set(p.get(), c.alpha, rho, c.gamma, c.epsilon));
  check(bribesim_params_set_betas(p.get(), c.betas.data(), c.betas.size()));
  check(bribesim_params_validate(p.get()));
  return p;
}

bribesim_solver_options solver_of(const RunConfig& c) { return {c.depth, c.tolerance}; }

bribesim_model api_model(const std::string& s) {
  if (s == "bssm") return BRIBESIM_MODEL_BSSM;
  if (s == "bsm") return BRIBESIM_MODEL_BSM;
  throw ConfigError("model must be bssm or bsm, got '" + s + "'");
}

void emit_warnings(const bribesim_params* p, bribesim_model m, std::ostream& err) {
  for (std::size_t i = 0;; ++i) {
    const char* w = bribesim_params_warning(p, m, i);
    if (!w) break;
    err << "warning: " << w << '\n';
  }
}

double total(const Rewards& r) { return r.view.adversary + r.view.other + r.view.target_total; }

// normalised share over power, minus one
double rer_honest(double reward, double tot, double power) {
  if (!(power > 0.0) || !(tot > 0.0)) return std::nan("");
  double v = 0.0;
  check(bribesim_rer(reward / tot, power, &v));
  return v;
}

double rer_shares(double r_new, double tot_new, double r_base, double tot_base) {
  if (!(r_base > 0.0)) return std::nan("");
  double v = 0.0;
  check(bribesim_rer(r_new / tot_new, r_base / tot_base, &v));
  return v;
}

std::string profile_name(const bribesim_payoff* m, std::size_t profile) {
  std::string s;
  for (std::size_t t = 0; t < bribesim_payoff_targets(m); ++t) s += bribesim_payoff_accepts(m, profile, t) ? 'A' : 'D';
  return s;
}

void write_output(const RunConfig& c, const SweepResult& r, std::ostream& fallback) {
  if (c.out.empty() || c.out == "-") {
    write_csv(fallback, r);
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ApiError(BRIBESIM_ERR_IO, "cannot open output file " + c.out);
  write_csv(f, r);
  if (!f) throw ApiError(BRIBESIM_ERR_IO, "failed writing " + c.out);
}

// ---------------------------------------------------------------- metrics

struct Metrics {
  std::vector<std::string> names;
  std::vector<double> values;
  void add(std::string n, double v) {
    names.push_back(std::move(n));
    values.push_back(v);
  }
};

struct Analysis {
  Rewards accept, deny, base;
  double threshold = 0.0;
  bribesim_winning_probs winning{};
  bribesim_growth growth{};
  double residual = 0.0;
  std::size_t states = 0;
};

Analysis analyze_point(const bribesim_params* p, bribesim_model m, const bribesim_solver_options& s) {
  bribesim_analysis* raw = nullptr;
  check(bribesim_analyze(p, m, &s, &raw));
  AnalysisPtr a(raw);
  Analysis out;
  out.accept = read_rewards(bribesim_analysis_accept(a.get()));
  out.deny = read_rewards(bribesim_analysis_deny(a.get()));
  out.base = read_rewards(bribesim_analysis_baseline(a.get()));
  out.threshold = bribesim_analysis_threshold(a.get());
  out.winning = bribesim_analysis_winning(a.get());
  out.residual = bribesim_analysis_residual(a.get());
  out.states = bribesim_analysis_states(a.get());
  check(bribesim_growth_rates(p, &out.growth));
  return out;
}

Metrics model_metrics(const Analysis& a, double alpha, double beta) {
  Metrics m;
  const double ta = total(a.accept), td = total(a.deny), tb = total(a.base);
  m.add("ra_accept", a.accept.view.adversary);
  m.add("ro_accept", a.accept.view.other);
  m.add("rb_accept", a.accept.view.target_total);
  m.add("bribe_accept", a.accept.view.bribe_paid);
  m.add("ra_deny", a.deny.view.adversary);
  m.add("ro_deny", a.deny.view.other);
  m.add("rb_deny", a.deny.view.target_total);
  m.add("ra_base", a.base.view.adversary);
  m.add("ro_base", a.base.view.other);
  m.add("rer_a_accept_vs_deny", rer_shares(a.accept.view.adversary, ta, a.deny.view.adversary, td));
  m.add("rer_b_accept_vs_deny", rer_shares(a.accept.view.target_total, ta, a.deny.view.target_total, td));
  m.add("rer_o_accept_vs_deny", rer_shares(a.accept.view.other, ta, a.deny.view.other, td));
  m.add("rer_a_accept_vs_base", rer_shares(a.accept.view.adversary, ta, a.base.view.adversary, tb));
  m.add("rer_a_deny_vs_base", rer_shares(a.deny.view.adversary, td, a.base.view.adversary, tb));
  m.add("rer_a_accept_vs_honest", rer_honest(a.accept.view.adversary, ta, alpha));
  m.add("rer_b_accept_vs_honest", rer_honest(a.accept.view.target_total, ta, beta));
  m.add("rer_a_deny_vs_honest", rer_honest(a.deny.view.adversary, td, alpha));
  m.add("rer_b_deny_vs_honest", rer_honest(a.deny.view.target_total, td, beta));
  m.add("epsilon_threshold", a.threshold);
  m.add("p_public", a.winning.p_public);
  m.add("p_private", a.winning.p_private);
  m.add("gr_sm", a.growth.selfish);
  m.add("gr_ssm", a.growth.semi_selfish);
  m.add("gr_bssm", a.growth.bribery_semi_selfish);
  m.add("tail_bound", a.accept.view.tail_bound);
  return m;
}

Metrics game_metrics(const bribesim_params* p, bribesim_model model, const bribesim_solver_options& s) {
  bribesim_payoff* raw = nullptr;
  check(bribesim_payoff_compute(p, model, &s, &raw));
  PayoffPtr m(raw);
  Metrics out;
  const std::size_t n = bribesim_payoff_targets(m.get());
  for (std::size_t prof = 0; prof < bribesim_payoff_profiles(m.get()); ++prof)
    for (std::size_t t = 0; t < n; ++t)
      out.add("rer_b" + std::to_string(t + 1) + "_" + profile_name(m.get(), prof), bribesim_payoff_rer(m.get(), prof, t));
  const bribesim_dilemma d = bribesim_payoff_dilemma(m.get());
  out.add("all_accept_nash", d.all_accept_is_nash);
  out.add("dilemma", d.dilemma);
  return out;
}

double target_sum(const RunConfig& c) {
  double s = 0.0;
  for (double b : c.betas) s += b;
  return s;
}

// ---------------------------------------------------------------- commands

int cmd_analyze(const RunConfig& c, Ctx& io) {
  const bribesim_model m = api_model(c.model);
  ParamsPtr p = make_params(c, m == BRIBESIM_MODEL_BSM, &io.err);
  emit_warnings(p.get(), m, io.err);
  const auto s = solver_of(c);
  const Analysis a = analyze_point(p.get(), m, s);
  bribesim_chain* rc = nullptr;
  check(bribesim_chain_solve(p.get(), m, &s, &rc));
  ChainPtr chain(rc);

  auto& o = io.out;
  const double beta = target_sum(c);
  o << "model      " << c.model << "\n";
  o << "alpha      " << c.alpha << "\nrho        " << (m == BRIBESIM_MODEL_BSM ? 0.0 : c.rho) << "\ngamma      "
    << c.gamma << "\nepsilon    " << c.epsilon << "\nbeta       " << beta << " (" << c.betas.size()
    << " target(s) aggregated)\n\n";
  o << "stationary states=" << a.states << " residual=" << sci(a.residual) << " K=" << c.depth
    << " tail_bound=" << sci(bribesim_chain_tail_bound(chain.get())) << "\n";
  o << "           p0=" << fixed(bribesim_chain_at(chain.get(), "0")) << " p0'o=" << fixed(bribesim_chain_at(chain.get(), "0'o"))
    << " p0'b=" << fixed(bribesim_chain_at(chain.get(), "0'b"));
  if (m == BRIBESIM_MODEL_BSSM) o << " p0'a=" << fixed(bribesim_chain_at(chain.get(), "0'a"));
  o << "\nwinning    P_public=" << fixed(a.winning.p_public) << " P_private=" << fixed(a.winning.p_private) << "\n\n";

  o << "rewards      adversary    other        targets      bribe\n";
  auto row = [&](const char* name, const Rewards& r) {
    o << std::left << std::setw(13) << name << std::setw(13) << fixed(r.view.adversary) << std::setw(13)
      << fixed(r.view.other) << std::setw(13) << fixed(r.view.target_total) << fixed(r.view.bribe_paid) << "\n";
  };
  row("accept", a.accept);
  row("deny", a.deny);
  row("no-bribery", a.base);
  o << std::right << "\n";

  const Metrics mm = model_metrics(a, c.alpha, beta);
  auto get = [&](const std::string& n) {
    auto it = std::find(mm.names.begin(), mm.names.end(), n);
    return mm.values[static_cast<std::size_t>(it - mm.names.begin())];
  };
  o << "rer accept vs deny      adversary " << percent(get("rer_a_accept_vs_deny")) << "  targets "
    << percent(get("rer_b_accept_vs_deny")) << "  other " << percent(get("rer_o_accept_vs_deny")) << "\n";
  o << "rer vs no-bribery       accept " << percent(get("rer_a_accept_vs_base")) << "  deny "
    << percent(get("rer_a_deny_vs_base")) << "\n";
  o << "rer vs honest (accept)  adversary " << percent(get("rer_a_accept_vs_honest")) << "  targets "
    << (beta > 0 ? percent(get("rer_b_accept_vs_honest")) : std::string("n/a")) << "\n";
  o << "rer vs honest (deny)    adversary " << percent(get("rer_a_deny_vs_honest")) << "  targets "
    << (beta > 0 ? percent(get("rer_b_deny_vs_honest")) : std::string("n/a")) << "\n";
  o << "epsilon threshold       " << fixed(a.threshold) << "\n";
  o << "growth                  sm=" << fixed(a.growth.selfish) << " ssm=" << fixed(a.growth.semi_selfish)
    << " bssm=" << fixed(a.growth.bribery_semi_selfish) << "\n";

  if (!c.out.empty()) {
    SweepResult r;
    r.header = mm.names;
    r.rows.push_back(mm.values);
    write_output(c, r, io.out);
  }
  return kExitOk;
}

void set_axis_value(RunConfig& c, const std::string& name, double v) {
  if (name == "alpha") c.alpha = v;
  else if (name == "gamma") c.gamma = v;
  else if (name == "epsilon") c.epsilon = v;
  else if (name == "rho") c.rho = v;
  else if (name == "beta") c.betas.at(0) = v;
  else c.betas.at(std::stoul(name.substr(4)) - 1) = v;
}

void check_axes(const RunConfig& c) {
  if (c.axes.empty() || c.axes.size() > 3) throw ConfigError("sweep needs between 1 and 3 --axis options");
  std::set<std::string> seen;
  for (const auto& a : c.axes) {
    const std::string& n = a.name;
    bool known = n == "alpha" || n == "gamma" || n == "epsilon" || n == "rho" || n == "beta";
    if (!known && n.rfind("beta", 0) == 0 && n.size() > 4 &&
        std::all_of(n.begin() + 4, n.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
      const unsigned long idx = std::stoul(n.substr(4));
      if (idx < 1 || idx > c.betas.size())
        throw ConfigError("axis " + n + " refers to a target that is not configured");
      known = true;
    }
    if (!known) throw ConfigError("cannot sweep '" + n + "'; axes are alpha, gamma, epsilon, rho, beta, betaN");
    if (n == "beta" && c.betas.size() != 1) throw ConfigError("axis beta needs exactly one target; use betaN");
    if (n == "rho" && c.model == "bsm") throw ConfigError("rho is fixed at 0 under the bsm model and cannot be swept");
    // --beta declares the targets, so it does not pin a beta axis
    if (n.rfind("beta", 0) != 0 && c.explicit_params.count(n))
      throw ConfigError("axis " + n + " sweeps a parameter that is also fixed by --" + n);
    if (!seen.insert(n).second) throw ConfigError("axis " + n + " given twice");
  }
  if ((seen.count("beta") || std::any_of(seen.begin(), seen.end(), [](const std::string& s) { return s.rfind("beta", 0) == 0; })) &&
      c.betas.empty())
    throw ConfigError("beta axes need --beta to declare the targets");
}

int cmd_sweep(const RunConfig& c, Ctx& io) {
  const SweepResult r = run_sweep(c);
  write_output(c, r, io.out);
  if (!c.out.empty() && c.out != "-") io.err << "wrote " << r.rows.size() << " rows to " << c.out << "\n";
  return kExitOk;
}

std::size_t actor_count(const bribesim_sim_result* s) { return bribesim_sim_actors(s); }

std::string actor_name(std::size_t i) {
  if (i == 0) return "adversary";
  if (i == 1) return "other";
  return "b" + std::to_string(i - 1);
}

bribesim_strategy strategy_of(const std::string& s) {
  if (s == "honest") return BRIBESIM_STRATEGY_HONEST;
  if (s == "selfish") return BRIBESIM_STRATEGY_SELFISH;
  if (s == "semi-selfish") return BRIBESIM_STRATEGY_SEMI_SELFISH;
  if (s == "lead-stubborn") return BRIBESIM_STRATEGY_LEAD_STUBBORN;
  if (s == "bssm") return BRIBESIM_STRATEGY_BSSM;
  if (s == "bsm") return BRIBESIM_STRATEGY_BSM;
  throw ConfigError("unknown strategy '" + s + "'");
}

int cmd_simulate(const RunConfig& c, Ctx& io) {
  const std::string strat_name = c.strategy.empty() ? c.model : c.strategy;
  const bribesim_strategy strat = strategy_of(strat_name);
  const bool bribery = strat == BRIBESIM_STRATEGY_BSSM || strat == BRIBESIM_STRATEGY_BSM;
  const bool uses_rho = strat == BRIBESIM_STRATEGY_SEMI_SELFISH || strat == BRIBESIM_STRATEGY_BSSM;
  RunConfig cc = c;
  if (!uses_rho && cc.rho != 0.0) {
    io.err << "warning: rho is ignored by the " << strat_name << " strategy\n";
    cc.rho = 0.0;
  }
  if (!bribery && cc.epsilon != 0.0) {
    io.err << "warning: epsilon is ignored by the " << strat_name << " strategy\n";
    cc.epsilon = 0.0;
  }
  std::vector<int> accept = c.accept;
  if (bribery && accept.empty()) accept.assign(c.betas.size(), 1);
  if (bribery && accept.size() != c.betas.size()) throw ConfigError("--accept needs one flag per target");
  if (!bribery) accept.clear();
  ParamsPtr p = make_params(cc, false, nullptr);

  bribesim_sim_options so{};
  so.strategy = strat;
  so.rounds = c.rounds;
  so.seed = c.seed;
  so.accept = accept.data();
  so.accept_count = accept.size();
  so.trace_path = c.trace.empty() ? nullptr : c.trace.c_str();
  bribesim_sim_result* raw = nullptr;
  check(bribesim_simulate(p.get(), &so, &raw));
  SimPtr sim(raw);
  const bribesim_sim_result* s = sim.get();

  auto& o = io.out;
  const double events = static_cast<double>(bribesim_sim_events(s));
  o << "strategy   " << strat_name << "\nrng        " << bribesim_sim_rng(s) << " seed=" << c.seed << "\n";
  o << "events     " << bribesim_sim_events(s) << "\nmain chain " << bribesim_sim_main_chain_length(s) << " ("
    << fixed(bribesim_sim_main_chain_length(s) / events) << " per event)\npublished  "
    << bribesim_sim_public_blocks(s) << " (" << fixed(bribesim_sim_public_blocks(s) / events)
    << " per event)\nbribes     " << fixed(bribesim_sim_bribes(s), 1) << "\n\n";
  o << "actor        settled      reward       se\n";
  for (std::size_t i = 0; i < actor_count(s); ++i)
    o << std::left << std::setw(13) << actor_name(i) << std::setw(13) << bribesim_sim_settled(s, i) << std::setw(13)
      << fixed(bribesim_sim_reward(s, i)) << sci(bribesim_sim_reward_se(s, i)) << std::right << "\n";

  o << "\nstate      visits       frequency    se\n";
  for (std::size_t i = 0; i < bribesim_sim_visit_count(s) && i < 16; ++i) {
    const char* label = nullptr;
    uint64_t cnt = 0;
    double fr = 0, se = 0;
    check(bribesim_sim_visit(s, i, &label, &cnt, &fr, &se));
    o << std::left << std::setw(11) << label << std::setw(13) << cnt << std::setw(13) << fixed(fr) << sci(se)
      << std::right << "\n";
  }

  // closed-form comparison where one exists
  RewardsPtr analytic;
  const auto sv = solver_of(c);
  bribesim_rewards* ar = nullptr;
  if (bribery) {
    check(bribesim_rewards_multi(p.get(), strat == BRIBESIM_STRATEGY_BSSM ? BRIBESIM_MODEL_BSSM : BRIBESIM_MODEL_BSM,
                                 accept.data(), accept.size(), &sv, &ar));
    analytic.reset(ar);
  }
  if (analytic) {
    std::vector<bribesim_deviation> rows(actor_count(s) + 1);
    std::size_t n = 0;
    check(bribesim_sim_compare(s, analytic.get(), 3.0, rows.data(), rows.size(), &n));
    o << "\nclosed form  simulated    analytic     deviation    sigmas\n";
    for (std::size_t i = 0; i < n && i < rows.size(); ++i) {
      const auto& d = rows[i];
      o << std::left << std::setw(13) << d.component << std::setw(13) << fixed(d.simulated) << std::setw(13)
        << fixed(d.analytic) << std::setw(13) << sci(d.abs_dev) << fixed(d.sigmas, 2) << (d.flagged ? "  > 3 sigma" : "")
        << std::right << "\n";
    }
  }

  if (!c.out.empty()) {
    SweepResult r;
    r.header = {"actor", "settled", "reward", "se"};
    for (std::size_t i = 0; i < actor_count(s); ++i)
      r.rows.push_back({static_cast<double>(i), static_cast<double>(bribesim_sim_settled(s, i)), bribesim_sim_reward(s, i),
                        bribesim_sim_reward_se(s, i)});
    write_output(c, r, io.out);
  }
  return kExitOk;
}

int cmd_dilemma(const RunConfig& c, Ctx& io) {
  const bribesim_model m = api_model(c.model);
  ParamsPtr p = make_params(c, m == BRIBESIM_MODEL_BSM, &io.err);
  const auto s = solver_of(c);
  bribesim_payoff* raw = nullptr;
  check(bribesim_payoff_compute(p.get(), m, &s, &raw));
  PayoffPtr pm(raw);
  const std::size_t n = bribesim_payoff_targets(pm.get());
  auto& o = io.out;
  o << "model " << c.model << ", RER of each target vs honest mining\n\n";
  o << std::left << std::setw(10) << "profile";
  for (std::size_t t = 0; t < n; ++t) o << std::setw(12) << ("b" + std::to_string(t + 1));
  o << "nash\n";
  for (std::size_t prof = 0; prof < bribesim_payoff_profiles(pm.get()); ++prof) {
    o << std::setw(10) << profile_name(pm.get(), prof);
    for (std::size_t t = 0; t < n; ++t) o << std::setw(12) << percent(bribesim_payoff_rer(pm.get(), prof, t));
    o << (bribesim_payoff_is_nash(pm.get(), prof) ? "*" : "") << "\n";
  }
  o << std::right;
  const bribesim_dilemma d = bribesim_payoff_dilemma(pm.get());
  const std::size_t last = bribesim_payoff_profiles(pm.get()) - 1;
  o << "\nall-accept equilibrium: " << (d.all_accept_is_nash ? "yes" : "no") << "\n";
  o << "dilemma: " << (d.dilemma ? "yes" : "no") << "\n";
  if (n == 1) {
    const bool dominant = bribesim_payoff_rer(pm.get(), 0, 0) >= bribesim_payoff_rer(pm.get(), 1, 0);
    o << "accept dominant: " << (dominant ? "yes" : "no") << "\n";
  }
  o << "winning condition (RER > 0):";
  for (std::size_t t = 0; t < n; ++t)
    o << " b" << t + 1 << " accept=" << (bribesim_payoff_rer(pm.get(), 0, t) > 0 ? "win" : "lose")
      << " deny=" << (bribesim_payoff_rer(pm.get(), last, t) > 0 ? "win" : "lose");
  o << "\n";

  if (!c.out.empty()) {
    SweepResult r;
    r.header = {"profile"};
    for (std::size_t t = 0; t < n; ++t) r.header.push_back("rer_b" + std::to_string(t + 1));
    r.header.insert(r.header.end(), {"adversary", "other", "nash"});
    for (std::size_t prof = 0; prof <= last; ++prof) {
      std::vector<double> row{static_cast<double>(prof)};
      for (std::size_t t = 0; t < n; ++t) row.push_back(bribesim_payoff_rer(pm.get(), prof, t));
      const Rewards rw = read_rewards(bribesim_payoff_rewards(pm.get(), prof));
      row.insert(row.end(), {rw.view.adversary, rw.view.other, static_cast<double>(bribesim_payoff_is_nash(pm.get(), prof))});
      r.rows.push_back(std::move(row));
    }
    write_output(c, r, io.out);
  }
  return kExitOk;
}

int cmd_growth(const RunConfig& c, Ctx& io) {
  ParamsPtr p = make_params(c, false, nullptr);
  bribesim_growth g{};
  check(bribesim_growth_rates(p.get(), &g));
  auto& o = io.out;
  o << "gr_sm    " << fixed(g.selfish, 9) << "\ngr_ssm   " << fixed(g.semi_selfish, 9) << "\ngr_bssm  "
    << fixed(g.bribery_semi_selfish, 9) << "\n";
  SweepResult r;
  r.header = {"alpha", "rho", "beta", "gr_sm", "gr_ssm", "gr_bssm"};
  std::vector<double> row{c.alpha, c.rho, target_sum(c), g.selfish, g.semi_selfish, g.bribery_semi_selfish};
  if (c.explicit_params.count("rounds")) {
    // published-on-discovery blocks per event under semi-selfish mining
    RunConfig sc = c;
    sc.epsilon = 0.0;
    ParamsPtr sp = make_params(sc, false, nullptr);
    bribesim_sim_options so{};
    so.strategy = c.rho > 0.0 ? BRIBESIM_STRATEGY_SEMI_SELFISH : BRIBESIM_STRATEGY_SELFISH;
    so.rounds = c.rounds;
    so.seed = c.seed;
    bribesim_sim_result* raw = nullptr;
    check(bribesim_simulate(sp.get(), &so, &raw));
    SimPtr sim(raw);
    const double ev = static_cast<double>(bribesim_sim_events(sim.get()));
    const double pub = bribesim_sim_public_blocks(sim.get()) / ev;
    const double main = bribesim_sim_main_chain_length(sim.get()) / ev;
    o << "simulated published rate " << fixed(pub, 6) << " (main chain " << fixed(main, 6) << " per event)\n";
    r.header.insert(r.header.end(), {"sim_published", "sim_main_chain"});
    row.insert(row.end(), {pub, main});
  }
  r.rows.push_back(std::move(row));
  if (!c.out.empty()) write_output(c, r, io.out);
  return kExitOk;
}

int exit_for(bribesim_status s) {
  switch (s) {
    case BRIBESIM_ERR_NUMERICAL:
    case BRIBESIM_ERR_STRUCTURE:
    case BRIBESIM_ERR_INTERNAL:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

}  // namespace

namespace {

// --config belongs to the top-level app; accept it after the subcommand too.
std::vector<std::string> hoist_config(int argc, const char* const* argv) {
  std::vector<std::string> head, rest;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      head.push_back(a);
      head.push_back(argv[++i]);
    } else if (a.rfind("--config=", 0) == 0) {
      head.push_back(a);
    } else {
      rest.push_back(a);
    }
  }
  head.insert(head.end(), rest.begin(), rest.end());
  return head;
}

}  // namespace

SweepResult run_sweep(const RunConfig& c) {
  check_axes(c);
  const bribesim_model m = api_model(c.model);
  const bool game = c.game || c.betas.size() > 1;
  const auto s = solver_of(c);

  SweepResult r;
  std::vector<std::size_t> idx(c.axes.size(), 0);
  while (true) {
    RunConfig cell = c;
    std::vector<double> row;
    for (std::size_t k = 0; k < c.axes.size(); ++k) {
      const double v = c.axes[k].values[idx[k]];
      set_axis_value(cell, c.axes[k].name, v);
      row.push_back(v);
    }
    ParamsPtr p;
    try {
      p = make_params(cell, m == BRIBESIM_MODEL_BSM, nullptr);
    } catch (const ApiError& e) {
      std::ostringstream os;
      os << "sweep cell (";
      for (std::size_t k = 0; k < c.axes.size(); ++k) os << (k ? ", " : "") << c.axes[k].name << "=" << row[k];
      os << "): " << e.what();
      throw ApiError(e.status(), os.str());
    }
    const Metrics mt = game ? game_metrics(p.get(), m, s) : model_metrics(analyze_point(p.get(), m, s), cell.alpha, target_sum(cell));
    if (r.header.empty()) {
      for (const auto& a : c.axes) r.header.push_back(a.name);
      r.header.insert(r.header.end(), mt.names.begin(), mt.names.end());
    }
    row.insert(row.end(), mt.values.begin(), mt.values.end());
    r.rows.push_back(std::move(row));

    std::size_t k = c.axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < c.axes[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) return r;
    }
    if (c.axes.empty()) return r;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bribery selfish-mining analyzer and simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI file with one section per command; flags override it");

  RunConfig cfg;
  std::vector<std::string> accept_raw, axes_raw;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--alpha", cfg.alpha, "adversary power, 0 < alpha < 0.5")->required();
    sub->add_option("--rho", cfg.rho, "share of adversary power mining honestly (bssm)");
    sub->add_option("--gamma", cfg.gamma, "share of other pools joining the private branch in a tie");
    sub->add_option("--epsilon", cfg.epsilon, "bribe fraction of the adversary reward");
    sub->add_option("--beta", cfg.betas, "target powers, comma separated")->delimiter(',');
    sub->add_option("--model", cfg.model, "bssm or bsm")->check(CLI::IsMember({"bssm", "bsm"}));
    sub->add_option("--accept", accept_raw, "per-target accept/deny flags, comma separated")->delimiter(',');
    sub->add_option("-K,--depth", cfg.depth, "ladder truncation depth");
    sub->add_option("--tol", cfg.tolerance, "stationary residual tolerance");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--rounds", cfg.rounds, "block events to simulate");
    sub->add_option("--out", cfg.out, "output CSV path ('-' for standard output)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "closed-form rewards, thresholds and growth at one point");
  CLI::App* sweep = app.add_subcommand("sweep", "closed-form metrics over a grid, written as CSV");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run with closed-form comparison");
  CLI::App* dilemma = app.add_subcommand("dilemma", "payoff matrix over accept/deny profiles");
  CLI::App* growth = app.add_subcommand("growth", "chain growth rates");
  for (CLI::App* sub : {analyze, sweep, simulate, dilemma, growth}) common(sub);
  sweep->add_option("--axis", axes_raw, "name=start:stop:count or name=v1,v2 (up to three)");
  sweep->add_flag("--game", cfg.game, "per-target payoff metrics (implied by several targets)");
  simulate->add_option("--strategy", cfg.strategy, "honest, selfish, semi-selfish, lead-stubborn, bssm or bsm");
  simulate->add_option("--trace", cfg.trace, "write a per-event trace to this file");

  try {
    auto args = hoist_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  for (const char* name : {"alpha", "rho", "gamma", "epsilon", "beta", "rounds"})
    if (sub->count(std::string("--") + name) > 0) cfg.explicit_params.insert(name);

  Ctx io{out, err};
  try {
    for (const auto& a : accept_raw) cfg.accept.push_back(parse_flag(a));
    for (const auto& a : axes_raw) cfg.axes.push_back(parse_axis(a));
    if (!cfg.accept.empty() && cfg.command != "simulate")
      err << "warning: --accept only affects simulate; analyze reports both variants\n";
    if (cfg.command == "analyze") return cmd_analyze(cfg, io);
    if (cfg.command == "sweep") return cmd_sweep(cfg, io);
    if (cfg.command == "simulate") return cmd_simulate(cfg, io);
    if (cfg.command == "dilemma") return cmd_dilemma(cfg, io);
    return cmd_growth(cfg, io);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ApiError& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.status());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace bribesim_cli
