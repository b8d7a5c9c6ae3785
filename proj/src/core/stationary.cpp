#include "core/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "core/error.hpp"

namespace bribesim {

std::size_t TransitionModel::add_state(std::string label, int level) {
  if (find(label)) throw Error(ErrorCode::Structure, "duplicate state label " + label);
  labels_.push_back(std::move(label));
  levels_.push_back(level);
  rows_.emplace_back();
  return labels_.size() - 1;
}

void TransitionModel::add(std::size_t from, std::size_t to, double p) {
  if (from >= size() || to >= size()) throw Error(ErrorCode::Structure, "transition references an unknown state");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::Structure, "transition probability outside [0, 1]");
  if (p == 0.0) return;
  auto& r = rows_[from];
  for (auto& e : r) {
    if (e.to == to) {
      e.p += p;
      return;
    }
  }
  r.push_back({to, p});
}

std::optional<std::size_t> TransitionModel::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

double TransitionModel::probability(std::size_t from, std::size_t to) const {
  for (const auto& e : row(from))
    if (e.to == to) return e.p;
  return 0.0;
}

void TransitionModel::check(double tol) const {
  const std::size_t n = size();
  if (n == 0) throw Error(ErrorCode::Structure, "empty transition model");
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& e : rows_[i]) {
      if (e.p < 0.0 || e.p > 1.0 + tol) throw Error(ErrorCode::Structure, "probability out of range in row " + labels_[i]);
      s += e.p;
    }
    if (std::abs(s - 1.0) > tol) {
      std::ostringstream os;
      os << "row " << labels_[i] << " sums to " << s;
      throw Error(ErrorCode::Structure, os.str());
    }
  }
  std::vector<std::vector<std::size_t>> rev(n);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : rows_[i]) rev[e.to].push_back(i);

  auto reach_all = [n](auto&& next) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      next(u, [&](std::size_t v) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          q.push_back(v);
        }
      });
    }
    return count == n;
  };
  bool fwd = reach_all([&](std::size_t u, auto&& visit) {
    for (const auto& e : rows_[u]) visit(e.to);
  });
  bool bwd = reach_all([&](std::size_t u, auto&& visit) {
    for (std::size_t v : rev[u]) visit(v);
  });
  if (!fwd || !bwd) throw Error(ErrorCode::Structure, "chain is reducible over its retained states");
}

TransitionModel TransitionModel::reachable_from(std::size_t start) const {
  const std::size_t n = size();
  if (start >= n) throw Error(ErrorCode::Structure, "start state out of range");
  std::vector<std::size_t> order{start};
  std::vector<char> seen(n, 0);
  seen[start] = 1;
  for (std::size_t head = 0; head < order.size(); ++head)
    for (const auto& e : rows_[order[head]])
      if (!seen[e.to]) {
        seen[e.to] = 1;
        order.push_back(e.to);
      }
  // keep the original relative order after the start state
  std::sort(order.begin() + 1, order.end());
  std::vector<std::size_t> idx(n, n);
  for (std::size_t i = 0; i < order.size(); ++i) idx[order[i]] = i;
  TransitionModel out(depth_, up_rate_);
  for (std::size_t s : order) out.add_state(labels_[s], levels_[s]);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& e : rows_[order[i]]) out.add(i, idx[e.to], e.p);
  return out;
}

TransitionModel TransitionModel::permuted(const std::vector<std::size_t>& perm) const {
  const std::size_t n = size();
  if (perm.size() != n) throw Error(ErrorCode::Structure, "permutation size mismatch");
  std::vector<std::size_t> inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || inv[perm[i]] != n) throw Error(ErrorCode::Structure, "not a permutation");
    inv[perm[i]] = i;
  }
  TransitionModel out(depth_, up_rate_);
  for (std::size_t i = 0; i < n; ++i) out.add_state(labels_[perm[i]], levels_[perm[i]]);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : rows_[perm[i]]) out.add(i, inv[e.to], e.p);
  return out;
}

double StationaryDistribution::at(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return probs[i];
  return 0.0;
}

double StationaryDistribution::mass_beyond(int level) const {
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (levels[i] > level) s += probs[i];
  return s;
}

double balance_residual(const TransitionModel& m, const std::vector<double>& pi) {
  const std::size_t n = m.size();
  std::vector<double> next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : m.row(i)) next[e.to] += pi[i] * e.p;
  double r = 0.0;
  for (std::size_t j = 0; j < n; ++j) r = std::max(r, std::abs(next[j] - pi[j]));
  return r;
}

namespace {

// Grassmann-Taksar-Heyman state reduction. Subtraction free, so deep ladder
// probabilities keep full relative precision.
std::vector<double> gth(const TransitionModel& m) {
  const std::size_t n = m.size();
  std::vector<double> a(n * n, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& e : m.row(i))
      if (e.to != i) at(i, e.to) = e.p;

  for (std::size_t k = n - 1; k >= 1; --k) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += at(k, j);
    if (!(s > 0.0)) throw Error(ErrorCode::Structure, "chain is reducible over its retained states");
    for (std::size_t i = 0; i < k; ++i) {
      double f = at(i, k);
      if (f == 0.0) continue;
      f /= s;
      at(i, k) = f;
      double* ri = &a[i * n];
      const double* rk = &a[k * n];
      for (std::size_t j = 0; j < k; ++j) ri[j] += f * rk[j];
    }
  }
  std::vector<double> pi(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double v = 0.0;
    for (std::size_t i = 0; i < k; ++i) v += pi[i] * at(i, k);
    pi[k] = v;
    total += v;
  }
  for (double& v : pi) v /= total;
  return pi;
}

std::vector<double> power_iterate(const TransitionModel& m, std::vector<double> pi, double tol, double& residual) {
  const std::size_t n = m.size();
  constexpr int kMaxIterations = 200000;
  std::vector<double> next(n);
  for (int it = 0; it < kMaxIterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& e : m.row(i)) next[e.to] += pi[i] * e.p;
    double s = 0.0;
    for (double v : next) s += v;
    for (double& v : next) v /= s;
    pi.swap(next);
    residual = balance_residual(m, pi);
    if (residual <= tol) return pi;
  }
  return pi;
}

}  // namespace

StationaryDistribution solve_stationary(const TransitionModel& m, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "solver tolerance must be positive");
  m.check();
  StationaryDistribution d;
  d.labels = m.labels();
  d.levels.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) d.levels.push_back(m.level(i));
  d.probs = gth(m);
  d.residual = balance_residual(m, d.probs);
  if (!(d.residual <= tol)) {
    d.probs = power_iterate(m, d.probs, tol, d.residual);
    d.used_fallback = true;
    if (!(d.residual <= tol)) {
      std::ostringstream os;
      os << "stationary solve did not converge: residual " << d.residual << " > " << tol;
      throw SolverError(os.str(), d.residual);
    }
  }
  d.tail_mass = truncation_tail_bound(m);
  return d;
}

double truncation_tail_bound(const TransitionModel& m) {
  // Above level 2 every state moves up with probability u and down exactly one
  // level otherwise, so level masses fall geometrically with ratio u / (1 - u).
  const double u = m.up_rate();
  if (m.depth() <= 0 || u <= 0.0) return 0.0;
  if (u >= 0.5) return 1.0;
  const double r = u / (1.0 - u);
  return std::min(1.0, std::pow(r, m.depth() - 1) / (1.0 - r));
}

}  // namespace bribesim
