#include "martin_games/oneshot.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "martin_games/errors.hpp"
#include "martin_games/lp.hpp"
#include "martin_games/rng.hpp"

namespace martin_games {

OneShotTensor make_tensor(std::vector<int> actions, std::vector<double> payoff) {
  OneShotTensor t;
  t.actions = std::move(actions);
  const int n = static_cast<int>(t.actions.size());
  t.strides.assign(n, 1);
  t.num_profiles = 1;
  for (int i = n - 1; i >= 0; --i) {
    t.strides[i] = t.num_profiles;
    t.num_profiles *= t.actions[i];
  }
  if (payoff.size() != static_cast<std::size_t>(t.num_profiles) * n)
    throw InvalidInputError("tensor payoff must have one entry per (profile, player)");
  for (double v : payoff)
    if (!std::isfinite(v)) throw InvalidInputError("tensor entries must be finite");
  t.payoff = std::move(payoff);
  return t;
}

OneShotTensor build_oneshot(const HistoryTree& tree, int node, const std::vector<double>& values) {
  const Game& game = tree.game();
  const int n = game.num_players();
  std::vector<int> actions(n);
  for (PlayerId i = 0; i < n; ++i) actions[i] = game.num_actions(i);
  std::vector<double> payoff(static_cast<std::size_t>(game.num_profiles()) * n, 0.0);
  if (tree.is_leaf(node)) throw IncompleteMartinError(tree.key(node));
  for (ProfileIndex a = 0; a < game.num_profiles(); ++a)
    for (int c = tree.child_begin(node, a); c < tree.child_end(node, a); ++c)
      for (PlayerId i = 0; i < n; ++i)
        payoff[static_cast<std::size_t>(a) * n + i] +=
            tree.step_probability(c) * values[static_cast<std::size_t>(c) * n + i];
  OneShotTensor t = make_tensor(std::move(actions), std::move(payoff));
  t.history = tree.key(node);
  return t;
}

std::vector<double> action_values(const OneShotTensor& t, const MixedProfile& x, PlayerId i) {
  const int n = t.num_players();
  std::vector<double> vals(t.actions[i], 0.0);
  for (ProfileIndex a = 0; a < t.num_profiles; ++a) {
    double w = 1.0;
    for (PlayerId j = 0; j < n && w != 0.0; ++j)
      if (j != i) w *= x[j][t.action_of(a, j)];
    if (w != 0.0) vals[t.action_of(a, i)] += w * t.at(a, i);
  }
  return vals;
}

std::vector<double> expected_payoffs(const OneShotTensor& t, const MixedProfile& x) {
  const int n = t.num_players();
  std::vector<double> out(n, 0.0);
  for (ProfileIndex a = 0; a < t.num_profiles; ++a) {
    double w = 1.0;
    for (PlayerId j = 0; j < n && w != 0.0; ++j) w *= x[j][t.action_of(a, j)];
    if (w == 0.0) continue;
    for (PlayerId i = 0; i < n; ++i) out[i] += w * t.at(a, i);
  }
  return out;
}

std::vector<double> regret(const OneShotTensor& t, const MixedProfile& x) {
  const int n = t.num_players();
  std::vector<double> out(n);
  for (PlayerId i = 0; i < n; ++i) {
    const auto vals = action_values(t, x, i);
    double current = 0.0;
    for (int a = 0; a < t.actions[i]; ++a) current += x[i][a] * vals[a];
    out[i] = *std::max_element(vals.begin(), vals.end()) - current;
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MixedAction clean_mix(std::vector<double> x) {
  double sum = 0.0;
  for (double& v : x) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    x[0] = 1.0;
    return x;
  }
  for (double& v : x) v /= sum;
  return x;
}

struct SideSolution {
  std::vector<double> strategy;
  bool alternative = false;
};

// One side of a matrix game by LP. Row side maximizes the guaranteed payoff.
template <class T>
SideSolution solve_side(const std::vector<std::vector<double>>& a, bool row_side, const T& tol) {
  const int m = static_cast<int>(a.size());
  const int k = static_cast<int>(a[0].size());
  double lowest = kInf;
  for (const auto& row : a)
    for (double v : row) lowest = std::min(lowest, v);
  auto entry = [&](int i, int j) -> T { return T(a[i][j]) - T(lowest) + T(1); };
  LinearProgram<T> lp;
  const int size = row_side ? m : k;
  lp.num_vars = size + 1;
  lp.objective.assign(size + 1, T(0));
  lp.objective[size] = row_side ? T(1) : T(-1);
  if (row_side) {
    for (int j = 0; j < k; ++j) {
      std::vector<T> row(size + 1);
      for (int i = 0; i < m; ++i) row[i] = entry(i, j);
      row[size] = T(-1);
      lp.add(std::move(row), Relation::kGreaterEqual, T(0));
    }
  } else {
    for (int i = 0; i < m; ++i) {
      std::vector<T> row(size + 1);
      for (int j = 0; j < k; ++j) row[j] = entry(i, j);
      row[size] = T(-1);
      lp.add(std::move(row), Relation::kLessEqual, T(0));
    }
  }
  std::vector<T> ones(size + 1, T(1));
  ones[size] = T(0);
  lp.add(std::move(ones), Relation::kEqual, T(1));
  const auto sol = solve_lp(lp, tol);
  if (sol.status != LpStatus::kOptimal) throw SolverError("matrix game LP did not reach an optimum");
  SideSolution out;
  out.strategy.resize(size);
  for (int i = 0; i < size; ++i) {
    if constexpr (std::is_same_v<T, double>) out.strategy[i] = sol.x[i];
    else out.strategy[i] = sol.x[i].get_d();
  }
  out.strategy = clean_mix(std::move(out.strategy));
  out.alternative = sol.alternative_optima;
  return out;
}

double row_guarantee(const std::vector<std::vector<double>>& a, const std::vector<double>& x) {
  double g = kInf;
  for (std::size_t j = 0; j < a[0].size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += x[i] * a[i][j];
    g = std::min(g, s);
  }
  return g;
}

double column_guarantee(const std::vector<std::vector<double>>& a, const std::vector<double>& y) {
  double g = -kInf;
  for (const auto& row : a) {
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += y[j] * row[j];
    g = std::max(g, s);
  }
  return g;
}

}  // namespace

SolveResult zero_sum_value(const std::vector<std::vector<double>>& a, const SolverConfig& config) {
  if (a.empty() || a[0].empty()) throw InvalidInputError("matrix game needs a nonempty matrix");
  SolveResult r;
  SideSolution rows, cols;
  if (config.exact_lp) {
    rows = solve_side<mpq_class>(a, true, mpq_class(0));
    cols = solve_side<mpq_class>(a, false, mpq_class(0));
  } else {
    rows = solve_side<double>(a, true, config.pivot_tolerance);
    cols = solve_side<double>(a, false, config.pivot_tolerance);
  }
  const double lo = row_guarantee(a, rows.strategy);
  const double hi = column_guarantee(a, cols.strategy);
  r.value = 0.5 * (lo + hi);
  r.lower = lo;
  r.upper = hi;
  r.correlated = r.value;
  r.duality_gap = hi - lo;
  r.strategies = {rows.strategy, cols.strategy};
  r.method = config.exact_lp ? "lp-exact" : "lp";
  r.nonunique = rows.alternative || cols.alternative;
  if (r.duality_gap > 1e-9) {
    r.certified = false;
    throw SolverError("matrix game duality gap " + std::to_string(r.duality_gap) + " above 1e-9",
                      r.duality_gap);
  }
  return r;
}

namespace {

// Matrix of player i's payoffs: rows = own actions, columns = joint opponent
// profiles in increasing profile order.
std::vector<std::vector<double>> coalition_matrix(const OneShotTensor& t, PlayerId i,
                                                  std::vector<ProfileIndex>* columns) {
  std::vector<ProfileIndex> cols;
  for (ProfileIndex a = 0; a < t.num_profiles; ++a)
    if (t.action_of(a, i) == 0) cols.push_back(a);
  std::vector<std::vector<double>> m(t.actions[i], std::vector<double>(cols.size()));
  for (int ai = 0; ai < t.actions[i]; ++ai)
    for (std::size_t c = 0; c < cols.size(); ++c) m[ai][c] = t.at(t.with_action(cols[c], i, ai), i);
  if (columns) *columns = std::move(cols);
  return m;
}

double best_reply_value(const OneShotTensor& t, const MixedProfile& x, PlayerId i, ActionId* arg) {
  const auto vals = action_values(t, x, i);
  int best = 0;
  for (int a = 1; a < static_cast<int>(vals.size()); ++a)
    if (vals[a] > vals[best]) best = a;
  if (arg) *arg = best;
  return vals[best];
}

// ---- exact minmax against two opponents with two actions each ----

using Poly = std::array<double, 4>;  // coefficients, low degree first

double eval(const Poly& p, double x) { return ((p[3] * x + p[2]) * x + p[1]) * x + p[0]; }

Poly mul(const Poly& a, const Poly& b) {
  Poly c{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Poly sub(const Poly& a, const Poly& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Poly derivative(const Poly& p) { return {p[1], 2 * p[2], 3 * p[3], 0.0}; }

bool is_zero(const Poly& p) {
  for (double c : p)
    if (std::abs(c) > 1e-15) return false;
  return true;
}

void quadratic_roots(const Poly& p, std::vector<double>& out) {
  const double a = p[2], b = p[1], c = p[0];
  if (std::abs(a) <= 1e-15) {
    if (std::abs(b) > 1e-15) out.push_back(-c / b);
    return;
  }
  const double disc = b * b - 4 * a * c;
  if (disc < 0.0) {
    out.push_back(-b / (2 * a));  // closest approach; harmless extra candidate
    return;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  out.push_back(q / a);
  if (q != 0.0) out.push_back(c / q);
}

// Real roots in [0, 1] of a polynomial of degree <= 3, plus its critical points.
void roots_in_unit(const Poly& p, std::vector<double>& out) {
  if (is_zero(p)) return;
  std::vector<double> crit;
  if (std::abs(p[3]) > 1e-15) quadratic_roots(derivative(p), crit);
  else if (std::abs(p[2]) > 1e-15) crit.push_back(-p[1] / (2 * p[2]));
  else if (std::abs(p[1]) > 1e-15) {
    out.push_back(-p[0] / p[1]);
    return;
  } else {
    return;
  }
  std::vector<double> pts{0.0, 1.0};
  for (double c : crit)
    if (c > 0.0 && c < 1.0) {
      pts.push_back(c);
      out.push_back(c);
    }
  std::sort(pts.begin(), pts.end());
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double lo = pts[k], hi = pts[k + 1];
    double flo = eval(p, lo), fhi = eval(p, hi);
    if (flo == 0.0) out.push_back(lo);
    if (fhi == 0.0) out.push_back(hi);
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = eval(p, mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
}

struct Rational {
  Poly num;
  Poly den;
};

class TwoByTwoMinmax {
 public:
  // u[a][b][c]: player i's payoff for own action a, opponent actions b (first), c (second).
  explicit TwoByTwoMinmax(std::vector<std::array<std::array<double, 2>, 2>> u) : u_(std::move(u)) {}

  // Returns value, p = P(first opponent plays 1), q = P(second opponent plays 1).
  double solve(double& best_p, double& best_q) const {
    const int m = static_cast<int>(u_.size());
    // c_a(p) + d_a(p) q with c, e = c + d linear in p.
    std::vector<Poly> c(m), e(m);
    for (int a = 0; a < m; ++a) {
      c[a] = {u_[a][0][0], u_[a][1][0] - u_[a][0][0], 0, 0};
      e[a] = {u_[a][0][1], u_[a][1][1] - u_[a][0][1], 0, 0};
    }
    std::vector<Rational> family;
    const Poly one{1, 0, 0, 0};
    for (int a = 0; a < m; ++a) {
      family.push_back({c[a], one});
      family.push_back({e[a], one});
    }
    std::vector<double> cand{0.0, 1.0};
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const Poly da = sub(e[a], c[a]), db = sub(e[b], c[b]);
        const Poly den = sub(db, da);
        if (is_zero(den)) continue;
        const Poly num = sub(mul(c[a], db), mul(c[b], da));
        family.push_back({num, den});
        roots_in_unit(den, cand);
        roots_in_unit(sub(mul(derivative(num), den), mul(num, derivative(den))), cand);
      }
    for (std::size_t x = 0; x < family.size(); ++x)
      for (std::size_t y = x + 1; y < family.size(); ++y)
        roots_in_unit(sub(mul(family[x].num, family[y].den), mul(family[y].num, family[x].den)), cand);
    for (int g = 1; g < 64; ++g) cand.push_back(g / 64.0);

    double best = kInf;
    best_p = 0.0;
    best_q = 0.0;
    for (double p : cand) {
      if (!(p >= 0.0 && p <= 1.0)) {
        if (p > -1e-9 && p < 0.0) p = 0.0;
        else if (p > 1.0 && p < 1.0 + 1e-9) p = 1.0;
        else continue;
      }
      double q = 0.0;
      const double v = inner(p, q);
      if (v < best - 1e-15 || (std::abs(v - best) <= 1e-15 && p < best_p)) {
        best = v;
        best_p = p;
        best_q = q;
      }
    }
    polish(best, best_p, best_q);
    return best;
  }

  // min over q of max over a; exact via the breakpoints of a convex PL function.
  double inner(double p, double& arg_q) const {
    const int m = static_cast<int>(u_.size());
    std::vector<double> cs(m), ds(m);
    for (int a = 0; a < m; ++a) {
      cs[a] = (1 - p) * u_[a][0][0] + p * u_[a][1][0];
      ds[a] = (1 - p) * u_[a][0][1] + p * u_[a][1][1] - cs[a];
    }
    auto upper = [&](double q) {
      double v = -kInf;
      for (int a = 0; a < m; ++a) v = std::max(v, cs[a] + ds[a] * q);
      return v;
    };
    double best = upper(0.0);
    arg_q = 0.0;
    auto consider = [&](double q) {
      if (!(q > 0.0 && q <= 1.0)) return;
      const double v = upper(q);
      if (v < best) {
        best = v;
        arg_q = q;
      }
    };
    consider(1.0);
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b)
        if (ds[a] != ds[b]) consider((cs[a] - cs[b]) / (ds[b] - ds[a]));
    return best;
  }

 private:
  void polish(double& best, double& best_p, double& best_q) const {
    // Golden-section refinement around the best candidate; only accepted if lower.
    double lo = std::max(0.0, best_p - 1.0 / 64), hi = std::min(1.0, best_p + 1.0 / 64);
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo), q1 = 0, q2 = 0;
    double f1 = inner(x1, q1), f2 = inner(x2, q2);
    for (int it = 0; it < 80; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = inner(x1, q1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = inner(x2, q2);
      }
    }
    double q = 0;
    const double p = 0.5 * (lo + hi);
    const double f = inner(p, q);
    if (f < best - 1e-15) {
      best = f;
      best_p = p;
      best_q = q;
    }
  }

  std::vector<std::array<std::array<double, 2>, 2>> u_;
};

// Value of the best reply against a product profile of the opponents.
double product_value(const OneShotTensor& t, const MixedProfile& x, PlayerId i) {
  return best_reply_value(t, x, i, nullptr);
}

MixedProfile default_profile(const OneShotTensor& t) {
  MixedProfile x;
  for (int k : t.actions) x.push_back(pure_action(k, 0));
  return x;
}

}  // namespace

SolveResult minmax_vs_independent(const OneShotTensor& t, PlayerId i, const SolverConfig& config) {
  const int n = t.num_players();
  std::vector<PlayerId> active;
  for (PlayerId j = 0; j < n; ++j)
    if (j != i && t.actions[j] > 1) active.push_back(j);
  SolveResult r;
  MixedProfile x = default_profile(t);

  // Correlated coalition value; equals the one-shot maxmin by the minimax theorem.
  const auto coalition = coalition_matrix(t, i, nullptr);
  const SolveResult corr = zero_sum_value(coalition, config);
  r.correlated = corr.value;

  if (active.empty()) {
    r.method = "pure";
    r.upper = r.lower = product_value(t, x, i);
  } else if (active.size() == 1) {
    const PlayerId j = active[0];
    std::vector<std::vector<double>> m(t.actions[i], std::vector<double>(t.actions[j]));
    for (int ai = 0; ai < t.actions[i]; ++ai)
      for (int aj = 0; aj < t.actions[j]; ++aj)
        m[ai][aj] = t.at(t.with_action(t.with_action(0, i, ai), j, aj), i);
    const SolveResult zs = zero_sum_value(m, config);
    x[j] = zs.strategies[1];
    r.method = "lp";
    r.nonunique = zs.nonunique;
    r.upper = product_value(t, x, i);
    r.lower = std::min(zs.lower, r.upper);
  } else if (active.size() == 2 && t.actions[active[0]] == 2 && t.actions[active[1]] == 2) {
    const PlayerId j = active[0], k = active[1];
    std::vector<std::array<std::array<double, 2>, 2>> u(t.actions[i]);
    for (int ai = 0; ai < t.actions[i]; ++ai)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          u[ai][b][c] = t.at(t.with_action(t.with_action(t.with_action(0, i, ai), j, b), k, c), i);
    const TwoByTwoMinmax solver(std::move(u));
    double p = 0, q = 0;
    solver.solve(p, q);
    x[j] = {1 - p, p};
    x[k] = {1 - q, q};
    r.method = "analytic";
    r.upper = product_value(t, x, i);
    r.lower = r.upper;
  } else {
    // Multistart coordinate descent; each step is an exact matrix game for one opponent.
    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(i) + 1);
    std::vector<MixedProfile> starts;
    MixedProfile uniform = x;
    for (PlayerId j : active) uniform[j] = uniform_action(t.actions[j]);
    starts.push_back(uniform);
    starts.push_back(x);
    for (int s = 0; s < config.multistart; ++s) {
      MixedProfile y = x;
      for (PlayerId j : active) {
        MixedAction w(t.actions[j]);
        for (double& v : w) v = -std::log(1.0 - rng.uniform());
        y[j] = clean_mix(w);
      }
      starts.push_back(y);
    }
    double best = kInf;
    for (MixedProfile y : starts) {
      double current = product_value(t, y, i);
      for (int sweep = 0; sweep < 200; ++sweep) {
        const double before = current;
        for (PlayerId j : active) {
          std::vector<std::vector<double>> m(t.actions[i], std::vector<double>(t.actions[j]));
          for (int aj = 0; aj < t.actions[j]; ++aj) {
            MixedProfile z = y;
            z[j] = pure_action(t.actions[j], aj);
            const auto vals = action_values(t, z, i);
            for (int ai = 0; ai < t.actions[i]; ++ai) m[ai][aj] = vals[ai];
          }
          const SolveResult zs = zero_sum_value(m, config);
          MixedProfile z = y;
          z[j] = zs.strategies[1];
          const double v = product_value(t, z, i);
          if (v < current) {
            current = v;
            y = z;
          }
        }
        if (before - current <= 1e-13) break;
      }
      if (current < best) {
        best = current;
        x = y;
      }
    }
    r.method = "coordinate-descent";
    r.upper = best;
    r.lower = std::min(r.correlated, best);
  }
  r.value = r.upper;
  r.certified = r.upper - r.lower <= config.certification_tolerance;
  ActionId reply = 0;
  best_reply_value(t, x, i, &reply);
  x[i] = pure_action(t.actions[i], reply);
  r.strategies = std::move(x);
  return r;
}

SolveResult maxmin_oneshot(const OneShotTensor& t, PlayerId i, const SolverConfig& config) {
  std::vector<ProfileIndex> cols;
  const auto m = coalition_matrix(t, i, &cols);
  SolveResult zs = zero_sum_value(m, config);
  // Prefer the first pure action that already attains the value.
  for (int ai = 0; ai < t.actions[i]; ++ai) {
    const double worst = *std::min_element(m[ai].begin(), m[ai].end());
    if (worst >= zs.lower - 1e-12) {
      zs.strategies[0] = pure_action(t.actions[i], ai);
      zs.lower = std::min(zs.lower, worst);
      break;
    }
  }
  SolveResult r;
  r.value = zs.lower;
  r.lower = zs.lower;
  r.upper = zs.upper;
  r.correlated = zs.value;
  r.duality_gap = zs.duality_gap;
  r.method = zs.method;
  r.nonunique = zs.nonunique;
  // Lexicographically first pure minimizer against x_i.
  std::size_t worst = 0;
  double worst_value = kInf;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    double v = 0.0;
    for (int ai = 0; ai < t.actions[i]; ++ai) v += zs.strategies[0][ai] * m[ai][c];
    if (v < worst_value) {
      worst_value = v;
      worst = c;
    }
  }
  MixedProfile x;
  for (PlayerId j = 0; j < t.num_players(); ++j)
    x.push_back(j == i ? zs.strategies[0] : pure_action(t.actions[j], t.action_of(cols[worst], j)));
  r.strategies = std::move(x);
  r.value = worst_value;
  r.lower = std::min(r.lower, worst_value);
  return r;
}

namespace {

SolveResult finish(const OneShotTensor& t, MixedProfile x, const std::string& method) {
  SolveResult r;
  r.regret = regret(t, x);
  r.value = *std::max_element(r.regret.begin(), r.regret.end());
  r.lower = r.upper = r.value;
  r.strategies = std::move(x);
  r.method = method;
  return r;
}

bool accept(const std::vector<double>& reg, double tol) {
  for (double v : reg)
    if (!(v <= tol)) return false;
  return true;
}

// Support enumeration for two players; each support pair is an LP feasibility problem.
bool bimatrix_support_enumeration(const OneShotTensor& t, double tol, const SolverConfig& config,
                                  MixedProfile& out) {
  const int m = t.actions[0], k = t.actions[1];
  if (m + k > 16) return false;
  double lowest = kInf;
  for (double v : t.payoff) lowest = std::min(lowest, v);
  auto b = [&](int r, int c, PlayerId p) { return t.at(r * t.strides[0] + c * t.strides[1], p) - lowest + 1.0; };
  std::vector<std::pair<int, int>> order;
  for (int s1 = 1; s1 < (1 << m); ++s1)
    for (int s2 = 1; s2 < (1 << k); ++s2)
      if (std::popcount(static_cast<unsigned>(s1)) + std::popcount(static_cast<unsigned>(s2)) > 2)
        order.emplace_back(s1, s2);
  std::stable_sort(order.begin(), order.end(), [](auto x, auto y) {
    return std::popcount(static_cast<unsigned>(x.first)) + std::popcount(static_cast<unsigned>(x.second)) <
           std::popcount(static_cast<unsigned>(y.first)) + std::popcount(static_cast<unsigned>(y.second));
  });
  for (auto [s1, s2] : order) {
    // vars: x (m), y (k), u, v
    LinearProgram<double> lp;
    lp.num_vars = m + k + 2;
    lp.objective.assign(lp.num_vars, 0.0);
    for (int r = 0; r < m; ++r) {
      std::vector<double> row(lp.num_vars, 0.0);
      for (int c = 0; c < k; ++c) row[m + c] = b(r, c, 0);
      row[m + k] = -1.0;
      lp.add(row, (s1 >> r) & 1 ? Relation::kEqual : Relation::kLessEqual, 0.0);
      if (!((s1 >> r) & 1)) {
        std::vector<double> zero(lp.num_vars, 0.0);
        zero[r] = 1.0;
        lp.add(zero, Relation::kEqual, 0.0);
      }
    }
    for (int c = 0; c < k; ++c) {
      std::vector<double> row(lp.num_vars, 0.0);
      for (int r = 0; r < m; ++r) row[r] = b(r, c, 1);
      row[m + k + 1] = -1.0;
      lp.add(row, (s2 >> c) & 1 ? Relation::kEqual : Relation::kLessEqual, 0.0);
      if (!((s2 >> c) & 1)) {
        std::vector<double> zero(lp.num_vars, 0.0);
        zero[m + c] = 1.0;
        lp.add(zero, Relation::kEqual, 0.0);
      }
    }
    std::vector<double> sx(lp.num_vars, 0.0), sy(lp.num_vars, 0.0);
    for (int r = 0; r < m; ++r) sx[r] = 1.0;
    for (int c = 0; c < k; ++c) sy[m + c] = 1.0;
    lp.add(sx, Relation::kEqual, 1.0);
    lp.add(sy, Relation::kEqual, 1.0);
    const auto sol = solve_lp(lp, config.pivot_tolerance);
    if (sol.status != LpStatus::kOptimal) continue;
    MixedProfile x{clean_mix({sol.x.begin(), sol.x.begin() + m}),
                   clean_mix({sol.x.begin() + m, sol.x.begin() + m + k})};
    if (accept(regret(t, x), tol)) {
      out = std::move(x);
      return true;
    }
  }
  return false;
}

// Players with at most two actions: enumerate which players mix; the others
// play pure actions. Indifference conditions are multilinear in the mixing
// probabilities and are solved in closed form for up to three mixers.
class BinaryEnumerator {
 public:
  BinaryEnumerator(const OneShotTensor& t, double tol) : t_(t), tol_(tol) {}

  bool run(MixedProfile& out) {
    const int n = t_.num_players();
    std::vector<PlayerId> binary;
    for (PlayerId j = 0; j < n; ++j)
      if (t_.actions[j] == 2) binary.push_back(j);
    const int b = static_cast<int>(binary.size());
    if (b > 12) return false;
    std::vector<int> masks;
    for (int mask = 1; mask < (1 << b); ++mask)
      if (std::popcount(static_cast<unsigned>(mask)) <= 3) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(), [](int x, int y) {
      return std::popcount(static_cast<unsigned>(x)) < std::popcount(static_cast<unsigned>(y));
    });
    for (int mask : masks) {
      std::vector<PlayerId> mixers, fixed;
      for (int k = 0; k < b; ++k) ((mask >> k) & 1 ? mixers : fixed).push_back(binary[k]);
      const int f = static_cast<int>(fixed.size());
      for (int assignment = 0; assignment < (1 << f); ++assignment) {
        MixedProfile x;
        for (PlayerId j = 0; j < n; ++j) x.push_back(pure_action(t_.actions[j], 0));
        for (int k = 0; k < f; ++k) x[fixed[k]] = pure_action(2, (assignment >> (f - 1 - k)) & 1);
        if (solve(x, mixers, out)) return true;
      }
    }
    return false;
  }

 private:
  // u_j(1) - u_j(0) given x.
  double diff(const MixedProfile& x, PlayerId j) const {
    const auto v = action_values(t_, x, j);
    return v[1] - v[0];
  }

  static void set_p(MixedProfile& x, PlayerId j, double p) { x[j] = {1.0 - p, p}; }

  bool check(MixedProfile x, const std::vector<PlayerId>& mixers, const std::vector<double>& p,
             MixedProfile& out) const {
    for (std::size_t k = 0; k < mixers.size(); ++k) {
      double v = p[k];
      if (!(v > -1e-9 && v < 1 + 1e-9)) return false;
      set_p(x, mixers[k], std::clamp(v, 0.0, 1.0));
    }
    if (!accept(regret(t_, x), tol_)) return false;
    out = std::move(x);
    return true;
  }

  bool grid(const MixedProfile& x, const std::vector<PlayerId>& mixers, MixedProfile& out) const {
    const int res = mixers.size() >= 3 ? 16 : 32;
    const int k = static_cast<int>(mixers.size());
    std::vector<int> idx(k, 0);
    for (;;) {
      std::vector<double> p(k);
      for (int d = 0; d < k; ++d) p[d] = static_cast<double>(idx[d]) / res;
      if (check(x, mixers, p, out)) return true;
      int d = k - 1;
      while (d >= 0 && ++idx[d] > res) idx[d--] = 0;
      if (d < 0) return false;
    }
  }

  bool solve(const MixedProfile& base, const std::vector<PlayerId>& mixers, MixedProfile& out) const {
    MixedProfile x = base;
    const int k = static_cast<int>(mixers.size());
    if (k == 1) {
      const PlayerId j = mixers[0];
      set_p(x, j, 0.5);
      if (std::abs(diff(x, j)) > tol_) return false;
      // Constraints of the pure players are linear in p; collect the feasible interval.
      double lo = 0.0, hi = 1.0;
      for (PlayerId l = 0; l < t_.num_players(); ++l) {
        if (l == j) continue;
        set_p(x, j, 0.0);
        const auto v0 = action_values(t_, x, l);
        set_p(x, j, 1.0);
        const auto v1 = action_values(t_, x, l);
        const int chosen = static_cast<int>(std::max_element(x[l].begin(), x[l].end()) - x[l].begin());
        for (int a = 0; a < t_.actions[l]; ++a) {
          const double g0 = v0[a] - v0[chosen], g1 = v1[a] - v1[chosen];
          // g0 + (g1 - g0) p <= 0
          const double slope = g1 - g0;
          if (std::abs(slope) < 1e-15) {
            if (g0 > tol_) return false;
          } else if (slope > 0) {
            hi = std::min(hi, -g0 / slope);
          } else {
            lo = std::max(lo, -g0 / slope);
          }
        }
      }
      if (lo > hi + 1e-12) return false;
      return check(x, mixers, {0.5 * (lo + hi)}, out) || check(x, mixers, {lo}, out) ||
             check(x, mixers, {hi}, out);
    }
    if (k == 2) {
      const PlayerId j = mixers[0], l = mixers[1];
      // diff_j is linear in p_l, diff_l linear in p_j.
      auto line = [&](PlayerId who, PlayerId var, double& alpha, double& beta) {
        MixedProfile y = x;
        set_p(y, var, 0.0);
        set_p(y, who, 0.5);
        alpha = diff(y, who);
        set_p(y, var, 1.0);
        beta = diff(y, who) - alpha;
      };
      double aj, bj, al, bl;
      line(j, l, aj, bj);
      line(l, j, al, bl);
      std::vector<double> pl_c, pj_c;
      bool pl_free = false, pj_free = false;
      if (std::abs(bj) > 1e-13) pl_c.push_back(-aj / bj);
      else if (std::abs(aj) <= tol_) pl_free = true;
      else return false;
      if (std::abs(bl) > 1e-13) pj_c.push_back(-al / bl);
      else if (std::abs(al) <= tol_) pj_free = true;
      else return false;
      if (!pl_free && !pj_free) return check(x, mixers, {pj_c[0], pl_c[0]}, out);
      return grid_partial(x, mixers, pj_free ? std::nullopt : std::optional<double>(pj_c[0]),
                          pl_free ? std::nullopt : std::optional<double>(pl_c[0]), out);
    }
    // Three mixers: reduce to a quadratic in the middle probability.
    const PlayerId m0 = mixers[0], m1 = mixers[1], m2 = mixers[2];
    auto bilinear = [&](PlayerId who, PlayerId u, PlayerId v, std::array<double, 4>& c) {
      MixedProfile y = x;
      set_p(y, who, 0.5);
      double f[2][2];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          set_p(y, u, a);
          set_p(y, v, b);
          f[a][b] = diff(y, who);
        }
      c = {f[0][0], f[1][0] - f[0][0], f[0][1] - f[0][0], f[1][1] - f[1][0] - f[0][1] + f[0][0]};
    };
    std::array<double, 4> e0, e1, e2;
    bilinear(m0, m1, m2, e0);  // A0 + B0 p1 + C0 p2 + D0 p1 p2
    bilinear(m1, m0, m2, e1);  // A1 + B1 p0 + C1 p2 + D1 p0 p2
    bilinear(m2, m0, m1, e2);  // A2 + B2 p0 + C2 p1 + D2 p0 p1
    // p2 = N2 / M2 with N2 = -(A0 + B0 t), M2 = C0 + D0 t, t = p1.
    const Poly n2{-e0[0], -e0[1], 0, 0}, d2{e0[2], e0[3], 0, 0};
    // p0 = -(A1 M2 + C1 N2) / (B1 M2 + D1 N2)
    const Poly n0 = sub(Poly{0, 0, 0, 0}, Poly{e1[0] * d2[0] + e1[2] * n2[0], e1[0] * d2[1] + e1[2] * n2[1], 0, 0});
    const Poly d0{e1[1] * d2[0] + e1[3] * n2[0], e1[1] * d2[1] + e1[3] * n2[1], 0, 0};
    // (A2 + C2 t) d0 + (B2 + D2 t) n0 = 0
    const Poly quad = [&] {
      const Poly a{e2[0], e2[2], 0, 0}, b{e2[1], e2[3], 0, 0};
      const Poly s = mul(a, d0), r = mul(b, n0);
      return Poly{s[0] + r[0], s[1] + r[1], s[2] + r[2], 0};
    }();
    if (!is_zero(quad) && !is_zero(d2) && !is_zero(d0)) {
      std::vector<double> ts;
      roots_in_unit(quad, ts);
      std::sort(ts.begin(), ts.end());
      for (double tv : ts) {
        const double m2v = eval(d2, tv), m0v = eval(d0, tv);
        if (std::abs(m2v) < 1e-14 || std::abs(m0v) < 1e-14) continue;
        const double p2 = eval(n2, tv) / m2v, p0 = eval(n0, tv) / m0v;
        if (check(x, mixers, {p0, tv, p2}, out)) return true;
      }
    }
    return grid(x, mixers, out);
  }

  bool grid_partial(const MixedProfile& x, const std::vector<PlayerId>& mixers,
                    std::optional<double> pj, std::optional<double> pl, MixedProfile& out) const {
    const int res = 64;
    for (int a = 0; a <= res; ++a) {
      const double vj = pj ? *pj : static_cast<double>(a) / res;
      for (int b = 0; b <= res; ++b) {
        const double vl = pl ? *pl : static_cast<double>(b) / res;
        if (check(x, mixers, {vj, vl}, out)) return true;
        if (pl) break;
      }
      if (pj) break;
    }
    return false;
  }

  const OneShotTensor& t_;
  double tol_;
};

bool damped_best_response(const OneShotTensor& t, const SolverConfig& config, MixedProfile& out,
                          double& best_regret) {
  const int n = t.num_players();
  Rng rng = Rng::substream(config.seed, 0x6e617368ULL);
  for (int start = 0; start <= config.multistart; ++start) {
    MixedProfile x;
    for (PlayerId j = 0; j < n; ++j) {
      if (start == 0) {
        x.push_back(uniform_action(t.actions[j]));
        continue;
      }
      MixedAction w(t.actions[j]);
      for (double& v : w) v = -std::log(1.0 - rng.uniform());
      x.push_back(clean_mix(w));
    }
    for (int it = 0; it < config.best_response_iterations; ++it) {
      const auto reg = regret(t, x);
      const double worst = *std::max_element(reg.begin(), reg.end());
      if (worst < best_regret) {
        best_regret = worst;
        out = x;
      }
      if (worst <= config.regret_tolerance) return true;
      const double step = 1.0 / (it + 2);
      MixedProfile next = x;
      for (PlayerId j = 0; j < n; ++j) {
        ActionId a = 0;
        best_reply_value(t, x, j, &a);
        for (int b = 0; b < t.actions[j]; ++b) next[j][b] = (1 - step) * x[j][b] + (b == a ? step : 0.0);
      }
      x = std::move(next);
    }
  }
  return false;
}

}  // namespace

SolveResult nash_equilibrium(const OneShotTensor& t, const SolverConfig& config) {
  const double tol = config.regret_tolerance;
  const int n = t.num_players();
  // Pure profiles first, in profile order.
  for (ProfileIndex a = 0; a < t.num_profiles; ++a) {
    MixedProfile x;
    for (PlayerId j = 0; j < n; ++j) x.push_back(pure_action(t.actions[j], t.action_of(a, j)));
    if (accept(regret(t, x), tol)) return finish(t, std::move(x), "pure");
  }
  MixedProfile x;
  if (n == 2 && bimatrix_support_enumeration(t, tol, config, x))
    return finish(t, std::move(x), "support-enumeration");
  bool binary = true;
  for (int k : t.actions) binary = binary && k <= 2;
  if (n >= 3 && binary && BinaryEnumerator(t, tol).run(x)) return finish(t, std::move(x), "indifference");
  double best = kInf;
  if (damped_best_response(t, config, x, best)) return finish(t, std::move(x), "damped-best-response");
  throw SolverError("no one-shot equilibrium within regret tolerance" +
                        (t.history.empty() ? std::string() : " at history " + t.history),
                    best);
}

}  // namespace martin_games
