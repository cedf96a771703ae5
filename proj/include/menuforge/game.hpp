#pragma once

#include "menuforge/polytope.hpp"

#include <functional>
#include <set>
#include <vector>

namespace menuforge {

// Bimatrix game: m optimizer actions (rows), n learner actions (columns),
// payoffs in [-1, 1]. uO is optional; menu computation only needs uL.
struct Game {
  int m = 0, n = 0;
  RatMat uL;
  std::optional<RatMat> uO;

  int csp_dim() const { return m * n; }
  int idx(int i, int j) const { return i * n + j; }

  Rational learner_payoff(const RatVec& x, int j) const {
    Rational v = 0;
    for (int i = 0; i < m; ++i) v += x(i) * uL(i, j);
    return v;
  }

  // u_L flattened over CSP coordinates (i, j) -> i*n + j.
  RatVec uL_flat() const {
    RatVec v(csp_dim());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) v(idx(i, j)) = uL(i, j);
    return v;
  }

  RatVec pure_csp(int i, int j) const {
    RatVec v = RatVec::Zero(csp_dim());
    v(idx(i, j)) = 1;
    return v;
  }

  RatVec product_csp(const RatVec& x, const RatVec& y) const {
    RatVec v(csp_dim());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) v(idx(i, j)) = x(i) * y(j);
    return v;
  }

  // Optimizer marginal of a CSP.
  RatVec optimizer_marginal(const RatVec& csp) const {
    RatVec x = RatVec::Zero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) x(i) += csp(idx(i, j));
    return x;
  }
};

inline void check_csp(const Game& g, const RatVec& phi) {
  if (phi.size() != g.csp_dim()) throw InputError("CSP dimension mismatch");
  if (!is_distribution(phi)) throw InputError("CSP is not a distribution");
}

enum class ActionClass { NonDominated, WeaklyDominated, StrictlyDominated };

struct ValidationReport {
  bool entries_in_range = true;
  bool unique_phi_plus = false;
  int istar = -1, jstar = -1;  // the maximizing pure pair (first one found)
  std::vector<ActionClass> learner_actions;
  // For non-dominated j: an optimizer mix under which j is the unique best
  // response with a strictly positive margin.
  std::vector<std::optional<RatVec>> strict_witness;
  std::vector<Rational> margins;

  bool has_weakly_dominated() const {
    for (auto c : learner_actions)
      if (c == ActionClass::WeaklyDominated) return true;
    return false;
  }
  // Menus require payoffs in range and no weakly dominated learner action.
  // Uniqueness of phi+ is reported but not enforced here: several of the
  // reference games (e.g. cyclic zero-sum ones) tie at the top and the menu
  // machinery handles that through max-face comparisons.
  bool menu_ok() const { return entries_in_range && !has_weakly_dominated(); }
};

// Exact best-response set of the learner to optimizer mix x.
inline std::set<int> best_responses(const Game& g, const RatVec& x) {
  if (x.size() != g.m) throw InputError("mix dimension mismatch");
  if (!is_distribution(x)) throw InputError("x is not a distribution");
  std::set<int> out;
  Rational best = 0;
  for (int j = 0; j < g.n; ++j) {
    Rational v = g.learner_payoff(x, j);
    if (j == 0 || v > best) {
      best = v;
      out.clear();
    }
    if (v == best) out.insert(j);
  }
  return out;
}

// Max incentive margin for action j: max delta s.t. some x in the simplex has
// u_L(x, j) >= u_L(x, j') + delta for every other j'. Sign classifies j.
inline Rational incentive_margin(const Game& g, int j, RatVec* witness) {
  if (g.n == 1) {
    if (witness) *witness = RatVec::Constant(g.m, Rational(1, g.m));
    return 2;  // no competitor; any x uniquely incentivizes the action
  }
  // Variables: (x_1..x_m, delta).
  HalfspaceSystem sys;
  sys.dim = g.m + 1;
  for (int i = 0; i < g.m; ++i) {
    RatVec a = RatVec::Zero(g.m + 1);
    a(i) = -1;
    sys.add_row(a, 0);
  }
  {
    RatVec a = RatVec::Zero(g.m + 1);
    for (int i = 0; i < g.m; ++i) a(i) = 1;
    sys.add_equality(a, 1);
  }
  for (int jp = 0; jp < g.n; ++jp) {
    if (jp == j) continue;
    RatVec a = RatVec::Zero(g.m + 1);
    for (int i = 0; i < g.m; ++i) a(i) = g.uL(i, jp) - g.uL(i, j);
    a(g.m) = 1;  // delta - sum x_i (uL(i,j)-uL(i,j')) <= 0
    sys.add_row(a, 0);
  }
  RatVec obj = RatVec::Zero(g.m + 1);
  obj(g.m) = 1;
  LpResult res = solve_lp(obj, sys, LpSense::Max);
  if (res.status != LpStatus::Optimal) throw InputError("margin LP failed");
  if (witness) *witness = res.point.head(g.m);
  return res.value;
}

inline ValidationReport validate(const Game& g) {
  if (g.m <= 0 || g.n <= 0 || g.uL.rows() != g.m || g.uL.cols() != g.n)
    throw InputError("malformed game matrices");
  ValidationReport rep;
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.uL(i, j) < -1 || g.uL(i, j) > 1)
        throw InputError("learner payoff entries must lie in [-1, 1]");
  if (g.uO) {
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j)
        if ((*g.uO)(i, j) < -1 || (*g.uO)(i, j) > 1)
          throw InputError("optimizer payoff entries must lie in [-1, 1]");
  }

  Rational best = g.uL(0, 0);
  int count = 0;
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) {
      if (g.uL(i, j) > best) best = g.uL(i, j);
    }
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.uL(i, j) == best) {
        if (count == 0) {
          rep.istar = i;
          rep.jstar = j;
        }
        ++count;
      }
  rep.unique_phi_plus = (count == 1);

  rep.learner_actions.resize(g.n);
  rep.strict_witness.resize(g.n);
  rep.margins.resize(g.n);
  for (int j = 0; j < g.n; ++j) {
    RatVec wit;
    Rational delta = incentive_margin(g, j, &wit);
    rep.margins[j] = delta;
    if (delta > 0) {
      rep.learner_actions[j] = ActionClass::NonDominated;
      rep.strict_witness[j] = wit;
    } else if (delta == 0) {
      rep.learner_actions[j] = ActionClass::WeaklyDominated;
    } else {
      rep.learner_actions[j] = ActionClass::StrictlyDominated;
    }
  }
  return rep;
}

struct ZeroSumResult {
  Rational value;       // U_ZS = min_x max_y u_L(x, y)
  RatVec x_zs;          // minimizing optimizer mix
  RatVec y_zs;          // maximizing learner mix (from the dual LP)
  Rational dual_value;  // equals value by the minimax theorem
};

inline ZeroSumResult zero_sum_value(const Game& g) {
  ZeroSumResult out;
  {
    // min v s.t. v >= u_L(x, j) for all j, x in simplex. Vars (x, v).
    HalfspaceSystem sys;
    sys.dim = g.m + 1;
    for (int i = 0; i < g.m; ++i) {
      RatVec a = RatVec::Zero(g.m + 1);
      a(i) = -1;
      sys.add_row(a, 0);
    }
    RatVec ones = RatVec::Zero(g.m + 1);
    for (int i = 0; i < g.m; ++i) ones(i) = 1;
    sys.add_equality(ones, 1);
    for (int j = 0; j < g.n; ++j) {
      RatVec a = RatVec::Zero(g.m + 1);
      for (int i = 0; i < g.m; ++i) a(i) = g.uL(i, j);
      a(g.m) = -1;
      sys.add_row(a, 0);
    }
    RatVec obj = RatVec::Zero(g.m + 1);
    obj(g.m) = 1;
    LpResult res = solve_lp(obj, sys, LpSense::Min);
    if (res.status != LpStatus::Optimal) throw InputError("zero-sum primal LP failed");
    out.value = res.value;
    out.x_zs = res.point.head(g.m);
  }
  {
    // max w s.t. w <= u_L(i, y) for all i, y in simplex. Vars (y, w).
    HalfspaceSystem sys;
    sys.dim = g.n + 1;
    for (int j = 0; j < g.n; ++j) {
      RatVec a = RatVec::Zero(g.n + 1);
      a(j) = -1;
      sys.add_row(a, 0);
    }
    RatVec ones = RatVec::Zero(g.n + 1);
    for (int j = 0; j < g.n; ++j) ones(j) = 1;
    sys.add_equality(ones, 1);
    for (int i = 0; i < g.m; ++i) {
      RatVec a = RatVec::Zero(g.n + 1);
      for (int j = 0; j < g.n; ++j) a(j) = -g.uL(i, j);
      a(g.n) = 1;
      sys.add_row(a, 0);
    }
    RatVec obj = RatVec::Zero(g.n + 1);
    obj(g.n) = 1;
    LpResult res = solve_lp(obj, sys, LpSense::Max);
    if (res.status != LpStatus::Optimal) throw InputError("zero-sum dual LP failed");
    out.dual_value = res.value;
    out.y_zs = res.point.head(g.n);
  }
  return out;
}

// External regret of a CSP: best fixed deviation minus realized payoff.
inline Rational regret(const Game& g, const RatVec& phi) {
  check_csp(g, phi);
  Rational realized = 0;
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) realized += phi(g.idx(i, j)) * g.uL(i, j);
  Rational best = 0;
  for (int jstar = 0; jstar < g.n; ++jstar) {
    Rational dev = 0;
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j) dev += phi(g.idx(i, j)) * g.uL(i, jstar);
    if (jstar == 0 || dev > best) best = dev;
  }
  return best - realized;
}

// Swap regret: per-action deviation gains, each clamped at zero (the
// identity swap is always available).
inline Rational swap_regret(const Game& g, const RatVec& phi) {
  check_csp(g, phi);
  Rational total = 0;
  for (int j = 0; j < g.n; ++j) {
    Rational best = 0;
    for (int jstar = 0; jstar < g.n; ++jstar) {
      Rational gain = 0;
      for (int i = 0; i < g.m; ++i)
        gain += phi(g.idx(i, j)) * (g.uL(i, jstar) - g.uL(i, j));
      if (gain > best) best = gain;
    }
    total += best;
  }
  return total;
}

// V_L against a finitely supported distribution over optimizers:
// the weighted sum of per-component learner values.
inline Rational mixture_value(const std::function<Rational(const RatVec&)>& menu_value,
                              const std::vector<std::pair<Rational, RatVec>>& components) {
  Rational wsum = 0;
  for (const auto& [w, uo] : components) {
    if (w < 0) throw InputError("mixture weights must be nonnegative");
    wsum += w;
  }
  if (wsum != 1) throw InputError("mixture weights must sum to 1");
  Rational v = 0;
  for (const auto& [w, uo] : components) v += w * menu_value(uo);
  return v;
}

}  // namespace menuforge
