#pragma once

#include "menuforge/rational.hpp"

#include <optional>
#include <vector>

namespace menuforge {

struct LinearConstraint {
  RatVec normal;
  Rational offset;
};

// rows: normal.x <= offset; equalities: normal.x == offset.
struct HalfspaceSystem {
  int dim = 0;
  std::vector<LinearConstraint> rows;
  std::vector<LinearConstraint> equalities;

  void add_row(const RatVec& normal, const Rational& offset) {
    if (normal.size() != dim) throw InputError("constraint dimension mismatch");
    rows.push_back({normal, offset});
  }
  void add_equality(const RatVec& normal, const Rational& offset) {
    if (normal.size() != dim) throw InputError("constraint dimension mismatch");
    equalities.push_back({normal, offset});
  }
  bool satisfied_by(const RatVec& x) const {
    for (const auto& c : rows)
      if (c.normal.dot(x) > c.offset) return false;
    for (const auto& c : equalities)
      if (c.normal.dot(x) != c.offset) return false;
    return true;
  }
};

// Convenience rows for the probability simplex in dimension d.
inline HalfspaceSystem simplex_system(int d) {
  HalfspaceSystem sys;
  sys.dim = d;
  for (int i = 0; i < d; ++i) {
    RatVec n = RatVec::Zero(d);
    n(i) = -1;
    sys.add_row(n, 0);
  }
  sys.add_equality(RatVec::Constant(d, 1), 1);
  return sys;
}

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpSense { Max, Min };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value = 0;
  RatVec point;
};

namespace detail {

// Dense two-phase primal simplex with Bland's rule over exact rationals.
// Standard form: min c.z  s.t.  G z = h, z >= 0.  Small instances only.
class SimplexTableau {
 public:
  SimplexTableau(const std::vector<RatVec>& g_rows, const std::vector<Rational>& h,
                 const RatVec& cost)
      : m_(static_cast<int>(g_rows.size())), n_(static_cast<int>(cost.size())), cost_(cost) {
    tab_.assign(m_, std::vector<Rational>(n_ + 1, Rational(0)));
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) tab_[i][j] = g_rows[i](j);
      tab_[i][n_] = h[i];
      if (tab_[i][n_] < 0) {
        for (auto& v : tab_[i]) v = -v;
      }
    }
  }

  // Returns false when phase 1 proves infeasibility.
  bool solve_feasibility() {
    basis_.assign(m_, -1);
    // Artificial columns are virtual: artificial i occupies column n_ + i.
    artificial_.assign(m_, true);
    std::vector<Rational> phase1_cost(n_, Rational(0));
    // Reduced costs handled directly; artificial cost is 1.
    if (!run_phase(/*phase1=*/true)) return false;
    Rational p1 = objective_value(/*phase1=*/true);
    if (p1 != 0) return false;
    purge_artificials();
    return true;
  }

  // Requires a feasible basis. Returns false on unboundedness.
  bool optimize() { return run_phase(/*phase1=*/false); }

  RatVec solution() const {
    RatVec z = RatVec::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && basis_[i] < n_) z(basis_[i]) = tab_[i][n_];
    }
    return z;
  }

 private:
  Rational objective_value(bool phase1) const {
    Rational v = 0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] == -1) {
        if (phase1) v += tab_[i][n_];
      } else if (!phase1) {
        v += cost_(basis_[i]) * tab_[i][n_];
      }
    }
    return v;
  }

  Rational reduced_cost(int j, bool phase1) const {
    // r_j = c_j - c_B . (B^-1 A_j)
    Rational r = phase1 ? Rational(0) : cost_(j);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] == -1) {
        if (phase1) r -= tab_[i][j];
      } else if (!phase1) {
        r -= cost_(basis_[i]) * tab_[i][j];
      }
    }
    return r;
  }

  void pivot(int row, int col) {
    const Rational piv = tab_[row][col];
    for (int j = 0; j <= n_; ++j) tab_[row][j] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Rational f = tab_[i][col];
      if (f == 0) continue;
      for (int j = 0; j <= n_; ++j) tab_[i][j] -= f * tab_[row][j];
    }
    basis_[row] = col;
  }

  bool run_phase(bool phase1) {
    for (;;) {
      // Bland: lowest-index column with negative reduced cost.
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (reduced_cost(j, phase1) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == -1) return true;
      // Ratio test; Bland tie-break on lowest basis label (artificials last).
      int leave = -1;
      Rational best_ratio = 0;
      for (int i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rational ratio = tab_[i][n_] / tab_[i][enter];
        if (leave == -1 || ratio < best_ratio ||
            (ratio == best_ratio && basis_label(i) < basis_label(leave))) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == -1) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  long basis_label(int row) const {
    return basis_[row] == -1 ? static_cast<long>(n_) + row : basis_[row];
  }

  // After phase 1 at value zero, pivot artificials out of the basis where
  // possible; rows that cannot pivot are redundant and dropped.
  void purge_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] != -1) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (tab_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      }
    }
    std::vector<std::vector<Rational>> keep_tab;
    std::vector<int> keep_basis;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] == -1) continue;  // redundant zero row
      keep_tab.push_back(std::move(tab_[i]));
      keep_basis.push_back(basis_[i]);
    }
    tab_ = std::move(keep_tab);
    basis_ = std::move(keep_basis);
    m_ = static_cast<int>(tab_.size());
  }

  int m_, n_;
  RatVec cost_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
  std::vector<bool> artificial_;
};

}  // namespace detail

// Exact LP over intrinsically nonnegative variables:
// optimize c.x s.t. ineq rows a.x <= b, eq rows a.x == b, x >= 0.
// Nonnegativity is part of the standard form, not a tableau row.
inline LpResult solve_lp_nonneg(const RatVec& objective,
                                const std::vector<LinearConstraint>& ineq,
                                const std::vector<LinearConstraint>& eq, LpSense sense) {
  const int d = static_cast<int>(objective.size());
  const int n_ineq = static_cast<int>(ineq.size());
  const int ncols = d + n_ineq;
  std::vector<RatVec> g_rows;
  std::vector<Rational> h;
  g_rows.reserve(n_ineq + eq.size());
  for (int r = 0; r < n_ineq; ++r) {
    RatVec row = RatVec::Zero(ncols);
    row.head(d) = ineq[r].normal;
    row(d + r) = 1;
    g_rows.push_back(row);
    h.push_back(ineq[r].offset);
  }
  for (const auto& c : eq) {
    RatVec row = RatVec::Zero(ncols);
    row.head(d) = c.normal;
    g_rows.push_back(row);
    h.push_back(c.offset);
  }
  RatVec cost = RatVec::Zero(ncols);
  const Rational sign = (sense == LpSense::Max) ? Rational(-1) : Rational(1);
  cost.head(d) = sign * objective;

  detail::SimplexTableau tab(g_rows, h, cost);
  LpResult res;
  if (!tab.solve_feasibility()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (!tab.optimize()) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.point = tab.solution().head(d);
  res.value = objective.dot(res.point);
  return res;
}

// Exact LP over free variables: optimize objective.x subject to the system.
// The returned point satisfies every constraint exactly.
inline LpResult solve_lp(const RatVec& objective, const HalfspaceSystem& cs, LpSense sense) {
  const int d = cs.dim;
  if (objective.size() != d) throw InputError("objective dimension mismatch");

  // z = [u; v; s], x = u - v, one slack per inequality row.
  const int n_ineq = static_cast<int>(cs.rows.size());
  const int n_eq = static_cast<int>(cs.equalities.size());
  const int ncols = 2 * d + n_ineq;
  std::vector<RatVec> g_rows;
  std::vector<Rational> h;
  g_rows.reserve(n_ineq + n_eq);
  for (int r = 0; r < n_ineq; ++r) {
    RatVec row = RatVec::Zero(ncols);
    for (int j = 0; j < d; ++j) {
      row(j) = cs.rows[r].normal(j);
      row(d + j) = -cs.rows[r].normal(j);
    }
    row(2 * d + r) = 1;
    g_rows.push_back(row);
    h.push_back(cs.rows[r].offset);
  }
  for (int r = 0; r < n_eq; ++r) {
    RatVec row = RatVec::Zero(ncols);
    for (int j = 0; j < d; ++j) {
      row(j) = cs.equalities[r].normal(j);
      row(d + j) = -cs.equalities[r].normal(j);
    }
    g_rows.push_back(row);
    h.push_back(cs.equalities[r].offset);
  }

  RatVec cost = RatVec::Zero(ncols);
  const Rational sign = (sense == LpSense::Max) ? Rational(-1) : Rational(1);
  for (int j = 0; j < d; ++j) {
    cost(j) = sign * objective(j);
    cost(d + j) = -sign * objective(j);
  }

  detail::SimplexTableau tab(g_rows, h, cost);
  LpResult res;
  if (!tab.solve_feasibility()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (!tab.optimize()) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  RatVec z = tab.solution();
  res.status = LpStatus::Optimal;
  res.point = RatVec::Zero(d);
  for (int j = 0; j < d; ++j) res.point(j) = z(j) - z(d + j);
  res.value = objective.dot(res.point);
  return res;
}

}  // namespace menuforge
