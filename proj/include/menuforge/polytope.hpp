#pragma once

#include "menuforge/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace menuforge {

class UnboundedError : public std::runtime_error {
 public:
  explicit UnboundedError(const std::string& what) : std::runtime_error(what) {}
};
class RepresentationError : public std::runtime_error {
 public:
  explicit RepresentationError(const std::string& what) : std::runtime_error(what) {}
};

constexpr int kMaxEnumerationDim = 16;

struct Polytope {
  int dim = 0;
  std::optional<std::vector<RatVec>> vertices;  // minimal V-representation
  std::optional<HalfspaceSystem> halfspaces;

  bool empty() const { return vertices && vertices->empty(); }
};

namespace detail {

// Solve E x = f exactly. Returns {particular solution, nullspace basis columns},
// or nullopt when inconsistent.
inline std::optional<std::pair<RatVec, RatMat>> affine_solve(const RatMat& E, const RatVec& f) {
  const int rows = static_cast<int>(E.rows());
  const int cols = static_cast<int>(E.cols());
  RatMat A(rows, cols + 1);
  if (rows > 0) {
    A.block(0, 0, rows, cols) = E;
    A.col(cols) = f;
  }
  std::vector<int> pivot_col(rows, -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i) {
      if (A(i, c) != 0) {
        pr = i;
        break;
      }
    }
    if (pr == -1) continue;
    A.row(pr).swap(A.row(r));
    A.row(r) /= A(r, c);
    for (int i = 0; i < rows; ++i) {
      if (i != r && A(i, c) != 0) A.row(i) -= A(i, c) * A.row(r);
    }
    pivot_col[r] = c;
    ++r;
  }
  for (int i = r; i < rows; ++i) {
    if (A(i, cols) != 0) return std::nullopt;  // inconsistent
  }
  std::vector<bool> is_pivot(cols, false);
  for (int i = 0; i < r; ++i) is_pivot[pivot_col[i]] = true;
  RatVec particular = RatVec::Zero(cols);
  for (int i = 0; i < r; ++i) particular(pivot_col[i]) = A(i, cols);
  std::vector<int> free_cols;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  RatMat basis = RatMat::Zero(cols, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], static_cast<int>(k)) = 1;
    for (int i = 0; i < r; ++i) basis(pivot_col[i], static_cast<int>(k)) = -A(i, free_cols[k]);
  }
  return std::make_pair(particular, basis);
}

struct TightMask {
  std::vector<std::uint64_t> bits;
  void resize(int n) { bits.assign((n + 63) / 64, 0); }
  void set(int i) { bits[i / 64] |= (std::uint64_t(1) << (i % 64)); }
  // this ∩ other ⊆ container ?
  static bool common_subset(const TightMask& a, const TightMask& b, const TightMask& c) {
    for (size_t w = 0; w < a.bits.size(); ++w) {
      std::uint64_t common = a.bits[w] & b.bits[w];
      if ((common & ~c.bits[w]) != 0) return false;
    }
    return true;
  }
};

struct DdVertex {
  RatVec z;
  TightMask tight;
};

// Incremental double description over the inequality list `cons` in k dims,
// starting from seed vertices of a polytope described by the first
// `n_seed` constraints. Vertex adjacency uses the combinatorial test.
inline std::vector<RatVec> dd_run(const std::vector<LinearConstraint>& cons, int n_seed,
                                  std::vector<DdVertex> gen, int k) {
  const int total = static_cast<int>(cons.size());
  auto evaluate_tight = [&](DdVertex& v, int upto) {
    v.tight.resize(total);
    for (int c = 0; c < upto; ++c) {
      if (cons[c].normal.dot(v.z) == cons[c].offset) v.tight.set(c);
    }
  };
  for (auto& v : gen) evaluate_tight(v, n_seed);

  for (int c = n_seed; c < total; ++c) {
    std::vector<Rational> slack(gen.size());
    bool any_out = false;
    for (size_t i = 0; i < gen.size(); ++i) {
      slack[i] = cons[c].normal.dot(gen[i].z) - cons[c].offset;
      if (slack[i] > 0) any_out = true;
    }
    if (!any_out) {
      for (size_t i = 0; i < gen.size(); ++i) {
        if (slack[i] == 0) gen[i].tight.set(c);
      }
      continue;
    }
    std::vector<DdVertex> next;
    std::map<std::vector<Rational>, bool> seen;
    for (size_t i = 0; i < gen.size(); ++i) {
      if (slack[i] <= 0) {
        if (slack[i] == 0) {
          gen[i].tight.set(c);
          std::vector<Rational> key(gen[i].z.data(), gen[i].z.data() + gen[i].z.size());
          seen[key] = true;
        }
        next.push_back(gen[i]);
      }
    }
    for (size_t i = 0; i < gen.size(); ++i) {
      if (slack[i] >= 0) continue;  // need strict in
      for (size_t j = 0; j < gen.size(); ++j) {
        if (slack[j] <= 0) continue;  // strict out
        // adjacency: no third generator contains tight(i) ∩ tight(j)
        bool adjacent = true;
        for (size_t w = 0; w < gen.size(); ++w) {
          if (w == i || w == j) continue;
          if (TightMask::common_subset(gen[i].tight, gen[j].tight, gen[w].tight)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        const Rational lambda = slack[i] / (slack[i] - slack[j]);  // in (0,1)
        DdVertex w;
        w.z = gen[i].z + lambda * (gen[j].z - gen[i].z);
        std::vector<Rational> key(w.z.data(), w.z.data() + w.z.size());
        if (seen.count(key)) continue;
        seen[key] = true;
        evaluate_tight(w, c + 1);
        next.push_back(std::move(w));
      }
    }
    gen = std::move(next);
    if (gen.empty()) return {};
  }
  std::vector<RatVec> out;
  out.reserve(gen.size());
  for (auto& v : gen) out.push_back(std::move(v.z));
  return out;
}

}  // namespace detail

// Complete, duplicate-free vertex list of a bounded H-polytope.
// Throws UnboundedError when the region is unbounded; returns an empty
// polytope when infeasible. Documented limit: dim <= 16.
inline Polytope enumerate_vertices(const HalfspaceSystem& sys) {
  if (sys.dim > kMaxEnumerationDim)
    throw InputError("vertex enumeration limited to dimension <= 16");
  Polytope out;
  out.dim = sys.dim;
  out.halfspaces = sys;

  // Reduce by the equality system: x = p0 + N z.
  RatMat E(static_cast<int>(sys.equalities.size()), sys.dim);
  RatVec f(static_cast<int>(sys.equalities.size()));
  for (size_t i = 0; i < sys.equalities.size(); ++i) {
    E.row(static_cast<int>(i)) = sys.equalities[i].normal.transpose();
    f(static_cast<int>(i)) = sys.equalities[i].offset;
  }
  auto aff = detail::affine_solve(E, f);
  if (!aff) {
    out.vertices = std::vector<RatVec>{};
    return out;
  }
  const RatVec& p0 = aff->first;
  const RatMat& N = aff->second;
  const int k = static_cast<int>(N.cols());

  std::vector<LinearConstraint> reduced;
  for (const auto& c : sys.rows) {
    RatVec a = (c.normal.transpose() * N).transpose();
    Rational b = c.offset - c.normal.dot(p0);
    bool zero = true;
    for (int j = 0; j < k; ++j)
      if (a(j) != 0) zero = false;
    if (zero) {
      if (b < 0) {
        out.vertices = std::vector<RatVec>{};
        return out;
      }
      continue;
    }
    reduced.push_back({a, b});
  }

  if (k == 0) {
    out.vertices = std::vector<RatVec>{p0};
    return out;
  }

  // Bounding box per coordinate; also detects infeasibility/unboundedness.
  HalfspaceSystem red_sys;
  red_sys.dim = k;
  red_sys.rows = reduced;
  RatVec lo(k), hi(k);
  for (int j = 0; j < k; ++j) {
    RatVec obj = RatVec::Zero(k);
    obj(j) = 1;
    LpResult mx = solve_lp(obj, red_sys, LpSense::Max);
    if (mx.status == LpStatus::Infeasible) {
      out.vertices = std::vector<RatVec>{};
      return out;
    }
    if (mx.status == LpStatus::Unbounded) throw UnboundedError("region is unbounded");
    LpResult mn = solve_lp(obj, red_sys, LpSense::Min);
    if (mn.status == LpStatus::Unbounded) throw UnboundedError("region is unbounded");
    hi(j) = mx.value + 1;
    lo(j) = mn.value - 1;
  }

  // Seed with a padded simplex strictly containing the bounding box, so the
  // feasible region never touches a seed facet: z_j >= lo_j and
  // sum_j (z_j - lo_j)/w_j <= k+1 with w_j = hi_j - lo_j.
  std::vector<LinearConstraint> cons;
  RatVec w(k);
  for (int j = 0; j < k; ++j) w(j) = hi(j) - lo(j);  // >= 2 by padding
  for (int j = 0; j < k; ++j) {
    RatVec a = RatVec::Zero(k);
    a(j) = -1;
    cons.push_back({a, -lo(j)});
  }
  {
    RatVec a(k);
    for (int j = 0; j < k; ++j) a(j) = Rational(1) / w(j);
    Rational rhs = Rational(k + 1);
    for (int j = 0; j < k; ++j) rhs += lo(j) / w(j);
    cons.push_back({a, rhs});
  }
  const int n_seed = static_cast<int>(cons.size());
  for (const auto& c : reduced) cons.push_back(c);

  std::vector<detail::DdVertex> seed;
  seed.reserve(k + 1);
  {
    detail::DdVertex v0;
    v0.z = lo;
    seed.push_back(std::move(v0));
    for (int j = 0; j < k; ++j) {
      detail::DdVertex vj;
      vj.z = lo;
      vj.z(j) += Rational(k + 1) * w(j);
      seed.push_back(std::move(vj));
    }
  }

  std::vector<RatVec> zs = detail::dd_run(cons, n_seed, std::move(seed), k);
  std::vector<RatVec> verts;
  std::map<std::vector<Rational>, bool> seen;
  for (const auto& z : zs) {
    RatVec x = p0 + N * z;
    std::vector<Rational> key(x.data(), x.data() + x.size());
    if (seen.count(key)) continue;
    seen[key] = true;
    verts.push_back(std::move(x));
  }
  std::sort(verts.begin(), verts.end(), VecLess{});
  out.vertices = std::move(verts);
  return out;
}

// Is p a convex combination of pts? Exact feasibility LP over lambda >= 0.
inline bool in_hull(const std::vector<RatVec>& pts, const RatVec& p) {
  if (pts.empty()) return false;
  const int d = static_cast<int>(p.size());
  const int n = static_cast<int>(pts.size());
  std::vector<LinearConstraint> eq;
  eq.push_back({RatVec::Constant(n, 1), 1});
  for (int r = 0; r < d; ++r) {
    RatVec a(n);
    for (int i = 0; i < n; ++i) a(i) = pts[i](r);
    eq.push_back({a, p(r)});
  }
  LpResult res = solve_lp_nonneg(RatVec::Zero(n), {}, eq, LpSense::Min);
  return res.status == LpStatus::Optimal;
}

// Indices of the extreme points of the input set (duplicates collapse to the
// first occurrence). Redundant points are removed via LP membership tests;
// removing one cannot change the hull, so later tests run on the shrunken set.
inline std::vector<int> convex_hull_indices(const std::vector<RatVec>& points) {
  if (points.empty()) throw InputError("convex hull of empty point set");
  std::vector<int> live;
  std::map<std::vector<Rational>, bool> seen;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    std::vector<Rational> key(points[i].data(), points[i].data() + points[i].size());
    if (seen.count(key)) continue;
    seen[key] = true;
    live.push_back(i);
  }
  std::vector<int> kept;
  for (size_t k = 0; k < live.size(); ++k) {
    std::vector<RatVec> others;
    others.reserve(kept.size() + live.size() - k - 1);
    for (int idx : kept) others.push_back(points[idx]);
    for (size_t j = k + 1; j < live.size(); ++j) others.push_back(points[live[j]]);
    if (others.empty() || !in_hull(others, points[live[k]])) kept.push_back(live[k]);
  }
  return kept;
}

inline Polytope convex_hull(const std::vector<RatVec>& points) {
  std::vector<int> kept = convex_hull_indices(points);
  Polytope p;
  p.dim = static_cast<int>(points.front().size());
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != points.front().size()) throw InputError("mixed dimensions in hull");
  }
  std::vector<RatVec> verts;
  verts.reserve(kept.size());
  for (int idx : kept) verts.push_back(points[idx]);
  std::sort(verts.begin(), verts.end(), VecLess{});
  p.vertices = std::move(verts);
  return p;
}

inline const std::vector<RatVec>& vertices_of(const Polytope& p) {
  if (!p.vertices) throw RepresentationError("polytope has no vertex representation");
  return *p.vertices;
}

// Ensures a vertex representation, enumerating from halfspaces if needed.
inline Polytope with_vertices(const Polytope& p) {
  if (p.vertices) return p;
  if (!p.halfspaces) throw RepresentationError("polytope has no representation");
  Polytope q = enumerate_vertices(*p.halfspaces);
  return q;
}

// Owning copy of the vertex list, enumerating from halfspaces if needed.
inline std::vector<RatVec> vertex_list(const Polytope& p) {
  if (p.vertices) return *p.vertices;
  if (!p.halfspaces) throw RepresentationError("polytope has no representation");
  return *enumerate_vertices(*p.halfspaces).vertices;
}

inline bool contains_point(const Polytope& p, const RatVec& x) {
  if (x.size() != p.dim) throw InputError("point dimension mismatch");
  if (p.halfspaces) return p.halfspaces->satisfied_by(x);
  return in_hull(vertices_of(p), x);
}

inline bool polytopes_equal(const Polytope& p, const Polytope& q) {
  if (p.dim != q.dim) throw InputError("polytope dimension mismatch");
  Polytope pv = with_vertices(p);
  Polytope qv = with_vertices(q);
  for (const auto& v : vertices_of(pv))
    if (!contains_point(q, v)) return false;
  for (const auto& v : vertices_of(qv))
    if (!contains_point(p, v)) return false;
  return true;
}

struct TiebreakResult {
  Rational value_primary;
  Rational value_secondary;
  RatVec point;
};

// Maximizes `primary` over P; among that optimal face, maximizes `secondary`.
// The returned point is always a vertex of P.
inline TiebreakResult maximize_with_tiebreak(const Polytope& p, const RatVec& primary,
                                             const RatVec& secondary) {
  Polytope pv = with_vertices(p);
  const auto& verts = vertices_of(pv);
  if (verts.empty()) throw InputError("maximize over empty polytope");
  if (primary.size() != p.dim || secondary.size() != p.dim)
    throw InputError("objective dimension mismatch");
  TiebreakResult best;
  bool first = true;
  for (const auto& v : verts) {
    Rational pv1 = primary.dot(v);
    Rational pv2 = secondary.dot(v);
    if (first || pv1 > best.value_primary ||
        (pv1 == best.value_primary && pv2 > best.value_secondary)) {
      best = {pv1, pv2, v};
      first = false;
    }
  }
  return best;
}

namespace detail {

// Squared distance from point p to conv(V) by away-step Frank-Wolfe with
// exact line search. Float diagnostic only; never used in exact decisions.
inline double squared_distance_to_hull(const Eigen::VectorXd& p,
                                       const std::vector<Eigen::VectorXd>& V,
                                       Eigen::VectorXd* closest = nullptr) {
  const int n = static_cast<int>(V.size());
  int start = 0;
  double best = (V[0] - p).squaredNorm();
  for (int i = 1; i < n; ++i) {
    double d = (V[i] - p).squaredNorm();
    if (d < best) {
      best = d;
      start = i;
    }
  }
  std::vector<double> lambda(n, 0.0);
  lambda[start] = 1.0;
  Eigen::VectorXd x = V[start];
  const double tol = 1e-18;
  for (int iter = 0; iter < 200000; ++iter) {
    Eigen::VectorXd g = 2.0 * (x - p);
    int s = 0, a = -1;
    double s_val = g.dot(V[0]);
    double a_val = 0;
    for (int i = 1; i < n; ++i) {
      double val = g.dot(V[i]);
      if (val < s_val) {
        s_val = val;
        s = i;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (lambda[i] <= 0) continue;
      double val = g.dot(V[i]);
      if (a == -1 || val > a_val) {
        a_val = val;
        a = i;
      }
    }
    double fw_gap = g.dot(x) - s_val;
    if (fw_gap <= tol) break;
    Eigen::VectorXd d;
    double gamma_max;
    bool away = (a >= 0) && (a_val - g.dot(x) > fw_gap);
    int idx;
    if (away) {
      d = x - V[a];
      gamma_max = lambda[a] / (1.0 - lambda[a] + 1e-300);
      idx = a;
    } else {
      d = V[s] - x;
      gamma_max = 1.0;
      idx = s;
    }
    double denom = 2.0 * d.squaredNorm();
    if (denom <= 0) break;
    double gamma = -g.dot(d) / denom;
    gamma = std::max(0.0, std::min(gamma, gamma_max));
    if (gamma <= 0) break;
    if (away) {
      for (auto& l : lambda) l *= (1.0 + gamma);
      lambda[idx] -= gamma;
    } else {
      for (auto& l : lambda) l *= (1.0 - gamma);
      lambda[idx] += gamma;
    }
    x += gamma * d;
  }
  if (closest) *closest = x;
  return (x - p).squaredNorm();
}

}  // namespace detail

// Max over vertices of each polytope of Euclidean distance to the other.
// Valid for compact convex sets; reported as a float diagnostic only.
inline double hausdorff_distance(const Polytope& p, const Polytope& q) {
  if (!p.vertices || !q.vertices)
    throw RepresentationError("hausdorff_distance needs vertex representations");
  auto to_dbl = [](const std::vector<RatVec>& vs) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(vs.size());
    for (const auto& v : vs) out.push_back(to_double_vec(v));
    return out;
  };
  std::vector<Eigen::VectorXd> P = to_dbl(*p.vertices);
  std::vector<Eigen::VectorXd> Q = to_dbl(*q.vertices);
  if (P.empty() || Q.empty()) throw InputError("hausdorff_distance of empty polytope");
  double h = 0;
  for (const auto& v : P)
    h = std::max(h, std::sqrt(std::max(0.0, detail::squared_distance_to_hull(v, Q))));
  for (const auto& v : Q)
    h = std::max(h, std::sqrt(std::max(0.0, detail::squared_distance_to_hull(v, P))));
  return h;
}

}  // namespace menuforge
