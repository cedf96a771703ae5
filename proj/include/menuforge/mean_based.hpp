#pragma once

#include "menuforge/menus.hpp"
#include "menuforge/trajectory.hpp"

#include <array>

namespace menuforge {

class StructureError : public std::runtime_error {
 public:
  explicit StructureError(const std::string& what) : std::runtime_error(what) {}
};

// Best-response cone structure for m=2, n=3 games: three cones ordered along
// Delta_2 by the probability p of optimizer action 0, separated by two rays.
struct ConeStructure {
  std::array<int, 3> order;      // learner actions from p=1 down to p=0
  std::array<Rational, 2> ties;  // p at the order[0]/order[1] and order[1]/order[2] ties
  int m = 2;

  // p-interval [lo, hi] on which `order[k]` is a best response.
  std::pair<Rational, Rational> interval(int k) const {
    Rational hi = (k == 0) ? Rational(1) : ties[k - 1];
    Rational lo = (k == 2) ? Rational(0) : ties[k];
    return {lo, hi};
  }
  int position(int action) const {
    for (int k = 0; k < 3; ++k)
      if (order[k] == action) return k;
    throw StructureError("action not in cone order");
  }
  // Integer direction vector of the ray separating order[k] and order[k+1].
  RatVec ray_direction(int k) const {
    Rational p = ties[k];
    RatVec d(2);
    d(0) = p;
    d(1) = 1 - p;
    // clear denominators
    Integer den = boost::multiprecision::lcm(boost::multiprecision::denominator(d(0)),
                                             boost::multiprecision::denominator(d(1)));
    d(0) *= Rational(den);
    d(1) *= Rational(den);
    return d;
  }
};

inline ConeStructure cone_structure(const Game& g) {
  if (g.m != 2 || g.n != 3)
    throw StructureError("mean-based menu machinery requires m=2, n=3 games");
  // Learner payoff against (p, 1-p) is linear in p; the upper envelope must
  // consist of three full-length pieces.
  auto payoff_at = [&](const Rational& p, int j) -> Rational {
    return p * g.uL(0, j) + (1 - p) * g.uL(1, j);
  };
  auto argmax_at = [&](const Rational& p) {
    std::set<int> out;
    Rational best;
    for (int j = 0; j < 3; ++j) {
      Rational v = payoff_at(p, j);
      if (j == 0 || v > best) {
        best = v;
        out.clear();
      }
      if (v == best) out.insert(j);
    }
    return out;
  };
  ConeStructure cs;
  auto top = argmax_at(1);
  auto bottom = argmax_at(0);
  if (top.size() != 1 || bottom.size() != 1)
    throw StructureError("degenerate cone structure: tie at a pure optimizer action");
  cs.order[0] = *top.begin();
  cs.order[2] = *bottom.begin();
  if (cs.order[0] == cs.order[2]) throw StructureError("fewer than three best-response cones");
  cs.order[1] = 3 - cs.order[0] - cs.order[2];

  // Tie between adjacent actions a, b: p (uL(0,a)-uL(0,b)) + (1-p)(uL(1,a)-uL(1,b)) = 0.
  auto tie_point = [&](int a, int b) -> Rational {
    Rational da = g.uL(0, a) - g.uL(0, b);
    Rational db = g.uL(1, a) - g.uL(1, b);
    if (da == db) throw StructureError("parallel payoffs for adjacent actions");
    // p*da + (1-p)*db = 0  =>  p = db / (db - da)
    return db / (db - da);
  };
  cs.ties[0] = tie_point(cs.order[0], cs.order[1]);
  cs.ties[1] = tie_point(cs.order[1], cs.order[2]);
  if (!(0 < cs.ties[1] && cs.ties[1] < cs.ties[0] && cs.ties[0] < 1))
    throw StructureError("cone boundaries are not interior and ordered");
  // The middle action must actually win strictly between the ties.
  Rational mid = (cs.ties[0] + cs.ties[1]) / 2;
  auto mid_br = argmax_at(mid);
  if (mid_br.size() != 1 || *mid_br.begin() != cs.order[1])
    throw StructureError("middle cone is empty");
  return cs;
}

struct BoundaryRay {
  int action_hi;  // best response on the p-heavy side
  int action_lo;
  RatVec direction;  // exact integer direction in the nonnegative quadrant
};

// The rays where two adjacent learner actions tie in cumulative payoff.
inline std::vector<BoundaryRay> boundary_rays(const Game& g) {
  ConeStructure cs = cone_structure(g);
  std::vector<BoundaryRay> out;
  out.push_back({cs.order[0], cs.order[1], cs.ray_direction(0)});
  out.push_back({cs.order[1], cs.order[2], cs.ray_direction(1)});
  return out;
}

struct Fingerprint {
  std::vector<int> actions;  // length 1..3, no immediate repeats
  TrajectoryKind kind = TrajectoryKind::Plain;
  int ray = -1;  // spiral: index into boundary_rays (0 or 1)

  std::string str() const {
    std::string s = kind == TrajectoryKind::Spiral ? "spiral[" + std::to_string(ray) + "]:" : "";
    for (size_t i = 0; i < actions.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(actions[i]);
    }
    return s;
  }
};

// All learner-action sequences of length 1..3 with no immediate repeats
// (3 + 6 + 12 = 21 plain), plus a spiral variant for every boundary-ray
// assignment compatible with the first and last action.
inline std::vector<Fingerprint> enumerate_fingerprints(const Game& g) {
  ConeStructure cs = cone_structure(g);
  std::vector<std::vector<int>> seqs;
  for (int a = 0; a < 3; ++a) {
    seqs.push_back({a});
    for (int b = 0; b < 3; ++b) {
      if (b == a) continue;
      seqs.push_back({a, b});
      for (int c = 0; c < 3; ++c) {
        if (c == b) continue;
        seqs.push_back({a, b, c});
      }
    }
  }
  std::vector<Fingerprint> out;
  for (const auto& s : seqs) out.push_back({s, TrajectoryKind::Plain, -1});
  for (const auto& s : seqs) {
    for (int r = 0; r < 2; ++r) {
      // Ray r separates cs.order[r] and cs.order[r+1]; X0 and X_k lie on it,
      // so the first and last actions must be one of those two.
      int hi = cs.order[r], lo = cs.order[r + 1];
      if ((s.front() == hi || s.front() == lo) && (s.back() == hi || s.back() == lo))
        out.push_back({s, TrajectoryKind::Spiral, r});
    }
  }
  return out;
}

namespace detail {

// Cone membership rows for learner action j applied to an affine expression
// X = base + coeffs * vars (2 rows of a k-var system).
struct AffineState {
  // X_component(c) = offset(c) + row(c) . vars
  RatMat rows;  // 2 x nvars
  RatVec offset;
};

inline void add_cone_rows(HalfspaceSystem& sys, const ConeStructure& cs, int action,
                          const AffineState& X) {
  auto [lo, hi] = cs.interval(cs.position(action));
  // p(X) >= lo  <=>  X_0 (1 - lo) >= lo X_1  <=>  -(1-lo) X_0 + lo X_1 <= 0
  {
    RatVec a = -(1 - lo) * X.rows.row(0).transpose() + lo * X.rows.row(1).transpose();
    Rational b = (1 - lo) * X.offset(0) - lo * X.offset(1);
    sys.add_row(a, b);
  }
  // p(X) <= hi  <=>  X_0 (1 - hi) <= hi X_1
  {
    RatVec a = (1 - hi) * X.rows.row(0).transpose() - hi * X.rows.row(1).transpose();
    Rational b = -(1 - hi) * X.offset(0) + hi * X.offset(1);
    sys.add_row(a, b);
  }
}

}  // namespace detail

struct FingerprintResult {
  Polytope poly;                        // in CSP space (empty when infeasible)
  std::vector<RatVec> points;           // profile of each enumerated LP vertex
  std::vector<Trajectory> trajectories; // witness per point
};

namespace detail {

// Fourier-Motzkin elimination of the last variable of an inequality system.
// Equalities must not mention it (true here: the spiral closure and the time
// normalization are mu-free).
inline HalfspaceSystem eliminate_last_var(const HalfspaceSystem& sys) {
  const int d = sys.dim;
  HalfspaceSystem out;
  out.dim = d - 1;
  for (const auto& e : sys.equalities) {
    if (e.normal(d - 1) != 0) throw InputError("equality mentions the eliminated variable");
    out.add_equality(e.normal.head(d - 1), e.offset);
  }
  std::vector<LinearConstraint> pos, neg;
  for (const auto& c : sys.rows) {
    const Rational& cmu = c.normal(d - 1);
    if (cmu == 0)
      out.add_row(c.normal.head(d - 1), c.offset);
    else if (cmu > 0)
      pos.push_back(c);
    else
      neg.push_back(c);
  }
  for (const auto& p : pos) {
    for (const auto& n : neg) {
      const Rational cp = p.normal(d - 1);
      const Rational cn = n.normal(d - 1);  // < 0
      RatVec a = (-cn) * p.normal.head(d - 1) + cp * n.normal.head(d - 1);
      Rational b = (-cn) * p.offset + cp * n.offset;
      out.add_row(a, b);
    }
  }
  return out;
}

}  // namespace detail

// Builds the linear system of Lemma-style variables y_i in R^2_{>=0}
// (t_i = |y_i|_1, X_i partial sums, X0 = mu * ray for spirals) with
// sum t_i = 1, cone membership at both ends of every segment, and the spiral
// closure equality. The offset scale mu is unbounded along a spiral, so it is
// eliminated by Fourier-Motzkin before vertex enumeration in y-space; the
// extreme points of the projection are images of extreme points, and mu is
// recovered per vertex for the witness. Vertices map through the linear
// profile sum_i y_i (x) b_i.
inline FingerprintResult fingerprint_polytope(const Game& g, const Fingerprint& f) {
  ConeStructure cs = cone_structure(g);
  const int k = static_cast<int>(f.actions.size());
  const bool spiral = f.kind == TrajectoryKind::Spiral;
  const int nvars = 2 * k + (spiral ? 1 : 0);
  RatVec ray_dir;
  if (spiral) ray_dir = cs.ray_direction(f.ray);

  HalfspaceSystem sys;
  sys.dim = nvars;
  for (int v = 0; v < nvars; ++v) {
    RatVec a = RatVec::Zero(nvars);
    a(v) = -1;
    sys.add_row(a, 0);
  }
  {
    RatVec a = RatVec::Zero(nvars);
    for (int s = 0; s < k; ++s) {
      a(2 * s) = 1;
      a(2 * s + 1) = 1;
    }
    sys.add_equality(a, 1);  // total time normalized to 1
  }

  auto state_at = [&](int upto) {
    // X_upto = X0 + sum_{s < upto} y_s
    detail::AffineState X;
    X.rows = RatMat::Zero(2, nvars);
    X.offset = RatVec::Zero(2);
    for (int s = 0; s < upto; ++s) {
      X.rows(0, 2 * s) = 1;
      X.rows(1, 2 * s + 1) = 1;
    }
    if (spiral) {
      X.rows(0, 2 * k) = ray_dir(0);
      X.rows(1, 2 * k) = ray_dir(1);
    }
    return X;
  };

  for (int s = 0; s < k; ++s) {
    detail::AffineState before = state_at(s);
    detail::AffineState after = state_at(s + 1);
    if (s > 0 || spiral) detail::add_cone_rows(sys, cs, f.actions[s], before);
    detail::add_cone_rows(sys, cs, f.actions[s], after);
  }
  if (spiral) {
    // X_k parallel to the ray: d_1 X_k0 - d_0 X_k1 = 0 (mu cancels).
    detail::AffineState Xk = state_at(k);
    RatVec a = ray_dir(1) * Xk.rows.row(0).transpose() - ray_dir(0) * Xk.rows.row(1).transpose();
    Rational b = -ray_dir(1) * Xk.offset(0) + ray_dir(0) * Xk.offset(1);
    sys.add_equality(a, b);
  }

  HalfspaceSystem ysys = spiral ? detail::eliminate_last_var(sys) : sys;

  // Feasible mu range for a fixed y, from the rows that mention mu.
  auto mu_for = [&](const RatVec& y) -> Rational {
    Rational lo = 0;
    bool has_hi = false;
    Rational hi = 0;
    for (const auto& c : sys.rows) {
      const Rational& cmu = c.normal(nvars - 1);
      if (cmu == 0) continue;
      Rational rest = c.offset;
      for (int v = 0; v + 1 < nvars; ++v) rest -= c.normal(v) * y(v);
      Rational bound = rest / cmu;
      if (cmu > 0) {
        if (!has_hi || bound < hi) hi = bound;
        has_hi = true;
      } else {
        if (bound > lo) lo = bound;
      }
    }
    if (has_hi && lo > hi) throw StructureError("mu recovery failed");
    return lo;
  };

  FingerprintResult out;
  out.poly.dim = g.csp_dim();
  Polytope zpoly = enumerate_vertices(ysys);
  if (zpoly.empty()) {
    out.poly.vertices = std::vector<RatVec>{};
    return out;
  }
  for (const auto& z : vertices_of(zpoly)) {
    RatVec prof = RatVec::Zero(g.csp_dim());
    Trajectory tau;
    tau.kind = TrajectoryKind::Plain;
    if (spiral) {
      Rational mu = mu_for(z);
      if (mu > 0) {
        tau.kind = TrajectoryKind::Spiral;
        RatVec X0(2);
        X0(0) = mu * ray_dir(0);
        X0(1) = mu * ray_dir(1);
        tau.X0 = X0;
      }
    }
    for (int s = 0; s < k; ++s) {
      RatVec y(2);
      y(0) = z(2 * s);
      y(1) = z(2 * s + 1);
      Rational t = y(0) + y(1);
      for (int i = 0; i < 2; ++i) prof(g.idx(i, f.actions[s])) += y(i);
      if (t > 0) {
        RatVec x(2);
        x(0) = y(0) / t;
        x(1) = y(1) / t;
        tau.segments.push_back({x, t, f.actions[s]});
      }
    }
    out.points.push_back(prof);
    out.trajectories.push_back(std::move(tau));
  }
  std::vector<int> kept = convex_hull_indices(out.points);
  std::vector<RatVec> verts;
  for (int idx : kept) verts.push_back(out.points[idx]);
  std::sort(verts.begin(), verts.end(), VecLess{});
  out.poly.vertices = std::move(verts);
  return out;
}

struct MeanBasedMenu {
  Menu menu;
  std::vector<Trajectory> witnesses;  // aligned with menu vertices
};

// Hull of all fingerprint-polytope vertices; every vertex carries the
// trajectory (or spiral) that realizes it.
inline MeanBasedMenu build_mb_menu(const Game& g, int jobs = 1) {
  std::vector<Fingerprint> fps = enumerate_fingerprints(g);
  std::vector<FingerprintResult> results(fps.size());
  parallel_for(static_cast<int>(fps.size()), jobs,
               [&](int i) { results[i] = fingerprint_polytope(g, fps[i]); });
  std::vector<RatVec> points;
  std::vector<Trajectory> trajs;
  for (auto& r : results) {
    for (size_t i = 0; i < r.points.size(); ++i) {
      points.push_back(std::move(r.points[i]));
      trajs.push_back(std::move(r.trajectories[i]));
    }
  }
  if (points.empty()) throw StructureError("no feasible fingerprint system");
  std::vector<int> kept = convex_hull_indices(points);
  MeanBasedMenu out;
  std::vector<RatVec> verts;
  for (int idx : kept) {
    verts.push_back(points[idx]);
    out.witnesses.push_back(trajs[idx]);
  }
  Polytope poly;
  poly.dim = g.csp_dim();
  poly.vertices = std::move(verts);
  out.menu = make_menu(g, std::move(poly), "M_MB");
  return out;
}

}  // namespace menuforge
