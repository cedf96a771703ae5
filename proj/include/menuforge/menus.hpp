#pragma once

#include "menuforge/game.hpp"
#include "menuforge/parallel.hpp"

#include <string>

namespace menuforge {

// A menu: convex polytope of CSPs over the mn-simplex.
struct Menu {
  Polytope poly;
  int m = 0, n = 0;
  std::string label;
};

inline Menu make_menu(const Game& g, Polytope poly, std::string label) {
  Menu menu;
  menu.poly = std::move(poly);
  menu.m = g.m;
  menu.n = g.n;
  menu.label = std::move(label);
  if (menu.poly.vertices) {
    for (const auto& v : *menu.poly.vertices) check_csp(g, v);
  }
  return menu;
}

// H-system of the no-regret CSPs: the simplex plus one row per deviation j*.
inline HalfspaceSystem nr_system(const Game& g) {
  HalfspaceSystem sys = simplex_system(g.csp_dim());
  for (int jstar = 0; jstar < g.n; ++jstar) {
    RatVec a = RatVec::Zero(g.csp_dim());
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j) a(g.idx(i, j)) = g.uL(i, jstar) - g.uL(i, j);
    sys.add_row(a, 0);
  }
  return sys;
}

// H-system of the no-swap-regret CSPs: per learner action j, per target j*.
inline HalfspaceSystem nsr_system(const Game& g) {
  HalfspaceSystem sys = simplex_system(g.csp_dim());
  for (int j = 0; j < g.n; ++j) {
    for (int jstar = 0; jstar < g.n; ++jstar) {
      if (jstar == j) continue;
      RatVec a = RatVec::Zero(g.csp_dim());
      for (int i = 0; i < g.m; ++i) a(g.idx(i, j)) = g.uL(i, jstar) - g.uL(i, j);
      sys.add_row(a, 0);
    }
  }
  return sys;
}

inline Menu build_nr_menu(const Game& g) {
  return make_menu(g, enumerate_vertices(nr_system(g)), "M_NR");
}

inline Menu build_nsr_menu(const Game& g) {
  return make_menu(g, enumerate_vertices(nsr_system(g)), "M_NSR");
}

struct ValueFaces {
  Rational Uplus;
  Rational Uminus;
  Polytope Mplus;
  Polytope Mminus;
};

// Max/min of u_L over the menu and the achieving faces (hulls of the
// achieving vertices, which are exactly the faces' vertex sets).
inline ValueFaces value_faces(const Game& g, const Menu& menu) {
  const std::vector<RatVec> verts = vertex_list(menu.poly);
  if (verts.empty()) throw InputError("value_faces of empty menu");
  RatVec ul = g.uL_flat();
  ValueFaces out;
  bool first = true;
  for (const auto& v : verts) {
    Rational val = ul.dot(v);
    if (first) {
      out.Uplus = out.Uminus = val;
      first = false;
    } else {
      if (val > out.Uplus) out.Uplus = val;
      if (val < out.Uminus) out.Uminus = val;
    }
  }
  std::vector<RatVec> plus, minus;
  for (const auto& v : verts) {
    Rational val = ul.dot(v);
    if (val == out.Uplus) plus.push_back(v);
    if (val == out.Uminus) minus.push_back(v);
  }
  out.Mplus.dim = menu.poly.dim;
  out.Mplus.vertices = std::move(plus);
  out.Mminus.dim = menu.poly.dim;
  out.Mminus.vertices = std::move(minus);
  return out;
}

struct MenuCheckReport {
  bool pass = true;
  std::optional<RatVec> first_failing_x;
  int points_checked = 0;
};

// All points of the Delta_m grid with the given denominator.
inline std::vector<RatVec> simplex_grid(int m, int denominator) {
  std::vector<RatVec> out;
  std::vector<int> comp(m, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      comp[pos] = left;
      RatVec x(m);
      for (int i = 0; i < m; ++i) x(i) = Rational(comp[i], denominator);
      out.push_back(x);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      comp[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, denominator);
  return out;
}

// Checks the menu-validity condition on a rational grid of Delta_m: for each
// grid x (plus the simplex vertices), is there a y with x (x) y in the menu?
// A failure is a definitive invalidity certificate; a pass only means no
// counterexample at this resolution.
inline MenuCheckReport is_valid_menu(const Game& g, const Menu& menu, int grid_denominator,
                                     int jobs = 1) {
  const std::vector<RatVec> verts = vertex_list(menu.poly);
  std::vector<RatVec> xs = simplex_grid(g.m, grid_denominator);
  for (int i = 0; i < g.m; ++i) {
    RatVec x = RatVec::Zero(g.m);
    x(i) = 1;
    xs.push_back(x);
  }
  const int nv = static_cast<int>(verts.size());
  std::vector<char> ok(xs.size(), 1);
  parallel_for(static_cast<int>(xs.size()), jobs, [&](int t) {
    const RatVec& x = xs[t];
    // Feasibility: exists lambda >= 0, y >= 0 with sum lambda = 1,
    // sum_k lambda_k V_k = x (x) y, sum y = 1.
    const int nvars = nv + g.n;
    std::vector<LinearConstraint> eq;
    {
      RatVec a = RatVec::Zero(nvars);
      for (int v = 0; v < nv; ++v) a(v) = 1;
      eq.push_back({a, 1});
    }
    {
      RatVec a = RatVec::Zero(nvars);
      for (int j = 0; j < g.n; ++j) a(nv + j) = 1;
      eq.push_back({a, 1});
    }
    for (int i = 0; i < g.m; ++i) {
      for (int j = 0; j < g.n; ++j) {
        RatVec a = RatVec::Zero(nvars);
        for (int v = 0; v < nv; ++v) a(v) = verts[v](g.idx(i, j));
        a(nv + j) -= x(i);
        eq.push_back({a, 0});
      }
    }
    LpResult res = solve_lp_nonneg(RatVec::Zero(nvars), {}, eq, LpSense::Min);
    ok[t] = (res.status == LpStatus::Optimal) ? 1 : 0;
  });
  MenuCheckReport rep;
  rep.points_checked = static_cast<int>(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) {
    if (!ok[t]) {
      rep.pass = false;
      rep.first_failing_x = xs[t];
      break;
    }
  }
  return rep;
}

// Hull of the old vertices plus the extra CSPs. Validity is inherited
// (asymptotic menus are upwards closed).
inline Menu extend_menu(const Game& g, const Menu& menu, const std::vector<RatVec>& extra) {
  for (const auto& phi : extra) check_csp(g, phi);
  std::vector<RatVec> pts = vertex_list(menu.poly);
  pts.insert(pts.end(), extra.begin(), extra.end());
  return make_menu(g, convex_hull(pts), menu.label + "+ext");
}

// Menu of the constant algorithm that always plays learner action j.
inline Menu fixed_action_menu(const Game& g, int j) {
  if (j < 0 || j >= g.n) throw InputError("learner action out of range");
  std::vector<RatVec> pts;
  for (int i = 0; i < g.m; ++i) pts.push_back(g.pure_csp(i, j));
  return make_menu(g, convex_hull(pts), "fixed:" + std::to_string(j));
}

// Hull of nsr's vertices plus menu's vertices minus phi0 (which must be a
// vertex of menu, lie on its minimum-value face, and be outside nsr's).
inline Menu drop_min_vertex(const Game& g, const Menu& menu, const Menu& nsr, const RatVec& phi0) {
  const std::vector<RatVec> verts = vertex_list(menu.poly);
  bool is_vertex = false;
  for (const auto& v : verts)
    if (vec_equal(v, phi0)) is_vertex = true;
  if (!is_vertex) throw InputError("phi0 is not a vertex of the menu");
  ValueFaces faces = value_faces(g, menu);
  if (!contains_point(faces.Mminus, phi0))
    throw InputError("phi0 is not on the menu's minimum-value face");
  ValueFaces nsr_faces = value_faces(g, nsr);
  if (contains_point(nsr_faces.Mminus, phi0))
    throw InputError("phi0 lies on the no-swap-regret minimum-value face");
  std::vector<RatVec> pts = vertex_list(nsr.poly);
  for (const auto& v : verts) {
    if (!vec_equal(v, phi0)) pts.push_back(v);
  }
  Menu out = make_menu(g, convex_hull(pts), menu.label + "-dropmin");
  if (polytopes_equal(out.poly, menu.poly))
    throw InputError("dropping phi0 did not change the menu");
  return out;
}

}  // namespace menuforge
