#pragma once

#include "menuforge/menus.hpp"

#include <random>

namespace menuforge {

class SearchFailure : public std::runtime_error {
 public:
  explicit SearchFailure(const std::string& what) : std::runtime_error(what) {}
};

// V_L(M, u_O): maximize u_O over the menu, break ties in the learner's favor,
// return the learner's payoff at the chosen point.
inline Rational learner_value(const Game& g, const Menu& menu, const RatVec& uO) {
  TiebreakResult r = maximize_with_tiebreak(menu.poly, uO, g.uL_flat());
  return r.value_secondary;
}

inline TiebreakResult learner_value_point(const Game& g, const Menu& menu, const RatVec& uO) {
  return maximize_with_tiebreak(menu.poly, uO, g.uL_flat());
}

enum class ParetoReason {
  MinFaceMatchesNsr,
  MinFaceStrictlyLarger,
  NotNoRegret,
  MissingPhiPlus,
};

inline std::string to_string(ParetoReason r) {
  switch (r) {
    case ParetoReason::MinFaceMatchesNsr: return "min_face_matches_nsr";
    case ParetoReason::MinFaceStrictlyLarger: return "min_face_strictly_larger";
    case ParetoReason::NotNoRegret: return "not_no_regret";
    case ParetoReason::MissingPhiPlus: return "missing_phi_plus";
  }
  return "?";
}

struct ParetoVerdict {
  bool optimal = false;
  ParetoReason reason = ParetoReason::NotNoRegret;
  std::optional<RatVec> witness_vertex;
  std::optional<Menu> dominating_menu;
};

// Decides Pareto-optimality of a polytopal no-regret menu by comparing its
// minimum-value face with the no-swap-regret menu's. Menus outside M_NR get
// the abstaining NotNoRegret verdict (the characterization does not apply).
inline ParetoVerdict check_pareto_optimal(const Game& g, const Menu& menu) {
  ParetoVerdict verdict;
  HalfspaceSystem nr = nr_system(g);
  for (const auto& v : vertex_list(menu.poly)) {
    if (!nr.satisfied_by(v)) {
      verdict.optimal = false;
      verdict.reason = ParetoReason::NotNoRegret;
      verdict.witness_vertex = v;
      return verdict;
    }
  }

  Menu nsr = build_nsr_menu(g);
  ValueFaces faces = value_faces(g, menu);
  ValueFaces nsr_faces = value_faces(g, nsr);

  // A menu that fails to reach the best learner payoff is dominated by its
  // extension with a maximizing pure profile.
  Rational umax = g.uL(0, 0);
  int bi = 0, bj = 0;
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.uL(i, j) > umax) {
        umax = g.uL(i, j);
        bi = i;
        bj = j;
      }
  if (faces.Uplus < umax) {
    verdict.optimal = false;
    verdict.reason = ParetoReason::MissingPhiPlus;
    verdict.dominating_menu = extend_menu(g, menu, {g.pure_csp(bi, bj)});
    return verdict;
  }

  if (polytopes_equal(faces.Mminus, nsr_faces.Mminus)) {
    verdict.optimal = true;
    verdict.reason = ParetoReason::MinFaceMatchesNsr;
    return verdict;
  }

  verdict.optimal = false;
  verdict.reason = ParetoReason::MinFaceStrictlyLarger;
  for (const auto& v : vertices_of(faces.Mminus)) {
    if (!contains_point(nsr_faces.Mminus, v)) {
      verdict.witness_vertex = v;
      break;
    }
  }
  if (!verdict.witness_vertex)
    throw InputError("menu min-face differs from NSR's but has no droppable vertex");
  verdict.dominating_menu = drop_min_vertex(g, menu, nsr, *verdict.witness_vertex);
  return verdict;
}

struct SeparationWitness {
  RatVec uO;
  Rational vL_winner;
  Rational vL_loser;
};

namespace detail {

// Max-margin direction separating point phi from the hull of `others`.
inline RatVec separating_direction(const std::vector<RatVec>& others, const RatVec& phi) {
  const int d = static_cast<int>(phi.size());
  // Vars (u_1..u_d, s): maximize s with u.phi - u.v >= s, |u_i| <= 1.
  HalfspaceSystem sys;
  sys.dim = d + 1;
  for (int i = 0; i < d; ++i) {
    RatVec a = RatVec::Zero(d + 1);
    a(i) = 1;
    sys.add_row(a, 1);
    a(i) = -1;
    sys.add_row(a, 1);
  }
  for (const auto& v : others) {
    RatVec a = RatVec::Zero(d + 1);
    for (int i = 0; i < d; ++i) a(i) = v(i) - phi(i);
    a(d) = 1;
    sys.add_row(a, 0);
  }
  RatVec obj = RatVec::Zero(d + 1);
  obj(d) = 1;
  LpResult res = solve_lp(obj, sys, LpSense::Max);
  if (res.status != LpStatus::Optimal || res.value <= 0)
    throw InputError("separation LP found no positive margin");
  return res.point.head(d);
}

}  // namespace detail

// Searches for an optimizer payoff u_O with V_L(winner, u_O) > V_L(loser, u_O)
// exactly. Directions sweep the span of u_L and a max-margin separator using
// rational points on the unit circle, u_O(t) ~ (1-t^2) u_L + 2t u_O0, with a
// mirrored -u_O0 pass. Failure to find a witness within the budget is a
// search failure, not a proof of dominance.
inline SeparationWitness find_separating_uO(const Game& g, const Menu& winner, const Menu& loser,
                                            long sweep_budget = 4096) {
  ValueFaces wf = value_faces(g, winner);
  ValueFaces lf = value_faces(g, loser);
  if (!polytopes_equal(wf.Mplus, lf.Mplus))
    throw InputError("find_separating_uO requires equal maximum-value faces");

  const std::vector<RatVec> wv = vertex_list(winner.poly);
  const std::vector<RatVec> lv = vertex_list(loser.poly);
  std::optional<RatVec> phi;
  bool phi_in_loser = false;
  for (const auto& v : lv) {
    if (!contains_point(winner.poly, v)) {
      phi = v;
      break;
    }
  }
  if (!phi) {
    if (!polytopes_equal(wf.Mminus, lf.Mminus))
      throw InputError(
          "find_separating_uO preconditions: loser inside winner but minimum-value faces differ");
    for (const auto& v : wv) {
      if (!contains_point(loser.poly, v)) {
        phi = v;
        phi_in_loser = false;
        break;
      }
    }
    if (!phi) throw InputError("menus are equal; no separating direction exists");
    phi_in_loser = false;
  } else {
    phi_in_loser = true;
  }

  RatVec uO0 = phi_in_loser ? detail::separating_direction(wv, *phi)
                            : detail::separating_direction(lv, *phi);
  RatVec ul = g.uL_flat();

  long used = 0;
  auto try_direction = [&](const RatVec& uO) -> std::optional<SeparationWitness> {
    ++used;
    Rational vw = learner_value(g, winner, uO);
    Rational vl = learner_value(g, loser, uO);
    if (vw > vl) return SeparationWitness{uO, vw, vl};
    return std::nullopt;
  };

  // Rational circle points: t >= 0 covers theta in [0, pi) through
  // cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2); positive scaling is dropped.
  auto direction_at = [&](const Rational& t, int sign) -> RatVec {
    const Rational c1 = 1 - t * t;
    const Rational c2 = Rational(2 * sign) * t;
    RatVec u = c1 * ul;
    u += c2 * uO0;
    return u;
  };

  if (auto w = try_direction(-ul)) return *w;  // theta = pi endpoint
  for (long K = 8; used < sweep_budget; K *= 4) {
    for (long k = 0; k <= K && used < sweep_budget; ++k) {
      for (int pass = 0; pass < 2 && used < sweep_budget; ++pass) {
        Rational t = (pass == 0) ? Rational(k, K) : (k > 0 ? Rational(K, k) : Rational(0));
        for (int sign : {1, -1}) {
          if (used >= sweep_budget) break;
          if (auto w = try_direction(direction_at(t, sign))) return *w;
        }
      }
    }
  }
  throw SearchFailure("no separating direction found within the sweep budget");
}

struct DominanceReport {
  long strict_wins = 0;
  long ties = 0;
  long losses = 0;
  std::optional<RatVec> first_loss_uO;
};

// Seeded optimizer payoff samples with entries k/denominator in [-1, 1].
inline std::vector<RatVec> sample_payoff_directions(int dim, int count, std::uint64_t seed,
                                                    int denominator = 1000) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-denominator, denominator);
  std::vector<RatVec> out;
  out.reserve(count);
  for (int s = 0; s < count; ++s) {
    RatVec u(dim);
    for (int i = 0; i < dim; ++i) u(i) = Rational(dist(rng), denominator);
    out.push_back(u);
  }
  return out;
}

// Per-sample comparison of learner values. A dominating construction must
// record zero losses.
inline DominanceReport audit_dominance(const Game& g, const Menu& candidate, const Menu& baseline,
                                       const std::vector<RatVec>& uO_samples, int jobs = 1) {
  DominanceReport rep;
  std::vector<int> outcome(uO_samples.size());
  parallel_for(static_cast<int>(uO_samples.size()), jobs, [&](int s) {
    Rational vc = learner_value(g, candidate, uO_samples[s]);
    Rational vb = learner_value(g, baseline, uO_samples[s]);
    outcome[s] = vc > vb ? 1 : (vc == vb ? 0 : -1);
  });
  for (size_t s = 0; s < uO_samples.size(); ++s) {
    if (outcome[s] > 0) ++rep.strict_wins;
    else if (outcome[s] == 0) ++rep.ties;
    else {
      ++rep.losses;
      if (!rep.first_loss_uO) rep.first_loss_uO = uO_samples[s];
    }
  }
  return rep;
}

}  // namespace menuforge
