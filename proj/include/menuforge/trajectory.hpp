#pragma once

#include "menuforge/game.hpp"

#include <vector>

namespace menuforge {

// One segment of continuous-time play: the optimizer holds mix x for
// duration t while the learner responds with pure action b.
struct Segment {
  RatVec x;
  Rational t;
  int b = 0;
};

enum class TrajectoryKind { Plain, Spiral };

// Plain trajectories start from the zero state; spirals start from offset X0
// (nonzero, nonnegative) and must return to a positive multiple of it.
struct Trajectory {
  std::vector<Segment> segments;
  TrajectoryKind kind = TrajectoryKind::Plain;
  std::optional<RatVec> X0;

  Rational total_duration() const {
    Rational s = 0;
    for (const auto& seg : segments) s += seg.t;
    return s;
  }
};

struct TrajectoryCheck {
  bool valid = true;
  int first_bad_segment = -1;  // 0-based
  std::string reason;
};

inline void check_well_formed(const Game& g, const Trajectory& tau) {
  if (tau.segments.empty()) throw InputError("trajectory has no segments");
  for (const auto& seg : tau.segments) {
    if (seg.t <= 0) throw InputError("segment duration must be positive");
    if (seg.x.size() != g.m || !is_distribution(seg.x))
      throw InputError("segment mix is not a distribution over optimizer actions");
    if (seg.b < 0 || seg.b >= g.n) throw InputError("segment action out of range");
  }
  if (tau.kind == TrajectoryKind::Spiral) {
    if (!tau.X0) throw InputError("spiral requires an offset start X0");
    Rational norm = 0;
    for (Eigen::Index i = 0; i < tau.X0->size(); ++i) {
      if ((*tau.X0)(i) < 0) throw InputError("X0 must be nonnegative");
      norm += (*tau.X0)(i);
    }
    if (norm == 0) throw InputError("spiral X0 must be nonzero");
    if (tau.X0->size() != g.m) throw InputError("X0 dimension mismatch");
  } else if (tau.X0) {
    throw InputError("plain trajectory must not carry X0");
  }
}

// Checks b_i in BR(avg before) and b_i in BR(avg after) per segment, exactly.
// For plain trajectories the start state is zero, so the i=1 start condition
// is vacuous. For spirals the closure X_k = lambda X0 (lambda > 1) is also
// verified.
inline TrajectoryCheck validate_trajectory(const Game& g, const Trajectory& tau) {
  check_well_formed(g, tau);
  TrajectoryCheck out;
  RatVec X = (tau.kind == TrajectoryKind::Spiral) ? *tau.X0 : RatVec::Zero(g.m).eval();
  Rational mass = 0;
  for (Eigen::Index i = 0; i < X.size(); ++i) mass += X(i);

  auto normalized = [&](const RatVec& v, const Rational& total) {
    RatVec x(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) x(i) = v(i) / total;
    return x;
  };

  for (size_t i = 0; i < tau.segments.size(); ++i) {
    const Segment& seg = tau.segments[i];
    if (mass > 0) {
      auto br = best_responses(g, normalized(X, mass));
      if (!br.count(seg.b)) {
        out.valid = false;
        out.first_bad_segment = static_cast<int>(i);
        out.reason = "action is not a best response at the segment start";
        return out;
      }
    }
    X += seg.t * seg.x;
    mass += seg.t;
    auto br = best_responses(g, normalized(X, mass));
    if (!br.count(seg.b)) {
      out.valid = false;
      out.first_bad_segment = static_cast<int>(i);
      out.reason = "action is not a best response at the segment end";
      return out;
    }
  }
  if (tau.kind == TrajectoryKind::Spiral) {
    // X_k = lambda X0 with lambda > 1: exact colinearity and growth.
    const RatVec& X0 = *tau.X0;
    Rational n0 = 0, nk = 0;
    for (Eigen::Index i = 0; i < X0.size(); ++i) {
      n0 += X0(i);
      nk += X(i);
    }
    for (Eigen::Index i = 0; i < X0.size(); ++i) {
      if (X(i) * n0 != X0(i) * nk) {
        out.valid = false;
        out.first_bad_segment = static_cast<int>(tau.segments.size()) - 1;
        out.reason = "spiral does not close on a multiple of X0";
        return out;
      }
    }
    if (nk <= n0) {
      out.valid = false;
      out.reason = "spiral scale factor must exceed 1";
      return out;
    }
  }
  return out;
}

// Prof(tau) = sum_i t_i (x_i (x) b_i) / sum_i t_i, exact.
inline RatVec profile(const Game& g, const Trajectory& tau) {
  check_well_formed(g, tau);
  RatVec acc = RatVec::Zero(g.csp_dim());
  Rational total = tau.total_duration();
  for (const auto& seg : tau.segments) {
    for (int i = 0; i < g.m; ++i) acc(g.idx(i, seg.b)) += seg.t * seg.x(i);
  }
  for (Eigen::Index i = 0; i < acc.size(); ++i) acc(i) /= total;
  return acc;
}

// u_L(Prof(tau)) must exactly equal the best response payoff against the
// optimizer's marginal.
inline bool zero_regret_check(const Game& g, const Trajectory& tau) {
  RatVec prof = profile(g, tau);
  RatVec ul = g.uL_flat();
  Rational lhs = ul.dot(prof);
  RatVec marginal = g.optimizer_marginal(prof);
  Rational rhs;
  bool first = true;
  for (int j = 0; j < g.n; ++j) {
    Rational v = g.learner_payoff(marginal, j);
    if (first || v > rhs) rhs = v;
    first = false;
  }
  return lhs == rhs;
}

// A compressed round schedule: run-length encoded optimizer mixes.
struct Schedule {
  std::vector<std::pair<RatVec, long>> blocks;

  long total_rounds() const {
    long t = 0;
    for (const auto& [x, r] : blocks) t += r;
    return t;
  }
  std::vector<RatVec> expand() const {
    std::vector<RatVec> out;
    out.reserve(total_rounds());
    for (const auto& [x, r] : blocks)
      for (long k = 0; k < r; ++k) out.push_back(x);
    return out;
  }
};

// Finite-horizon discretization of a plain trajectory (durations are
// normalized internally; profiles are scale invariant). Each segment gets an
// optional perturbation prefix of floor(eps * t_i * T) rounds of a mix that
// strictly incentivizes b_i, followed by floor(t_i * T) rounds of x_i.
inline Schedule discretize(const Game& g, const Trajectory& tau, long T, const Rational& eps,
                           const ValidationReport& rep) {
  if (tau.kind != TrajectoryKind::Plain) throw InputError("discretize expects a plain trajectory");
  check_well_formed(g, tau);
  if (eps < 0) throw InputError("eps must be nonnegative");
  Rational total = tau.total_duration();
  Schedule sched;
  for (const auto& seg : tau.segments) {
    Rational t_norm = seg.t / total;
    if (eps > 0) {
      if (!rep.strict_witness[seg.b])
        throw InputError("no strictly incentivizing mix exists for segment action");
      Rational pr = eps * t_norm * T;
      long p = static_cast<long>(Integer(boost::multiprecision::numerator(pr) /
                                         boost::multiprecision::denominator(pr))
                                     .convert_to<long long>());
      if (p > 0) sched.blocks.push_back({*rep.strict_witness[seg.b], p});
    }
    Rational rr = t_norm * T;
    long r = static_cast<long>(Integer(boost::multiprecision::numerator(rr) /
                                       boost::multiprecision::denominator(rr))
                                   .convert_to<long long>());
    if (r > 0) sched.blocks.push_back({seg.x, r});
  }
  return sched;
}

// Unrolls a spiral into a plain trajectory: an initial ray segment followed
// by n scaled copies. Prof of the result converges to Prof of the spiral as
// n grows.
inline Trajectory unroll_spiral(const Game& g, const Trajectory& spiral, int copies) {
  if (spiral.kind != TrajectoryKind::Spiral) return spiral;
  check_well_formed(g, spiral);
  const RatVec& X0 = *spiral.X0;
  Rational n0 = 0;
  for (Eigen::Index i = 0; i < X0.size(); ++i) n0 += X0(i);
  RatVec x0(X0.size());
  for (Eigen::Index i = 0; i < X0.size(); ++i) x0(i) = X0(i) / n0;
  auto br = best_responses(g, x0);
  int b0 = *br.begin();
  Rational lambda = (n0 + spiral.total_duration()) / n0;

  Trajectory out;
  out.kind = TrajectoryKind::Plain;
  out.segments.push_back({x0, n0, b0});
  Rational scale = 1;
  for (int c = 0; c < copies; ++c) {
    for (const auto& seg : spiral.segments) out.segments.push_back({seg.x, seg.t * scale, seg.b});
    scale *= lambda;
  }
  return out;
}

}  // namespace menuforge
