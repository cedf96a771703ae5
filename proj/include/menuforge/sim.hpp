#pragma once

#include "menuforge/mean_based.hpp"
#include "menuforge/menus.hpp"
#include "menuforge/pareto.hpp"
#include "menuforge/trajectory.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <memory>

namespace menuforge {

// Full-information repeated play: both sides submit mixed strategies and the
// dynamics are tracked in expectation (no action sampling), so transcripts
// are deterministic given the specs and the seed is bookkeeping only.
struct Transcript {
  long T = 0;
  Eigen::MatrixXd X;  // T x m optimizer mixes
  Eigen::MatrixXd Y;  // T x n learner mixes
  std::uint64_t seed = 0;
};

class Learner {
 public:
  virtual ~Learner() = default;
  virtual Eigen::VectorXd act(long t) = 0;              // 1-based round index
  virtual void observe(const Eigen::VectorXd& x) = 0;   // optimizer mix of round t
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual Eigen::VectorXd act(long t) = 0;
  virtual void observe(const Eigen::VectorXd& y) = 0;
};

namespace detail {

inline Eigen::VectorXd uniform_mix(int n) {
  return Eigen::VectorXd::Constant(n, 1.0 / n);
}

// Euclidean projection onto the probability simplex (sorted threshold).
inline Eigen::VectorXd project_simplex(Eigen::VectorXd v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0;
  double theta = 0;
  int rho = 0;
  for (int i = 0; i < n; ++i) {
    css += u[i];
    double t = (css - 1.0) / (i + 1);
    if (u[i] - t > 0) {
      rho = i + 1;
      theta = t;
    }
  }
  for (int i = 0; i < n; ++i) v(i) = std::max(0.0, v(i) - theta);
  double s = v.sum();
  if (s > 0) v /= s;
  return v;
}

inline Eigen::MatrixXd uL_double(const Game& g) {
  Eigen::MatrixXd M(g.m, g.n);
  for (int i = 0; i < g.m; ++i)
    for (int j = 0; j < g.n; ++j) M(i, j) = to_double(g.uL(i, j));
  return M;
}

}  // namespace detail

enum class EtaSchedule { SqrtLnNOverT, SqrtLnNOverLittleT, InvSqrtT };

inline EtaSchedule parse_eta_schedule(const std::string& s, const std::string& regularizer) {
  if (s == "sqrt_ln_n_over_T" || (s.empty() && regularizer == "negentropy"))
    return EtaSchedule::SqrtLnNOverT;
  if (s == "sqrt_ln_n_over_t") return EtaSchedule::SqrtLnNOverLittleT;
  if (s == "inv_sqrt_T" || (s.empty() && regularizer == "quadratic"))
    return EtaSchedule::InvSqrtT;
  throw InputError("unknown eta schedule: " + s);
}

// Follow-the-regularized-leader over cumulative payoffs. Negentropy gives the
// closed-form softmax update (multiplicative weights); quadratic projects the
// scaled payoff vector onto the simplex.
class FtrlLearner : public Learner {
 public:
  FtrlLearner(const Game& g, std::string regularizer, EtaSchedule schedule, long T)
      : uL_(detail::uL_double(g)),
        n_(g.n),
        regularizer_(std::move(regularizer)),
        schedule_(schedule),
        T_(T),
        U_(Eigen::VectorXd::Zero(g.n)) {}

  Eigen::VectorXd act(long t) override {
    double eta = eta_at(t);
    if (regularizer_ == "negentropy") {
      Eigen::VectorXd z = eta * (U_.array() - U_.maxCoeff()).matrix();
      Eigen::VectorXd w = z.array().exp();
      return w / w.sum();
    }
    return detail::project_simplex(eta * U_);
  }

  void observe(const Eigen::VectorXd& x) override { U_ += uL_.transpose() * x; }

 private:
  double eta_at(long t) const {
    switch (schedule_) {
      case EtaSchedule::SqrtLnNOverT: return std::sqrt(std::log(double(n_)) / double(T_));
      case EtaSchedule::SqrtLnNOverLittleT:
        return std::sqrt(std::log(double(n_)) / double(std::max<long>(t, 1)));
      case EtaSchedule::InvSqrtT: return 1.0 / std::sqrt(double(T_));
    }
    return 0;
  }

  Eigen::MatrixXd uL_;
  int n_;
  std::string regularizer_;
  EtaSchedule schedule_;
  long T_;
  Eigen::VectorXd U_;
};

// Follow the leader; ties break to the lowest action index.
class FtlLearner : public Learner {
 public:
  explicit FtlLearner(const Game& g)
      : uL_(detail::uL_double(g)), U_(Eigen::VectorXd::Zero(g.n)) {}
  Eigen::VectorXd act(long) override {
    int best = 0;
    for (int j = 1; j < U_.size(); ++j)
      if (U_(j) > U_(best)) best = j;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(U_.size());
    y(best) = 1.0;
    return y;
  }
  void observe(const Eigen::VectorXd& x) override { U_ += uL_.transpose() * x; }

 private:
  Eigen::MatrixXd uL_;
  Eigen::VectorXd U_;
};

// Classical swap-regret reduction: n external-regret subroutines (here
// multiplicative weights); each round play the stationary distribution of the
// row-stochastic matrix of expert recommendations, and feed expert j the
// payoff vector scaled by the probability of having played j.
class SwapRegretLearner : public Learner {
 public:
  SwapRegretLearner(const Game& g, long T)
      : uL_(detail::uL_double(g)), n_(g.n), eta_(std::sqrt(std::log(double(g.n)) / double(T))) {
    U_.assign(n_, Eigen::VectorXd::Zero(n_));
  }

  Eigen::VectorXd act(long) override {
    Eigen::MatrixXd Q(n_, n_);
    for (int j = 0; j < n_; ++j) {
      Eigen::VectorXd z = eta_ * (U_[j].array() - U_[j].maxCoeff()).matrix();
      Eigen::VectorXd w = z.array().exp();
      Q.row(j) = (w / w.sum()).transpose();
    }
    // stationary distribution of Q by power iteration to 1e-12
    Eigen::VectorXd p = detail::uniform_mix(n_);
    for (int it = 0; it < 10000; ++it) {
      Eigen::VectorXd next = Q.transpose() * p;
      next /= next.sum();
      double delta = (next - p).cwiseAbs().sum();
      p = next;
      if (delta < 1e-12) break;
    }
    last_p_ = p;
    return p;
  }

  void observe(const Eigen::VectorXd& x) override {
    Eigen::VectorXd r = uL_.transpose() * x;
    for (int j = 0; j < n_; ++j) U_[j] += last_p_(j) * r;
  }

 private:
  Eigen::MatrixXd uL_;
  int n_;
  double eta_;
  std::vector<Eigen::VectorXd> U_;
  Eigen::VectorXd last_p_ = Eigen::VectorXd();
};

// One step of the approachability strategy for a target menu: inside the
// target, any response-satisfying mix for a default optimizer mix; outside,
// play the minimizer of the worst-case inner product of the next outer
// product with the separating direction (a small exact LP over y).
inline Eigen::VectorXd blackwell_learner_step(const Game& g, const Menu& target,
                                              const Eigen::VectorXd& avg_csp) {
  std::vector<Eigen::VectorXd> V;
  for (const auto& v : vertices_of(target.poly)) V.push_back(to_double_vec(v));
  Eigen::VectorXd proj;
  double d2 = detail::squared_distance_to_hull(avg_csp, V, &proj);
  RatVec theta_r(g.csp_dim());
  if (d2 < 1e-18) {
    // inside: solve exists y with x_default (x) y in target
    RatVec x = RatVec::Constant(g.m, Rational(1, g.m));
    const auto& verts = vertices_of(target.poly);
    const int nv = static_cast<int>(verts.size());
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
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j) {
        RatVec a = RatVec::Zero(nvars);
        for (int v = 0; v < nv; ++v) a(v) = verts[v](g.idx(i, j));
        a(nv + j) -= x(i);
        eq.push_back({a, 0});
      }
    LpResult res = solve_lp_nonneg(RatVec::Zero(nvars), {}, eq, LpSense::Min);
    if (res.status != LpStatus::Optimal)
      throw InputError("target menu fails response satisfiability at the uniform mix");
    Eigen::VectorXd y(g.n);
    for (int j = 0; j < g.n; ++j) y(j) = to_double(res.point(nv + j));
    double s = y.sum();
    return s > 0 ? Eigen::VectorXd(y / s) : detail::uniform_mix(g.n);
  }
  Eigen::VectorXd theta = avg_csp - proj;
  const std::int64_t den = 1 << 30;
  for (int r = 0; r < g.csp_dim(); ++r)
    theta_r(r) = Rational(Integer(llround(theta(r) * den)), Integer(den));
  // min_y max_i sum_j theta[i,j] y_j over the simplex: vars (y, z)
  const int nvars = g.n + 1;
  std::vector<LinearConstraint> ineq;
  for (int i = 0; i < g.m; ++i) {
    RatVec a = RatVec::Zero(nvars);
    for (int j = 0; j < g.n; ++j) a(j) = theta_r(g.idx(i, j));
    a(g.n) = -1;
    ineq.push_back({a, 0});
  }
  std::vector<LinearConstraint> eq;
  {
    RatVec a = RatVec::Zero(nvars);
    for (int j = 0; j < g.n; ++j) a(j) = 1;
    eq.push_back({a, 1});
  }
  RatVec obj = RatVec::Zero(nvars);
  obj(g.n) = 1;
  // z is free in sign; shift by a constant bound instead of splitting: the
  // payoff-like products stay within [-2, 2], so z + 4 >= 0 is safe.
  for (auto& c : ineq) c.offset += 4 * c.normal(g.n) * Rational(-1);  // a.z uses z' = z + 4
  LpResult res = solve_lp_nonneg(obj, ineq, eq, LpSense::Min);
  if (res.status != LpStatus::Optimal) throw InputError("blackwell step LP failed");
  Eigen::VectorXd y(g.n);
  for (int j = 0; j < g.n; ++j) y(j) = to_double(res.point(j));
  double s = y.sum();
  return s > 0 ? Eigen::VectorXd(y / s) : detail::uniform_mix(g.n);
}

// Approachability learner holding a running average CSP; the projection in
// the outside branch reuses blackwell_learner_step.
class BlackwellLearner : public Learner {
 public:
  BlackwellLearner(const Game& g, Menu target)
      : game_(g), target_(std::move(target)), avg_(Eigen::VectorXd::Zero(g.csp_dim())) {}

  Eigen::VectorXd act(long t) override {
    if (t == 1) {
      last_y_ = detail::uniform_mix(game_.n);
      Eigen::VectorXd inside = blackwell_learner_step(game_, target_, pick_inside_seed());
      last_y_ = inside;
      return inside;
    }
    last_y_ = blackwell_learner_step(game_, target_, avg_);
    return last_y_;
  }

  void observe(const Eigen::VectorXd& x) override {
    ++t_;
    Eigen::VectorXd outer(game_.csp_dim());
    for (int i = 0; i < game_.m; ++i)
      for (int j = 0; j < game_.n; ++j) outer(game_.idx(i, j)) = x(i) * last_y_(j);
    avg_ += (outer - avg_) / double(t_);
  }

 private:
  Eigen::VectorXd pick_inside_seed() const {
    // any point of the target works as a trivially-inside average
    return to_double_vec(vertices_of(target_.poly).front());
  }

  Game game_;
  Menu target_;
  Eigen::VectorXd avg_;
  Eigen::VectorXd last_y_ = Eigen::VectorXd();
  long t_ = 0;
};

// Largest-remainder rounding of a CSP to the C-grid (coordinates are
// integer multiples of 1/C summing to C).
inline std::vector<long> round_to_grid(const RatVec& csp, long C) {
  const int d = static_cast<int>(csp.size());
  std::vector<long> units(d);
  std::vector<std::pair<Rational, int>> rem;
  long total = 0;
  for (int r = 0; r < d; ++r) {
    Rational scaled = csp(r) * C;
    Integer fl = boost::multiprecision::numerator(scaled) /
                 boost::multiprecision::denominator(scaled);
    units[r] = fl.convert_to<long>();
    total += units[r];
    rem.push_back({scaled - Rational(fl), r});
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  for (int k = 0; total < C && k < d; ++k, ++total) ++units[rem[k].second];
  return units;
}

struct ProtocolParams {
  long C = 0;        // smallest integer > sqrt(T)
  long listen = 0;   // mn * ceil(log2 C) communication rounds
};

inline ProtocolParams protocol_params(const Game& g, long T) {
  ProtocolParams p;
  p.C = static_cast<long>(std::floor(std::sqrt(double(T)))) + 1;
  long bits = 1;
  while ((1L << bits) < p.C + 1) ++bits;
  p.listen = static_cast<long>(g.m) * g.n * bits;
  // Capacity check: m^listen codes must cover (C+1)^(mn-1) coordinate tuples.
  double have = p.listen * std::log(double(g.m));
  double need = (g.m * g.n - 1) * std::log(double(p.C + 1));
  if (have < need) throw InputError("protocol horizon too short to encode the net index");
  return p;
}

// Digits of the net point: the first mn-1 grid coordinates as one mixed-radix
// number in base (C+1), emitted in base m, most significant digit first.
inline std::vector<int> protocol_encode(const Game& g, const ProtocolParams& p,
                                        const std::vector<long>& units) {
  Integer code = 0;
  for (int r = 0; r < g.csp_dim() - 1; ++r) {
    code *= Integer(p.C + 1);
    code += Integer(units[r]);
  }
  std::vector<int> digits(p.listen, 0);
  for (long d = p.listen - 1; d >= 0; --d) {
    digits[d] = (code % g.m).convert_to<int>();
    code /= g.m;
  }
  return digits;
}

inline std::optional<std::vector<long>> protocol_decode(const Game& g, const ProtocolParams& p,
                                                        const std::vector<int>& digits) {
  Integer code = 0;
  for (int d : digits) {
    code *= g.m;
    code += d;
  }
  std::vector<long> units(g.csp_dim(), 0);
  for (int r = g.csp_dim() - 2; r >= 0; --r) {
    units[r] = (code % (p.C + 1)).convert_to<long>();
    code /= (p.C + 1);
  }
  if (code != 0) return std::nullopt;
  long sum = 0;
  for (int r = 0; r < g.csp_dim() - 1; ++r) sum += units[r];
  if (sum > p.C) return std::nullopt;
  units[g.csp_dim() - 1] = p.C - sum;
  return units;
}

// The menu-extension learner: listens for a net-CSP index, then follows the
// cyclic joint schedule realizing it (pair (i,j) for C*phi(i,j) rounds per
// cycle, lexicographic); any optimizer deviation triggers a reset to the base
// algorithm, ignoring prior history.
class ProtocolLearner : public Learner {
 public:
  ProtocolLearner(const Game& g, Menu extension, std::unique_ptr<Learner> base, long T)
      : game_(g), extension_(std::move(extension)), base_(std::move(base)),
        params_(protocol_params(g, T)) {}

  Eigen::VectorXd act(long t) override {
    if (defected_) return base_->act(++base_t_);
    if (t <= params_.listen) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(game_.n);
      y(0) = 1.0;
      return y;
    }
    if (t == params_.listen + 1 && !decoded_) {
      auto units = protocol_decode(game_, params_, digits_);
      if (units && net_point_near_extension(*units)) {
        units_ = *units;
        build_cycle();
      } else {
        defect();
        return base_->act(++base_t_);
      }
      decoded_ = true;
    }
    long pos = (t - params_.listen - 1) % params_.C;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(game_.n);
    y(cycle_[pos].second) = 1.0;
    return y;
  }

  void observe(const Eigen::VectorXd& x) override {
    ++t_;
    if (defected_) {
      base_->observe(x);
      return;
    }
    int top = 0;
    for (int i = 1; i < game_.m; ++i)
      if (x(i) > x(top)) top = i;
    if (t_ <= params_.listen) {
      digits_.push_back(top);
      return;
    }
    long pos = (t_ - params_.listen - 1) % params_.C;
    bool pure = x(top) > 1.0 - 1e-9;
    if (!decoded_ || !pure || top != cycle_[pos].first) defect();
  }

  bool defected() const { return defected_; }

 private:
  void defect() {
    defected_ = true;
    base_t_ = 0;
  }

  bool net_point_near_extension(const std::vector<long>& units) {
    // exact check: some z in the extension has |z - phi'|_inf <= 1/C
    const auto& verts = vertices_of(extension_.poly);
    const int nv = static_cast<int>(verts.size());
    std::vector<LinearConstraint> ineq;
    std::vector<LinearConstraint> eq;
    {
      RatVec a = RatVec::Constant(nv, 1);
      eq.push_back({a, 1});
    }
    for (int r = 0; r < game_.csp_dim(); ++r) {
      RatVec a(nv);
      for (int v = 0; v < nv; ++v) a(v) = verts[v](r);
      Rational target(units[r], params_.C);
      Rational tol(1, params_.C);
      ineq.push_back({a, target + tol});
      RatVec na = -a;
      ineq.push_back({na, tol - target});
    }
    LpResult res = solve_lp_nonneg(RatVec::Zero(nv), ineq, eq, LpSense::Min);
    return res.status == LpStatus::Optimal;
  }

  void build_cycle() {
    cycle_.clear();
    for (int i = 0; i < game_.m; ++i)
      for (int j = 0; j < game_.n; ++j)
        for (long r = 0; r < units_[game_.idx(i, j)]; ++r) cycle_.push_back({i, j});
  }

  Game game_;
  Menu extension_;
  std::unique_ptr<Learner> base_;
  ProtocolParams params_;
  std::vector<int> digits_;
  std::vector<long> units_;
  std::vector<std::pair<int, int>> cycle_;
  bool decoded_ = false;
  bool defected_ = false;
  long t_ = 0;
  long base_t_ = 0;
};

// Fixture learners for the worked examples.
class FixedMixLearner : public Learner {
 public:
  explicit FixedMixLearner(Eigen::VectorXd y) : y_(std::move(y)) {}
  Eigen::VectorXd act(long) override { return y_; }
  void observe(const Eigen::VectorXd&) override {}

 private:
  Eigen::VectorXd y_;
};

class AlternateLearner : public Learner {
 public:
  AlternateLearner(int n, int odd_action, int even_action)
      : n_(n), odd_(odd_action), even_(even_action) {}
  Eigen::VectorXd act(long t) override {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    y(t % 2 == 1 ? odd_ : even_) = 1.0;
    return y;
  }
  void observe(const Eigen::VectorXd&) override {}

 private:
  int n_, odd_, even_;
};

// Plays `pre` until the optimizer's mix deviates from the watched pure
// action, then switches to `post` forever.
class GrimTriggerLearner : public Learner {
 public:
  GrimTriggerLearner(int n, int pre, int watch, int post)
      : n_(n), pre_(pre), watch_(watch), post_(post) {}
  Eigen::VectorXd act(long) override {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    y(triggered_ ? post_ : pre_) = 1.0;
    return y;
  }
  void observe(const Eigen::VectorXd& x) override {
    if (triggered_) return;
    int top = 0;
    for (int i = 1; i < x.size(); ++i)
      if (x(i) > x(top)) top = i;
    if (top != watch_ || x(top) < 1.0 - 1e-9) triggered_ = true;
  }

 private:
  int n_, pre_, watch_, post_;
  bool triggered_ = false;
};

// --- Optimizers ---------------------------------------------------------

class FixedMixOptimizer : public Optimizer {
 public:
  explicit FixedMixOptimizer(Eigen::VectorXd x) : x_(std::move(x)) {}
  Eigen::VectorXd act(long) override { return x_; }
  void observe(const Eigen::VectorXd&) override {}

 private:
  Eigen::VectorXd x_;
};

// Plays run-length blocks; holds the last block's mix when exhausted.
class ScheduleOptimizer : public Optimizer {
 public:
  explicit ScheduleOptimizer(std::vector<std::pair<Eigen::VectorXd, long>> blocks)
      : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw InputError("empty optimizer schedule");
  }
  Eigen::VectorXd act(long) override {
    while (block_ + 1 < blocks_.size() && used_ >= blocks_[block_].second) {
      used_ = 0;
      ++block_;
    }
    ++used_;
    return blocks_[block_].first;
  }
  void observe(const Eigen::VectorXd&) override {}

 private:
  std::vector<std::pair<Eigen::VectorXd, long>> blocks_;
  size_t block_ = 0;
  long used_ = 0;
};

inline std::vector<std::pair<Eigen::VectorXd, long>> schedule_to_double(const Schedule& s) {
  std::vector<std::pair<Eigen::VectorXd, long>> out;
  for (const auto& [x, r] : s.blocks) out.push_back({to_double_vec(x), r});
  return out;
}

// The optimizer side of the extension protocol: emit the net index digits,
// then follow the cyclic schedule (optionally defecting at a given round).
class ProtocolCooperativeOptimizer : public Optimizer {
 public:
  ProtocolCooperativeOptimizer(const Game& g, const ProtocolParams& params,
                               const std::vector<long>& units, long defect_at = -1)
      : game_(g), params_(params), units_(units), defect_at_(defect_at) {
    digits_ = protocol_encode(g, params, units);
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j)
        for (long r = 0; r < units_[g.idx(i, j)]; ++r) cycle_.push_back({i, j});
  }
  Eigen::VectorXd act(long t) override {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(game_.m);
    if (defect_at_ > 0 && t >= defect_at_) {
      x(game_.m - 1) = 1.0;  // off-script move
      return x;
    }
    if (t <= params_.listen) {
      x(digits_[t - 1]) = 1.0;
      return x;
    }
    long pos = (t - params_.listen - 1) % params_.C;
    x(cycle_[pos].first) = 1.0;
    return x;
  }
  void observe(const Eigen::VectorXd&) override {}

 private:
  Game game_;
  ProtocolParams params_;
  std::vector<long> units_;
  std::vector<int> digits_;
  std::vector<std::pair<int, int>> cycle_;
  long defect_at_;
};

// --- Specs and the run loop ----------------------------------------------

struct LearnerSpec {
  std::string kind;  // ftrl | ftl | swap_regret | blackwell | protocol
                     // fixture kinds: fixed | alternate | grim_trigger
  std::string regularizer = "negentropy";
  std::string eta_schedule;  // empty = default for the regularizer
  std::optional<Menu> target_menu;          // blackwell target / protocol extension
  std::shared_ptr<LearnerSpec> base;        // protocol fallback
  std::optional<Eigen::VectorXd> mix;       // fixed
  int odd_action = 0, even_action = 0;      // alternate
  int pre_action = 0, watch_action = 0, post_action = 0;  // grim_trigger
  std::string gamma_audit;  // informational rate description
};

struct OptimizerSpec {
  std::string kind;  // fixed | schedule | trajectory | exploiter | protocol_coop
  std::optional<Eigen::VectorXd> x;
  std::vector<std::pair<Eigen::VectorXd, long>> blocks;
  std::optional<Trajectory> trajectory;
  Rational trajectory_eps = Rational(1, 1000);
  std::optional<RatVec> uO;                 // exploiter objective
  std::optional<RatVec> protocol_target;    // protocol_coop target CSP
  long defect_at = -1;
};

inline std::unique_ptr<Learner> build_learner(const Game& g, const LearnerSpec& spec, long T) {
  if (spec.kind == "ftrl") {
    return std::make_unique<FtrlLearner>(g, spec.regularizer,
                                         parse_eta_schedule(spec.eta_schedule, spec.regularizer),
                                         T);
  }
  if (spec.kind == "ftl") return std::make_unique<FtlLearner>(g);
  if (spec.kind == "swap_regret") return std::make_unique<SwapRegretLearner>(g, T);
  if (spec.kind == "blackwell") {
    if (!spec.target_menu) throw InputError("blackwell learner needs a target menu");
    return std::make_unique<BlackwellLearner>(g, *spec.target_menu);
  }
  if (spec.kind == "protocol") {
    if (!spec.target_menu) throw InputError("protocol learner needs an extension menu");
    if (!spec.base) throw InputError("protocol learner needs a base spec");
    return std::make_unique<ProtocolLearner>(g, *spec.target_menu,
                                             build_learner(g, *spec.base, T), T);
  }
  if (spec.kind == "fixed") {
    if (!spec.mix) throw InputError("fixed learner needs a mix");
    return std::make_unique<FixedMixLearner>(*spec.mix);
  }
  if (spec.kind == "alternate")
    return std::make_unique<AlternateLearner>(g.n, spec.odd_action, spec.even_action);
  if (spec.kind == "grim_trigger")
    return std::make_unique<GrimTriggerLearner>(g.n, spec.pre_action, spec.watch_action,
                                                spec.post_action);
  throw InputError("unknown learner kind: " + spec.kind);
}

// Picks the mean-based-menu vertex maximizing uO (ties to the learner), and
// returns its witness trajectory as a playable optimizer spec.
inline OptimizerSpec exploiter_strategy(const Game& g, const RatVec& uO) {
  MeanBasedMenu mb = build_mb_menu(g);
  const auto& verts = vertices_of(mb.menu.poly);
  RatVec ul = g.uL_flat();
  int best = 0;
  for (int i = 1; i < static_cast<int>(verts.size()); ++i) {
    Rational du = uO.dot(verts[i]) - uO.dot(verts[best]);
    if (du > 0 || (du == 0 && ul.dot(verts[i]) > ul.dot(verts[best]))) best = i;
  }
  OptimizerSpec spec;
  spec.kind = "trajectory";
  Trajectory tau = mb.witnesses[best];
  if (tau.kind == TrajectoryKind::Spiral) tau = unroll_spiral(g, tau, 24);
  spec.trajectory = tau;
  spec.uO = uO;
  return spec;
}

inline std::unique_ptr<Optimizer> build_optimizer(const Game& g, const OptimizerSpec& spec,
                                                  long T) {
  if (spec.kind == "fixed") {
    if (!spec.x) throw InputError("fixed optimizer needs a mix");
    return std::make_unique<FixedMixOptimizer>(*spec.x);
  }
  if (spec.kind == "schedule") return std::make_unique<ScheduleOptimizer>(spec.blocks);
  if (spec.kind == "trajectory") {
    if (!spec.trajectory) throw InputError("trajectory optimizer needs a trajectory");
    Trajectory tau = *spec.trajectory;
    if (tau.kind == TrajectoryKind::Spiral) tau = unroll_spiral(g, tau, 24);
    Schedule s = discretize(g, tau, T, spec.trajectory_eps, validate(g));
    return std::make_unique<ScheduleOptimizer>(schedule_to_double(s));
  }
  if (spec.kind == "exploiter") {
    if (!spec.uO) throw InputError("exploiter optimizer needs uO");
    OptimizerSpec traj = exploiter_strategy(g, *spec.uO);
    traj.trajectory_eps = spec.trajectory_eps;
    return build_optimizer(g, traj, T);
  }
  if (spec.kind == "protocol_coop") {
    if (!spec.protocol_target) throw InputError("protocol_coop optimizer needs a target CSP");
    ProtocolParams params = protocol_params(g, T);
    auto units = round_to_grid(*spec.protocol_target, params.C);
    return std::make_unique<ProtocolCooperativeOptimizer>(g, params, units, spec.defect_at);
  }
  throw InputError("unknown optimizer kind: " + spec.kind);
}

inline Transcript run(const Game& g, Learner& learner, Optimizer& optimizer, long T,
                      std::uint64_t seed) {
  Transcript tr;
  tr.T = T;
  tr.seed = seed;
  tr.X.resize(T, g.m);
  tr.Y.resize(T, g.n);
  for (long t = 1; t <= T; ++t) {
    Eigen::VectorXd x = optimizer.act(t);
    Eigen::VectorXd y = learner.act(t);
    tr.X.row(t - 1) = x.transpose();
    tr.Y.row(t - 1) = y.transpose();
    learner.observe(x);
    optimizer.observe(y);
  }
  return tr;
}

inline Transcript run(const Game& g, const LearnerSpec& lspec, const OptimizerSpec& ospec, long T,
                      std::uint64_t seed) {
  auto learner = build_learner(g, lspec, T);
  auto optimizer = build_optimizer(g, ospec, T);
  return run(g, *learner, *optimizer, T, seed);
}

inline Eigen::VectorXd empirical_csp(const Game& g, const Transcript& tr) {
  if (tr.T == 0) throw InputError("empty transcript");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.csp_dim());
  for (long t = 0; t < tr.T; ++t) {
    for (int i = 0; i < g.m; ++i)
      for (int j = 0; j < g.n; ++j) acc(g.idx(i, j)) += tr.X(t, i) * tr.Y(t, j);
  }
  acc /= double(tr.T);
  double s = acc.sum();
  if (s > 0) acc /= s;
  return acc;
}

// Rational view of the empirical CSP at the documented denominator.
inline RatVec empirical_csp_rational(const Game& g, const Transcript& tr) {
  return round_to_denominator(empirical_csp(g, tr), 1000000000);
}

struct RegretCurves {
  std::vector<double> regret;       // prefix external regret
  std::vector<double> swap_regret;  // prefix swap regret
};

inline RegretCurves regret_curves(const Game& g, const Transcript& tr) {
  Eigen::MatrixXd uL = detail::uL_double(g);
  RegretCurves out;
  out.regret.reserve(tr.T);
  out.swap_regret.reserve(tr.T);
  Eigen::VectorXd U = Eigen::VectorXd::Zero(g.n);  // cumulative per fixed action
  double realized = 0;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(g.n, g.n);  // swap gains j -> j*
  for (long t = 0; t < tr.T; ++t) {
    Eigen::VectorXd x = tr.X.row(t).transpose();
    Eigen::VectorXd y = tr.Y.row(t).transpose();
    Eigen::VectorXd per_action = uL.transpose() * x;
    U += per_action;
    realized += per_action.dot(y);
    for (int j = 0; j < g.n; ++j)
      for (int js = 0; js < g.n; ++js) G(j, js) += y(j) * (per_action(js) - per_action(j));
    out.regret.push_back(U.maxCoeff() - realized);
    double s = 0;
    for (int j = 0; j < g.n; ++j) s += std::max(0.0, G.row(j).maxCoeff());
    out.swap_regret.push_back(s);
  }
  return out;
}

// Counts rounds where some action trailing the historical best (through the
// previous round, the information the learner actually had) by more than
// gamma(t) received probability above gamma(t).
inline long mean_based_audit(const Game& g, const Transcript& tr,
                             const std::function<double(long)>& gamma) {
  Eigen::MatrixXd uL = detail::uL_double(g);
  Eigen::VectorXd U = Eigen::VectorXd::Zero(g.n);
  long violations = 0;
  for (long t = 1; t <= tr.T; ++t) {
    if (t > 1) {
      double thr = gamma(t);
      double avg_best = U.maxCoeff() / double(t - 1);
      bool bad = false;
      for (int j = 0; j < g.n && !bad; ++j) {
        double avg_j = U(j) / double(t - 1);
        if (avg_best - avg_j > thr && tr.Y(t - 1, j) > thr) bad = true;
      }
      if (bad) ++violations;
    }
    U += uL.transpose() * tr.X.row(t - 1).transpose();
  }
  return violations;
}

// LearnerSpec factory for the extension protocol (the op-level surface).
inline LearnerSpec protocol_learner(const Game& g, const Menu& extension, const LearnerSpec& base,
                                    long T, const std::optional<Menu>& base_menu = std::nullopt) {
  if (base_menu) {
    for (const auto& v : vertices_of(base_menu->poly)) {
      if (!contains_point(extension.poly, v))
        throw InputError("extension menu does not contain the base menu");
    }
  }
  (void)T;
  LearnerSpec spec;
  spec.kind = "protocol";
  spec.target_menu = extension;
  spec.base = std::make_shared<LearnerSpec>(base);
  return spec;
}

inline void write_transcript_csv(const Game& g, const Transcript& tr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path);
  out << "t";
  for (int i = 0; i < g.m; ++i) out << ",x_" << (i + 1);
  for (int j = 0; j < g.n; ++j) out << ",y_" << (j + 1);
  out << ",regret_prefix,swap_regret_prefix\n";
  RegretCurves curves = regret_curves(g, tr);
  out.precision(17);
  for (long t = 0; t < tr.T; ++t) {
    out << (t + 1);
    for (int i = 0; i < g.m; ++i) out << "," << tr.X(t, i);
    for (int j = 0; j < g.n; ++j) out << "," << tr.Y(t, j);
    out << "," << curves.regret[t] << "," << curves.swap_regret[t] << "\n";
  }
}

}  // namespace menuforge
