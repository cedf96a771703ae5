#include "menuforge/game.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace menuforge;

namespace {

// The 3x2 counterexample game: optimizer actions N, Y; learner actions A, B, C.
Game counterexample_game() {
  Game g;
  g.m = 2;
  g.n = 3;
  g.uL = RatMat(2, 3);
  g.uL << Rational(0), Rational(-1, 6), Rational(-1, 2),
          Rational(0), Rational(1, 3), Rational(1, 2);
  return g;
}

constexpr int N = 0, Y = 1;
constexpr int A = 0, B = 1, C = 2;

Game rps_game() {
  // u_L(a_i, a_j): 0 on the diagonal, +1 when the learner plays one ahead,
  // -1 when one behind.
  Game g;
  g.m = 3;
  g.n = 3;
  g.uL = RatMat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    g.uL(i, (i + 1) % 3) = 1;
    g.uL(i, (i + 2) % 3) = -1;
  }
  return g;
}

RatVec mix2(const Rational& p) { return rat_vec({p, 1 - p}); }

}  // namespace

TEST_CASE("validation of the counterexample game") {
  Game g = counterexample_game();
  ValidationReport rep = validate(g);
  CHECK(rep.menu_ok());
  CHECK(rep.unique_phi_plus);
  CHECK(rep.istar == Y);
  CHECK(rep.jstar == C);
  CHECK(g.uL(rep.istar, rep.jstar) == Rational(1, 2));
  for (int j = 0; j < 3; ++j) CHECK(rep.learner_actions[j] == ActionClass::NonDominated);
}

TEST_CASE("duplicate learner columns are weakly dominated") {
  Game g;
  g.m = 2;
  g.n = 3;
  g.uL = RatMat(2, 3);
  g.uL << Rational(1, 2), Rational(1, 2), Rational(0),
          Rational(-1, 4), Rational(-1, 4), Rational(1, 4);
  ValidationReport rep = validate(g);
  CHECK(rep.learner_actions[0] == ActionClass::WeaklyDominated);
  CHECK(rep.learner_actions[1] == ActionClass::WeaklyDominated);
  CHECK(rep.learner_actions[2] == ActionClass::NonDominated);
  CHECK(!rep.menu_ok());
}

TEST_CASE("rps validates with no dominated actions") {
  ValidationReport rep = validate(rps_game());
  CHECK(rep.menu_ok());
  CHECK(!rep.unique_phi_plus);  // three winning pure pairs tie at +1
  for (int j = 0; j < 3; ++j) CHECK(rep.learner_actions[j] == ActionClass::NonDominated);
}

TEST_CASE("strictly dominated actions are classified") {
  Game g;
  g.m = 2;
  g.n = 3;
  g.uL = RatMat(2, 3);
  g.uL << Rational(1), Rational(0), Rational(-1, 2),
          Rational(-1, 4), Rational(1, 2), Rational(-1, 3);
  // Action 2 is never a best response.
  ValidationReport rep = validate(g);
  CHECK(rep.learner_actions[2] == ActionClass::StrictlyDominated);
}

TEST_CASE("payoff range is enforced") {
  Game g;
  g.m = 1;
  g.n = 1;
  g.uL = RatMat(1, 1);
  g.uL(0, 0) = Rational(3, 2);
  CHECK_THROWS_AS(validate(g), InputError);
}

TEST_CASE("best responses from the counterexample game") {
  Game g = counterexample_game();
  SECTION("N/3 + 2Y/3 ties B and C") {
    auto br = best_responses(g, mix2(Rational(1, 3)));
    CHECK(br == std::set<int>{B, C});
  }
  SECTION("2N/3 + Y/3 ties A and B") {
    auto br = best_responses(g, mix2(Rational(2, 3)));
    CHECK(br == std::set<int>{A, B});
  }
  SECTION("pure N gives A") {
    auto br = best_responses(g, mix2(Rational(1)));
    CHECK(br == std::set<int>{A});
  }
}

TEST_CASE("zero-sum values") {
  SECTION("counterexample game has U_ZS = 0") {
    ZeroSumResult zs = zero_sum_value(counterexample_game());
    CHECK(zs.value == 0);
    CHECK(zs.dual_value == 0);
  }
  SECTION("rps has U_ZS = 0") {
    ZeroSumResult zs = zero_sum_value(rps_game());
    CHECK(zs.value == 0);
    CHECK(zs.dual_value == 0);
  }
  SECTION("1x1 game") {
    Game g;
    g.m = 1;
    g.n = 1;
    g.uL = RatMat(1, 1);
    g.uL(0, 0) = Rational(1, 3);
    ZeroSumResult zs = zero_sum_value(g);
    CHECK(zs.value == Rational(1, 3));
  }
  SECTION("primal and dual agree on assorted games") {
    Game g;
    g.m = 2;
    g.n = 2;
    g.uL = RatMat(2, 2);
    g.uL << Rational(1), Rational(-1, 2), Rational(-1, 3), Rational(3, 4);
    ZeroSumResult zs = zero_sum_value(g);
    CHECK(zs.value == zs.dual_value);
    // The witness pair certifies the saddle value on both sides.
    Rational worst_for_x = g.learner_payoff(zs.x_zs, 0);
    for (int j = 1; j < g.n; ++j)
      worst_for_x = std::max(worst_for_x, g.learner_payoff(zs.x_zs, j));
    CHECK(worst_for_x == zs.value);
  }
}

TEST_CASE("regret and swap regret of Prof(tau*)") {
  Game g = counterexample_game();
  // Prof(tau*) = 1/6 (N x C) + 1/3 (Y x C) + 1/2 (N x B)
  RatVec phi = RatVec::Zero(6);
  phi(g.idx(N, C)) = Rational(1, 6);
  phi(g.idx(Y, C)) = Rational(1, 3);
  phi(g.idx(N, B)) = Rational(1, 2);
  CHECK(regret(g, phi) == 0);
  CHECK(swap_regret(g, phi) == Rational(1, 12));
}

TEST_CASE("pure best-response profile has zero regrets") {
  Game g = counterexample_game();
  RatVec phi = g.pure_csp(Y, C);
  CHECK(regret(g, phi) == 0);
  CHECK(swap_regret(g, phi) == 0);
}

TEST_CASE("rps diagonal CSP has regret 0 and swap regret 1") {
  Game g = rps_game();
  RatVec phi = RatVec::Zero(9);
  for (int i = 0; i < 3; ++i) phi(g.idx(i, i)) = Rational(1, 3);
  CHECK(regret(g, phi) == 0);
  CHECK(swap_regret(g, phi) == 1);
}

TEST_CASE("swap regret is nonnegative and bounds regret on products") {
  Game g = counterexample_game();
  std::vector<Rational> ps = {Rational(0), Rational(1, 5), Rational(1, 2), Rational(7, 8),
                              Rational(1)};
  for (const auto& p : ps) {
    for (int j = 0; j < g.n; ++j) {
      RatVec y = RatVec::Zero(g.n);
      y(j) = 1;
      RatVec phi = g.product_csp(mix2(p), y);
      CHECK(swap_regret(g, phi) >= 0);
      CHECK(regret(g, phi) <= swap_regret(g, phi));
    }
  }
}

TEST_CASE("grid of best-response products has zero regrets") {
  Game g = counterexample_game();
  for (int k = 0; k <= 24; ++k) {
    RatVec x = mix2(Rational(k, 24));
    for (int j : best_responses(g, x)) {
      RatVec y = RatVec::Zero(g.n);
      y(j) = 1;
      RatVec phi = g.product_csp(x, y);
      CHECK(regret(g, phi) == 0);
      CHECK(swap_regret(g, phi) == 0);
    }
  }
}

TEST_CASE("mixture value is the weighted sum") {
  auto value = [](const RatVec& uo) { return uo(0); };
  SECTION("single component") {
    std::vector<std::pair<Rational, RatVec>> comps = {{Rational(1), rat_vec({Rational(1, 2)})}};
    CHECK(mixture_value(value, comps) == Rational(1, 2));
  }
  SECTION("two equal components with values 0 and 1/2") {
    std::vector<std::pair<Rational, RatVec>> comps = {
        {Rational(1, 2), rat_vec({Rational(0)})},
        {Rational(1, 2), rat_vec({Rational(1, 2)})},
    };
    CHECK(mixture_value(value, comps) == Rational(1, 4));
  }
  SECTION("bad weights are rejected") {
    std::vector<std::pair<Rational, RatVec>> comps = {{Rational(1, 2), rat_vec({Rational(0)})}};
    CHECK_THROWS_AS(mixture_value(value, comps), InputError);
  }
}
