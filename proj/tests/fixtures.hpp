#pragma once

#include "menuforge/game.hpp"

#include <array>
#include <string>
#include <vector>

namespace fixtures {

using namespace menuforge;

// Optimizer actions N, Y; learner actions A, B, C.
inline Game counterexample_game() {
  Game g;
  g.m = 2;
  g.n = 3;
  g.uL = RatMat(2, 3);
  g.uL << Rational(0), Rational(-1, 6), Rational(-1, 2),
          Rational(0), Rational(1, 3), Rational(1, 2);
  return g;
}

inline constexpr int N = 0, Y = 1;
inline constexpr int A = 0, B = 1, C = 2;

inline Game rps_game() {
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

// The 2x2 game behind the oblivious-algorithm examples: optimizer actions
// A, B; learner actions P, Q with u_L(A,P)=1, u_L(B,P)=3/4 scaled variant.
// Payoffs are scaled into [-1,1] from the (1,3;2,0)/3 table.
inline Game examples_2x2_game() {
  Game g;
  g.m = 2;
  g.n = 2;
  g.uL = RatMat(2, 2);
  g.uL << Rational(1, 3), Rational(2, 3),
          Rational(1), Rational(0);
  return g;
}

inline constexpr int P = 0, Q = 1;

// Perturbed counterexample: eps entries in (0, 1/100], eps1 > eps2.
inline Game perturbed_game(const std::array<Rational, 6>& eps) {
  Game g;
  g.m = 2;
  g.n = 3;
  g.uL = RatMat(2, 3);
  g.uL << eps[0], Rational(-1, 6) + eps[2], Rational(-1, 2) + eps[4],
          eps[1], Rational(1, 3) + eps[3], Rational(1, 2) + eps[5];
  return g;
}

inline std::vector<std::array<Rational, 6>> perturbation_corpus() {
  using R = Rational;
  return {
      {R(1, 100), R(1, 200), R(1, 300), R(1, 400), R(1, 500), R(1, 600)},
      {R(1, 150), R(1, 300), R(1, 100), R(1, 100), R(1, 100), R(1, 100)},
      {R(1, 128), R(1, 512), R(1, 256), R(1, 1024), R(1, 2048), R(1, 4096)},
      {R(1, 101), R(1, 909), R(1, 303), R(1, 202), R(1, 404), R(1, 505)},
      {R(1, 1000), R(1, 2000), R(1, 3000), R(1, 1500), R(1, 2500), R(1, 3500)},
  };
}

struct NamedGame {
  std::string name;
  Game game;
};

// Validated corpus spanning 2x2 through 3x3 (plus the perturbed family).
inline std::vector<NamedGame> corpus() {
  std::vector<NamedGame> out;
  out.push_back({"counterexample", counterexample_game()});
  out.push_back({"rps", rps_game()});
  out.push_back({"examples_2x2", examples_2x2_game()});
  {
    Game g;  // asymmetric matching-pennies flavor
    g.m = 2;
    g.n = 2;
    g.uL = RatMat(2, 2);
    g.uL << Rational(1), Rational(-1, 2), Rational(-1, 3), Rational(2, 3);
    out.push_back({"pennies", g});
  }
  {
    Game g;  // coordination with distinct entries
    g.m = 2;
    g.n = 2;
    g.uL = RatMat(2, 2);
    g.uL << Rational(1), Rational(-1, 4), Rational(-1, 8), Rational(1, 2);
    out.push_back({"coordination", g});
  }
  {
    Game g;  // 2x3 with an interior middle cone
    g.m = 2;
    g.n = 3;
    g.uL = RatMat(2, 3);
    g.uL << Rational(1), Rational(1, 4), Rational(-3, 4),
            Rational(-1, 2), Rational(1, 8), Rational(1, 2);
    out.push_back({"wide_2x3", g});
  }
  {
    Game g;  // 3x2
    g.m = 3;
    g.n = 2;
    g.uL = RatMat(3, 2);
    g.uL << Rational(1), Rational(-1, 3),
            Rational(-1, 4), Rational(1, 2),
            Rational(1, 8), Rational(1, 16);
    out.push_back({"tall_3x2", g});
  }
  {
    Game g;  // 3x3 with unique top pair
    g.m = 3;
    g.n = 3;
    g.uL = RatMat(3, 3);
    g.uL << Rational(1), Rational(-1, 2), Rational(1, 4),
            Rational(-1, 3), Rational(7, 8), Rational(-1, 8),
            Rational(1, 5), Rational(-2, 5), Rational(3, 5);
    out.push_back({"diag_3x3", g});
  }
  int k = 0;
  for (const auto& eps : perturbation_corpus()) {
    out.push_back({"perturbed_" + std::to_string(k++), perturbed_game(eps)});
  }
  return out;
}

}  // namespace fixtures
