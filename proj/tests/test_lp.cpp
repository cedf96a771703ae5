#include "menuforge/lp.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace menuforge;

namespace {

HalfspaceSystem delta2() { return simplex_system(2); }

}  // namespace

TEST_CASE("simplex corner maximum") {
  RatVec obj = rat_vec({1, 0});
  LpResult res = solve_lp(obj, delta2(), LpSense::Max);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == 1);
  CHECK(res.point(0) == 1);
  CHECK(res.point(1) == 0);
}

TEST_CASE("contradictory bounds are infeasible") {
  HalfspaceSystem sys;
  sys.dim = 1;
  sys.add_row(rat_vec({1}), Rational(-1));   // x <= -1
  sys.add_row(rat_vec({-1}), Rational(0));   // x >= 0
  LpResult res = solve_lp(rat_vec({1}), sys, LpSense::Max);
  CHECK(res.status == LpStatus::Infeasible);
}

TEST_CASE("exact minimum over the 2-simplex") {
  // Oracle: enumerate the two simplex vertices. At (1,0): -1/6; at (0,1): 1/3.
  RatVec obj = rat_vec({Rational(-1, 6), Rational(1, 3)});
  Rational expected = std::min(obj(0), obj(1));
  REQUIRE(expected == Rational(-1, 6));
  LpResult res = solve_lp(obj, delta2(), LpSense::Min);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rational(-1, 6));
  CHECK(res.point(0) == 1);
  CHECK(res.point(1) == 0);
}

TEST_CASE("unbounded detection") {
  HalfspaceSystem sys;
  sys.dim = 2;
  sys.add_row(rat_vec({-1, 0}), Rational(0));
  sys.add_row(rat_vec({0, -1}), Rational(0));
  LpResult res = solve_lp(rat_vec({1, 1}), sys, LpSense::Max);
  CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("dimension mismatch is an input error") {
  CHECK_THROWS_AS(solve_lp(rat_vec({1, 0, 0}), delta2(), LpSense::Max), InputError);
}

TEST_CASE("optimal points satisfy constraints exactly") {
  // Random-ish small instances; substitution is the invariant.
  std::vector<RatVec> objectives = {
      rat_vec({Rational(3, 7), Rational(-2, 5)}),
      rat_vec({Rational(-1, 2), Rational(-1, 3)}),
      rat_vec({Rational(0), Rational(1)}),
  };
  HalfspaceSystem sys;
  sys.dim = 2;
  sys.add_row(rat_vec({-1, 0}), Rational(0));
  sys.add_row(rat_vec({0, -1}), Rational(0));
  sys.add_row(rat_vec({1, 2}), Rational(3));
  sys.add_row(rat_vec({Rational(5, 2), 1}), Rational(4));
  for (const auto& obj : objectives) {
    LpResult res = solve_lp(obj, sys, LpSense::Max);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(sys.satisfied_by(res.point));
    CHECK(res.value == obj.dot(res.point));
  }
}

TEST_CASE("equality constraints bind exactly") {
  HalfspaceSystem sys;
  sys.dim = 3;
  for (int i = 0; i < 3; ++i) {
    RatVec a = RatVec::Zero(3);
    a(i) = -1;
    sys.add_row(a, 0);
  }
  sys.add_equality(rat_vec({1, 1, 1}), 1);
  sys.add_equality(rat_vec({1, 0, -1}), Rational(1, 4));
  LpResult res = solve_lp(rat_vec({0, 1, 0}), sys, LpSense::Max);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(sys.satisfied_by(res.point));
  CHECK(res.value == Rational(3, 4));
}
