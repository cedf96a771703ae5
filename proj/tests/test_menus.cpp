#include "menuforge/menus.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace menuforge;
using namespace fixtures;

namespace {

RatVec gamma_csp(const Game& g) {
  // gamma = 1/3 (N x A) + 1/3 (Y x A) + 1/3 (Y x C)
  RatVec phi = RatVec::Zero(6);
  phi(g.idx(N, A)) = Rational(1, 3);
  phi(g.idx(Y, A)) = Rational(1, 3);
  phi(g.idx(Y, C)) = Rational(1, 3);
  return phi;
}

// Conditional optimizer mix given each played learner action; product form
// check per the no-swap-regret characterization.
bool decomposes_as_best_response_product(const Game& g, const RatVec& phi) {
  for (int j = 0; j < g.n; ++j) {
    Rational mass = 0;
    for (int i = 0; i < g.m; ++i) mass += phi(g.idx(i, j));
    if (mass == 0) continue;
    RatVec x(g.m);
    for (int i = 0; i < g.m; ++i) x(i) = phi(g.idx(i, j)) / mass;
    if (!best_responses(g, x).count(j)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("no-regret menu of the counterexample game") {
  Game g = counterexample_game();
  Menu nr = build_nr_menu(g);
  SECTION("contains the gamma CSP") {
    CHECK(contains_point(nr.poly, gamma_csp(g)));
  }
  SECTION("contains phi+ with the top learner value") {
    ValueFaces f = value_faces(g, nr);
    CHECK(contains_point(nr.poly, g.pure_csp(Y, C)));
    CHECK(f.Uplus == Rational(1, 2));
  }
  SECTION("min value equals U_ZS") {
    ValueFaces f = value_faces(g, nr);
    CHECK(f.Uminus == zero_sum_value(g).value);
  }
}

TEST_CASE("rps diagonal CSP is in M_NR but not M_NSR") {
  Game g = rps_game();
  RatVec diag = RatVec::Zero(9);
  for (int i = 0; i < 3; ++i) diag(g.idx(i, i)) = Rational(1, 3);
  Menu nr = build_nr_menu(g);
  Menu nsr = build_nsr_menu(g);
  CHECK(contains_point(nr.poly, diag));
  CHECK(!contains_point(nsr.poly, diag));
  CHECK(!polytopes_equal(nr.poly, nsr.poly));
  // The diagonal is a vertex of M_NR: it is the unique no-regret CSP with
  // zero off-diagonal mass.
  bool found = false;
  for (const auto& v : vertices_of(nr.poly))
    if (vec_equal(v, diag)) found = true;
  CHECK(found);
}

TEST_CASE("gamma violates a swap constraint of the counterexample game") {
  Game g = counterexample_game();
  CHECK(regret(g, gamma_csp(g)) == 0);
  CHECK(swap_regret(g, gamma_csp(g)) > 0);
  Menu nsr = build_nsr_menu(g);
  CHECK(!contains_point(nsr.poly, gamma_csp(g)));
  CHECK(!polytopes_equal(build_nr_menu(g).poly, nsr.poly));
}

TEST_CASE("nsr menu of the counterexample game has the derived vertex set") {
  Game g = counterexample_game();
  Menu nsr = build_nsr_menu(g);
  // Product segments meet at the tie mixes (2/3, 1/3) and (1/3, 2/3).
  std::vector<RatVec> expected;
  auto prod = [&](const Rational& p, int j) {
    RatVec y = RatVec::Zero(3);
    y(j) = 1;
    return g.product_csp(rat_vec({p, 1 - p}), y);
  };
  expected.push_back(prod(1, A));
  expected.push_back(prod(Rational(2, 3), A));
  expected.push_back(prod(Rational(2, 3), B));
  expected.push_back(prod(Rational(1, 3), B));
  expected.push_back(prod(Rational(1, 3), C));
  expected.push_back(prod(0, C));
  REQUIRE(vertices_of(nsr.poly).size() == 6);
  for (const auto& e : expected) {
    bool found = false;
    for (const auto& v : vertices_of(nsr.poly))
      if (vec_equal(v, e)) found = true;
    CHECK(found);
  }
}

TEST_CASE("value faces") {
  Game g = counterexample_game();
  Menu nsr = build_nsr_menu(g);
  ValueFaces f = value_faces(g, nsr);
  SECTION("M+ of the NSR menu is the singleton phi+") {
    REQUIRE(vertices_of(f.Mplus).size() == 1);
    CHECK(vec_equal(vertices_of(f.Mplus)[0], g.pure_csp(Y, C)));
    CHECK(f.Uplus == Rational(1, 2));
  }
  SECTION("U- equals the zero-sum value") {
    CHECK(f.Uminus == zero_sum_value(g).value);
  }
  SECTION("singleton menu faces") {
    Menu single = make_menu(g, convex_hull({g.pure_csp(N, A)}), "single");
    ValueFaces sf = value_faces(g, single);
    CHECK(sf.Uplus == sf.Uminus);
    CHECK(vertices_of(sf.Mplus).size() == 1);
    CHECK(vertices_of(sf.Mminus).size() == 1);
  }
}

TEST_CASE("containment chain and decomposition across the corpus") {
  for (const auto& [name, g] : corpus()) {
    INFO(name);
    ValidationReport rep = validate(g);
    REQUIRE(rep.menu_ok());
    Menu nr = build_nr_menu(g);
    Menu nsr = build_nsr_menu(g);
    ValueFaces nrf = value_faces(g, nr);
    ValueFaces nsrf = value_faces(g, nsr);
    ZeroSumResult zs = zero_sum_value(g);
    CHECK(nrf.Uminus == zs.value);
    for (const auto& v : vertices_of(nsr.poly)) {
      CHECK(contains_point(nr.poly, v));
      CHECK(decomposes_as_best_response_product(g, v));
    }
    // M-_NSR inside M-_NR
    for (const auto& v : vertices_of(nsrf.Mminus)) CHECK(contains_point(nrf.Mminus, v));
  }
}

TEST_CASE("nr vertices have exactly zero regret") {
  // Hull-of-zero-regret characterization as the test oracle for the H-rep.
  for (const auto& [name, g] : corpus()) {
    INFO(name);
    Menu nr = build_nr_menu(g);
    for (const auto& v : vertices_of(nr.poly)) CHECK(regret(g, v) == 0);
  }
}

TEST_CASE("grid oracle for the nsr menu on 2x2 corpus games") {
  for (const auto& [name, g] : corpus()) {
    if (g.m != 2 || g.n != 2) continue;
    INFO(name);
    Menu nsr = build_nsr_menu(g);
    std::vector<RatVec> grid_points;
    for (int k = 0; k <= 120; ++k) {
      RatVec x = rat_vec({Rational(k, 120), Rational(120 - k, 120)});
      for (int j : best_responses(g, x)) {
        RatVec y = RatVec::Zero(2);
        y(j) = 1;
        grid_points.push_back(g.product_csp(x, y));
      }
    }
    for (const auto& p : grid_points) CHECK(contains_point(nsr.poly, p));
    Polytope grid_hull = convex_hull(grid_points);
    CHECK(polytopes_equal(grid_hull, nsr.poly));
  }
}

TEST_CASE("menu validity grid check") {
  Game g = counterexample_game();
  SECTION("nsr passes") {
    Menu nsr = build_nsr_menu(g);
    MenuCheckReport rep = is_valid_menu(g, nsr, 8);
    CHECK(rep.pass);
  }
  SECTION("fixed-action menu passes") {
    Menu fixed = fixed_action_menu(g, C);
    MenuCheckReport rep = is_valid_menu(g, fixed, 8);
    CHECK(rep.pass);
  }
  SECTION("a single pure CSP fails at another pure optimizer mix") {
    Menu single = make_menu(g, convex_hull({g.pure_csp(N, A)}), "single");
    MenuCheckReport rep = is_valid_menu(g, single, 4);
    CHECK(!rep.pass);
    REQUIRE(rep.first_failing_x);
  }
}

TEST_CASE("extend menu") {
  Game g = counterexample_game();
  Menu nsr = build_nsr_menu(g);
  SECTION("adding an interior point changes nothing") {
    RatVec interior = RatVec::Zero(6);
    // midpoint of two vertices
    const auto& vs = vertices_of(nsr.poly);
    interior = (vs[0] + vs[1]) / Rational(2);
    Menu ext = extend_menu(g, nsr, {interior});
    CHECK(polytopes_equal(ext.poly, nsr.poly));
  }
  SECTION("extending with Prof(tau*) strictly grows the menu") {
    RatVec prof = RatVec::Zero(6);
    prof(g.idx(N, C)) = Rational(1, 6);
    prof(g.idx(Y, C)) = Rational(1, 3);
    prof(g.idx(N, B)) = Rational(1, 2);
    Menu ext = extend_menu(g, nsr, {prof});
    CHECK(!polytopes_equal(ext.poly, nsr.poly));
    CHECK(contains_point(ext.poly, prof));
  }
  SECTION("extending a menu missing phi+ pins the max face") {
    Menu fixed = fixed_action_menu(g, A);
    Menu ext = extend_menu(g, fixed, {g.pure_csp(Y, C)});
    ValueFaces f = value_faces(g, ext);
    REQUIRE(vertices_of(f.Mplus).size() == 1);
    CHECK(vec_equal(vertices_of(f.Mplus)[0], g.pure_csp(Y, C)));
  }
  SECTION("invalid CSPs are rejected") {
    RatVec bad = RatVec::Zero(6);
    bad(0) = Rational(1, 2);
    CHECK_THROWS_AS(extend_menu(g, nsr, {bad}), InputError);
  }
}

TEST_CASE("fixed action menus") {
  Game g2 = examples_2x2_game();
  Menu mq = fixed_action_menu(g2, Q);
  REQUIRE(vertices_of(mq.poly).size() == 2);
  CHECK(contains_point(mq.poly, g2.pure_csp(0, Q)));
  CHECK(contains_point(mq.poly, g2.pure_csp(1, Q)));

  Game g1;
  g1.m = 1;
  g1.n = 2;
  g1.uL = RatMat(1, 2);
  g1.uL << Rational(1, 2), Rational(0);
  Menu single = fixed_action_menu(g1, 0);
  CHECK(vertices_of(single.poly).size() == 1);

  Game g = counterexample_game();
  Menu mc = fixed_action_menu(g, C);
  REQUIRE(vertices_of(mc.poly).size() == 2);
  CHECK(contains_point(mc.poly, g.pure_csp(N, C)));
  CHECK(contains_point(mc.poly, g.pure_csp(Y, C)));
}

TEST_CASE("drop_min_vertex on rps removes the diagonal") {
  Game g = rps_game();
  Menu nr = build_nr_menu(g);
  Menu nsr = build_nsr_menu(g);
  RatVec diag = RatVec::Zero(9);
  for (int i = 0; i < 3; ++i) diag(g.idx(i, i)) = Rational(1, 3);
  Menu dropped = drop_min_vertex(g, nr, nsr, diag);
  CHECK(!contains_point(dropped.poly, diag));
  for (const auto& v : vertices_of(nsr.poly)) CHECK(contains_point(dropped.poly, v));
  CHECK(!polytopes_equal(dropped.poly, nr.poly));
}

TEST_CASE("drop_min_vertex precondition failures") {
  Game g = counterexample_game();
  Menu nsr = build_nsr_menu(g);
  // Every min-face vertex of the NSR menu lies on its own min face.
  ValueFaces f = value_faces(g, nsr);
  CHECK_THROWS_AS(drop_min_vertex(g, nsr, nsr, vertices_of(f.Mminus)[0]), InputError);
  RatVec not_vertex = RatVec::Zero(6);
  not_vertex(0) = 1;  // N x A is a vertex; perturbed midpoint is not
  const auto& vs = vertices_of(nsr.poly);
  RatVec mid = (vs[0] + vs[1]) / Rational(2);
  CHECK_THROWS_AS(drop_min_vertex(g, nsr, nsr, mid), InputError);
}
