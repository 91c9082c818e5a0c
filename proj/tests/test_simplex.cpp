#include "doctest.h"

#include "rsmdp/errors.hpp"
#include "rsmdp/simplex.hpp"

using namespace rsmdp;
using namespace rsmdp::lp;

TEST_CASE("textbook maximization") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
    LinearProgram p(2);
    p.objective = {3, 5};
    p.add(Sense::LessEqual, 4).coef = {1, 0};
    p.add(Sense::LessEqual, 12).coef = {0, 2};
    p.add(Sense::LessEqual, 18).coef = {3, 2};
    auto sol = solve(p);
    CHECK(sol.value == doctest::Approx(36.0));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(6.0));
}

TEST_CASE("equality and >= rows need phase one") {
    // max -x - y s.t. x + y = 2, x >= 0.5  ->  -2
    LinearProgram p(2);
    p.objective = {-1, -1};
    p.add(Sense::Equal, 2).coef = {1, 1};
    p.add(Sense::GreaterEqual, 0.5).coef = {1, 0};
    auto sol = solve(p);
    CHECK(sol.value == doctest::Approx(-2.0));
    CHECK(sol.x[0] >= 0.5 - 1e-9);
}

TEST_CASE("free variables may go negative") {
    // max -x s.t. x >= -3, x free  ->  3 at x = -3
    LinearProgram p(1);
    p.objective = {-1};
    p.free_var = {true};
    p.add(Sense::GreaterEqual, -3).coef = {1};
    auto sol = solve(p);
    CHECK(sol.value == doctest::Approx(3.0));
    CHECK(sol.x[0] == doctest::Approx(-3.0));
}

TEST_CASE("negative right-hand sides") {
    // max x s.t. -x >= -5  ->  5
    LinearProgram p(1);
    p.objective = {1};
    p.add(Sense::GreaterEqual, -5).coef = {-1};
    CHECK(solve(p).value == doctest::Approx(5.0));
}

TEST_CASE("redundant equality rows") {
    LinearProgram p(2);
    p.objective = {1, 2};
    p.add(Sense::Equal, 1).coef = {1, 1};
    p.add(Sense::Equal, 2).coef = {2, 2};
    CHECK(solve(p).value == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded programs") {
    LinearProgram inf(1);
    inf.objective = {1};
    inf.add(Sense::LessEqual, 1).coef = {1};
    inf.add(Sense::GreaterEqual, 2).coef = {1};
    CHECK_THROWS_AS(solve(inf), LpInfeasible);

    LinearProgram unb(2);
    unb.objective = {1, 0};
    unb.add(Sense::LessEqual, 1).coef = {0, 1};
    CHECK_THROWS_AS(solve(unb), LpUnbounded);
}

TEST_CASE("degenerate vertex does not cycle") {
    // Beale's cycling example; Bland's rule terminates. Optimum 1/20.
    LinearProgram p(4);
    p.objective = {0.75, -150, 0.02, -6};
    p.add(Sense::LessEqual, 0).coef = {0.25, -60, -0.04, 9};
    p.add(Sense::LessEqual, 0).coef = {0.5, -90, -0.02, 3};
    p.add(Sense::LessEqual, 1).coef = {0, 0, 1, 0};
    CHECK(solve(p).value == doctest::Approx(0.05));
}
