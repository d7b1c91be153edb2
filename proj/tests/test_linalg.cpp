#include <doctest.h>

#include "hce/linalg.hpp"

using namespace hce;

namespace {
RatMatrix make(std::vector<std::vector<long>> rows) {
    RatMatrix a;
    for (auto& r : rows) {
        std::vector<Rational> rr;
        for (long v : r) rr.emplace_back(v);
        a.m.push_back(std::move(rr));
    }
    return a;
}
} // namespace

TEST_CASE("rref basics") {
    RatMatrix a = make({{2, 4, 6}, {1, 2, 4}});
    std::vector<std::size_t> piv;
    RatMatrix r = rref(a, &piv);
    CHECK(piv == std::vector<std::size_t>{0, 2});
    CHECK(r.m[0] == std::vector<Rational>{1, 2, 0});
    CHECK(r.m[1] == std::vector<Rational>{0, 0, 1});
    CHECK(rank(a) == 2);
}

TEST_CASE("nullspace") {
    // x + 2y + 3z = 0, row-reduced has pivots at col 0
    RatMatrix a = make({{1, 2, 3}});
    auto ns = nullspace(a);
    REQUIRE(ns.size() == 2);
    for (auto& v : ns) {
        Rational dot = v[0] + 2 * v[1] + 3 * v[2];
        CHECK(dot == 0);
    }
    CHECK(ns[0][1] == 1);  // identity on free columns, ascending
    CHECK(ns[1][2] == 1);

    RatMatrix id = make({{1, 0}, {0, 1}});
    CHECK(nullspace(id).empty());
}

TEST_CASE("row space comparison is basis independent") {
    RatMatrix a = make({{1, 1, 0}, {0, 1, 1}});
    RatMatrix b = make({{1, 2, 1}, {1, 0, -1}});
    CHECK(same_row_space(a, b));
    RatMatrix c = make({{1, 0, 0}, {0, 1, 1}});
    CHECK(!same_row_space(a, c));
}

TEST_CASE("fractions are handled exactly") {
    RatMatrix a;
    a.m = {{Rational(1, 2), Rational(1, 3)}, {Rational(1, 4), Rational(1, 6)}};
    CHECK(rank(a) == 1);
    auto ns = nullspace(a);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] * Rational(1, 2) + ns[0][1] * Rational(1, 3) == 0);
}

TEST_CASE("matmul and trace") {
    RatMatrix a = make({{1, 2}, {3, 4}});
    RatMatrix b = make({{0, 1}, {1, 0}});
    RatMatrix c = matmul(a, b);
    CHECK(c.m[0] == std::vector<Rational>{2, 1});
    CHECK(c.m[1] == std::vector<Rational>{4, 3});
    CHECK(trace(c) == 5);
}
