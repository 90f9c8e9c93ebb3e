#include "cusptor/exact.hpp"
#include "cusptor/linalg.hpp"

#include <doctest.h>

#include <cmath>

using namespace cusptor;

TEST_CASE("rational parsing accepts fractions, decimals and exponents exactly") {
    CHECK(parse_rational("-1/20") == Rat(-1, 20));
    CHECK(parse_rational("-0.05") == Rat(-1, 20));
    CHECK(parse_rational("2.5e-1") == Rat(1, 4));
    CHECK(parse_rational("7") == Rat(7));
    CHECK(to_string(Rat(6, 4)) == "3/2");
    CHECK(to_string(Int(-12)) == "-12");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_int("x1"), Error);
}

TEST_CASE("decimal rendering") {
    CHECK(decimal_string(Rat(1, 2), 64) == "0.5");
    CHECK(decimal_string(Rat(3, 5), 64) == "0.6");
    CHECK(decimal_sqrt_string(Rat(1, 4), 64) == "0.5");
    CHECK(std::abs(std::stod(decimal_sqrt_string(Rat(2), 64)) - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("log sums compare exactly") {
    LogSum a, b;
    add_log_term(a, 2, Rat(1, 2));  // log 2 / 2
    add_log_term(b, 4, Rat(1, 4));  // log 4 / 4, the same number
    CHECK(compare(a, b) == 0);
    LogSum c;
    add_log_term(c, 3, Rat(1, 3));
    CHECK(compare(c, a) > 0);  // log 3 / 3 > log 2 / 2
    add_log_term(a, 2, Rat(-1, 2));
    CHECK(is_zero(a));
    CHECK(std::abs(std::stod(decimal_string(c, 64)) - std::log(3.0) / 3) < 1e-15);
    CHECK_THROWS_AS(add_log_term(c, 0, Rat(1)), Error);
}

TEST_CASE("binomial and ipow against Pascal's rule") {
    for (unsigned n = 1; n < 20; ++n)
        for (unsigned k = 1; k < n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    CHECK(ipow(Int(3), 5) == 243);
    CHECK(ipow(Int(-2), 3) == -8);
}

TEST_CASE("integer linear algebra") {
    IntMatrix m(2, 2);
    m(0, 0) = 2, m(0, 1) = 4, m(1, 0) = 6, m(1, 1) = 8;
    CHECK(linalg::determinant(m) == -8);
    auto s = linalg::smith_invariants(m);
    REQUIRE(s.size() == 2);
    CHECK(s[0] == 2);
    CHECK(s[1] == 4);
    CHECK(!linalg::unimodular_inverse(m));
    IntMatrix u(2, 2);
    u(0, 0) = 2, u(0, 1) = 1, u(1, 0) = 1, u(1, 1) = 1;
    auto inv = linalg::unimodular_inverse(u);
    REQUIRE(inv);
    auto prod = u * *inv;
    CHECK(prod(0, 0) == 1);
    CHECK(prod(0, 1) == 0);
    CHECK(linalg::matrix_power(u, 3)(0, 0) == 13);
    CHECK(linalg::rank(m) == 2);
}
