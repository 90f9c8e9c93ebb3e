#include "cusptor/congruence.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace cusptor;
using namespace cusptor::congruence;
using numberfield::principal_ideal;

namespace {

NumberField field(const std::string& name) {
    return numberfield::load_field_file(std::string(CUSPTOR_DATA_DIR) + "/fields/" + name);
}

Elem el(std::initializer_list<long> v) {
    Elem e;
    for (long x : v) e.push_back(Int(x));
    return e;
}

Level lev(const NumberField& K, std::initializer_list<long> g, unsigned e = 1) {
    return make_level(K, numberfield::ideal_power(K, principal_ideal(K, el(g)), e));
}

}  // namespace

TEST_CASE("SL2 orders against brute force over Z[i]/m and Z[sqrt 2]/m") {
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    for (long m : {2, 3, 4}) {
        CAPTURE(m);
        CHECK(sl2_order_enumerated(G, principal_ideal(G, el({m, 0}))) == oracle::sl2_count({m, -1}));
        CHECK(sl2_order_enumerated(S, principal_ideal(S, el({m, 0}))) == oracle::sl2_count({m, 2}));
    }
}

TEST_CASE("SL2 order examples and the formula path") {
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    CHECK(sl2_order_mod(G, lev(G, {1, 1})).value == 6);
    CHECK(sl2_order_mod(G, make_level(G, numberfield::unit_ideal(G))).value == 1);
    CHECK(sl2_order_mod(S, lev(S, {0, 1})).value == 6);
    const long frozen[] = {1, 6, 48, 384, 3072, 24576, 196608};
    for (unsigned e = 1; e <= 6; ++e) {
        auto spec = numberfield::load_ideal(G, R"({"generator": ["1", "1"], "exponent": )" + std::to_string(e) +
                                                   R"(, "factorization": [{"norm": 2, "exponent": )" +
                                                   std::to_string(e) + "}]}");
        auto L = make_level(G, spec);
        auto o = sl2_order_mod(G, L);
        CHECK(o.value == frozen[e]);
        CHECK(o.formula);
        CHECK(sl2_order_formula(G, L) == frozen[e]);
    }
    /* beyond the enumeration bound only the formula path is available */
    auto big = make_level(G, numberfield::load_ideal(G, R"({"generator": ["3", "0"], "exponent": 5,
        "factorization": [{"norm": 9, "exponent": 5}]})"));
    auto ob = sl2_order_mod(G, big, 1000);
    CHECK(ob.formula_only);
    CHECK(ob.value == ipow(Int(9), 15) - ipow(Int(9), 13));
    CHECK_THROWS_AS(sl2_order_mod(G, lev(G, {3, 0}, 5), 1000), Error);
}

TEST_CASE("indices") {
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    auto p1 = lev(G, {1, 1}), two = lev(G, {2, 0});
    CHECK(index(G, p1, p1) == 1);
    CHECK(index(G, p1, two) == Int(oracle::sl2_count({2, -1})) / 6);
    CHECK(index(S, make_level(S, numberfield::unit_ideal(S)), lev(S, {0, 1})) == 6);
    CHECK_THROWS_AS(index(G, two, p1), Error);
    /* multiplicative along a chain */
    auto p3 = lev(G, {1, 1}, 3), p5 = lev(G, {1, 1}, 5);
    CHECK(index(G, p1, p5) == index(G, p1, p3) * index(G, p3, p5));
}

TEST_CASE("level flags") {
    auto G = field("gaussian.json");
    CHECK_THROWS_AS(make_level(G, numberfield::unit_ideal(G), true), Error);
    CHECK(make_level(G, principal_ideal(G, el({3, 0})), true).torsion_free);
}

TEST_CASE("cusp counts against orbit enumeration") {
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    for (long m : {2, 3, 4}) {
        CAPTURE(m);
        CuspTable tg(G, principal_ideal(G, el({m, 0})));
        CHECK(static_cast<long>(tg.cusp_count()) == oracle::cusp_count({m, -1}, {{0, 1}}));
        CuspTable ts(S, principal_ideal(S, el({m, 0})));
        CHECK(static_cast<long>(ts.cusp_count()) == oracle::cusp_count({m, 2}, {{m - 1, 0}, {1, 1}}));
    }
    CHECK(cusp_set(G, make_level(G, numberfield::unit_ideal(G))).size() == 1);
    CHECK(cusp_set(S, make_level(S, numberfield::unit_ideal(S))).size() == 1);
    const long frozen[] = {1, 3, 6, 12, 48, 192, 768};
    for (unsigned e = 0; e <= 6; ++e) CHECK(static_cast<long>(cusp_set(G, lev(G, {1, 1}, e)).size()) == frozen[e]);
}

TEST_CASE("cusp representatives are coprime lifts") {
    auto S = field("sqrt2.json");
    auto L = lev(S, {3, 0});
    for (const auto& c : cusp_set(S, L))
        CHECK(numberfield::ideal_from_generators(S, {c.a, c.c}) == numberfield::unit_ideal(S));
}

TEST_CASE("parabolic indices and fiber counts") {
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    auto p3 = lev(G, {1, 1}, 3), p4 = lev(G, {1, 1}, 4);
    auto inf = cusp_set(G, p3).front();
    CHECK(parabolic_index(G, p3, p3, inf) == 1);
    CHECK(parabolic_index(G, p3, p4, inf) == 2);
    CHECK(cusp_fiber_count(G, p3, p3, inf) == 1);

    auto r2 = lev(S, {0, 1}), two = lev(S, {2, 0});
    auto sc = cusp_set(S, r2).front();
    CHECK(parabolic_index(S, r2, two, sc) == Int(2) * numberfield::unit_index_mod(S, r2.ideal, two.ideal));

    auto p1 = lev(G, {1, 1}), g2 = lev(G, {2, 0});
    CuspTable t1(G, p1.ideal), t2(G, g2.ideal);
    Int total = 0;
    for (const auto& c : cusp_set(G, p1)) {
        Int f = cusp_fiber_count(G, p1, g2, c);
        CHECK(f == Int(static_cast<long>(cusps_above(t1, t2, c))));
        total += f;
    }
    CHECK(total == Int(static_cast<long>(t2.cusp_count())));
}

TEST_CASE("negligibility sums") {
    auto G = field("gaussian.json");
    auto p3 = lev(G, {1, 1}, 3);
    auto single = negligibility_sums(G, p3, {p3});
    REQUIRE(single.size() == 1);
    CHECK(single[0].sum28 == 12);
    CHECK(is_zero(single[0].sum29));

    std::vector<Level> seq;
    for (unsigned e = 3; e <= 6; ++e) seq.push_back(lev(G, {1, 1}, e));
    auto t = negligibility_sums(G, p3, seq);
    const Rat frozen28[] = {Rat(12), Rat(6), Rat(3), Rat(3, 2)};
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(t[i].sum28 == frozen28[i]);
        CHECK(t[i].sum28 > 0);
        /* each of the 12 terms is log(t)/t <= 1/e */
        CHECK(std::stod(decimal_string(t[i].sum29, 64)) <= 12 / std::exp(1.0) + 1e-12);
    }
    /* the first entry has parabolic index 1 everywhere, so sum29 starts at 0 and rises */
    CHECK(compare(t[1].sum29, t[0].sum29) > 0);
    CHECK(compare(t[3].sum29, t[2].sum29) < 0);
    /* 12 log 2 / 2 twice: log 2 / 2 = log 4 / 4 */
    CHECK(compare(t[1].sum29, t[2].sum29) == 0);
}

TEST_CASE("ideal sequence documents") {
    auto G = field("gaussian.json");
    auto seq = load_ideal_sequence(G, oracle::read_file(std::string(CUSPTOR_DATA_DIR) + "/ideals/gaussian_1pi_3_6.json"));
    CHECK(seq.sequence.size() == 4);
    CHECK(numberfield::ideal_norm(G, seq.level1.ideal) == 8);
    CHECK_THROWS_AS(load_ideal_sequence(G, R"({"sequence": []})"), Error);
    CHECK_THROWS_AS(load_ideal_sequence(G, "not json"), Error);
}
