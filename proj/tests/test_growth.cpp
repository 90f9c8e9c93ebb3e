#include "cusptor/growth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace cusptor;
using namespace cusptor::growth;
using kostant::Signature;
using kostant::Weight;
using numberfield::Elem;
using numberfield::principal_ideal;

namespace {

NumberField field(const std::string& name) {
    return numberfield::load_field_file(std::string(CUSPTOR_DATA_DIR) + "/fields/" + name);
}

congruence::IdealSequence sequence(const NumberField& K, const std::string& name) {
    return congruence::load_ideal_sequence(K, oracle::read_file(std::string(CUSPTOR_DATA_DIR) + "/ideals/" + name));
}

std::string err_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

Ingested ing(const Rat& v) { return {v, "test"}; }

}  // namespace

TEST_CASE("bound closed forms") {
    CHECK(predicted_bound(2, 1, Rat(-1, 20), Rat(10), Mode::Acyclic) == 1);
    CHECK(predicted_bound(2, 1, Rat(-1, 20), Rat(10), Mode::SelfDualLattice) == Rat(1, 2));
    CHECK(predicted_bound(1, 1, Rat(3, 7), Rat(2), Mode::Acyclic) == Rat(12, 7));
    CHECK(predicted_bound(0, 1, Rat(-1, 3), Rat(3), Mode::SelfDualLattice) == 1);
    CHECK(predicted_bound(0, 2, Rat(-1, 20), Rat(10), Mode::Acyclic) == 0);
    CHECK(predicted_bound(2, 0, Rat(1), Rat(1), Mode::Acyclic) == 0);
    CHECK(parse_mode("acyclic") == Mode::Acyclic);
    CHECK(parse_mode("SELF_DUAL_LATTICE") == Mode::SelfDualLattice);
    CHECK(err_code([] { parse_mode("other"); }) == "ParseError");
}

TEST_CASE("growth report on the quartic field") {
    auto Q = field("quartic_283.json");
    GrowthInputs in;
    in.field = &Q;
    in.ideals = sequence(Q, "quartic_2_1_2.json");
    in.t2 = ing(Rat(-1, 20));
    in.vol1 = ing(Rat(10));
    auto rep = growth_lower_bound(in);
    CHECK(rep.bound == 1);
    CHECK(rep.rank_condition);
    REQUIRE(rep.levels.size() == 2);
    CHECK(rep.levels[0].index == 1);
    for (const auto& row : rep.levels) {
        CHECK(row.bound_times_index == rep.bound * Rat(row.index));
        CHECK(row.index == congruence::index(Q, in.ideals.level1, row.level));
    }
    in.mode = Mode::SelfDualLattice;
    CHECK(growth_lower_bound(in).bound == Rat(1, 2));

    in.t2 = ing(Rat(1, 20));
    CHECK(err_code([&] { growth_lower_bound(in); }) == "WrongSign");
    in.t2 = ing(Rat(-1, 20));
    in.vol1 = ing(Rat(0));
    CHECK(err_code([&] { growth_lower_bound(in); }) == "ParseError");
}

TEST_CASE("fields with r2 != 1 get bound 0 and a warning") {
    auto S = field("sqrt2.json");
    GrowthInputs in;
    in.field = &S;
    auto L = congruence::make_level(S, principal_ideal(S, Elem{Int(3), Int(0)}));
    in.ideals = {L, {L}};
    in.t2 = ing(Rat(5));
    in.vol1 = ing(Rat(1));
    auto rep = growth_lower_bound(in);
    CHECK(rep.bound == 0);
    CHECK_FALSE(rep.rank_condition);
    bool warned = false;
    for (const auto& w : rep.warnings) warned = warned || w.rfind("WrongRank", 0) == 0;
    CHECK(warned);
}

TEST_CASE("measured tables over the cubic sequence") {
    auto C = field("cubic_2.json");
    GrowthInputs in;
    in.field = &C;
    in.ideals = sequence(C, "cubic_t_3_6.json");
    in.t2 = ing(Rat(1, 4));
    in.vol1 = ing(Rat(2));
    for (std::size_t i = 0; i + 1 < in.ideals.sequence.size(); ++i)
        in.tables.push_back(integral::smith_cohomology(
            integral::total_complex(integral::build_rep_trivial(C, in.ideals.sequence[i]))));
    in.tables.push_back(std::nullopt);
    auto rep = growth_lower_bound(in);
    CHECK(rep.bound == 1);
    REQUIRE(rep.levels.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& row = rep.levels[i];
        CAPTURE(i);
        CHECK(row.norm == Int(1) << (3 + static_cast<unsigned>(i)));
        if (i == 3) {
            CHECK_FALSE(row.measured.has_value());
            continue;
        }
        REQUIRE(row.measured.has_value());
        LogSum expect;
        for (std::size_t q = 1; q < in.tables[i]->degrees.size(); q += 2)
            add_log_term(expect, in.tables[i]->degrees[q].torsion_order(), Rat(1) / Rat(row.index));
        CHECK(compare(*row.measured, expect) == 0);
    }
    /* negligibility terms shrink along the sequence */
    for (std::size_t i = 1; i < 4; ++i) CHECK(rep.levels[i].negligibility.sum28 < rep.levels[i - 1].negligibility.sum28);

    in.tables.pop_back();
    CHECK(err_code([&] { growth_lower_bound(in); }) == "MissingData");
}

TEST_CASE("acyclic weights from distinct d_sigma") {
    Signature s{2, 1};
    auto g = full_symmetric(4);
    CHECK(g.perms.size() == 24);
    CHECK(g.assumed_full);
    CHECK(err_code([&] { acyclic_weight(s, {1, 1, 2, 3}, g); }) == "ParseError");
    auto spec = acyclic_weight(s, {0, 1, 2, 3}, g);
    CHECK(spec.constituents.size() == 24);
    CHECK(spec.fully_acyclic);
    for (const auto& c : spec.constituents) {
        CHECK(c.weight.n[0] != c.weight.nbar[0]);
        CHECK(c.status.status == kostant::Acyclicity::L2AcyclicAndBoundary);
    }
    auto all = generate_acyclic_weights(s, 3, g);
    CHECK(all.size() == 24);  // 4! orderings of {0,1,2,3}
    for (const auto& a : all)
        for (const auto& c : a.constituents) CHECK(c.status.status == kostant::Acyclicity::L2AcyclicAndBoundary);
    CHECK(generate_acyclic_weights(s, 4, g).size() == 120);

    CHECK(err_code([] { generate_acyclic_weights(Signature{2, 0}, 3, full_symmetric(2)); }) == "NoComplexPlace");
    CHECK(err_code([] { acyclic_weight(Signature{4, 0}, {0, 1, 2, 3}, full_symmetric(4)); }) == "NoComplexPlace");
}

TEST_CASE("totally complex fields go through the conjugate weight") {
    Signature s{0, 1};
    auto spec = acyclic_weight(s, {0, 2}, full_symmetric(2));
    CHECK_FALSE(spec.fully_acyclic);
    REQUIRE(spec.constituents.size() == 2);
    for (const auto& c : spec.constituents) CHECK(c.status.status == kostant::Acyclicity::L2AcyclicAndBoundary);
}

TEST_CASE("galois actions must form a group") {
    CHECK_NOTHROW(make_galois_action(4, {{0, 1, 2, 3}, {1, 0, 2, 3}}));
    CHECK(make_galois_action(4, {{0, 1, 2, 3}, {1, 0, 2, 3}}).perms.size() == 2);
    CHECK_FALSE(make_galois_action(4, {{0, 1, 2, 3}}).assumed_full);
    CHECK(err_code([] { make_galois_action(4, {{0, 1, 2, 3}, {1, 2, 0, 3}}); }) == "ParseError");
    CHECK(err_code([] { make_galois_action(4, {{0, 1, 1, 3}}); }) == "ParseError");
    auto sub = make_galois_action(4, {{0, 1, 2, 3}, {1, 0, 2, 3}});
    CHECK(acyclic_weight(Signature{2, 1}, {0, 1, 2, 3}, sub).constituents.size() == 2);
}

TEST_CASE("boundary basis ledger") {
    for (Signature s : {Signature{2, 1}, Signature{1, 1}, Signature{3, 1}}) {
        CAPTURE(s.r1);
        Weight w;
        w.m.assign(static_cast<std::size_t>(s.r1), 0);
        w.n = {0};
        w.nbar = {0};
        auto L = boundary_basis_ledger(s, w);
        long P = 0, M = 0;
        for (long v : L.plus_dims) P += v;
        for (long v : L.minus_dims) M += v;
        CHECK(P == 1L << (s.r1 + s.r2 - 1));
        CHECK(M == P);
        CHECK(static_cast<long>(L.plus_basis.size()) == P);
        CHECK(L.pairing == IntMatrix::identity(static_cast<std::size_t>(P)));
        CHECK((L.change_of_basis_det == 1 || L.change_of_basis_det == -1));
        CHECK(L.boundary_torsion == 1);
        std::set<std::string> names(L.plus_basis.begin(), L.plus_basis.end());
        CHECK(names.size() == L.plus_basis.size());
    }
    auto L = boundary_basis_ledger(Signature{2, 1}, Weight{{0, 0}, {0}, {0}});
    CHECK(L.change_of_basis_det == -1);
    CHECK(L.plus_basis.front() == "1");
    CHECK(L.minus_basis.back() == "dx1^dx2^dz1^dzb1^dw1^dw2");
    CHECK(boundary_basis_ledger(Signature{1, 1}, Weight{{0}, {0}, {0}}).change_of_basis_det == 1);
    CHECK(err_code([] { boundary_basis_ledger(Signature{2, 1}, Weight{{1, 2}, {0}, {0}}); }) == "TrivialCohomology");
}
