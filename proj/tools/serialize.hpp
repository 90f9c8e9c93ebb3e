#ifndef CUSPTOR_TOOLS_SERIALIZE_HPP
#define CUSPTOR_TOOLS_SERIALIZE_HPP

// Report fragments.  nlohmann::json keeps object keys sorted, which is what makes reports replayable.

#include "cusptor/congruence.hpp"
#include "cusptor/growth.hpp"
#include "cusptor/integral.hpp"
#include "cusptor/kostant.hpp"

#include <json.hpp>

namespace cusptor::cli {

using json = nlohmann::json;
using numberfield::IdealHNF;
using numberfield::NumberField;

inline json j(const Int& v) { return to_string(v); }
inline json j(const Rat& v) { return to_string(v); }

inline json j_elem(const numberfield::Elem& x) {
    json a = json::array();
    for (const auto& v : x) a.push_back(to_string(v));
    return a;
}

template <class T>
json j_matrix(const Matrix<T>& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(to_string(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json j_rat_decimal(const Rat& v, int bits) { return {{"exact", to_string(v)}, {"decimal", decimal_string(v, bits)}}; }

inline json j_logsum(const LogSum& s, int bits) {
    json terms = json::array();
    for (const auto& [t, c] : s) terms.push_back({{"log_of", to_string(t)}, {"coefficient", to_string(c)}});
    return {{"terms", terms}, {"decimal", decimal_string(s, bits)}};
}

inline json j_ideal(const NumberField& K, const IdealHNF& a) {
    return {{"hnf", j_matrix(a.matrix)}, {"norm", j(numberfield::ideal_norm(K, a))}};
}

inline json j_level(const NumberField& K, const congruence::Level& l) {
    json o = j_ideal(K, l.ideal);
    o["torsion_free_declared"] = l.torsion_free;
    if (l.has_factorization) {
        json f = json::array();
        for (const auto& p : l.factorization) f.push_back({{"norm", j(p.norm)}, {"exponent", p.exponent}});
        o["factorization"] = f;
    }
    return o;
}

inline json j_field(const NumberField& K) {
    json units = json::array();
    for (const auto& u : K.units) units.push_back(j_elem(u));
    return {{"name", K.name},
            {"degree", K.degree},
            {"signature", {K.r1, K.r2}},
            {"disc", K.disc ? json(to_string(*K.disc)) : json(nullptr)},
            {"unit_rank", K.unit_rank()},
            {"units", units},
            {"torsion_order", K.torsion_order},
            {"class_number", K.class_number()},
            {"provenance", K.provenance}};
}

inline json j_weight(const kostant::Weight& w) { return {{"m", w.m}, {"n", w.n}, {"nbar", w.nbar}}; }

inline json j_status(const kostant::AcyclicityStatus& a) {
    return {{"status", kostant::to_string(a.status)}, {"conjugated", a.conjugated}, {"reason", a.reason}};
}

inline json j_tally(const kostant::LemmaTally& t) {
    return {{"checked", t.checked}, {"mismatches", t.mismatches}, {"skipped", t.skipped}, {"pass", t.ok()}};
}

inline json j_table(const integral::CohomologyTable& t) {
    json degs = json::array();
    for (const auto& d : t.degrees) {
        json tor = json::array();
        for (const auto& v : d.torsion) tor.push_back(to_string(v));
        degs.push_back({{"free_rank", d.free_rank}, {"torsion", tor}, {"filtration", d.filtration}});
    }
    return degs;
}

}  // namespace cusptor::cli

#endif
