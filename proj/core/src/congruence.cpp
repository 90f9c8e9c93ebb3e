#include "cusptor/congruence.hpp"

#include "cusptor/linalg.hpp"
#include "documents.hpp"

#include <algorithm>
#include <map>

namespace cusptor::congruence {

using numberfield::ResidueRing;

namespace {

constexpr std::int64_t kCuspTableCap = 4096;

bool is_unit_ideal(const IntMatrix& h) { return h == IntMatrix::identity(h.rows); }

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix m(a.rows, a.cols + b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols; ++j) m(i, a.cols + j) = b(i, j);
    }
    return m;
}

bool coprime(const NumberField& K, const Elem& a, const Elem& c) {
    bool nz = false;
    for (const auto& v : a) nz = nz || v != 0;
    for (const auto& v : c) nz = nz || v != 0;
    if (!nz) return false;
    return is_unit_ideal(linalg::hnf_columns(hstack(K.mul_matrix(a), K.mul_matrix(c))));
}

/* Finds (a, c) in O^2 with (a) + (c) = O reducing to (x, y) mod n. */
std::pair<Elem, Elem> coprime_lift(const NumberField& K, const IdealHNF& n, const Elem& x, const Elem& y) {
    const auto d = static_cast<std::size_t>(K.degree);
    if (n.matrix == IntMatrix::identity(d)) return {K.one(), K.zero()};
    for (int B = 0; B <= 3; ++B) {
        std::vector<int> s(2 * d, -B);
        for (;;) {
            Elem a = x, c = y;
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t i = 0; i < d; ++i) {
                    a[i] += s[j] * n.matrix(i, j);
                    c[i] += s[d + j] * n.matrix(i, j);
                }
            if (coprime(K, a, c)) return {a, c};
            std::size_t k = 0;
            while (k < s.size() && s[k] == B) s[k++] = -B;
            if (k == s.size()) break;
            ++s[k];
        }
    }
    fail("LiftNotFound", "no coprime lift found in the search box", ErrorKind::Verification);
}

Int ratio_norm(const NumberField& K, const IdealHNF& n1, const IdealHNF& n2) {
    Int a = numberfield::ideal_norm(K, n1), b = numberfield::ideal_norm(K, n2);
    if (!mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()))
        fail("NonDivisible", "norm of the smaller level is not divisible", ErrorKind::Verification);
    return b / a;
}

void require_nested(const IdealHNF& n1, const IdealHNF& n2) {
    if (!numberfield::ideal_contains(n1, n2)) fail("NotNested", "second level is not contained in the first");
}

}  // namespace

Level make_level(const NumberField& K, const numberfield::IdealSpec& spec, bool torsion_free) {
    Level L;
    L.ideal = spec.ideal;
    L.torsion_free = torsion_free;
    L.factorization = spec.factorization;
    L.has_factorization = spec.has_factorization;
    if (torsion_free && numberfield::ideal_norm(K, L.ideal) == 1)
        fail("LevelNotTorsionFree", "the unit ideal cannot carry the torsion-free flag");
    return L;
}

Level make_level(const NumberField& K, const IdealHNF& ideal, bool torsion_free) {
    numberfield::IdealSpec spec;
    spec.ideal = ideal;
    return make_level(K, spec, torsion_free);
}

Int sl2_order_enumerated(const NumberField& K, const IdealHNF& n, long bound) {
    ResidueRing R(K, n, bound);
    const std::int64_t N = R.size();
    std::vector<std::int64_t> P(static_cast<std::size_t>(N), 0);
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t d = 0; d < N; ++d) ++P[static_cast<std::size_t>(R.mul(a, d))];
    const std::int64_t minus_one = R.neg(R.one());
    Int total = 0;
    for (std::int64_t y = 0; y < N; ++y) {
        std::int64_t bc = R.add(y, minus_one);
        total += Int(static_cast<long>(P[static_cast<std::size_t>(y)])) * static_cast<long>(P[static_cast<std::size_t>(bc)]);
    }
    return total;
}

Int sl2_order_formula(const NumberField& K, const Level& level) {
    if (!level.has_factorization) fail("TooLarge", "formula path needs an ingested factorization");
    Int prod = 1, norm = 1;
    for (const auto& pp : level.factorization) {
        /* N(p)^(3e) (1 - N(p)^-2) = N(p)^(3e-2) (N(p)^2 - 1) */
        prod *= ipow(pp.norm, 3 * pp.exponent - 2) * (pp.norm * pp.norm - 1);
        norm *= ipow(pp.norm, pp.exponent);
    }
    if (norm != numberfield::ideal_norm(K, level.ideal))
        fail("FactorizationMismatch", "factorization does not match the ideal norm");
    return prod;
}

SL2Order sl2_order_mod(const NumberField& K, const Level& level, long bound) {
    SL2Order out;
    Int N = numberfield::ideal_norm(K, level.ideal);
    if (N <= bound) {
        out.value = sl2_order_enumerated(K, level.ideal, bound);
        out.enumerated = true;
        if (level.has_factorization) {
            Int f = sl2_order_formula(K, level);
            out.formula = true;
            if (f != out.value)
                fail("FormulaMismatch", "enumerated and formula orders differ: " + out.value.get_str() + " vs " +
                                            f.get_str(), ErrorKind::Verification);
        }
        return out;
    }
    if (!level.has_factorization)
        fail("TooLarge", "level of norm " + N.get_str() + " exceeds the enumeration bound and has no factorization");
    out.value = sl2_order_formula(K, level);
    out.formula = true;
    out.formula_only = true;
    return out;
}

Int index(const NumberField& K, const Level& level1, const Level& level2, long bound) {
    require_nested(level1.ideal, level2.ideal);
    Int a = sl2_order_mod(K, level1, bound).value, b = sl2_order_mod(K, level2, bound).value;
    if (!mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()))
        fail("NonDivisible", "group orders do not divide", ErrorKind::Verification);
    return b / a;
}

CuspTable::CuspTable(const NumberField& K, const IdealHNF& n, long bound) : ring_(K, n, bound) {
    if (K.class_number() != 1) fail("UnsupportedClassGroup", "cusp enumeration supports class number one only");
    const std::int64_t N = ring_.size();
    if (N > kCuspTableCap) fail("TooLarge", "cusp tables are limited to norm " + std::to_string(kCuspTableCap));
    units_ = numberfield::unit_image(K, ring_);

    /* (x) + n, interned, so that unimodularity of (x, y) is a cached ideal sum */
    std::map<IdealHNF, int> intern;
    std::vector<IntMatrix> ideals;
    std::vector<int> ideal_of(static_cast<std::size_t>(N));
    for (std::int64_t x = 0; x < N; ++x) {
        IdealHNF I{linalg::hnf_columns(hstack(n.matrix, K.mul_matrix(ring_.decode(x))))};
        auto [it, fresh] = intern.emplace(I, static_cast<int>(ideals.size()));
        if (fresh) ideals.push_back(I.matrix);
        ideal_of[static_cast<std::size_t>(x)] = it->second;
    }
    const std::size_t M = ideals.size();
    std::vector<signed char> pair_unit(M * M, -1);
    auto unimodular = [&](std::int64_t a, std::int64_t c) {
        std::size_t i = static_cast<std::size_t>(ideal_of[static_cast<std::size_t>(a)]);
        std::size_t j = static_cast<std::size_t>(ideal_of[static_cast<std::size_t>(c)]);
        signed char& slot = pair_unit[i * M + j];
        if (slot < 0) slot = is_unit_ideal(linalg::hnf_columns(hstack(ideals[i], ideals[j]))) ? 1 : 0;
        return slot == 1;
    };

    orbit_.assign(static_cast<std::size_t>(N * N), -1);
    for (std::int64_t a = 0; a < N; ++a)
        for (std::int64_t c = 0; c < N; ++c) {
            std::size_t p = static_cast<std::size_t>(a * N + c);
            if (orbit_[p] != -1 || !unimodular(a, c)) continue;
            const auto id = static_cast<std::int64_t>(reps_.size());
            reps_.emplace_back(a, c);
            for (auto g : units_) {
                std::size_t q = static_cast<std::size_t>(ring_.mul(g, a) * N + ring_.mul(g, c));
                if (orbit_[q] == -1) {
                    orbit_[q] = id;
                    ++unimodular_;
                }
            }
        }
}

std::int64_t CuspTable::orbit_of(std::int64_t a, std::int64_t c) const {
    return orbit_[static_cast<std::size_t>(a * ring_.size() + c)];
}

std::vector<CuspRep> cusp_set(const NumberField& K, const Level& level, long bound) {
    CuspTable t(K, level.ideal, bound);
    std::vector<CuspRep> out;
    for (auto [a, c] : t.representatives()) {
        CuspRep r;
        r.residue_a = a;
        r.residue_c = c;
        std::tie(r.a, r.c) = coprime_lift(K, level.ideal, t.ring().decode(a), t.ring().decode(c));
        r.orbit_size = t.unit_image_size();
        r.stabilizer_size = 1;
        out.push_back(std::move(r));
    }
    return out;
}

Int parabolic_index(const NumberField& K, const Level& level1, const Level& level2, const CuspRep& cusp,
                    long bound) {
    require_nested(level1.ideal, level2.ideal);
    if (cusp.ideal_class_index < 0 || cusp.ideal_class_index >= K.class_number())
        fail("ParseError", "cusp refers to an unknown ideal class");
    /* translations: [n1 a^-2 : n2 a^-2] = N(n2)/N(n1); units: [E(n1) : E(n2)] */
    return ratio_norm(K, level1.ideal, level2.ideal) * numberfield::unit_index_mod(K, level1.ideal, level2.ideal, bound);
}

Int cusp_fiber_count(const NumberField& K, const Level& level1, const Level& level2, const CuspRep& cusp,
                     long bound) {
    Int idx = index(K, level1, level2, bound);
    Int p = parabolic_index(K, level1, level2, cusp, bound);
    if (!mpz_divisible_p(idx.get_mpz_t(), p.get_mpz_t()))
        fail("NonDivisible", "index is not divisible by the parabolic index", ErrorKind::Verification);
    return idx / p;
}

std::int64_t cusps_above(const CuspTable& t1, const CuspTable& t2, const CuspRep& cusp) {
    const std::int64_t target = t1.orbit_of(cusp.residue_a, cusp.residue_c);
    std::int64_t count = 0;
    for (auto [a, c] : t2.representatives()) {
        std::int64_t ra = t1.ring().encode(t2.ring().decode(a));
        std::int64_t rc = t1.ring().encode(t2.ring().decode(c));
        if (t1.orbit_of(ra, rc) == target) ++count;
    }
    return count;
}

std::vector<NegligibilityTerm> negligibility_sums(const NumberField& K, const Level& level1,
                                                  const std::vector<Level>& sequence, long bound) {
    auto cusps = cusp_set(K, level1, bound);
    std::vector<NegligibilityTerm> out;
    const IdealHNF* prev = &level1.ideal;
    for (const auto& L : sequence) {
        require_nested(*prev, L.ideal);
        prev = &L.ideal;
        NegligibilityTerm t;
        t.ideal = L.ideal;
        t.norm = numberfield::ideal_norm(K, L.ideal);
        t.sum28 = 0;
        for (const auto& c : cusps) {
            Int p = parabolic_index(K, level1, L, c, bound);
            t.parabolic_index = p;
            t.sum28 += Rat(1) / Rat(p);
            add_log_term(t.sum29, p, Rat(1) / Rat(p));
        }
        out.push_back(std::move(t));
    }
    return out;
}

IdealSequence load_ideal_sequence(const NumberField& K, const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("ParseError", std::string("ideal sequence document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("level1") || !j.contains("sequence"))
        fail("ParseError", "ideal sequence needs 'level1' and 'sequence'");
    bool tf = j.value("torsion_free", false);
    IdealSequence s;
    s.level1 = make_level(K, numberfield::ideal_spec_from_json(K, j.at("level1")), tf);
    for (const auto& e : j.at("sequence"))
        s.sequence.push_back(make_level(K, numberfield::ideal_spec_from_json(K, e), tf));
    return s;
}

}  // namespace cusptor::congruence
