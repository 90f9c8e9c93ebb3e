#include "cusptor/growth.hpp"

#include "cusptor/linalg.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace cusptor::growth {

namespace {

/* sign of the shuffle putting the elements of a before those of b, both sorted */
int shuffle_sign(std::uint32_t a, std::uint32_t b) {
    int inv = 0;
    for (std::uint32_t x = a; x; x &= x - 1) inv += std::popcount(b & ((1u << std::countr_zero(x)) - 1u));
    return (inv & 1) ? -1 : 1;
}

std::string form_name(const kostant::Signature& s, std::uint32_t mask, std::uint32_t base) {
    std::vector<std::string> parts;
    for (int t = 0; t < s.dK(); ++t) {
        if (!((mask >> t) & 1u)) continue;
        if (t < s.r1) parts.push_back("dx" + std::to_string(t + 1));
        else if (t < s.r1 + s.r2) parts.push_back("dz" + std::to_string(t - s.r1 + 1));
        else parts.push_back("dzb" + std::to_string(t - s.r1 - s.r2 + 1));
    }
    for (int a = 0; a < s.base_rank(); ++a)
        if ((base >> a) & 1u) parts.push_back("dw" + std::to_string(a + 1));
    if (parts.empty()) return "1";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += "^" + parts[i];
    return out;
}

}  // namespace

GaloisAction full_symmetric(int n) {
    GaloisAction g;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do g.perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    g.assumed_full = true;
    return g;
}

GaloisAction make_galois_action(int n, const std::vector<std::vector<int>>& perms) {
    std::set<std::vector<int>> seen;
    for (const auto& p : perms) {
        std::vector<int> q = p;
        std::sort(q.begin(), q.end());
        for (int i = 0; i < n; ++i)
            if (static_cast<int>(q.size()) != n || q[static_cast<std::size_t>(i)] != i)
                fail("ParseError", "galois action entries must be permutations of 0..d_K-1");
        seen.insert(p);
    }
    for (const auto& p : seen)
        for (const auto& q : seen) {
            std::vector<int> pq(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) pq[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])];
            if (!seen.count(pq)) fail("ParseError", "galois action is not closed under composition");
        }
    GaloisAction g;
    g.perms.assign(seen.begin(), seen.end());
    g.assumed_full = false;
    return g;
}

bool admissible(const std::vector<int>& d) {
    std::set<int> s(d.begin(), d.end());
    return s.size() == d.size() && std::all_of(d.begin(), d.end(), [](int v) { return v >= 0; });
}

AcyclicWeightSpec acyclic_weight(const kostant::Signature& s, const std::vector<int>& d, const GaloisAction& g) {
    if (s.r2 < 1) fail("NoComplexPlace", "the construction needs a complex place");
    if (static_cast<int>(d.size()) != s.dK()) fail("ParseError", "d_sigma needs one entry per embedding");
    if (!admissible(d)) fail("ParseError", "d_sigma entries must be pairwise distinct and nonnegative");
    AcyclicWeightSpec spec;
    spec.d_sigma = d;
    spec.fully_acyclic = s.r1 > 0;
    for (const auto& p : g.perms) {
        if (static_cast<int>(p.size()) != s.dK()) fail("ParseError", "galois action has the wrong degree");
        Constituent c;
        for (int i = 0; i < s.r1; ++i) c.weight.m.push_back(d[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])]);
        for (int j = 0; j < s.r2; ++j) {
            c.weight.n.push_back(d[static_cast<std::size_t>(p[static_cast<std::size_t>(s.r1 + j)])]);
            c.weight.nbar.push_back(d[static_cast<std::size_t>(p[static_cast<std::size_t>(s.r1 + s.r2 + j)])]);
        }
        std::set<int> ms(c.weight.m.begin(), c.weight.m.end());
        if (ms.size() != c.weight.m.size())
            fail("FormulaMismatch", "constituent with repeated m entries", ErrorKind::Verification);
        for (int j = 0; j < s.r2; ++j)
            if (c.weight.n[static_cast<std::size_t>(j)] == c.weight.nbar[static_cast<std::size_t>(j)])
                fail("FormulaMismatch", "self-conjugate constituent", ErrorKind::Verification);
        c.status = kostant::acyclicity_status(s, c.weight);
        spec.constituents.push_back(std::move(c));
    }
    return spec;
}

std::vector<AcyclicWeightSpec> generate_acyclic_weights(const kostant::Signature& s, int max_entry, const GaloisAction& g) {
    if (s.r2 < 1) fail("NoComplexPlace", "the construction needs a complex place");
    const int n = s.dK();
    std::vector<AcyclicWeightSpec> out;
    std::vector<int> d(static_cast<std::size_t>(n), 0);
    for (;;) {
        if (admissible(d)) out.push_back(acyclic_weight(s, d, g));
        int t = 0;
        while (t < n && d[static_cast<std::size_t>(t)] == max_entry) d[static_cast<std::size_t>(t++)] = 0;
        if (t == n) break;
        ++d[static_cast<std::size_t>(t)];
    }
    return out;
}

std::string to_string(Mode m) { return m == Mode::Acyclic ? "acyclic" : "selfdual"; }

Mode parse_mode(const std::string& s) {
    if (s == "acyclic" || s == "ACYCLIC") return Mode::Acyclic;
    if (s == "selfdual" || s == "SELF_DUAL_LATTICE") return Mode::SelfDualLattice;
    fail("ParseError", "mode must be acyclic or selfdual");
}

Rat predicted_bound(int r1, int r2, const Rat& t2, const Rat& vol1, Mode mode) {
    if (r2 != 1) return Rat(0);
    Rat b = t2 * vol1;
    if (r1 % 2 == 0) b = -b;  // (-1)^{r1+1}
    if (mode == Mode::Acyclic) b *= 2;
    return b;
}

GrowthReport growth_lower_bound(const GrowthInputs& in) {
    if (!in.field) fail("MissingData", "no field");
    const NumberField& K = *in.field;
    GrowthReport rep;
    rep.field_name = K.name;
    rep.r1 = K.r1;
    rep.r2 = K.r2;
    rep.disc = K.disc;
    rep.t2 = in.t2;
    rep.vol1 = in.vol1;
    rep.mode = in.mode;
    if (in.vol1.value <= 0) fail("ParseError", "vol1 must be positive");
    rep.rank_condition = K.r2 == 1;
    if (!rep.rank_condition) {
        rep.warnings.push_back("WrongRank: fundamental rank r2 = " + std::to_string(K.r2) + " != 1, bound forced to 0");
    } else {
        Rat signed_t2 = K.r1 % 2 == 0 ? Rat(-in.t2.value) : in.t2.value;
        if (signed_t2 <= 0) fail("WrongSign", "(-1)^{r1+1} t2 must be positive");
    }
    rep.bound = predicted_bound(K.r1, K.r2, in.t2.value, in.vol1.value, in.mode);
    if (!in.tables.empty() && in.tables.size() != in.ideals.sequence.size())
        fail("MissingData", "one table (or null) per level of the sequence");

    auto neg = congruence::negligibility_sums(K, in.ideals.level1, in.ideals.sequence, in.bound);
    for (std::size_t i = 0; i < in.ideals.sequence.size(); ++i) {
        LevelRow row;
        row.level = in.ideals.sequence[i];
        row.norm = numberfield::ideal_norm(K, row.level.ideal);
        row.index = congruence::index(K, in.ideals.level1, row.level, in.bound);
        try {
            congruence::CuspTable table(K, row.level.ideal, in.bound);
            row.cusp_count = static_cast<long>(table.cusp_count());
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Input || (e.code() != "TooLarge" && e.code() != "UnsupportedClassGroup")) throw;
            rep.warnings.push_back("level " + std::to_string(i) + ": cusps not enumerated (" + e.code() + ")");
        }
        row.negligibility = neg[i];
        row.bound_times_index = rep.bound * Rat(row.index);
        if (!in.tables.empty() && in.tables[i]) {
            const auto& t = *in.tables[i];
            LogSum s;
            for (std::size_t q = 0; q < t.degrees.size(); ++q) {
                if ((static_cast<int>(q) + K.r1) % 2 != 0) continue;
                if (in.mode == Mode::Acyclic && t.degrees[q].free_rank != 0)
                    rep.warnings.push_back("level " + std::to_string(i) + ": nonzero free rank in degree " +
                                           std::to_string(q) + " for an acyclic lattice");
                add_log_term(s, t.degrees[q].torsion_order(), Rat(1) / Rat(row.index));
            }
            row.measured = std::move(s);
        }
        rep.levels.push_back(std::move(row));
    }
    return rep;
}

BasisLedger boundary_basis_ledger(const kostant::Signature& s, const kostant::Weight& w) {
    auto bc = kostant::boundary_cohomology(s, w);
    if (!bc.nontrivial()) fail("TrivialCohomology", "boundary cohomology vanishes for this weight");
    BasisLedger L;
    L.plus_dims = bc.plus;
    L.minus_dims = bc.minus;
    const int r = s.base_rank();
    const std::uint32_t full_fiber = (1u << s.dK()) - 1u, full_base = (1u << r) - 1u;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> plus, minus;  // (fiber mask, base mask)
    for (const auto& g : bc.kernel.generators)
        for (std::uint32_t S = 0; S <= full_base; ++S) {
            (g.plus ? plus : minus).emplace_back(g.sigma.mask, S);
            (g.plus ? L.plus_basis : L.minus_basis).push_back(form_name(s, g.sigma.mask, S));
        }
    if (plus.size() != minus.size()) fail("FormulaMismatch", "plus and minus parts differ in size", ErrorKind::Verification);
    /* integral of mu_+ ^ mu_- against the orientation (fiber forms, then base forms) */
    IntMatrix P(plus.size(), minus.size());
    for (std::size_t i = 0; i < plus.size(); ++i)
        for (std::size_t j = 0; j < minus.size(); ++j) {
            const auto [A, S] = plus[i];
            const auto [B, T] = minus[j];
            if (B != (full_fiber & ~A) || T != (full_base & ~S)) continue;
            int sign = shuffle_sign(A, B) * shuffle_sign(S, T);
            if ((std::popcount(S) * std::popcount(B)) % 2) sign = -sign;
            P(i, j) = sign;
        }
    L.change_of_basis_det = linalg::determinant(P);
    if (L.change_of_basis_det != 1 && L.change_of_basis_det != -1)
        fail("FormulaMismatch", "Poincare pairing of the +- parts is not unimodular", ErrorKind::Verification);
    /* mu_- replaced by the dual basis of mu_+: the pairing becomes the identity */
    auto inv = *linalg::unimodular_inverse(P);
    L.pairing = P * inv;
    L.boundary_torsion = Rat(1);
    L.convention = "mu_X = (mu_X_(2), mu_X_inf); mu_(X,dX) = d(mu_+)";
    L.note = "self-dual change of basis has determinant " + cusptor::to_string(L.change_of_basis_det) +
             ", so the boundary torsion in this basis is 1";
    return L;
}

}  // namespace cusptor::growth
