// Acceptance run: one line per criterion.  Exits 0 when every criterion passes or fails only
// in the documented way (see KNOWN_RED below and the README).

#include "cusptor/congruence.hpp"
#include "cusptor/growth.hpp"
#include "cusptor/integral.hpp"
#include "cusptor/kostant.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace cusptor;
using numberfield::Elem;
using numberfield::IdealHNF;
using numberfield::NumberField;

namespace {

/* criteria whose expected value disagrees with an independent oracle; the report says why */
const std::set<int> KNOWN_RED = {5, 9, 10};

struct Result {
    bool pass = false;
    std::string detail;
};

std::string data(const std::string& rel) { return std::string(CUSPTOR_DATA_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NumberField field(const std::string& name) { return numberfield::load_field_file(data("fields/" + name)); }

congruence::Level lev(const NumberField& K, const Elem& g, unsigned e = 1) {
    return congruence::make_level(K, numberfield::ideal_power(K, numberfield::principal_ideal(K, g), e));
}

Elem el(std::initializer_list<long> v) {
    Elem e;
    for (long x : v) e.push_back(Int(x));
    return e;
}

std::vector<kostant::Signature> small_signatures() {
    std::vector<kostant::Signature> out;
    for (int r2 = 0; r2 <= 3; ++r2)
        for (int r1 = 0; r1 + 2 * r2 <= 6; ++r1)
            if (r1 + r2 >= 1) out.push_back({r1, r2});
    return out;
}

std::string sig(const kostant::Signature& s) { return "(" + std::to_string(s.r1) + "," + std::to_string(s.r2) + ")"; }

std::string describe(const integral::CohomologyDegree& d) {
    std::string s = d.free_rank ? "Z^" + std::to_string(d.free_rank) : "";
    for (const auto& t : d.torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + to_string(t);
    return s.empty() ? "0" : s;
}

std::map<std::string, kostant::GridVerification> g_grids;

const std::map<std::string, kostant::GridVerification>& grids() {
    if (g_grids.empty())
        for (const auto& s : small_signatures()) g_grids.emplace(sig(s), kostant::verify_grid(s, 3, 0));
    return g_grids;
}

Result c1() {
    long weights = 0, mism = 0, sq = 0, bad_dim = 0;
    for (const auto& [name, g] : grids()) {
        const auto& k = g.kernel_dC;
        weights += k.weights;
        mism += k.mismatches;
        sq += k.square_failures;
        if (k.kernel_elements != k.weights * (1L << g.signature.dK())) ++bad_dim;
    }
    return {mism == 0 && sq == 0 && bad_dim == 0,
            std::to_string(weights) + " weights over " + std::to_string(grids().size()) + " signatures, " +
                std::to_string(mism) + " subspace mismatches, " + std::to_string(bad_dim) +
                " signatures with kernel dim != 2^r1 4^r2"};
}

Result tally_result(std::function<const kostant::LemmaTally&(const kostant::GridVerification&)> pick, const std::string& what) {
    long checked = 0, mism = 0, skipped = 0;
    for (const auto& [name, g] : grids()) {
        const auto& t = pick(g);
        checked += t.checked;
        mism += t.mismatches;
        skipped += t.skipped;
    }
    return {mism == 0 && checked > 0, std::to_string(checked) + " " + what + " checked, " + std::to_string(mism) +
                                          " mismatches, " + std::to_string(skipped) + " outside the hypotheses"};
}

Result c2() {
    using namespace kostant;
    auto r = tally_result([](const GridVerification& g) -> const LemmaTally& { return g.kernel_S; }, "weights");
    /* the two named triviality examples */
    bool a = !ker_eth_S(Signature{2, 1}, Weight{{1, 2}, {0}, {0}}).nontrivial;
    auto b = ker_eth_S(Signature{0, 2}, Weight{{}, {3, 1}, {0, 0}});
    bool bb = b.nontrivial && b.total_dim() == 4;
    r.pass = r.pass && a && bb;
    r.detail += std::string("; (2,1) m=(1,2) trivial: ") + (a ? "yes" : "no") + ", (0,2) n=(3,1) dim " +
                std::to_string(b.total_dim());
    return r;
}

Result c3() {
    auto t = kostant::verify_binomial_sums();
    return {t.ok() && t.checked > 0, std::to_string(t.checked) + " identities, " + std::to_string(t.mismatches) + " mismatches"};
}

Result c4() {
    auto r = tally_result([](const kostant::GridVerification& g) -> const kostant::LemmaTally& { return g.fredholm; },
                          "weights");
    long nf = 0;
    for (const auto& [name, g] : grids()) nf += g.not_fredholm;
    r.detail += "; NotFredholm at " + std::to_string(nf) + " weights, all with r1 = 0 and n = 0";
    return r;
}

Result c5() {
    auto rep = integral::build_rep_external_file(data("reps/sol.json"));
    auto t = integral::smith_cohomology(integral::total_complex(rep));
    Rat tau = integral::cheeger_torsion(t);
    const auto& h2 = t.degrees.at(2);
    bool expected_h2 = h2.free_rank == 1 && h2.torsion == std::vector<Int>{2};
    std::string d = "H^2 = " + describe(h2) + ", H^3 = " + describe(t.degrees.at(3)) + ", tau^2 = " + to_string(tau) +
                    "; expected Z + Z/2 and 1/2";
    if (!(expected_h2 && tau == Rat(1, 2)))
        d += ". det [[1,2],[1,1]] = -1, so the Wang sequence gives ker(det - 1) = 0 in H^2 and Z/2 in H^3";
    return {expected_h2 && tau == Rat(1, 2), d};
}

Result c6() {
    auto G = field("gaussian.json");
    auto b = kostant::boundary_cohomology(kostant::Signature{0, 1}, kostant::Weight{{}, {1}, {0}});
    long checked = 0, bad = 0;
    for (const auto& L : {lev(G, el({3, 0})), lev(G, el({2, 1})), lev(G, el({1, 1}), 3), lev(G, el({1, 1}), 4)}) {
        auto cusps = congruence::cusp_set(G, L);
        for (std::size_t i = 0; i < cusps.size() && i < 4; ++i) {
            auto t = integral::smith_cohomology(integral::total_complex(integral::build_rep_symd(G, 1, L, cusps[i])));
            ++checked;
            bool ok = t.degrees.size() == b.dims.size();
            /* two constituents, n = (1) and its conjugate, with equal dimensions */
            for (std::size_t q = 0; ok && q < b.dims.size(); ++q) ok = t.degrees[q].free_rank == 2 * b.dims[q];
            if (!ok) ++bad;
        }
    }
    return {bad == 0 && checked > 0, std::to_string(checked) + " (level, cusp) pairs, " + std::to_string(bad) + " rank mismatches"};
}

Result c7() {
    long checked = 0, bad = 0;
    for (const auto& [name, g] : grids()) {
        checked += g.duality.checked;
        bad += g.duality.mismatches;
    }
    long tables = 0, nonadd = 0, dual_bad = 0;
    auto C = field("cubic_2.json");
    auto Q = field("quartic_283.json");
    std::vector<std::pair<const NumberField*, congruence::Level>> cases;
    for (unsigned e = 3; e <= 6; ++e) cases.push_back({&C, lev(C, el({0, 1, 0}), e)});
    cases.push_back({&Q, lev(Q, el({2, 0, 0, 0}))});
    for (const auto& [K, L] : cases) {
        auto c = integral::total_complex(integral::build_rep_trivial(*K, L));
        auto t = integral::smith_cohomology(c);
        auto s = integral::pm_split_integral(t, c, K->r1, K->r2);
        ++tables;
        if (!s.additive) ++nonadd;
        for (std::size_t q = 0; q < s.plus.size(); ++q)
            if (s.plus[q] != s.minus[static_cast<std::size_t>(2 * K->r1 + 2) - q]) ++dual_bad;
    }
    return {bad == 0 && checked > 0 && nonadd == 0 && dual_bad == 0,
            std::to_string(checked) + " grid points with b_q+ = b_(2r1+2-q)-, " + std::to_string(bad) + " failures; " +
                std::to_string(tables) + " integral tables, " + std::to_string(nonadd) + " non-additive, " +
                std::to_string(dual_bad) + " duality failures"};
}

Result c8() {
    long pairs = 0, cusps = 0, bad = 0, partition_bad = 0;
    for (const std::string name : {"gaussian.json", "sqrt2.json"}) {
        auto K = field(name);
        auto ideals = numberfield::enumerate_ideals(K, 64);
        std::vector<congruence::Level> levels;
        std::vector<congruence::CuspTable> tables;
        std::vector<std::vector<congruence::CuspRep>> reps;
        for (const auto& a : ideals) {
            levels.push_back(congruence::make_level(K, a));
            tables.emplace_back(K, a);
            reps.push_back(congruence::cusp_set(K, levels.back()));
        }
        for (std::size_t i = 0; i < ideals.size(); ++i)
            for (std::size_t j = 0; j < ideals.size(); ++j) {
                if (!numberfield::ideal_contains(ideals[i], ideals[j])) continue;
                ++pairs;
                std::int64_t total = 0;
                for (const auto& cu : reps[i]) {
                    ++cusps;
                    Int f = congruence::cusp_fiber_count(K, levels[i], levels[j], cu);
                    auto direct = congruence::cusps_above(tables[i], tables[j], cu);
                    total += direct;
                    if (f != Int(static_cast<long>(direct))) ++bad;
                }
                if (total != static_cast<std::int64_t>(tables[j].cusp_count())) ++partition_bad;
            }
    }
    return {bad == 0 && partition_bad == 0 && pairs > 0,
            std::to_string(pairs) + " nested level pairs, " + std::to_string(cusps) + " cusps, " + std::to_string(bad) +
                " fiber mismatches, " + std::to_string(partition_bad) + " partition failures"};
}

Result negligibility(const std::string& file, bool with_ratio) {
    auto G = field("gaussian.json");
    auto seq = congruence::load_ideal_sequence(G, slurp(data("ideals/" + file)));
    auto n = congruence::negligibility_sums(G, seq.level1, seq.sequence);
    bool dec28 = true, dec29 = true;
    std::string s28, s29;
    for (std::size_t i = 0; i < n.size(); ++i) {
        s28 += (i ? ", " : "") + to_string(n[i].sum28);
        s29 += (i ? ", " : "") + decimal_string(n[i].sum29, 32);
        if (i > 0) {
            dec28 = dec28 && n[i].sum28 < n[i - 1].sum28;
            dec29 = dec29 && compare(n[i].sum29, n[i - 1].sum29) < 0;
        }
    }
    bool ratio = !with_ratio || n.back().sum28 * 4 < n.front().sum28;
    std::string d = "sum28 = " + s28 + " (" + (dec28 ? "strictly decreasing" : "not strictly decreasing") +
                    "); sum29 = " + s29 + " (" + (dec29 ? "strictly decreasing" : "not strictly decreasing") + ")";
    if (with_ratio) d += std::string("; final/first sum28 < 1/4: ") + (ratio ? "yes" : "no");
    if (!dec29) d += "; the first term of sum29 is 0 because the parabolic index at level1 itself is 1";
    return {dec28 && dec29 && ratio, d};
}

Result c10() {
    long computed = 0;
    std::vector<std::string> off;
    auto consider = [&](const std::string& label, const integral::CohomologyTable& t) {
        ++computed;
        Rat tau = integral::cheeger_torsion(t);
        if (tau != 1) off.push_back(label + " tau^2 = " + to_string(tau));
    };
    auto G = field("gaussian.json");
    auto S = field("sqrt2.json");
    auto C = field("cubic_2.json");
    auto Q = field("quartic_283.json");
    for (unsigned e = 3; e <= 6; ++e)
        consider("Q(i) (1+i)^" + std::to_string(e),
                 integral::smith_cohomology(integral::total_complex(integral::build_rep_trivial(G, lev(G, el({1, 1}), e)))));
    for (unsigned e = 3; e <= 6; ++e)
        consider("cubic (t)^" + std::to_string(e),
                 integral::smith_cohomology(integral::total_complex(integral::build_rep_trivial(C, lev(C, el({0, 1, 0}), e)))));
    consider("quartic (2)",
             integral::smith_cohomology(integral::total_complex(integral::build_rep_trivial(Q, lev(Q, el({2, 0, 0, 0}))))));
    consider("Q(sqrt2) (3)",
             integral::smith_cohomology(integral::total_complex(integral::build_rep_trivial(S, lev(S, el({3, 0}))))));
    consider("Q(sqrt2) (sqrt2)^3",
             integral::smith_cohomology(integral::total_complex(integral::build_rep_trivial(S, lev(S, el({0, 1}), 3)))));
    std::string d = std::to_string(computed) + " trivial-coefficient tables, " + std::to_string(off.size()) + " with tau^2 != 1";
    for (const auto& o : off) d += "; " + o;
    if (!off.empty()) d += " (r2 = 0 cross-sections are torus bundles whose Wang torsion is unbalanced)";
    return {off.empty(), d};
}

Result c11() {
    long checks = 0, bad = 0;
    struct Case {
        std::string field, ideals;
        Rat t2, vol;
    };
    const std::vector<Case> cases = {{"quartic_283.json", "quartic_2_1_2.json", Rat(-1, 20), Rat(10)},
                                     {"cubic_2.json", "cubic_t_3_6.json", Rat(1, 3), Rat(7, 2)},
                                     {"gaussian.json", "gaussian_1pi_3_6.json", Rat(-5, 8), Rat(3)}};
    for (const auto& cs : cases) {
        auto K = field(cs.field);
        for (auto mode : {growth::Mode::Acyclic, growth::Mode::SelfDualLattice}) {
            growth::GrowthInputs in;
            in.field = &K;
            in.ideals = congruence::load_ideal_sequence(K, slurp(data("ideals/" + cs.ideals)));
            in.t2 = {cs.t2, "acceptance"};
            in.vol1 = {cs.vol, "acceptance"};
            in.mode = mode;
            auto r = growth::growth_lower_bound(in);
            /* 2 (-1)^{r1+1} t2 vol1, half of it for self-dual lattices */
            Rat expect = cs.t2 * cs.vol * (K.r1 % 2 == 0 ? -1 : 1) * (mode == growth::Mode::Acyclic ? 2 : 1);
            ++checks;
            if (r.bound != expect) ++bad;
            for (const auto& row : r.levels) {
                ++checks;
                if (row.bound_times_index != expect * Rat(row.index)) ++bad;
            }
        }
    }
    /* sign gate and the r2 != 1 case */
    auto Q = field("quartic_283.json");
    growth::GrowthInputs in;
    in.field = &Q;
    in.ideals = congruence::load_ideal_sequence(Q, slurp(data("ideals/quartic_2_1_2.json")));
    in.t2 = {Rat(1, 20), "acceptance"};
    in.vol1 = {Rat(10), "acceptance"};
    bool gate = false;
    try {
        growth::growth_lower_bound(in);
    } catch (const Error& e) {
        gate = e.code() == "WrongSign";
    }
    auto S = field("sqrt2.json");
    growth::GrowthInputs sr;
    sr.field = &S;
    auto L = lev(S, el({3, 0}));
    sr.ideals = {L, {L}};
    sr.t2 = {Rat(1), "acceptance"};
    sr.vol1 = {Rat(1), "acceptance"};
    bool zero = growth::growth_lower_bound(sr).bound == 0 && growth::predicted_bound(0, 2, Rat(-1), Rat(1), growth::Mode::Acyclic) == 0;
    return {bad == 0 && gate && zero, std::to_string(checks) + " exact comparisons, " + std::to_string(bad) +
                                          " mismatches; WrongSign gate " + (gate ? "ok" : "missing") + "; r2 != 1 bound 0 " +
                                          (zero ? "ok" : "wrong")};
}

std::string run_cli(const std::string& args, int& status) {
    std::string cmd = std::string(CUSPTOR_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        status = -1;
        return "";
    }
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int rc = pclose(p);
    status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::string kept, line;
    std::istringstream in(out);
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) kept += line + "\n";
    return kept;
}

Result c12() {
    const std::vector<std::string> runs = {
        "growth report --field " + data("fields/cubic_2.json") + " --ideals " + data("ideals/cubic_t_3_6.json") +
            " --t2 1/3 --vol 7/2 --weights-max 2",
        "integral cohom --field " + data("fields/quartic_283.json") + " --level " + data("ideals/quartic_2.json"),
        "cusps --field " + data("fields/gaussian.json") + " --level " + data("ideals/gaussian_1pi_6.json") + " --level1 " +
            data("ideals/gaussian_1pi_cubed.json"),
        "kostant verify --r1 1 --r2 1 --max-weight 2 --threads 2",
        "negligibility --field " + data("fields/gaussian.json") + " --ideals " + data("ideals/gaussian_2_then_1pi.json")};
    long identical = 0;
    std::string d;
    for (const auto& a : runs) {
        int s1 = 0, s2 = 0;
        auto o1 = run_cli(a, s1);
        auto o2 = run_cli(a, s2);
        bool same = !o1.empty() && o1 == o2 && s1 == 0 && s2 == 0;
        if (same) ++identical;
        else d += "; differs or failed: " + a.substr(0, a.find(' ', a.find(' ') + 1));
    }
    return {identical == static_cast<long>(runs.size()),
            std::to_string(identical) + "/" + std::to_string(runs.size()) + " commands byte-identical across two runs" + d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"kernel of d_C matches the closed form on the d_K <= 6 grid", c1},
        {"kernel of d_S matches brute force", c2},
        {"binomial sums", c3},
        {"Fredholm gate and b-kernel", c4},
        {"Sol-manifold torsion", c5},
        {"Sym^1 rank consistency over Q(i)", c6},
        {"duality of the +- split", c7},
        {"cusp fibers and partition", c8},
        {"negligibility along (1+i)^3..(1+i)^6", [] { return negligibility("gaussian_1pi_3_6.json", true); }},
        {"self-dual torsion of trivial coefficients", c10},
        {"growth-report arithmetic", c11},
        {"CLI determinism", c12}};
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        auto t0 = std::chrono::steady_clock::now();
        Result r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool known = !r.pass && KNOWN_RED.count(id);
        if (!r.pass && !known) ++unexpected;
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.2fs", secs);
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << criteria[i].first << " (" << tbuf << ")"
                  << (known ? " [known red]" : "") << ": " << r.detail << "\n";
        if (id == 9) {
            auto s = negligibility("gaussian_2_then_1pi.json", true);
            std::cout << "       C9 with level1 = (2): " << (s.pass ? "pass" : "fail") << ": " << s.detail << "\n";
            if (!s.pass) ++unexpected;
        }
        if (r.pass && KNOWN_RED.count(id)) std::cout << "       C" << id << " listed as known red but passed\n";
    }
    std::cout << (unexpected ? "acceptance: unexpected failures\n" : "acceptance: only known-red criteria fail\n");
    return unexpected ? 1 : 0;
}
