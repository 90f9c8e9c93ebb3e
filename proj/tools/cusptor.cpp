#include "serialize.hpp"

#include "cusptor/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace cusptor::cli {

namespace {

struct RunConfig {
    std::string subcommand;
    long bound = numberfield::kDefaultEnumBound;
    int precision = 64;
    int threads = 0;
    std::string output;

    std::string field, level, level1, level2, ideals, rep, table, relative, covolumes, weight, galois;
    std::vector<std::string> tables;
    std::string t2, vol, mode = "acyclic", t2_source = "ingested", vol_source = "ingested";
    std::string expect;
    std::vector<std::string> relative_index;
    int r1 = -1, r2 = -1, max_weight = 3, symd = -1, cusp = 0, weights_max = -1;
    bool check = false;
};

/* Verification results that should turn the exit status to 1 without aborting the report. */
struct Outcome {
    json report;
    bool verified = true;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("MissingData", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        fail("ParseError", path + ": " + e.what());
    }
}

std::string timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
}

NumberField need_field(const RunConfig& c) {
    if (c.field.empty()) fail("MissingData", "--field is required");
    return numberfield::load_field(read_text(c.field));
}

congruence::Level need_level(const NumberField& K, const std::string& path, const char* flag) {
    if (path.empty()) fail("MissingData", std::string(flag) + " is required");
    return congruence::make_level(K, numberfield::load_ideal(K, read_text(path)));
}

Rat need_rational(const std::string& s, const char* flag) {
    if (s.empty()) fail("MissingData", std::string(flag) + " is required");
    return parse_rational(s);
}

std::string mask_name(const kostant::Signature& s, std::uint32_t mask) {
    std::string out;
    for (int t = 0; t < s.dK(); ++t) {
        if (!((mask >> t) & 1u)) continue;
        if (!out.empty()) out += "^";
        if (t < s.r1) out += "dx" + std::to_string(t + 1);
        else if (t < s.r1 + s.r2) out += "dz" + std::to_string(t - s.r1 + 1);
        else out += "dzb" + std::to_string(t - s.r1 - s.r2 + 1);
    }
    return out.empty() ? "1" : out;
}

Outcome cmd_field_validate(const RunConfig& c) {
    NumberField K = need_field(c);
    json r = j_field(K);
    r["sturm_real_roots"] = numberfield::sturm_real_roots(K.poly);
    json norms = json::array();
    for (const auto& u : K.units) norms.push_back(j(K.norm(u)));
    r["unit_norms"] = norms;
    r["valid"] = true;
    return {r, true};
}

Outcome cmd_cusps(const RunConfig& c) {
    NumberField K = need_field(c);
    auto level = need_level(K, c.level, "--level");
    congruence::CuspTable table(K, level.ideal, c.bound);
    auto reps = congruence::cusp_set(K, level, c.bound);
    json list = json::array();
    for (const auto& p : reps)
        list.push_back({{"a", j_elem(p.a)},
                        {"c", j_elem(p.c)},
                        {"residue", {p.residue_a, p.residue_c}},
                        {"orbit_size", p.orbit_size},
                        {"stabilizer_size", p.stabilizer_size}});
    json r = {{"field", K.name},
              {"level", j_level(K, level)},
              {"unimodular_count", table.unimodular_count()},
              {"unit_image_size", table.unit_image_size()},
              {"cusp_count", table.cusp_count()},
              {"cusps", list}};
    bool ok = true;
    if (!c.level1.empty()) {
        /* the level is read as the deeper one; cusps of --level1 are lifted to it */
        auto l1 = need_level(K, c.level1, "--level1");
        congruence::CuspTable t1(K, l1.ideal, c.bound);
        Int idx = congruence::index(K, l1, level, c.bound);
        json fibers = json::array();
        Int total = 0;
        for (const auto& cu : congruence::cusp_set(K, l1, c.bound)) {
            Int formula = congruence::cusp_fiber_count(K, l1, level, cu, c.bound);
            auto direct = congruence::cusps_above(t1, table, cu);
            total += Int(static_cast<long>(direct));
            bool agree = formula == Int(static_cast<long>(direct));
            ok = ok && agree;
            fibers.push_back({{"cusp", j_elem(cu.a)},
                              {"cusp_c", j_elem(cu.c)},
                              {"parabolic_index", j(congruence::parabolic_index(K, l1, level, cu, c.bound))},
                              {"fiber_count", j(formula)},
                              {"orbit_enumeration", direct},
                              {"agree", agree}});
        }
        bool partition = total == Int(static_cast<long>(table.cusp_count()));
        ok = ok && partition;
        r["over"] = {{"level1", j_level(K, l1)},
                     {"index", j(idx)},
                     {"fibers", fibers},
                     {"partition_holds", partition}};
    }
    return {r, ok};
}

Outcome cmd_index(const RunConfig& c) {
    NumberField K = need_field(c);
    auto l1 = need_level(K, c.level1, "--level1");
    auto l2 = need_level(K, c.level2, "--level2");
    auto order = [&](const congruence::Level& l) {
        auto o = congruence::sl2_order_mod(K, l, c.bound);
        return json{{"value", j(o.value)}, {"enumerated", o.enumerated}, {"formula", o.formula},
                    {"formula_only", o.formula_only}};
    };
    json r = {{"field", K.name},
              {"level1", j_level(K, l1)},
              {"level2", j_level(K, l2)},
              {"sl2_order_level1", order(l1)},
              {"sl2_order_level2", order(l2)},
              {"index", j(congruence::index(K, l1, l2, c.bound))}};
    try {
        r["unit_index"] = j(numberfield::unit_index_mod(K, l1.ideal, l2.ideal, c.bound));
    } catch (const Error& e) {
        if (e.code() != "TooLarge") throw;
        r["unit_index"] = nullptr;
    }
    return {r, true};
}

Outcome cmd_negligibility(const RunConfig& c) {
    NumberField K = need_field(c);
    if (c.ideals.empty()) fail("MissingData", "--ideals is required");
    auto seq = congruence::load_ideal_sequence(K, read_text(c.ideals));
    auto terms = congruence::negligibility_sums(K, seq.level1, seq.sequence, c.bound);
    json list = json::array();
    bool dec28 = true, dec29 = true;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& t = terms[i];
        list.push_back({{"ideal", j_matrix(t.ideal.matrix)},
                        {"norm", j(t.norm)},
                        {"parabolic_index", j(t.parabolic_index)},
                        {"sum28", j_rat_decimal(t.sum28, c.precision)},
                        {"sum29", j_logsum(t.sum29, c.precision)}});
        if (i > 0) {
            dec28 = dec28 && t.sum28 < terms[i - 1].sum28;
            dec29 = dec29 && compare(t.sum29, terms[i - 1].sum29) < 0;
        }
    }
    json r = {{"field", K.name},
              {"level1", j_level(K, seq.level1)},
              {"terms", list},
              {"sum28_strictly_decreasing", dec28},
              {"sum29_strictly_decreasing", dec29}};
    if (!terms.empty() && terms.front().sum28 != 0)
        r["sum28_final_over_first"] = j_rat_decimal(terms.back().sum28 / terms.front().sum28, c.precision);
    return {r, !c.check || (dec28 && dec29)};
}

kostant::Weight load_weight(const std::string& path) {
    json w = parse_json(path);
    kostant::Weight out;
    try {
        if (w.contains("m")) out.m = w["m"].get<std::vector<int>>();
        if (w.contains("n")) out.n = w["n"].get<std::vector<int>>();
        if (w.contains("nbar")) out.nbar = w["nbar"].get<std::vector<int>>();
    } catch (const json::exception& e) {
        fail("ParseError", path + ": " + e.what());
    }
    return out;
}

Outcome cmd_kostant_verify(const RunConfig& c) {
    if (c.r1 < 0 || c.r2 < 0) fail("ParseError", "--r1 and --r2 are required");
    if (c.max_weight < 0) fail("ParseError", "--max-weight must be nonnegative");
    kostant::Signature s{c.r1, c.r2};
    auto g = kostant::verify_grid(s, c.max_weight, c.threads);
    auto b = kostant::verify_binomial_sums();
    const auto& k = g.kernel_dC;
    json r = {{"signature", {c.r1, c.r2}},
              {"max_weight", c.max_weight},
              {"kernel_dC",
               {{"weights", k.weights},
                {"elements", k.elements},
                {"kernel_elements", k.kernel_elements},
                {"expected_kernel_per_weight", 1L << (s.r1 + 2 * s.r2)},
                {"mismatches", k.mismatches},
                {"square_failures", k.square_failures},
                {"fallbacks", k.fallbacks},
                {"pass", k.ok() && k.kernel_elements == k.weights * (1L << (s.r1 + 2 * s.r2))}}},
              {"kernel_S", j_tally(g.kernel_S)},
              {"fredholm", j_tally(g.fredholm)},
              {"not_fredholm_weights", g.not_fredholm},
              {"duality", j_tally(g.duality)},
              {"binomial", j_tally(b)}};
    bool ok = g.ok() && b.ok() && r["kernel_dC"]["pass"].get<bool>();
    r["pass"] = ok;
    return {r, ok};
}

Outcome cmd_kostant_boundary(const RunConfig& c) {
    if (c.weight.empty()) fail("MissingData", "--weight is required");
    kostant::Weight w = load_weight(c.weight);
    kostant::Signature s{static_cast<int>(w.m.size()), static_cast<int>(w.n.size())};
    if (c.r1 >= 0) s.r1 = c.r1;
    if (c.r2 >= 0) s.r2 = c.r2;
    w.check(s);
    auto bc = kostant::boundary_cohomology(s, w);
    json gens = json::array();
    for (const auto& g : bc.kernel.generators)
        gens.push_back({{"forms", mask_name(s, g.sigma.mask)},
                        {"k", g.sigma.k},
                        {"plus", g.plus},
                        {"degree", g.degree},
                        {"x_exponent", j(g.exponent)},
                        {"half_density", g.sigma.x_half_density}});
    json r = {{"signature", {s.r1, s.r2}},
              {"weight", j_weight(w)},
              {"top_degree", bc.top_degree},
              {"dims", bc.dims},
              {"plus", bc.plus},
              {"minus", bc.minus},
              {"nontrivial", bc.nontrivial()},
              {"split_defined", bc.kernel.split_defined},
              {"condition", bc.kernel.condition},
              {"generators", gens},
              {"acyclicity", j_status(kostant::acyclicity_status(s, w))}};
    try {
        auto f = kostant::fredholm_and_l2b_kernel(s, w);
        r["l2b_kernel_dim"] = f.dimension;
        r["fredholm"] = true;
    } catch (const Error& e) {
        if (e.code() != "NotFredholm") throw;
        r["fredholm"] = false;
    }
    if (bc.nontrivial() && bc.kernel.split_defined) {
        auto L = growth::boundary_basis_ledger(s, w);
        r["basis_ledger"] = {{"plus_basis", L.plus_basis},
                             {"minus_basis", L.minus_basis},
                             {"pairing", j_matrix(L.pairing)},
                             {"change_of_basis_det", j(L.change_of_basis_det)},
                             {"boundary_torsion", j(L.boundary_torsion)},
                             {"convention", L.convention},
                             {"note", L.note}};
    }
    return {r, true};
}

Outcome cmd_integral_cohom(const RunConfig& c) {
    integral::LatticeRep rep;
    json source;
    int r1 = c.r1, r2 = c.r2;
    if (!c.rep.empty()) {
        rep = integral::build_rep_external(read_text(c.rep));
        source = {{"rep", c.rep}};
    } else {
        NumberField K = need_field(c);
        auto level = need_level(K, c.level, "--level");
        if (r1 < 0) r1 = K.r1;
        if (r2 < 0) r2 = K.r2;
        if (c.symd < 0) {
            rep = integral::build_rep_trivial(K, level, c.bound);
            source = {{"field", K.name}, {"level", j_level(K, level)}, {"coefficients", "trivial"}};
        } else {
            auto cusps = congruence::cusp_set(K, level, c.bound);
            if (c.cusp < 0 || c.cusp >= static_cast<int>(cusps.size())) fail("ParseError", "--cusp out of range");
            const auto& cu = cusps[static_cast<std::size_t>(c.cusp)];
            rep = integral::build_rep_symd(K, c.symd, level, cu, integral::kDefaultMaxRank, c.bound);
            source = {{"field", K.name},
                      {"level", j_level(K, level)},
                      {"coefficients", "Sym^" + std::to_string(c.symd)},
                      {"cusp", {{"a", j_elem(cu.a)}, {"c", j_elem(cu.c)}}}};
        }
    }
    auto cx = integral::total_complex(rep);
    auto t = integral::smith_cohomology(cx);
    bool euler = cx.euler_characteristic() == t.euler_characteristic();
    json r = {{"source", source},
              {"lattice_rank", rep.rank},
              {"fiber_rank", rep.fiber_rank()},
              {"base_rank", rep.base_rank()},
              {"complex_ranks", cx.ranks},
              {"degrees", j_table(t)},
              {"euler_characteristic", t.euler_characteristic()},
              {"euler_consistent", euler},
              {"cheeger_torsion", j_rat_decimal(integral::cheeger_torsion(t), c.precision)}};
    if (r1 >= 0 && r2 >= 0) {
        try {
            auto pm = integral::pm_split_integral(t, cx, r1, r2);
            r["pm_split"] = {{"plus", pm.plus}, {"minus", pm.minus}, {"additive", pm.additive}};
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Input) throw;
            r["pm_split"] = {{"unavailable", e.code()}};
        }
    }
    return {r, euler};
}

Outcome cmd_integral_cheeger(const RunConfig& c) {
    if (c.table.empty()) fail("MissingData", "--table is required");
    auto t = integral::load_table(read_text(c.table));
    Rat tau = integral::cheeger_torsion(t);
    json orders = json::array();
    for (const auto& d : t.degrees) orders.push_back(j(d.torsion_order()));
    json r = {{"table", c.table},
              {"torsion_orders", orders},
              {"cheeger_torsion", j_rat_decimal(tau, c.precision)}};
    bool ok = true;
    if (!c.expect.empty()) {
        Rat want = parse_rational(c.expect);
        ok = want == tau;
        r["expected"] = j(want);
        r["matches_expected"] = ok;
    }
    if (!c.relative.empty() || !c.covolumes.empty()) {
        if (c.relative.empty() || c.covolumes.empty()) fail("MissingData", "--relative needs --covolumes and vice versa");
        if (c.r1 < 0) fail("MissingData", "--r1 is required for the relative bound");
        auto rel = integral::load_table(read_text(c.relative));
        json cj = parse_json(c.covolumes);
        integral::CovolumeData cov;
        try {
            for (const auto& v : cj.at("plus")) cov.plus.push_back(parse_rational(v.get<std::string>()));
            for (const auto& v : cj.at("minus")) cov.minus.push_back(parse_rational(v.get<std::string>()));
            cov.provenance = cj.value("provenance", "");
        } catch (const json::exception& e) {
            fail("ParseError", c.covolumes + ": " + e.what());
        }
        std::vector<Int> idx;
        for (const auto& s : c.relative_index) idx.push_back(parse_int(s));
        auto rb = integral::relative_torsion_bound(rel, t, cov, c.r1, idx, c.precision);
        r["relative_bound"] = {{"lhs", j(rb.lhs)},   {"rhs", j(rb.rhs)},
                               {"slack", j(rb.slack)}, {"holds", rb.holds},
                               {"lhs_decimal", rb.lhs_decimal}, {"rhs_decimal", rb.rhs_decimal},
                               {"covolume_provenance", cov.provenance}};
        ok = ok && rb.holds;
    }
    return {r, ok};
}

void print_growth_table(std::ostream& os, const growth::GrowthReport& g, int bits) {
    os << g.field_name << "  r1=" << g.r1 << " r2=" << g.r2 << "  mode " << growth::to_string(g.mode)
       << "  bound " << to_string(g.bound) << " (" << decimal_string(g.bound, bits) << ")\n";
    os << std::left << std::setw(4) << "i" << std::setw(10) << "norm" << std::setw(14) << "index" << std::setw(8)
       << "cusps" << std::setw(22) << "sum28" << std::setw(22) << "sum29" << std::setw(16) << "bound*index"
       << "measured\n";
    for (std::size_t i = 0; i < g.levels.size(); ++i) {
        const auto& l = g.levels[i];
        os << std::setw(4) << i + 1 << std::setw(10) << to_string(l.norm) << std::setw(14) << to_string(l.index)
           << std::setw(8) << (l.cusp_count ? std::to_string(*l.cusp_count) : "-") << std::setw(22)
           << decimal_string(l.negligibility.sum28, 32) << std::setw(22) << decimal_string(l.negligibility.sum29, 32)
           << std::setw(16) << to_string(l.bound_times_index) << (l.measured ? decimal_string(*l.measured, 32) : "-")
           << "\n";
    }
    for (const auto& w : g.warnings) os << "warning: " << w << "\n";
}

Outcome cmd_growth_report(const RunConfig& c, std::string& human) {
    NumberField K = need_field(c);
    if (c.ideals.empty()) fail("MissingData", "--ideals is required");
    growth::GrowthInputs in;
    in.field = &K;
    in.ideals = congruence::load_ideal_sequence(K, read_text(c.ideals));
    in.t2 = {need_rational(c.t2, "--t2"), c.t2_source};
    in.vol1 = {need_rational(c.vol, "--vol"), c.vol_source};
    in.mode = growth::parse_mode(c.mode);
    in.bound = c.bound;
    for (const auto& p : c.tables) {
        if (p == "-") in.tables.emplace_back();
        else in.tables.emplace_back(integral::load_table(read_text(p)));
    }
    auto g = growth::growth_lower_bound(in);
    json levels = json::array();
    for (const auto& l : g.levels) {
        json row = {{"level", j_level(K, l.level)},
                    {"index", j(l.index)},
                    {"cusp_count", l.cusp_count ? json(*l.cusp_count) : json(nullptr)},
                    {"parabolic_index", j(l.negligibility.parabolic_index)},
                    {"sum28", j_rat_decimal(l.negligibility.sum28, c.precision)},
                    {"sum29", j_logsum(l.negligibility.sum29, c.precision)},
                    {"bound_times_index", j(l.bound_times_index)}};
        row["measured"] = l.measured ? j_logsum(*l.measured, c.precision) : json(nullptr);
        levels.push_back(std::move(row));
    }
    json r = {{"field", j_field(K)},
              {"level1", j_level(K, in.ideals.level1)},
              {"t2", {{"value", j(g.t2.value)}, {"provenance", g.t2.provenance}}},
              {"vol1", {{"value", j(g.vol1.value)}, {"provenance", g.vol1.provenance}}},
              {"mode", growth::to_string(g.mode)},
              {"bound", j_rat_decimal(g.bound, c.precision)},
              {"rank_condition", g.rank_condition},
              {"levels", levels},
              {"warnings", g.warnings}};
    if (c.weights_max >= 0) {
        kostant::Signature s{K.r1, K.r2};
        growth::GaloisAction act = growth::full_symmetric(K.degree);
        if (!c.galois.empty()) {
            json gj = parse_json(c.galois);
            try {
                act = growth::make_galois_action(K.degree, gj.get<std::vector<std::vector<int>>>());
            } catch (const json::exception& e) {
                fail("ParseError", c.galois + ": " + e.what());
            }
        }
        json ws = json::array();
        for (const auto& a : growth::generate_acyclic_weights(s, c.weights_max, act)) {
            json cons = json::array();
            for (const auto& k : a.constituents)
                cons.push_back({{"weight", j_weight(k.weight)}, {"acyclicity", j_status(k.status)}});
            ws.push_back({{"d_sigma", a.d_sigma}, {"constituents", cons}, {"fully_acyclic", a.fully_acyclic}});
        }
        r["acyclic_weights"] = {{"galois_action_assumed_full", act.assumed_full}, {"weights", ws}};
    }
    std::ostringstream os;
    print_growth_table(os, g, c.precision);
    human = os.str();
    return {r, true};
}

void emit(const RunConfig& c, json report, const std::string& human) {
    report["command"] = c.subcommand;
    report["timestamp"] = timestamp();
    const std::string text = report.dump(2) + "\n";
    if (c.output.empty()) {
        std::cout << text;
        if (!human.empty()) std::cerr << human;
    } else {
        std::ofstream out(c.output, std::ios::binary);
        if (!out) fail("MissingData", "cannot write " + c.output);
        out << text;
        if (!human.empty()) std::cout << human;
    }
}

}  // namespace

int run(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"cusptor: cusp, boundary cohomology and torsion bookkeeping for Hilbert-Bianchi groups"};
    app.require_subcommand(1);
    auto common = [&](CLI::App* s) {
        s->add_option("--bound", c.bound, "enumeration bound on ideal norms")->check(CLI::PositiveNumber);
        s->add_option("--precision", c.precision, "binary precision of decimal renderings")->check(CLI::Range(8, 4096));
        s->add_option("--threads", c.threads, "parallelism width (0 = all, capped by CUSPTOR_THREADS)")
            ->check(CLI::NonNegativeNumber);
        s->add_option("-o,--output", c.output, "write the JSON report here");
    };

    auto* field = app.add_subcommand("field", "number field documents");
    field->require_subcommand(1);
    auto* fv = field->add_subcommand("validate", "load and check a field document");
    fv->add_option("--field", c.field)->required();
    common(fv);

    auto* cusps = app.add_subcommand("cusps", "cusps of Gamma(n)");
    cusps->add_option("--field", c.field)->required();
    cusps->add_option("--level", c.level)->required();
    cusps->add_option("--level1", c.level1, "coarser level: report fiber counts over its cusps");
    common(cusps);

    auto* index = app.add_subcommand("index", "[Gamma(n1) : Gamma(n2)]");
    index->add_option("--field", c.field)->required();
    index->add_option("--level1", c.level1)->required();
    index->add_option("--level2", c.level2)->required();
    common(index);

    auto* neg = app.add_subcommand("negligibility", "cusp negligibility sums along an ideal sequence");
    neg->add_option("--field", c.field)->required();
    neg->add_option("--ideals", c.ideals)->required();
    neg->add_flag("--check", c.check, "fail unless both sums decrease strictly");
    common(neg);

    auto* kos = app.add_subcommand("kostant", "Kostant complex and boundary cohomology");
    kos->require_subcommand(1);
    auto* kv = kos->add_subcommand("verify", "sweep the weight grid against the closed forms");
    kv->add_option("--r1", c.r1)->required();
    kv->add_option("--r2", c.r2)->required();
    kv->add_option("--max-weight", c.max_weight);
    common(kv);
    auto* kb = kos->add_subcommand("boundary", "boundary cohomology of one weight");
    kb->add_option("--weight", c.weight, "{\"m\": [...], \"n\": [...], \"nbar\": [...]}")->required();
    kb->add_option("--r1", c.r1);
    kb->add_option("--r2", c.r2);
    common(kb);

    auto* in = app.add_subcommand("integral", "integral cohomology of cusp cross-sections");
    in->require_subcommand(1);
    auto* ic = in->add_subcommand("cohom", "Smith normal form cohomology of a lattice representation");
    ic->add_option("--rep", c.rep, "external representation document");
    ic->add_option("--field", c.field);
    ic->add_option("--level", c.level);
    ic->add_option("--symd", c.symd, "Sym^d(O_K^2) coefficients; trivial when absent");
    ic->add_option("--cusp", c.cusp, "cusp number for --symd");
    ic->add_option("--r1", c.r1);
    ic->add_option("--r2", c.r2);
    common(ic);
    auto* ich = in->add_subcommand("cheeger", "torsion from a cohomology table");
    ich->add_option("--table", c.table)->required();
    ich->add_option("--expect", c.expect, "fail unless the torsion equals this rational");
    ich->add_option("--relative", c.relative, "table of H^*(X, dX) for the relative bound");
    ich->add_option("--covolumes", c.covolumes, "{\"plus\": [...], \"minus\": [...], \"provenance\": ...}");
    ich->add_option("--relative-index", c.relative_index);
    ich->add_option("--r1", c.r1);
    common(ich);

    auto* gr = app.add_subcommand("growth", "torsion growth reports");
    gr->require_subcommand(1);
    auto* grr = gr->add_subcommand("report", "lower bound and per-level partial quantities");
    grr->add_option("--field", c.field)->required();
    grr->add_option("--ideals", c.ideals)->required();
    grr->add_option("--t2", c.t2)->required();
    grr->add_option("--vol", c.vol)->required();
    grr->add_option("--mode", c.mode)->check(CLI::IsMember({"acyclic", "selfdual"}));
    grr->add_option("--t2-source", c.t2_source, "provenance of t2");
    grr->add_option("--vol-source", c.vol_source, "provenance of vol1");
    grr->add_option("--tables", c.tables, "one cohomology table per level, - for none")->delimiter(',');
    grr->add_option("--weights-max", c.weights_max, "also list acyclic weights with entries up to this");
    grr->add_option("--galois", c.galois, "permutations of the embeddings");
    common(grr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string human;
    try {
        Outcome o;
        if (fv->parsed()) c.subcommand = "field validate", o = cmd_field_validate(c);
        else if (cusps->parsed()) c.subcommand = "cusps", o = cmd_cusps(c);
        else if (index->parsed()) c.subcommand = "index", o = cmd_index(c);
        else if (neg->parsed()) c.subcommand = "negligibility", o = cmd_negligibility(c);
        else if (kv->parsed()) c.subcommand = "kostant verify", o = cmd_kostant_verify(c);
        else if (kb->parsed()) c.subcommand = "kostant boundary", o = cmd_kostant_boundary(c);
        else if (ic->parsed()) c.subcommand = "integral cohom", o = cmd_integral_cohom(c);
        else if (ich->parsed()) c.subcommand = "integral cheeger", o = cmd_integral_cheeger(c);
        else c.subcommand = "growth report", o = cmd_growth_report(c, human);
        o.report["verified"] = o.verified;
        emit(c, std::move(o.report), human);
        return o.verified ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Verification ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cusptor::cli

int main(int argc, char** argv) { return cusptor::cli::run(argc, argv); }
