#include "cusptor/numberfield.hpp"

#include "cusptor/linalg.hpp"
#include "documents.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace cusptor::numberfield {

using json = nlohmann::json;

bool IdealHNF::operator<(const IdealHNF& o) const {
    if (matrix.rows != o.matrix.rows) return matrix.rows < o.matrix.rows;
    return std::lexicographical_compare(matrix.a.begin(), matrix.a.end(), o.matrix.a.begin(), o.matrix.a.end());
}

namespace {

using Poly = std::vector<Rat>;

void strip(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_rem(Poly a, const Poly& b) {
    strip(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();
        strip(a);
    }
    return a;
}

int sign_at_inf(const Poly& p, bool negative) {
    int s = sgn(p.back());
    if (negative && (p.size() - 1) % 2 == 1) s = -s;
    return s;
}

int sign_changes(const std::vector<Poly>& seq, bool negative) {
    int changes = 0, last = 0;
    for (const auto& p : seq) {
        int s = sign_at_inf(p, negative);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

/* Product in Q[x]/(f) for monic f, power-basis coordinates. */
Poly mul_mod(const Poly& a, const Poly& b, const std::vector<Int>& f) {
    const std::size_t d = f.size() - 1;
    Poly prod(2 * d, Rat(0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) prod[i + j] += a[i] * b[j];
    for (std::size_t k = 2 * d; k-- > d;) {
        if (prod[k] == 0) continue;
        Rat c = prod[k];
        prod[k] = 0;
        for (std::size_t i = 0; i < d; ++i) prod[k - d + i] -= c * f[i];
    }
    prod.resize(d);
    return prod;
}

Elem parse_elem(const json& j, int d, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        fail("ParseError", what + " must be a list of " + std::to_string(d) + " integers");
    Elem e;
    for (const auto& v : j) e.push_back(json_int(v));
    return e;
}

std::int64_t checked64(const Int& v, const char* what) {
    if (!v.fits_slong_p()) fail("TooLarge", std::string(what) + " exceeds 64-bit range");
    return v.get_si();
}

__int128 floor_div(__int128 a, __int128 b) {
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

int sturm_real_roots(const std::vector<Int>& coeffs) {
    Poly p;
    for (const auto& c : coeffs) p.emplace_back(c);
    strip(p);
    if (p.size() <= 1) return 0;
    Poly dp;
    for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * static_cast<long>(i));
    std::vector<Poly> seq{p, dp};
    while (seq.back().size() > 1) {
        Poly r = poly_rem(seq[seq.size() - 2], seq.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        seq.push_back(r);
    }
    return sign_changes(seq, true) - sign_changes(seq, false);
}

Elem NumberField::from_int(const Int& v) const {
    Elem e = one_elem;
    for (auto& x : e) x *= v;
    return e;
}

Elem NumberField::add(const Elem& x, const Elem& y) const {
    Elem z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
    return z;
}

Elem NumberField::sub(const Elem& x, const Elem& y) const {
    Elem z = x;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
    return z;
}

Elem NumberField::mul(const Elem& x, const Elem& y) const {
    Elem z(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < degree; ++j) {
            if (y[j] == 0) continue;
            Int c = x[i] * y[j];
            const Elem& m = mult[i][j];
            for (int k = 0; k < degree; ++k)
                if (m[k] != 0) z[k] += c * m[k];
        }
    }
    return z;
}

Elem NumberField::pow(const Elem& x, unsigned long e) const {
    Elem r = one_elem, b = x;
    while (e) {
        if (e & 1) r = mul(r, b);
        e >>= 1;
        if (e) b = mul(b, b);
    }
    return r;
}

IntMatrix NumberField::mul_matrix(const Elem& x) const {
    const auto d = static_cast<std::size_t>(degree);
    IntMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) m(k, j) += x[i] * mult[i][j][k];
    }
    return m;
}

Int NumberField::norm(const Elem& x) const { return linalg::determinant(mul_matrix(x)); }

Int NumberField::trace(const Elem& x) const {
    IntMatrix m = mul_matrix(x);
    Int t = 0;
    for (int i = 0; i < degree; ++i) t += m(i, i);
    return t;
}

Elem NumberField::unit_inverse(const Elem& x) const {
    auto inv = linalg::unimodular_inverse(mul_matrix(x));
    if (!inv) fail("NonUnitGenerator", "element is not a unit");
    Elem y(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i)
        for (int j = 0; j < degree; ++j) y[i] += (*inv)(i, j) * one_elem[j];
    return y;
}

std::vector<Rat> NumberField::to_power_basis(const Elem& x) const {
    std::vector<Rat> v(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i)
        for (int j = 0; j < degree; ++j) v[i] += integral_basis(i, j) * x[j];
    return v;
}

NumberField load_field(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail("ParseError", std::string("field document: ") + e.what());
    }
    if (!doc.is_object()) fail("ParseError", "field document must be an object");
    NumberField K;
    K.name = doc.value("name", std::string());
    K.provenance = doc.value("provenance", std::string());
    if (!doc.contains("poly")) fail("ParseError", "field document lacks 'poly'");
    for (const auto& c : doc.at("poly")) K.poly.push_back(json_int(c));
    if (K.poly.size() < 2 || K.poly.back() != 1) fail("ParseError", "polynomial must be monic of degree >= 1");
    K.degree = static_cast<int>(K.poly.size()) - 1;
    const int d = K.degree;
    const auto du = static_cast<std::size_t>(d);

    auto sig = doc.at("signature");
    if (!sig.is_array() || sig.size() != 2) fail("ParseError", "signature must be [r1, r2]");
    K.r1 = sig[0].get<int>();
    K.r2 = sig[1].get<int>();
    if (K.r1 < 0 || K.r2 < 0 || K.r1 + 2 * K.r2 != d)
        fail("SignatureMismatch", "r1 + 2 r2 must equal the degree");
    int real_roots = sturm_real_roots(K.poly);
    if (real_roots != K.r1)
        fail("SignatureMismatch", "declared r1 = " + std::to_string(K.r1) + " but the polynomial has " +
                                      std::to_string(real_roots) + " real roots");

    if (doc.contains("integral_basis")) {
        K.integral_basis = json_rat_matrix(doc.at("integral_basis"));
        if (K.integral_basis.rows != du || K.integral_basis.cols != du)
            fail("MalformedBasis", "integral basis must be a square matrix of size d_K");
    } else {
        K.integral_basis = RatMatrix::identity(du);
    }
    auto binv = linalg::inverse(K.integral_basis);
    if (!binv) fail("MalformedBasis", "integral basis is singular");

    auto to_basis = [&](const Poly& v) {
        Elem e(du);
        for (std::size_t i = 0; i < du; ++i) {
            Rat s = 0;
            for (std::size_t j = 0; j < du; ++j) s += (*binv)(i, j) * v[j];
            if (s.get_den() != 1) fail("MalformedBasis", "integral basis is not closed under multiplication");
            e[i] = s.get_num();
        }
        return e;
    };
    std::vector<Poly> cols(du, Poly(du));
    for (std::size_t j = 0; j < du; ++j)
        for (std::size_t i = 0; i < du; ++i) cols[j][i] = K.integral_basis(i, j);
    K.mult.assign(du, std::vector<Elem>(du));
    for (std::size_t i = 0; i < du; ++i)
        for (std::size_t j = 0; j < du; ++j) K.mult[i][j] = to_basis(mul_mod(cols[i], cols[j], K.poly));
    Poly one(du, Rat(0));
    one[0] = 1;
    K.one_elem = to_basis(one);

    IntMatrix gram(du, du);
    for (std::size_t i = 0; i < du; ++i)
        for (std::size_t j = 0; j < du; ++j) gram(i, j) = K.trace(K.mult[i][j]);
    Int disc = linalg::determinant(gram);
    if (doc.contains("disc") && !doc.at("disc").is_null()) {
        K.disc = json_int(doc.at("disc"));
        if (*K.disc != disc)
            fail("MalformedBasis", "discriminant of the basis is " + disc.get_str() + ", declared " + K.disc->get_str());
    } else {
        K.disc = disc;
    }

    if (doc.contains("units"))
        for (const auto& u : doc.at("units")) K.units.push_back(parse_elem(u, d, "unit"));
    if (static_cast<int>(K.units.size()) != K.unit_rank())
        fail("UnitRankMismatch", "expected " + std::to_string(K.unit_rank()) + " unit generators, got " +
                                     std::to_string(K.units.size()));
    for (const auto& u : K.units) {
        Int n = K.norm(u);
        if (n != 1 && n != -1) fail("NonUnitGenerator", "unit generator has norm " + n.get_str());
    }

    K.torsion_order = doc.value("torsion_order", 2);
    if (K.torsion_order < 2 || K.torsion_order % 2 != 0)
        fail("TorsionMismatch", "torsion order must be even and at least 2");
    auto has_order = [&](const Elem& z) {
        for (int e = 1; e < K.torsion_order; ++e)
            if (K.torsion_order % e == 0 && K.pow(z, static_cast<unsigned long>(e)) == K.one_elem) return false;
        return K.pow(z, static_cast<unsigned long>(K.torsion_order)) == K.one_elem;
    };
    if (doc.contains("torsion_generator")) {
        K.torsion_generator = parse_elem(doc.at("torsion_generator"), d, "torsion generator");
        if (!has_order(K.torsion_generator))
            fail("TorsionMismatch", "torsion generator does not have the declared order");
    } else if (K.torsion_order == 2) {
        K.torsion_generator = K.from_int(-1);
    } else {
        /* small box search; roots of unity have small coordinates in practice */
        bool found = false;
        for (int B = 1; B <= 2 && !found; ++B) {
            std::vector<int> c(du, -B);
            for (;;) {
                Elem z(du);
                for (std::size_t i = 0; i < du; ++i) z[i] = c[i];
                if (K.norm(z) == 1 && has_order(z)) {
                    K.torsion_generator = z;
                    found = true;
                    break;
                }
                std::size_t i = 0;
                while (i < du && c[i] == B) c[i++] = -B;
                if (i == du) break;
                ++c[i];
            }
        }
        if (!found) fail("TorsionMismatch", "no root of unity of the declared order found; supply torsion_generator");
    }

    if (doc.contains("class_ideals"))
        for (const auto& m : doc.at("class_ideals")) K.class_ideals.push_back(make_ideal(K, json_int_matrix(m)));
    return K;
}

NumberField load_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("MissingData", "cannot open field file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_field(ss.str());
}

bool is_ideal(const NumberField& K, const IntMatrix& h) {
    const auto d = static_cast<std::size_t>(K.degree);
    if (h.rows != d || h.cols != d) return false;
    for (std::size_t i = 0; i < d; ++i) {
        if (h(i, i) <= 0) return false;
        for (std::size_t j = 0; j < i; ++j)
            if (h(i, j) != 0) return false;
    }
    for (std::size_t b = 0; b < d; ++b) {
        Elem be(d);
        be[b] = 1;
        for (std::size_t c = 0; c < d; ++c) {
            Elem col(d);
            for (std::size_t i = 0; i < d; ++i) col[i] = h(i, c);
            if (!linalg::solve_upper_integral(h, K.mul(be, col))) return false;
        }
    }
    return true;
}

IdealHNF make_ideal(const NumberField& K, const IntMatrix& gens) {
    if (gens.rows != static_cast<std::size_t>(K.degree)) fail("NotAnIdeal", "generator matrix has wrong row count");
    IdealHNF I;
    try {
        I.matrix = linalg::hnf_columns(gens);
    } catch (const Error&) {
        fail("NotAnIdeal", "generators do not span a full-rank lattice");
    }
    if (!is_ideal(K, I.matrix)) fail("NotAnIdeal", "lattice is not closed under multiplication by O_K");
    return I;
}

IdealHNF ideal_from_generators(const NumberField& K, const std::vector<Elem>& gens) {
    const auto d = static_cast<std::size_t>(K.degree);
    IntMatrix m(d, d * gens.size());
    for (std::size_t g = 0; g < gens.size(); ++g) {
        IntMatrix mg = K.mul_matrix(gens[g]);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, g * d + j) = mg(i, j);
    }
    return make_ideal(K, m);
}

IdealHNF principal_ideal(const NumberField& K, const Elem& a) { return ideal_from_generators(K, {a}); }

IdealHNF unit_ideal(const NumberField& K) {
    return IdealHNF{IntMatrix::identity(static_cast<std::size_t>(K.degree))};
}

IdealHNF ideal_sum(const NumberField& K, const IdealHNF& a, const IdealHNF& b) {
    const auto d = static_cast<std::size_t>(K.degree);
    IntMatrix m(d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            m(i, j) = a.matrix(i, j);
            m(i, d + j) = b.matrix(i, j);
        }
    return IdealHNF{linalg::hnf_columns(m)};
}

IdealHNF ideal_product(const NumberField& K, const IdealHNF& a, const IdealHNF& b) {
    const auto d = static_cast<std::size_t>(K.degree);
    IntMatrix m(d, d * d);
    for (std::size_t p = 0; p < d; ++p) {
        Elem x(d);
        for (std::size_t i = 0; i < d; ++i) x[i] = a.matrix(i, p);
        for (std::size_t q = 0; q < d; ++q) {
            Elem y(d);
            for (std::size_t i = 0; i < d; ++i) y[i] = b.matrix(i, q);
            Elem z = K.mul(x, y);
            for (std::size_t i = 0; i < d; ++i) m(i, p * d + q) = z[i];
        }
    }
    return IdealHNF{linalg::hnf_columns(m)};
}

IdealHNF ideal_power(const NumberField& K, const IdealHNF& a, unsigned e) {
    IdealHNF r = unit_ideal(K);
    for (unsigned i = 0; i < e; ++i) r = ideal_product(K, r, a);
    return r;
}

Int ideal_norm(const NumberField& K, const IdealHNF& a) {
    if (!is_ideal(K, a.matrix)) fail("NotAnIdeal", "lattice is not an ideal of O_K");
    Int n = 1;
    for (std::size_t i = 0; i < a.matrix.rows; ++i) n *= a.matrix(i, i);
    return abs(n);
}

bool ideal_contains(const IdealHNF& a, const Elem& x) { return linalg::solve_upper_integral(a.matrix, x).has_value(); }

bool ideal_contains(const IdealHNF& a, const IdealHNF& b) {
    for (std::size_t j = 0; j < b.matrix.cols; ++j) {
        Elem col(b.matrix.rows);
        for (std::size_t i = 0; i < b.matrix.rows; ++i) col[i] = b.matrix(i, j);
        if (!ideal_contains(a, col)) return false;
    }
    return true;
}

Elem reduce_mod(const IdealHNF& a, const Elem& x) {
    Elem v = x;
    const IntMatrix& h = a.matrix;
    for (std::size_t i = h.rows; i-- > 0;) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v[i].get_mpz_t(), h(i, i).get_mpz_t());
        if (q == 0) continue;
        for (std::size_t k = 0; k <= i; ++k) v[k] -= q * h(k, i);
    }
    return v;
}

std::vector<IdealHNF> enumerate_ideals(const NumberField& K, long bound) {
    const auto d = static_cast<std::size_t>(K.degree);
    std::vector<IdealHNF> out;
    std::vector<long> diag(d, 1);
    /* recursive sweep over diagonals, then over the reduced upper entries */
    auto sweep_upper = [&](auto&& self, IntMatrix& h, std::size_t pos,
                           const std::vector<std::pair<std::size_t, std::size_t>>& slots) -> void {
        if (pos == slots.size()) {
            if (is_ideal(K, h)) out.push_back(IdealHNF{h});
            return;
        }
        auto [i, j] = slots[pos];
        for (long v = 0; v < diag[i]; ++v) {
            h(i, j) = v;
            self(self, h, pos + 1, slots);
        }
        h(i, j) = 0;
    };
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < j; ++i) slots.emplace_back(i, j);
    auto sweep_diag = [&](auto&& self, std::size_t i, long prod) -> void {
        if (i == d) {
            IntMatrix h(d, d);
            for (std::size_t k = 0; k < d; ++k) h(k, k) = diag[k];
            sweep_upper(sweep_upper, h, 0, slots);
            return;
        }
        for (long v = 1; prod * v <= bound; ++v) {
            diag[i] = v;
            self(self, i + 1, prod * v);
        }
    };
    sweep_diag(sweep_diag, 0, 1);
    std::sort(out.begin(), out.end(), [&](const IdealHNF& a, const IdealHNF& b) {
        Int na = ideal_norm(K, a), nb = ideal_norm(K, b);
        if (na != nb) return na < nb;
        return a < b;
    });
    return out;
}

IdealSpec ideal_spec_from_json(const NumberField& K, const json& j) {
    IdealSpec spec;
    const int d = K.degree;
    if (j.is_array()) {
        spec.ideal = make_ideal(K, json_int_matrix(j));
        return spec;
    }
    if (!j.is_object()) fail("ParseError", "ideal must be a matrix or an object");
    if (j.contains("hnf")) {
        IntMatrix h = json_int_matrix(j.at("hnf"));
        spec.ideal = make_ideal(K, h);
        if (spec.ideal.matrix != h) fail("NotAnIdeal", "matrix given under 'hnf' is not in Hermite normal form");
    } else if (j.contains("generators")) {
        std::vector<Elem> gens;
        for (const auto& g : j.at("generators")) gens.push_back(parse_elem(g, d, "ideal generator"));
        if (gens.empty()) fail("NotAnIdeal", "empty generator list");
        spec.ideal = ideal_from_generators(K, gens);
    } else if (j.contains("generator")) {
        Elem g = parse_elem(j.at("generator"), d, "ideal generator");
        long e = j.value("exponent", 1L);
        if (e < 0) fail("ParseError", "negative exponent");
        spec.ideal = principal_ideal(K, K.pow(g, static_cast<unsigned long>(e)));
    } else {
        fail("ParseError", "ideal object needs one of hnf, generators, generator");
    }
    if (j.contains("factorization")) {
        spec.has_factorization = true;
        Int prod = 1;
        for (const auto& f : j.at("factorization")) {
            PrimePower pp{json_int(f.at("norm")), f.value("exponent", 1u)};
            if (pp.norm < 2) fail("ParseError", "prime norm must be at least 2");
            prod *= ipow(pp.norm, pp.exponent);
            spec.factorization.push_back(pp);
        }
        if (prod != ideal_norm(K, spec.ideal))
            fail("FactorizationMismatch", "factorization norms multiply to " + prod.get_str() + ", ideal norm is " +
                                              ideal_norm(K, spec.ideal).get_str());
    }
    return spec;
}

IdealSpec load_ideal(const NumberField& K, const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail("ParseError", std::string("ideal document: ") + e.what());
    }
    return ideal_spec_from_json(K, j);
}

ResidueRing::ResidueRing(const NumberField& K, const IdealHNF& level, long bound) : level_(level), d_(K.degree) {
    const auto d = static_cast<std::size_t>(d_);
    Int n = ideal_norm(K, level);
    if (n > bound) fail("TooLarge", "residue ring of norm " + n.get_str() + " exceeds enumeration bound " +
                                        std::to_string(bound));
    size_ = n.get_si();
    h_.resize(d * d);
    for (std::size_t i = 0; i < d * d; ++i) h_[i] = checked64(level.matrix.a[i], "HNF entry");
    radix_.resize(d);
    std::int64_t r = 1;
    for (std::size_t i = 0; i < d; ++i) {
        radix_[i] = r;
        r *= h_[i * d + i];
    }
    mult_.resize(d * d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) {
                const Int& c = K.mult[i][j][k];
                if (abs(c) > (1L << 30)) fail("TooLarge", "structure constants too large for residue arithmetic");
                mult_[(i * d + j) * d + k] = c.get_si();
            }
    one_ = encode(K.one());
    if (size_ <= 1024) {
        const auto N = static_cast<std::size_t>(size_);
        add_table_.resize(N * N);
        mul_table_.resize(N * N);
        for (std::size_t x = 0; x < N; ++x)
            for (std::size_t y = 0; y < N; ++y) {
                add_table_[x * N + y] = add_raw(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y));
                mul_table_[x * N + y] = mul_raw(static_cast<std::int64_t>(x), static_cast<std::int64_t>(y));
            }
    }
}

std::vector<std::int64_t> ResidueRing::digits(std::int64_t idx) const {
    const auto d = static_cast<std::size_t>(d_);
    std::vector<std::int64_t> v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = (idx / radix_[i]) % h_[i * d + i];
    return v;
}

std::int64_t ResidueRing::from_digits(std::vector<__int128>& v) const {
    const auto d = static_cast<std::size_t>(d_);
    for (std::size_t i = d; i-- > 0;) {
        __int128 q = floor_div(v[i], h_[i * d + i]);
        if (q == 0) continue;
        for (std::size_t k = 0; k <= i; ++k) v[k] -= q * h_[k * d + i];
    }
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < d; ++i) idx += static_cast<std::int64_t>(v[i]) * radix_[i];
    return idx;
}

std::int64_t ResidueRing::encode(const Elem& x) const {
    Elem r = reduce_mod(level_, x);
    std::vector<__int128> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = r[i].get_si();
    return from_digits(v);
}

Elem ResidueRing::decode(std::int64_t idx) const {
    auto v = digits(idx);
    Elem e(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) e[i] = static_cast<long>(v[i]);
    return e;
}

std::int64_t ResidueRing::add_raw(std::int64_t x, std::int64_t y) const {
    auto a = digits(x), b = digits(y);
    std::vector<__int128> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = static_cast<__int128>(a[i]) + b[i];
    return from_digits(v);
}

std::int64_t ResidueRing::mul_raw(std::int64_t x, std::int64_t y) const {
    const auto d = static_cast<std::size_t>(d_);
    auto a = digits(x), b = digits(y);
    std::vector<__int128> v(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (b[j] == 0) continue;
            __int128 c = static_cast<__int128>(a[i]) * b[j];
            const std::int64_t* m = &mult_[(i * d + j) * d];
            for (std::size_t k = 0; k < d; ++k) v[k] += c * m[k];
        }
    }
    return from_digits(v);
}

std::int64_t ResidueRing::add(std::int64_t x, std::int64_t y) const {
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(x * size_ + y)];
    return add_raw(x, y);
}

std::int64_t ResidueRing::mul(std::int64_t x, std::int64_t y) const {
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(x * size_ + y)];
    return mul_raw(x, y);
}

std::int64_t ResidueRing::neg(std::int64_t x) const {
    auto a = digits(x);
    std::vector<__int128> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = -static_cast<__int128>(a[i]);
    return from_digits(v);
}

std::vector<std::int64_t> unit_image(const NumberField& K, const ResidueRing& R) {
    std::vector<std::int64_t> gens{R.encode(K.torsion_generator)};
    for (const auto& u : K.units) gens.push_back(R.encode(u));
    std::vector<char> seen(static_cast<std::size_t>(R.size()), 0);
    std::vector<std::int64_t> group{R.one()};
    seen[static_cast<std::size_t>(R.one())] = 1;
    for (std::size_t i = 0; i < group.size(); ++i)
        for (auto g : gens) {
            std::int64_t y = R.mul(group[i], g);
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                group.push_back(y);
            }
        }
    std::sort(group.begin(), group.end());
    return group;
}

Int unit_index_mod(const NumberField& K, const IdealHNF& n1, const IdealHNF& n2, long bound) {
    if (!ideal_contains(n1, n2)) fail("NotNested", "second level is not contained in the first");
    if (n1 == n2) return 1;
    ResidueRing R1(K, n1, bound), R2(K, n2, bound);
    auto g1 = unit_image(K, R1).size(), g2 = unit_image(K, R2).size();
    if (g2 % g1 != 0) fail("NonDivisible", "unit image orders are not divisible", ErrorKind::Verification);
    return Int(static_cast<unsigned long>(g2 / g1));
}

}  // namespace cusptor::numberfield
