#include "cusptor/integral.hpp"

#include "cusptor/linalg.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace cusptor::integral {

using numberfield::Elem;
using nlohmann::json;

namespace {

IntMatrix identity(std::size_t n) { return IntMatrix::identity(n); }

IntMatrix scaled_neg(IntMatrix m) {
    for (auto& x : m.a) x = -x;
    return m;
}

bool same_shape(const IntMatrix& m, std::size_t n) { return m.rows == n && m.cols == n; }

void add_block(IntMatrix& dst, std::size_t r0, std::size_t c0, const IntMatrix& src, long sign) {
    for (std::size_t i = 0; i < src.rows; ++i)
        for (std::size_t j = 0; j < src.cols; ++j)
            if (src(i, j) != 0) dst(r0 + i, c0 + j) += sign * src(i, j);
}

/* (I + T + ... + T^{k-1}, T^k) by halving */
std::pair<IntMatrix, IntMatrix> geometric_pos(const IntMatrix& T, long k) {
    const std::size_t n = T.rows;
    if (k == 0) return {IntMatrix(n, n), identity(n)};
    auto [g, p] = geometric_pos(T, k / 2);
    IntMatrix g2 = g + p * g, p2 = p * p;
    if (k % 2) return {g2 + p2, p2 * T};
    return {g2, p2};
}

/* (T^k - 1)/(T - 1) as a matrix, for any integer k */
IntMatrix geometric(const IntMatrix& T, const IntMatrix& Tinv, long k) {
    if (k >= 0) return geometric_pos(T, k).first;
    auto [g, p] = geometric_pos(T, -k);
    (void)p;
    return scaled_neg(linalg::matrix_power(Tinv, -k) * g);
}

int sign_before(std::uint32_t S, int a) { return (std::popcount(S & ((1u << a) - 1u)) & 1) ? -1 : 1; }

std::vector<std::uint32_t> subsets_of_size(int n, int p) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == p) out.push_back(m);
    return out;
}

/* Minors of a matrix with commuting matrix entries, by Laplace expansion on the first row. */
class CommutingMinors {
public:
    CommutingMinors(const std::vector<std::vector<IntMatrix>>& jac, std::size_t n) : jac_(jac), n_(n) {}

    const IntMatrix& get(std::uint32_t rows, std::uint32_t cols) {
        const std::uint64_t key = (static_cast<std::uint64_t>(rows) << 32) | cols;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        IntMatrix out(n_, n_);
        if (rows == 0) {
            out = identity(n_);
        } else {
            const int r0 = std::countr_zero(rows);
            int k = 0;
            for (std::uint32_t x = cols; x; x &= x - 1, ++k) {
                const int c = std::countr_zero(x);
                const IntMatrix& e = jac_[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c)];
                if (is_zero(e)) continue;
                IntMatrix term = e * get(rows & (rows - 1), cols & ~(1u << c));
                add_block(out, 0, 0, term, (k & 1) ? -1 : 1);
            }
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    const std::vector<std::vector<IntMatrix>>& jac_;
    std::size_t n_;
    std::unordered_map<std::uint64_t, IntMatrix> memo_;
};

/* rank over Q of the submatrix on the given rows and columns */
std::size_t sub_rank(const IntMatrix& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (rows.empty() || cols.empty()) return 0;
    RatMatrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = m(rows[i], cols[j]);
    return linalg::rank(s);
}

json int_matrix_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols; ++j) r.push_back(to_string(m(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

/* x with A x = b over Z, by unimodular column reduction of A */
std::optional<std::vector<Int>> solve_integral(const IntMatrix& A, const std::vector<Int>& b) {
    IntMatrix E = A;
    IntMatrix V = identity(A.cols);
    auto colop = [&](std::size_t dst, std::size_t src, const Int& q) {
        for (std::size_t i = 0; i < E.rows; ++i) E(i, dst) -= q * E(i, src);
        for (std::size_t i = 0; i < V.rows; ++i) V(i, dst) -= q * V(i, src);
    };
    auto swapcol = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < E.rows; ++i) std::swap(E(i, x), E(i, y));
        for (std::size_t i = 0; i < V.rows; ++i) std::swap(V(i, x), V(i, y));
    };
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
    std::size_t col = 0;
    for (std::size_t r = 0; r < E.rows && col < E.cols; ++r) {
        for (;;) {
            std::size_t best = E.cols;
            for (std::size_t j = col; j < E.cols; ++j)
                if (E(r, j) != 0 && (best == E.cols || abs(E(r, j)) < abs(E(r, best)))) best = j;
            if (best == E.cols) break;
            swapcol(col, best);
            bool done = true;
            for (std::size_t j = col + 1; j < E.cols; ++j) {
                if (E(r, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), E(r, j).get_mpz_t(), E(r, col).get_mpz_t());
                colop(j, col, q);
                done = done && E(r, j) == 0;
            }
            if (done) {
                pivots.emplace_back(r, col++);
                break;
            }
        }
    }
    /* forward substitution in the column echelon form */
    std::vector<Int> z(A.cols), res = b;
    std::size_t pi = 0;
    for (std::size_t r = 0; r < E.rows; ++r) {
        if (pi < pivots.size() && pivots[pi].first == r) {
            const std::size_t c = pivots[pi].second;
            if (res[r] % E(r, c) != 0) return std::nullopt;
            z[c] = res[r] / E(r, c);
            for (std::size_t i = r; i < E.rows; ++i) res[i] -= E(i, c) * z[c];
            ++pi;
        } else if (res[r] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Int> x(A.cols);
    for (std::size_t i = 0; i < A.cols; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) x[i] += V(i, j) * z[j];
    return x;
}

using Mat2 = std::array<Elem, 4>;  // a b / c d

Mat2 mul2(const NumberField& K, const Mat2& x, const Mat2& y) {
    return {K.add(K.mul(x[0], y[0]), K.mul(x[1], y[2])), K.add(K.mul(x[0], y[1]), K.mul(x[1], y[3])),
            K.add(K.mul(x[2], y[0]), K.mul(x[3], y[2])), K.add(K.mul(x[2], y[1]), K.mul(x[3], y[3]))};
}

/* Z-matrix of h on Sym^d(O_K^2), basis e1^{d-j} e2^j (x) b_k */
IntMatrix sym_power(const NumberField& K, int d, const Mat2& h) {
    const auto n = static_cast<std::size_t>(K.degree);
    const auto D = static_cast<std::size_t>(d + 1);
    IntMatrix out(D * n, D * n);
    for (std::size_t j = 0; j < D; ++j) {
        /* (a e1 + c e2)^{d-j} (b e1 + d e2)^j, coefficients indexed by e2-degree */
        std::vector<Elem> poly{K.one()};
        auto times = [&](const Elem& u, const Elem& v) {
            std::vector<Elem> next(poly.size() + 1, K.zero());
            for (std::size_t i = 0; i < poly.size(); ++i) {
                next[i] = K.add(next[i], K.mul(poly[i], u));
                next[i + 1] = K.add(next[i + 1], K.mul(poly[i], v));
            }
            poly = std::move(next);
        };
        for (std::size_t s = 0; s < D - 1 - j; ++s) times(h[0], h[2]);
        for (std::size_t s = 0; s < j; ++s) times(h[1], h[3]);
        for (std::size_t i = 0; i < D; ++i) add_block(out, i * n, j * n, K.mul_matrix(poly[i]), 1);
    }
    return out;
}

std::vector<Elem> translation_basis(const congruence::Level& level) {
    const IntMatrix& H = level.ideal.matrix;
    std::vector<Elem> tr(H.cols, Elem(H.rows));
    for (std::size_t i = 0; i < H.cols; ++i)
        for (std::size_t k = 0; k < H.rows; ++k) tr[i][k] = H(k, i);
    return tr;
}

/* diag(e, 1/e) t_x diag(1/e, e) = t_{e^2 x}, in the Z-basis of the level */
IntMatrix unit_conjugation(const NumberField& K, const congruence::Level& level, const std::vector<Elem>& tr, const Elem& e) {
    const Elem e2 = K.mul(e, e);
    const std::size_t n = tr.size();
    IntMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto coords = linalg::solve_upper_integral(level.ideal.matrix, K.mul(e2, tr[i]));
        if (!coords) fail("FormulaMismatch", "unit does not preserve the level", ErrorKind::Verification);
        for (std::size_t j = 0; j < n; ++j) c(i, j) = (*coords)[j];
    }
    return c;
}

}  // namespace

void validate(const LatticeRep& rep) {
    const auto n = static_cast<std::size_t>(rep.rank);
    if (rep.rank < 1) fail("ParseError", "rank must be positive");
    if (rep.fiber_gens.empty() || rep.fiber_gens.size() > 16) fail("ParseError", "need 1..16 fiber generators");
    if (rep.conj.size() != rep.base_gens.size()) fail("ParseError", "one conjugation matrix per base generator");
    const std::size_t dk = rep.fiber_gens.size();
    for (const auto* family : {&rep.fiber_gens, &rep.base_gens})
        for (const auto& g : *family) {
            if (!same_shape(g, n)) fail("ParseError", "generator shape does not match the rank");
            Int det = linalg::determinant(g);
            if (det != 1 && det != -1) fail("NonUnimodular", "generator determinant " + to_string(det));
        }
    for (const auto& c : rep.conj) {
        if (!same_shape(c, dk)) fail("ParseError", "conjugation matrix must be d_K x d_K");
        Int det = linalg::determinant(c);
        if (det != 1 && det != -1) fail("NonUnimodular", "conjugation matrix determinant " + to_string(det));
    }
    for (const auto* family : {&rep.fiber_gens, &rep.base_gens})
        for (std::size_t i = 0; i < family->size(); ++i)
            for (std::size_t j = i + 1; j < family->size(); ++j)
                if ((*family)[i] * (*family)[j] != (*family)[j] * (*family)[i])
                    fail("NonCommuting", "generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
    for (std::size_t a = 0; a < rep.base_gens.size(); ++a) {
        const IntMatrix& U = rep.base_gens[a];
        for (std::size_t i = 0; i < dk; ++i) {
            IntMatrix rhs = identity(n);
            for (std::size_t j = 0; j < dk; ++j)
                rhs = rhs * linalg::matrix_power(rep.fiber_gens[j], rep.conj[a](i, j).get_si());
            if (U * rep.fiber_gens[i] != rhs * U)
                fail("ConjugationMismatch", "U_" + std::to_string(a) + " T_" + std::to_string(i) + " U^-1 differs from the conjugation data");
        }
    }
}

LatticeRep build_rep_external(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail("ParseError", std::string("rep document: ") + e.what());
    }
    if (!j.is_object() || !j.contains("rank") || !j.contains("fiber_gens"))
        fail("ParseError", "rep document needs rank and fiber_gens");
    LatticeRep rep;
    rep.rank = static_cast<int>(json_int(j["rank"]).get_si());
    for (const auto& m : j["fiber_gens"]) rep.fiber_gens.push_back(json_int_matrix(m));
    if (j.contains("base_gens"))
        for (const auto& m : j["base_gens"]) rep.base_gens.push_back(json_int_matrix(m));
    if (j.contains("conj"))
        for (const auto& m : j["conj"]) rep.conj.push_back(json_int_matrix(m));
    validate(rep);
    return rep;
}

LatticeRep build_rep_external_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("MissingData", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return build_rep_external(ss.str());
}

std::string rep_to_json(const LatticeRep& rep) {
    json j;
    j["rank"] = rep.rank;
    j["fiber_gens"] = json::array();
    j["base_gens"] = json::array();
    j["conj"] = json::array();
    for (const auto& m : rep.fiber_gens) j["fiber_gens"].push_back(int_matrix_json(m));
    for (const auto& m : rep.base_gens) j["base_gens"].push_back(int_matrix_json(m));
    for (const auto& m : rep.conj) j["conj"].push_back(int_matrix_json(m));
    return j.dump();
}

std::vector<Elem> congruence_units(const NumberField& K, const IdealHNF& n, long bound) {
    const int r = K.unit_rank();
    if (r == 0) return {};
    numberfield::ResidueRing R(K, n, bound);
    std::vector<Elem> gens{K.torsion_generator};
    for (const auto& u : K.units) gens.push_back(u);
    const std::size_t G = gens.size();
    std::vector<std::int64_t> g(G);
    for (std::size_t k = 0; k < G; ++k) g[k] = R.encode(gens[k]);
    /* spanning tree of the image; every non-tree edge yields a relation (Schreier) */
    std::map<std::int64_t, std::vector<long>> word;
    std::vector<std::int64_t> queue{R.one()};
    word[R.one()] = std::vector<long>(G, 0);
    std::vector<std::vector<long>> relations;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::int64_t x = queue[head];
        for (std::size_t k = 0; k < G; ++k) {
            std::int64_t y = R.mul(x, g[k]);
            std::vector<long> w = word[x];
            ++w[k];
            auto it = word.find(y);
            if (it == word.end()) {
                word[y] = w;
                queue.push_back(y);
            } else {
                for (std::size_t i = 0; i < G; ++i) w[i] -= it->second[i];
                relations.push_back(std::move(w));
            }
        }
    }
    IntMatrix proj(static_cast<std::size_t>(r), relations.size());
    for (std::size_t c = 0; c < relations.size(); ++c)
        for (int i = 0; i < r; ++i) proj(static_cast<std::size_t>(i), c) = relations[c][static_cast<std::size_t>(i + 1)];
    IntMatrix basis = linalg::hnf_columns(proj);
    std::vector<Elem> out;
    for (std::size_t c = 0; c < basis.cols; ++c) {
        Elem e = K.one();
        for (int i = 0; i < r; ++i) {
            long v = basis(static_cast<std::size_t>(i), c).get_si();
            Elem u = v >= 0 ? K.units[static_cast<std::size_t>(i)] : K.unit_inverse(K.units[static_cast<std::size_t>(i)]);
            e = K.mul(e, K.pow(u, static_cast<unsigned long>(v >= 0 ? v : -v)));
        }
        /* fix the root of unity so that the product is 1 mod n */
        Elem z = K.one();
        bool found = false;
        for (int s = 0; s < K.torsion_order && !found; ++s) {
            if (R.encode(K.mul(z, e)) == R.one()) {
                e = K.mul(z, e);
                found = true;
            }
            z = K.mul(z, K.torsion_generator);
        }
        if (!found) fail("FormulaMismatch", "unit lattice relation has no root-of-unity correction", ErrorKind::Verification);
        out.push_back(std::move(e));
    }
    return out;
}

LatticeRep build_rep_symd(const NumberField& K, int d, const congruence::Level& level, const congruence::CuspRep& cusp,
                          int max_rank, long bound) {
    if (d < 0) fail("ParseError", "symmetric power must be nonnegative");
    const long rank = static_cast<long>(K.degree) * (d + 1);
    if (rank > max_rank) fail("RankOverflow", "Sym^" + std::to_string(d) + " has Z-rank " + std::to_string(rank));
    const auto n = static_cast<std::size_t>(K.degree);
    /* complete (a, c) to g in SL2(O_K): a y - c x = 1, b = x, d = y */
    IntMatrix A(n, 2 * n);
    IntMatrix ma = K.mul_matrix(cusp.a), mc = K.mul_matrix(cusp.c);
    add_block(A, 0, 0, ma, 1);
    add_block(A, 0, n, mc, -1);
    auto sol = solve_integral(A, K.one());
    if (!sol) fail("LiftNotFound", "cusp representative is not unimodular", ErrorKind::Verification);
    Elem y(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(n)), x(sol->begin() + static_cast<std::ptrdiff_t>(n), sol->end());
    const Mat2 g{cusp.a, x, cusp.c, y};
    const Mat2 ginv{y, K.sub(K.zero(), x), K.sub(K.zero(), cusp.c), cusp.a};
    auto conjugate = [&](const Mat2& h) { return sym_power(K, d, mul2(K, mul2(K, g, h), ginv)); };

    LatticeRep rep;
    rep.rank = static_cast<int>(rank);
    const auto tr = translation_basis(level);
    for (const auto& x : tr) rep.fiber_gens.push_back(conjugate({K.one(), x, K.zero(), K.one()}));
    for (const auto& e : congruence_units(K, level.ideal, bound)) {
        rep.base_gens.push_back(conjugate({e, K.zero(), K.zero(), K.unit_inverse(e)}));
        rep.conj.push_back(unit_conjugation(K, level, tr, e));
    }
    validate(rep);
    return rep;
}

LatticeRep build_rep_trivial(const NumberField& K, const congruence::Level& level, long bound) {
    LatticeRep rep;
    rep.rank = 1;
    const auto tr = translation_basis(level);
    rep.fiber_gens.assign(tr.size(), identity(1));
    for (const auto& e : congruence_units(K, level.ideal, bound)) {
        rep.base_gens.push_back(identity(1));
        rep.conj.push_back(unit_conjugation(K, level, tr, e));
    }
    validate(rep);
    return rep;
}

long IntComplex::euler_characteristic() const {
    long e = 0;
    for (std::size_t q = 0; q < ranks.size(); ++q) e += (q % 2 ? -1 : 1) * static_cast<long>(ranks[q]);
    return e;
}

IntComplex total_complex(const LatticeRep& rep) {
    validate(rep);
    const int dk = rep.fiber_rank(), r = rep.base_rank();
    const auto n = static_cast<std::size_t>(rep.rank);
    const int top = dk + r;

    std::vector<IntMatrix> Tinv;
    for (const auto& T : rep.fiber_gens) Tinv.push_back(*linalg::unimodular_inverse(T));

    /* Fox Jacobian of the inverse conjugation t_i -> prod_j t_j^{b_ij}, b = conj^-1 */
    std::vector<CommutingMinors> minors;
    std::vector<std::vector<std::vector<IntMatrix>>> jacs(static_cast<std::size_t>(r));
    for (int a = 0; a < r; ++a) {
        IntMatrix b = *linalg::unimodular_inverse(rep.conj[static_cast<std::size_t>(a)]);
        auto& J = jacs[static_cast<std::size_t>(a)];
        J.assign(static_cast<std::size_t>(dk), std::vector<IntMatrix>(static_cast<std::size_t>(dk)));
        for (int i = 0; i < dk; ++i) {
            IntMatrix prefix = identity(n);
            for (int j = 0; j < dk; ++j) {
                long e = b(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_si();
                J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    prefix * geometric(rep.fiber_gens[static_cast<std::size_t>(j)], Tinv[static_cast<std::size_t>(j)], e);
                prefix = prefix * linalg::matrix_power(rep.fiber_gens[static_cast<std::size_t>(j)], e);
            }
        }
    }
    for (int a = 0; a < r; ++a) minors.emplace_back(jacs[static_cast<std::size_t>(a)], n);

    /* blocks (I, S) of degree |I| + |S|; element index = block offset + lambda */
    struct Block {
        std::uint32_t I, S;
    };
    std::vector<std::vector<Block>> blocks(static_cast<std::size_t>(top + 1));
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> where;
    for (int q = 0; q <= top; ++q)
        for (std::uint32_t S = 0; S < (1u << r); ++S) {
            int p = q - std::popcount(S);
            if (p < 0 || p > dk) continue;
            for (auto I : subsets_of_size(dk, p)) {
                where[{I, S}] = blocks[static_cast<std::size_t>(q)].size();
                blocks[static_cast<std::size_t>(q)].push_back({I, S});
            }
        }
    IntComplex c;
    c.fiber_rank = dk;
    c.base_rank = r;
    for (int q = 0; q <= top; ++q) {
        c.ranks.push_back(blocks[static_cast<std::size_t>(q)].size() * n);
        std::vector<int> fd;
        for (const auto& b : blocks[static_cast<std::size_t>(q)])
            for (std::size_t l = 0; l < n; ++l) fd.push_back(std::popcount(b.I));
        c.fiber_degree.push_back(std::move(fd));
    }
    std::vector<IntMatrix> TminusI;
    for (const auto& T : rep.fiber_gens) TminusI.push_back(T - identity(n));
    for (int q = 0; q < top; ++q) {
        IntMatrix D(c.ranks[static_cast<std::size_t>(q + 1)], c.ranks[static_cast<std::size_t>(q)]);
        const auto& src = blocks[static_cast<std::size_t>(q)];
        for (std::size_t bi = 0; bi < src.size(); ++bi) {
            const auto [I, S] = src[bi];
            const long sS = (std::popcount(S) & 1) ? -1 : 1;
            for (int t = 0; t < dk; ++t) {
                if (I & (1u << t)) continue;
                std::size_t row = where.at({I | (1u << t), S});
                add_block(D, row * n, bi * n, TminusI[static_cast<std::size_t>(t)], sS * sign_before(I, t));
            }
            for (int a = 0; a < r; ++a) {
                if (S & (1u << a)) continue;
                const std::uint32_t Sa = S | (1u << a);
                const long sa = sign_before(S, a);
                const IntMatrix& U = rep.base_gens[static_cast<std::size_t>(a)];
                for (auto J : subsets_of_size(dk, std::popcount(I))) {
                    IntMatrix blk = U * minors[static_cast<std::size_t>(a)].get(J, I);
                    if (J == I) blk = blk - identity(n);
                    add_block(D, where.at({J, Sa}) * n, bi * n, blk, sa);
                }
            }
        }
        c.d.push_back(std::move(D));
    }
    for (std::size_t q = 0; q + 1 < c.d.size(); ++q)
        if (!is_zero(c.d[q + 1] * c.d[q]))
            fail(r >= 2 ? "NonCommuting" : "NonChainMap",
                 "induced unit actions do not give a complex in degree " + std::to_string(q), ErrorKind::Verification);
    return c;
}

Int CohomologyDegree::torsion_order() const {
    Int o = 1;
    for (const auto& t : torsion) o *= t;
    return o;
}

long CohomologyTable::euler_characteristic() const {
    long e = 0;
    for (std::size_t q = 0; q < degrees.size(); ++q) e += (q % 2 ? -1 : 1) * degrees[q].free_rank;
    return e;
}

CohomologyTable smith_cohomology(const IntComplex& c) {
    const std::size_t Q = c.ranks.size();
    std::vector<std::vector<Int>> inv(Q);
    for (std::size_t q = 0; q < c.d.size(); ++q) inv[q] = linalg::smith_invariants(c.d[q]);
    CohomologyTable t;
    for (std::size_t q = 0; q < Q; ++q) {
        CohomologyDegree h;
        const long out_rank = q < c.d.size() ? static_cast<long>(inv[q].size()) : 0;
        const long in_rank = q > 0 ? static_cast<long>(inv[q - 1].size()) : 0;
        h.free_rank = static_cast<long>(c.ranks[q]) - out_rank - in_rank;
        if (q > 0)
            for (const auto& v : inv[q - 1])
                if (v > 1) h.torsion.push_back(v);
        std::sort(h.torsion.begin(), h.torsion.end());
        for (int p = 0; p <= c.fiber_rank + 1; ++p) {
            std::vector<std::size_t> in_f, out_f;
            for (std::size_t i = 0; i < c.ranks[q]; ++i) (c.fiber_degree[q][i] >= p ? in_f : out_f).push_back(i);
            std::vector<std::size_t> all_next, all_prev;
            if (q < c.d.size())
                for (std::size_t i = 0; i < c.ranks[q + 1]; ++i) all_next.push_back(i);
            if (q > 0)
                for (std::size_t i = 0; i < c.ranks[q - 1]; ++i) all_prev.push_back(i);
            long z = static_cast<long>(in_f.size()) - (q < c.d.size() ? static_cast<long>(sub_rank(c.d[q], all_next, in_f)) : 0);
            long b = in_rank - (q > 0 ? static_cast<long>(sub_rank(c.d[q - 1], out_f, all_prev)) : 0);
            h.filtration.push_back(z - b);
        }
        t.degrees.push_back(std::move(h));
    }
    return t;
}

CohomologyTable load_table(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail("ParseError", std::string("table document: ") + e.what());
    }
    const json& deg = j.is_object() && j.contains("degrees") ? j["degrees"] : j;
    if (!deg.is_array()) fail("ParseError", "table needs a degrees array");
    CohomologyTable t;
    for (const auto& d : deg) {
        CohomologyDegree h;
        h.free_rank = d.contains("free_rank") ? json_int(d["free_rank"]).get_si() : 0;
        if (h.free_rank < 0) fail("ParseError", "negative free rank");
        if (d.contains("torsion"))
            for (const auto& v : d["torsion"]) {
                Int x = json_int(v);
                if (x < 1) fail("ParseError", "invariant factors must be positive");
                if (x > 1) h.torsion.push_back(x);
            }
        std::sort(h.torsion.begin(), h.torsion.end());
        if (d.contains("filtration"))
            for (const auto& v : d["filtration"]) h.filtration.push_back(json_int(v).get_si());
        t.degrees.push_back(std::move(h));
    }
    return t;
}

std::string table_to_json(const CohomologyTable& t) {
    json deg = json::array();
    for (const auto& h : t.degrees) {
        json d;
        d["free_rank"] = h.free_rank;
        d["torsion"] = json::array();
        for (const auto& v : h.torsion) d["torsion"].push_back(to_string(v));
        d["filtration"] = h.filtration;
        deg.push_back(std::move(d));
    }
    return json{{"degrees", deg}}.dump();
}

PmSplit pm_split_integral(const CohomologyTable& t, const IntComplex& c, int r1, int r2) {
    if (r2 != 1 || r1 < 1) fail("UnsupportedSignature", "the +- split of free parts needs r2 = 1 and r1 > 0");
    if (c.fiber_rank != r1 + 2 * r2 || c.base_rank != r1 + r2 - 1)
        fail("ParseError", "complex does not come from signature (" + std::to_string(r1) + "," + std::to_string(r2) + ")");
    auto filt = [](const CohomologyDegree& h, int p) {
        return p < static_cast<int>(h.filtration.size()) ? h.filtration[static_cast<std::size_t>(p)] : 0L;
    };
    PmSplit s;
    for (const auto& h : t.degrees) {
        s.minus.push_back(filt(h, r1 + r2));
        s.plus.push_back(h.free_rank - filt(h, r2 + 1));
        s.additive = s.additive && filt(h, r2 + 1) == filt(h, r1 + r2);
    }
    return s;
}

Rat cheeger_torsion(const CohomologyTable& t) {
    Rat tau = 1;
    for (std::size_t q = 0; q < t.degrees.size(); ++q) {
        Int o = t.degrees[q].torsion_order();
        if (q % 2 == 1) tau *= o;
        else tau /= o;
    }
    return tau;
}

Rat covolume_squared(const RatMatrix& basis, const RatMatrix& gram) {
    if (gram.rows != gram.cols || gram.rows != basis.rows) fail("ParseError", "Gram matrix shape mismatch");
    Rat det = linalg::determinant(transpose(basis) * gram * basis);
    if (det <= 0) fail("ParseError", "Gram determinant must be positive");
    return det;
}

CovolumeBound covolume_bounds(const Rat& vol_base, const Rat& vol_dual_base, const Int& index, long b, int bits) {
    if (vol_base <= 0 || vol_dual_base <= 0) fail("ParseError", "covolumes must be positive");
    if (index < 1 || b < 0) fail("ParseError", "index must be positive and b nonnegative");
    CovolumeBound cb;
    const Rat Ib(ipow(index, static_cast<unsigned long>(b)));
    cb.upper_sq = vol_base * vol_base * Ib;
    cb.lower_sq = Rat(1) / (vol_dual_base * vol_dual_base * Ib);
    cb.upper = decimal_sqrt_string(cb.upper_sq, bits);
    cb.lower = decimal_sqrt_string(cb.lower_sq, bits);
    return cb;
}

RelativeTorsionReport relative_torsion_bound(const CohomologyTable& relative, const CohomologyTable& absolute,
                                             const CovolumeData& cov, int r1, const std::vector<Int>& relative_index,
                                             int bits) {
    const std::size_t Q = relative.degrees.size();
    if (Q == 0) fail("MissingData", "empty relative table");
    if (absolute.degrees.size() != Q) fail("MissingData", "relative and absolute tables cover different degrees");
    if (cov.plus.size() + 1 < Q) fail("MissingData", "plus covolumes missing for some degree");
    if (!relative_index.empty() && relative_index.size() != Q) fail("MissingData", "one relative index per degree");
    for (const auto& v : cov.plus)
        if (v <= 0) fail("ParseError", "covolumes must be positive");
    RelativeTorsionReport rep;
    rep.lhs = 1;
    rep.rhs = 1;
    for (std::size_t q = 0; q < Q; ++q) {
        const Rat tor(relative.degrees[q].torsion_order());
        const Rat v = q == 0 ? Rat(1) : cov.plus[q - 1];
        Rat idx = 1;
        if (!relative_index.empty()) {
            idx = Rat(relative_index[q]);
            if (idx < 1 || idx > Rat(absolute.degrees[q].torsion_order()))
                fail("ParseError", "relative index in degree " + std::to_string(q) + " outside [1, |H_tor|]");
        }
        /* tau^2 factor (tor / vol_rel)^{(-1)^{q+1}} with vol_rel = v / idx, raised to (-1)^{r1+1} */
        const bool even = (static_cast<int>(q) + r1) % 2 == 0;
        const Rat base = tor * idx / v;
        rep.lhs *= even ? base : Rat(1) / base;
        if (even) rep.rhs *= tor * tor / v;
        else rep.rhs *= v;
    }
    rep.slack = rep.rhs - rep.lhs;
    rep.holds = rep.lhs <= rep.rhs;
    rep.lhs_decimal = decimal_string(rep.lhs, bits);
    rep.rhs_decimal = decimal_string(rep.rhs, bits);
    return rep;
}

}  // namespace cusptor::integral
