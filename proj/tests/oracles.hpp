#ifndef CUSPTOR_TESTS_ORACLES_HPP
#define CUSPTOR_TESTS_ORACLES_HPP

// Small, slow, independent reimplementations used to freeze expected values.

#include "cusptor/exact.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <numeric>
#include <vector>

namespace oracle {

using cusptor::Int;
using cusptor::Rat;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/* rank over Q by plain row reduction */
inline std::size_t rank(std::vector<std::vector<Rat>> a) {
    std::size_t r = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

/* invariant factors of a 2x2 integer matrix: gcd of entries, then |det| / gcd */
inline std::vector<long> snf2(long a, long b, long c, long d) {
    long g = std::gcd(std::gcd(std::labs(a), std::labs(b)), std::gcd(std::labs(c), std::labs(d)));
    if (g == 0) return {0, 0};
    return {g, std::labs(a * d - b * c) / g};
}

/* Z[sqrt D] / (m), elements re + im sqrt D */
struct QuadMod {
    long m, D;
    struct E {
        long re, im;
    };
    long red(long x) const { return ((x % m) + m) % m; }
    E mul(E x, E y) const { return {red(x.re * y.re + D * x.im * y.im), red(x.re * y.im + x.im * y.re)}; }
    E sub(E x, E y) const { return {red(x.re - y.re), red(x.im - y.im)}; }
    E add(E x, E y) const { return {red(x.re + y.re), red(x.im + y.im)}; }
    bool is_one(E x) const { return x.re == red(1) && x.im == 0; }
    long id(E x) const { return x.re * m + x.im; }
    std::vector<E> all() const {
        std::vector<E> out;
        for (long a = 0; a < m; ++a)
            for (long b = 0; b < m; ++b) out.push_back({a, b});
        return out;
    }
};

/* |SL2(O/m)| by running over all quadruples */
inline long sl2_count(const QuadMod& R) {
    auto els = R.all();
    long n = 0;
    for (auto a : els)
        for (auto b : els)
            for (auto c : els)
                for (auto d : els)
                    if (R.is_one(R.sub(R.mul(a, d), R.mul(b, c)))) ++n;
    return n;
}

/* orbits of unimodular pairs of (O/m)^2 under the group generated by the given units */
inline long cusp_count(const QuadMod& R, const std::vector<QuadMod::E>& unit_gens) {
    auto els = R.all();
    const long m = R.m;
    auto unimodular = [&](QuadMod::E a, QuadMod::E c) {
        for (auto x : els)
            for (auto y : els)
                if (R.is_one(R.add(R.mul(a, x), R.mul(c, y)))) return true;
        return false;
    };
    std::vector<char> seen(static_cast<std::size_t>(m * m * m * m), 0);
    long orbits = 0;
    for (auto a : els)
        for (auto c : els) {
            if (seen[static_cast<std::size_t>(R.id(a) * m * m + R.id(c))] || !unimodular(a, c)) continue;
            ++orbits;
            std::vector<std::pair<QuadMod::E, QuadMod::E>> stack{{a, c}};
            seen[static_cast<std::size_t>(R.id(a) * m * m + R.id(c))] = 1;
            while (!stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                for (auto u : unit_gens) {
                    auto nx = R.mul(u, x), ny = R.mul(u, y);
                    auto key = static_cast<std::size_t>(R.id(nx) * m * m + R.id(ny));
                    if (!seen[key]) seen[key] = 1, stack.push_back({nx, ny});
                }
            }
        }
    return orbits;
}

/* number of ideals of norm n from the Dirichlet character of the quadratic field */
template <class Chi>
long quadratic_ideal_count(long n, Chi chi) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += chi(d);
    return s;
}

inline long chi_minus4(long d) { return d % 2 == 0 ? 0 : (d % 4 == 1 ? 1 : -1); }
inline long chi_8(long d) {
    long r = d % 8;
    return (r == 1 || r == 7) ? 1 : ((r == 3 || r == 5) ? -1 : 0);
}

/* Wang sequence for T^2 x|_A S^1 with trivial coefficients:
   H^q = coker(A^(q-1) - 1) + ker(A^(q) - 1) on H^*(T^2).  Returns (free rank, torsion) per degree. */
struct WangDegree {
    long free_rank;
    std::vector<long> torsion;
};
inline std::vector<WangDegree> wang_mapping_torus(long a, long b, long c, long d) {
    const long det = a * d - b * c;
    std::vector<WangDegree> h(4);
    /* H^0(F) = Z with trivial action */
    h[0] = {1, {}};
    auto f1 = snf2(a - 1, b, c, d - 1);
    long ker1 = (f1[0] == 0 ? 2 : (f1[1] == 0 ? 1 : 0));
    h[1] = {1 + ker1, {}};
    h[2] = {0, {}};
    for (long v : f1) {
        if (v == 0) ++h[2].free_rank;
        else if (v > 1) h[2].torsion.push_back(v);
    }
    /* H^2(F) = Z acted on by det */
    if (det == 1) ++h[2].free_rank, h[3] = {1, {}};
    else h[3] = {0, {2}};
    return h;
}

using LMat = std::vector<std::vector<long>>;

/* invariant factors (nonzero ones, including 1s) of an integer matrix by plain elimination */
inline std::vector<long> invariant_factors(LMat a) {
    std::vector<long> out;
    const std::size_t R = a.size(), C = R ? a[0].size() : 0;
    std::size_t t = 0;
    while (t < R && t < C) {
        std::size_t pr = R, pc = C;
        long best = 0;
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j)
                if (a[i][j] != 0 && (best == 0 || std::labs(a[i][j]) < best)) best = std::labs(a[i][j]), pr = i, pc = j;
        if (best == 0) break;
        std::swap(a[t], a[pr]);
        for (auto& row : a) std::swap(row[t], row[pc]);
        bool clean = true;
        for (std::size_t i = t + 1; i < R; ++i) {
            long q = a[i][t] / a[t][t];
            for (std::size_t j = t; j < C; ++j) a[i][j] -= q * a[t][j];
            if (a[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < C; ++j) {
            long q = a[t][j] / a[t][t];
            for (std::size_t i = t; i < R; ++i) a[i][j] -= q * a[i][t];
            if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        /* the pivot must divide the rest of the block */
        bool divides = true;
        for (std::size_t i = t + 1; i < R && divides; ++i)
            for (std::size_t j = t + 1; j < C; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    for (std::size_t k = t; k < C; ++k) a[t][k] += a[i][k];
                    divides = false;
                    break;
                }
        if (!divides) continue;
        out.push_back(std::labs(a[t][t]));
        ++t;
    }
    return out;
}

struct Degree {
    long free_rank;
    std::vector<long> torsion;
    bool operator==(const Degree& o) const { return free_rank == o.free_rank && torsion == o.torsion; }
};

/* cohomology of 0 -> Z^n0 -> Z^n1 -> ... with d[q] of size n_{q+1} x n_q */
inline std::vector<Degree> complex_cohomology(const std::vector<long>& ranks, const std::vector<LMat>& d) {
    std::vector<std::vector<long>> f;
    for (const auto& m : d) f.push_back(invariant_factors(m));
    std::vector<Degree> h;
    for (std::size_t q = 0; q < ranks.size(); ++q) {
        long r_out = q < f.size() ? static_cast<long>(f[q].size()) : 0;
        long r_in = q > 0 ? static_cast<long>(f[q - 1].size()) : 0;
        Degree g{ranks[q] - r_out - r_in, {}};
        if (q > 0)
            for (long v : f[q - 1])
                if (v > 1) g.torsion.push_back(v);
        std::sort(g.torsion.begin(), g.torsion.end());
        h.push_back(g);
    }
    return h;
}

inline long det(const LMat& m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    long s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        LMat minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<long> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(row);
        }
        s += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
    }
    return s;
}

/* q-th exterior power by minors, subsets in lexicographic order */
inline LMat exterior_power(const LMat& m, int q) {
    const int n = static_cast<int>(m.size());
    std::vector<std::vector<int>> subs;
    for (int mask = 0; mask < (1 << n); ++mask)
        if (__builtin_popcount(static_cast<unsigned>(mask)) == q) {
            std::vector<int> s;
            for (int i = 0; i < n; ++i)
                if ((mask >> i) & 1) s.push_back(i);
            subs.push_back(s);
        }
    std::sort(subs.begin(), subs.end());
    LMat out(subs.size(), std::vector<long>(subs.size()));
    for (std::size_t I = 0; I < subs.size(); ++I)
        for (std::size_t J = 0; J < subs.size(); ++J) {
            LMat minor;
            for (int r : subs[I]) {
                std::vector<long> row;
                for (int c : subs[J]) row.push_back(m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
                minor.push_back(row);
            }
            out[I][J] = det(minor);
        }
    return out;
}

inline LMat minus_identity(LMat m) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] -= 1;
    return m;
}

/* Wang sequence for the mapping torus of T^n with monodromy M on H^1(T^n), trivial coefficients:
   0 -> coker(L^{q-1} M - 1) -> H^q -> ker(L^q M - 1) -> 0, and the kernel is free */
inline std::vector<Degree> wang_torus_bundle(const LMat& M) {
    const int n = static_cast<int>(M.size());
    std::vector<Degree> h;
    for (int q = 0; q <= n + 1; ++q) {
        Degree g{0, {}};
        if (q >= 1) {
            auto f = invariant_factors(minus_identity(exterior_power(M, q - 1)));
            long dim = static_cast<long>(exterior_power(M, q - 1).size());
            g.free_rank += dim - static_cast<long>(f.size());
            for (long v : f)
                if (v > 1) g.torsion.push_back(v);
        }
        if (q <= n) {
            auto L = exterior_power(M, q);
            g.free_rank += static_cast<long>(L.size()) - static_cast<long>(invariant_factors(minus_identity(L)).size());
        }
        std::sort(g.torsion.begin(), g.torsion.end());
        h.push_back(g);
    }
    return h;
}

/* Koszul complex of two commuting endomorphisms: Z^n -> Z^2n -> Z^n */
inline std::vector<Degree> koszul2(const LMat& T1, const LMat& T2) {
    const std::size_t n = T1.size();
    auto A = minus_identity(T1), B = minus_identity(T2);
    LMat d0(2 * n, std::vector<long>(n)), d1(n, std::vector<long>(2 * n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            d0[i][j] = A[i][j];
            d0[n + i][j] = B[i][j];
            d1[i][j] = -B[i][j];
            d1[i][n + j] = A[i][j];
        }
    return complex_cohomology({static_cast<long>(n), static_cast<long>(2 * n), static_cast<long>(n)}, {d0, d1});
}

}  // namespace oracle

#endif
