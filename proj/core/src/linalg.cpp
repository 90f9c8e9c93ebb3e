#include "cusptor/linalg.hpp"

#include <algorithm>
#include <utility>

namespace cusptor::linalg {

namespace {

/* floor division for mpz */
Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

void axpy(std::vector<Int>& y, const Int& q, const std::vector<Int>& x) {
    if (q == 0) return;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (x[i] != 0) y[i] -= q * x[i];
}

}  // namespace

IntMatrix hnf_columns(const IntMatrix& gens) {
    const std::size_t d = gens.rows;
    std::vector<std::vector<Int>> pool;
    for (std::size_t j = 0; j < gens.cols; ++j) {
        std::vector<Int> v(d);
        bool nz = false;
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = gens(i, j);
            nz = nz || v[i] != 0;
        }
        if (nz) pool.push_back(std::move(v));
    }
    std::vector<std::vector<Int>> pivots(d);
    for (std::size_t ii = d; ii-- > 0;) {
        for (;;) {
            std::size_t best = pool.size();
            for (std::size_t k = 0; k < pool.size(); ++k) {
                if (pool[k][ii] == 0) continue;
                if (best == pool.size() || abs(pool[k][ii]) < abs(pool[best][ii])) best = k;
            }
            if (best == pool.size()) fail("MalformedBasis", "generators do not span a full-rank lattice");
            bool others = false;
            for (std::size_t k = 0; k < pool.size(); ++k) {
                if (k == best || pool[k][ii] == 0) continue;
                axpy(pool[k], fdiv(pool[k][ii], pool[best][ii]), pool[best]);
                others = others || pool[k][ii] != 0;
            }
            if (!others) {
                std::vector<Int> p = std::move(pool[best]);
                pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
                if (p[ii] < 0)
                    for (auto& x : p) x = -x;
                pivots[ii] = std::move(p);
                break;
            }
        }
        std::vector<std::vector<Int>> rest;
        for (auto& v : pool) {
            bool nz = false;
            for (auto& x : v) nz = nz || x != 0;
            if (nz) rest.push_back(std::move(v));
        }
        pool = std::move(rest);
    }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = j; i-- > 0;) axpy(pivots[j], fdiv(pivots[j][i], pivots[i][i]), pivots[i]);
    IntMatrix h(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) h(i, j) = pivots[j][i];
    return h;
}

std::optional<std::vector<Int>> solve_upper_integral(const IntMatrix& h, const std::vector<Int>& v) {
    const std::size_t d = h.rows;
    std::vector<Int> r = v, x(d);
    for (std::size_t i = d; i-- > 0;) {
        if (h(i, i) == 0) return std::nullopt;
        if (!mpz_divisible_p(r[i].get_mpz_t(), h(i, i).get_mpz_t())) return std::nullopt;
        x[i] = r[i] / h(i, i);
        for (std::size_t k = 0; k <= i; ++k) r[k] -= x[i] * h(k, i);
    }
    return x;
}

Int determinant(const IntMatrix& src) {
    const std::size_t n = src.rows;
    if (n != src.cols) throw std::invalid_argument("determinant of non-square matrix");
    if (n == 0) return 1;
    IntMatrix m = src;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j));
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

Rat determinant(const RatMatrix& src) {
    const std::size_t n = src.rows;
    RatMatrix m = src;
    Rat det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            det = -det;
        }
        det *= m(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            Rat f = m(i, k) / m(k, k);
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return det;
}

std::optional<RatMatrix> inverse(const RatMatrix& src) {
    const std::size_t n = src.rows;
    RatMatrix m = src, inv = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return std::nullopt;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(p, j));
                std::swap(inv(k, j), inv(p, j));
            }
        Rat piv = m(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            m(k, j) /= piv;
            inv(k, j) /= piv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0) continue;
            Rat f = m(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m) {
    auto inv = inverse(to_rational(m));
    if (!inv) return std::nullopt;
    IntMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) {
        if (inv->a[i].get_den() != 1) return std::nullopt;
        r.a[i] = inv->a[i].get_num();
    }
    return r;
}

namespace {

/* Reduced row echelon form in place; returns pivot columns. */
std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m.cols && row < m.rows; ++c) {
        std::size_t p = row;
        while (p < m.rows && m(p, c) == 0) ++p;
        if (p == m.rows) continue;
        if (p != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(row, j), m(p, j));
        Rat inv = 1 / m(row, c);
        for (std::size_t j = c; j < m.cols; ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row || m(i, c) == 0) continue;
            Rat f = m(i, c);
            for (std::size_t j = c; j < m.cols; ++j)
                if (m(row, j) != 0) m(i, j) -= f * m(row, j);
        }
        piv.push_back(c);
        ++row;
    }
    return piv;
}

}  // namespace

std::size_t rank(const RatMatrix& src) {
    RatMatrix m = src;
    return rref(m).size();
}

std::size_t rank(const IntMatrix& m) {
    /* elimination modulo the invariant factors would be faster; the sizes
       here are small enough for the rational path */
    return smith_invariants(m).size();
}

RatMatrix nullspace(const RatMatrix& src) {
    RatMatrix m = src;
    auto piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols; ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    RatMatrix ns(m.cols, free_cols.size());
    for (std::size_t f = 0; f < free_cols.size(); ++f) {
        ns(free_cols[f], f) = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) ns(piv[r], f) = -m(r, free_cols[f]);
    }
    return ns;
}

std::vector<Int> smith_invariants(IntMatrix m) {
    const std::size_t R = m.rows, C = m.cols;
    std::vector<Int> diag;
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < C; ++c) std::swap(m(i, c), m(j, c));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < R; ++r) std::swap(m(r, i), m(r, j));
    };
    std::vector<std::size_t> row_nnz(R), col_nnz(C);
    for (std::size_t t = 0; t < R && t < C; ++t) {
        /* smallest nonzero entry, ties broken by sparsest row then column */
        std::fill(row_nnz.begin(), row_nnz.end(), 0);
        std::fill(col_nnz.begin(), col_nnz.end(), 0);
        for (std::size_t i = t; i < R; ++i)
            for (std::size_t j = t; j < C; ++j)
                if (m(i, j) != 0) {
                    ++row_nnz[i];
                    ++col_nnz[j];
                }
        std::size_t bi = R, bj = C;
        for (std::size_t i = t; i < R; ++i) {
            if (row_nnz[i] == 0) continue;
            for (std::size_t j = t; j < C; ++j) {
                if (m(i, j) == 0) continue;
                if (bi == R) {
                    bi = i;
                    bj = j;
                    continue;
                }
                int c = cmpabs(m(i, j), m(bi, bj));
                if (c < 0 || (c == 0 && (row_nnz[i] < row_nnz[bi] ||
                                         (row_nnz[i] == row_nnz[bi] && col_nnz[j] < col_nnz[bj])))) {
                    bi = i;
                    bj = j;
                }
            }
        }
        if (bi == R) break;
        swap_rows(t, bi);
        swap_cols(t, bj);
        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < R; ++i) {
                if (m(i, t) == 0) continue;
                Int q = fdiv(m(i, t), m(t, t));
                for (std::size_t c = t; c < C; ++c)
                    if (m(t, c) != 0) m(i, c) -= q * m(t, c);
                if (m(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < C; ++j) {
                if (m(t, j) == 0) continue;
                Int q = fdiv(m(t, j), m(t, t));
                for (std::size_t r = t; r < R; ++r)
                    if (m(r, t) != 0) m(r, j) -= q * m(r, t);
                if (m(t, j) != 0) dirty = true;
            }
            if (dirty) {
                /* move the smallest remainder in row/column t to the pivot */
                std::size_t bi2 = t, bj2 = t;
                for (std::size_t i = t + 1; i < R; ++i)
                    if (m(i, t) != 0 && cmpabs(m(i, t), m(bi2, bj2)) < 0) {
                        bi2 = i;
                        bj2 = t;
                    }
                for (std::size_t j = t + 1; j < C; ++j)
                    if (m(t, j) != 0 && cmpabs(m(t, j), m(bi2, bj2)) < 0) {
                        bi2 = t;
                        bj2 = j;
                    }
                swap_rows(t, bi2);
                swap_cols(t, bj2);
                continue;
            }
            std::size_t bad = R;
            for (std::size_t i = t + 1; i < R && bad == R; ++i)
                for (std::size_t j = t + 1; j < C; ++j)
                    if (m(i, j) != 0 && !mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == R) break;
            for (std::size_t c = t; c < C; ++c) m(t, c) += m(bad, c);
        }
        diag.push_back(abs(m(t, t)));
    }
    return diag;
}

IntMatrix matrix_power(const IntMatrix& m, long e) {
    IntMatrix base = m;
    if (e < 0) {
        auto inv = unimodular_inverse(m);
        if (!inv) fail("NonUnimodular", "negative power of a non-unimodular matrix");
        base = *inv;
        e = -e;
    }
    IntMatrix r = IntMatrix::identity(m.rows);
    while (e > 0) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

}  // namespace cusptor::linalg
