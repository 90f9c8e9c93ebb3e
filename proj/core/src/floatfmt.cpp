#include "cusptor/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace cusptor {

namespace {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(int bits) { mpfr_init2(v, bits); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

std::string render(const mpfr_t x, int bits) {
    int digits = std::max(1, static_cast<int>(std::floor(bits * 0.30102999566398120)));
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Rg", digits, x) < 0) fail("ParseError", "float rendering failed");
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

}  // namespace

std::string decimal_string(const Rat& v, int bits) {
    if (bits < 2) bits = 2;
    Mpfr x(bits);
    mpfr_set_q(x.v, v.get_mpq_t(), MPFR_RNDN);
    return render(x.v, bits);
}

std::string decimal_sqrt_string(const Rat& v, int bits) {
    if (v < 0) fail("ParseError", "square root of a negative number");
    if (bits < 2) bits = 2;
    Mpfr x(bits + 16);
    mpfr_set_q(x.v, v.get_mpq_t(), MPFR_RNDN);
    mpfr_sqrt(x.v, x.v, MPFR_RNDN);
    Mpfr out(bits);
    mpfr_set(out.v, x.v, MPFR_RNDN);
    return render(out.v, bits);
}

void add_log_term(LogSum& s, const Int& t, const Rat& c) {
    if (t <= 0) fail("ParseError", "logarithm of a non-positive integer");
    if (t == 1 || c == 0) return;
    Rat& slot = s[t];
    slot += c;
    if (slot == 0) s.erase(t);
}

bool is_zero(const LogSum& s) { return s.empty(); }

std::string decimal_string(const LogSum& s, int bits) {
    if (bits < 2) bits = 2;
    const int work = bits + 32;
    Mpfr acc(work), term(work), coef(work);
    mpfr_set_zero(acc.v, 1);
    for (const auto& [t, c] : s) {
        mpfr_set_z(term.v, t.get_mpz_t(), MPFR_RNDN);
        mpfr_log(term.v, term.v, MPFR_RNDN);
        mpfr_set_q(coef.v, c.get_mpq_t(), MPFR_RNDN);
        mpfr_mul(term.v, term.v, coef.v, MPFR_RNDN);
        mpfr_add(acc.v, acc.v, term.v, MPFR_RNDN);
    }
    Mpfr out(bits);
    mpfr_set(out.v, acc.v, MPFR_RNDN);
    return render(out.v, bits);
}

int compare(const LogSum& a, const LogSum& b) {
    /* a - b = sum c_t log t; clear denominators and compare the two integer products */
    LogSum diff = a;
    for (const auto& [t, c] : b) add_log_term(diff, t, -c);
    if (diff.empty()) return 0;
    Int den = 1;
    for (const auto& [t, c] : diff) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    Int pos = 1, neg = 1;
    for (const auto& [t, c] : diff) {
        Rat scaled = c * Rat(den);
        Int e = scaled.get_num();
        Int m = abs(e);
        if (!m.fits_ulong_p()) fail("TooLarge", "exponent too large for exact log comparison");
        if (e > 0) pos *= ipow(t, m.get_ui());
        else neg *= ipow(t, m.get_ui());
    }
    return pos > neg ? 1 : (pos < neg ? -1 : 0);
}

}  // namespace cusptor
