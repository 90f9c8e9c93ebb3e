#include "cusptor/exact.hpp"

#include <cctype>

namespace cusptor {

RatMatrix to_rational(const IntMatrix& m) {
    RatMatrix r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
    return r;
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) {
    Rat c = v;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

static std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

Int parse_int(const std::string& raw) {
    std::string s = trim(raw);
    if (!s.empty() && s[0] == '+') s = s.substr(1);
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) fail("ParseError", "not an integer: '" + raw + "'");
    return v;
}

Rat parse_rational(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty()) fail("ParseError", "empty number");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Int p = parse_int(s.substr(0, slash)), q = parse_int(s.substr(slash + 1));
        if (q == 0) fail("ParseError", "zero denominator in '" + raw + "'");
        Rat r(p, q);
        r.canonicalize();
        return r;
    }
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = parse_int(s.substr(epos + 1)).get_si();
        s = s.substr(0, epos);
    }
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    auto dot = s.find('.');
    std::string digits = s;
    if (dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    if (digits.empty()) fail("ParseError", "not a number: '" + raw + "'");
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c))) fail("ParseError", "not a number: '" + raw + "'");
    Rat r{Int(digits)};
    Int ten = 10;
    if (exp10 > 0) r *= Rat(ipow(ten, static_cast<unsigned long>(exp10)));
    if (exp10 < 0) r /= Rat(ipow(ten, static_cast<unsigned long>(-exp10)));
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Int ipow(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

}  // namespace cusptor
