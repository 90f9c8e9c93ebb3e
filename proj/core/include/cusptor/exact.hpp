#ifndef CUSPTOR_EXACT_HPP
#define CUSPTOR_EXACT_HPP

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cusptor {

using Int = mpz_class;
using Rat = mpq_class;

/* Error categories map onto CLI exit codes: input problems exit 2,
   failed verifications exit 1. */
enum class ErrorKind { Input, Verification };

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what, ErrorKind kind = ErrorKind::Input)
        : std::runtime_error(code + ": " + what), code_(std::move(code)), kind_(kind) {}
    const std::string& code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_; }

private:
    std::string code_;
    ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what,
                              ErrorKind kind = ErrorKind::Input) {
    throw Error(code, what, kind);
}

template <class T>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T> operator*(const Matrix<T>& x, const Matrix<T>& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
    Matrix<T> z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const T& xik = x(i, k);
            if (xik == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
        }
    return z;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& x, const Matrix<T>& y) {
    Matrix<T> z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
    return z;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& x, const Matrix<T>& y) {
    Matrix<T> z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
    return z;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& x) {
    Matrix<T> z(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

template <class T>
bool is_zero(const Matrix<T>& x) {
    for (const auto& v : x.a)
        if (v != 0) return false;
    return true;
}

RatMatrix to_rational(const IntMatrix& m);

/* "p/q" (or "p") rendering and parsing.  Parsing also accepts decimal
   and scientific notation, converted exactly. */
std::string to_string(const Int& v);
std::string to_string(const Rat& v);
Int parse_int(const std::string& s);
Rat parse_rational(const std::string& s);

/* Decimal rendering at the given binary precision, round to nearest. */
std::string decimal_string(const Rat& v, int precision_bits);
/* Decimal rendering of sqrt(v), v >= 0. */
std::string decimal_sqrt_string(const Rat& v, int precision_bits);

/* Formal sum of c_t * log(t) over integers t > 0. */
using LogSum = std::map<Int, Rat>;
void add_log_term(LogSum& s, const Int& t, const Rat& c);
std::string decimal_string(const LogSum& s, int precision_bits);
/* Exact comparison: sign(a - b). */
int compare(const LogSum& a, const LogSum& b);
bool is_zero(const LogSum& s);

Int binomial(unsigned n, unsigned k);
Int ipow(const Int& base, unsigned long e);

}  // namespace cusptor

#endif
