#ifndef CUSPTOR_JSON_UTIL_HPP
#define CUSPTOR_JSON_UTIL_HPP

// Private helpers: exact numbers travel as decimal strings, small ones may be bare JSON integers.

#include "cusptor/exact.hpp"

#include <json.hpp>

namespace cusptor {

inline Int json_int(const nlohmann::json& j) {
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) return parse_int(j.get<std::string>());
    fail("ParseError", "expected an integer, got " + j.dump());
}

inline Rat json_rat(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(json_int(j));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_float()) return parse_rational(j.dump());
    fail("ParseError", "expected a rational, got " + j.dump());
}

template <class T, class F>
Matrix<T> json_matrix(const nlohmann::json& j, F conv) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) fail("ParseError", "expected a matrix (list of rows)");
    Matrix<T> m(j.size(), j[0].size());
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (!j[i].is_array() || j[i].size() != m.cols) fail("ParseError", "ragged matrix rows");
        for (std::size_t k = 0; k < m.cols; ++k) m(i, k) = conv(j[i][k]);
    }
    return m;
}

inline IntMatrix json_int_matrix(const nlohmann::json& j) { return json_matrix<Int>(j, json_int); }
inline RatMatrix json_rat_matrix(const nlohmann::json& j) { return json_matrix<Rat>(j, json_rat); }

}  // namespace cusptor

#endif
