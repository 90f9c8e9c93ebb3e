#ifndef CUSPTOR_LINALG_HPP
#define CUSPTOR_LINALG_HPP

#include "cusptor/exact.hpp"

#include <optional>

namespace cusptor::linalg {

/* Column Hermite normal form of the lattice spanned by the columns of
   gens.  The result is square, upper triangular with positive diagonal,
   and entries above the diagonal reduced into [0, h_ii).  Throws if the
   columns do not span a full-rank lattice. */
IntMatrix hnf_columns(const IntMatrix& gens);

/* Solves H x = v for upper-triangular H; nullopt if x is not integral. */
std::optional<std::vector<Int>> solve_upper_integral(const IntMatrix& h, const std::vector<Int>& v);

Int determinant(const IntMatrix& m);
Rat determinant(const RatMatrix& m);

std::optional<RatMatrix> inverse(const RatMatrix& m);

/* Inverse of an integer matrix with determinant +-1. */
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);

std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);

/* Basis of the right null space {x : m x = 0}, as columns. */
RatMatrix nullspace(const RatMatrix& m);

/* Invariant factors (nonzero diagonal of the Smith form, each dividing
   the next).  The number of entries is the rank. */
std::vector<Int> smith_invariants(IntMatrix m);

/* Integer power with negative exponents for unimodular matrices. */
IntMatrix matrix_power(const IntMatrix& m, long e);

}  // namespace cusptor::linalg

#endif
