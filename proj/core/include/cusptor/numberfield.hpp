#ifndef CUSPTOR_NUMBERFIELD_HPP
#define CUSPTOR_NUMBERFIELD_HPP

#include "cusptor/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cusptor::numberfield {

/* An element of O_K in integral-basis coordinates. */
using Elem = std::vector<Int>;

struct IdealHNF {
    IntMatrix matrix;  // upper triangular, columns = Z-basis in integral-basis coordinates
    bool operator==(const IdealHNF& o) const { return matrix == o.matrix; }
    bool operator<(const IdealHNF& o) const;
};

struct NumberField {
    std::string name;
    std::vector<Int> poly;  // coefficients, constant term first; monic
    int degree = 0;
    int r1 = 0, r2 = 0;
    RatMatrix integral_basis;  // columns = b_j in the power basis
    std::vector<Elem> units;
    int torsion_order = 2;
    Elem torsion_generator;
    std::vector<IdealHNF> class_ideals;
    std::optional<Int> disc;
    std::string provenance;

    /* mult[i][j] = coordinates of b_i * b_j */
    std::vector<std::vector<Elem>> mult;
    Elem one_elem;

    int unit_rank() const { return r1 + r2 - 1; }
    int class_number() const { return class_ideals.empty() ? 1 : static_cast<int>(class_ideals.size()); }

    Elem zero() const { return Elem(static_cast<std::size_t>(degree)); }
    Elem one() const { return one_elem; }
    Elem from_int(const Int& v) const;
    Elem add(const Elem& x, const Elem& y) const;
    Elem sub(const Elem& x, const Elem& y) const;
    Elem mul(const Elem& x, const Elem& y) const;
    Elem pow(const Elem& x, unsigned long e) const;
    /* column j = coordinates of x * b_j */
    IntMatrix mul_matrix(const Elem& x) const;
    Int norm(const Elem& x) const;
    Int trace(const Elem& x) const;
    /* Inverse of a unit (norm +-1); throws NonUnitGenerator otherwise. */
    Elem unit_inverse(const Elem& x) const;
    /* Power-basis coordinates; used for embeddings and reports. */
    std::vector<Rat> to_power_basis(const Elem& x) const;
};

/* Number of real roots of a squarefree integer polynomial (low-to-high coefficients). */
int sturm_real_roots(const std::vector<Int>& poly);

NumberField load_field(const std::string& json_text);
NumberField load_field_file(const std::string& path);

/* Lattice spanned by the columns of gens, validated as an ideal. */
IdealHNF make_ideal(const NumberField& K, const IntMatrix& gens);
IdealHNF ideal_from_generators(const NumberField& K, const std::vector<Elem>& gens);
IdealHNF principal_ideal(const NumberField& K, const Elem& a);
IdealHNF unit_ideal(const NumberField& K);
IdealHNF ideal_sum(const NumberField& K, const IdealHNF& a, const IdealHNF& b);
IdealHNF ideal_product(const NumberField& K, const IdealHNF& a, const IdealHNF& b);
IdealHNF ideal_power(const NumberField& K, const IdealHNF& a, unsigned e);

bool is_ideal(const NumberField& K, const IntMatrix& hnf);
Int ideal_norm(const NumberField& K, const IdealHNF& a);
bool ideal_contains(const IdealHNF& a, const Elem& x);
/* true when b is a subset of a */
bool ideal_contains(const IdealHNF& a, const IdealHNF& b);

/* Reduction of x into the fundamental box 0 <= x_i < h_ii. */
Elem reduce_mod(const IdealHNF& a, const Elem& x);

/* All ideals of norm at most bound. */
std::vector<IdealHNF> enumerate_ideals(const NumberField& K, long bound);

constexpr long kDefaultEnumBound = 10000;

/* A prime ideal factor recorded by its norm N(p) and multiplicity. */
struct PrimePower {
    Int norm;
    unsigned exponent = 1;
};

/* An ideal as read from a document, optionally with an ingested factorization. */
struct IdealSpec {
    IdealHNF ideal;
    std::vector<PrimePower> factorization;
    bool has_factorization = false;
};

/* Accepted forms: a bare generator matrix, {"hnf": M}, {"generators": [x, ...]}
   or {"generator": x, "exponent": e}; each may carry "factorization":
   [{"norm": q, "exponent": e}, ...]. */
IdealSpec load_ideal(const NumberField& K, const std::string& json_text);

/* O_K / n with elements indexed 0..N-1 through the mixed radix of the HNF diagonal. */
class ResidueRing {
public:
    ResidueRing(const NumberField& K, const IdealHNF& level, long bound = kDefaultEnumBound);

    std::int64_t size() const { return size_; }
    const IdealHNF& level() const { return level_; }

    std::int64_t encode(const Elem& x) const;
    Elem decode(std::int64_t idx) const;
    std::int64_t add(std::int64_t x, std::int64_t y) const;
    std::int64_t neg(std::int64_t x) const;
    std::int64_t mul(std::int64_t x, std::int64_t y) const;
    std::int64_t zero() const { return 0; }
    std::int64_t one() const { return one_; }
    bool has_tables() const { return !mul_table_.empty(); }

private:
    std::vector<std::int64_t> digits(std::int64_t idx) const;
    std::int64_t from_digits(std::vector<__int128>& v) const;
    std::int64_t add_raw(std::int64_t x, std::int64_t y) const;
    std::int64_t mul_raw(std::int64_t x, std::int64_t y) const;

    IdealHNF level_;
    int d_ = 0;
    std::int64_t size_ = 1;
    std::int64_t one_ = 0;
    std::vector<std::int64_t> h_;      // HNF entries, row-major
    std::vector<std::int64_t> radix_;  // mixed radix place values
    std::vector<std::int64_t> mult_;   // structure constants [i][j][k]
    std::vector<std::int64_t> add_table_, mul_table_;
};

/* Residues of the global unit group (torsion included) generated in (O/n)^*. */
std::vector<std::int64_t> unit_image(const NumberField& K, const ResidueRing& R);

/* [E(n1) : E(n2)] for E(n) = {units = 1 mod n}. */
Int unit_index_mod(const NumberField& K, const IdealHNF& n1, const IdealHNF& n2,
                   long bound = kDefaultEnumBound);

}  // namespace cusptor::numberfield

#endif
