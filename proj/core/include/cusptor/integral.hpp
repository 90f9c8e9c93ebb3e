#ifndef CUSPTOR_INTEGRAL_HPP
#define CUSPTOR_INTEGRAL_HPP

#include "cusptor/congruence.hpp"
#include "cusptor/exact.hpp"
#include "cusptor/numberfield.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cusptor::integral {

using numberfield::IdealHNF;
using numberfield::NumberField;

/* Action of the cusp stabilizer Z^dK x| Z^r on a lattice Lambda = Z^rank.
   conj[a] records U_a T_i U_a^-1 = prod_j T_j^{conj[a](i,j)}. */
struct LatticeRep {
    int rank = 0;
    std::vector<IntMatrix> fiber_gens;
    std::vector<IntMatrix> base_gens;
    std::vector<IntMatrix> conj;
    int fiber_rank() const { return static_cast<int>(fiber_gens.size()); }
    int base_rank() const { return static_cast<int>(base_gens.size()); }
};

/* Throws NonCommuting, ConjugationMismatch or NonUnimodular. */
void validate(const LatticeRep& rep);

/* {rank, fiber_gens, base_gens, conj} */
LatticeRep build_rep_external(const std::string& json_text);
LatticeRep build_rep_external_file(const std::string& path);
std::string rep_to_json(const LatticeRep& rep);

constexpr int kDefaultMaxRank = 64;

/* Units congruent to 1 mod n: Z-basis of the free part, as field elements. */
std::vector<numberfield::Elem> congruence_units(const NumberField& K, const IdealHNF& n,
                                                long bound = numberfield::kDefaultEnumBound);

/* Sym^d(O_K^2) restricted to the stabilizer in Gamma(n) of the given cusp. */
LatticeRep build_rep_symd(const NumberField& K, int d, const congruence::Level& level,
                          const congruence::CuspRep& cusp, int max_rank = kDefaultMaxRank,
                          long bound = numberfield::kDefaultEnumBound);

/* Rank-one trivial coefficients on the same stabilizer (any cusp gives the same data). */
LatticeRep build_rep_trivial(const NumberField& K, const congruence::Level& level,
                             long bound = numberfield::kDefaultEnumBound);

/* Cochain complex over Z.  d[q] maps degree q to q+1 (rows = ranks[q+1]). */
struct IntComplex {
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> d;
    /* per degree, the Koszul (fiber) degree of every basis element */
    std::vector<std::vector<int>> fiber_degree;
    int fiber_rank = 0, base_rank = 0;
    long euler_characteristic() const;
};

/* Koszul complex of the fiber action followed by one mapping cone per base generator.
   The unit actions are lifted through Fox derivatives; when two of them commute only up
   to homotopy the construction stops with NonCommuting. */
IntComplex total_complex(const LatticeRep& rep);

struct CohomologyDegree {
    long free_rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1, sorted
    /* filtration[p] = rank of the image of the classes of fiber degree >= p */
    std::vector<long> filtration;
    Int torsion_order() const;
};

struct CohomologyTable {
    std::vector<CohomologyDegree> degrees;
    long euler_characteristic() const;
};

CohomologyTable smith_cohomology(const IntComplex& c);

CohomologyTable load_table(const std::string& json_text);
std::string table_to_json(const CohomologyTable& t);

struct PmSplit {
    std::vector<long> plus, minus;
    bool additive = true;
};

/* Free ranks by fiber degree: minus >= r1 + r2, plus <= r2.  Needs r2 = 1. */
PmSplit pm_split_integral(const CohomologyTable& t, const IntComplex& c, int r1, int r2);

/* prod_q |H^q_tor|^{(-1)^{q+1}} */
Rat cheeger_torsion(const CohomologyTable& t);

/* covolume of the lattice spanned by the columns of basis under the inner product gram, squared */
Rat covolume_squared(const RatMatrix& basis, const RatMatrix& gram);

struct CovolumeBound {
    Rat lower_sq, upper_sq;  // squares of the two sides
    std::string lower, upper;
};

/* Bounds for vol(H^q_free,+-) on a cover of parabolic index I, b = b_{q,+-}. */
CovolumeBound covolume_bounds(const Rat& vol_base, const Rat& vol_dual_base, const Int& index, long b,
                              int precision_bits = 64);

struct CovolumeData {
    /* plus[q] = covolume of H^q_free,+ of the boundary, q = 0..D */
    std::vector<Rat> plus, minus;
    std::string provenance;
};

struct RelativeTorsionReport {
    Rat lhs, rhs, slack;  // slack = rhs - lhs
    bool holds = false;
    std::string lhs_decimal, rhs_decimal;
};

/* Both sides of the relative torsion inequality.  relative_index[q], when given, is
   [H^q_free(X,dX) : d H^{q-1}_free,+] and must lie in [1, |H^q_tor(X)|]. */
RelativeTorsionReport relative_torsion_bound(const CohomologyTable& relative, const CohomologyTable& absolute,
                                             const CovolumeData& covolumes, int r1,
                                             const std::vector<Int>& relative_index = {}, int precision_bits = 64);

}  // namespace cusptor::integral

#endif
