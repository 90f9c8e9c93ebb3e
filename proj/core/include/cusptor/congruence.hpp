#ifndef CUSPTOR_CONGRUENCE_HPP
#define CUSPTOR_CONGRUENCE_HPP

#include "cusptor/numberfield.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cusptor::congruence {

using numberfield::Elem;
using numberfield::IdealHNF;
using numberfield::NumberField;

struct Level {
    IdealHNF ideal;
    bool torsion_free = false;  // declared, never proven
    std::vector<numberfield::PrimePower> factorization;
    bool has_factorization = false;
};

/* Checks the declared-flag invariant (a torsion-free level must be proper). */
Level make_level(const NumberField& K, const numberfield::IdealSpec& spec, bool torsion_free = false);
Level make_level(const NumberField& K, const IdealHNF& ideal, bool torsion_free = false);

struct SL2Order {
    Int value;
    bool enumerated = false;
    bool formula = false;
    bool formula_only = false;  // warning flag: enumeration skipped
};

/* #{(a,b,c,d) in (O/n)^4 : ad - bc = 1}, counted through the values of ad. */
Int sl2_order_enumerated(const NumberField& K, const IdealHNF& n, long bound = numberfield::kDefaultEnumBound);
/* N(n)^3 prod_p (1 - N(p)^-2) from an ingested factorization. */
Int sl2_order_formula(const NumberField& K, const Level& level);
SL2Order sl2_order_mod(const NumberField& K, const Level& level, long bound = numberfield::kDefaultEnumBound);

/* [Gamma(n1) : Gamma(n2)] */
Int index(const NumberField& K, const Level& level1, const Level& level2,
          long bound = numberfield::kDefaultEnumBound);

struct CuspRep {
    Elem a, c;  // coprime lift of the representative column (a, c)
    std::int64_t residue_a = 0, residue_c = 0;
    int ideal_class_index = 0;
    std::int64_t orbit_size = 0;       // unimodular vectors mod n in the orbit
    std::int64_t stabilizer_size = 1;  // stabilizer in the unit image (always 1)
};

/* Unimodular vectors of (O/n)^2 grouped into orbits under scaling by the unit image. */
class CuspTable {
public:
    CuspTable(const NumberField& K, const IdealHNF& n, long bound = numberfield::kDefaultEnumBound);

    const numberfield::ResidueRing& ring() const { return ring_; }
    std::size_t cusp_count() const { return reps_.size(); }
    const std::vector<std::pair<std::int64_t, std::int64_t>>& representatives() const { return reps_; }
    /* orbit id of a pair, or -1 when not unimodular */
    std::int64_t orbit_of(std::int64_t a, std::int64_t c) const;
    std::int64_t unit_image_size() const { return static_cast<std::int64_t>(units_.size()); }
    std::int64_t unimodular_count() const { return unimodular_; }

private:
    numberfield::ResidueRing ring_;
    std::vector<std::int64_t> units_;
    std::vector<std::int64_t> orbit_;  // per pair index a*N + c
    std::vector<std::pair<std::int64_t, std::int64_t>> reps_;
    std::int64_t unimodular_ = 0;
};

std::vector<CuspRep> cusp_set(const NumberField& K, const Level& level, long bound = numberfield::kDefaultEnumBound);

Int parabolic_index(const NumberField& K, const Level& level1, const Level& level2, const CuspRep& cusp,
                    long bound = numberfield::kDefaultEnumBound);

Int cusp_fiber_count(const NumberField& K, const Level& level1, const Level& level2, const CuspRep& cusp,
                     long bound = numberfield::kDefaultEnumBound);

/* Level-2 cusps lying over the given level-1 cusp, by reduction of orbit representatives. */
std::int64_t cusps_above(const CuspTable& t1, const CuspTable& t2, const CuspRep& cusp);

struct NegligibilityTerm {
    IdealHNF ideal;
    Int norm;
    Int parabolic_index;
    Rat sum28;
    LogSum sum29;
};

std::vector<NegligibilityTerm> negligibility_sums(const NumberField& K, const Level& level1,
                                                  const std::vector<Level>& sequence,
                                                  long bound = numberfield::kDefaultEnumBound);

struct IdealSequence {
    Level level1;
    std::vector<Level> sequence;
};

/* {"level1": ideal, "sequence": [ideal, ...], "torsion_free": bool} */
IdealSequence load_ideal_sequence(const NumberField& K, const std::string& json_text);

}  // namespace cusptor::congruence

#endif
