#ifndef CUSPTOR_GROWTH_HPP
#define CUSPTOR_GROWTH_HPP

#include "cusptor/congruence.hpp"
#include "cusptor/integral.hpp"
#include "cusptor/kostant.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cusptor::growth {

using numberfield::NumberField;

/* Permutations of the embedding set, ordered real, then nu_1..nu_r2, then their conjugates. */
struct GaloisAction {
    std::vector<std::vector<int>> perms;
    bool assumed_full = true;  // full symmetric group used as the conservative default
};

GaloisAction full_symmetric(int n);
/* Checks shape and closure under composition. */
GaloisAction make_galois_action(int n, const std::vector<std::vector<int>>& perms);

struct Constituent {
    kostant::Weight weight;
    kostant::AcyclicityStatus status;
};

struct AcyclicWeightSpec {
    std::vector<int> d_sigma;
    std::vector<Constituent> constituents;  // one per group element
    bool fully_acyclic = false;             // r1 > 0: ordinary cohomology vanishes too
};

/* Distinctness of the entries of d_sigma. */
bool admissible(const std::vector<int>& d_sigma);

/* Constituent weights for one highest weight; throws ParseError if not admissible. */
AcyclicWeightSpec acyclic_weight(const kostant::Signature& s, const std::vector<int>& d_sigma, const GaloisAction& g);

/* All admissible tuples with entries <= max_entry.  Throws NoComplexPlace when r2 = 0. */
std::vector<AcyclicWeightSpec> generate_acyclic_weights(const kostant::Signature& s, int max_entry,
                                                        const GaloisAction& g);

enum class Mode { Acyclic, SelfDualLattice };
std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct Ingested {
    Rat value;
    std::string provenance;
};

struct LevelRow {
    congruence::Level level;
    Int norm;
    Int index;                      // [Gamma(n1) : Gamma(ni)]
    std::optional<long> cusp_count;  // absent when the level is too large to enumerate
    congruence::NegligibilityTerm negligibility;
    Rat bound_times_index;
    std::optional<LogSum> measured;  // sum_{q + r1 even} log |H^q_tor| / index
};

struct GrowthReport {
    std::string field_name;
    int r1 = 0, r2 = 0;
    std::optional<Int> disc;
    Ingested t2, vol1;
    Mode mode = Mode::Acyclic;
    Rat bound;
    bool rank_condition = true;  // fundamental rank r2 = 1
    std::vector<LevelRow> levels;
    std::vector<std::string> warnings;
};

struct GrowthInputs {
    const NumberField* field = nullptr;
    congruence::IdealSequence ideals;
    Ingested t2, vol1;
    Mode mode = Mode::Acyclic;
    /* optional measured tables, one per level of the sequence */
    std::vector<std::optional<integral::CohomologyTable>> tables;
    long bound = numberfield::kDefaultEnumBound;
};

/* Throws WrongSign when (-1)^{r1+1} t2 <= 0.  r2 != 1 gives bound 0 with a WrongRank warning. */
GrowthReport growth_lower_bound(const GrowthInputs& in);

/* Bound closed forms: 2 (-1)^{r1+1} t2 vol1, halved for self-dual lattices. */
Rat predicted_bound(int r1, int r2, const Rat& t2, const Rat& vol1, Mode mode);

struct BasisLedger {
    std::vector<long> plus_dims, minus_dims;
    std::vector<std::string> plus_basis, minus_basis;
    /* pairing between mu_+ and the self-dual choice of mu_-; identity by construction */
    IntMatrix pairing;
    Int change_of_basis_det;  // +-1
    Rat boundary_torsion;     // tau of the boundary in the self-dual basis
    std::string convention;
    std::string note;
};

/* Throws TrivialCohomology when the boundary cohomology vanishes. */
BasisLedger boundary_basis_ledger(const kostant::Signature& s, const kostant::Weight& w);

}  // namespace cusptor::growth

#endif
