#ifndef CUSPTOR_KOSTANT_HPP
#define CUSPTOR_KOSTANT_HPP

#include "cusptor/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cusptor::kostant {

struct Signature {
    int r1 = 0, r2 = 0;
    int dK() const { return r1 + 2 * r2; }
    /* rank of the base torus S, r1 + r2 - 1 */
    int base_rank() const { return r1 + r2 - 1; }
    /* dimension of the cusp cross-section, d_K + base rank */
    int cross_section_dim() const { return dK() + base_rank(); }
};

/* Factor order everywhere: x_1..x_r1, z_1..z_r2, zbar_1..zbar_r2. */
struct Weight {
    std::vector<int> m, n, nbar;
    int abs_m() const;
    int abs_n() const;  // sum of n_j + nbar_j
    /* exponent M_t of each factor in the order above */
    std::vector<int> factors() const;
    void check(const Signature& s) const;
    bool is_trivial() const;
};

/* A section w_{k,l} with fiber forms.  Bit t of mask marks the 1-form of factor t. */
struct Monomial {
    std::vector<int> k;  // per factor, 0 <= k_t <= M_t
    std::uint32_t mask = 0;
    bool x_half_density = false;  // the dX/<X> factor of b-kernel elements
    int form_degree() const;
};

/* Kernel monomial of d_C determined by its mask: k_t = 0 with form, k_t = M_t without. */
Monomial kernel_monomial(const Weight& w, std::uint32_t mask);

struct SparseColumn {
    std::vector<std::pair<std::size_t, Rat>> entries;
};

/* Graded complex with exact rational differentials d[q] : C^q -> C^{q+1}. */
struct FiniteComplex {
    std::vector<std::vector<Monomial>> basis;
    std::vector<std::vector<SparseColumn>> d;
    std::size_t total_dim() const;
};

constexpr std::size_t kDefaultDimensionCap = 1000000;

FiniteComplex build_dC(const Signature& s, const Weight& w, std::size_t cap = kDefaultDimensionCap);

/* Exact kernel of d d* + d* d, as basis vectors per degree (coefficients on the monomial basis). */
std::vector<std::vector<std::vector<std::pair<std::size_t, Rat>>>> hodge_kernel(const FiniteComplex& c);

/* The closed-form kernel: 2^{d_K} monomials, one per mask. */
std::vector<Monomial> closed_form_kernel_dC(const Signature& s, const Weight& w);

/* Hodge kernel checked against the closed form; throws MismatchWithClosedForm. */
std::vector<Monomial> hodge_kernel_dC(const Signature& s, const Weight& w, const FiniteComplex& c);

/* Reduced character of d~_S on a kernel monomial, exact. */
std::vector<Rat> line_bundle_chars(const Signature& s, const Weight& w, const Monomial& sigma);

Rat weight_op(const Weight& w, const Monomial& sigma);

struct KernelGenerator {
    Monomial sigma;
    bool plus = false;  // the w_{m,l} family; false = the family with all dx
    int degree = 0;     // fiber form degree
    Rat exponent;       // <X> exponent in the b-kernel
};

struct KernelRecord {
    bool nontrivial = false;
    bool split_defined = true;  // false for r1 = 0, n = 0 where no +- family is singled out
    std::string condition;
    std::vector<KernelGenerator> generators;  // each tensored with H*(S)
    int base_rank = 0;
    long total_dim() const;
};

/* Closed form of the two lemmas. */
KernelRecord ker_eth_S(const Signature& s, const Weight& w);
/* Brute force: kernel monomials of d_C with zero reduced character. */
std::vector<std::uint32_t> ker_eth_S_bruteforce(const Signature& s, const Weight& w);

bool supported(const Signature& s, const Weight& w);

struct FredholmRecord {
    bool fredholm = true;
    std::vector<KernelGenerator> kernel;  // closed form
    long dimension = 0;                   // including H*(S)
};

/* NotFredholm on r1 = 0, n = 0.  The closed form is re-derived from W - d_K/2 and must agree. */
FredholmRecord fredholm_and_l2b_kernel(const Signature& s, const Weight& w);

/* Sign analysis of a single kernel monomial: decaying exponent and whether dX/<X> is attached. */
struct ExponentAnalysis {
    bool degenerate = false;  // W = d_K/2
    bool half_density = false;
    Rat exponent;
};
ExponentAnalysis analyse_exponent(const Signature& s, const Weight& w, const Monomial& sigma);

struct BoundaryCohomology {
    int top_degree = 0;
    std::vector<long> dims, plus, minus;
    KernelRecord kernel;
    bool nontrivial() const { return kernel.nontrivial; }
};

BoundaryCohomology boundary_cohomology(const Signature& s, const Weight& w);
std::vector<long> l2_halfline_cohomology(const Signature& s, const Weight& w);

enum class Acyclicity { L2AcyclicAndBoundary, Mixed, Unsupported };
std::string to_string(Acyclicity a);

struct AcyclicityStatus {
    Acyclicity status = Acyclicity::Unsupported;
    bool conjugated = false;  // decided on the conjugate weight
    std::string reason;
};
AcyclicityStatus acyclicity_status(const Signature& s, const Weight& w);

long small_rank(const Signature& s, const Weight& w, std::optional<long> l2_kernel_dim, long cusp_count);

Int binomial_weighted_sum(long p, unsigned k);

/* Statistics of the exhaustive Laplacian sweep over a grid of weights. */
struct SweepStats {
    long weights = 0;
    long elements = 0;
    long kernel_elements = 0;
    long mismatches = 0;       // kernel differs from the closed form
    long square_failures = 0;  // d^2 != 0
    long fallbacks = 0;        // weights needing the generic path
    bool ok() const { return mismatches == 0 && square_failures == 0; }
};

/* Every weight with entries <= max_entry for the signature. */
std::vector<Weight> weight_grid(const Signature& s, int max_entry);

/* Builds the Laplacian column of every basis element by composing d and d^T. */
SweepStats sweep_kernel_dC(const Signature& s, const Weight& w);
SweepStats sweep_kernel_dC_grid(const Signature& s, int max_entry, int threads);

struct LemmaTally {
    long checked = 0, mismatches = 0, skipped = 0;
    bool ok() const { return mismatches == 0; }
};

/* Everything `kostant verify` reports for one signature and weight bound. */
struct GridVerification {
    Signature signature;
    int max_entry = 0;
    SweepStats kernel_dC;
    LemmaTally kernel_S;   // closed form against the {char = 0} brute force
    LemmaTally fredholm;   // gate placement and the b-kernel exponents
    LemmaTally duality;    // b_{q,+} = b_{D-q,-}, r2 = 1 only
    long not_fredholm = 0;
    bool ok() const { return kernel_dC.ok() && kernel_S.ok() && fredholm.ok() && duality.ok(); }
};

GridVerification verify_grid(const Signature& s, int max_entry, int threads);

/* Vanishing for 2 <= k <= 8, the k = 1 values and the paired cancellation for even d_K <= 6. */
LemmaTally verify_binomial_sums();

}  // namespace cusptor::kostant

#endif
