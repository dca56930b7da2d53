#ifndef LCR_CYCLES_HPP
#define LCR_CYCLES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcr/edge_type.hpp"
#include "lcr/graph.hpp"
#include "lcr/model.hpp"

namespace lcr::cycles {

// Edge pattern along the directed tour i1 -> i2 -> ... -> im -> i1: codes[k]
// is the type of the ordered pair (i_{k+1}, i_{k+2}) (0-based positions).
struct CyclePattern {
    explicit CyclePattern(std::vector<EdgeType> c);
    std::vector<EdgeType> codes;

    int length() const { return static_cast<int>(codes.size()); }
    bool operator==(const CyclePattern& o) const { return codes == o.codes; }

    std::string to_string() const;                       // "11,00,01,00"
    static CyclePattern parse(const std::string& text);  // inverse of to_string

    CyclePattern rotated(int r) const;
    // Tour reversal: the same set of labelled edges walked backwards, which
    // reverses the code sequence and transposes each code.
    CyclePattern reversed() const;
    // Lexicographically smallest pattern over all rotations and reversals.
    CyclePattern canonical() const;
};

// Symbolic exponents of the tour product of rank-structured factors:
// code 00 contributes nothing; 10 on edge k->k+1 contributes mu at position k
// and nu at position k+1; 01 the opposite; 11 contributes mu and nu at both
// endpoints plus one power of e^rho.
struct CycleMonomial {
    std::vector<int> mu_exp;
    std::vector<int> nu_exp;
    int rho_power = 0;

    bool same_mu_nu(const CycleMonomial& o) const {
        return mu_exp == o.mu_exp && nu_exp == o.nu_exp;
    }

    // Evaluate at concrete node assignments and PLR values.
    double evaluate(const model::PlrQuantities& plr, double rho,
                    const std::vector<int>& nodes) const;
};

CycleMonomial monomial(const CyclePattern& pattern);

// Patterns whose expected-count ratio is exactly e^{c0 rho}: identical mu/nu
// exponents and rho powers differing by c0 > 0.
struct CancellationPair {
    CyclePattern a;
    CyclePattern b;
    int c0 = 0;
    int class_id = 0;  // 1-based index within pair_search output
};

// Returns c0 > 0 when (a, b) cancels; nullopt otherwise (including c0 <= 0).
std::optional<int> is_cancellation_pair(const CyclePattern& a, const CyclePattern& b);

// Exhaustive search over S_m x S_m, reduced modulo pattern isomorphism
// (rotation, and tour reversal with 10<->01 transposition, applied to a and b
// independently). Representatives are the lexicographic minima of each class,
// ordered by (c0, a, b). Supported for 3 <= m <= 8; odd m yields an empty set.
std::vector<CancellationPair> pair_search(int m);

// The three length-4 classes with fixed representatives: id 1 is the default
// (11,00,01,00) / (10,10,00,10) with c0 = 1, id 2 has c0 = 2, id 3 has c0 = 1.
std::vector<CancellationPair> quad_pairs();
CancellationPair default_pair();
CancellationPair quad_pair(int id);  // id in {1, 2, 3}

// Exact ordered-tuple count over distinct indices (raw sum, no isomorphism
// correction). Capacity-gated: n^m must stay within a small enumeration
// budget (n <= 14 at m = 4).
std::int64_t brute_force_count(const graph::DirectedGraph& g, const CyclePattern& pattern);

// Exact expected count: the same sum with each indicator replaced by its
// dyad-type probability. Capacity-gated (n <= 60 at m = 4).
double expected_count(const model::ModelParams& params, const CyclePattern& pattern);

// Exact count via the trace identity, with every 00 factor expanded as
// (all-ones - identity - any-edge) so only sparse structures, rank-one
// contractions and degree vectors are combined: O(n^2 + sum_i d_i^2), never a
// dense matrix product. Length-4 patterns only, and only patterns for which
// coincident tour indices force a zero factor (true for all pair_search(4)
// classes; checked, throws std::invalid_argument otherwise).
std::int64_t fast_count(const graph::DirectedGraph& g, const CyclePattern& pattern);

struct PairCounts {
    std::int64_t qa = 0;
    std::int64_t qb = 0;
};

PairCounts fast_count_pair(const graph::DirectedGraph& g, const CancellationPair& pair);

// Test hook: when nonzero, the constant is added to one complement-expansion
// term inside fast_count, so exact-equality oracles must fail.
extern int fast_count_fault_injection;

}  // namespace lcr::cycles

#endif
