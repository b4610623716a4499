#ifndef MORSEFLOW_MORSE_HPP_
#define MORSEFLOW_MORSE_HPP_

#include <optional>
#include <vector>

#include "morseflow/attractors.hpp"
#include "morseflow/cellset.hpp"
#include "morseflow/transition.hpp"

namespace morseflow {

// Morse decomposition of a global attractor: an increasing chain of
// attractors of the subsystem on the global attractor, the dual repellers,
// and the Morse sets M_k = A_k intersect A*_{k-1}.
struct MorseDecomposition {
    CellSet global_attractor;
    std::vector<AttractorRecord> chain;  // A_1 .. A_n (A_0 = empty set implied)
    std::vector<CellSet> morse_sets;     // M_1 .. M_n
    std::vector<CellSet> repellers;      // A*_0 .. A*_{n-1}
};

// A* = 𝒜 \ Ω_𝒜(A), computed in the subsystem restricted to a_global.
// Pre: a is an attractor of that subsystem.
CellSet dual_repeller(const TransitionSystem& ts, const CellSet& a_global, const CellSet& a);

// Default chain: the downset construction applied to the first k recurrent
// components of the subsystem on a_global, taken in reverse topological
// order (sinks first, ties by smallest cell index). A caller-provided chain
// must be strictly increasing, end at a_global, and every entry must
// validate as an attractor of the subsystem.
MorseDecomposition morse_decomposition(const TransitionSystem& ts, const CellSet& a_global,
                                       const std::optional<std::vector<CellSet>>& chain =
                                           std::nullopt);

// W^u(M): cells of a_global admitting a backward path inside a_global whose
// path-limsup lies in M. For invariant M this is the forward reach of M in
// the subsystem.
CellSet unstable_set(const TransitionSystem& ts, const CellSet& a_global, const CellSet& m);

struct MorseVerification {
    bool pair_identities = false;       // (i)  M_k is the repeller dual to A_{k-1} in A_k
    bool disjoint_invariant = false;    // (ii) pairwise disjoint, invariant in the subsystem
    bool connection_order = false;      // (iii) no path M_i -> M_j for i<j; connecting cells
                                        //       lie on some M_j -> M_i path with i<j
    bool reconstruction = false;        // (iv) A_k = union of W^u(M_i), i<=k
    bool attractors_in_full = false;    // (v)  chain attractors validate in the full system

    bool all() const {
        return pair_identities && disjoint_invariant && connection_order && reconstruction &&
               attractors_in_full;
    }
};

MorseVerification verify_morse(const TransitionSystem& ts, const MorseDecomposition& md);

// Reachability edges between Morse sets (higher index -> lower), transitively
// reduced; this is the Morse graph rendered by the DOT emitter.
std::vector<std::pair<int, int>> morse_connections(const TransitionSystem& ts,
                                                   const MorseDecomposition& md);

}  // namespace morseflow

#endif  // MORSEFLOW_MORSE_HPP_
