#ifndef MORSEFLOW_ATTRACTORS_HPP_
#define MORSEFLOW_ATTRACTORS_HPP_

#include <cstdint>
#include <vector>

#include "morseflow/cellset.hpp"
#include "morseflow/transition.hpp"

namespace morseflow {

struct AttractorRecord {
    CellSet cells;      // the attractor
    CellSet absorbing;  // witnessing absorbing neighborhood N
    CellSet basin;      // region of attraction
    std::vector<int> downset;  // recurrent component ids (condensation) inside
};

// Absorbing here means: no orbit branch from N ever reaches the escape sink,
// and there is a t0 <= n_cells with F^t(N) inside N for every t >= t0.
// Returns omega(N) with witness N. Throws NotAbsorbingError / EscapesDomainError.
AttractorRecord attractor_from_absorbing(const TransitionSystem& ts, const CellSet& n);

struct AttractorValidation {
    bool invariant = false;               // F(A) == A
    bool absorbing_witness_found = false; // some absorbing N containing A exists
    bool maximal_in_witness = false;      // omega(N) == A for that witness
    bool is_attractor = false;
};

// Witness search tries A itself, then A plus its one-cell in-neighborhood
// collar, then basin(A).
AttractorValidation validate_attractor(const TransitionSystem& ts, const CellSet& a);

// Region of attraction of a forward-closed A: complement of the cells that
// can reach, avoiding A, a cycle disjoint from A or the escape sink.
// Throws NotForwardClosedError when F(A) is not contained in A.
CellSet basin(const TransitionSystem& ts, const CellSet& a);

// Combinatorial stability: F(A) inside A (arbitrarily tight forward-invariant
// neighborhoods degenerate to the set itself at cell resolution).
bool is_stable(const TransitionSystem& ts, const CellSet& a);

struct AttractorLattice {
    std::vector<AttractorRecord> attractors;  // inclusion-compatible order
    bool truncated = false;                   // downset count exceeded the cap
};

// One attractor per nonempty reachability-downward-closed set of eligible
// recurrent components (those whose forward closure is escape-free); the full
// downset yields the global attractor of the non-escaping part.
AttractorLattice attractor_lattice(const TransitionSystem& ts, const CondensationGraph& cg,
                                   std::size_t cap = 4096);

}  // namespace morseflow

#endif  // MORSEFLOW_ATTRACTORS_HPP_
