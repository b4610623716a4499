#ifndef MORSEFLOW_LIMITS_HPP_
#define MORSEFLOW_LIMITS_HPP_

#include "morseflow/cellset.hpp"
#include "morseflow/transition.hpp"

namespace morseflow {

// omega_limit(S) = limsup_k F^k(S): cells appearing in F^k(S) for infinitely
// many k. The image sequence is eventually periodic; the result is the union
// over one full period. Escaping branches contribute nothing.
CellSet omega_limit(const TransitionSystem& ts, const CellSet& seed);

// The intersection form from the alternative definition: the intersection
// over m of the tail unions U_{k>=m} F^k(S). Computed by materializing the
// tail unions explicitly, so it serves as an independent route to the same
// value as omega_limit.
CellSet omega_intersection_form(const TransitionSystem& ts, const CellSet& seed);

// alpha_limit(S): union over all infinite backward paths through S of the
// cells the path visits infinitely often. Equals the cells of recurrent
// components that reach S. This is the per-solution alpha of the underlying
// theory, unioned over solutions; it is coarser than the limsup of backward
// set images when transient cells are revisited by distinct paths.
CellSet alpha_limit(const TransitionSystem& ts, const CellSet& seed);

struct InvarianceReport {
    bool positively_invariant = false;  // F(S) subset of S
    bool negatively_invariant = false;  // S subset of F(S)
    bool invariant = false;             // F(S) == S
};

InvarianceReport invariance(const TransitionSystem& ts, const CellSet& s);

}  // namespace morseflow

#endif  // MORSEFLOW_LIMITS_HPP_
