#ifndef MORSEFLOW_TRANSITION_HPP_
#define MORSEFLOW_TRANSITION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "morseflow/cellset.hpp"
#include "morseflow/grid.hpp"
#include "morseflow/system.hpp"

namespace morseflow {

inline constexpr std::size_t kDefaultCellCap = std::size_t(1) << 24;

enum class TransitionOrigin { FromMap, FromDigraph, FromOde };

// Combinatorial enclosure of a system: cells plus a multivalued successor
// relation. Escape is a single absorbing pseudo-cell, represented by the
// per-cell escape flag rather than an explicit node; it is excluded from
// every invariant-set computation.
//
// Cells with no successors and no escape flag cannot occur: a cell whose
// future is undefined is routed to the escape sink (local-semiflow reading).
struct TransitionSystem {
    int n_cells = 0;
    std::vector<std::vector<int>> successors;  // sorted, duplicate-free
    std::vector<std::vector<int>> predecessors;
    std::vector<bool> escape_flag;

    TransitionOrigin origin = TransitionOrigin::FromDigraph;
    double tau = 0.0;
    double bloat = 0.0;
    int samples_per_axis = 0;

    std::vector<std::string> labels;  // finite kinds; empty for ode
    std::optional<Grid> grid;         // ode only

    bool deterministic = false;  // out-degree exactly 1 (or pure escape) everywhere
    std::size_t edge_count = 0;

    CellSet escaping_cells() const {
        CellSet s(static_cast<std::size_t>(n_cells));
        for (int c = 0; c < n_cells; ++c)
            if (escape_flag[static_cast<std::size_t>(c)]) s.set(static_cast<std::size_t>(c));
        return s;
    }

    // Forward image F(S): union of successors, escape branches dropped.
    CellSet image(const CellSet& s) const;

    // Strong preimage is not needed; this is the plain preimage.
    CellSet preimage(const CellSet& s) const;
};

struct BuildOptions {
    double bloat = 1.0;
    int samples_per_axis = 3;
    std::size_t cell_cap = kDefaultCellCap;
    int threads = 0;  // 0: use hardware concurrency
};

// Faithful embedding for finite kinds; for ode kind, the outer approximation
// of the time-tau map: successors of a cell are all cells intersecting the
// bloat-inflated bounding box of the sampled tau-images of the cell, and a
// cell whose sample escapes (domain, magnitude cap, or grid box exit) gets
// the escape flag.
TransitionSystem build_transitions(const SystemSpec& spec);
TransitionSystem build_transitions(const SystemSpec& spec, const Grid& grid, double tau,
                                   const BuildOptions& opt = {});

enum class Direction { Forward, Backward };

// Cells reachable from (forward) or reaching (backward) S, inclusive of S.
CellSet reach(const TransitionSystem& ts, const CellSet& seed, Direction dir);

// SCC condensation of the successor digraph. Components partition all cells;
// the escape sink is not a node. A component is recurrent when it has an
// internal edge (self-looped singletons included).
struct CondensationGraph {
    std::vector<int> comp_of;                  // cell -> component id
    std::vector<std::vector<int>> components;  // sorted cell lists
    std::vector<bool> recurrent;
    std::vector<std::pair<int, int>> dag_edges;  // component-level, deduplicated
    std::vector<int> topo_order;                 // sources first

    int n_components() const { return static_cast<int>(components.size()); }

    CellSet component_cells(int comp, std::size_t n_cells) const {
        return CellSet::of(n_cells, components[static_cast<std::size_t>(comp)]);
    }
};

CondensationGraph condense(const TransitionSystem& ts);

// Subsystem on a cell mask, with cell re-indexing. old_of_new[i] is the
// global index of subsystem cell i; new_of_old is -1 off the mask.
// Successor edges leaving the mask become escape edges of the subsystem.
struct Subsystem {
    TransitionSystem ts;
    std::vector<int> old_of_new;
    std::vector<int> new_of_old;

    CellSet to_sub(const CellSet& global) const;
    CellSet to_global(const CellSet& sub, std::size_t n_global) const;
};

Subsystem restrict_to(const TransitionSystem& ts, const CellSet& mask);

}  // namespace morseflow

#endif  // MORSEFLOW_TRANSITION_HPP_
