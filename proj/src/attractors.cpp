#include "morseflow/attractors.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "morseflow/errors.hpp"
#include "morseflow/limits.hpp"

namespace morseflow {

namespace {

// Checks the absorbing property of N and reports the offending cell of the
// eventual image cycle when it fails. Escape is checked on the full forward
// closure: attraction requires every branch to stay in the carrier forever.
struct AbsorbingCheck {
    bool escape_free = false;
    int escaping_cell = -1;
    bool absorbing = false;
    int offending_cell = -1;
};

AbsorbingCheck check_absorbing(const TransitionSystem& ts, const CellSet& n) {
    AbsorbingCheck out;
    const CellSet closure = reach(ts, n, Direction::Forward);
    for (int c : closure.to_vector()) {
        if (ts.escape_flag[static_cast<std::size_t>(c)]) {
            out.escaping_cell = c;
            return out;
        }
    }
    out.escape_free = true;

    // F^t(N) must lie inside N for all t past some t0: every set of the
    // eventual image cycle has to be contained in N.
    std::unordered_map<CellSet, std::size_t, CellSetHash> seen;
    std::vector<CellSet> sets;
    CellSet cur = n;
    std::size_t cycle_start = 0;
    for (;;) {
        auto [it, inserted] = seen.emplace(cur, sets.size());
        if (!inserted) {
            cycle_start = it->second;
            break;
        }
        sets.push_back(cur);
        cur = ts.image(cur);
    }
    for (std::size_t k = cycle_start; k < sets.size(); ++k) {
        if (!sets[k].subset_of(n)) {
            out.offending_cell = (sets[k] - n).first();
            return out;
        }
    }
    out.absorbing = true;
    return out;
}

std::vector<int> downset_components(const CondensationGraph& cg, const CellSet& cells) {
    std::vector<int> ids;
    for (int comp = 0; comp < cg.n_components(); ++comp) {
        if (!cg.recurrent[static_cast<std::size_t>(comp)]) continue;
        const auto& members = cg.components[static_cast<std::size_t>(comp)];
        bool inside = true;
        for (int c : members)
            if (!cells.test(static_cast<std::size_t>(c))) {
                inside = false;
                break;
            }
        if (inside) ids.push_back(comp);
    }
    return ids;
}

AttractorRecord make_record(const TransitionSystem& ts, const CondensationGraph& cg,
                            CellSet cells, CellSet witness) {
    AttractorRecord rec;
    rec.cells = std::move(cells);
    rec.absorbing = std::move(witness);
    rec.basin = basin(ts, rec.cells);
    rec.downset = downset_components(cg, rec.cells);
    return rec;
}

}  // namespace

CellSet basin(const TransitionSystem& ts, const CellSet& a) {
    if (!ts.image(a).subset_of(a)) throw NotForwardClosedError();
    const std::size_t n = static_cast<std::size_t>(ts.n_cells);

    // Work in the subgraph with A deleted. Bad seeds: cells of a cycle
    // avoiding A, and cells with an escape edge. Everything reaching a bad
    // seed while avoiding A is outside the basin.
    CellSet outside = a.complement();
    const Subsystem sub = restrict_to(ts, outside);
    // restrict_to turns edges into A into subsystem escape edges; those are
    // fine (the orbit got absorbed), so recompute escape from the original
    // flags and the genuine cycles of the A-free subgraph.
    const CondensationGraph cg = condense(sub.ts);
    CellSet bad(sub.old_of_new.size());
    for (int i = 0; i < sub.ts.n_cells; ++i) {
        const int c = sub.old_of_new[static_cast<std::size_t>(i)];
        if (ts.escape_flag[static_cast<std::size_t>(c)]) bad.set(static_cast<std::size_t>(i));
        if (cg.recurrent[static_cast<std::size_t>(cg.comp_of[static_cast<std::size_t>(i)])])
            bad.set(static_cast<std::size_t>(i));
    }
    if (bad.none()) return CellSet::full(n);  // every orbit is absorbed
    const CellSet bad_closure = reach(sub.ts, bad, Direction::Backward);
    CellSet result = CellSet::full(n);
    bad_closure.for_each([&](int i) {
        result.reset(static_cast<std::size_t>(sub.old_of_new[static_cast<std::size_t>(i)]));
    });
    return result;
}

bool is_stable(const TransitionSystem& ts, const CellSet& a) {
    return ts.image(a).subset_of(a);
}

AttractorRecord attractor_from_absorbing(const TransitionSystem& ts, const CellSet& n) {
    if (n.none()) throw EmptyInputError();
    const AbsorbingCheck chk = check_absorbing(ts, n);
    if (!chk.escape_free) throw EscapesDomainError(chk.escaping_cell);
    if (!chk.absorbing) throw NotAbsorbingError(chk.offending_cell);
    const CondensationGraph cg = condense(ts);
    return make_record(ts, cg, omega_limit(ts, n), n);
}

AttractorValidation validate_attractor(const TransitionSystem& ts, const CellSet& a) {
    AttractorValidation v;
    if (a.none()) return v;
    const CellSet img = ts.image(a);
    v.invariant = img == a;

    std::vector<CellSet> candidates;
    candidates.push_back(a);
    CellSet collar = a | ts.preimage(a);
    candidates.push_back(collar);
    if (img.subset_of(a)) candidates.push_back(basin(ts, a));

    for (const CellSet& n : candidates) {
        if (!a.subset_of(n)) continue;
        const AbsorbingCheck chk = check_absorbing(ts, n);
        if (!chk.escape_free || !chk.absorbing) continue;
        v.absorbing_witness_found = true;
        if (omega_limit(ts, n) == a) {
            v.maximal_in_witness = true;
            break;
        }
    }
    v.is_attractor = v.invariant && v.absorbing_witness_found && v.maximal_in_witness;
    return v;
}

AttractorLattice attractor_lattice(const TransitionSystem& ts, const CondensationGraph& cg,
                                   std::size_t cap) {
    const std::size_t n = static_cast<std::size_t>(ts.n_cells);
    AttractorLattice lat;

    // Reachable recurrent components and escape reachability per component,
    // by dynamic programming over the reverse topological order.
    const int m = cg.n_components();
    std::vector<int> recurrent_ids;
    std::vector<int> bit_of_comp(static_cast<std::size_t>(m), -1);
    for (int comp : cg.topo_order) {
        if (cg.recurrent[static_cast<std::size_t>(comp)]) {
            bit_of_comp[static_cast<std::size_t>(comp)] =
                static_cast<int>(recurrent_ids.size());
            recurrent_ids.push_back(comp);
        }
    }
    if (recurrent_ids.size() > 64) {
        // The downset bitmask representation covers 64 recurrent components;
        // beyond that the lattice is astronomically large anyway.
        lat.truncated = true;
        recurrent_ids.resize(64);
    }

    std::vector<std::vector<int>> comp_succ(static_cast<std::size_t>(m));
    for (const auto& [u, v] : cg.dag_edges) comp_succ[static_cast<std::size_t>(u)].push_back(v);

    std::vector<std::uint64_t> reach_mask(static_cast<std::size_t>(m), 0);
    std::vector<bool> reaches_escape(static_cast<std::size_t>(m), false);
    for (auto it = cg.topo_order.rbegin(); it != cg.topo_order.rend(); ++it) {
        const int comp = *it;
        std::uint64_t mask = 0;
        bool esc = false;
        const int bit = bit_of_comp[static_cast<std::size_t>(comp)];
        if (bit >= 0 && bit < 64) mask |= std::uint64_t(1) << bit;
        for (int c : cg.components[static_cast<std::size_t>(comp)])
            if (ts.escape_flag[static_cast<std::size_t>(c)]) esc = true;
        for (int succ : comp_succ[static_cast<std::size_t>(comp)]) {
            mask |= reach_mask[static_cast<std::size_t>(succ)];
            if (reaches_escape[static_cast<std::size_t>(succ)]) esc = true;
        }
        reach_mask[static_cast<std::size_t>(comp)] = mask;
        reaches_escape[static_cast<std::size_t>(comp)] = esc;
    }

    // Eligible components: recurrent with escape-free forward closure.
    std::vector<int> eligible;  // bit positions
    for (std::size_t b = 0; b < recurrent_ids.size(); ++b) {
        const int comp = recurrent_ids[b];
        if (!reaches_escape[static_cast<std::size_t>(comp)]) eligible.push_back(static_cast<int>(b));
    }

    // Downsets over the reaches-relation among eligible recurrent components,
    // enumerated breadth-first by size and deduplicated.
    std::vector<std::uint64_t> downsets;
    std::unordered_set<std::uint64_t> seen{0};
    std::deque<std::uint64_t> queue{0};
    bool capped = false;
    while (!queue.empty()) {
        const std::uint64_t d = queue.front();
        queue.pop_front();
        for (int b : eligible) {
            const std::uint64_t bit = std::uint64_t(1) << b;
            if (d & bit) continue;
            const std::uint64_t below =
                reach_mask[static_cast<std::size_t>(recurrent_ids[static_cast<std::size_t>(b)])] &
                ~bit;
            if ((below & ~d) != 0) continue;  // not downward closed yet
            const std::uint64_t next = d | bit;
            if (!seen.insert(next).second) continue;
            if (downsets.size() >= cap) {
                capped = true;
                continue;
            }
            downsets.push_back(next);
            queue.push_back(next);
        }
    }
    lat.truncated = lat.truncated || capped;
    std::sort(downsets.begin(), downsets.end(), [](std::uint64_t a, std::uint64_t b) {
        const int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
        return pa != pb ? pa < pb : a < b;
    });

    // Per-cell reachability data for N(D) membership.
    std::vector<std::uint64_t> cell_mask(n, 0);
    std::vector<bool> cell_escapes(n, false);
    for (int c = 0; c < ts.n_cells; ++c) {
        const int comp = cg.comp_of[static_cast<std::size_t>(c)];
        cell_mask[static_cast<std::size_t>(c)] = reach_mask[static_cast<std::size_t>(comp)];
        cell_escapes[static_cast<std::size_t>(c)] =
            reaches_escape[static_cast<std::size_t>(comp)];
    }

    for (const std::uint64_t d : downsets) {
        CellSet nd(n);
        for (std::size_t c = 0; c < n; ++c)
            if (!cell_escapes[c] && (cell_mask[c] & ~d) == 0) nd.set(c);
        if (nd.none()) continue;
        AttractorRecord rec = make_record(ts, cg, omega_limit(ts, nd), nd);
        lat.attractors.push_back(std::move(rec));
    }
    return lat;
}

}  // namespace morseflow
