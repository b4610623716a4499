#include "morseflow/morse.hpp"

#include <algorithm>

#include "morseflow/errors.hpp"
#include "morseflow/limits.hpp"

namespace morseflow {

namespace {

// Recurrent components of the subsystem in sinks-first order.
std::vector<int> recurrent_sinks_first(const CondensationGraph& cg) {
    std::vector<int> order;
    for (auto it = cg.topo_order.rbegin(); it != cg.topo_order.rend(); ++it)
        if (cg.recurrent[static_cast<std::size_t>(*it)]) order.push_back(*it);
    return order;
}

CellSet repeller_in(const TransitionSystem& sub_ts, const CellSet& whole, const CellSet& a_sub) {
    if (a_sub.none()) return whole;  // dual of the empty attractor
    return whole - basin(sub_ts, a_sub);
}

}  // namespace

CellSet dual_repeller(const TransitionSystem& ts, const CellSet& a_global, const CellSet& a) {
    const Subsystem sub = restrict_to(ts, a_global);
    const CellSet a_sub = sub.to_sub(a);
    if (a_sub.none() || !validate_attractor(sub.ts, a_sub).is_attractor)
        throw NotAttractorInSubsystemError();
    const CellSet whole = CellSet::full(static_cast<std::size_t>(sub.ts.n_cells));
    return sub.to_global(repeller_in(sub.ts, whole, a_sub),
                         static_cast<std::size_t>(ts.n_cells));
}

MorseDecomposition morse_decomposition(const TransitionSystem& ts, const CellSet& a_global,
                                       const std::optional<std::vector<CellSet>>& chain) {
    const std::size_t n_global = static_cast<std::size_t>(ts.n_cells);
    const Subsystem sub = restrict_to(ts, a_global);
    const CellSet whole = CellSet::full(static_cast<std::size_t>(sub.ts.n_cells));
    const CondensationGraph cg = condense(sub.ts);

    MorseDecomposition md;
    md.global_attractor = a_global;

    std::vector<CellSet> chain_sub;
    if (chain.has_value()) {
        for (const CellSet& entry : *chain) {
            const CellSet s = sub.to_sub(entry);
            if (s.count() != entry.count())
                throw ChainEntryNotAttractorError(chain_sub.size());
            if (s.none()) continue;  // implicit leading empty set
            chain_sub.push_back(s);
        }
        for (std::size_t k = 0; k < chain_sub.size(); ++k) {
            if (k > 0 && !(chain_sub[k - 1].subset_of(chain_sub[k]) &&
                           chain_sub[k - 1] != chain_sub[k]))
                throw ChainNotIncreasingError("chain entries must be strictly increasing");
            if (!validate_attractor(sub.ts, chain_sub[k]).is_attractor)
                throw ChainEntryNotAttractorError(k);
        }
        if (chain_sub.empty() || !(chain_sub.back() == whole))
            throw ChainNotIncreasingError("chain must end at the global attractor");
    } else {
        // Downset construction over prefixes of the sinks-first order.
        // reachable_recurrent[comp] lists the recurrent components a
        // component can reach, from a DP over the reverse topological order.
        const std::vector<int> order = recurrent_sinks_first(cg);
        const int m = cg.n_components();
        std::vector<std::vector<int>> comp_succ(static_cast<std::size_t>(m));
        for (const auto& [u, v] : cg.dag_edges) comp_succ[static_cast<std::size_t>(u)].push_back(v);
        std::vector<std::vector<bool>> reaches(static_cast<std::size_t>(m));
        for (auto it = cg.topo_order.rbegin(); it != cg.topo_order.rend(); ++it) {
            const int comp = *it;
            std::vector<bool> mask(static_cast<std::size_t>(m), false);
            if (cg.recurrent[static_cast<std::size_t>(comp)])
                mask[static_cast<std::size_t>(comp)] = true;
            for (int succ : comp_succ[static_cast<std::size_t>(comp)])
                for (int q = 0; q < m; ++q)
                    if (reaches[static_cast<std::size_t>(succ)][static_cast<std::size_t>(q)])
                        mask[static_cast<std::size_t>(q)] = true;
            reaches[static_cast<std::size_t>(comp)] = std::move(mask);
        }
        std::vector<bool> in_prefix(static_cast<std::size_t>(m), false);
        for (std::size_t k = 0; k < order.size(); ++k) {
            in_prefix[static_cast<std::size_t>(order[k])] = true;
            // N(D): cells that cannot reach a recurrent component outside the
            // prefix (inside the subsystem nothing escapes).
            CellSet nd(static_cast<std::size_t>(sub.ts.n_cells));
            for (int c = 0; c < sub.ts.n_cells; ++c) {
                const auto& mask = reaches[static_cast<std::size_t>(
                    cg.comp_of[static_cast<std::size_t>(c)])];
                bool ok = true;
                for (int q = 0; q < m && ok; ++q)
                    if (mask[static_cast<std::size_t>(q)] && !in_prefix[static_cast<std::size_t>(q)])
                        ok = false;
                if (ok) nd.set(static_cast<std::size_t>(c));
            }
            chain_sub.push_back(omega_limit(sub.ts, nd));
        }
    }

    const CondensationGraph full_cg = condense(ts);
    CellSet prev(static_cast<std::size_t>(sub.ts.n_cells));  // A_0 = empty
    for (std::size_t k = 0; k < chain_sub.size(); ++k) {
        const CellSet& ak = chain_sub[k];
        const CellSet repeller = repeller_in(sub.ts, whole, prev);
        md.repellers.push_back(sub.to_global(repeller, n_global));
        md.morse_sets.push_back(sub.to_global(ak & repeller, n_global));

        AttractorRecord rec;
        rec.cells = sub.to_global(ak, n_global);
        rec.absorbing = rec.cells;
        rec.basin = sub.to_global(basin(sub.ts, ak), n_global);
        for (int comp = 0; comp < full_cg.n_components(); ++comp) {
            if (!full_cg.recurrent[static_cast<std::size_t>(comp)]) continue;
            bool inside = true;
            for (int c : full_cg.components[static_cast<std::size_t>(comp)])
                if (!rec.cells.test(static_cast<std::size_t>(c))) inside = false;
            if (inside) rec.downset.push_back(comp);
        }
        md.chain.push_back(std::move(rec));
        prev = ak;
    }
    return md;
}

CellSet unstable_set(const TransitionSystem& ts, const CellSet& a_global, const CellSet& m) {
    const Subsystem sub = restrict_to(ts, a_global);
    const CellSet m_sub = sub.to_sub(m);
    return sub.to_global(reach(sub.ts, m_sub, Direction::Forward),
                         static_cast<std::size_t>(ts.n_cells));
}

MorseVerification verify_morse(const TransitionSystem& ts, const MorseDecomposition& md) {
    MorseVerification out;
    const std::size_t n_global = static_cast<std::size_t>(ts.n_cells);
    const std::size_t n = md.morse_sets.size();
    const Subsystem sub = restrict_to(ts, md.global_attractor);

    // (i) For each k, M_k equals the repeller dual to A_{k-1} inside A_k.
    out.pair_identities = md.chain.size() == n && md.repellers.size() == n;
    if (out.pair_identities) {
        CellSet prev_global(n_global);  // A_0
        for (std::size_t k = 0; k < n && out.pair_identities; ++k) {
            const CellSet& ak_global = md.chain[k].cells;
            const Subsystem in_ak = restrict_to(ts, ak_global);
            const CellSet whole_ak = CellSet::full(static_cast<std::size_t>(in_ak.ts.n_cells));
            const CellSet rep =
                repeller_in(in_ak.ts, whole_ak, in_ak.to_sub(prev_global));
            if (!(in_ak.to_global(rep, n_global) == md.morse_sets[k]))
                out.pair_identities = false;
            prev_global = ak_global;
        }
    }

    // (ii) Pairwise disjoint nonempty invariant sets in the subsystem.
    out.disjoint_invariant = true;
    for (std::size_t i = 0; i < n; ++i) {
        const CellSet mi = sub.to_sub(md.morse_sets[i]);
        if (mi.none() || !invariance(sub.ts, mi).invariant) out.disjoint_invariant = false;
        for (std::size_t j = i + 1; j < n; ++j)
            if (md.morse_sets[i].intersects(md.morse_sets[j])) out.disjoint_invariant = false;
    }

    // (iii) Connections only run from higher to lower index, and every cell
    // outside the Morse sets lies on such a connection.
    out.connection_order = true;
    std::vector<CellSet> fwd(n), bwd(n);
    for (std::size_t i = 0; i < n; ++i) {
        fwd[i] = reach(sub.ts, sub.to_sub(md.morse_sets[i]), Direction::Forward);
        bwd[i] = reach(sub.ts, sub.to_sub(md.morse_sets[i]), Direction::Backward);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (fwd[i].intersects(sub.to_sub(md.morse_sets[j]))) out.connection_order = false;
    CellSet covered(static_cast<std::size_t>(sub.ts.n_cells));
    for (std::size_t i = 0; i < n; ++i) covered |= sub.to_sub(md.morse_sets[i]);
    const CellSet connecting = covered.complement();
    connecting.for_each([&](int c) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (fwd[j].test(static_cast<std::size_t>(c)) &&
                    bwd[i].test(static_cast<std::size_t>(c)))
                    return;  // lies on a path M_j -> M_i with i < j
        out.connection_order = false;
    });

    // (iv) A_k is the union of the unstable sets of M_1..M_k.
    out.reconstruction = md.chain.size() == n;
    if (out.reconstruction) {
        CellSet acc(n_global);
        for (std::size_t k = 0; k < n; ++k) {
            acc |= unstable_set(ts, md.global_attractor, md.morse_sets[k]);
            if (!(acc == md.chain[k].cells)) out.reconstruction = false;
        }
        if (n > 0 && !(md.chain.back().cells == md.global_attractor)) out.reconstruction = false;
    }

    // (v) Chain attractors are attractors of the full system as well.
    out.attractors_in_full = true;
    for (const AttractorRecord& rec : md.chain)
        if (!validate_attractor(ts, rec.cells).is_attractor) out.attractors_in_full = false;

    return out;
}

std::vector<std::pair<int, int>> morse_connections(const TransitionSystem& ts,
                                                   const MorseDecomposition& md) {
    const std::size_t n = md.morse_sets.size();
    const Subsystem sub = restrict_to(ts, md.global_attractor);
    std::vector<std::vector<bool>> reaches(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        const CellSet f = reach(sub.ts, sub.to_sub(md.morse_sets[i]), Direction::Forward);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && f.intersects(sub.to_sub(md.morse_sets[j]))) reaches[i][j] = true;
    }
    // Transitive reduction of the (acyclic) reachability relation.
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!reaches[i][j]) continue;
            bool shortcut = false;
            for (std::size_t k = 0; k < n && !shortcut; ++k)
                if (k != i && k != j && reaches[i][k] && reaches[k][j]) shortcut = true;
            if (!shortcut) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return edges;
}

}  // namespace morseflow
