#include "morseflow/limits.hpp"

#include <unordered_map>
#include <vector>

#include "morseflow/errors.hpp"

namespace morseflow {

namespace {

// Iterates S, F(S), F^2(S), ... until the first repeated set and returns the
// sequence together with the repeat structure: sets[k] for k in [0, first
// repeat), and cycle_start such that sets[cycle_start] recurs right after the
// last stored element. For functional graphs the transient and period are
// both at most n; for multivalued inputs the detection is unbounded, so the
// 4n soft cap only sizes the initial reservation.
struct ImageSequence {
    std::vector<CellSet> sets;
    std::size_t cycle_start = 0;
};

ImageSequence iterate_images(const TransitionSystem& ts, const CellSet& seed) {
    ImageSequence seq;
    std::unordered_map<CellSet, std::size_t, CellSetHash> seen;
    seq.sets.reserve(std::min<std::size_t>(4 * static_cast<std::size_t>(ts.n_cells) + 4, 4096));
    CellSet cur = seed;
    for (;;) {
        auto [it, inserted] = seen.emplace(cur, seq.sets.size());
        if (!inserted) {
            seq.cycle_start = it->second;
            return seq;
        }
        seq.sets.push_back(cur);
        cur = ts.image(cur);
    }
}

}  // namespace

CellSet omega_limit(const TransitionSystem& ts, const CellSet& seed) {
    if (seed.none()) throw EmptyInputError();
    const ImageSequence seq = iterate_images(ts, seed);
    CellSet out(static_cast<std::size_t>(ts.n_cells));
    for (std::size_t k = seq.cycle_start; k < seq.sets.size(); ++k) out |= seq.sets[k];
    return out;
}

CellSet omega_intersection_form(const TransitionSystem& ts, const CellSet& seed) {
    if (seed.none()) throw EmptyInputError();
    const ImageSequence seq = iterate_images(ts, seed);
    // Tail unions T_m = U_{k>=m} F^k(S). Beyond the stored prefix the
    // sequence cycles, so every tail contains the full cycle union; building
    // T_m backwards from the cycle union makes each one exact.
    CellSet tail(static_cast<std::size_t>(ts.n_cells));
    for (std::size_t k = seq.cycle_start; k < seq.sets.size(); ++k) tail |= seq.sets[k];
    CellSet result = tail;
    for (std::size_t m = seq.sets.size(); m-- > 0;) {
        tail |= seq.sets[m];
        result &= tail;
    }
    return result;
}

CellSet alpha_limit(const TransitionSystem& ts, const CellSet& seed) {
    if (seed.none()) throw EmptyInputError();
    const CellSet upstream = reach(ts, seed, Direction::Backward);
    // Cells lying on a cycle: recurrent components of the condensation.
    const CondensationGraph cg = condense(ts);
    CellSet out(static_cast<std::size_t>(ts.n_cells));
    upstream.for_each([&](int c) {
        if (cg.recurrent[static_cast<std::size_t>(cg.comp_of[static_cast<std::size_t>(c)])])
            out.set(static_cast<std::size_t>(c));
    });
    return out;
}

InvarianceReport invariance(const TransitionSystem& ts, const CellSet& s) {
    const CellSet img = ts.image(s);
    InvarianceReport r;
    r.positively_invariant = img.subset_of(s);
    r.negatively_invariant = s.subset_of(img);
    r.invariant = r.positively_invariant && r.negatively_invariant;
    return r;
}

}  // namespace morseflow
