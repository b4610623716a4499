#include "morseflow/transition.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "morseflow/errors.hpp"

namespace morseflow {

namespace {

void finalize(TransitionSystem& ts) {
    ts.edge_count = 0;
    ts.deterministic = true;
    for (int c = 0; c < ts.n_cells; ++c) {
        auto& succ = ts.successors[static_cast<std::size_t>(c)];
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        ts.edge_count += succ.size();
        // A cell with no future is routed to the escape sink.
        if (succ.empty() && !ts.escape_flag[static_cast<std::size_t>(c)])
            ts.escape_flag[static_cast<std::size_t>(c)] = true;
        if (succ.size() > 1) ts.deterministic = false;
    }
    ts.predecessors.assign(static_cast<std::size_t>(ts.n_cells), {});
    for (int c = 0; c < ts.n_cells; ++c)
        for (int s : ts.successors[static_cast<std::size_t>(c)])
            ts.predecessors[static_cast<std::size_t>(s)].push_back(c);
    for (auto& preds : ts.predecessors) std::sort(preds.begin(), preds.end());
}

TransitionSystem from_finite(const SystemSpec& spec) {
    TransitionSystem ts;
    ts.n_cells = static_cast<int>(spec.states.size());
    ts.successors.assign(static_cast<std::size_t>(ts.n_cells), {});
    ts.escape_flag.assign(static_cast<std::size_t>(ts.n_cells), false);
    ts.labels = spec.states;
    if (spec.kind == SystemKind::FiniteMap) {
        ts.origin = TransitionOrigin::FromMap;
        for (int c = 0; c < ts.n_cells; ++c)
            ts.successors[static_cast<std::size_t>(c)].push_back(
                spec.map[static_cast<std::size_t>(c)]);
    } else {
        ts.origin = TransitionOrigin::FromDigraph;
        for (const auto& [u, v] : spec.edges)
            ts.successors[static_cast<std::size_t>(u)].push_back(v);
    }
    finalize(ts);
    return ts;
}

struct CellResult {
    std::vector<int> successors;
    bool escape = false;
};

CellResult compute_cell(const SystemSpec& spec, const Grid& grid, double tau,
                        const BuildOptions& opt, std::int64_t cell) {
    CellResult out;
    const int dim = grid.dim();
    const int s = opt.samples_per_axis;
    const auto bounds = grid.cell_bounds(cell);

    std::vector<double> blo(static_cast<std::size_t>(dim)), bhi(static_cast<std::size_t>(dim));
    bool have_image = false;

    std::vector<double> p(static_cast<std::size_t>(dim));
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    const std::int64_t n_samples = [&] {
        std::int64_t n = 1;
        for (int k = 0; k < dim; ++k) n *= s;
        return n;
    }();

    for (std::int64_t it = 0; it < n_samples; ++it) {
        for (int k = 0; k < dim; ++k) {
            const auto& [lo, hi] = bounds[static_cast<std::size_t>(k)];
            p[static_cast<std::size_t>(k)] =
                lo + (hi - lo) * static_cast<double>(idx[static_cast<std::size_t>(k)]) /
                         static_cast<double>(s - 1);
        }
        bool sample_escaped = false;
        EvolveResult r;
        try {
            r = evolve(spec, p, tau);
            // Leaving the carrier box also counts as escape at cell level.
            sample_escaped = r.escaped() || !grid.cell_of_point(r.point).has_value();
        } catch (const OutOfDomainError&) {
            // The carrier pokes out of the semiflow's domain; this branch
            // escapes immediately.
            sample_escaped = true;
        }
        if (sample_escaped) {
            out.escape = true;
        } else if (!have_image) {
            for (int k = 0; k < dim; ++k)
                blo[static_cast<std::size_t>(k)] = bhi[static_cast<std::size_t>(k)] =
                    r.point[static_cast<std::size_t>(k)];
            have_image = true;
        } else {
            for (int k = 0; k < dim; ++k) {
                blo[static_cast<std::size_t>(k)] =
                    std::min(blo[static_cast<std::size_t>(k)], r.point[static_cast<std::size_t>(k)]);
                bhi[static_cast<std::size_t>(k)] =
                    std::max(bhi[static_cast<std::size_t>(k)], r.point[static_cast<std::size_t>(k)]);
            }
        }
        for (int k = 0; k < dim; ++k) {
            if (++idx[static_cast<std::size_t>(k)] < s) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }

    if (!have_image) return out;  // every sample escaped

    // Successors: cells intersecting the bloat-inflated bounding box.
    std::vector<std::int64_t> ilo(static_cast<std::size_t>(dim)), ihi(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const double w = grid.width(k);
        const double lo = grid.box()[static_cast<std::size_t>(k)][0];
        const double a = blo[static_cast<std::size_t>(k)] - opt.bloat * w;
        const double b = bhi[static_cast<std::size_t>(k)] + opt.bloat * w;
        std::int64_t i0 = static_cast<std::int64_t>(std::floor((a - lo) / w));
        std::int64_t i1 = static_cast<std::int64_t>(std::floor((b - lo) / w));
        i0 = std::clamp<std::int64_t>(i0, 0, grid.cells_per_axis() - 1);
        i1 = std::clamp<std::int64_t>(i1, 0, grid.cells_per_axis() - 1);
        ilo[static_cast<std::size_t>(k)] = i0;
        ihi[static_cast<std::size_t>(k)] = i1;
    }
    std::vector<std::int64_t> m(ilo.begin(), ilo.end());
    for (;;) {
        out.successors.push_back(static_cast<int>(grid.linear_index(m)));
        int k = 0;
        for (; k < dim; ++k) {
            if (++m[static_cast<std::size_t>(k)] <= ihi[static_cast<std::size_t>(k)]) break;
            m[static_cast<std::size_t>(k)] = ilo[static_cast<std::size_t>(k)];
        }
        if (k == dim) break;
    }
    return out;
}

}  // namespace

CellSet TransitionSystem::image(const CellSet& s) const {
    CellSet out(static_cast<std::size_t>(n_cells));
    s.for_each([&](int c) {
        for (int v : successors[static_cast<std::size_t>(c)]) out.set(static_cast<std::size_t>(v));
    });
    return out;
}

CellSet TransitionSystem::preimage(const CellSet& s) const {
    CellSet out(static_cast<std::size_t>(n_cells));
    s.for_each([&](int c) {
        for (int u : predecessors[static_cast<std::size_t>(c)]) out.set(static_cast<std::size_t>(u));
    });
    return out;
}

TransitionSystem build_transitions(const SystemSpec& spec) {
    if (spec.kind == SystemKind::Ode)
        throw SchemaError("ode systems need a grid and tau to build transitions");
    return from_finite(spec);
}

TransitionSystem build_transitions(const SystemSpec& spec, const Grid& grid, double tau,
                                   const BuildOptions& opt) {
    if (spec.kind != SystemKind::Ode) return from_finite(spec);

    const std::int64_t n = grid.cell_count();
    if (n <= 0 || static_cast<std::size_t>(n) > opt.cell_cap)
        throw GridTooLargeError(static_cast<std::size_t>(n), opt.cell_cap);

    TransitionSystem ts;
    ts.n_cells = static_cast<int>(n);
    ts.successors.assign(static_cast<std::size_t>(n), {});
    ts.escape_flag.assign(static_cast<std::size_t>(n), false);
    ts.origin = TransitionOrigin::FromOde;
    ts.tau = tau;
    ts.bloat = opt.bloat;
    ts.samples_per_axis = opt.samples_per_axis;
    ts.grid = grid;

    unsigned n_threads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, 16);

    auto worker = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t c = begin; c < end; ++c) {
            CellResult r = compute_cell(spec, grid, tau, opt, c);
            ts.successors[static_cast<std::size_t>(c)] = std::move(r.successors);
            ts.escape_flag[static_cast<std::size_t>(c)] = r.escape;
        }
    };

    if (n_threads <= 1 || n < 256) {
        worker(0, n);
    } else {
        std::vector<std::future<void>> jobs;
        const std::int64_t chunk = (n + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::int64_t b = static_cast<std::int64_t>(t) * chunk;
            const std::int64_t e = std::min<std::int64_t>(b + chunk, n);
            if (b >= e) break;
            jobs.push_back(std::async(std::launch::async, worker, b, e));
        }
        for (auto& j : jobs) j.get();
    }

    finalize(ts);
    return ts;
}

CellSet reach(const TransitionSystem& ts, const CellSet& seed, Direction dir) {
    CellSet visited(static_cast<std::size_t>(ts.n_cells));
    std::vector<int> stack;
    seed.for_each([&](int c) {
        visited.set(static_cast<std::size_t>(c));
        stack.push_back(c);
    });
    const auto& adj = dir == Direction::Forward ? ts.successors : ts.predecessors;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<std::size_t>(c)]) {
            if (!visited.test(static_cast<std::size_t>(v))) {
                visited.set(static_cast<std::size_t>(v));
                stack.push_back(v);
            }
        }
    }
    return visited;
}

CondensationGraph condense(const TransitionSystem& ts) {
    const int n = ts.n_cells;
    CondensationGraph cg;
    cg.comp_of.assign(static_cast<std::size_t>(n), -1);

    // Iterative Tarjan, roots visited in ascending cell order.
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> lowlink(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> scc_stack;
    int next_index = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] != -1) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& fr = call.back();
            const int v = fr.v;
            if (fr.child == 0) {
                index[static_cast<std::size_t>(v)] = lowlink[static_cast<std::size_t>(v)] =
                    next_index++;
                scc_stack.push_back(v);
                on_stack[static_cast<std::size_t>(v)] = true;
            }
            const auto& succ = ts.successors[static_cast<std::size_t>(v)];
            bool descended = false;
            while (fr.child < succ.size()) {
                const int w = succ[fr.child++];
                if (index[static_cast<std::size_t>(w)] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[static_cast<std::size_t>(w)])
                    lowlink[static_cast<std::size_t>(v)] = std::min(
                        lowlink[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            if (lowlink[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
                std::vector<int> comp;
                for (;;) {
                    const int w = scc_stack.back();
                    scc_stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    cg.comp_of[static_cast<std::size_t>(w)] =
                        static_cast<int>(cg.components.size());
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                cg.components.push_back(std::move(comp));
            }
            call.pop_back();
            if (!call.empty()) {
                auto& parent = call.back();
                lowlink[static_cast<std::size_t>(parent.v)] =
                    std::min(lowlink[static_cast<std::size_t>(parent.v)],
                             lowlink[static_cast<std::size_t>(v)]);
            }
        }
    }

    const int m = cg.n_components();
    cg.recurrent.assign(static_cast<std::size_t>(m), false);
    std::vector<std::vector<int>> comp_succ(static_cast<std::size_t>(m));
    for (int u = 0; u < n; ++u) {
        const int cu = cg.comp_of[static_cast<std::size_t>(u)];
        for (int v : ts.successors[static_cast<std::size_t>(u)]) {
            const int cv = cg.comp_of[static_cast<std::size_t>(v)];
            if (cu == cv)
                cg.recurrent[static_cast<std::size_t>(cu)] = true;
            else
                comp_succ[static_cast<std::size_t>(cu)].push_back(cv);
        }
    }
    for (int c = 0; c < m; ++c) {
        auto& s = comp_succ[static_cast<std::size_t>(c)];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        for (int v : s) cg.dag_edges.emplace_back(c, v);
    }
    std::sort(cg.dag_edges.begin(), cg.dag_edges.end());

    // Kahn topological order, sources first; ties broken by the smallest
    // cell index a component contains, for a stable order.
    std::vector<int> indeg(static_cast<std::size_t>(m), 0);
    for (const auto& [u, v] : cg.dag_edges) indeg[static_cast<std::size_t>(v)]++;
    auto min_cell = [&](int c) { return cg.components[static_cast<std::size_t>(c)].front(); };
    auto cmp = [&](int a, int b) { return min_cell(a) > min_cell(b); };
    std::vector<int> ready;
    for (int c = 0; c < m; ++c)
        if (indeg[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    std::make_heap(ready.begin(), ready.end(), cmp);
    while (!ready.empty()) {
        std::pop_heap(ready.begin(), ready.end(), cmp);
        const int c = ready.back();
        ready.pop_back();
        cg.topo_order.push_back(c);
        for (int v : comp_succ[static_cast<std::size_t>(c)]) {
            if (--indeg[static_cast<std::size_t>(v)] == 0) {
                ready.push_back(v);
                std::push_heap(ready.begin(), ready.end(), cmp);
            }
        }
    }
    return cg;
}

CellSet Subsystem::to_sub(const CellSet& global) const {
    CellSet s(old_of_new.size());
    global.for_each([&](int c) {
        const int i = new_of_old[static_cast<std::size_t>(c)];
        if (i >= 0) s.set(static_cast<std::size_t>(i));
    });
    return s;
}

CellSet Subsystem::to_global(const CellSet& sub, std::size_t n_global) const {
    CellSet s(n_global);
    sub.for_each([&](int i) { s.set(static_cast<std::size_t>(old_of_new[static_cast<std::size_t>(i)])); });
    return s;
}

Subsystem restrict_to(const TransitionSystem& ts, const CellSet& mask) {
    Subsystem sub;
    sub.new_of_old.assign(static_cast<std::size_t>(ts.n_cells), -1);
    mask.for_each([&](int c) {
        sub.new_of_old[static_cast<std::size_t>(c)] = static_cast<int>(sub.old_of_new.size());
        sub.old_of_new.push_back(c);
    });
    const int m = static_cast<int>(sub.old_of_new.size());
    sub.ts.n_cells = m;
    sub.ts.successors.assign(static_cast<std::size_t>(m), {});
    sub.ts.escape_flag.assign(static_cast<std::size_t>(m), false);
    sub.ts.origin = ts.origin;
    sub.ts.tau = ts.tau;
    sub.ts.bloat = ts.bloat;
    sub.ts.samples_per_axis = ts.samples_per_axis;
    for (int i = 0; i < m; ++i) {
        const int c = sub.old_of_new[static_cast<std::size_t>(i)];
        if (ts.escape_flag[static_cast<std::size_t>(c)])
            sub.ts.escape_flag[static_cast<std::size_t>(i)] = true;
        for (int v : ts.successors[static_cast<std::size_t>(c)]) {
            const int j = sub.new_of_old[static_cast<std::size_t>(v)];
            if (j >= 0)
                sub.ts.successors[static_cast<std::size_t>(i)].push_back(j);
            else
                sub.ts.escape_flag[static_cast<std::size_t>(i)] = true;  // leaves the subsystem
        }
    }
    finalize(sub.ts);
    return sub;
}

}  // namespace morseflow
