#include "morseflow/system.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "morseflow/errors.hpp"

namespace morseflow {

namespace {

// Successor of a state under a deterministic finite system, or -1 when the
// state has no outgoing edge (escape at cell level).
int finite_successor(const SystemSpec& spec, int state) {
    if (spec.kind == SystemKind::FiniteMap) return spec.map[static_cast<std::size_t>(state)];
    int succ = -1;
    for (const auto& [u, v] : spec.edges) {
        if (u != state) continue;
        if (succ != -1 && succ != v)
            throw NondeterministicError("state '" + spec.states[static_cast<std::size_t>(state)] +
                                        "' has multiple successors; evolve requires a "
                                        "deterministic system");
        succ = v;
    }
    return succ;
}

std::vector<double> parse_csv_point(const std::string& csv) {
    std::vector<double> p;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        p.push_back(v);
    }
    return p;
}

}  // namespace

int SystemSpec::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return static_cast<int>(i);
    throw UnknownStateError(name);
}

bool SystemSpec::deterministic() const {
    if (kind == SystemKind::FiniteMap) return true;
    if (kind == SystemKind::Ode) return true;
    std::vector<int> out(states.size(), -1);
    for (const auto& [u, v] : edges) {
        auto& slot = out[static_cast<std::size_t>(u)];
        if (slot != -1 && slot != v) return false;
        slot = v;
    }
    return true;
}

EvolveResult evolve(const SystemSpec& spec, int state, long steps) {
    if (state < 0 || static_cast<std::size_t>(state) >= spec.states.size())
        throw UnknownStateError(std::to_string(state));
    if (steps < 0) throw NonIntegerTimeError(static_cast<double>(steps));
    int cur = state;
    for (long k = 0; k < steps; ++k) {
        const int next = finite_successor(spec, cur);
        if (next < 0) {
            EvolveResult r;
            r.outcome = EvolveResult::Outcome::Escaped;
            r.t_escape = static_cast<double>(k + 1);
            return r;
        }
        cur = next;
    }
    EvolveResult r;
    r.state = cur;
    return r;
}

namespace detail {

bool inside_domain(const SystemSpec& spec, std::span<const double> x) {
    for (int i = 0; i < spec.dim; ++i) {
        const double v = x[static_cast<std::size_t>(i)];
        if (!std::isfinite(v)) return false;
        if (v < spec.domain[static_cast<std::size_t>(i)][0] ||
            v > spec.domain[static_cast<std::size_t>(i)][1])
            return false;
        if (std::fabs(v) > spec.magnitude_cap) return false;
    }
    return true;
}

bool rk4_step(const SystemSpec& spec, std::vector<double>& x, double h, std::vector<double>& k1,
              std::vector<double>& k2, std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& scratch) {
    const std::size_t d = static_cast<std::size_t>(spec.dim);
    auto eval_checked = [&](const std::vector<double>& p, std::vector<double>& out) {
        for (std::size_t i = 0; i < d; ++i) {
            const double v = eval_field_raw(spec.field[i], p);
            if (!std::isfinite(v)) return false;
            out[i] = v;
        }
        return true;
    };
    if (!eval_checked(x, k1)) return false;
    for (std::size_t i = 0; i < d; ++i) scratch[i] = x[i] + 0.5 * h * k1[i];
    if (!eval_checked(scratch, k2)) return false;
    for (std::size_t i = 0; i < d; ++i) scratch[i] = x[i] + 0.5 * h * k2[i];
    if (!eval_checked(scratch, k3)) return false;
    for (std::size_t i = 0; i < d; ++i) scratch[i] = x[i] + h * k3[i];
    if (!eval_checked(scratch, k4)) return false;
    for (std::size_t i = 0; i < d; ++i)
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (std::size_t i = 0; i < d; ++i)
        if (!std::isfinite(x[i])) return false;
    return true;
}

}  // namespace detail

EvolveResult evolve(const SystemSpec& spec, std::span<const double> x, double t) {
    if (t < 0) throw NonIntegerTimeError(t);
    if (!detail::inside_domain(spec, x)) throw OutOfDomainError();

    const std::size_t d = static_cast<std::size_t>(spec.dim);
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> k1(d), k2(d), k3(d), k4(d), scratch(d);

    const double h = spec.dt;
    const long n = static_cast<long>(std::floor(t / h + 1e-9));
    const double rem = t - static_cast<double>(n) * h;

    auto escaped_at = [&](double te) {
        EvolveResult r;
        r.outcome = EvolveResult::Outcome::Escaped;
        r.t_escape = te;
        return r;
    };

    for (long k = 0; k < n; ++k) {
        const bool ok = detail::rk4_step(spec, cur, h, k1, k2, k3, k4, scratch);
        const double tk = static_cast<double>(k + 1) * h;
        if (!ok || !detail::inside_domain(spec, cur)) return escaped_at(tk);
    }
    if (rem > 1e-12 * std::max(1.0, t)) {
        const bool ok = detail::rk4_step(spec, cur, rem, k1, k2, k3, k4, scratch);
        if (!ok || !detail::inside_domain(spec, cur)) return escaped_at(t);
    }
    EvolveResult r;
    r.point = std::move(cur);
    return r;
}

EvolveResult evolve_at_time(const SystemSpec& spec, const std::string& state_or_csv, double t) {
    if (spec.kind == SystemKind::Ode) {
        const auto p = parse_csv_point(state_or_csv);
        return evolve(spec, p, t);
    }
    const double rounded = std::round(t);
    if (t < 0 || std::fabs(t - rounded) > 1e-9) throw NonIntegerTimeError(t);
    return evolve(spec, spec.state_index(state_or_csv), static_cast<long>(rounded));
}

Trajectory trajectory(const SystemSpec& spec, int state, long t_max, long sample_dt,
                      const FinitePredicate& stop_set) {
    if (t_max < 0 || sample_dt <= 0) throw NonIntegerTimeError(static_cast<double>(sample_dt));
    Trajectory tr;
    int cur = state;
    if (state < 0 || static_cast<std::size_t>(state) >= spec.states.size())
        throw UnknownStateError(std::to_string(state));
    for (long t = 0;; t += sample_dt) {
        if (t > t_max) break;
        if (t > 0) {
            bool escaped = false;
            for (long k = 0; k < sample_dt; ++k) {
                const int next = finite_successor(spec, cur);
                if (next < 0) {
                    tr.terminal = TerminalKind::Escaped;
                    tr.terminal_time = static_cast<double>(t - sample_dt + k + 1);
                    escaped = true;
                    break;
                }
                cur = next;
            }
            if (escaped) return tr;
        }
        tr.times.push_back(static_cast<double>(t));
        tr.states.push_back(cur);
        if (stop_set && stop_set(cur)) {
            tr.terminal = TerminalKind::EnteredTarget;
            tr.terminal_time = static_cast<double>(t);
            return tr;
        }
    }
    tr.terminal = TerminalKind::Horizon;
    return tr;
}

Trajectory trajectory(const SystemSpec& spec, std::span<const double> x0, double t_max,
                      double sample_dt, const PointPredicate& stop_set) {
    if (!detail::inside_domain(spec, x0)) throw OutOfDomainError();
    Trajectory tr;
    const std::size_t d = static_cast<std::size_t>(spec.dim);
    std::vector<double> cur(x0.begin(), x0.end());
    std::vector<double> k1(d), k2(d), k3(d), k4(d), scratch(d);

    const double h = spec.dt;
    const long steps_per_sample = std::max<long>(1, std::lround(sample_dt / h));
    const long n_samples = static_cast<long>(std::floor(t_max / sample_dt + 1e-9));

    tr.times.push_back(0.0);
    tr.points.push_back(cur);
    if (stop_set && stop_set(cur)) {
        tr.terminal = TerminalKind::EnteredTarget;
        tr.terminal_time = 0.0;
        return tr;
    }
    long step = 0;
    for (long s = 1; s <= n_samples; ++s) {
        for (long k = 0; k < steps_per_sample; ++k) {
            const bool ok = detail::rk4_step(spec, cur, h, k1, k2, k3, k4, scratch);
            ++step;
            if (!ok || !detail::inside_domain(spec, cur)) {
                tr.terminal = TerminalKind::Escaped;
                tr.terminal_time = static_cast<double>(step) * h;
                return tr;
            }
        }
        const double t = static_cast<double>(s) * sample_dt;
        tr.times.push_back(t);
        tr.points.push_back(cur);
        if (stop_set && stop_set(cur)) {
            tr.terminal = TerminalKind::EnteredTarget;
            tr.terminal_time = t;
            return tr;
        }
    }
    tr.terminal = TerminalKind::Horizon;
    return tr;
}

TimeTauMap::TimeTauMap(const SystemSpec& spec, double tau) : spec_(&spec), tau_(tau) {
    if (tau < spec.dt) throw NonIntegerTimeError(tau);
}

EvolveResult TimeTauMap::operator()(std::span<const double> x) const {
    return evolve(*spec_, x, tau_);
}

}  // namespace morseflow
