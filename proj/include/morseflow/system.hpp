#ifndef MORSEFLOW_SYSTEM_HPP_
#define MORSEFLOW_SYSTEM_HPP_

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "morseflow/expr.hpp"

namespace morseflow {

enum class SystemKind { FiniteMap, Digraph, Ode };

// Declarative description of a dynamical system: a finite deterministic map,
// a multivalued transition digraph, or an ODE-driven flow integrated with
// fixed-step RK4. Immutable after load; all evolution queries are pure.
struct SystemSpec {
    SystemKind kind = SystemKind::FiniteMap;

    // finite_map / digraph
    std::vector<std::string> states;          // declared identifiers
    std::vector<int> map;                     // finite_map: state -> image
    std::vector<std::pair<int, int>> edges;   // digraph

    // ode
    int dim = 0;
    std::vector<std::string> field_text;
    std::vector<FieldExpr> field;
    std::vector<std::array<double, 2>> domain;
    double dt = 0.0;
    double magnitude_cap = 1e6;

    bool finite_kind() const { return kind != SystemKind::Ode; }

    // Index of a declared state; throws UnknownStateError.
    int state_index(const std::string& name) const;

    // True when every state has exactly one successor (finite_map always;
    // digraph only when out-degrees are all <= 1).
    bool deterministic() const;
};

struct EvolveResult {
    enum class Outcome { At, Escaped };
    Outcome outcome = Outcome::At;
    double t_escape = 0.0;           // valid when Escaped
    int state = -1;                  // finite kinds
    std::vector<double> point;       // ode kind

    bool at() const { return outcome == Outcome::At; }
    bool escaped() const { return outcome == Outcome::Escaped; }
};

enum class TerminalKind { Horizon, Escaped, EnteredTarget };

struct Trajectory {
    std::vector<double> times;               // strictly increasing, starts at 0
    std::vector<int> states;                 // finite kinds
    std::vector<std::vector<double>> points; // ode kind
    TerminalKind terminal = TerminalKind::Horizon;
    double terminal_time = 0.0;              // escape or target-entry time
};

// One step = one map application for finite kinds; t counts steps.
EvolveResult evolve(const SystemSpec& spec, int state, long steps);

// RK4 evolution through model time t (>= 0). Escape is reported at the first
// integration-step time whose result leaves the domain box, exceeds the
// magnitude cap, or is non-finite.
EvolveResult evolve(const SystemSpec& spec, std::span<const double> x, double t);

// Kind-dispatching front end; validates that finite kinds get integer time.
EvolveResult evolve_at_time(const SystemSpec& spec, const std::string& state_or_csv, double t);

using FinitePredicate = std::function<bool(int)>;
using PointPredicate = std::function<bool(std::span<const double>)>;

Trajectory trajectory(const SystemSpec& spec, int state, long t_max, long sample_dt = 1,
                      const FinitePredicate& stop_set = nullptr);

Trajectory trajectory(const SystemSpec& spec, std::span<const double> x0, double t_max,
                      double sample_dt, const PointPredicate& stop_set = nullptr);

// Deterministic partial map P(x) = evolve(spec, x, tau) for an ode spec.
class TimeTauMap {
public:
    TimeTauMap(const SystemSpec& spec, double tau);

    EvolveResult operator()(std::span<const double> x) const;
    double tau() const { return tau_; }

private:
    const SystemSpec* spec_;
    double tau_;
};

namespace detail {
// Single RK4 step in place; returns false when the field evaluation
// produced a non-finite value.
bool rk4_step(const SystemSpec& spec, std::vector<double>& x, double h,
              std::vector<double>& k1, std::vector<double>& k2, std::vector<double>& k3,
              std::vector<double>& k4, std::vector<double>& scratch);

bool inside_domain(const SystemSpec& spec, std::span<const double> x);
}  // namespace detail

}  // namespace morseflow

#endif  // MORSEFLOW_SYSTEM_HPP_
