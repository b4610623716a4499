#ifndef MORSEFLOW_LYAPUNOV_HPP_
#define MORSEFLOW_LYAPUNOV_HPP_

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "morseflow/cellset.hpp"
#include "morseflow/grid.hpp"
#include "morseflow/system.hpp"
#include "morseflow/transition.hpp"

namespace morseflow {

enum class FieldKind { Zeta, Xi, L };

// Per-cell scalar values; entries are NaN where the evaluation failed
// (reported separately by the producing operation).
struct ScalarField {
    FieldKind kind = FieldKind::Zeta;
    std::vector<double> values;
};

// Combinatorial K0 function: zeta(c) is the minimum path length from c into
// A, zero exactly on A, capped at n_cells+1 for cells that never reach A.
ScalarField k0_distance(const TransitionSystem& ts, const CellSet& a);

// Euclidean distance to the axis-aligned hull of the attractor cells; the
// ode-side K0 function.
class HullDistance {
public:
    HullDistance(const Grid& grid, const CellSet& a_cells);

    double operator()(std::span<const double> p) const;
    const std::vector<double>& lo() const { return lo_; }
    const std::vector<double>& hi() const { return hi_; }

private:
    std::vector<double> lo_, hi_;
};

// --- deterministic finite systems: exact orbit sums -----------------------

// xi(x) = max of zeta over the orbit prefix of x until A is entered.
// Throws NotInBasinError when the orbit never reaches the zero set of zeta.
double xi_value(const TransitionSystem& ts, const ScalarField& zeta, int cell);

// L(x) = xi(x) + sum_{k=0..K} e^-k xi(f^k x), K the entry step into A.
double lyapunov_value(const TransitionSystem& ts, const ScalarField& zeta, int cell);

struct LyapunovField {
    ScalarField zeta, xi, lyapunov;
    std::vector<std::pair<int, std::string>> errors;  // per-cell failures
};

// Evaluates zeta/xi/L on every cell of scope; scope must lie in basin(A).
LyapunovField lyapunov_field(const TransitionSystem& ts, const CellSet& a, const CellSet& scope);

// Worst-case envelope for multivalued systems: xi(c) = max zeta over the
// forward reach of c. Nonincreasing along every edge; the full L-sum is
// reserved for deterministic and ode systems.
ScalarField xi_field_worstcase(const TransitionSystem& ts, const ScalarField& zeta);

struct DecreaseReport {
    std::size_t checked = 0;
    std::vector<std::pair<int, int>> violations;  // (cell, successor) or (traj, sample)
    bool ok() const { return violations.empty(); }
};

// Exact strict-decrease check L(f(x)) < L(x) for every basin cell off A.
DecreaseReport verify_decrease(const TransitionSystem& ts, const CellSet& a);

// eta = zeta + psi with psi = 1 on K, 0 on A (ratio of hitting distances);
// the resulting L is >= 1 on K and keeps every decrease property.
struct SeparatingField {
    ScalarField eta, xi, lyapunov;
};
SeparatingField separating_lyapunov(const TransitionSystem& ts, const CellSet& a,
                                    const CellSet& k);

// --- ode systems: sampled sup and truncated weighted integral -------------

struct OdeLyapunovParams {
    double t_max = 20.0;      // truncation time of the weighted integral
    double horizon = 100.0;   // orbit must enter the zeta band by this time
    double zeta_tol = 1e-3;   // near-attractor band
    long quad_stride = 1;     // trapezoid nodes every quad_stride RK4 steps
};

// Evaluator of the constructed Lyapunov function along RK4 trajectories.
// Pure per point; safe for concurrent use.
class OdeLyapunov {
public:
    using K0Fn = std::function<double(std::span<const double>)>;

    OdeLyapunov(const SystemSpec& spec, K0Fn zeta, OdeLyapunovParams params = {});

    double zeta(std::span<const double> p) const { return zeta_(p); }
    double xi(std::span<const double> p) const;
    double value(std::span<const double> p) const;  // L, truncated at t_max
    // L with an explicit truncation time; |value_at(p,T) - value_at(p,T')|
    // <= e^-min(T,T') * xi(p).
    double value_at(std::span<const double> p, double t_max) const;

    const OdeLyapunovParams& params() const { return params_; }

private:
    struct Profile {
        std::vector<double> xi;  // suffix maxima of zeta along the orbit
        double dt;
    };
    Profile profile(std::span<const double> p, double need_time) const;

    const SystemSpec* spec_;
    K0Fn zeta_;
    OdeLyapunovParams params_;
};

// Decrease check along sampled trajectories: L must drop by more than -tol
// between consecutive samples outside the zeta band.
DecreaseReport verify_decrease_ode(const OdeLyapunov& lyap,
                                   const std::vector<std::vector<double>>& starts,
                                   double sample_dt, double t_check, double tol);

ScalarField lyapunov_field_grid(const OdeLyapunov& lyap, const Grid& grid, const CellSet& scope,
                                std::vector<std::pair<int, std::string>>* errors);

}  // namespace morseflow

#endif  // MORSEFLOW_LYAPUNOV_HPP_
