#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "uvc/grid.hpp"
#include "uvc/gtilde.hpp"
#include "uvc/pde.hpp"

namespace uvc {

/// Feedback volatility field gamma(k, i): one variance-rate value per time
/// step k in [0, n) and node i. The discrete stand-in for a probability
/// measure of the representation family; values live in the variance band.
class ScenarioField {
public:
    ScenarioField() = default;
    ScenarioField(int n_steps, int m_nodes, double fill)
        : n_(n_steps), m_(m_nodes),
          gamma_(static_cast<std::size_t>(n_steps) * static_cast<std::size_t>(m_nodes), fill) {}

    static ScenarioField constant(const Grid& grid, double gamma) {
        return ScenarioField(grid.n, grid.m, gamma);
    }

    double& at(int k, int i) { return gamma_[idx(k, i)]; }
    double at(int k, int i) const { return gamma_[idx(k, i)]; }

    int steps() const { return n_; }
    int nodes() const { return m_; }

    /// Throws std::invalid_argument when a value leaves [sig2_low, sig2_high].
    void validate(const GBounds& bounds) const;

    /// Pasting construction: this field before step k_switch, `tail` after.
    ScenarioField spliced_at(int k_switch, const ScenarioField& tail) const;

private:
    std::size_t idx(int k, int i) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(i);
    }

    int n_ = 0;
    int m_ = 0;
    std::vector<double> gamma_;
};

/// Optimal scenario of the solved HJB problem: gamma(k, i) =
/// 2 * Gtilde'(Fbar(t_k, x_i, u*(k, i))), clipped into the band.
/// `clip_count`, when given, receives the number of clipped nodes
/// (expected zero: the envelope derivative already lies in the band).
ScenarioField reference_scenario(const HJBSolution& hjb, const GTildeSpec& spec,
                                 const ControlSystem& system, const Grid& grid,
                                 int* clip_count = nullptr);

/// Smallest and largest grid gamma within tol of the dual maximum at a.
inline std::pair<double, double> argmax_gamma_set(const GTildeSpec& spec, double a, double tol) {
    return spec.argmax_set(a, tol);
}

/// Simulated forward paths under a scenario measure, with every weight the
/// adjoint representation and the penalty need. Arrays are per path and per
/// step, flattened path-major with n_steps+1 entries per path; index 0 holds
/// the state at the start time.
struct PathBundle {
    std::uint64_t seed = 0;
    int n_paths = 0;
    int n_steps = 0;   // steps actually simulated (from t_start to the horizon)
    int t_start = 0;   // starting time-step index on the grid
    double dt = 0.0;

    std::vector<double> x;        // state X
    std::vector<double> b;        // accumulated canonical-process increments
    std::vector<double> qv;       // accumulated quadratic variation, sum gamma dt
    std::vector<double> lambda;   // exp(int g_y d<B>)
    std::vector<double> lweight;  // exp(int sigma_x dB + int (h_x+g_y-sigma_x^2/2) d<B>)
    std::vector<double> rho_int;  // int rho(gamma) dt

    double exit_fraction = 0.0;  // fraction of steps taken outside the grid

    std::size_t idx(int path, int step) const {
        return static_cast<std::size_t>(path) * static_cast<std::size_t>(n_steps + 1) +
               static_cast<std::size_t>(step);
    }
};

/// Euler scheme X_{k+1} = X_k + h gamma dt + sigma sqrt(gamma dt) xi under
/// the feedback scenario, from node time t_start with X = x_init. Weight
/// integrals use left-endpoint quadrature; Lambda and the l-weight restart
/// at 1 at t_start. Coefficients needing the cost state use `y_field`
/// (nearest node) when given, else y = 0. Deterministic per (seed, path):
/// each path owns an RNG stream derived from both.
PathBundle simulate_paths(const ControlSystem& system, const ScenarioField& scenario,
                          const Field& control_field, const GTildeSpec& spec, const Grid& grid,
                          int n_paths, std::uint64_t seed, double x_init, int t_start = 0,
                          const Field* y_field = nullptr);

/// Monte-Carlo penalty alpha(P) = E_P[ int rho(gamma_t) dt ] of the scenario
/// the bundle was simulated under. Exactly zero for a sublinear spec.
double penalty_alpha(const ScenarioField& scenario, const GTildeSpec& spec,
                     const PathBundle& paths);

}  // namespace uvc
