#pragma once

#include <cstdint>
#include <optional>

#include "uvc/scenario.hpp"

namespace uvc {

/// Solution (p, q) of the adjoint backward equation under a scenario
/// measure, as grid fields, plus the orthogonality diagnostic standing in
/// for the N part (identically zero in the Markovian grid setting).
struct AdjointSolution {
    Field p;
    Field q;  // q(k,i) = dp/dx (k,i) * sigma(t_k, x_i, u*(k,i))
    double n_residual = 0.0;
};

/// Backward evaluation of Y under a fixed feedback control: delegates to
/// solve_backward with the system's terminal function.
Field backward_y(const ControlSystem& system, const Field& control_field, const GTildeSpec& spec,
                 const Grid& grid, const Boundary& boundary);

/// Explicit backward scheme for the linear adjoint equation
///   dt p + gamma(k,i) [ h dx p + sigma^2/2 dxx p + (h_x+g_y) p
///                       + sigma_x sigma dx p + g_x ] = 0,  p(T,.) = Phi_x,
/// with coefficients along the argmin control field and the cost state taken
/// from the HJB value field. q comes from the construction identity;
/// n_residual is the Markovian zero marker.
AdjointSolution adjoint_pde(const ControlSystem& system, const HJBSolution& hjb,
                            const ScenarioField& scenario, const Grid& grid,
                            const Boundary& boundary = Boundary::extrapolate());

/// Monte-Carlo adjoint estimate at node time t_index and state x_init:
///
///   p = E[ Phi_x(X_T) l_T + sum_k g_x(t_k) l_k gamma_k dt ]
///
/// with the exponential weight l accumulated along simulated paths
/// (left-endpoint quadrature, l = 1 at the start time).
struct AdjointMcResult {
    double estimate = 0.0;
    double std_error = 0.0;
    int n_paths = 0;
    std::uint64_t seed = 0;
    /// Correlation of the hedged residual with the Brownian increment when a
    /// PDE solution is supplied for the hedge; unset otherwise. Near zero
    /// when the orthogonal martingale part N vanishes.
    std::optional<double> orthogonality_defect;
};

AdjointMcResult adjoint_mc(const ControlSystem& system, const ScenarioField& scenario,
                           const Field& control_field, const GTildeSpec& spec, const Grid& grid,
                           int t_index, double x_init, int n_paths, std::uint64_t seed,
                           const Field* y_field = nullptr,
                           const AdjointSolution* hedge = nullptr);

/// Hamiltonian H = h p + sigma q + g and its control derivative
/// H_v = h_v p + sigma_v q + g_v.
struct HamiltonianValue {
    double H = 0.0;
    double H_v = 0.0;
};

HamiltonianValue hamiltonian_eval(const ControlSystem& system, double t, double x, double y,
                                  double v, double p, double q);

}  // namespace uvc
