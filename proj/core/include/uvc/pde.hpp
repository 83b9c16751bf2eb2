#pragma once

#include <functional>
#include <limits>
#include <string>

#include "uvc/grid.hpp"
#include "uvc/gtilde.hpp"
#include "uvc/system.hpp"

namespace uvc {

/// Numerical breakdown (non-finite value, CFL violation) with the first
/// offending location in the message.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spatial boundary treatment of the explicit backward schemes.
struct Boundary {
    enum class Kind {
        /// Ghost nodes from linear extrapolation: second derivative zero,
        /// one-sided first derivative at the wall.
        Extrapolate,
        /// Pinned values from a known function of (t, x).
        Dirichlet,
    };

    Kind kind = Kind::Extrapolate;
    std::function<double(double t, double x)> dirichlet;

    static Boundary extrapolate() { return {}; }
    static Boundary pinned(std::function<double(double t, double x)> f) {
        return {Kind::Dirichlet, std::move(f)};
    }
};

/// The second-order operator argument of the HJB nonlinearity,
///     F(t, x, a1, a2, a3, v) = sigma^2 a3 + 2 h a2 + 2 g(t, x, a1, v).
double f_operator(const ControlSystem& system, double t, double x, double a1, double a2,
                  double a3, double v);

/// Largest time step keeping the explicit scheme monotone on this grid:
///     dx^2 / (s2h*smax^2 + dx*(2*hmax + s2h*smax) + 2*dx^2*L*s2h)
/// with smax = max|sigma|, hmax = max|h| over grid x U and s2h = sig2_high.
/// Returns +infinity when the denominator vanishes (degenerate system).
double cfl_timestep(const ControlSystem& system, const Grid& grid, const GBounds& bounds);

/// Time-step count for `horizon` obtained from cfl_timestep with a safety
/// factor (default 0.9), as used by the "auto" grid configuration.
int auto_time_steps(const ControlSystem& system, const Grid& geometry, const GBounds& bounds,
                    double safety = 0.9);

/// Backward evaluation of Y under a fixed feedback control field:
///     Y(k,i) = Y(k+1,i) + dt * Gtilde(F(t_k, x_i, Y(k+1,i), D1Y, D2Y, u(k,i)))
/// with central differences on slice k+1. Throws NumericalError on CFL
/// violation or the first non-finite node.
Field solve_backward(const ControlSystem& system, const Field& control_field,
                     const GTildeSpec& spec, const Grid& grid,
                     const std::function<double(double)>& terminal, const Boundary& boundary);

/// Discrete HJB solution: value, argmin control, derivative fields, the
/// residual Sigma = dtV + Gtilde(Fbar(., u*)) and the extreme dual
/// maximizers of Gtilde at the optimum.
struct HJBSolution {
    Field value;           // V
    Field u_star;          // argmin control (smallest argmin on ties)
    Field dx_value;        // dV/dx from the discrete field
    Field dxx_value;       // d2V/dx2
    Field dt_value;        // dV/dt (forward difference)
    Field sigma_residual;  // Sigma, >= -tol on the interior
    Field gamma_lo;        // smallest dual maximizer at the optimum
    Field gamma_hi;        // largest dual maximizer at the optimum

    /// F evaluated on the stored discrete fields at node (k, i) and control v.
    double f_bar(const ControlSystem& system, const Grid& grid, int k, int i, double v) const;
};

/// Solves the HJB equation dtV + inf_v Gtilde(F(t,x,V,DV,D2V,v)) = 0,
/// V(T, .) = Phi, with the inner minimization over a uniform v-grid of
/// `v_grid_count` points on U.
HJBSolution solve_hjb(const ControlSystem& system, const GTildeSpec& spec, const Grid& grid,
                      int v_grid_count, const Boundary& boundary);

struct DerivativeFields {
    Field dt;   // forward difference in t (backward at the terminal slice)
    Field dx;   // central in x, second-order one-sided at the walls
    Field dxx;  // central in x, second-order one-sided at the walls
};

/// Finite-difference derivative fields of a grid function. Exact for
/// quadratics in x up to rounding.
DerivativeFields derivative_fields(const Field& value, const Grid& grid);

}  // namespace uvc
