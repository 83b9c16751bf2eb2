#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uvc/gtilde.hpp"

namespace uvc {

/// Coefficient functions of the controlled forward-backward system
///
///     dX = h(t,X,u) d<B>  +  sigma(t,X,u) dB
///     Y_t = E~_t[ Phi(X_T) + int_t^T g(s,X_s,Y_s,u_s) d<B>_s ]
///
/// together with the partial derivatives the adjoint equation and the
/// Hamiltonian consume, the growth constant L and the control interval U.
/// Plain value type; everything immutable after construction and pure.
struct ControlSystem {
    using Coef = std::function<double(double t, double x, double v)>;
    using CostCoef = std::function<double(double t, double x, double y, double v)>;
    using Terminal = std::function<double(double x)>;

    std::string name;

    Coef h, sigma;
    CostCoef g;
    Terminal phi;

    Coef h_x, h_v, sigma_x, sigma_v;
    CostCoef g_x, g_y, g_v;
    Terminal phi_x;

    double L = 1.0;
    double u_lo = 0.0;
    double u_hi = 0.0;

    void validate() const;  // throws std::invalid_argument on U empty etc.
};

/// The reference example: h = x, sigma = v, g = -(2y + v), Phi = x^2,
/// U = [0,1], with exact analytic derivatives.
ControlSystem example1_system();

/// Configuration of a control system: either a registry name or the four
/// coefficient expressions (with optional derivative expressions).
struct SystemConfig {
    std::string name;  // "example1", or empty for expression-defined
    std::string h, sigma, g, phi;
    std::string h_x, h_v, sigma_x, sigma_v, g_x, g_y, g_v, phi_x;
    double u_lo = 0.0;
    double u_hi = 1.0;
    double L = 1.0;
};

/// Builds a system from the registry or from expressions. Expression-defined
/// coefficients get central finite-difference derivatives (step 1e-5) unless
/// derivative expressions are supplied. The (A1)-(A2) style derivative-bound
/// sampling check runs on the truncated domain; failures are appended to
/// `warnings` (never fatal: the bounds may only hold after truncation).
ControlSystem build_system(const SystemConfig& config,
                           std::vector<std::string>* warnings = nullptr);

/// Solution of the scalar terminal-value ODE of the reference example,
///     l'(t) + Gtilde(-4 l(t) - 0.5) = 0,  l(T) = 0,
/// on a uniform time grid. dl holds the ODE right-hand side at the nodes.
struct LSolution {
    std::vector<double> t;
    std::vector<double> l;
    std::vector<double> dl;

    /// Cubic Hermite interpolation between nodes (exact at nodes).
    double at(double time) const;
};

/// Classical 4th-order Runge-Kutta integration backward from l(T) = 0.
/// Requires n_steps >= 10.
LSolution solve_l_ode(const GTildeSpec& spec, double T, int n_steps);

}  // namespace uvc
