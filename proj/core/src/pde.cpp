#include "uvc/pde.hpp"

#include <algorithm>
#include <cmath>

namespace uvc {

double f_operator(const ControlSystem& system, double t, double x, double a1, double a2,
                  double a3, double v) {
    const double s = system.sigma(t, x, v);
    return s * s * a3 + 2.0 * system.h(t, x, v) * a2 + 2.0 * system.g(t, x, a1, v);
}

double cfl_timestep(const ControlSystem& system, const Grid& grid, const GBounds& bounds) {
    grid.validate();
    const double dx = grid.dx();
    double s_max = 0.0;
    double h_max = 0.0;
    const int n_v = 17;
    const double t_samples[3] = {0.0, 0.5 * grid.horizon, grid.horizon};
    for (int i = 0; i < grid.m; ++i) {
        const double x = grid.x(i);
        for (int j = 0; j < n_v; ++j) {
            const double v =
                system.u_lo + (system.u_hi - system.u_lo) * j / static_cast<double>(n_v - 1);
            for (double t : t_samples) {
                s_max = std::max(s_max, std::abs(system.sigma(t, x, v)));
                h_max = std::max(h_max, std::abs(system.h(t, x, v)));
            }
        }
    }
    const double denom = bounds.sig2_high * s_max * s_max +
                         dx * (2.0 * h_max + bounds.sig2_high * s_max) +
                         2.0 * dx * dx * system.L * bounds.sig2_high;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return dx * dx / denom;
}

int auto_time_steps(const ControlSystem& system, const Grid& geometry, const GBounds& bounds,
                    double safety) {
    const double dt_max = cfl_timestep(system, geometry, bounds);
    if (!std::isfinite(dt_max)) return 1;
    return std::max(1, static_cast<int>(std::ceil(geometry.horizon / (safety * dt_max))));
}

namespace {

void require_cfl(const ControlSystem& system, const Grid& grid, const GBounds& bounds) {
    const double dt_max = cfl_timestep(system, grid, bounds);
    if (grid.dt() > dt_max * (1.0 + 1e-12))
        throw NumericalError("CFL violation: dt = " + std::to_string(grid.dt()) +
                             " exceeds monotone bound " + std::to_string(dt_max));
}

void require_finite(const Field& f, int k, const char* what) {
    for (int i = 0; i < f.nodes(); ++i)
        if (!std::isfinite(f.at(k, i)))
            throw NumericalError(std::string(what) + ": non-finite value at slice " +
                                 std::to_string(k) + ", node " + std::to_string(i));
}

// One explicit backward step of Y at interior or wall node i, reading
// slice k+1. The boundary policy supplies the ghost-node differences.
struct SliceStencil {
    const Field& y;
    const Grid& grid;
    int k1;  // source slice (k + 1)

    double first(int i) const {
        if (i == 0) return (y.at(k1, 1) - y.at(k1, 0)) / grid.dx();
        if (i == grid.m - 1) return (y.at(k1, i) - y.at(k1, i - 1)) / grid.dx();
        return (y.at(k1, i + 1) - y.at(k1, i - 1)) / (2.0 * grid.dx());
    }
    double second(int i) const {
        if (i == 0 || i == grid.m - 1) return 0.0;  // extrapolation ghost
        return (y.at(k1, i + 1) - 2.0 * y.at(k1, i) + y.at(k1, i - 1)) / (grid.dx() * grid.dx());
    }
};

}  // namespace

Field solve_backward(const ControlSystem& system, const Field& control_field,
                     const GTildeSpec& spec, const Grid& grid,
                     const std::function<double(double)>& terminal, const Boundary& boundary) {
    grid.validate();
    require_cfl(system, grid, spec.bounds());

    Field y(grid.n + 1, grid.m, 0.0, "Y");
    for (int i = 0; i < grid.m; ++i) y.at(grid.n, i) = terminal(grid.x(i));
    require_finite(y, grid.n, "solve_backward terminal");

    const double dt = grid.dt();
    for (int k = grid.n - 1; k >= 0; --k) {
        const double t = grid.t(k);
        SliceStencil st{y, grid, k + 1};
        for (int i = 0; i < grid.m; ++i) {
            if (boundary.kind == Boundary::Kind::Dirichlet && (i == 0 || i == grid.m - 1)) {
                y.at(k, i) = boundary.dirichlet(t, grid.x(i));
                continue;
            }
            const double v = control_field.at(k, i);
            const double f =
                f_operator(system, t, grid.x(i), y.at(k + 1, i), st.first(i), st.second(i), v);
            y.at(k, i) = y.at(k + 1, i) + dt * spec.eval(f);
        }
        require_finite(y, k, "solve_backward");
    }
    return y;
}

DerivativeFields derivative_fields(const Field& value, const Grid& grid) {
    const double dx = grid.dx();
    const double dt = grid.dt();
    DerivativeFields d{Field(grid.n + 1, grid.m, 0.0, "dtV"), Field(grid.n + 1, grid.m, 0.0, "dxV"),
                       Field(grid.n + 1, grid.m, 0.0, "dxxV")};
    for (int k = 0; k <= grid.n; ++k) {
        for (int i = 0; i < grid.m; ++i) {
            if (k < grid.n)
                d.dt.at(k, i) = (value.at(k + 1, i) - value.at(k, i)) / dt;
            else
                d.dt.at(k, i) = (value.at(k, i) - value.at(k - 1, i)) / dt;

            if (i == 0) {
                d.dx.at(k, i) =
                    (-3.0 * value.at(k, 0) + 4.0 * value.at(k, 1) - value.at(k, 2)) / (2.0 * dx);
                d.dxx.at(k, i) = (2.0 * value.at(k, 0) - 5.0 * value.at(k, 1) +
                                  4.0 * value.at(k, 2) - value.at(k, 3)) /
                                 (dx * dx);
            } else if (i == grid.m - 1) {
                d.dx.at(k, i) = (3.0 * value.at(k, i) - 4.0 * value.at(k, i - 1) +
                                 value.at(k, i - 2)) /
                                (2.0 * dx);
                d.dxx.at(k, i) = (2.0 * value.at(k, i) - 5.0 * value.at(k, i - 1) +
                                  4.0 * value.at(k, i - 2) - value.at(k, i - 3)) /
                                 (dx * dx);
            } else {
                d.dx.at(k, i) = (value.at(k, i + 1) - value.at(k, i - 1)) / (2.0 * dx);
                d.dxx.at(k, i) =
                    (value.at(k, i + 1) - 2.0 * value.at(k, i) + value.at(k, i - 1)) / (dx * dx);
            }
        }
    }
    return d;
}

double HJBSolution::f_bar(const ControlSystem& system, const Grid& grid, int k, int i,
                          double v) const {
    return f_operator(system, grid.t(k), grid.x(i), value.at(k, i), dx_value.at(k, i),
                      dxx_value.at(k, i), v);
}

HJBSolution solve_hjb(const ControlSystem& system, const GTildeSpec& spec, const Grid& grid,
                      int v_grid_count, const Boundary& boundary) {
    grid.validate();
    if (v_grid_count < 2 && system.u_lo != system.u_hi)
        throw std::invalid_argument("solve_hjb: need v_grid_count >= 2");
    require_cfl(system, grid, spec.bounds());

    const int n_v = std::max(v_grid_count, 1);
    std::vector<double> v_grid(static_cast<std::size_t>(n_v));
    for (int j = 0; j < n_v; ++j)
        v_grid[static_cast<std::size_t>(j)] =
            n_v == 1 ? system.u_lo
                     : system.u_lo + (system.u_hi - system.u_lo) * j / static_cast<double>(n_v - 1);

    HJBSolution sol;
    sol.value = Field(grid.n + 1, grid.m, 0.0, "V");
    sol.u_star = Field(grid.n + 1, grid.m, v_grid.front(), "u_star");
    for (int i = 0; i < grid.m; ++i) sol.value.at(grid.n, i) = system.phi(grid.x(i));
    require_finite(sol.value, grid.n, "solve_hjb terminal");

    const double dt = grid.dt();
    for (int k = grid.n - 1; k >= 0; --k) {
        const double t = grid.t(k);
        SliceStencil st{sol.value, grid, k + 1};
        for (int i = 0; i < grid.m; ++i) {
            if (boundary.kind == Boundary::Kind::Dirichlet && (i == 0 || i == grid.m - 1)) {
                sol.value.at(k, i) = boundary.dirichlet(t, grid.x(i));
                sol.u_star.at(k, i) = v_grid.front();
                continue;
            }
            const double x = grid.x(i);
            const double a1 = sol.value.at(k + 1, i);
            const double a2 = st.first(i);
            const double a3 = st.second(i);
            double best = std::numeric_limits<double>::infinity();
            double best_v = v_grid.front();
            for (double v : v_grid) {
                const double candidate = spec.eval(f_operator(system, t, x, a1, a2, a3, v));
                if (candidate < best) {  // strict: smallest argmin on ties
                    best = candidate;
                    best_v = v;
                }
            }
            sol.value.at(k, i) = a1 + dt * best;
            sol.u_star.at(k, i) = best_v;
        }
        require_finite(sol.value, k, "solve_hjb");
    }
    // Terminal-slice control: argmin against the terminal derivative fields,
    // so downstream coefficient lookups are defined on every slice.
    {
        DerivativeFields d = derivative_fields(sol.value, grid);
        for (int i = 0; i < grid.m; ++i) {
            const double x = grid.x(i);
            double best = std::numeric_limits<double>::infinity();
            double best_v = v_grid.front();
            for (double v : v_grid) {
                const double candidate = spec.eval(f_operator(
                    system, grid.horizon, x, sol.value.at(grid.n, i), d.dx.at(grid.n, i),
                    d.dxx.at(grid.n, i), v));
                if (candidate < best) {
                    best = candidate;
                    best_v = v;
                }
            }
            sol.u_star.at(grid.n, i) = best_v;
        }
        sol.dt_value = std::move(d.dt);
        sol.dx_value = std::move(d.dx);
        sol.dxx_value = std::move(d.dxx);
        sol.dt_value.set_label("dtV");
        sol.dx_value.set_label("dxV");
        sol.dxx_value.set_label("dxxV");
    }

    sol.sigma_residual = Field(grid.n + 1, grid.m, 0.0, "Sigma");
    sol.gamma_lo = Field(grid.n + 1, grid.m, 0.0, "gamma_lo");
    sol.gamma_hi = Field(grid.n + 1, grid.m, 0.0, "gamma_hi");
    for (int k = 0; k <= grid.n; ++k) {
        for (int i = 0; i < grid.m; ++i) {
            const double fb = sol.f_bar(system, grid, k, i, sol.u_star.at(k, i));
            sol.sigma_residual.at(k, i) = sol.dt_value.at(k, i) + spec.eval(fb);
            const auto [glo, ghi] = spec.argmax_set(fb, 0.0);
            sol.gamma_lo.at(k, i) = glo;
            sol.gamma_hi.at(k, i) = ghi;
        }
    }
    return sol;
}

}  // namespace uvc
