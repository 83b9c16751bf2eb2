#include "uvc/adjoint.hpp"

#include <cmath>
#include <stdexcept>

namespace uvc {

Field backward_y(const ControlSystem& system, const Field& control_field, const GTildeSpec& spec,
                 const Grid& grid, const Boundary& boundary) {
    return solve_backward(system, control_field, spec, grid,
                          [&system](double x) { return system.phi(x); }, boundary);
}

AdjointSolution adjoint_pde(const ControlSystem& system, const HJBSolution& hjb,
                            const ScenarioField& scenario, const Grid& grid,
                            const Boundary& boundary) {
    if (scenario.steps() != grid.n || scenario.nodes() != grid.m)
        throw std::invalid_argument("adjoint_pde: scenario shape mismatch");
    AdjointSolution sol;
    sol.p = Field(grid.n + 1, grid.m, 0.0, "p");
    for (int i = 0; i < grid.m; ++i) sol.p.at(grid.n, i) = system.phi_x(grid.x(i));

    const double dt = grid.dt();
    const double dx = grid.dx();
    for (int k = grid.n - 1; k >= 0; --k) {
        const double t = grid.t(k);
        for (int i = 0; i < grid.m; ++i) {
            const double x = grid.x(i);
            if (boundary.kind == Boundary::Kind::Dirichlet && (i == 0 || i == grid.m - 1)) {
                sol.p.at(k, i) = boundary.dirichlet(t, x);
                continue;
            }
            double d1, d2;
            if (i == 0) {
                d1 = (sol.p.at(k + 1, 1) - sol.p.at(k + 1, 0)) / dx;
                d2 = 0.0;
            } else if (i == grid.m - 1) {
                d1 = (sol.p.at(k + 1, i) - sol.p.at(k + 1, i - 1)) / dx;
                d2 = 0.0;
            } else {
                d1 = (sol.p.at(k + 1, i + 1) - sol.p.at(k + 1, i - 1)) / (2.0 * dx);
                d2 = (sol.p.at(k + 1, i + 1) - 2.0 * sol.p.at(k + 1, i) + sol.p.at(k + 1, i - 1)) /
                     (dx * dx);
            }
            const double u = hjb.u_star.at(k, i);
            const double y = hjb.value.at(k + 1, i);
            const double gamma = scenario.at(k, i);
            const double sv = system.sigma(t, x, u);
            const double drift = system.h(t, x, u) * d1 + 0.5 * sv * sv * d2 +
                                 (system.h_x(t, x, u) + system.g_y(t, x, y, u)) *
                                     sol.p.at(k + 1, i) +
                                 system.sigma_x(t, x, u) * sv * d1 + system.g_x(t, x, y, u);
            sol.p.at(k, i) = sol.p.at(k + 1, i) + dt * gamma * drift;
            if (!std::isfinite(sol.p.at(k, i)))
                throw NumericalError("adjoint_pde: non-finite value at slice " +
                                     std::to_string(k) + ", node " + std::to_string(i));
        }
    }

    const DerivativeFields dp = derivative_fields(sol.p, grid);
    sol.q = Field(grid.n + 1, grid.m, 0.0, "q");
    for (int k = 0; k <= grid.n; ++k)
        for (int i = 0; i < grid.m; ++i)
            sol.q.at(k, i) =
                dp.dx.at(k, i) * system.sigma(grid.t(k), grid.x(i), hjb.u_star.at(k, i));
    sol.n_residual = 0.0;  // Markovian marker
    return sol;
}

AdjointMcResult adjoint_mc(const ControlSystem& system, const ScenarioField& scenario,
                           const Field& control_field, const GTildeSpec& spec, const Grid& grid,
                           int t_index, double x_init, int n_paths, std::uint64_t seed,
                           const Field* y_field, const AdjointSolution* hedge) {
    if (n_paths < 1) throw std::invalid_argument("adjoint_mc: need n_paths >= 1");
    const PathBundle paths = simulate_paths(system, scenario, control_field, spec, grid, n_paths,
                                            seed, x_init, t_index, y_field);

    const double dt = grid.dt();
    std::vector<double> zeta(static_cast<std::size_t>(n_paths));
    std::vector<double> hedged(static_cast<std::size_t>(n_paths), 0.0);
    std::vector<double> btotal(static_cast<std::size_t>(n_paths));
    double mean = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        double gx_integral = 0.0;
        double hedge_sum = 0.0;
        for (int s = 0; s < paths.n_steps; ++s) {
            const int k = t_index + s;
            const std::size_t cur = paths.idx(p, s);
            const double xs = paths.x[cur];
            const int node = grid.nearest_index(xs);
            const double u = control_field.at(k, node);
            const double y = y_field ? y_field->at(k, node) : 0.0;
            const double gamma_dt = paths.qv[cur + 1] - paths.qv[cur];
            gx_integral +=
                system.g_x(grid.t(k), xs, y, u) * paths.lweight[cur] * gamma_dt;
            if (hedge) {
                const double db = paths.b[cur + 1] - paths.b[cur];
                hedge_sum += hedge->q.at(k, node) * db;
            }
        }
        (void)dt;
        const std::size_t last = paths.idx(p, paths.n_steps);
        const double value = system.phi_x(paths.x[last]) * paths.lweight[last] + gx_integral;
        zeta[static_cast<std::size_t>(p)] = value;
        hedged[static_cast<std::size_t>(p)] = value - hedge_sum;
        btotal[static_cast<std::size_t>(p)] = paths.b[last] - paths.b[paths.idx(p, 0)];
        mean += value;
    }
    mean /= n_paths;

    double var = 0.0;
    for (double z : zeta) var += (z - mean) * (z - mean);
    var = n_paths > 1 ? var / (n_paths - 1) : 0.0;

    AdjointMcResult out;
    out.estimate = mean;
    out.std_error = std::sqrt(var / n_paths);
    out.n_paths = n_paths;
    out.seed = seed;

    if (hedge && n_paths > 1) {
        double hm = 0.0, bm = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            hm += hedged[static_cast<std::size_t>(p)];
            bm += btotal[static_cast<std::size_t>(p)];
        }
        hm /= n_paths;
        bm /= n_paths;
        double cov = 0.0, vh = 0.0, vb = 0.0;
        for (int p = 0; p < n_paths; ++p) {
            const double dh = hedged[static_cast<std::size_t>(p)] - hm;
            const double db = btotal[static_cast<std::size_t>(p)] - bm;
            cov += dh * db;
            vh += dh * dh;
            vb += db * db;
        }
        out.orthogonality_defect = cov / (std::sqrt(vh * vb) + 1e-300);
    }
    return out;
}

HamiltonianValue hamiltonian_eval(const ControlSystem& system, double t, double x, double y,
                                  double v, double p, double q) {
    if (v < system.u_lo - 1e-12 || v > system.u_hi + 1e-12)
        throw std::invalid_argument("hamiltonian_eval: control outside U");
    HamiltonianValue out;
    out.H = system.h(t, x, v) * p + system.sigma(t, x, v) * q + system.g(t, x, y, v);
    out.H_v = system.h_v(t, x, v) * p + system.sigma_v(t, x, v) * q + system.g_v(t, x, y, v);
    return out;
}

}  // namespace uvc
