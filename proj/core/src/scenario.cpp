#include "uvc/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uvc {

void ScenarioField::validate(const GBounds& bounds) const {
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < m_; ++i) {
            const double g = at(k, i);
            if (!(g >= bounds.sig2_low && g <= bounds.sig2_high))
                throw std::invalid_argument("ScenarioField: gamma(" + std::to_string(k) + "," +
                                            std::to_string(i) + ") = " + std::to_string(g) +
                                            " outside the variance band");
        }
}

ScenarioField ScenarioField::spliced_at(int k_switch, const ScenarioField& tail) const {
    if (tail.n_ != n_ || tail.m_ != m_)
        throw std::invalid_argument("ScenarioField: splice shape mismatch");
    ScenarioField out = *this;
    for (int k = std::max(k_switch, 0); k < n_; ++k)
        for (int i = 0; i < m_; ++i) out.at(k, i) = tail.at(k, i);
    return out;
}

ScenarioField reference_scenario(const HJBSolution& hjb, const GTildeSpec& spec,
                                 const ControlSystem& system, const Grid& grid, int* clip_count) {
    ScenarioField field(grid.n, grid.m, spec.bounds().sig2_low);
    int clipped = 0;
    for (int k = 0; k < grid.n; ++k) {
        for (int i = 0; i < grid.m; ++i) {
            const double fb = hjb.f_bar(system, grid, k, i, hjb.u_star.at(k, i));
            double gamma = 2.0 * spec.derivative(fb);
            if (gamma < spec.bounds().sig2_low) {
                gamma = spec.bounds().sig2_low;
                ++clipped;
            } else if (gamma > spec.bounds().sig2_high) {
                gamma = spec.bounds().sig2_high;
                ++clipped;
            }
            field.at(k, i) = gamma;
        }
    }
    if (clip_count) *clip_count = clipped;
    return field;
}

namespace {

// splitmix64: decorrelates the per-path seeds.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// A dedicated small PRNG keeps the normal draws identical across standard
// libraries, which the byte-stable output contract relies on.
struct PathRng {
    std::uint64_t s;
    bool have_spare = false;
    double spare = 0.0;

    PathRng(std::uint64_t seed, std::uint64_t path) {
        std::uint64_t st = seed + 0x9e3779b97f4a7c15ull * (path + 1);
        splitmix64(st);
        splitmix64(st);
        s = st;
    }

    double uniform() {  // in (0, 1)
        const std::uint64_t bits = splitmix64(s) >> 11;  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double normal() {  // Box-Muller
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        constexpr double two_pi = 6.28318530717958647692;
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(two_pi * u2);
        have_spare = true;
        return r * std::cos(two_pi * u2);
    }
};

}  // namespace

PathBundle simulate_paths(const ControlSystem& system, const ScenarioField& scenario,
                          const Field& control_field, const GTildeSpec& spec, const Grid& grid,
                          int n_paths, std::uint64_t seed, double x_init, int t_start,
                          const Field* y_field) {
    if (n_paths < 1) throw std::invalid_argument("simulate_paths: need n_paths >= 1");
    if (t_start < 0 || t_start >= grid.n)
        throw std::invalid_argument("simulate_paths: t_start outside [0, n)");
    if (scenario.steps() != grid.n || scenario.nodes() != grid.m)
        throw std::invalid_argument("simulate_paths: scenario shape mismatch");

    PathBundle out;
    out.seed = seed;
    out.n_paths = n_paths;
    out.n_steps = grid.n - t_start;
    out.t_start = t_start;
    out.dt = grid.dt();
    const std::size_t len = static_cast<std::size_t>(n_paths) *
                            static_cast<std::size_t>(out.n_steps + 1);
    out.x.assign(len, 0.0);
    out.b.assign(len, 0.0);
    out.qv.assign(len, 0.0);
    out.lambda.assign(len, 1.0);
    out.lweight.assign(len, 1.0);
    out.rho_int.assign(len, 0.0);

    const double dt = grid.dt();
    long exits = 0;
    for (int p = 0; p < n_paths; ++p) {
        PathRng rng(seed, static_cast<std::uint64_t>(p));
        double xv = x_init;
        out.x[out.idx(p, 0)] = xv;
        for (int s = 0; s < out.n_steps; ++s) {
            const int k = t_start + s;
            const double t = grid.t(k);
            if (!grid.contains(xv)) ++exits;
            const int node = grid.nearest_index(xv);
            const double gamma = scenario.at(k, node);
            const double u = control_field.at(k, node);
            const double y = y_field ? y_field->at(k, node) : 0.0;

            const double xi = rng.normal();
            const double db = std::sqrt(gamma * dt) * xi;
            const double hv = system.h(t, xv, u);
            const double sv = system.sigma(t, xv, u);
            const double hx = system.h_x(t, xv, u);
            const double sx = system.sigma_x(t, xv, u);
            const double gy = system.g_y(t, xv, y, u);

            const std::size_t cur = out.idx(p, s);
            const std::size_t nxt = cur + 1;
            out.x[nxt] = xv + hv * gamma * dt + sv * db;
            out.b[nxt] = out.b[cur] + db;
            out.qv[nxt] = out.qv[cur] + gamma * dt;
            out.lambda[nxt] = out.lambda[cur] * std::exp(gy * gamma * dt);
            out.lweight[nxt] =
                out.lweight[cur] *
                std::exp(sx * db + (hx + gy - 0.5 * sx * sx) * gamma * dt);
            out.rho_int[nxt] = out.rho_int[cur] + spec.penalty(gamma) * dt;
            xv = out.x[nxt];
        }
    }
    out.exit_fraction = static_cast<double>(exits) /
                        (static_cast<double>(n_paths) * static_cast<double>(out.n_steps));
    return out;
}

double penalty_alpha(const ScenarioField& scenario, const GTildeSpec& spec,
                     const PathBundle& paths) {
    (void)scenario;
    if (paths.n_paths < 1) throw std::invalid_argument("penalty_alpha: empty path bundle");
    if (spec.is_sublinear()) return 0.0;
    double sum = 0.0;
    for (int p = 0; p < paths.n_paths; ++p) sum += paths.rho_int[paths.idx(p, paths.n_steps)];
    return sum / paths.n_paths;
}

}  // namespace uvc
