#include "uvc/tree.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uvc {

namespace {

struct TreeGeometry {
    double delta;
    double dt;
    int depth;
};

TreeGeometry make_geometry(const GTildeSpec& spec, int depth, double dt, double c3) {
    if (depth < 1 || depth > 8)
        throw std::invalid_argument("tree: depth must be in [1, 8]");
    if (!(dt > 0.0)) throw std::invalid_argument("tree: dt must be positive");
    // p0 = 1 - gamma/(sig2_high*c3) must stay nonnegative for gamma = sig2_high.
    if (c3 < 1.0)
        throw std::invalid_argument("tree: invalid probability, need c3 >= 1");
    const double delta = std::sqrt(spec.bounds().sig2_high * dt * c3);
    return {delta, dt, depth};
}

struct BranchProbs {
    double down, mid, up;
};

BranchProbs probs_for(const TreeGeometry& geo, double gamma) {
    const double p = gamma * geo.dt / (2.0 * geo.delta * geo.delta);
    return {p, 1.0 - 2.0 * p, p};
}

double dp_value(const GTildeSpec& spec, const TreeGeometry& geo, const PathPayoff& payoff,
                std::vector<double>& path, int k) {
    if (k == geo.depth) return payoff(std::span<const double>(path.data(), path.size()));
    const double b = k == 0 ? 0.0 : path[static_cast<std::size_t>(k - 1)];
    path.push_back(b - geo.delta);
    const double v_down = dp_value(spec, geo, payoff, path, k + 1);
    path.back() = b;
    const double v_mid = dp_value(spec, geo, payoff, path, k + 1);
    path.back() = b + geo.delta;
    const double v_up = dp_value(spec, geo, payoff, path, k + 1);
    path.pop_back();

    const auto& grid = spec.gamma_grid();
    const auto& rho = spec.rho();
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const BranchProbs p = probs_for(geo, grid[j]);
        const double candidate =
            p.down * v_down + p.mid * v_mid + p.up * v_up - rho[j] * geo.dt;
        best = std::max(best, candidate);
    }
    return best;
}

}  // namespace

double tree_expectation(const GTildeSpec& spec, int depth, double dt, const PathPayoff& payoff,
                        double c3) {
    const TreeGeometry geo = make_geometry(spec, depth, dt, c3);
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(depth));
    return dp_value(spec, geo, payoff, path, 0);
}

double brute_force_tree_expectation(const GTildeSpec& spec, int depth, double dt,
                                    const PathPayoff& payoff, double c3) {
    const TreeGeometry geo = make_geometry(spec, depth, dt, c3);
    const auto& grid = spec.gamma_grid();
    const auto& rho = spec.rho();
    const auto n_gamma = static_cast<int>(grid.size());
    if (n_gamma > 5)
        throw std::invalid_argument("brute_force_tree_expectation: gamma grid too large (max 5)");

    // Lattice node (k, j), j in [-k, k], flattened as k^2 + (j + k).
    const int n_nodes = depth * depth;
    const double combos = std::pow(static_cast<double>(n_gamma), n_nodes);
    if (combos > 2.5e8)
        throw std::invalid_argument("brute_force_tree_expectation: enumeration too large");

    // Precompute every path: per-level lattice node id, branch labels, payoff.
    const int n_paths_total = [&] {
        int p = 1;
        for (int k = 0; k < depth; ++k) p *= 3;
        return p;
    }();
    std::vector<int> path_nodes(static_cast<std::size_t>(n_paths_total) *
                                static_cast<std::size_t>(depth));
    std::vector<int> path_branch(path_nodes.size());
    std::vector<double> path_payoff(static_cast<std::size_t>(n_paths_total));
    {
        std::vector<double> b(static_cast<std::size_t>(depth));
        for (int p = 0; p < n_paths_total; ++p) {
            int code = p;
            int j = 0;
            for (int k = 0; k < depth; ++k) {
                const auto slot =
                    static_cast<std::size_t>(p) * static_cast<std::size_t>(depth) +
                    static_cast<std::size_t>(k);
                path_nodes[slot] = k * k + (j + k);
                const int branch = code % 3;  // 0 down, 1 mid, 2 up
                code /= 3;
                path_branch[slot] = branch;
                j += branch - 1;
                b[static_cast<std::size_t>(k)] = j * geo.delta;
            }
            path_payoff[static_cast<std::size_t>(p)] =
                payoff(std::span<const double>(b.data(), b.size()));
        }
    }

    std::vector<double> prob_of(static_cast<std::size_t>(n_gamma) * 3);
    std::vector<double> penalty_of(static_cast<std::size_t>(n_gamma));
    for (int g = 0; g < n_gamma; ++g) {
        const BranchProbs p = probs_for(geo, grid[static_cast<std::size_t>(g)]);
        prob_of[static_cast<std::size_t>(g) * 3 + 0] = p.down;
        prob_of[static_cast<std::size_t>(g) * 3 + 1] = p.mid;
        prob_of[static_cast<std::size_t>(g) * 3 + 2] = p.up;
        penalty_of[static_cast<std::size_t>(g)] = rho[static_cast<std::size_t>(g)] * geo.dt;
    }

    std::vector<int> assign(static_cast<std::size_t>(n_nodes), 0);
    double best = -std::numeric_limits<double>::infinity();
    while (true) {
        double total = 0.0;
        for (int p = 0; p < n_paths_total; ++p) {
            double prob = 1.0;
            double penalty = 0.0;
            const auto base = static_cast<std::size_t>(p) * static_cast<std::size_t>(depth);
            for (int k = 0; k < depth; ++k) {
                const int g = assign[static_cast<std::size_t>(path_nodes[base + k])];
                prob *= prob_of[static_cast<std::size_t>(g) * 3 +
                                static_cast<std::size_t>(path_branch[base + k])];
                penalty += penalty_of[static_cast<std::size_t>(g)];
            }
            total += prob * (path_payoff[static_cast<std::size_t>(p)] - penalty);
        }
        best = std::max(best, total);

        // Odometer over assignments.
        int pos = 0;
        while (pos < n_nodes) {
            if (++assign[static_cast<std::size_t>(pos)] < n_gamma) break;
            assign[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n_nodes) break;
    }
    return best;
}

}  // namespace uvc
