#include "uvc/gtilde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uvc {

void GBounds::validate() const {
    if (!(sig2_low > 0.0) || !(sig2_low <= sig2_high)) {
        throw std::invalid_argument("GBounds: need 0 < sig2_low <= sig2_high, got [" +
                                    std::to_string(sig2_low) + ", " + std::to_string(sig2_high) +
                                    "]");
    }
}

double g_eval(const GBounds& bounds, double a) {
    const double pos = std::max(a, 0.0);
    const double neg = std::max(-a, 0.0);
    return 0.5 * (bounds.sig2_high * pos - bounds.sig2_low * neg);
}

GTildeSpec::GTildeSpec(GBounds bounds, std::vector<double> gamma_grid, std::vector<double> rho)
    : bounds_(bounds), gamma_grid_(std::move(gamma_grid)), rho_(std::move(rho)) {
    sublinear_ = std::all_of(rho_.begin(), rho_.end(), [](double r) { return r == 0.0; });
    breakpoints_.resize(gamma_grid_.size() > 1 ? gamma_grid_.size() - 1 : 0);
    for (std::size_t j = 0; j + 1 < gamma_grid_.size(); ++j) {
        // Lines j, j+1 of the dual tie at a = 2 (rho_{j+1} - rho_j) / (gamma_{j+1} - gamma_j).
        breakpoints_[j] = 2.0 * (rho_[j + 1] - rho_[j]) / (gamma_grid_[j + 1] - gamma_grid_[j]);
    }
}

static std::vector<double> uniform_grid(const GBounds& bounds, int n_points) {
    if (n_points < 2) throw std::invalid_argument("GTildeSpec: need at least 2 grid points");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double span = bounds.sig2_high - bounds.sig2_low;
    for (int j = 0; j < n_points; ++j)
        grid[static_cast<std::size_t>(j)] = bounds.sig2_low + span * j / (n_points - 1);
    grid.back() = bounds.sig2_high;
    return grid;
}

GTildeSpec GTildeSpec::sublinear(GBounds bounds, int n_points) {
    bounds.validate();
    auto grid = uniform_grid(bounds, n_points);
    std::vector<double> rho(grid.size(), 0.0);
    return from_penalty(bounds, std::move(grid), std::move(rho));
}

GTildeSpec GTildeSpec::quadratic_penalty(GBounds bounds, double center, int n_points) {
    bounds.validate();
    if (center < bounds.sig2_low || center > bounds.sig2_high)
        throw std::invalid_argument("GTildeSpec: quadratic penalty center outside the band");
    auto grid = uniform_grid(bounds, n_points);
    // Snap a grid point onto the center so that min rho = 0. Band endpoints
    // stay put; when the center falls nearest to an endpoint, move the
    // adjacent interior point instead (the grid stays strictly increasing
    // because sig2_low < center < sig2_high in that case).
    if (center != grid.front() && center != grid.back()) {
        if (n_points < 3)
            throw std::invalid_argument(
                "GTildeSpec: interior quadratic center needs at least 3 grid points");
        auto it = std::min_element(grid.begin(), grid.end(), [&](double a, double b) {
            return std::abs(a - center) < std::abs(b - center);
        });
        if (it == grid.begin()) ++it;
        if (it + 1 == grid.end()) --it;
        *it = center;
    }
    std::vector<double> rho(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double d = grid[j] - center;
        rho[j] = d * d;
    }
    return from_penalty(bounds, std::move(grid), std::move(rho));
}

GTildeSpec GTildeSpec::from_penalty(GBounds bounds, std::vector<double> gamma_grid,
                                    std::vector<double> rho) {
    GTildeSpec spec(bounds, std::move(gamma_grid), std::move(rho));
    spec.validate();
    return spec;
}

GTildeSpec GTildeSpec::from_penalty_unchecked(GBounds bounds, std::vector<double> gamma_grid,
                                              std::vector<double> rho) {
    return GTildeSpec(bounds, std::move(gamma_grid), std::move(rho));
}

void GTildeSpec::validate() const {
    bounds_.validate();
    if (gamma_grid_.size() < 2 || gamma_grid_.size() != rho_.size())
        throw std::invalid_argument("GTildeSpec: grid/penalty size mismatch or too small");
    if (gamma_grid_.front() != bounds_.sig2_low || gamma_grid_.back() != bounds_.sig2_high)
        throw std::invalid_argument("GTildeSpec: grid must include both band endpoints");
    for (std::size_t j = 0; j + 1 < gamma_grid_.size(); ++j)
        if (!(gamma_grid_[j] < gamma_grid_[j + 1]))
            throw std::invalid_argument("GTildeSpec: grid must be strictly increasing");
    double min_rho = rho_.front();
    for (double r : rho_) {
        if (!(r >= 0.0)) throw std::invalid_argument("GTildeSpec: penalty must be nonnegative");
        min_rho = std::min(min_rho, r);
    }
    if (min_rho != 0.0)
        throw std::invalid_argument("GTildeSpec: penalty must attain 0 (forces eval(0) = 0)");
    for (std::size_t j = 0; j + 2 < gamma_grid_.size(); ++j) {
        // Discrete convexity: slopes nondecreasing.
        const double s0 = (rho_[j + 1] - rho_[j]) / (gamma_grid_[j + 1] - gamma_grid_[j]);
        const double s1 = (rho_[j + 2] - rho_[j + 1]) / (gamma_grid_[j + 2] - gamma_grid_[j + 1]);
        if (s1 < s0 - 1e-14 * std::max(1.0, std::abs(s0)))
            throw std::invalid_argument("GTildeSpec: penalty must be discretely convex");
    }
}

int GTildeSpec::argmax_index(double a) const {
    if (sublinear_) return a > 0.0 ? static_cast<int>(gamma_grid_.size()) - 1 : 0;
    // First j with a <= breakpoints_[j]; ties resolve to the smaller gamma.
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), a);
    return static_cast<int>(it - breakpoints_.begin());
}

double GTildeSpec::eval(double a) const {
    if (sublinear_) return g_eval(bounds_, a);
    const auto j = static_cast<std::size_t>(argmax_index(a));
    return 0.5 * gamma_grid_[j] * a - rho_[j];
}

double GTildeSpec::derivative(double a) const {
    return 0.5 * gamma_grid_[static_cast<std::size_t>(argmax_index(a))];
}

std::pair<double, double> GTildeSpec::argmax_set(double a, double tol) const {
    const int jstar = argmax_index(a);
    const double best = 0.5 * gamma_grid_[static_cast<std::size_t>(jstar)] * a -
                        rho_[static_cast<std::size_t>(jstar)];
    int lo = jstar;
    while (lo > 0) {
        const auto j = static_cast<std::size_t>(lo - 1);
        if (best - (0.5 * gamma_grid_[j] * a - rho_[j]) <= tol)
            --lo;
        else
            break;
    }
    int hi = jstar;
    while (hi + 1 < static_cast<int>(gamma_grid_.size())) {
        const auto j = static_cast<std::size_t>(hi + 1);
        if (best - (0.5 * gamma_grid_[j] * a - rho_[j]) <= tol)
            ++hi;
        else
            break;
    }
    return {gamma_grid_[static_cast<std::size_t>(lo)], gamma_grid_[static_cast<std::size_t>(hi)]};
}

double GTildeSpec::penalty(double gamma) const {
    if (sublinear_) return 0.0;
    if (gamma <= gamma_grid_.front()) return rho_.front();
    if (gamma >= gamma_grid_.back()) return rho_.back();
    auto it = std::upper_bound(gamma_grid_.begin(), gamma_grid_.end(), gamma);
    const auto j = static_cast<std::size_t>(it - gamma_grid_.begin());
    const double w = (gamma - gamma_grid_[j - 1]) / (gamma_grid_[j] - gamma_grid_[j - 1]);
    return (1.0 - w) * rho_[j - 1] + w * rho_[j];
}

double DominationReport::max_defect() const {
    return std::max({zero_defect, monotonicity_defect, domination_defect});
}

DominationReport check_domination(const GTildeSpec& spec,
                                  std::span<const std::pair<double, double>> sample_pairs) {
    DominationReport report;
    report.zero_defect = std::abs(spec.eval(0.0));
    for (const auto& [a3, a4] : sample_pairs) {
        const double lo = std::min(a3, a4);
        const double hi = std::max(a3, a4);
        report.monotonicity_defect =
            std::max(report.monotonicity_defect, spec.eval(lo) - spec.eval(hi));
        report.domination_defect = std::max(
            report.domination_defect, spec.eval(a3) - spec.eval(a4) - g_eval(spec.bounds(), a3 - a4));
    }
    report.monotonicity_defect = std::max(report.monotonicity_defect, 0.0);
    report.domination_defect = std::max(report.domination_defect, 0.0);
    return report;
}

}  // namespace uvc
