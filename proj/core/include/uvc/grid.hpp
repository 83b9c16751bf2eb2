#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace uvc {

/// Uniform (t, x) grid over [0, horizon] x [x_lo, x_hi]: m space nodes,
/// n time steps (so n + 1 time slices).
struct Grid {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int m = 0;
    double horizon = 0.0;
    int n = 0;

    Grid() = default;
    Grid(double x_lo_, double x_hi_, int m_, double horizon_, int n_)
        : x_lo(x_lo_), x_hi(x_hi_), m(m_), horizon(horizon_), n(n_) {
        validate();
    }

    void validate() const {
        if (m < 3 || n < 1 || !(x_lo < x_hi) || !(horizon > 0.0))
            throw std::invalid_argument("Grid: need m >= 3, n >= 1, x_lo < x_hi, horizon > 0");
    }

    double dx() const { return (x_hi - x_lo) / (m - 1); }
    double dt() const { return horizon / n; }
    double x(int i) const { return x_lo + dx() * i; }
    double t(int k) const { return horizon * static_cast<double>(k) / n; }

    int nearest_index(double xq) const {
        const int i = static_cast<int>(std::lround((xq - x_lo) / dx()));
        return std::clamp(i, 0, m - 1);
    }
    bool contains(double xq) const { return xq >= x_lo && xq <= x_hi; }
};

/// Grid-valued function of (time slice k, node i), k in [0, n], i in [0, m).
/// A short label records what the field represents.
class Field {
public:
    Field() = default;
    Field(int n_slices, int m_nodes, double fill = 0.0, std::string label = {})
        : n_(n_slices), m_(m_nodes),
          values_(static_cast<std::size_t>(n_slices) * static_cast<std::size_t>(m_nodes), fill),
          label_(std::move(label)) {}

    static Field constant(const Grid& grid, double value, std::string label = {}) {
        return Field(grid.n + 1, grid.m, value, std::move(label));
    }

    double& at(int k, int i) { return values_[idx(k, i)]; }
    double at(int k, int i) const { return values_[idx(k, i)]; }

    /// Linear interpolation in x on slice k, clamped to the domain.
    double interp(const Grid& grid, int k, double xq) const {
        const double pos = (std::clamp(xq, grid.x_lo, grid.x_hi) - grid.x_lo) / grid.dx();
        const int i = std::min(static_cast<int>(pos), m_ - 2);
        const double w = pos - i;
        return (1.0 - w) * at(k, i) + w * at(k, i + 1);
    }

    int slices() const { return n_; }
    int nodes() const { return m_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t idx(int k, int i) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(i);
    }

    int n_ = 0;
    int m_ = 0;
    std::vector<double> values_;
    std::string label_;
};

}  // namespace uvc
