#pragma once

#include <span>
#include <utility>
#include <vector>

namespace uvc {

/// Variance band [sig2_low, sig2_high] of the volatility uncertainty model.
/// Generates the sublinear function G(a) = (sig2_high a+ - sig2_low a-) / 2.
struct GBounds {
    double sig2_low = 0.0;
    double sig2_high = 0.0;

    /// Throws std::invalid_argument unless 0 < sig2_low <= sig2_high.
    void validate() const;
};

/// G(a) = (sig2_high * max(a,0) - sig2_low * max(-a,0)) / 2.
double g_eval(const GBounds& bounds, double a);

/// Convex function dominated by G, represented through its penalty dual
///
///     eval(a) = max over grid gamma of ( gamma*a/2 - rho(gamma) )
///
/// on a finite variance grid inside [sig2_low, sig2_high]. rho >= 0,
/// discretely convex and attaining 0 somewhere; together these force
/// eval(0) = 0, monotonicity and domination by G. rho identically zero
/// recovers G itself.
///
/// Immutable after construction; all member functions are const and pure.
class GTildeSpec {
public:
    /// Penalty identically zero on a uniform grid: the sublinear case.
    static GTildeSpec sublinear(GBounds bounds, int n_points = 65);

    /// Quadratic penalty rho(gamma) = (gamma - center)^2 on a uniform grid.
    /// The grid is adjusted to contain `center` exactly so that min rho = 0.
    static GTildeSpec quadratic_penalty(GBounds bounds, double center, int n_points = 65);

    /// Explicit grid/penalty pair. Throws std::invalid_argument when the
    /// grid or penalty violates an invariant (see validate()).
    static GTildeSpec from_penalty(GBounds bounds, std::vector<double> gamma_grid,
                                   std::vector<double> rho);

    /// Same, but skips validation. Intended for diagnostics of deliberately
    /// broken specs (check_domination reports the defects).
    static GTildeSpec from_penalty_unchecked(GBounds bounds, std::vector<double> gamma_grid,
                                             std::vector<double> rho);

    /// Grid inside the band with both endpoints, strictly increasing;
    /// rho >= 0 with min rho = 0; second differences of rho nonnegative.
    void validate() const;

    /// Dual value max_gamma (gamma*a/2 - rho(gamma)).
    double eval(double a) const;

    /// Envelope derivative gamma*(a)/2 where gamma*(a) is the smallest
    /// maximizer of the dual. Lies in [sig2_low/2, sig2_high/2].
    double derivative(double a) const;

    /// Smallest and largest grid gamma whose dual objective is within
    /// `tol` of the maximum.
    std::pair<double, double> argmax_set(double a, double tol) const;

    /// Penalty at an arbitrary gamma in the band, linearly interpolated
    /// between grid points (exact at grid points).
    double penalty(double gamma) const;

    const GBounds& bounds() const { return bounds_; }
    const std::vector<double>& gamma_grid() const { return gamma_grid_; }
    const std::vector<double>& rho() const { return rho_; }
    bool is_sublinear() const { return sublinear_; }

private:
    GTildeSpec(GBounds bounds, std::vector<double> gamma_grid, std::vector<double> rho);

    // Index of the smallest maximizer of the dual objective at a.
    int argmax_index(double a) const;

    GBounds bounds_;
    std::vector<double> gamma_grid_;
    std::vector<double> rho_;
    // Breakpoints of the piecewise-linear upper envelope: a such that lines
    // j and j+1 of the dual tie. Nondecreasing because rho is convex.
    std::vector<double> breakpoints_;
    bool sublinear_ = false;
};

/// Defect magnitudes of the three domination properties, measured on a
/// sample of argument pairs. All should be <= 1e-12 for a valid spec.
struct DominationReport {
    double zero_defect = 0.0;          // |eval(0)|
    double monotonicity_defect = 0.0;  // max of eval(min) - eval(max) over pairs
    double domination_defect = 0.0;    // max of eval(a3) - eval(a4) - G(a3 - a4)

    double max_defect() const;
    bool pass(double tol = 1e-12) const { return max_defect() <= tol; }
};

DominationReport check_domination(const GTildeSpec& spec,
                                  std::span<const std::pair<double, double>> sample_pairs);

}  // namespace uvc
