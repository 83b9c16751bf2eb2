#pragma once

#include <functional>
#include <span>

#include "uvc/gtilde.hpp"

namespace uvc {

/// Payoff of a discrete path of the canonical process: the span holds the
/// B values after steps 1..depth.
using PathPayoff = std::function<double(std::span<const double>)>;

/// Exact discrete analogue of the convex expectation on a trinomial tree
/// with increments {-D, 0, +D}, D = sig2_high^(1/2) * sqrt(dt * c3).
/// Per step and per node the variance gamma is chosen from the penalty
/// grid to maximize (conditional expectation - rho(gamma) dt), with branch
/// probabilities matching mean 0 and variance gamma*dt. Requires depth <= 8;
/// throws std::invalid_argument when c3 makes a probability negative.
double tree_expectation(const GTildeSpec& spec, int depth, double dt, const PathPayoff& payoff,
                        double c3 = 1.5);

/// Oracle: exhaustive enumeration of every feedback assignment of gamma to
/// the recombining lattice nodes, evaluating each penalized expectation by a
/// full forward pass over the 3^depth paths. Agrees with tree_expectation
/// whenever conditional values collapse to functions of the current node
/// (any payoff of the terminal value). Throws when the assignment count is
/// too large to enumerate.
double brute_force_tree_expectation(const GTildeSpec& spec, int depth, double dt,
                                    const PathPayoff& payoff, double c3 = 1.5);

}  // namespace uvc
