#include "uvc/system.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "uvc/expression.hpp"

namespace uvc {

void ControlSystem::validate() const {
    if (!(u_lo <= u_hi)) throw std::invalid_argument("ControlSystem: empty control interval");
    if (!(L > 0.0)) throw std::invalid_argument("ControlSystem: growth constant L must be > 0");
    if (!h || !sigma || !g || !phi || !h_x || !h_v || !sigma_x || !sigma_v || !g_x || !g_y ||
        !g_v || !phi_x)
        throw std::invalid_argument("ControlSystem: missing coefficient or derivative");
}

ControlSystem example1_system() {
    ControlSystem s;
    s.name = "example1";
    s.h = [](double, double x, double) { return x; };
    s.sigma = [](double, double, double v) { return v; };
    s.g = [](double, double, double y, double v) { return -(2.0 * y + v); };
    s.phi = [](double x) { return x * x; };
    s.h_x = [](double, double, double) { return 1.0; };
    s.h_v = [](double, double, double) { return 0.0; };
    s.sigma_x = [](double, double, double) { return 0.0; };
    s.sigma_v = [](double, double, double) { return 1.0; };
    s.g_x = [](double, double, double, double) { return 0.0; };
    s.g_y = [](double, double, double, double) { return -2.0; };
    s.g_v = [](double, double, double, double) { return -1.0; };
    s.phi_x = [](double x) { return 2.0 * x; };
    // Smallest constant satisfying |h_x|+|h_v|+|s_x|+|s_v|+|g_y| <= L here.
    s.L = 4.0;
    s.u_lo = 0.0;
    s.u_hi = 1.0;
    return s;
}

namespace {

constexpr double kFdStep = 1e-5;

ControlSystem::Coef coef_from_expr(const Expression& e) {
    return [e](double t, double x, double v) { return e.eval(t, x, 0.0, v); };
}

ControlSystem::CostCoef cost_from_expr(const Expression& e) {
    return [e](double t, double x, double y, double v) { return e.eval(t, x, y, v); };
}

// Central difference in the named argument of a stored expression.
ControlSystem::Coef coef_diff(const Expression& e, int arg) {
    return [e, arg](double t, double x, double v) {
        const double tp = arg == 0 ? kFdStep : 0.0;
        const double xp = arg == 1 ? kFdStep : 0.0;
        const double vp = arg == 3 ? kFdStep : 0.0;
        return (e.eval(t + tp, x + xp, 0.0, v + vp) - e.eval(t - tp, x - xp, 0.0, v - vp)) /
               (2.0 * kFdStep);
    };
}

ControlSystem::CostCoef cost_diff(const Expression& e, int arg) {
    return [e, arg](double t, double x, double y, double v) {
        const double xp = arg == 1 ? kFdStep : 0.0;
        const double yp = arg == 2 ? kFdStep : 0.0;
        const double vp = arg == 3 ? kFdStep : 0.0;
        return (e.eval(t, x + xp, y + yp, v + vp) - e.eval(t, x - xp, y - yp, v - vp)) /
               (2.0 * kFdStep);
    };
}

void run_bound_check(const ControlSystem& s, std::vector<std::string>* warnings) {
    if (!warnings) return;
    std::mt19937_64 rng(20240811u);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    std::uniform_real_distribution<double> uxy(-5.0, 5.0);
    std::uniform_real_distribution<double> uv(s.u_lo, s.u_hi);
    double worst_first = 0.0, worst_second = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double t = ut(rng), x = uxy(rng), y = uxy(rng), v = uv(rng);
        const double first = std::abs(s.h_x(t, x, v)) + std::abs(s.h_v(t, x, v)) +
                             std::abs(s.sigma_x(t, x, v)) + std::abs(s.sigma_v(t, x, v)) +
                             std::abs(s.g_y(t, x, y, v));
        const double second = std::abs(s.g_x(t, x, y, v)) + std::abs(s.g_v(t, x, y, v)) +
                              std::abs(s.phi_x(x)) - s.L * (1.0 + std::abs(x) + std::abs(v));
        worst_first = std::max(worst_first, first - s.L);
        worst_second = std::max(worst_second, second);
    }
    if (worst_first > 1e-9)
        warnings->push_back("derivative bound |h_x|+|h_v|+|sigma_x|+|sigma_v|+|g_y| <= L exceeded "
                            "by " +
                            std::to_string(worst_first) + " on the sampled domain");
    if (worst_second > 1e-9)
        warnings->push_back("growth bound |g_x|+|g_v|+|Phi_x| <= L(1+|x|+|v|) exceeded by " +
                            std::to_string(worst_second) + " on the sampled domain");
}

}  // namespace

ControlSystem build_system(const SystemConfig& config, std::vector<std::string>* warnings) {
    if (!config.name.empty()) {
        if (!config.h.empty() || !config.sigma.empty() || !config.g.empty() ||
            !config.phi.empty())
            throw std::invalid_argument(
                "build_system: give either a registry name or expressions, not both");
        if (config.name == "example1") {
            ControlSystem s = example1_system();
            run_bound_check(s, warnings);
            return s;
        }
        throw std::invalid_argument("build_system: unknown system '" + config.name + "'");
    }
    if (config.h.empty() || config.sigma.empty() || config.g.empty() || config.phi.empty())
        throw std::invalid_argument("build_system: expressions h, sigma, g, phi are all required");

    const Expression eh = Expression::parse(config.h);
    const Expression esigma = Expression::parse(config.sigma);
    const Expression eg = Expression::parse(config.g);
    const Expression ephi = Expression::parse(config.phi);

    ControlSystem s;
    s.name = "custom";
    s.h = coef_from_expr(eh);
    s.sigma = coef_from_expr(esigma);
    s.g = cost_from_expr(eg);
    s.phi = [ephi](double x) { return ephi.eval(0.0, x, 0.0, 0.0); };

    auto coef_deriv = [&](const std::string& text, const Expression& base, int arg) {
        return text.empty() ? coef_diff(base, arg) : coef_from_expr(Expression::parse(text));
    };
    auto cost_deriv = [&](const std::string& text, const Expression& base, int arg) {
        return text.empty() ? cost_diff(base, arg) : cost_from_expr(Expression::parse(text));
    };
    s.h_x = coef_deriv(config.h_x, eh, 1);
    s.h_v = coef_deriv(config.h_v, eh, 3);
    s.sigma_x = coef_deriv(config.sigma_x, esigma, 1);
    s.sigma_v = coef_deriv(config.sigma_v, esigma, 3);
    s.g_x = cost_deriv(config.g_x, eg, 1);
    s.g_y = cost_deriv(config.g_y, eg, 2);
    s.g_v = cost_deriv(config.g_v, eg, 3);
    if (config.phi_x.empty()) {
        s.phi_x = [ephi](double x) {
            return (ephi.eval(0.0, x + kFdStep, 0.0, 0.0) - ephi.eval(0.0, x - kFdStep, 0.0, 0.0)) /
                   (2.0 * kFdStep);
        };
    } else {
        const Expression e = Expression::parse(config.phi_x);
        s.phi_x = [e](double x) { return e.eval(0.0, x, 0.0, 0.0); };
    }

    s.u_lo = config.u_lo;
    s.u_hi = config.u_hi;
    s.L = config.L;
    s.validate();
    run_bound_check(s, warnings);
    return s;
}

double LSolution::at(double time) const {
    if (t.empty()) throw std::logic_error("LSolution: empty");
    if (time <= t.front()) return l.front();
    if (time >= t.back()) return l.back();
    const double dt = t[1] - t[0];
    auto k = static_cast<std::size_t>((time - t.front()) / dt);
    k = std::min(k, t.size() - 2);
    const double s = (time - t[k]) / dt;
    // Cubic Hermite in [t_k, t_{k+1}] using the stored slopes.
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * l[k] + h10 * dt * dl[k] + h01 * l[k + 1] + h11 * dt * dl[k + 1];
}

LSolution solve_l_ode(const GTildeSpec& spec, double T, int n_steps) {
    if (n_steps < 10) throw std::invalid_argument("solve_l_ode: need n_steps >= 10");
    const double dt = T / n_steps;
    const auto n = static_cast<std::size_t>(n_steps);

    LSolution sol;
    sol.t.resize(n + 1);
    sol.l.resize(n + 1);
    sol.dl.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) sol.t[k] = T * static_cast<double>(k) / n_steps;

    const auto f = [&spec](double l) { return -spec.eval(-4.0 * l - 0.5); };

    sol.l[n] = 0.0;
    sol.dl[n] = f(0.0);
    for (std::size_t k = n; k-- > 0;) {
        const double l1 = sol.l[k + 1];
        const double h = -dt;  // integrating backward in time
        const double k1 = f(l1);
        const double k2 = f(l1 + 0.5 * h * k1);
        const double k3 = f(l1 + 0.5 * h * k2);
        const double k4 = f(l1 + h * k3);
        sol.l[k] = l1 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sol.dl[k] = f(sol.l[k]);
    }
    return sol;
}

}  // namespace uvc
