#pragma once

#include <functional>

namespace metacovert::numerics {

using ScalarFunction = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;

    void validate() const;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // conservative bound on |value - exact|
    int intervals = 0;
};

struct RootResult {
    double x = 0.0;
    // Final enclosing bracket, with f(x_lo) and f(x_hi) of opposite sign (or zero).
    double x_lo = 0.0;
    double x_hi = 0.0;
    int iterations = 0;
};

struct Minimum {
    double x = 0.0;
    double f = 0.0;
};

/// Regularized lower incomplete gamma P(a, x) = γ(a, x) / Γ(a).
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a) = 1 - P(a, x),
/// computed directly (no cancellation in the tail).
double reg_upper_gamma(double a, double x);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z < 1.
///
/// The power series is summed directly for -0.5 < z < 1. For z <= -0.5 the
/// Pfaff transformation 2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)) maps
/// the argument into [1/3, 1); when c-a is a nonpositive integer the
/// symmetric form in b is used instead because its series terminates.
double gauss_2f1(double a, double b, double c, double z);

/// Adaptive Gauss-Kronrod (7/15) integration over the finite interval [a, b].
/// Endpoints are never evaluated, so integrable endpoint singularities are fine.
/// Throws ToleranceError when max_subdivisions is exhausted.
QuadratureResult integrate_interval(const ScalarFunction& f, double a, double b,
                                    const QuadratureSpec& spec = {});

/// Integral over [0, inf) through the map x = scale * t / (1 - t), t in [0, 1).
/// `scale` should be a characteristic length of the integrand (a mean, say).
QuadratureResult integrate_semi_infinite(const ScalarFunction& f, const QuadratureSpec& spec = {},
                                         double scale = 1.0);

/// Brent's method on a sign-changing bracket. Stops when the enclosing
/// interval is narrower than `tol` or f vanishes exactly.
RootResult solve_bracketed(const ScalarFunction& f, Bracket bracket, double tol,
                           int max_iterations = 200);

double find_root_bracketed(const ScalarFunction& f, Bracket bracket, double tol);

/// Golden-section search refined to width `tol`; the bracket endpoints are
/// also compared so boundary minima come back exactly.
Minimum minimize_scalar(const ScalarFunction& f, Bracket bracket, double tol,
                        int max_iterations = 500);

}  // namespace metacovert::numerics
