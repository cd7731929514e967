#include "metacovert/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "metacovert/errors.hpp"

namespace metacovert::numerics {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kGammaMaxIterations = 100000;
constexpr long kHypergeometricMaxTerms = 1000000;

bool is_nonpositive_integer(double v) { return v <= 0.0 && std::floor(v) == v; }

// Series for P(a, x); valid for x < a + 1.
double lower_gamma_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kGammaMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw MaxIterationsError("reg_lower_gamma: series did not converge");
}

// Continued fraction for Q(a, x) (modified Lentz); valid for x >= a + 1.
double upper_gamma_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kGammaMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
        }
    }
    throw MaxIterationsError("reg_upper_gamma: continued fraction did not converge");
}

void check_gamma_args(double a, double x, const char* name) {
    if (!(a > 0.0) || !(x >= 0.0)) {
        std::ostringstream msg;
        msg << name << ": requires a > 0 and x >= 0 (got a=" << a << ", x=" << x << ")";
        throw DomainError(msg.str());
    }
}

double hypergeometric_series(double a, double b, double c, double z) {
    double sum = 1.0;
    double term = 1.0;
    for (long n = 0; n < kHypergeometricMaxTerms; ++n) {
        const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0));
        term *= ratio * z;
        sum += term;
        if (term == 0.0) return sum;  // terminating series
        // Ratios tend to |z|; bound the remaining tail geometrically by the
        // larger of the current ratio and its limit.
        const double q = std::max(std::abs(ratio * z), std::abs(z));
        if (q < 1.0 && std::abs(term) * q / (1.0 - q) <= 0.25 * kEps * std::abs(sum)) return sum;
    }
    throw MaxIterationsError("gauss_2f1: series did not converge");
}

// 15-point Kronrod rule with embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const ScalarFunction& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        abs_sum += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    const double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    error = std::max(error, 50.0 * kEps * abs_sum * std::abs(half));
    return {a, b, value, error};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
        throw DomainError("QuadratureSpec: tolerances must be > 0 and max_subdivisions >= 1");
    }
}

void Bracket::validate() const {
    if (!(lo < hi)) {
        std::ostringstream msg;
        msg << "Bracket: requires lo < hi (got [" << lo << ", " << hi << "])";
        throw DomainError(msg.str());
    }
}

double reg_lower_gamma(double a, double x) {
    check_gamma_args(a, x, "reg_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (a == 1.0) return -std::expm1(-x);
    if (a == 0.5) return std::erf(std::sqrt(x));
    if (x < a + 1.0) return std::min(1.0, lower_gamma_series(a, x));
    return std::max(0.0, 1.0 - upper_gamma_fraction(a, x));
}

double reg_upper_gamma(double a, double x) {
    check_gamma_args(a, x, "reg_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (a == 1.0) return std::exp(-x);
    if (a == 0.5) return std::erfc(std::sqrt(x));
    if (x < a + 1.0) return std::max(0.0, 1.0 - lower_gamma_series(a, x));
    return std::min(1.0, upper_gamma_fraction(a, x));
}

double gauss_2f1(double a, double b, double c, double z) {
    if (is_nonpositive_integer(c)) throw DomainError("gauss_2f1: c must not be a nonpositive integer");
    if (!(z < 1.0)) throw DomainError("gauss_2f1: requires z < 1");
    if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
    if (z > -0.5) return hypergeometric_series(a, b, c, z);

    const double w = z / (z - 1.0);
    const bool terminates_in_a = is_nonpositive_integer(c - b);
    const bool terminates_in_b = is_nonpositive_integer(c - a);
    // Prefer the form whose series tail decays faster as w -> 1.
    const bool use_a_form = terminates_in_a || (!terminates_in_b && a <= b);
    if (use_a_form) return std::pow(1.0 - z, -a) * hypergeometric_series(a, c - b, c, w);
    return std::pow(1.0 - z, -b) * hypergeometric_series(c - a, b, c, w);
}

QuadratureResult integrate_interval(const ScalarFunction& f, double a, double b,
                                    const QuadratureSpec& spec) {
    spec.validate();
    if (a == b) return {};
    if (a > b) {
        QuadratureResult flipped = integrate_interval(f, b, a, spec);
        flipped.value = -flipped.value;
        return flipped;
    }

    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(f, a, b);
    double total = first.value;
    double total_error = first.error;
    heap.push(first);
    int intervals = 1;

    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

    while (total_error > tolerance()) {
        if (intervals >= spec.max_subdivisions) break;
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum to shed the drift of the incremental updates.
    total = 0.0;
    total_error = 0.0;
    std::vector<Segment> segments;
    segments.reserve(heap.size());
    while (!heap.empty()) {
        segments.push_back(heap.top());
        heap.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& l, const Segment& r) { return l.a < r.a; });
    for (const Segment& s : segments) {
        total += s.value;
        total_error += s.error;
    }

    if (!std::isfinite(total) || !std::isfinite(total_error)) {
        throw ToleranceError("integrate: integrand produced non-finite values", total, total_error);
    }
    if (total_error > tolerance()) {
        std::ostringstream msg;
        msg << "integrate: tolerance not met after " << intervals << " subdivisions (estimate "
            << total << ", error bound " << total_error << ")";
        throw ToleranceError(msg.str(), total, total_error);
    }
    return {total, total_error, intervals};
}

QuadratureResult integrate_semi_infinite(const ScalarFunction& f, const QuadratureSpec& spec,
                                         double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("integrate_semi_infinite: scale must be positive and finite");
    }
    const ScalarFunction mapped = [&f, scale](double t) {
        const double one_minus = 1.0 - t;
        const double x = scale * t / one_minus;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx * scale / (one_minus * one_minus);
    };
    return integrate_interval(mapped, 0.0, 1.0, spec);
}

RootResult solve_bracketed(const ScalarFunction& f, Bracket bracket, double tol, int max_iterations) {
    bracket.validate();
    if (!(tol > 0.0)) throw DomainError("find_root_bracketed: tol must be > 0");

    double a = bracket.lo;
    double b = bracket.hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, a, a, 0};
    if (fb == 0.0) return {b, b, b, 0};
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "find_root_bracketed: no sign change on [" << a << ", " << b << "] (f=" << fa << ", "
            << fb << ")";
        throw NoSignChangeError(msg.str());
    }

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) {
            return {b, std::min(b, c), std::max(b, c), iter};
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation, or secant when only two points are distinct.
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw MaxIterationsError("find_root_bracketed: maximum iterations exceeded");
}

double find_root_bracketed(const ScalarFunction& f, Bracket bracket, double tol) {
    return solve_bracketed(f, bracket, tol).x;
}

Minimum minimize_scalar(const ScalarFunction& f, Bracket bracket, double tol, int max_iterations) {
    bracket.validate();
    if (!(tol > 0.0)) throw DomainError("minimize_scalar: tol must be > 0");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = bracket.lo;
    double b = bracket.hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int iter = 0;
    while (b - a > tol) {
        if (++iter > max_iterations) throw MaxIterationsError("minimize_scalar: maximum iterations exceeded");
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    Minimum best = f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
    for (const double edge : {bracket.lo, bracket.hi}) {
        const double fe = f(edge);
        if (fe < best.f) best = {edge, fe};
    }
    return best;
}

}  // namespace metacovert::numerics
