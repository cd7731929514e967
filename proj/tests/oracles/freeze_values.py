#!/usr/bin/env python3
"""Independent reference values for the C++ unit tests.

Everything here uses numpy/scipy only and shares no code with the library.
The printed numbers are frozen into tests/unit/*.cpp; rerun this script to
regenerate them (runtime: a few minutes, single core).
"""
import math

import numpy as np
from scipy import integrate, optimize, special

RNG_SEED = 20240917
N_MC = 10**7


def alpha_mu_scale(alpha, mu, mean):
    return mean * math.gamma(mu) / math.gamma(mu + 2.0 / alpha)


def alpha_mu_draw(rng, alpha, mu, mean, n):
    return alpha_mu_scale(alpha, mu, mean) * rng.gamma(mu, size=n) ** (2.0 / alpha)


def fisher_draw(rng, m, ms, mean, n):
    return (ms - 1.0) * mean * rng.gamma(m, size=n) / (m * rng.gamma(ms, size=n))


def alpha_mu_cdf(x, alpha, mu, mean):
    return special.gammainc(mu, (x / alpha_mu_scale(alpha, mu, mean)) ** (alpha / 2.0))


def fisher_pdf(z, m, ms, mean):
    k = (ms - 1.0) * mean
    return (m ** m * k ** ms * z ** (m - 1.0)) / (special.beta(m, ms) * (m * z + k) ** (m + ms))


def dep_quad(p_a, p_j, s2, aw, jw, eps):
    """FA + MD through scipy quadrature (deterministic reference)."""
    y = eps - s2
    if y <= 0:
        return 1.0
    fa = special.gammaincc(jw[1], (y / (p_j * alpha_mu_scale(*jw))) ** (jw[0] / 2.0))
    md = integrate.quad(lambda t: alpha_mu_cdf(y - p_a * t, *jw) if p_j == 0 else
                        special.gammainc(jw[1], ((y - p_a * t) / (p_j * alpha_mu_scale(*jw))) ** (jw[0] / 2.0))
                        * fisher_pdf(t, *aw), 0, y / p_a, epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    return fa + md


def nested_mc_min_dep(u_jw, v_aw, p_a, p_j, s2):
    """min over eps of empirical DEP; threshold chosen on one half, scored on the other."""
    half = len(u_jw) // 2
    def dep_curve(u, v, ys):
        y1 = np.sort(p_j * u)
        y2 = np.sort(p_a * v + p_j * u)
        n = len(u)
        fa = 1.0 - np.searchsorted(y1, ys, side="right") / n
        md = np.searchsorted(y2, ys, side="left") / n
        return fa + md
    top = np.quantile(p_a * v_aw[:half] + p_j * u_jw[:half], 0.999)
    ys = np.concatenate([np.geomspace(top * 1e-6, top, 3000), np.linspace(0, top, 3000)[1:]])
    curve = dep_curve(u_jw[:half], v_aw[:half], ys)
    y_star = ys[np.argmin(curve)]
    return dep_curve(u_jw[half:], v_aw[half:], np.array([y_star]))[0]


def main():
    rng = np.random.default_rng(RNG_SEED)
    print("== numerics")
    print("P(0.5,0.5)      =", repr(special.gammainc(0.5, 0.5)))
    print("Q(0.5,2)        =", repr(special.gammaincc(0.5, 2.0)))
    print("e*E3(1)         =", repr(math.e * special.expn(3, 1.0)))
    xs = np.linspace(0.0, 60.0, 10**7 + 1)
    print("simpson e^-x/(1+x)^3 =", repr(integrate.simpson(np.exp(-xs) / (1 + xs) ** 3, x=xs)))
    print("2F1(1,1,2,-1)   =", repr(special.hyp2f1(1, 1, 2, -1)))
    print("2F1(.5,.5,1.5,.25) =", repr(special.hyp2f1(0.5, 0.5, 1.5, 0.25)))

    print("== fading")
    print("alpha-mu(2,2,1) pdf(1) =", repr(4 * math.exp(-2)), " cdf(1) =", repr(alpha_mu_cdf(1.0, 2, 2, 1)))
    print("F(2.5,3,4) mean by quad =", repr(integrate.quad(lambda z: z * fisher_pdf(z, 2.5, 3, 4), 0, np.inf, epsrel=1e-12)[0]))

    print("== covert downlink: miss detection example")
    aw = (3.0, 2.0, 1.0)
    jw = (2.0, 2.0, 3.162)
    p_a, p_j, s2, eps = 1.0, 10.0, 0.1, 5.0
    u = alpha_mu_draw(rng, *jw, N_MC)
    v = fisher_draw(rng, *aw, N_MC)
    y = eps - s2
    md = (p_a * v + p_j * u) < y
    fa = (p_j * u) > y
    print("MD mc =", md.mean(), "+-", md.std() / math.sqrt(N_MC))
    print("FA mc =", fa.mean(), "+-", fa.std() / math.sqrt(N_MC))
    d = md.astype(float) + fa
    print("DEP mc =", d.mean(), "+-", d.std() / math.sqrt(N_MC))
    print("DEP quad(scipy) =", repr(dep_quad(p_a, p_j, s2, aw, jw, eps)))

    print("== optimal threshold, p_j = 1e3 p_a")
    print("min dep mc =", nested_mc_min_dep(u, v, 1.0, 1000.0, s2))
    print("== optimal threshold, p_j = 0, p_a = 100, tight F(10,20,1)")
    v_tight = fisher_draw(rng, 10.0, 20.0, 1.0, N_MC)
    print("min dep mc =", nested_mc_min_dep(np.zeros(N_MC), v_tight, 100.0, 0.0, s2))

    print("== min jamming power, Fig-2 warden set (p_a=10 W, s2=0.1 W, aw=(3,2,1), jw=(2,2,10^0.5)), delta=0.03")
    jw2 = (2.0, 2.0, 10 ** 0.5)
    u2 = alpha_mu_draw(rng, *jw2, N_MC)
    target = 0.97
    g = lambda lp: nested_mc_min_dep(u2, v, 10.0, math.exp(lp), s2) - target
    lp = optimize.brentq(g, math.log(1.0), math.log(1e5), xtol=1e-4)
    print("p_j* nested mc =", math.exp(lp))

    print("== advertising, Fig-1 eta1=2, C2=0, T=5: trapezoid spend at 1e6 steps")
    pi_, h, e1, e2, x0, T = 10.0, 3.0, 2.0, 1.3, 0.3, 5.0
    lam = (math.sqrt(e2 ** 2 + 2 * pi_ * e1 ** 2 / h) - e2) * h / e1 ** 2
    xbar = lam * e1 ** 2 / (lam * e1 ** 2 + e2 * h)
    Lam = lam * e1 ** 2 / h
    print("lambda1_bar =", repr(lam), "x_bar =", repr(xbar))
    t = np.linspace(0, T, 10**6 + 1)
    x = (x0 - xbar) * np.exp(-(Lam / xbar) * t) + xbar
    a = lam * e1 * np.sqrt(1 - x) / h
    print("spend trapz =", repr(np.trapezoid(h / 2 * a * a, t)))
    print("J trapz =", repr(np.trapezoid(pi_ * x - h / 2 * a * a, t)))
    print("a*(0.3) =", repr(lam * e1 * math.sqrt(0.7) / h), " a*(xbar) =", repr(lam * e1 * math.sqrt(1 - xbar) / h))
    e1b = 0.4
    lamb = (math.sqrt(e2 ** 2 + 2 * pi_ * e1b ** 2 / h) - e2) * h / e1b ** 2
    print("eta1=0.4: lambda1_bar =", repr(lamb), "x_bar =", repr(lamb * e1b ** 2 / (lamb * e1b ** 2 + e2 * h)))


if __name__ == "__main__":
    main()
