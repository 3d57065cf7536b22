"""Extended-precision reference values frozen into the Rust tests.

Run with `python3 mpmath_values.py`; every value printed here is pasted
verbatim into the corresponding test. Nothing in this script calls the
Rust implementation.
"""
from mpmath import (mp, mpf, rgamma, gamma, exp, factorial, rf, sqrt, pi, sin, cos,
                    quad, invertlaplace, erfc, inf)

mp.dps = 60


def prabhakar(b, g, d, z, dps=60, terms=2000, tol=mpf(10) ** -50):
    with mp.workdps(dps):
        b, g, d, z = mpf(b), mpf(g), mpf(d), mpf(z)
        s, k, small = mpf(0), 0, 0
        while k < terms:
            term = rf(d, k) * z ** k / factorial(k) * rgamma(b * k + g)
            s += term
            small = small + 1 if abs(term) < tol * max(abs(s), mpf(1) * tol) else 0
            if small > 5 and k > 10:
                break
            k += 1
        return +s


def ml_neg_integral(nu, x):
    """E_nu(-x), 0 < nu < 1, complete-monotone integral representation."""
    nu, x = mpf(nu), mpf(x)
    f = lambda r: exp(-r * x ** (1 / nu)) * r ** (nu - 1) * sin(nu * pi) / (
        r ** (2 * nu) + 2 * r ** nu * cos(nu * pi) + 1)
    return quad(f, [0, 1, 10, inf]) / pi


def kanter(rho, t):
    rho, t = mpf(rho), mpf(t)
    a = lambda p: (sin(rho * p) / sin(p)) ** (1 / (1 - rho)) * sin((1 - rho) * p) / sin(rho * p)
    c = t ** (-rho / (1 - rho))
    return rho / (1 - rho) * t ** (-1 / (1 - rho)) / pi * quad(lambda p: a(p) * exp(-c * a(p)), [0, pi / 2, pi])


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


show("rgamma(1.3)", rgamma(mpf("1.3")))
show("prabhakar(0.8,1.0,3,-2.5)", prabhakar("0.8", 1, 3, "-2.5"))
show("ml_two(0.5,0.5,-1)", prabhakar("0.5", "0.5", 1, -1))
show("ml_one(0.5,-1)", prabhakar("0.5", 1, 1, -1))
show("erfc check e*erfc(1)", exp(1) * erfc(1))
show("ml_one(0.25,-30)", ml_neg_integral("0.25", 30))
show("ml_one(0.5,-30)", ml_neg_integral("0.5", 30))
show("ml_one(0.75,-10)", ml_neg_integral("0.75", 10))
show("ml_one(0.75,-30)", ml_neg_integral("0.75", 30))
show("ml_one(1.5,-30)", prabhakar("1.5", 1, 1, -30, dps=120))
show("ml_one(1,-30)", prabhakar(1, 1, 1, -30, dps=120))
show("prabhakar(0.5,1,2,-20)", prabhakar("0.5", 1, 2, -20, dps=400, terms=6000))
show("prabhakar(0.7,1.2,3,-12)", prabhakar("0.7", "1.2", 3, -12, dps=200, terms=4000))

# Riemann-Liouville integral of exp(-u), order 0.7, at t = 1.5
nu, t = mpf("0.7"), mpf("1.5")
show("rl(exp,0.7,1.5)", quad(lambda u: (t - u) ** (nu - 1) * exp(-u), [0, t]) / gamma(nu))

# convolution of u^2 against (t-u)^-0.3 E_{0.9,0.7}(-(t-u)^0.9), t = 1
t = mpf(1)
show("conv(u^2,-0.3,E_{0.9,0.7})",
     quad(lambda u: u ** 2 * (t - u) ** mpf("-0.3") * prabhakar("0.9", "0.7", 1, -(t - u) ** mpf("0.9"), dps=30), [0, t]))

# diffusion bracketed sums at alpha = 0.5, A = 1
al = mpf("0.5")
show("series_n1(0.5,1)", sum((-1) ** l * rgamma(1 - al * (l + 1) / 2) / factorial(l) for l in range(200)))
show("series_n3(0.5,1)", sum((-1) ** l * rgamma(1 - al * (1 + mpf(l) / 2)) / factorial(l) for l in range(200)))

# kinetic references: inverse Laplace of Eq.(6)-type transforms, unit forcing
def kin(terms, t):
    F = lambda s: (1 / s) / (1 + sum(mpf(a) * s ** (-mpf(n)) for a, n in terms))
    return invertlaplace(F, mpf(t), method="talbot")

for tt in ["0.1", "1", "5"]:
    show(f"kin[(1,0.5),(0.5,1)] t={tt}", kin([(1, "0.5"), ("0.5", 1)], tt))
    show(f"kin3[(1,0.5),(0.5,0.75),(0.3,1)] t={tt}", kin([(1, "0.5"), ("0.5", "0.75"), ("0.3", 1)], tt))

# one-sided stable density
for rho in ["0.25", "0.75"]:
    for tt in ["0.05", "0.3", "1", "3"]:
        show(f"levy rho={rho} t={tt}", kanter(rho, tt))
