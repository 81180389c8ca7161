"""High-precision reference values frozen into the C++ tests.

Every value here is computed from first principles (direct sums, numerical
integration at 50 digits) and is independent of the library code paths.
Run: python3 tests/oracles/frozen_values.py
"""
from fractions import Fraction
import mpmath as mp

mp.mp.dps = 50


def gaussian_chi(i, delta2):
    # direct numerical integration of (q - p)^i / p^(i-1), unit-variance 1D
    d = mp.sqrt(delta2)
    p = lambda x: mp.npdf(x, 0, 1)
    q = lambda x: mp.npdf(x, d, 1)
    lo, hi = -40, 40 + i * d
    return mp.quad(lambda x: (q(x) - p(x)) ** i / p(x) ** (i - 1), mp.linspace(lo, hi, 40))


def bernoulli_chi(i, lp, lq):
    lp, lq = Fraction(lp), Fraction(lq)
    return (lq - lp) ** i / lp ** (i - 1) + (lp - lq) ** i / (1 - lp) ** (i - 1)


def main():
    print("gaussian chi_i, |delta| = 1")
    for i in range(2, 11):
        print(i, mp.nstr(gaussian_chi(i, 1), 20))

    print("bernoulli(0.9:0.3) chi_i (exact rational) and exp partial sums")
    e = mp.e
    s = mp.mpf(0)
    for i in range(2, 31):
        c = bernoulli_chi(i, "0.9", "0.3")
        s += e / mp.factorial(i) * mp.mpf(c.numerator) / c.denominator
        print(i, mp.nstr(mp.mpf(c.numerator) / c.denominator, 20), mp.nstr(s, 20))
    exact = mp.mpf("0.9") * (mp.exp(mp.mpf(1) / 3) - e / 3) + mp.mpf("0.1") * (mp.exp(7) - 7 * e)
    print("exact exp divergence", mp.nstr(exact, 20), "S30 error", mp.nstr(exact - s, 10))

    i = 23
    print("js c_23", Fraction((-1) ** i) * (1 - Fraction(1, 2 ** (i - 1))) / (i * (i - 1)))

    # Poisson chi_2, direct summation
    p = lambda x: mp.exp(-1) / mp.factorial(x)
    q = lambda x: mp.exp(-2) * 2 ** x / mp.factorial(x)
    print("poisson chi2(1:2)", mp.nstr(mp.nsum(lambda x: (q(x) - p(x)) ** 2 / p(x), [0, mp.inf]), 20))

    # mixture chi_2: p = N(0,1), q = 0.5 N(-1,1) + 0.5 N(1,1)
    pm = lambda x: mp.npdf(x, 0, 1)
    qm = lambda x: (mp.npdf(x, -1, 1) + mp.npdf(x, 1, 1)) / 2
    print("mixture chi2", mp.nstr(mp.quad(lambda x: (qm(x) - pm(x)) ** 2 / pm(x), mp.linspace(-40, 40, 20)), 20))

    # squared Hellinger between N(0,1), N(1,1)
    hq = lambda x: mp.npdf(x, 1, 1)
    print("hellinger", mp.nstr(mp.quad(lambda x: 2 * (mp.sqrt(pm(x)) - mp.sqrt(hq(x))) ** 2, [-40, 0, 1, 40]), 20))

    # KL Bernoulli(0.3:0.7) with f(u) = -log u
    print("kl bern", mp.nstr(mp.mpf("0.3") * mp.log(mp.mpf(3) / 7) + mp.mpf("0.7") * mp.log(mp.mpf(7) / 3), 20))

    # singly truncated exponential chi_3, theta1 = 1, theta2 = 3, a = 0.5
    a, t1, t2 = mp.mpf("0.5"), 1, 3
    pt = lambda x, t: t * mp.exp(-t * (x - a))
    print("truncexp chi3(1:3)", mp.nstr(mp.quad(lambda x: (pt(x, t2) - pt(x, t1)) ** 3 / pt(x, t1) ** 2, [a, a + 1, a + 10, mp.inf]), 20))

    # doubly truncated exponential on [2,3], theta 1 -> 2, order 10
    W = lambda t: mp.exp(-2 * t) - mp.exp(-3 * t)
    pd = lambda x, t: t * mp.exp(-t * x) / W(t)
    print("truncexp [2,3] chi10(1:2)", mp.nstr(mp.quad(lambda x: (pd(x, 2) - pd(x, 1)) ** 10 / pd(x, 1) ** 9, [2, 3]), 20))

    # poisson alpha = 0 (squared Hellinger), lambda 1 -> 2, direct summation
    print("poisson hellinger", mp.nstr(mp.nsum(lambda x: 2 * (mp.sqrt(p(x)) - mp.sqrt(q(x))) ** 2, [0, mp.inf]), 20))

    # vMF d = 3 log-normalizer at |theta| = 2: log(sinh k / k)
    print("vmf3 F(2)", mp.nstr(mp.log(mp.sinh(2) / 2), 20))


if __name__ == "__main__":
    main()
