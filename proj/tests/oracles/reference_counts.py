#!/usr/bin/env python3
"""Independent reference computations (mpmath, 30 digits) used to freeze
expected values in the C++ test suites.

Nothing here shares code with the C++ implementation: primes come from
sympy, every real quantity is evaluated with mpmath, and the window bound
m <= X^(15/22) is decided by exact integer arithmetic.
"""
import sys

import mpmath
from mpmath import mp, mpf
from sympy import primerange

mp.dps = 30
MARGIN = mpf(10) ** -20


def dist(x):
    return abs(x - mpmath.nint(x))


def strict_less(lhs, rhs, what):
    if abs(lhs - rhs) < MARGIN:
        raise RuntimeError(f"near tie in {what}: {lhs} vs {rhs}")
    return lhs < rhs


class Params:
    def __init__(self, c, theta, eta, X, alpha=mpmath.sqrt(2), beta=mpf(0)):
        self.c = mpf(c)
        self.gamma = 1 / self.c
        self.theta = mpf(theta)
        self.eta = mpf(eta)
        self.X = X
        self.alpha = alpha
        self.beta = beta
        self.Delta = mpf(X) ** (-self.theta)
        self.delta = self.gamma * mpf(X) ** (self.gamma - 1) / 10
        self.lam = 4 * self.Delta * self.delta
        self.L = int(mpmath.floor(mpf(X) ** (self.theta + self.eta)))
        self.H = int(mpmath.floor(10 * mpf(X) ** (1 - self.gamma + self.eta) / self.gamma))

    def dioph(self, a, threshold):
        return strict_less(dist(self.alpha * a + self.beta), threshold, f"dioph a={a}")

    def frac(self, a):
        return strict_less(dist(mpf(a) ** self.gamma + 2 * self.delta), self.delta, f"frac a={a}")

    def in_A(self, a):
        return self.dioph(a, self.Delta) and self.frac(a)

    def is_ps(self, p):
        lo = mpf(p) ** self.gamma
        hi = mpf(p + 1) ** self.gamma
        n = mpmath.ceil(lo)
        if abs(n - lo) < MARGIN or abs(n - hi) < MARGIN:
            raise RuntimeError(f"near tie in ps p={p}")
        return n < hi


def headline(X):
    P = Params("1.05", "0.05", "0.01", X)
    count_b = count_a = count_thm = 0
    for p in primerange((X + 1) // 2, X):
        count_b += 1
        if P.in_A(p):
            count_a += 1
        if P.is_ps(p) and P.dioph(p, mpf(p) ** (-P.theta)):
            count_thm += 1
    return count_b, count_a, count_thm


def window_max(X, num, den):
    # largest m with m^den <= X^num
    m = int(mpmath.floor(mpf(X) ** (mpf(num) / den)))
    while (m + 1) ** den <= X ** num:
        m += 1
    while m ** den > X ** num:
        m -= 1
    return m


def harman_type_one(X):
    P = Params("1.05", "0.05", "0.01", X)
    W = window_max(X, 15, 22)
    lo = (X + 1) // 2
    members = [a for a in range(lo, X) if P.in_A(a)]
    lhs = 0
    for a in members:
        lhs += sum(1 for m in range(1, W + 1) if a % m == 0)
    rhs = 0
    for m in range(1, W + 1):
        first = -(-X // (2 * m))
        last = (X - 1) // m
        if last >= first:
            rhs += last - first + 1
    scaled = P.lam * rhs
    rel = abs(lhs - scaled) / scaled
    return len(members), W, lhs, rhs, P.lam, rel


def main(argv):
    what = argv[1] if len(argv) > 1 else "all"
    if what in ("scales", "all"):
        P = Params("1.05", "0.05", "0.01", 10**6)
        print("scales X=1e6:", mpmath.nstr(P.gamma, 25), mpmath.nstr(P.Delta, 25),
              mpmath.nstr(P.delta, 25), mpmath.nstr(P.lam, 25), P.L, P.H)
        a = 524288
        print("frac a=524288:", P.frac(a), mpmath.nstr(dist(mpf(a) ** P.gamma + 2 * P.delta), 25))
        P4 = Params("1.05", "0.05", "0.01", 2**12)
        print("scales X=2^12: L,H =", P4.L, P4.H)
    if what in ("setA", "all"):
        for X in (10**4, 10**5):
            P = Params("1.05", "0.05", "0.01", X)
            n = sum(1 for a in range((X + 1) // 2, X) if P.in_A(a))
            print(f"|A| X={X}: {n}")
    if what in ("headline", "all"):
        for X in (10**5, 10**6, 10**7):
            print("headline X={}: B={} A={} theorem={}".format(X, *headline(X)))
    if what in ("harman", "all"):
        for X in (10**4, 10**5, 10**6):
            nA, W, lhs, rhs, lam, rel = harman_type_one(X)
            print(f"harman X={X}: |A|={nA} W={W} lhs={lhs} rhs={rhs} "
                  f"lambda={mpmath.nstr(lam, 20)} relative={mpmath.nstr(rel, 20)}")


if __name__ == "__main__":
    main(sys.argv)
