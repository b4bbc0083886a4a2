"""High-precision oracle for values frozen into the C++ tests.

Run: python3 tests/oracles/frozen_values.py
Every number printed here is independent of the C++ implementation.
"""
from fractions import Fraction
from itertools import product
import mpmath as mp

mp.mp.dps = 40


def H(ps):
    return -mp.fsum(mp.mpf(p.numerator) / p.denominator * mp.log(mp.mpf(p.numerator) / p.denominator)
                    for p in ps if p > 0)


print("H(lambda 1/4)       =", H([Fraction(1, 4), Fraction(3, 4)]))

# Minimum-entropy coupling uniform(2) vs lambda(1/4): the transportation
# polytope is the segment x11 in [0, 1/4]; scan it densely.
a = [Fraction(1, 2)] * 2
b = [Fraction(1, 4), Fraction(3, 4)]
best = None
steps = 20000
for k in range(steps + 1):
    x11 = Fraction(k, 4 * steps)
    z = [x11, a[0] - x11, b[0] - x11, b[1] - (a[0] - x11)]
    if min(z) < 0:
        continue
    v = 2 * H(z) - H(a) - H(b)
    best = v if best is None or v < best else best
print("ikd(u2, lambda1/4)  =", best)
print("ikd(u2, u4)         =", mp.log(2))

for card, rho in ((2**15, Fraction(1, 4)), (16, Fraction(1, 4))):
    L = mp.log(card)
    print(f"card={card}: ln^3/rho = {L**3 / (mp.mpf(rho.numerator) / rho.denominator)}, "
          f"t = {10 / L}, ln ln = {mp.log(L)}, 4 ln ln = {4 * mp.log(L)}")
print("ln(4496/4) + 10/ln 2^15 =", mp.log(mp.mpf(4496) / 4) + 10 / mp.log(2**15))
print("2 e^(-25/6)         =", 2 * mp.e ** (mp.mpf(-25) / 6))
print("128 e^(-100/12)     =", 128 * mp.e ** (mp.mpf(-200 * 0.5 * 0.25) / 3))
print("64 e^(-100*.25/12)  =", 64 * mp.e ** (mp.mpf(-100 * 0.25) / 12))

# Crossing points of t^(1/4) = ln^(3/2) t (phi comparison).
f = lambda s: s / 6 - mp.log(s)  # in s = ln t, comparison holds iff f(s) >= 0
s1 = mp.findroot(f, 1.3)
s2 = mp.findroot(f, 26)
print("phi comparison fails for t in (", mp.e ** s1, ",", mp.e ** s2, ")")

# eps schedule with C = D_phi = 1, |G| = 3, log_card = 1: linear scan.
C = D = 1.0
G = 3
L = 1.0
def eps(n):
    r = 2 * C * n ** -0.25
    return (2 * D * r, 20 * G / n + D * r, 4 * mp.log(n * L) / n + 2 * D * r)
lo = 2
n = 2
# all three are decreasing for n >= 3; find first n with max <= 0.1
lo, hi = 3, 10**8
while lo < hi:
    mid = (lo + hi) // 2
    if max(eps(mid)) <= 0.1:
        hi = mid
    else:
        lo = mid + 1
print("min n for eps<=0.1  =", lo, [mp.nstr(e, 12) for e in eps(lo)], [mp.nstr(e, 12) for e in eps(lo - 1)])
