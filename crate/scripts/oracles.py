#!/usr/bin/env python3
"""Reference values frozen into the Rust test suites.

Zeta values come from mpmath at 30 digits; prime sums and products use a
numpy sieve up to 10^7 with the defining (unsimplified) formulas.
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 30


def show(name, z):
    z = mp.mpc(z)
    print(f"{name}: ({mp.nstr(z.real, 17)}, {mp.nstr(z.imag, 17)})")


def zeta_values():
    for s in [mp.mpc(1, 1), mp.mpc(0.5, 14), mp.mpc(0.7, 1000), mp.mpc(1.2, -5000), mp.mpc(0.4, 9999)]:
        show(f"zeta{complex(s)}", mp.zeta(s))
    for s in [mp.mpc(2, 0), mp.mpc(1.3, 7), mp.mpc(1, 25.5), mp.mpc(1.05, -300)]:
        z, z1, z2 = mp.zeta(s), mp.zeta(s, derivative=1), mp.zeta(s, derivative=2)
        show(f"logderiv{complex(s)}", z1 / z)
        show(f"logderiv_prime{complex(s)}", z2 / z - (z1 / z) ** 2)
    for x in [mp.mpf("1e-6"), mp.mpf("1e-4")]:
        s = 1 + x
        z, z1, z2 = mp.zeta(s), mp.zeta(s, derivative=1), mp.zeta(s, derivative=2)
        show(f"logderiv(1+{x})", z1 / z)
        show(f"logderiv_prime(1+{x})", z2 / z - (z1 / z) ** 2)
    for n in range(5):
        print(f"stieltjes{n}: {mp.nstr(mp.stieltjes(n), 17)}")


def primes_upto(n):
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for i in range(2, int(n ** 0.5) + 1):
        if s[i]:
            s[i * i :: i] = False
    return np.nonzero(s)[0].astype(np.float64)


def prime_values(limit):
    p = primes_upto(limit)
    lp = np.log(p)
    print(f"pi({limit}) = {p.size}")

    def pw(x):
        return np.exp(-complex(x) * lp)

    def a(x):
        q = pw(1 + x)
        return np.exp(np.sum(np.log((1 - q) * (1 - 2 / p + q) / (1 - 1 / p) ** 2)))

    def b(x):
        return np.sum((lp / (1 / pw(1 + x) - 1)) ** 2)

    def q(x, y):
        return -np.sum(lp ** 3 * pw(2 + x + y) / ((1 - pw(1 + x)) * (1 - pw(1 + y))))

    def m1(s):
        return pw(1 + s)

    def a33(a1, a2, bb, g1, g2, d):
        # bracket with p^(b-d) multiplied through; the unexpanded form loses
        # about 1e-16 per prime to cancellation, which accumulates to 1e-11
        u = (-m1(g1 + bb) + m1(g1 + d) - m1(g2 + bb) + m1(g2 + d) - m1(a1 + d) - m1(a2 + d)
             + pw(2 + g1 + g2 + 2 * bb) - pw(2 + g1 + g2 + bb + d) + pw(2 + a1 + a2 + bb + d))
        lg = (np.log1p(-m1(g1 + d)) + np.log1p(-m1(g2 + d)) - np.log1p(-m1(a1 + d)) - np.log1p(-m1(a2 + d))
              - np.log1p(-m1(g1 + bb)) - np.log1p(-m1(g2 + bb)) + np.log1p(u))
        return np.exp(np.sum(lg))

    def a22(aa, bb, g, d):
        f = (1 - m1(g + d)) * (1 - m1(bb + g) - m1(aa + d) + m1(g + d)) / ((1 - m1(bb + g)) * (1 - m1(aa + d)))
        return np.exp(np.sum(np.log(f)))

    show("A(1)", a(1))
    show("A(0.2+3i)", a(0.2 + 3j))
    show("B(0)", b(0))
    show("B(0.1+0.3i)", b(0.1 + 0.3j))
    show("Q(0,0)", q(0, 0))
    show("Q(0.1,0.2i)", q(0.1, 0.2j))
    show("A33(0.1,0.2,0.15;0.15,0.25,0.2)", a33(0.1, 0.2, 0.15, 0.15, 0.25, 0.2))
    show("A33(0.1+1i,0.2,0.15-0.5i;0.3,0.05+2i,0.2)", a33(0.1 + 1j, 0.2, 0.15 - 0.5j, 0.3, 0.05 + 2j, 0.2))
    show("A22(0.1+0.2i,0.2,0.15,0.3-0.1i)", a22(0.1 + 0.2j, 0.2, 0.15, 0.3 - 0.1j))


if __name__ == "__main__":
    zeta_values()
    prime_values(10 ** 7)
