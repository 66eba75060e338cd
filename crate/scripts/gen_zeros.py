#!/usr/bin/env python3
"""Generate a table of Riemann zeta zero ordinates (one per line).

Sign changes of the Hardy Z-function are located on a fine grid with a
vectorised Riemann-Siegel evaluation (leading remainder term only). Below
height 300 each bracket is refined with mpmath's siegelz; above it the
Riemann-Siegel approximation itself is bisected; against mpmath the error
is at most about 6e-4 below height 1420 and shrinks with height. Intended only for producing test inputs.

    python3 scripts/gen_zeros.py 100000 > zeros_100k.txt
"""
import sys

import mpmath
import numpy as np

STEP = 0.01
LOW = 300.0


def theta(t):
    return (t / 2) * np.log(t / (2 * np.pi)) - t / 2 - np.pi / 8 + 1 / (48 * t) + 7 / (5760 * t**3)


def z_rs(t):
    a = np.sqrt(t / (2 * np.pi))
    nn = np.floor(a)
    n_max = int(nn.max())
    th = theta(t)
    total = np.zeros_like(t)
    for n in range(1, n_max + 1):
        term = np.cos(th - t * np.log(n)) / np.sqrt(n)
        total += np.where(n <= nn, term, 0.0)
    p = a - nn
    c0 = np.cos(2 * np.pi * (p * p - p - 1.0 / 16)) / np.cos(2 * np.pi * p)
    sign = np.where(nn % 2 == 1, 1.0, -1.0)
    return 2 * total + sign * a ** -0.5 * c0


def bisect(lo, hi, iters=45):
    flo = z_rs(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = z_rs(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def estimate_height(count):
    f = lambda T: T / (2 * mpmath.pi) * mpmath.log(T / (2 * mpmath.pi * mpmath.e)) + 7.0 / 8 - count
    return float(mpmath.findroot(f, max(count, 20)))


def main():
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 100000
    mpmath.mp.dps = 20
    t_hi = estimate_height(count) + 5.0
    roots = []
    start = 10.0
    chunk = 100000
    while start < t_hi and len(roots) < count:
        t = start + STEP * np.arange(chunk + 1)
        z = z_rs(t)
        idx = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
        lo, hi = t[idx], t[idx + 1]
        low = lo < LOW
        for a, b in zip(lo[low], hi[low]):
            roots.append(float(mpmath.findroot(mpmath.siegelz, (mpmath.mpf(a), mpmath.mpf(b)), solver="illinois")))
        if (~low).any():
            roots.extend(bisect(lo[~low], hi[~low]).tolist())
        start = t[-1]
        print("%.1f %d" % (start, len(roots)), file=sys.stderr)
    roots = sorted(roots)[:count]
    if len(roots) != count or (np.diff(roots) <= 0).any():
        sys.exit("zero search failed: got %d zeros" % len(roots))
    print("# first %d nontrivial zeros of zeta (ordinates)" % count)
    for r in roots:
        print("%.9f" % r)


if __name__ == "__main__":
    main()
