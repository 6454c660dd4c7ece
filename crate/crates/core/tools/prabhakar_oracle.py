#!/usr/bin/env python3
"""High-precision reference values for the three-parameter Mittag-Leffler function.

Writes CSV rows `a,b,c,z,value`. Values come from the power series evaluated
with enough working digits to absorb cancellation, or (for large negative
arguments) from the algebraic asymptotic expansion, which is cross-checked
against the series on an overlap band before anything is written.
"""
import argparse
import sys

import mpmath as mp

SERIES_MAX = 300.0  # series used while |z|^(1/a) <= SERIES_MAX
ASYMP_MIN = 150.0   # asymptotic used while |z|^(1/a) >= ASYMP_MIN


def series(a, b, c, z):
    x = abs(mp.mpf(z))
    scale = float(x) ** (1.0 / float(a)) if x > 0 else 0.0
    dps = 40 + int(scale / 2.3) + 10
    with mp.workdps(dps):
        a, b, c, z = mp.mpf(a), mp.mpf(b), mp.mpf(c), mp.mpf(z)
        total = mp.mpf(0)
        k = 0
        tiny = mp.mpf(10) ** (-(dps - 5))
        peak = mp.mpf(0)
        while True:
            term = mp.rf(c, k) / mp.factorial(k) * mp.rgamma(a * k + b) * z**k
            total += term
            peak = max(peak, abs(term))
            if k > 10 and abs(term) < tiny * max(abs(total), tiny) and abs(term) < peak:
                break
            k += 1
        return +total


def log_abs_gamma(x):
    # Envelope only: a pole contributes nothing useful, nudge off it.
    if x <= 0 and x == mp.floor(x):
        x += mp.mpf(10) ** -30
    return mp.re(mp.loggamma(x))


def asymptotic(a, b, c, z):
    # Truncated at the minimum of the term envelope
    # Gamma(c+k)/k! * Gamma(1-b+a(c+k)) * x^(-c-k), which bounds |term| up to 1/pi.
    with mp.workdps(60):
        a, b, c = mp.mpf(a), mp.mpf(b), mp.mpf(c)
        x = -mp.mpf(z)
        total = mp.mpf(0)
        prev_env = None
        k = 0
        while True:
            env = mp.loggamma(c + k) - mp.loggamma(k + 1) + log_abs_gamma(1 - b + a * (c + k)) - (c + k) * mp.log(x)
            if prev_env is not None and env > prev_env and k > 5:
                break
            if k > 5 and env < mp.log(mp.mpf(10) ** -70):
                break
            total += mp.rf(c, k) / mp.factorial(k) * (-1) ** k * mp.rgamma(b - a * (c + k)) * x ** (-c - k)
            prev_env = env
            k += 1
        return +total


def kummer(b, c, z):
    with mp.workdps(60):
        return mp.hyp1f1(c, b, z) * mp.rgamma(b)


def prabhakar(a, b, c, z):
    if a == 1.0:
        return kummer(b, c, z)
    if z >= 0:
        return series(a, b, c, z)
    scale = (-z) ** (1.0 / a)
    if scale <= SERIES_MAX:
        return series(a, b, c, z)
    return asymptotic(a, b, c, z)


def cross_check():
    for a in (0.3, 0.5, 0.7, 0.9, 0.99):
        for b, c in ((1.0, 1.0), (a, 1.0), (2.0, 1.0), (1.0 + a, 1.0), (1.3, 2.0)):
            x = 200.0 ** a
            s = series(a, b, c, -x)
            t = asymptotic(a, b, c, -x)
            rel = abs(s - t) / abs(s)
            if rel > 1e-20:
                raise SystemExit(f"regime mismatch a={a} b={b} c={c} x={x}: rel={rel}")


def grid():
    pts = []
    zs = [2.0, 5.0, 0.5, -0.1, -0.5, -0.72, -1.0, -1.5, -2.0, -3.0, -4.0, -5.0, -6.0,
          -10.0, -15.3, -30.0, -100.0, -1e3, -1e4, -1e6]
    for a in (0.3, 0.5, 0.7, 0.9, 0.99, 1.0):
        for b in sorted({1.0, a, 2.0, 1.0 + a}):
            for z in zs:
                pts.append((a, b, 1.0, z))
    for a, b, c in ((0.7, 1.3, 2.0), (0.5, 1.0, 0.5), (0.9, 0.9, 2.0), (0.6, 0.4, 1.5), (1.0, 1.5, 0.7)):
        for z in (1.0, -0.5, -3.0, -10.0, -100.0, -1e4):
            pts.append((a, b, c, z))
    return pts


def write_erfcx(path):
    xs = [0.0, 1e-8, 1e-3, 0.09, 0.2, 0.46875, 0.5, 0.75, 0.9, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0,
          7.5, 10.0, 15.3, 26.0, 27.0, 50.0, 100.0, 1e3, 1e5, 1e8, 1e15, 1e150]
    with mp.workdps(50), open(path, "w") as out:
        out.write("x,value\n")
        for x in xs:
            v = mp.exp(mp.mpf(x) ** 2) * mp.erfc(mp.mpf(x))
            out.write(f"{x!r},{mp.nstr(v, 20, min_fixed=0, max_fixed=0)}\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="-")
    ap.add_argument("--erfcx-out", default=None)
    args = ap.parse_args()
    if args.erfcx_out:
        write_erfcx(args.erfcx_out)
    cross_check()
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    out.write("a,b,c,z,value\n")
    for a, b, c, z in grid():
        v = prabhakar(a, b, c, z)
        out.write(f"{a!r},{b!r},{c!r},{z!r},{mp.nstr(v, 20, min_fixed=0, max_fixed=0)}\n")
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
