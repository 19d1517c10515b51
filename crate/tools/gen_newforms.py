#!/usr/bin/env python3
"""Generate newform fixtures (weight 2) with PARI/GP via cypari2.

Usage: gen_newforms.py LEVEL [CHAR] [--pmax 200] [--out data/newforms]

CHAR is a Conrey label modulo its conductor, e.g. 3 mod 20 is written
"20.3"; omit it for the trivial character. Coefficients are written in
the power basis of an absolute defining polynomial of the Hecke field.
"""
import argparse
import json
import os
import sys
import time
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.default("parisizemax", 12 * 10**9)
pari.allocatemem(10**9)


def rat(x):
    f = Fraction(int(pari.numerator(x)), int(pari.denominator(x)))
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def coeffs(pol, var, deg):
    """Rational coefficients c0..c_{deg-1} of a polynomial in var."""
    pol = pari.lift(pol)
    return [rat(pari.polcoef(pol, i, var)) for i in range(deg)]


def primes(n):
    return [int(p) for p in pari.primes([2, n])]


def generate(level, char, pmax):
    if char is None:
        mf = pari.mfinit([level, 2, 1], 0)
        modulus, order = 1, 1
    else:
        m, c = (int(x) for x in char.split("."))
        mf = pari.mfinit([level, 2, pari(f"Mod({c},{m})")], 0)
        modulus = m
        order = int(pari(f"charorder(znstar({m},1),znconreychar(znstar({m},1),{c}))"))
    basis = pari.mfeigenbasis(mf)
    fields = pari.mffields(mf)
    ps = primes(pmax)
    out = []
    t = pari("t")
    y = pari("y")
    for idx, (f, P) in enumerate(zip(basis, fields)):
        an = pari.mfcoefs(f, pmax)
        if order <= 2:
            # P is over Q in y (or constant when the field is Q).
            P = pari.substpol(P, y, pari("x")) if pari.poldegree(P, y) > 0 else pari("x")
            deg = int(pari.poldegree(P))
            conv = lambda v: coeffs(pari.subst(pari.lift(v), y, pari("x")), pari("x"), deg)
            chi_val = lambda p: [str(int(pari(f"kronecker({modulus},{p})")) if modulus > 1 else 1)] + ["0"] * (deg - 1)
            absP = P
        else:
            base = pari.polcyclo(order, t)
            Prel = pari.lift(P) if pari.poldegree(P, y) > 0 else y
            # Absolute field: x = y + k t with t = a(x).
            res = pari.rnfequation(pari.nfinit(base), Prel, 1)
            absP, a, k = res[0], res[1], res[2]
            absP = pari.substpol(absP, pari.variable(absP), pari("x")) if pari.variable(absP) != pari("x") else absP
            a = pari.subst(pari.lift(a), pari.variable(pari.lift(a)), pari("x"))
            deg = int(pari.poldegree(absP))
            xx = pari("x")
            yexpr = xx - k * a

            def conv(v, a=a, yexpr=yexpr, absP=absP, deg=deg):
                v = pari.lift(pari.lift(v))
                v = pari.subst(pari.subst(v, y, yexpr), t, a)
                return coeffs(pari.Mod(v, absP), xx, deg)

            def chi_val(p, a=a, absP=absP, deg=deg):
                e = pari(f"chareval(znstar({modulus},1),znconreychar(znstar({modulus},1),{c}),{p},[t,{order}])")
                v = pari.subst(pari.lift(e), t, a)
                return coeffs(pari.Mod(v, absP), xx, deg)
        rec = {
            "level": level,
            "weight": 2,
            "character": {
                "modulus": modulus,
                "order": order,
                "values": {str(p): chi_val(p) for p in ps if level % p != 0},
            },
            "field_poly": [str(int(pari.polcoef(absP, i))) for i in range(deg + 1)],
            "ap": {str(p): conv(an[p]) for p in ps},
            "labels": f"{level}.2.{char or '1.1'}.{idx}",
        }
        out.append(rec)
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("level", type=int)
    ap.add_argument("char", nargs="?")
    ap.add_argument("--pmax", type=int, default=200)
    ap.add_argument("--out", default="data/newforms")
    args = ap.parse_args()
    t0 = time.time()
    recs = generate(args.level, args.char, args.pmax)
    name = f"{args.level}" + (f"_{args.char.replace('.', '_')}" if args.char else "") + ".json"
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, name)
    with open(path, "w") as fh:
        json.dump({"provenance": f"PARI/GP {pari.version()} mfinit([{args.level},2,{args.char or 1}],0)", "newforms": recs}, fh)
    degs = sorted(len(r["field_poly"]) - 1 for r in recs)
    print(f"{path}: {len(recs)} orbits, degrees {degs}, {time.time() - t0:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
