"""Slow reference implementations used only by the tests."""

import itertools
import math

import sympy


def sifted_terms(C, params):
    """S1, S2, S3, tail, S(C, sqrt x), and T/U/V by per-element tuple enumeration."""
    x = params.x
    z0, Y, z1 = params.z_small, params.Y, params.z_large
    root = math.sqrt(x)
    n0 = params.n0
    out = {"S1": 0.0, "S2": 0.0, "S3": 0.0, "tail": 0.0, "sifted": 0.0}
    T = [0.0] * (n0 + 2)
    U = [0.0] * (n0 + 2)
    V = [0.0] * (n0 + 2)
    U_bands = {1: [0.0, 0.0, 0.0], 2: [0.0, 0.0, 0.0]}
    lo_band, hi_band = x ** (0.5 - params.delta), x ** (0.5 + params.delta)
    for n, w in C.items():
        fac = sympy.factorint(n)
        ps = sorted(fac)
        least = ps[0] if ps else math.inf
        if least >= z0:
            out["S1"] += w
        if least >= root:
            out["sifted"] += w
        if z0 <= least < Y:
            out["S2"] += w
        elif Y <= least < z1:
            out["S3"] += w
        elif z1 <= least < root:
            out["tail"] += w
        small = [p for p in ps if z0 <= p < Y]
        for r in range(1, len(small) + 1):
            for tup in itertools.combinations(sorted(small, reverse=True), r):
                prod = math.prod(tup)
                if prod < Y:
                    if least >= z0:
                        T[r] += w
                    if least >= tup[-1]:
                        V[r] += w
                head = math.prod(tup[:-1])
                if r >= 2 and head < Y <= prod and least >= tup[-1]:
                    U[r - 1] += w
                    if r - 1 in U_bands:
                        slot = 0 if prod < lo_band else (1 if prod < hi_band else 2)
                        U_bands[r - 1][slot] += w
    out["T"] = T[1 : n0 + 1]
    out["U"] = U[1 : n0 + 1]
    out["V"] = V[1 : n0 + 2]
    out["U_bands"] = U_bands
    return out


def sequence_by_loops(kind, params):
    """Weights of A or B by a direct double loop over (p, a)."""
    x = params.x
    lo, hi = params.interval
    out = {}
    power = 4 if kind == "A" else 2
    for p in sympy.primerange(2, math.isqrt(math.floor(hi)) + 2 if kind == "A" else math.floor(hi) + 1):
        v = p * p if kind == "A" else p
        if not lo < v <= hi:
            continue
        weight = 2 * p * math.log(p) if kind == "A" else math.log(p)
        a = 1
        while a * a + p**power <= x:
            n = a * a + p**power
            if a % p and n * n > x:
                out[n] = out.get(n, 0.0) + weight
            a += 1
    return out


def prime_pairs(x):
    """#{(a, p): a^2 + p^4 <= x prime}, looping a outermost."""
    count = 0
    a = 1
    while a * a + 16 <= x:
        p = 2
        while a * a + p**4 <= x:
            if sympy.isprime(a * a + p**4):
                count += 1
            p = sympy.nextprime(p)
        a += 1
    return count


def units_mod(q):
    return [a for a in range(q) if math.gcd(a, q) == 1] if q > 1 else [0]


def class_sums_loop(c1, c2, q):
    """S(a, q) over a in units, by a plain double loop."""
    S = {a: 0.0 for a in units_mod(q)}
    for m, u in c1.items():
        if math.gcd(m, q) != 1:
            continue
        for n, v in c2.items():
            if math.gcd(n, q) != 1:
                continue
            a = (m * pow(n, -1, q)) % q if q > 1 else 0
            S[a] += u * v
    return S


def projected_main(S, q, Q0):
    """Orthogonal projection of a -> S(a) onto functions factoring through (Z/d)^* for d | q, d <= Q0."""
    import numpy as np

    us = units_mod(q)
    cols = []
    for d in range(1, min(q, Q0) + 1):
        if q % d:
            continue
        for r in range(d):
            col = [1.0 if (a % d == r) else 0.0 for a in us]
            if any(col):
                cols.append(col)
    B = np.array(cols).T
    y = np.array([S[a] for a in us])
    coef, *_ = np.linalg.lstsq(B, y, rcond=None)
    return dict(zip(us, (B @ coef).tolist()))


def bdh_loop(c, Q, main, x):
    total = 0.0
    for q in range(1, Q + 1):
        S = class_sums_loop(c, c, q)
        ph = len(S)
        M = sum(S.values()) / ph if main == "exact_phi" else x * x / ph
        total += sum((s - M) ** 2 for s in S.values())
    return total
