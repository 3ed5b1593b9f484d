"""Elementary multiplicative functions and symbols.

Covers factorisation, tau/phi/mu/chi_4, the local density rho(d) of
a^2 + 1 = 0 (mod d), Jacobi symbols, the sign symbol <a, b> on odd integers,
and the small-divisor construction for tau.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .primes import cached_primes, is_prime

_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class MultBasics:
    tau: int
    phi: int
    mu: int
    chi4: int


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_brent(n)
    _split(f, out)
    _split(n // f, out)


@lru_cache(maxsize=1 << 16)
def _factor_cached(n: int) -> tuple:
    out: dict[int, int] = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    if m > 1 and not is_prime(m):
        # Trial division only pays off against small factors.
        bound = min(math.isqrt(m), _TRIAL_LIMIT)
        for p in cached_primes(_TRIAL_LIMIT).primes:
            p = int(p)
            if p > bound:
                break
            if m % p == 0:
                while m % p == 0:
                    out[p] = out.get(p, 0) + 1
                    m //= p
                if is_prime(m):
                    break
                bound = min(math.isqrt(m), _TRIAL_LIMIT)
        if m > 1:
            _split(m, out)
    elif m > 1:
        out[m] = out.get(m, 0) + 1
    return tuple(sorted(out.items()))


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of n >= 1 as {p: e}, primes ascending."""
    n = int(n)
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    return dict(_factor_cached(n))


def factorize_many(values) -> list[dict[int, int]]:
    """Factor every entry of an integer array at once.

    Divides the whole array by each prime up to sqrt(max); whatever is left
    over is a single prime. Intended for values below about 10^12.
    """
    v = np.asarray(values, dtype=np.int64)
    if v.size == 0:
        return []
    if v.min() < 1:
        raise DomainError("factorize_many needs positive entries")
    rest = v.copy()
    out: list[dict[int, int]] = [dict() for _ in range(v.size)]
    root = math.isqrt(int(v.max()))
    for p in cached_primes(max(root, 2)).primes:
        p = int(p)
        if p > root:
            break
        idx = np.flatnonzero(rest % p == 0)
        while idx.size:
            for i in idx:
                d = out[i]
                d[p] = d.get(p, 0) + 1
            rest[idx] //= p
            idx = idx[rest[idx] % p == 0]
    for i in np.flatnonzero(rest > 1):
        r = int(rest[i])
        out[i][r] = out[i].get(r, 0) + 1
    return [dict(sorted(d.items())) for d in out]


def divisors_from(fac: dict[int, int], limit: int | None = None) -> list[int]:
    """All divisors of the number with factorisation ``fac``, optionally capped."""
    divs = [1]
    for p, e in fac.items():
        new = []
        for d in divs:
            q = d
            for _ in range(e):
                q *= p
                if limit is not None and q > limit:
                    break
                new.append(q)
        divs += new
    return sorted(divs)


def divisors(n: int) -> list[int]:
    return divisors_from(factorize(n))


def tau(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def chi4(n: int) -> int:
    """The non-principal character modulo 4."""
    r = int(n) % 4
    return 1 if r == 1 else (-1 if r == 3 else 0)


def mult_basics(n: int) -> MultBasics:
    n = int(n)
    if n < 1:
        raise DomainError("mult_basics needs n >= 1")
    fac = factorize(n)
    t = math.prod(e + 1 for e in fac.values())
    ph = math.prod((p - 1) * p ** (e - 1) for p, e in fac.items())
    if any(e > 1 for e in fac.values()):
        mu = 0
    else:
        mu = -1 if len(fac) % 2 else 1
    return MultBasics(tau=t, phi=ph, mu=mu, chi4=chi4(n))


def euler_phi(n: int) -> int:
    return mult_basics(n).phi


def _sqrt_minus_one_mod_p(p: int) -> int:
    # p = 1 mod 4; c^((p-1)/4) squares to -1 for any quadratic non-residue c
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return pow(c, (p - 1) // 4, p)
    raise AssertionError("unreachable")


def _hensel_lift(r: int, p: int, e: int) -> int:
    # f(a) = a^2 + 1, f'(a) = 2a is a unit mod odd p
    mod = p
    for _ in range(e - 1):
        mod *= p
        r = (r - (r * r + 1) * pow(2 * r, -1, mod)) % mod
    return r


def roots_minus_one(d: int) -> list[int]:
    """All a mod d with a^2 + 1 = 0 (mod d), via Hensel lifting and CRT."""
    d = int(d)
    if d < 1:
        raise DomainError("modulus must be >= 1")
    roots, mod = [0], 1
    for p, e in factorize(d).items():
        if p == 2:
            if e > 1:
                return []
            local = [1]
        elif p % 4 == 3:
            return []
        else:
            r = _hensel_lift(_sqrt_minus_one_mod_p(p), p, e)
            local = sorted({r, (-r) % p**e})
        pe = p**e
        inv = pow(mod, -1, pe)
        roots = [a + mod * (((b - a) * inv) % pe) for a in roots for b in local]
        mod *= pe
    return sorted(r % d for r in roots) if d > 1 else [0]


def rho(d: int) -> int:
    """Number of a mod d with a^2 + 1 = 0 (mod d)."""
    d = int(d)
    if d < 1:
        raise DomainError("rho needs d >= 1")
    count = 1
    for p, e in factorize(d).items():
        if p == 2:
            if e > 1:
                return 0
        elif p % 4 == 3:
            return 0
        else:
            count *= 2
    return count


def g_density(d: int) -> Fraction:
    return Fraction(rho(d), int(d))


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    a, n = int(a), int(n)
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"jacobi needs odd positive n, got {n}")
    a %= n
    s = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                s = -s
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            s = -s
        a %= n
    return s if n == 1 else 0


def bracket(a: int, b: int) -> int:
    """<a, b> = (-1)^((a-1)(b-1)/4) for odd a, b."""
    a, b = int(a), int(b)
    if a % 2 == 0 or b % 2 == 0:
        raise DomainError("bracket is defined on odd integers only")
    # (a-1)(b-1)/4 is odd exactly when a = b = 3 (mod 4)
    return -1 if (a % 4 == 3 and b % 4 == 3) else 1


def dominating_divisor(n: int, k: int) -> int:
    """A divisor d of n with d <= n^(1/2^k) and tau(n) <= 2^(2^k - 1) tau(d)^(2^k).

    Follows the inductive construction: pick the divisor below sqrt(n) of
    largest tau (smallest such on ties), then recurse on it with k - 1.
    """
    n, k = int(n), int(k)
    if n < 1 or k < 1:
        raise DomainError("dominating_divisor needs n >= 1 and k >= 1")
    d = n
    for _ in range(k):
        if d == 1:
            return 1
        fac = factorize(d)
        best, best_tau = 1, 1
        for c in divisors_from(fac):
            if c * c > d:
                break
            t = tau(c)
            if t > best_tau:
                best, best_tau = c, t
        d = best
    return d


def tau_weighted_norm(c) -> float:
    """sum |c(n)|^2 tau(n)^2 over the support of c."""
    ns, ws = _support(c)
    total = 0.0
    for n, w in zip(ns, ws):
        total += abs(w) ** 2 * tau(int(n)) ** 2
    return total


def _support(c):
    if hasattr(c, "n") and hasattr(c, "w"):
        return c.n, c.w
    if isinstance(c, dict):
        return list(c.keys()), list(c.values())
    raise TypeError("expected a WeightedSequence or a dict n -> weight")
