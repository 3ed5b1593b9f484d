"""Prime generation, primality testing and classical prime weights.

Everything downstream leans on three primitives defined here: a segmented
sieve (:func:`primes_up_to`), a deterministic strong-pseudoprime test valid on
the whole unsigned 64-bit range (:func:`is_prime`, :func:`is_prime_array`),
and the logarithmic integral :func:`li`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import CapacityError, DomainError

DEFAULT_SEGMENT = 1 << 20
# ~ 10^10 needs ~3.6 GB for the output alone; refuse well before that.
MAX_SIEVE_LIMIT = 4 * 10**9

# Strong-pseudoprime bases that are deterministic for every n < 3.3e24.
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# Deterministic for n < 4_759_123_141 (Jaeschke).
_MR_BASES_32 = (2, 7, 61)


@dataclass(frozen=True)
class PrimeTable:
    """Immutable ascending table of all primes up to ``limit``."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return (int(p) for p in self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def __contains__(self, n):
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def between(self, lo, hi) -> np.ndarray:
        """Primes p with lo <= p < hi."""
        a = np.searchsorted(self.primes, lo, side="left")
        b = np.searchsorted(self.primes, hi, side="left")
        return self.primes[a:b]

    def tolist(self) -> list[int]:
        return [int(p) for p in self.primes]


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_up_to(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT,
    max_limit: int = MAX_SIEVE_LIMIT,
) -> PrimeTable:
    """Return every prime ``<= limit`` using a segmented sieve of Eratosthenes.

    Args:
        limit: Inclusive upper bound, ``limit >= 1``.
        segment_size: Number of integers sieved per segment.
        max_limit: Memory guard; larger limits raise :class:`CapacityError`.
    """
    limit = int(limit)
    if limit < 1:
        raise DomainError("limit must be >= 1")
    if limit > max_limit:
        raise CapacityError(
            f"primes_up_to({limit}) exceeds the sieve budget of {max_limit}; "
            "raise max_limit explicitly if the memory is available"
        )
    root = math.isqrt(limit)
    base = _simple_sieve(root)
    if limit <= max(root, segment_size):
        return PrimeTable(limit, _simple_sieve(limit))

    chunks = [base]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size - 1, limit)
        seg = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            if p * p > hi:
                break
            start = max(p * p, ((lo + p - 1) // p) * p)
            seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
        lo = hi + 1
    return PrimeTable(limit, np.concatenate(chunks))


@lru_cache(maxsize=8)
def cached_primes(limit: int) -> PrimeTable:
    """Shared read-only table; safe to hand to parallel workers."""
    return primes_up_to(limit)


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


_SMALL = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``0 <= n < 2**64`` (and well beyond)."""
    n = int(n)
    if n < 2:
        return False
    for p in _SMALL:
        if n % p == 0:
            return n == p
    if n < 53 * 53:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES_32 if n < 4_759_123_141 else _MR_BASES_64
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


def _powmod_u64(base, exp, mod):
    # Valid while mod < 2**32 so that products fit in uint64.
    result = np.ones_like(mod)
    b = base % mod
    e = exp.copy()
    while np.any(e):
        odd = (e & 1).astype(bool)
        result = np.where(odd, result * b % mod, result)
        b = b * b % mod
        e >>= 1
    return result


def is_prime_array(values) -> np.ndarray:
    """Vectorised :func:`is_prime` over an integer array.

    Entries below 2**32 go through a numpy strong-pseudoprime test with the
    bases {2, 7, 61}; anything larger falls back to the scalar test.
    """
    v = np.asarray(values, dtype=np.int64)
    out = np.zeros(v.shape, dtype=bool)
    flat_v = v.ravel()
    flat = out.ravel()

    small = (flat_v >= 0) & (flat_v < (1 << 32))
    idx = np.flatnonzero(small)
    if idx.size:
        n = flat_v[idx].astype(np.uint64)
        res = n >= 2
        for p in _SMALL:
            hit = (n % np.uint64(p)) == 0
            res &= ~hit | (n == p)
        pending = res & (n >= np.uint64(53 * 53))
        if np.any(pending):
            m = n[pending]
            d = m - np.uint64(1)
            s = np.zeros(m.shape, dtype=np.int64)
            while True:
                even = (d & np.uint64(1)) == 0
                if not np.any(even):
                    break
                d = np.where(even, d >> np.uint64(1), d)
                s += even
            ok = np.ones(m.shape, dtype=bool)
            for a in _MR_BASES_32:
                x = _powmod_u64(np.full(m.shape, a, dtype=np.uint64), d, m)
                passed = (x == 1) | (x == m - np.uint64(1))
                for r in range(1, int(s.max())):
                    x = x * x % m
                    passed |= (r < s) & (x == m - np.uint64(1))
                ok &= passed
            res[pending] = ok
        flat[idx] = res

    for i in np.flatnonzero(~small & (flat_v >= 2)):
        flat[i] = is_prime(int(flat_v[i]))
    return out


def von_mangoldt(n: int) -> float:
    """Lambda(n): log p when n is a power of the prime p, else 0."""
    n = int(n)
    if n < 1:
        raise DomainError("von_mangoldt needs n >= 1")
    if n == 1:
        return 0.0
    if is_prime(n):
        return math.log(n)
    for k in range(2, n.bit_length() + 1):
        r = round(n ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 2 and c**k == n and is_prime(c):
                return math.log(c)
    return 0.0


def von_mangoldt_table(x: int) -> tuple[np.ndarray, np.ndarray]:
    """Support and values of Lambda on 1..x (prime powers only)."""
    table = cached_primes(max(int(x), 2))
    ns, ws = [], []
    for p in table.primes:
        p = int(p)
        if p > x:
            break
        lp = math.log(p)
        q = p
        while q <= x:
            ns.append(q)
            ws.append(lp)
            q *= p
    order = np.argsort(ns, kind="stable")
    return np.asarray(ns, dtype=np.int64)[order], np.asarray(ws)[order]


def li(x: float, rtol: float = 1e-12) -> float:
    """Offset logarithmic integral, the integral of 1/log t over [2, x]."""
    x = float(x)
    if not x >= 2.0:
        raise DomainError(f"li is defined here for x >= 2, got {x}")
    if x == 2.0:
        return 0.0
    # Split on a geometric grid; keeps each quad call well conditioned for large x.
    knots = [2.0]
    while knots[-1] * 16 < x:
        knots.append(knots[-1] * 16)
    knots.append(x)
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        val, _ = integrate.quad(lambda t: 1.0 / math.log(t), a, b, epsabs=0.0, epsrel=rtol, limit=200)
        total += val
    return total
