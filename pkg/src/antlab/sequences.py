"""The weighted sequences A and B and their divisibility statistics.

A puts weight 2p log p on n = a^2 + p^4 with p^2 in I, B puts weight log p on
n = a^2 + p^2 with p in I; in both cases a > 0, (a, p) = 1 and n <= x, and
I = (X, X(1 + eta)]. Counts #C_d are compared against the model g(d) mu(I).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import divisors_from, factorize_many, rho
from .constants import mu_interval
from .errors import CapacityError, DomainError, PreconditionError
from .parallel import ordered_map
from .primes import is_prime_array, primes_up_to

log = logging.getLogger(__name__)

# Upper limit on the number of (a, p) pairs a single build may generate.
MAX_BUILD_PAIRS = 60_000_000
MAX_BRUTE_WORK = 400_000_000


@dataclass(frozen=True)
class SieveParams:
    """Parameter bundle (x, X, eta, delta, varpi, Y, n0).

    Use :meth:`standard` to derive eta, delta, Y and n0 from x.
    """

    x: int
    X: float
    eta: float
    delta: float
    varpi: float
    Y: float
    n0: int

    @classmethod
    def standard(cls, x: int, X: float | None = None, varpi: float = 0.1, Y: float | None = None):
        x = int(x)
        if x < 16:
            raise PreconditionError("x must be at least 16")
        L = math.log(x)
        eta = 1.0 / L
        if X is None:
            X = math.sqrt(x) / 2
        delta = L ** (varpi - 1.0)
        if Y is None:
            Y = x ** (1.0 / 3 + 1.0 / 48)
        n0 = math.floor(math.log(Y) / (delta * L))
        p = cls(x=x, X=float(X), eta=eta, delta=delta, varpi=float(varpi), Y=float(Y), n0=n0)
        p.validate()
        return p

    @property
    def log_x(self) -> float:
        return math.log(self.x)

    @property
    def interval(self) -> tuple[float, float]:
        """Endpoints (X, X(1+eta)) of the half-open interval I."""
        return self.X, self.X * (1.0 + self.eta)

    @property
    def z_small(self) -> float:
        """x^delta."""
        return self.x**self.delta

    @property
    def z_large(self) -> float:
        """x^(1/2 - delta)."""
        return self.x ** (0.5 - self.delta)

    @property
    def mu(self) -> float:
        return mu_interval(self.x, self.X, self.eta)

    def validate(self):
        L = self.log_x
        root = math.sqrt(self.x)
        if not self.varpi > 0:
            raise PreconditionError("varpi must be positive")
        if not self.eta > 0:
            raise PreconditionError("I must be nonempty (eta > 0)")
        if not (root / L**4 <= self.X and self.X * (1 + self.eta) <= root):
            raise PreconditionError(
                f"X={self.X} must satisfy sqrt(x)/log^4 x <= X and X(1+eta) <= sqrt(x)"
            )
        if not (self.z_small < self.Y < self.z_large):
            raise PreconditionError(
                f"Y={self.Y} must lie strictly between x^delta={self.z_small:.6g} "
                f"and x^(1/2-delta)={self.z_large:.6g}"
            )


@dataclass(frozen=True)
class WeightedSequence:
    """Finite weighted sequence: ascending support ``n`` and weights ``w``."""

    n: np.ndarray
    w: np.ndarray
    params: SieveParams | None = None
    kind: str = "custom"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = np.asarray(self.n, dtype=np.int64)
        w = np.asarray(self.w)
        if w.dtype.kind not in "fc":
            w = w.astype(np.float64)
        if n.shape != w.shape or n.ndim != 1:
            raise ValueError("support and weights must be 1-d arrays of equal length")
        if n.size and (np.any(np.diff(n) <= 0) or n[0] < 1):
            raise ValueError("support must be strictly ascending positive integers")
        if self.kind not in ("A", "B", "custom"):
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind in ("A", "B") and n.size:
            x = self.params.x
            if n[-1] > x or int(n[0]) ** 2 <= x:
                raise ValueError("A/B support must lie in (sqrt(x), x]")
            if np.any(w < 0):
                raise ValueError("A/B weights must be non-negative")
        n.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_mapping(cls, mapping, params=None, kind="custom"):
        items = sorted((int(k), v) for k, v in mapping.items())
        n = np.array([k for k, _ in items], dtype=np.int64)
        vals = [v for _, v in items]
        w = np.array(vals, dtype=np.complex128 if any(isinstance(v, complex) for v in vals) else np.float64)
        return cls(n, w, params, kind)

    @classmethod
    def empty(cls, params=None, kind="custom"):
        return cls(np.zeros(0, dtype=np.int64), np.zeros(0), params, kind)

    def __len__(self):
        return int(self.n.size)

    def items(self):
        return zip((int(v) for v in self.n), self.w.tolist())

    def as_dict(self) -> dict:
        return dict(self.items())

    def weight(self, n: int):
        i = np.searchsorted(self.n, n)
        if i < self.n.size and self.n[i] == n:
            return self.w[i].item()
        return 0.0

    def mass(self):
        return self.w.sum().item() if self.n.size else 0.0

    def norm2(self) -> float:
        """sum |c(n)|^2."""
        return float(np.sum(np.abs(self.w) ** 2))

    def restrict(self, d: int) -> "WeightedSequence":
        """The subsequence C_d of elements divisible by d."""
        keep = self.n % int(d) == 0
        return WeightedSequence(self.n[keep], self.w[keep], self.params, self.kind)

    def mu(self) -> float:
        if self.params is None:
            raise PreconditionError("sequence carries no SieveParams, so mu(I) is undefined")
        return self.params.mu


def _primes_in(lo: float, hi: float, square: bool) -> list[int]:
    # p (or p^2) in (lo, hi]; int-vs-float comparisons in Python are exact.
    top = math.isqrt(math.floor(hi)) if square else math.floor(hi)
    out = []
    for p in primes_up_to(max(top, 2)).primes:
        p = int(p)
        v = p * p if square else p
        if lo < v <= hi:
            out.append(p)
    return out


def _rows_for_prime(args):
    p, x, power, weight = args
    base = p**power
    amax = math.isqrt(x - base) if x >= base else 0
    a = np.arange(1, amax + 1, dtype=np.int64)
    a = a[a % p != 0]
    n = a * a + base
    root_ok = n * n > x if x < 3 * 10**9 else np.array([int(v) ** 2 > x for v in n], dtype=bool)
    n = n[root_ok]
    return n, np.full(n.size, weight)


def build_sequence(kind: str, params: SieveParams, threads: int | None = None) -> WeightedSequence:
    """Build A or B for the given parameters.

    Raises:
        CapacityError: if the number of generating pairs exceeds MAX_BUILD_PAIRS.
    """
    if kind not in ("A", "B"):
        raise DomainError(f"kind must be 'A' or 'B', got {kind!r}")
    x = params.x
    lo, hi = params.interval
    if kind == "A":
        ps = _primes_in(lo, hi, square=True)
        jobs = [(p, x, 4, 2 * p * math.log(p)) for p in ps]
    else:
        ps = _primes_in(lo, hi, square=False)
        jobs = [(p, x, 2, math.log(p)) for p in ps]
    est = len(ps) * math.isqrt(x)
    if est > MAX_BUILD_PAIRS:
        raise CapacityError(
            f"building {kind} at x={x} needs ~{est:.3g} pairs (budget {MAX_BUILD_PAIRS}); "
            "shrink x or the interval"
        )
    parts = ordered_map(_rows_for_prime, jobs, threads)
    if not parts:
        return WeightedSequence.empty(params, kind)
    n_all = np.concatenate([p[0] for p in parts])
    w_all = np.concatenate([p[1] for p in parts])
    support, inv, counts = np.unique(n_all, return_inverse=True, return_counts=True)
    weights = np.bincount(inv, weights=w_all, minlength=support.size)
    shared = int(np.count_nonzero(counts > 1))
    if shared:
        log.info("%s(x=%d): %d values of n have more than one representation", kind, x, shared)
    return WeightedSequence(support, weights, params, kind, meta={"primes": ps, "shared_n": shared})


def subsequence_count(C: WeightedSequence, d: int):
    """#C_d = sum of c(n) over n divisible by d."""
    d = int(d)
    if d < 1:
        raise DomainError("d must be >= 1")
    if C.n.size == 0:
        return 0.0
    return C.w[C.n % d == 0].sum().item()


def divisor_counts(C: WeightedSequence, D: int) -> np.ndarray:
    """Array whose entry d (1 <= d <= D) is #C_d.

    Each support element is factored once and its divisors up to D receive
    its weight.
    """
    D = int(D)
    dtype = np.complex128 if C.w.dtype.kind == "c" else np.float64
    out = np.zeros(D + 1, dtype=dtype)
    if C.n.size == 0 or D < 1:
        return out
    facs = factorize_many(C.n)
    idx, wts = [], []
    for fac, w in zip(facs, C.w.tolist()):
        ds = divisors_from(fac, limit=D)
        idx.extend(ds)
        wts.extend([w] * len(ds))
    idx = np.asarray(idx, dtype=np.int64)
    wts = np.asarray(wts, dtype=dtype)
    if dtype == np.complex128:
        out += np.bincount(idx, weights=wts.real, minlength=D + 1)
        out += 1j * np.bincount(idx, weights=wts.imag, minlength=D + 1)
    else:
        out += np.bincount(idx, weights=wts, minlength=D + 1)
    return out


def model_count(C: WeightedSequence, d: int) -> float:
    """M_d(C) = g(d) mu(I)."""
    r = rho(d)
    return 0.0 if r == 0 else r * C.mu() / d


def remainder(C: WeightedSequence, d: int) -> float:
    """R_d(C) = |#C_d - g(d) mu(I)|."""
    return abs(subsequence_count(C, d) - model_count(C, d))


@dataclass
class LevelTable:
    d: np.ndarray
    count: np.ndarray
    model: np.ndarray
    remainder: np.ndarray
    tau: np.ndarray
    weighted_sum: float
    k: int


def tau_table(D: int) -> np.ndarray:
    t = np.zeros(D + 1, dtype=np.int64)
    for i in range(1, D + 1):
        t[i::i] += 1
    return t


def level_table(C: WeightedSequence, D: float, k: int) -> LevelTable:
    """Counts, model values and remainders for every d <= D."""
    Dint = math.floor(D)
    if Dint < 1:
        raise DomainError("D must be >= 1")
    if k < 0:
        raise DomainError("k must be >= 0")
    counts = divisor_counts(C, Dint)[1:]
    ds = np.arange(1, Dint + 1, dtype=np.int64)
    mu = C.mu()
    rhos = np.array([rho(int(d)) for d in ds], dtype=np.float64)
    model = rhos * mu / ds
    rem = np.abs(counts - model)
    taus = tau_table(Dint)[1:]
    wsum = math.fsum((taus.astype(np.float64) ** k * rem).tolist())
    return LevelTable(ds, counts, model, rem, taus, wsum, int(k))


def remainder_sum(C: WeightedSequence, D: float, k: int) -> float:
    """sum over d <= D of tau(d)^k R_d(C)."""
    return level_table(C, D, k).weighted_sum


def pi_of(C: WeightedSequence):
    """Total weight carried by prime n."""
    if C.n.size == 0:
        return 0.0
    mask = is_prime_array(C.n)
    return C.w[mask].sum().item()


@dataclass(frozen=True)
class PrimeCensus:
    x: int
    pairs: int
    distinct: int


def prime_census(x: int) -> PrimeCensus:
    """Pairs (a, p) with a > 0, p prime, a^2 + p^4 <= x prime; also distinct values."""
    x = int(x)
    if x < 1:
        raise DomainError("x must be positive")
    work = x**0.75
    if work > MAX_BRUTE_WORK:
        raise CapacityError(f"brute-force count at x={x} needs ~{work:.3g} primality tests")
    pmax = math.isqrt(math.isqrt(x))
    pairs = 0
    values = []
    for p in primes_up_to(max(pmax, 2)).primes:
        p = int(p)
        base = p**4
        if base + 1 > x:
            break
        a = np.arange(1, math.isqrt(x - base) + 1, dtype=np.int64)
        n = a * a + base
        hit = n[is_prime_array(n)]
        pairs += int(hit.size)
        values.append(hit)
    distinct = int(np.unique(np.concatenate(values)).size) if values else 0
    if distinct != pairs:
        log.info("x=%d: %d prime pairs but only %d distinct primes", x, pairs, distinct)
    return PrimeCensus(x, pairs, distinct)


def brute_force_prime_count(x: int) -> int:
    """#{(a, p): a > 0, p prime, a^2 + p^4 <= x and a^2 + p^4 prime}."""
    return prime_census(x).pairs
