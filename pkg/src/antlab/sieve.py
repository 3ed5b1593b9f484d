"""Sifted sums and the Buchstab decomposition, computed exactly.

Everything here is a finite enumeration. The sums that are only bounded in
the asymptotic argument (the tail beyond x^(1/2-delta), the middle band of
the U-splits) are computed like every other term, so each identity can be
checked with its remainder included.

Notation: S(C_d, z) is the weight of the elements n of C with d | n and no
prime factor below z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import factorize
from .errors import CapacityError, DomainError, PreconditionError
from .parallel import ordered_map
from .primes import cached_primes, primes_up_to
from .sequences import SieveParams, WeightedSequence, pi_of

MAX_SIFT_SUPPORT = 5_000_000


def smallest_prime_factors(C: WeightedSequence) -> np.ndarray:
    """Smallest prime factor of every support element (inf for n = 1).

    Cached on the sequence since every sifted sum needs it.
    """
    cached = C.meta.get("_spf")
    if cached is not None:
        return cached
    if len(C) > MAX_SIFT_SUPPORT:
        raise CapacityError(f"support of {len(C)} elements exceeds {MAX_SIFT_SUPPORT}")
    n = C.n
    spf = np.zeros(n.size, dtype=np.float64)
    open_idx = np.flatnonzero(n > 1)
    if open_idx.size:
        root = math.isqrt(int(n.max()))
        for p in cached_primes(max(root, 2)).primes:
            if p > root or open_idx.size == 0:
                break
            hit = n[open_idx] % p == 0
            spf[open_idx[hit]] = p
            open_idx = open_idx[~hit]
        spf[open_idx] = n[open_idx]
    spf[n == 1] = np.inf
    spf.setflags(write=False)
    C.meta["_spf"] = spf
    return spf


def sift(C: WeightedSequence, z: float):
    """S(C, z): weight of elements with no prime factor below z."""
    if not z >= 2:
        raise DomainError("sift needs z >= 2")
    if len(C) == 0:
        return 0.0
    spf = smallest_prime_factors(C)
    return C.w[spf >= z].sum().item()


def sift_multiple(C: WeightedSequence, d: int, z: float):
    """S(C_d, z)."""
    if len(C) == 0:
        return 0.0
    spf = smallest_prime_factors(C)
    keep = (C.n % int(d) == 0) & (spf >= z)
    return C.w[keep].sum().item()


def _primes_in_range(lo: float, hi: float) -> np.ndarray:
    # primes p with lo <= p < hi
    top = math.ceil(hi)
    if top < 2:
        return np.zeros(0, dtype=np.int64)
    ps = primes_up_to(max(top, 2)).primes
    return ps[(ps >= lo) & (ps < hi)]


@dataclass
class BuchstabReport:
    S1: float
    S2: float
    S3: float
    tail: float
    sifted: float
    pi: float
    T: list = field(default_factory=list)
    U: list = field(default_factory=list)
    V: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)

    def max_relative_residual(self) -> float:
        return max((r for r in self.residuals.values()), default=0.0)


def _rel(residual, *terms):
    scale = sum(abs(t) for t in terms)
    return abs(residual) / scale if scale else abs(residual)


def _per_prime_sifted(C: WeightedSequence, ps: np.ndarray) -> np.ndarray:
    """S(C_p, p) for each p in ps, i.e. weight of elements whose least prime is p."""
    spf = smallest_prime_factors(C)
    out = np.zeros(ps.size, dtype=C.w.dtype if C.w.dtype.kind == "c" else np.float64)
    if ps.size == 0 or len(C) == 0:
        return out
    order = np.argsort(spf, kind="stable")
    s_spf = spf[order]
    s_w = C.w[order]
    lo = np.searchsorted(s_spf, ps, side="left")
    hi = np.searchsorted(s_spf, ps, side="right")
    for i, (a, b) in enumerate(zip(lo, hi)):
        if b > a:
            out[i] = s_w[a:b].sum()
    return out


@dataclass
class TupleSums:
    """Level-indexed sums from the prime-tuple descent.

    ``T[m]``, ``V[m]`` for tuples of length m with product < Y; ``U[m]`` for
    (m+1)-tuples whose first m primes have product < Y and whose full product
    is >= Y. ``U_bands[m]`` splits ``U[m]`` by the full product into
    (< x^(1/2-delta), middle, >= x^(1/2+delta)).
    """

    T: dict
    U: dict
    V: dict
    U_bands: dict


def _descend(C, spf, primes, z0, Y, lo_band, hi_band, first_index):
    T, U, V, bands = {}, {}, {}, {}

    def add(d, key, val):
        d[key] = d.get(key, 0.0) + val

    def band_add(m, prod, val):
        slot = bands.setdefault(m, [0.0, 0.0, 0.0])
        if prod < lo_band:
            slot[0] += val
        elif prod < hi_band:
            slot[1] += val
        else:
            slot[2] += val

    def visit(m, prod, j, idx):
        # tuple p_1 > ... > p_m = primes[j], product prod < Y, idx = elements divisible by prod
        pm = int(primes[j])
        sub_spf = spf[idx]
        sub_w = C.w[idx]
        add(V, m, sub_w[sub_spf >= pm].sum().item())
        add(T, m, sub_w[sub_spf >= z0].sum().item())
        for jj in range(j - 1, -1, -1):
            q = int(primes[jj])
            nxt = idx[C.n[idx] % q == 0]
            if nxt.size == 0:
                continue
            if prod * q < Y:
                visit(m + 1, prod * q, jj, nxt)
            else:
                val = C.w[nxt][spf[nxt] >= q].sum().item()
                add(U, m, val)
                band_add(m, prod * q, val)

    p1 = int(primes[first_index])
    idx = np.flatnonzero(C.n % p1 == 0)
    if idx.size:
        visit(1, p1, first_index, idx)
    return TupleSums(T, U, V, bands)


def tuple_sums(C: WeightedSequence, params: SieveParams, threads: int | None = None) -> TupleSums:
    """Run the prime-tuple descent over x^delta <= p_m < ... < p_1 < Y.

    The outermost prime p_1 is distributed over workers; partial sums are
    combined in ascending p_1 order.
    """
    z0, Y = params.z_small, params.Y
    x = params.x
    lo_band, hi_band = x ** (0.5 - params.delta), x ** (0.5 + params.delta)
    primes = _primes_in_range(z0, Y)
    spf = smallest_prime_factors(C) if len(C) else np.zeros(0)
    parts = ordered_map(
        lambda i: _descend(C, spf, primes, z0, Y, lo_band, hi_band, i),
        range(primes.size),
        threads,
    )
    total = TupleSums({}, {}, {}, {})
    for part in parts:
        for name in ("T", "U", "V"):
            src, dst = getattr(part, name), getattr(total, name)
            for m, v in src.items():
                dst[m] = dst.get(m, 0.0) + v
        for m, b in part.U_bands.items():
            slot = total.U_bands.setdefault(m, [0.0, 0.0, 0.0])
            for i in range(3):
                slot[i] += b[i]
    return total


def buchstab_terms(C: WeightedSequence, params: SieveParams, threads: int | None = None) -> BuchstabReport:
    """S1, S2, S3, the tail, and the T/U/V recursion, with identity residuals.

    Residual keys: ``partition`` for S(C, sqrt x) = S1 - S2 - S3 - tail,
    ``S2=V1``, ``recursion_n`` for V(n) = T(n) - U(n) - V(n+1) and
    ``telescoping`` for the alternating sum. All are relative to the sum of
    absolute values of the terms involved.
    """
    x = params.x
    z0, Y, z1 = params.z_small, params.Y, params.z_large
    root = math.sqrt(x)
    S1 = sift(C, z0) if len(C) else 0.0
    sifted = sift(C, root) if len(C) else 0.0

    def band(lo, hi):
        ps = _primes_in_range(lo, hi)
        return float(np.sum(_per_prime_sifted(C, ps))) if ps.size else 0.0

    S2 = band(z0, Y)
    S3 = band(Y, z1)
    tail = band(z1, root)

    ts = tuple_sums(C, params, threads)
    n0 = params.n0
    T = [ts.T.get(m, 0.0) for m in range(1, n0 + 1)]
    U = [ts.U.get(m, 0.0) for m in range(1, n0 + 1)]
    V = [ts.V.get(m, 0.0) for m in range(1, n0 + 2)]
    for m in list(ts.T) + list(ts.U) + list(ts.V):
        if m > n0 + 1 or (m == n0 + 1 and (ts.T.get(m) or ts.U.get(m))):
            raise PreconditionError(f"prime tuple of length {m} found beyond n0={n0}")

    res = {}
    res["partition"] = _rel(sifted - (S1 - S2 - S3 - tail), sifted, S1, S2, S3, tail)
    res["S2=V1"] = _rel(S2 - V[0], S2, V[0])
    for m in range(1, n0 + 1):
        r = V[m - 1] - (T[m - 1] - U[m - 1] - V[m])
        res[f"recursion_{m}"] = _rel(r, V[m - 1], T[m - 1], U[m - 1], V[m])
    alt = sum((-1) ** (m - 1) * (T[m - 1] - U[m - 1]) for m in range(1, n0 + 1))
    alt += (-1) ** n0 * V[n0]
    res["telescoping"] = _rel(S2 - alt, S2, *T, *U, V[n0])
    return BuchstabReport(S1, S2, S3, tail, sifted, pi_of(C), T, U, V, res)


@dataclass
class TUVRecord:
    T: float
    U: float
    V: float
    Vnext: float


def decompose_T_U(C: WeightedSequence, params: SieveParams, n: int, threads: int | None = None) -> TUVRecord:
    """T(n), U(n), V(n), V(n+1) for 1 <= n <= n0."""
    if not 1 <= n <= params.n0:
        raise DomainError(f"n must lie in 1..{params.n0}")
    ts = tuple_sums(C, params, threads)
    return TUVRecord(ts.T.get(n, 0.0), ts.U.get(n, 0.0), ts.V.get(n, 0.0), ts.V.get(n + 1, 0.0))


@dataclass
class USplit:
    U1: float
    middle: float
    U2: float
    total: float


def u_split(C: WeightedSequence, params: SieveParams, n: int, threads: int | None = None) -> USplit:
    """U(n) split by the full product at x^(1/2-delta) and x^(1/2+delta), n in {1, 2}."""
    if n not in (1, 2):
        raise DomainError("u_split is defined for n = 1 and n = 2")
    ts = tuple_sums(C, params, threads)
    lo, mid, hi = ts.U_bands.get(n, [0.0, 0.0, 0.0])
    return USplit(lo, mid, hi, ts.U.get(n, 0.0))


@dataclass(frozen=True)
class CoefficientSupport:
    """Support description for the indicator coefficients.

    kind "Qj": n = p_1 ... p_{j+1} with p_{j+1} in J, p_{j+1} < ... < p_1 < Y,
    p_1 ... p_j < Y <= n < upper. For j = 0 this reduces to a single prime
    in J (the Y conditions are dropped, see ``coefficient_indicator``).
    kind "R": every prime factor of n is at least V = J[0].
    ``window`` = (N', N'(1+omega)) restricts n to (N', N'(1+omega)] when given.
    """

    kind: str
    j: int = 0
    J: tuple = (0.0, 0.0)
    Y: float = math.inf
    window: tuple | None = None
    upper: float = math.inf

    def __post_init__(self):
        if self.kind not in ("Qj", "R"):
            raise ValueError("kind must be 'Qj' or 'R'")
        if self.j < 0:
            raise ValueError("j must be >= 0")


def coefficient_indicator(spec: CoefficientSupport, n: int) -> bool:
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    if spec.window is not None:
        lo, hi = spec.window
        if not lo < n <= hi:
            return False
    fac = factorize(n)
    if spec.kind == "R":
        V = spec.J[0]
        return all(p >= V for p in fac)
    # Qj: squarefree with exactly j+1 prime factors
    if any(e > 1 for e in fac.values()) or len(fac) != spec.j + 1:
        return False
    ps = sorted(fac, reverse=True)  # p_1 > ... > p_{j+1}
    last = ps[-1]
    if not spec.J[0] <= last < spec.J[1]:
        return False
    if spec.j == 0:
        return True
    if not ps[0] < spec.Y:
        return False
    head = math.prod(ps[:-1])
    return head < spec.Y <= n < spec.upper
