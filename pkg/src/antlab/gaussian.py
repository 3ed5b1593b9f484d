"""Gaussian integers and the lattice-point machinery built on them.

All congruence and determinant arithmetic is done on Python integers, so
nothing here is subject to floating-point rounding except angles and norms
compared against real thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import bracket, factorize, jacobi
from .errors import DomainError, PreconditionError
from .parallel import ordered_map
from .primes import is_prime, li, primes_up_to

TWO_PI = 2 * math.pi


@dataclass(frozen=True, order=True)
class GaussInt:
    re: int
    im: int

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    @classmethod
    def of(cls, v) -> "GaussInt":
        if isinstance(v, GaussInt):
            return v
        if isinstance(v, complex):
            return cls(int(v.real), int(v.imag))
        if isinstance(v, tuple):
            return cls(*v)
        return cls(int(v), 0)

    def __add__(self, o):
        o = GaussInt.of(o)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussInt.of(o)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussInt.of(o) - self

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussInt.of(o)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def arg(self) -> float:
        """Argument in [0, 2 pi)."""
        if not self:
            raise DomainError("arg(0) is undefined")
        a = math.atan2(self.im, self.re)
        return a + TWO_PI if a < 0 else a

    def divmod_round(self, o: "GaussInt"):
        """Euclidean division with nearest-integer quotient."""
        o = GaussInt.of(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * o.conj()
        q = GaussInt(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * o

    def divides(self, o) -> bool:
        """True if self | o."""
        o = GaussInt.of(o)
        n = self.norm()
        if n == 0:
            return not o
        num = o * self.conj()
        return num.re % n == 0 and num.im % n == 0

    def exact_div(self, o) -> "GaussInt":
        o = GaussInt.of(o)
        n = o.norm()
        num = self * o.conj()
        if n == 0 or num.re % n or num.im % n:
            raise DomainError(f"{o} does not divide {self}")
        return GaussInt(num.re // n, num.im // n)

    def associates(self) -> list["GaussInt"]:
        return [self, GaussInt(-self.im, self.re), -self, GaussInt(self.im, -self.re)]

    def congruent(self, o, modulus: int) -> bool:
        """self = o (mod modulus) for a rational integer modulus."""
        o = GaussInt.of(o)
        m = abs(int(modulus))
        return (self.re - o.re) % m == 0 and (self.im - o.im) % m == 0


def _round_div(a: int, n: int) -> int:
    # nearest integer to a/n for n > 0, exact
    return (2 * a + n) // (2 * n)


UNITS = (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))


def gauss_gcd(a, b) -> GaussInt:
    a, b = GaussInt.of(a), GaussInt.of(b)
    while b:
        _, r = a.divmod_round(b)
        a, b = b, r
    return a


def is_primitive(z: GaussInt) -> bool:
    z = GaussInt.of(z)
    if not z:
        raise DomainError("is_primitive(0) is undefined")
    return math.gcd(z.re, z.im) == 1


def normalize_odd_real(z: GaussInt) -> GaussInt:
    """The associate of z with positive odd real part (needs N(z) odd)."""
    for u in z.associates():
        if u.re > 0 and u.re % 2 == 1:
            return u
    raise PreconditionError(f"{z} has no associate with positive odd real part")


def canonical_norm_divisor(gamma: GaussInt, m: int) -> GaussInt:
    """The divisor of gamma with norm m and positive odd real part.

    For gamma primitive of odd norm this divisor exists and is unique; it is
    the Gaussian gcd of gamma and m, normalised.
    """
    gamma = GaussInt.of(gamma)
    m = int(m)
    if not gamma or not is_primitive(gamma):
        raise PreconditionError("gamma must be primitive")
    N = gamma.norm()
    if N % 2 == 0:
        raise PreconditionError("gamma must have odd norm")
    if m < 1 or N % m:
        raise PreconditionError(f"m={m} must divide N(gamma)={N}")
    lam = gauss_gcd(gamma, GaussInt(m, 0))
    if lam.norm() != m:
        raise AssertionError("gcd has wrong norm; gamma not primitive?")
    return normalize_odd_real(lam)


@lru_cache(maxsize=4096)
def _two_squares_prime(p: int) -> tuple[int, int]:
    # p = a^2 + b^2 with a odd, b even, a, b > 0, by direct search
    r = math.isqrt(p)
    a = np.arange(1, r + 1, dtype=np.int64)
    b2 = p - a * a
    b = np.sqrt(b2).round().astype(np.int64)
    hit = np.flatnonzero((b * b == b2) & (b > 0))
    a0, b0 = int(a[hit[0]]), int(b[hit[0]])
    return (a0, b0) if a0 % 2 else (b0, a0)


def elements_of_norm(m: int) -> list[GaussInt]:
    """Every Gaussian integer of norm m, built from the rational factorisation."""
    m = int(m)
    if m < 1:
        raise DomainError("m must be >= 1")
    reps = [GaussInt(1, 0)]
    for p, f in factorize(m).items() if m > 1 else []:
        if p == 2:
            local = [_pow(GaussInt(1, 1), f)]
        elif p % 4 == 3:
            if f % 2:
                return []
            local = [GaussInt(p ** (f // 2), 0)]
        else:
            a, b = _two_squares_prime(p)
            pi, pib = GaussInt(a, b), GaussInt(a, -b)
            local = [_pow(pi, j) * _pow(pib, f - j) for j in range(f + 1)]
        reps = [r * s for r in reps for s in local]
    return sorted({u * r for r in reps for u in UNITS})


def _pow(z: GaussInt, k: int) -> GaussInt:
    out = GaussInt(1, 0)
    for _ in range(k):
        out = out * z
    return out


def delta(z1: GaussInt, z2: GaussInt) -> int:
    """Im(conj(z1) z2) = x1 y2 - y1 x2."""
    z1, z2 = GaussInt.of(z1), GaussInt.of(z2)
    return z1.re * z2.im - z1.im * z2.re


def in_exclusion_region(z: GaussInt, N: float, threshold: float) -> bool:
    """N <= N(z) < 2N and arg z within ``threshold`` of a multiple of pi/2 (closed)."""
    z = GaussInt.of(z)
    if N < 1:
        raise DomainError("N must be >= 1")
    n = z.norm()
    if not (N <= n < 2 * N):
        return False
    if z.re == 0 or z.im == 0:
        return True
    t = z.arg()
    return min(abs(t - k * math.pi / 2) for k in range(5)) <= threshold


@dataclass(frozen=True)
class AngularRegion:
    """{z : c sqrt(N) < |z| <= c(1+omega1) sqrt(N), theta0 < arg z < theta0 + omega2}."""

    c: float
    theta0: float
    omega1: float
    omega2: float
    N: float

    def __post_init__(self):
        if not 1 <= self.c < math.sqrt(2):
            raise DomainError("c must lie in [1, sqrt 2)")

    def contains(self, z: GaussInt) -> bool:
        z = GaussInt.of(z)
        if not z:
            return False
        n = z.norm()
        lo = self.c * self.c * self.N
        hi = (self.c * (1 + self.omega1)) ** 2 * self.N
        if not lo < n <= hi:
            return False
        t = z.arg()
        return self.theta0 < t < self.theta0 + self.omega2

    def points(self) -> list[GaussInt]:
        """All lattice points of the region, sorted."""
        R = math.isqrt(math.ceil((self.c * (1 + self.omega1)) ** 2 * self.N)) + 1
        a = np.arange(-R, R + 1, dtype=np.int64)
        A, B = np.meshgrid(a, a, indexing="ij")
        n = A * A + B * B
        lo = self.c * self.c * self.N
        hi = (self.c * (1 + self.omega1)) ** 2 * self.N
        t = np.mod(np.arctan2(B, A), TWO_PI)
        mask = (n > lo) & (n <= hi) & (t > self.theta0) & (t < self.theta0 + self.omega2)
        pts = [GaussInt(int(x), int(y)) for x, y in zip(A[mask], B[mask])]
        return sorted(p for p in pts if self.contains(p))


def _weight_f(q: int, I) -> float:
    lo, hi = I
    r = math.isqrt(q)
    if r * r == q and lo < q <= hi and is_prime(r):
        return 2 * r * math.log(r)
    return 0.0


def _weight_g(q: int, I) -> float:
    lo, hi = I
    if lo < q <= hi and is_prime(q):
        return math.log(q)
    return 0.0


def sector_S(z: GaussInt, w: GaussInt, I, kind: int) -> float:
    """S_1(z, w) (kind 1: Re(conj(w) z) = p^2 in I) or S_2 (kind 2: = p in I).

    I is the half-open interval (lo, hi].
    """
    z, w = GaussInt.of(z), GaussInt.of(w)
    q = w.re * z.re + w.im * z.im
    if q <= 1:
        return 0.0
    if kind == 1:
        return _weight_f(q, I)
    if kind == 2:
        return _weight_g(q, I)
    raise DomainError("kind must be 1 or 2")


def recover_w(q1: int, q2: int, z1: GaussInt, z2: GaussInt) -> GaussInt | None:
    """Solve Re(conj(w) z_i) = q_i for w, or None if q1 z2 != q2 z1 (mod Delta)."""
    z1, z2 = GaussInt.of(z1), GaussInt.of(z2)
    D = delta(z1, z2)
    if D == 0:
        raise DomainError("Delta(z1, z2) = 0")
    v = GaussInt(q1 * z2.re - q2 * z1.re, q1 * z2.im - q2 * z1.im)
    if v.re % D or v.im % D:
        return None
    # -i v / D
    return GaussInt(v.im // D, -v.re // D)


def count_w(z: GaussInt, q: int, M: float) -> int:
    """#{w : N(w) <= M, Re(conj(w) z) = q} for primitive z.

    With z = s + it the solutions form the line (u0 + t k, v0 - s k).
    """
    z = GaussInt.of(z)
    if not is_primitive(z):
        raise PreconditionError("z must be primitive")
    if M < 0:
        return 0
    s, t = z.re, z.im
    g, a, b = _ext_gcd(s, t)  # a s + b t = g = +-1
    u0, v0 = a * q * g, b * q * g
    n = s * s + t * t
    # N(w(k)) = n k^2 + 2 (u0 t - v0 s) k + (u0^2 + v0^2)
    B = u0 * t - v0 * s
    C = u0 * u0 + v0 * v0
    disc = B * B - n * (C - M)
    if disc < 0:
        return 0
    r = math.sqrt(disc)
    lo = math.floor((-B - r) / n) - 1
    hi = math.ceil((-B + r) / n) + 1
    count = 0
    for k in range(lo, hi + 1):
        if n * k * k + 2 * B * k + C <= M:
            count += 1
    return count


def count_w_bound(z: GaussInt, M: float) -> int:
    """2 (floor(2 sqrt(M/N(z))) + 1)."""
    return 2 * (math.floor(2 * math.sqrt(M / GaussInt.of(z).norm())) + 1)


def _ext_gcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qq, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qq * x1
        y0, y1 = y1, y0 - qq * y1
    return a, x0, y0


# ----------------------------------------------------------------------------
# Congruence sums Z, Z~, Y


def flat_ok(z: GaussInt, exclusion=None) -> bool:
    """Primitive, Re z > 0, z = 1 (mod 2), and outside the exclusion region if given."""
    if z.re <= 0 or z.re % 2 == 0 or z.im % 2 or math.gcd(z.re, z.im) != 1:
        return False
    if exclusion is not None and in_exclusion_region(z, *exclusion):
        return False
    return True


def _z_pairs(a, D, U1, U2, exclusion):
    P1 = [z for z in U1.points() if flat_ok(z, exclusion)]
    P2 = [z for z in U2.points() if flat_ok(z, exclusion)]
    for z1 in P1:
        for z2 in P2:
            if delta(z1, z2) != D:
                continue
            if (a * z2).congruent(z1, D):
                yield z1, z2


def z_sum(a, D, U1, U2, beta=None, variant="plain", exclusion=None) -> float:
    """Z(a, D) (variant "plain") or Z~(a, D) (variant "tilde").

    Args:
        beta: mapping or callable GaussInt -> weight; ignored for "tilde".
        exclusion: optional (N, threshold) describing the excluded region.
    """
    a, D = int(a), int(D)
    if D < 1:
        raise DomainError("D must be >= 1")
    if math.gcd(a, D) != 1:
        raise PreconditionError("need (a, D) = 1")
    pairs = list(_z_pairs(a, D, U1, U2, exclusion))
    tilde = float(len(pairs))
    if variant == "tilde":
        return tilde
    if variant != "plain":
        raise DomainError("variant must be 'plain' or 'tilde'")
    b = _as_weight(beta)
    total = math.fsum(b(z1) * b(z2) for z1, z2 in pairs)
    if abs(total) > tilde * (1 + 1e-12) and max((abs(b(z)) for p in pairs for z in p), default=0) <= 1:
        raise AssertionError("|Z| exceeded Z~ with |beta| <= 1")
    return total


def _as_weight(beta):
    if beta is None:
        return lambda z: 1.0
    if callable(beta):
        return beta
    return lambda z: beta.get(z, 0.0)


def h_weight(kind: str, J):
    """f or g restricted to J = [lo, hi)."""
    lo, hi = J
    if kind == "f":

        def h(q):
            r = math.isqrt(q)
            return 2 * r * math.log(r) if lo <= q < hi and r * r == q and is_prime(r) else 0.0

    elif kind == "g":

        def h(q):
            return math.log(q) if lo <= q < hi and is_prime(q) else 0.0

    else:
        raise DomainError("h must be 'f' or 'g'")
    return h


def _support_of(kind, J):
    lo, hi = J
    ilo, ihi = math.ceil(lo), math.ceil(hi) - 1
    if kind == "g":
        ps = primes_up_to(max(ihi, 2)).primes
        return [int(p) for p in ps if ilo <= p <= ihi]
    ps = primes_up_to(max(math.isqrt(max(ihi, 0)), 2)).primes
    return [int(p) ** 2 for p in ps if ilo <= int(p) ** 2 <= ihi]


def y_sum(a, D, J1, J2, h1, h2) -> float:
    """Y(a, D) = sum over q1 = a q2 (mod D), (q1 q2, D) = 1 of h1(q1) h2(q2)."""
    a, D = int(a), int(D)
    if math.gcd(a, D) != 1:
        raise PreconditionError("need (a, D) = 1")
    f1, f2 = h_weight(h1, J1), h_weight(h2, J2)
    s1 = [q for q in _support_of(h1, J1) if math.gcd(q, D) == 1]
    s2 = [q for q in _support_of(h2, J2) if math.gcd(q, D) == 1]
    terms = [f1(q1) * f2(q2) for q1 in s1 for q2 in s2 if (q1 - a * q2) % D == 0]
    return math.fsum(terms)


def y_interval(J, h, D) -> float:
    """Y(J, h; D) = sum over q in J, (q, D) = 1 of h(q)."""
    f = h_weight(h, J)
    return math.fsum(f(q) for q in _support_of(h, J) if math.gcd(q, int(D)) == 1)


def y_main(D, J1, J2, h1, h2) -> float:
    """(1/phi(D)) Y(J1, h1; D) Y(J2, h2; D)."""
    from .arith import euler_phi

    return y_interval(J1, h1, D) * y_interval(J2, h2, D) / euler_phi(int(D))


def y_f_sum(b, D, J1, J2) -> float:
    """Y_f(b, D): p1^2 in J1, p2^2 in J2, p1 = b p2 (mod D), (p1 p2, D) = 1."""
    b, D = int(b), int(D)
    f1, f2 = h_weight("f", J1), h_weight("f", J2)
    s1 = [q for q in _support_of("f", J1) if math.gcd(q, D) == 1]
    s2 = [q for q in _support_of("f", J2) if math.gcd(q, D) == 1]
    terms = [
        f1(q1) * f2(q2)
        for q1 in s1
        for q2 in s2
        if (math.isqrt(q1) - b * math.isqrt(q2)) % D == 0
    ]
    return math.fsum(terms)


@dataclass
class CongruenceSums:
    Z: float
    Ztilde: float
    Y: float
    parameters: dict = field(default_factory=dict)


def congruence_sums(a, D, U1, U2, J1, J2, h1="g", h2="g", beta=None, exclusion=None) -> CongruenceSums:
    Z = z_sum(a, D, U1, U2, beta, "plain", exclusion)
    Zt = z_sum(a, D, U1, U2, None, "tilde", exclusion)
    Y = y_sum(a, D, J1, J2, h1, h2)
    return CongruenceSums(Z, Zt, Y, {"a": a, "D": D, "J1": J1, "J2": J2, "h1": h1, "h2": h2})


# ----------------------------------------------------------------------------
# Reciprocity chain, spinor symbol, lambda(n)


@dataclass
class ReciprocityRecord:
    lhs: int
    rhs_product: int
    k: int
    d1: int
    Delta: int


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values()) if n > 1 else True


def solve_k(z1: GaussInt, z2: GaussInt, D: int) -> int:
    """k mod D with k z2 = z1 (mod D); needs gcd(x2, y2) = 1."""
    g, A, B = _ext_gcd(z2.re, z2.im)
    if abs(g) != 1:
        raise PreconditionError("z2 must be primitive")
    A, B = A * g, B * g
    return (A * z1.re + B * z1.im) % D


def reciprocity_chain(z1: GaussInt, z2: GaussInt, e: int, t: int) -> ReciprocityRecord:
    """Jacobi(k, d1) and (y1/x1)(y2/x2) <d1 e, x1 x2> <x1, x2> for Delta = d1 e t."""
    z1, z2 = GaussInt.of(z1), GaussInt.of(z2)
    for z in (z1, z2):
        if not (z.re > 0 and z.re % 2 == 1 and z.im % 2 == 0 and math.gcd(z.re, z.im) == 1):
            raise PreconditionError(f"{z} must be primitive, = 1 mod 2, with Re > 0")
    D = delta(z1, z2)
    if D == 0:
        raise DomainError("Delta(z1, z2) = 0")
    e, t = int(e), int(t)
    if e < 1 or e % 2 == 0 or t < 1 or t & (t - 1):
        raise PreconditionError("e must be odd positive and t a power of two")
    if D <= 0 or D % (e * t):
        raise PreconditionError(f"Delta={D} is not a positive multiple of e t = {e * t}")
    d1 = D // (e * t)
    if d1 % 2 == 0 or not _squarefree(d1):
        raise PreconditionError(f"d1={d1} must be odd and squarefree")
    k = solve_k(z1, z2, D)
    if math.gcd(k, D) != 1:
        raise PreconditionError("k is not coprime to Delta")
    x1, y1, x2, y2 = z1.re, z1.im, z2.re, z2.im
    lhs = jacobi(k, d1)
    rhs = jacobi(y1, x1) * jacobi(y2, x2) * bracket(d1 * e, x1 * x2) * bracket(x1, x2)
    return ReciprocityRecord(lhs, rhs, k, d1, D)


def predicted_eta(z1: GaussInt, z2: GaussInt, e: int, t: int) -> int:
    """(k/e)(t/x1 x2)(-1/x1): the class constant relating the two sides."""
    rec = reciprocity_chain(z1, z2, e, t)
    x1, x2 = z1.re, z2.re
    return jacobi(rec.k, e) * jacobi(t, x1 * x2) * jacobi(-1, x1)


_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


def spinor_exponent(z: GaussInt) -> int:
    """m in 0..3 with [z] = i^m."""
    z = GaussInt.of(z)
    x, y = z.re, z.im
    if x <= 0 or x % 2 == 0 or math.gcd(x, y) != 1:
        raise PreconditionError(f"spinor needs odd positive Re and gcd(x, y) = 1, got {z}")
    m = ((x - 1) // 2) % 4
    if jacobi(y, x) == -1:
        m = (m + 2) % 4
    return m


def spinor(z: GaussInt) -> complex:
    """[z] = i^((x-1)/2) (y/x)."""
    return _I_POW[spinor_exponent(z)]


def lambda_coeff(n: int, k: int = 0) -> complex:
    """sum over primitive z with N(z) = n, Re z odd and positive, of (z/|z|)^k [z]."""
    n = int(n)
    if n < 1:
        raise DomainError("n must be >= 1")
    total = 0j
    r = math.sqrt(n)
    for x in range(1, math.isqrt(n) + 1, 2):
        y2 = n - x * x
        y = math.isqrt(y2)
        if y * y != y2:
            continue
        for yy in {y, -y}:
            if math.gcd(x, yy) != 1:
                continue
            z = GaussInt(x, yy)
            total += complex(x / r, yy / r) ** k * spinor(z)
    return total


def gauss_phi(q: int) -> int:
    """Number of units of Z[i]/qZ[i]."""
    q = int(q)
    if q < 1:
        raise DomainError("q must be >= 1")
    out = 1
    for p, e in (factorize(q).items() if q > 1 else []):
        if p == 2:
            out *= 2 ** (2 * e - 1)
        elif p % 4 == 1:
            out *= (p - 1) ** 2 * p ** (2 * (e - 1))
        else:
            out *= (p * p - 1) * p ** (2 * (e - 1))
    return out


# ----------------------------------------------------------------------------
# Mitsui sector counts


def _prime_flags(limit: int) -> np.ndarray:
    flags = np.zeros(limit + 1, dtype=bool)
    flags[primes_up_to(max(limit, 2)).primes] = True
    return flags


def mitsui_count(x: float, q: int, alpha: GaussInt, theta: float, threads: int | None = None) -> int:
    """Gaussian primes mu = alpha (mod q) with N(mu) <= x and 0 <= arg mu <= theta."""
    alpha = GaussInt.of(alpha)
    q = int(q)
    if q < 1:
        raise DomainError("q must be >= 1")
    if math.gcd(alpha.norm(), q) != 1:
        raise PreconditionError(f"alpha={alpha} is not coprime to q={q}")
    if not 0 <= theta <= TWO_PI:
        raise DomainError("theta must lie in [0, 2 pi]")
    X = math.floor(x)
    R = math.isqrt(X)
    flags = _prime_flags(X)
    b = np.arange(-R, R + 1, dtype=np.int64)

    def row(a):
        n = a * a + b * b
        ok = n <= X
        if a == 0:
            prime = np.zeros(b.size, dtype=bool)
            ab = np.abs(b)
            prime[ok] = flags[ab[ok]] & (ab[ok] % 4 == 3)
        else:
            prime = np.zeros(b.size, dtype=bool)
            off_axis = ok & (b != 0)
            prime[off_axis] = flags[n[off_axis]]
            on_axis = ok & (b == 0)
            if np.any(on_axis):
                prime[on_axis] = bool(flags[abs(a)]) and abs(a) % 4 == 3
        cong = ((a - alpha.re) % q == 0) & ((b - alpha.im) % q == 0)
        t = np.mod(np.arctan2(b, a), TWO_PI)
        return int(np.count_nonzero(prime & cong & (t <= theta)))

    counts = ordered_map(row, range(-R, R + 1), threads)
    return sum(counts)


def mitsui_main(x: float, q: int, theta: float) -> float:
    """(4 / phi_{Q(i)}(q)) (theta / 2 pi) Li(x)."""
    return 4.0 / gauss_phi(q) * (theta / TWO_PI) * li(x)


def sample_reciprocity_class(e: int, t: int, rng) -> tuple[GaussInt, GaussInt]:
    """Residues w1, w2 mod 8et fixing a class on which the reciprocity ratio is constant.

    Both are = 1 (mod 2), Im(conj(w1) w2) = e t n with n odd, and the induced
    k mod e is a unit. Since Delta is even for such pairs, t >= 2.
    """
    if e < 1 or e % 2 == 0 or t < 2 or t & (t - 1):
        raise PreconditionError("e must be odd positive and t a power of two >= 2")
    M = 8 * e * t
    for _ in range(100000):
        w1 = GaussInt(rng.randrange(1, M, 2), rng.randrange(0, M, 2))
        w2 = GaussInt(rng.randrange(1, M, 2), rng.randrange(0, M, 2))
        if math.gcd(w2.re, w2.im) != 1:
            continue
        im = delta(w1, w2)
        if im % (e * t) or (im // (e * t)) % 2 == 0:
            continue
        if e > 1 and math.gcd(solve_k(w1, w2, e), e) != 1:
            continue
        return w1, w2
    raise PreconditionError(f"no admissible class found for e={e}, t={t}")


def sample_class_member(w1: GaussInt, w2: GaussInt, e: int, t: int, rng, spread: int = 20):
    """A random pair (z1, z2) = (w1, w2) mod 8et accepted by reciprocity_chain, or None."""
    M = 8 * e * t
    z1 = w1 + GaussInt(M * rng.randint(0, spread), M * rng.randint(-spread, spread))
    z2 = w2 + GaussInt(M * rng.randint(0, spread), M * rng.randint(-spread, spread))
    try:
        return z1, z2, reciprocity_chain(z1, z2, e, t)
    except (PreconditionError, DomainError):
        return None


@dataclass
class IntermediateRecord:
    s_u1: int
    rhs_u1: int
    s_u2: int
    rhs_u2: int

    @property
    def holds(self) -> bool:
        return self.s_u1 == self.rhs_u1 and self.s_u2 == self.rhs_u2


def intermediate_identities(z1: GaussInt, z2: GaussInt) -> IntermediateRecord:
    """The two Jacobi identities implied by s t = u1 y2 - u2 y1.

    Here t is the 2-part of Delta, r = (x1, Delta), u_j = x_j / r and
    s = Delta / (r t).
    """
    z1, z2 = GaussInt.of(z1), GaussInt.of(z2)
    for z in (z1, z2):
        if not (z.re > 0 and z.re % 2 == 1 and z.im % 2 == 0 and math.gcd(z.re, z.im) == 1):
            raise PreconditionError(f"{z} must be primitive, = 1 mod 2, with Re > 0")
    D = delta(z1, z2)
    if D <= 0:
        raise PreconditionError("need Delta > 0")
    t = D & -D
    r = math.gcd(z1.re, D)
    s = D // (r * t)
    u1, u2 = z1.re // r, z2.re // r
    y1, y2 = z1.im, z2.im
    return IntermediateRecord(
        jacobi(s, u1), jacobi(-t * u2 * y1, u1), jacobi(s, u2), jacobi(t * u1 * y2, u2)
    )


# ----------------------------------------------------------------------------
# Randomised invariant suite


def _random_flat(rng, bound):
    while True:
        z = GaussInt(rng.randrange(1, bound, 2), 2 * rng.randint(-bound // 2, bound // 2))
        if math.gcd(z.re, z.im) == 1:
            return z


def verify_suite(
    rng,
    census: int = 1000,
    roundtrip: int = 10000,
    identities: int = 10000,
    classes: int = 20,
    members: int = 50,
    delta_trials: int = 10000,
    countw_trials: int = 1000,
) -> dict:
    """Run the randomised invariants; returns failure counts and empirical constants."""
    from .arith import divisors

    report = {}

    fails = 0
    for _ in range(delta_trials):
        z1 = GaussInt(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        z2 = GaussInt(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        ok = (z1 * z2).norm() == z1.norm() * z2.norm()
        ok &= delta(z1, z2) == -delta(z2, z1) and delta(z1, z1) == 0
        f1, f2 = _random_flat(rng, 10**6), _random_flat(rng, 10**6)
        ok &= delta(f1, f2) % 2 == 0
        fails += not ok
    report["delta_trials"] = delta_trials
    report["delta_failures"] = fails

    fails = 0
    done = 0
    while done < census:
        z = GaussInt(rng.randint(-7000, 7000), rng.randint(-7000, 7000))
        if not z or math.gcd(z.re, z.im) != 1 or z.norm() % 2 == 0:
            continue
        done += 1
        for m in divisors(z.norm()):
            divs = [lam for lam in elements_of_norm(m) if lam.divides(z)]
            canon = [lam for lam in divs if lam.re > 0 and lam.re % 2 == 1]
            if len(divs) != 4 or canon != [canonical_norm_divisor(z, m)]:
                fails += 1
    report["census_trials"] = census
    report["census_failures"] = fails

    fails = 0
    done = 0
    while done < roundtrip:
        z1 = GaussInt(rng.randint(-10**5, 10**5), rng.randint(-10**5, 10**5))
        z2 = GaussInt(rng.randint(-10**5, 10**5), rng.randint(-10**5, 10**5))
        if delta(z1, z2) == 0:
            continue
        done += 1
        w = GaussInt(rng.randint(-10**5, 10**5), rng.randint(-10**5, 10**5))
        q1 = w.re * z1.re + w.im * z1.im
        q2 = w.re * z2.re + w.im * z2.im
        fails += recover_w(q1, q2, z1, z2) != w
    report["roundtrip_trials"] = roundtrip
    report["roundtrip_failures"] = fails

    fails = 0
    done = 0
    while done < identities:
        z1, z2 = _random_flat(rng, 4000), _random_flat(rng, 4000)
        if delta(z1, z2) <= 0:
            continue
        done += 1
        fails += not intermediate_identities(z1, z2).holds
    report["identity_trials"] = identities
    report["identity_failures"] = fails

    fails = 0
    etas = []
    for c in range(classes):
        e = (1, 3, 5, 7, 15, 21)[c % 6]
        t = (2, 4, 8, 16)[(c // 6) % 4]
        w1, w2 = sample_reciprocity_class(e, t, rng)
        seen = set()
        got = 0
        attempts = 0
        while got < members:
            attempts += 1
            if attempts > 200 * members:
                raise PreconditionError(f"class (e={e}, t={t}) yields too few admissible members")
            r = sample_class_member(w1, w2, e, t, rng)
            if r is None:
                continue
            got += 1
            seen.add(r[2].lhs * r[2].rhs_product)
        fails += len(seen) != 1
        etas.append(min(seen))
    report["classes"] = classes
    report["class_members"] = members
    report["class_failures"] = fails
    report["class_eta_plus"] = sum(1 for v in etas if v == 1)

    fails = 0
    worst = 0.0
    for _ in range(countw_trials):
        z = GaussInt(rng.randint(-30, 30), rng.randint(-30, 30))
        if not z or math.gcd(z.re, z.im) != 1:
            continue
        q = rng.randint(-500, 500)
        M = rng.uniform(0, 10**5)
        c = count_w(z, q, M)
        fails += c > count_w_bound(z, M)
        scale = math.sqrt(M / z.norm())
        if scale > 0:
            worst = max(worst, (c - 2) / scale)
    report["countw_trials"] = countw_trials
    report["countw_failures"] = fails
    report["countw_empirical_C"] = worst

    report["passed"] = all(v == 0 for k, v in report.items() if k.endswith("_failures"))
    return report
