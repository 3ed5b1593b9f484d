"""Dirichlet characters with exact values, and equidistribution statistics.

A character mod q is stored as one exponent per cyclic factor of (Z/q)^*
(odd prime powers contribute one factor, 2^e contributes the factors
generated by -1 and 5). Its value at n is e(r/L) with L the exponent of the
group and r an integer, so conductors and orthogonality can be checked
exactly; complex numbers only appear when sums are formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .arith import factorize, tau
from .errors import CapacityError, DomainError
from .parallel import ordered_map
from .primes import von_mangoldt_table, primes_up_to
from .sequences import WeightedSequence

MAX_MODULUS = 10**6
MAX_PAIR_WORK = 4 * 10**9


def _primitive_root(p: int, e: int) -> int:
    """Smallest primitive root mod p that is also one mod p^2 (hence mod every p^e)."""
    qs = list(factorize(p - 1)) if p > 2 else []
    g = 2
    while True:
        if all(pow(g, (p - 1) // r, p) != 1 for r in qs):
            if e == 1 or pow(g, p - 1, p * p) != 1:
                return g
        g += 1


@dataclass(frozen=True)
class _Component:
    prime: int
    exp: int
    modulus: int  # the prime power this factor lives on
    generator: int
    order: int
    dlog: np.ndarray = field(repr=False)  # dlog[n mod modulus], -1 if not a unit


def _odd_component(p, e):
    pe = p**e
    g = _primitive_root(p, e)
    order = pe // p * (p - 1)
    dlog = np.full(pe, -1, dtype=np.int64)
    v = 1
    for k in range(order):
        dlog[v] = k
        v = v * g % pe
    return [_Component(p, e, pe, g, order, dlog)]


def _two_components(e):
    m = 2**e
    if e == 1:
        return []
    sign = np.full(m, -1, dtype=np.int64)
    sign[1::4] = 0
    sign[3::4] = 1
    comps = [_Component(2, e, m, m - 1, 2, sign)]
    if e >= 3:
        order = 2 ** (e - 2)
        five = np.full(m, -1, dtype=np.int64)
        v = 1
        for k in range(order):
            five[v] = k
            five[m - v] = k
            v = v * 5 % m
        comps.append(_Component(2, e, m, 5, order, five))
    return comps


class CharacterGroup:
    """The group of Dirichlet characters mod q together with value tables."""

    def __init__(self, q: int):
        q = int(q)
        if q < 1:
            raise DomainError("modulus must be >= 1")
        if q > MAX_MODULUS:
            raise CapacityError(f"modulus {q} exceeds {MAX_MODULUS}")
        self.q = q
        self.factors = factorize(q) if q > 1 else {}
        comps = []
        for p, e in self.factors.items():
            comps += _two_components(e) if p == 2 else _odd_component(p, e)
        self.components = comps
        self.orders = tuple(c.order for c in comps)
        self.exponent = math.lcm(*self.orders) if comps else 1
        self.phi = math.prod(self.orders) if comps else 1

    @cached_property
    def logs(self) -> np.ndarray:
        """(q, ncomp) discrete logs of every residue, -1 rows for non-units."""
        r = np.arange(self.q)
        if not self.components:
            return np.zeros((self.q, 0), dtype=np.int64)
        cols = [c.dlog[r % c.modulus] for c in self.components]
        return np.stack(cols, axis=1)

    @cached_property
    def units(self) -> np.ndarray:
        return np.flatnonzero(np.gcd(np.arange(self.q), self.q) == 1)

    @cached_property
    def exponent_vectors(self) -> np.ndarray:
        if not self.components:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(o) for o in self.orders], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    @cached_property
    def value_exponents(self) -> np.ndarray:
        """(phi, q) array: chi_i(n) = e(r/L); r = -1 where chi_i(n) = 0."""
        L = self.exponent
        K = self.exponent_vectors
        scale = np.array([L // o for o in self.orders], dtype=np.int64)
        u = self.units
        r = np.full((K.shape[0], self.q), -1, dtype=np.int64)
        r[:, u] = ((K * scale) @ self.logs[u].T) % L
        return r

    @cached_property
    def conductors(self) -> np.ndarray:
        return np.array([_conductor(self, k) for k in self.exponent_vectors], dtype=np.int64)

    @cached_property
    def value_matrix(self) -> np.ndarray:
        """(phi, q) complex values."""
        return exponent_to_complex(self.value_exponents, self.exponent)

    def characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(self, tuple(int(v) for v in k)) for k in self.exponent_vectors]

    def index_of(self, exponents) -> int:
        idx = 0
        for k, o in zip(exponents, self.orders):
            idx = idx * o + int(k) % o
        return idx


def exponent_to_complex(r: np.ndarray, L: int) -> np.ndarray:
    """Map exponents r (or -1 for zero) to e(r/L), exact on quarter turns."""
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    for k in range(L):
        if (4 * k) % L == 0:
            roots[k] = (1, 1j, -1, -1j)[(4 * k) // L]
    out = np.where(r >= 0, roots[np.clip(r, 0, None)], 0)
    return out.astype(np.complex128)


@lru_cache(maxsize=4096)
def character_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def _v(p, k):
    v = 0
    while k and k % p == 0:
        k //= p
        v += 1
    return v


def _conductor(group: CharacterGroup, k) -> int:
    cond = 1
    i = 0
    for p, e in group.factors.items():
        if p == 2:
            if e == 1:
                continue
            a = int(k[i])
            b = int(k[i + 1]) if e >= 3 else 0
            i += 2 if e >= 3 else 1
            if a == 0 and b == 0:
                f = 0
            elif b == 0:
                f = 2
            else:
                f = max(2, e - _v(2, b))
        else:
            kk = int(k[i])
            i += 1
            f = 0 if kk == 0 else max(1, e - _v(p, kk))
        cond *= p**f
    return cond


@dataclass(frozen=True)
class DirichletCharacter:
    group: CharacterGroup = field(repr=False, compare=False)
    exponents: tuple

    @property
    def modulus(self) -> int:
        return self.group.q

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    @cached_property
    def index(self) -> int:
        return self.group.index_of(self.exponents)

    def exponent_at(self, n: int) -> int | None:
        """r with chi(n) = e(r/L), or None when chi(n) = 0."""
        r = int(self.group.value_exponents[self.index, int(n) % self.modulus])
        return None if r < 0 else r

    def value_exact(self, n: int) -> Fraction | None:
        """chi(n) as a fraction of a full turn in [0, 1), or None when chi(n) = 0."""
        r = self.exponent_at(n)
        return None if r is None else Fraction(r, self.group.exponent)

    def __call__(self, n: int) -> complex:
        return complex(self.group.value_matrix[self.index, int(n) % self.modulus])

    def values(self) -> np.ndarray:
        return self.group.value_matrix[self.index]

    @property
    def order(self) -> int:
        if not self.exponents:
            return 1
        return math.lcm(*[o // math.gcd(o, k) for k, o in zip(self.exponents, self.group.orders)])

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    @cached_property
    def conductor_value(self) -> int:
        return _conductor(self.group, self.exponents)

    @property
    def is_primitive(self) -> bool:
        return self.conductor_value == self.modulus

    def primitive_core(self) -> "DirichletCharacter":
        """The primitive character mod the conductor that induces this one."""
        d = self.conductor_value
        target = character_group(d)
        new = []
        i = 0
        tf = target.factors
        for p, e in self.group.factors.items():
            f = tf.get(p, 0)
            if p == 2:
                if e == 1:
                    continue
                a = self.exponents[i]
                b = self.exponents[i + 1] if e >= 3 else 0
                i += 2 if e >= 3 else 1
                if f >= 2:
                    new.append(a)
                if f >= 3:
                    new.append(b * 2 ** (f - 2) // 2 ** (e - 2))
            else:
                k = self.exponents[i]
                i += 1
                if f >= 1:
                    m_e = p ** (e - 1) * (p - 1)
                    m_f = p ** (f - 1) * (p - 1)
                    # same generator mod p^e and p^f, so rescale the exponent
                    new.append(k * m_f // m_e)
        return DirichletCharacter(target, tuple(new))


def characters_mod(q: int) -> list[DirichletCharacter]:
    return character_group(q).characters()


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor_value


def principal_character(q: int) -> DirichletCharacter:
    g = character_group(q)
    return DirichletCharacter(g, tuple(0 for _ in g.orders))


def _residue_sums(c: WeightedSequence, q: int, conj: bool = False) -> np.ndarray:
    w = np.conj(c.w) if conj else c.w
    out = np.zeros(q, dtype=np.complex128)
    if len(c):
        r = c.n % q
        out += np.bincount(r, weights=np.real(w), minlength=q)
        if np.iscomplexobj(w):
            out += 1j * np.bincount(r, weights=np.imag(w), minlength=q)
    return out


def char_sum(c: WeightedSequence, chi: DirichletCharacter) -> complex:
    """sum_n c(n) chi(n)."""
    res = _residue_sums(c, chi.modulus)
    return complex(np.dot(chi.values(), res))


def _all_char_sums(c: WeightedSequence, q: int, conj_weights: bool = False) -> np.ndarray:
    """A(chi) = sum c(n) chi(n) for every chi mod q (rows of the value matrix)."""
    res = _residue_sums(c, q, conj=conj_weights)
    return character_group(q).value_matrix @ res


def prime_weight_sequence(x: int, weights: str = "lambda") -> WeightedSequence:
    """Lambda(n) on prime powers n <= x, or log p on primes only ("theta")."""
    x = int(x)
    if weights == "lambda":
        n, w = von_mangoldt_table(x)
    elif weights == "theta":
        n = primes_up_to(max(x, 2)).primes
        n = n[n <= x]
        w = np.log(n.astype(np.float64))
    else:
        raise DomainError("weights must be 'lambda' or 'theta'")
    return WeightedSequence(n, w)


# ----------------------------------------------------------------------------
# Barban-Davenport-Halberstam type statistic


@dataclass
class BDHRow:
    q: int
    classes: int
    partial: float


@dataclass
class BDHResult:
    rows: list
    aggregate: float
    Q: int
    main: str
    x: float | None


def _class_sums(c1: WeightedSequence, c2: WeightedSequence, q: int) -> np.ndarray:
    """Array S[a] = sum over m = a n (mod q), (mn, q) = 1 of c1(m) c2(n)."""
    m, w1 = c1.n, c1.w
    n, w2 = c2.n, c2.w
    k1 = np.gcd(m, q) == 1
    k2 = np.gcd(n, q) == 1
    m, w1, n, w2 = m[k1], w1[k1], n[k2], w2[k2]
    if q == 1:
        return np.array([np.sum(w1) * np.sum(w2)], dtype=np.complex128)
    inv = np.array([pow(int(v), -1, q) for v in n % q], dtype=np.int64)
    a = (np.multiply.outer(m % q, inv) % q).ravel()
    prod = np.multiply.outer(w1, w2).ravel()
    out = np.bincount(a, weights=np.real(prod), minlength=q).astype(np.complex128)
    if np.iscomplexobj(prod):
        out += 1j * np.bincount(a, weights=np.imag(prod), minlength=q)
    return out


def _units_mask(q: int) -> np.ndarray:
    if q == 1:
        return np.array([True])
    return np.gcd(np.arange(q), q) == 1


def bdh_statistic(
    c1: WeightedSequence,
    c2: WeightedSequence,
    Q: int,
    main: str = "exact_phi",
    x: float | None = None,
    threads: int | None = None,
) -> BDHResult:
    """sum_{q <= Q} sum*_a |S(x; a, q) - main(q)|^2.

    Args:
        main: "exact_phi" uses the restricted mean (1/phi(q)) sum over
            (mn, q) = 1 of c1(m) c2(n); "x_squared" uses x^2/phi(q).
        x: required for "x_squared"; defaults to the larger support maximum.
    """
    Q = int(Q)
    if Q < 1:
        raise DomainError("Q must be >= 1")
    if main not in ("exact_phi", "x_squared"):
        raise DomainError("main must be 'exact_phi' or 'x_squared'")
    work = Q * max(len(c1), 1) * max(len(c2), 1)
    if work > MAX_PAIR_WORK:
        raise CapacityError(f"pair scan needs {work:.3g} operations (budget {MAX_PAIR_WORK:.3g})")
    if main == "x_squared" and x is None:
        x = float(max(int(c1.n.max()) if len(c1) else 0, int(c2.n.max()) if len(c2) else 0))

    def one(q):
        S = _class_sums(c1, c2, q)
        mask = _units_mask(q)
        ph = int(mask.sum())
        M = S[mask].sum() / ph if main == "exact_phi" else x * x / ph
        d = S[mask] - M
        return BDHRow(q, ph, float(np.sum(np.abs(d) ** 2)))

    rows = ordered_map(one, range(1, Q + 1), threads)
    total = math.fsum(r.partial for r in rows)
    return BDHResult(rows, total, Q, main, x)


# ----------------------------------------------------------------------------
# Bilinear statistic with small conductors removed


@dataclass
class EquidistStatistic:
    errors: dict  # q -> (units a, S(a,q), M(a,q), E(a,q)) arrays
    aggregate: float
    Q: int
    Q0: int
    N1: int
    N2: int
    gamma_tau_norm: float
    delta_tau_norm: float

    @property
    def bound_shape(self) -> float:
        """(Q + N1 N2 / Q0) log Q ||gamma tau||^2 ||delta tau||^2."""
        return (self.Q + self.N1 * self.N2 / self.Q0) * math.log(self.Q) * self.gamma_tau_norm * self.delta_tau_norm

    @property
    def ratio(self) -> float:
        b = self.bound_shape
        return self.aggregate / b if b > 0 else 0.0


def _main_term(gamma, delta, q, Q0):
    g = character_group(q)
    keep = g.conductors <= Q0
    V = g.value_matrix[keep]
    G = V @ _residue_sums(gamma, q)
    # sum_n delta(n) conj(chi(n)) = conj(D(chi)) with D(chi) = sum conj(delta(n)) chi(n)
    Dbar = np.conj(V) @ _residue_sums(delta, q)
    units = g.units
    # M(a) = (1/phi) sum_chi G(chi) Dbar(chi) conj(chi(a))
    return units, (np.conj(V[:, units]).T @ (G * Dbar)) / g.phi


def theorem2_statistic(
    gamma: WeightedSequence,
    delta: WeightedSequence,
    Q: int,
    Q0: int,
    threads: int | None = None,
) -> EquidistStatistic:
    """Per-class errors E(a, q) = S(a, q) - M(a, q) and their square sum over q <= Q."""
    Q, Q0 = int(Q), int(Q0)
    if Q < 1 or Q0 < 1:
        raise DomainError("Q and Q0 must be >= 1")
    work = Q * max(len(gamma), 1) * max(len(delta), 1)
    if work > MAX_PAIR_WORK:
        raise CapacityError(f"pair scan needs {work:.3g} operations (budget {MAX_PAIR_WORK:.3g})")

    def one(q):
        S = _class_sums(gamma, delta, q)
        units, M = _main_term(gamma, delta, q, Q0)
        Su = S[units]
        return q, units, Su, M, Su - M

    out = ordered_map(one, range(1, Q + 1), threads)
    errors = {q: (u, s, m, e) for q, u, s, m, e in out}
    agg = math.fsum(float(np.sum(np.abs(e) ** 2)) for *_, e in out)
    N1 = int(gamma.n.max()) if len(gamma) else 0
    N2 = int(delta.n.max()) if len(delta) else 0
    return EquidistStatistic(
        errors, agg, Q, Q0, N1, N2, _tau_norm(gamma), _tau_norm(delta)
    )


def bilinear_parseval(gamma: WeightedSequence, delta: WeightedSequence, Q: int, Q0: int) -> float:
    """The same aggregate via sum_q (1/phi(q)) sum_{Q(chi) > Q0} |G(chi)|^2 |D(chi)|^2."""
    total = []
    for q in range(1, int(Q) + 1):
        g = character_group(q)
        keep = g.conductors > Q0
        if not np.any(keep):
            continue
        G = _all_char_sums(gamma, q)[keep]
        D = _all_char_sums(delta, q, conj_weights=True)[keep]
        total.append(float(np.sum(np.abs(G) ** 2 * np.abs(D) ** 2)) / g.phi)
    return math.fsum(total)


def _tau_norm(c: WeightedSequence) -> float:
    return math.fsum((abs(w) ** 2 * tau(int(n)) ** 2) for n, w in zip(c.n, c.w.tolist()))


# ----------------------------------------------------------------------------
# Large sieve


def large_sieve_lhs(a: WeightedSequence, H: int, h0: int) -> float:
    """sum_{h <= H} (1/phi(h)) sum_{chi mod h, Q(chi) > h0} |A(chi)|^2."""
    H, h0 = int(H), int(h0)
    if H < 1 or h0 < 1:
        raise DomainError("H and h0 must be >= 1")
    parts = []
    for h in range(h0 + 1, H + 1):
        g = character_group(h)
        keep = g.conductors > h0
        if not np.any(keep):
            continue
        A = _all_char_sums(a, h)[keep]
        parts.append(float(np.sum(np.abs(A) ** 2)) / g.phi)
    return math.fsum(parts)


@dataclass
class LargeSieveCheck:
    lhs: float
    bound: float
    N: int
    Q: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound

    @property
    def ratio(self) -> float:
        return self.lhs / self.bound if self.bound > 0 else 0.0


def classical_large_sieve_check(a: WeightedSequence, Q: int) -> LargeSieveCheck:
    """sum_{q <= Q} (q/phi(q)) sum*_{chi primitive mod q} |A(chi)|^2 against (Q^2 + N - 1)||a||^2."""
    Q = int(Q)
    if Q < 1:
        raise DomainError("Q must be >= 1")
    N = int(a.n.max() - a.n.min() + 1) if len(a) else 0
    parts = []
    for q in range(1, Q + 1):
        g = character_group(q)
        keep = g.conductors == q
        if not np.any(keep):
            continue
        A = _all_char_sums(a, q)[keep]
        parts.append(q * float(np.sum(np.abs(A) ** 2)) / g.phi)
    lhs = math.fsum(parts)
    bound = (Q * Q + N - 1) * a.norm2() if len(a) else 0.0
    return LargeSieveCheck(lhs, bound, N, Q)


def sw_defect(c: WeightedSequence, kappa: float, x: float) -> float:
    """max over q < (log x)^kappa and non-principal chi mod q of |sum c chi| / (x^(1/2) ||c|| (log x)^(-kappa))."""
    if not kappa > 0:
        raise DomainError("kappa must be positive")
    L = math.log(x)
    qmax = L**kappa
    norm = math.sqrt(c.norm2())
    if norm == 0:
        return 0.0
    scale = math.sqrt(x) * norm * L ** (-kappa)
    best = 0.0
    q = 3
    while q < qmax:
        g = character_group(q)
        A = _all_char_sums(c, q)
        principal = np.all(g.exponent_vectors == 0, axis=1)
        vals = np.abs(A[~principal])
        if vals.size:
            best = max(best, float(vals.max()) / scale)
        q += 1
    return best
