"""The constants nu and J, the arc measure mu(I) and the predicted prime count."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .primes import primes_up_to


@dataclass(frozen=True)
class ConstantValue:
    value: float
    error_bound: float
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("constant value must be finite")
        if not self.error_bound >= 0:
            raise ValueError("error bound must be non-negative")


def j_integrand(t):
    """sqrt(1 - t^4); accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    return np.sqrt(np.clip(1.0 - t**4, 0.0, None))


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl_rule(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _gl(f, a, b, n):
    x, w = _gl_rule(n)
    half = 0.5 * (b - a)
    return half * float(np.dot(w, f(half * x + 0.5 * (a + b))))


def adaptive_gauss_legendre(f, a, b, tolerance, order=10, max_depth=60):
    """Integrate f over [a, b] by bisection until paired rules agree.

    Each panel is accepted once the ``order``-point and ``2*order``-point
    Gauss-Legendre values agree to within its share of ``tolerance``. The
    returned error estimate is the sum of those per-panel discrepancies.

    Returns:
        (value, error_estimate, panels)
    """
    total, err, panels = 0.0, 0.0, 0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        coarse = _gl(f, lo, hi, order)
        fine = _gl(f, lo, hi, 2 * order)
        local_tol = tolerance * (hi - lo) / (b - a)
        diff = abs(fine - coarse)
        if diff <= local_tol or depth >= max_depth:
            total += fine
            err += diff
            panels += 1
        else:
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
    return total, err, panels


def compute_J(tolerance: float = 1e-12) -> ConstantValue:
    """J = int_0^1 sqrt(1 - t^4) dt."""
    if not tolerance > 0:
        raise DomainError("tolerance must be positive")
    # Paired-rule discrepancies overstate the error of the finer rule, so
    # asking for half the budget keeps the reported bound under tolerance.
    value, err, panels = adaptive_gauss_legendre(j_integrand, 0.0, 1.0, 0.5 * tolerance)
    err += 4 * math.ulp(value)
    return ConstantValue(value, err, {"tolerance": tolerance, "panels": panels})


def nu_raw_factor(p: int) -> float:
    """1 - chi_4(p)/(p - 1), the unaccelerated Euler factor."""
    c = 0 if p % 2 == 0 else (1 if p % 4 == 1 else -1)
    return 1.0 - c / (p - 1)


def nu_factor(p: int) -> float:
    """Euler factor after dividing out the local factor of L(1, chi_4)."""
    if p % 2 == 0:
        return 1.0
    if p % 4 == 1:
        return 1.0 - 1.0 / (p - 1) ** 2
    return 1.0 + 1.0 / (p * p - 1)


def compute_nu(prime_limit: int = 10**7) -> ConstantValue:
    """nu = (4/pi) prod_p (1 - chi_4(p)/(p-1)) / (1 - chi_4(p)/p), truncated at p <= P.

    The bound uses |log factor(p)| <= 1/(p(p-2)) for odd p, whose sum over
    all integers n > P telescopes to at most 1/(P - 1).
    """
    P = int(prime_limit)
    if P < 1000:
        raise PreconditionError("compute_nu needs prime_limit >= 1000")
    ps = primes_up_to(P).primes[1:].astype(np.float64)
    split = (ps.astype(np.int64) % 4) == 1
    logs = np.where(split, np.log1p(-1.0 / (ps - 1.0) ** 2), np.log1p(1.0 / (ps * ps - 1.0)))
    log_nu = math.log(4.0 / math.pi) + math.fsum(logs)
    value = math.exp(log_nu)
    tail = 1.0 / (P - 1)
    rounding = 4e-16 * (len(ps) + 10)
    bound = value * math.expm1(tail + rounding)
    return ConstantValue(value, bound, {"prime_limit": P, "primes_used": int(len(ps)) + 1})


def mu_interval(x: float, X: float, eta: float) -> float:
    """mu(I) = int_I sqrt(x - t^2) dt with I = (X, X(1+eta)]."""
    x, X, eta = float(x), float(X), float(eta)
    if not (X > 0 and eta >= 0):
        raise DomainError("need X > 0 and eta >= 0")
    return arc_measure(x, X, X * (1.0 + eta))


def arc_measure(x: float, lo: float, hi: float) -> float:
    """int_lo^hi sqrt(x - t^2) dt for 0 <= lo <= hi <= sqrt(x)."""
    r = math.sqrt(x)
    if hi > r * (1 + 4e-16):
        raise DomainError(f"interval end {hi} exceeds sqrt(x) = {r}")
    if lo < 0 or hi < lo:
        raise DomainError("need 0 <= lo <= hi")
    hi = min(hi, r)
    a, b = lo / r, hi / r
    ca, cb = math.sqrt(1 - a * a), math.sqrt(1 - b * b)
    # asin(b) - asin(a) written to avoid cancellation for short intervals
    angle = math.atan2(b * ca - a * cb, ca * cb + a * b)
    return 0.5 * x * (b * cb - a * ca) + 0.5 * x * angle


def predicted_main(x: float, nu: float, J: float) -> float:
    """nu * 4J x^(3/4) / log(x)^2."""
    x = float(x)
    if x < 100:
        raise PreconditionError("predicted_main needs x >= 100")
    return nu * 4.0 * J * x**0.75 / math.log(x) ** 2
