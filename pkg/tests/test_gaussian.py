import math
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from antlab.errors import DomainError, PreconditionError
from antlab.gaussian import (
    AngularRegion,
    GaussInt,
    canonical_norm_divisor,
    congruence_sums,
    count_w,
    count_w_bound,
    delta,
    elements_of_norm,
    gauss_phi,
    in_exclusion_region,
    intermediate_identities,
    is_primitive,
    lambda_coeff,
    mitsui_count,
    mitsui_main,
    reciprocity_chain,
    recover_w,
    sample_class_member,
    sample_reciprocity_class,
    sector_S,
    spinor,
    y_f_sum,
    y_interval,
    y_main,
    y_sum,
    z_sum,
)
from antlab.primes import li

G = GaussInt
ints = st.integers(-10**6, 10**6)
gauss = st.builds(G, ints, ints)


def flat(bound=10**4):
    return st.builds(
        lambda a, b: G(2 * a + 1, 2 * b), st.integers(0, bound), st.integers(-bound, bound)
    ).filter(lambda z: math.gcd(z.re, z.im) == 1)


@given(gauss, gauss)
def test_norm_and_delta_identities(z1, z2):
    assert (z1 * z2).norm() == z1.norm() * z2.norm()
    assert delta(z1, z2) == -delta(z2, z1)
    assert delta(z1, z1) == 0
    assert delta(z1, z2) == (z1.conj() * z2).im


@given(flat(), flat())
def test_delta_even_for_odd_pairs(z1, z2):
    assert delta(z1, z2) % 2 == 0


def test_delta_examples():
    assert delta(G(1, 0), G(0, 1)) == 1
    assert delta(G(3, 2), G(1, 2)) == 4


def test_is_primitive():
    assert is_primitive(G(1, 2))
    assert not is_primitive(G(2, 4))
    assert not is_primitive(G(3, 0))
    with pytest.raises(DomainError):
        is_primitive(G(0, 0))


def test_arg_range():
    assert G(1, 0).arg() == 0
    assert G(0, -1).arg() == pytest.approx(3 * math.pi / 2)
    assert 0 <= G(1, -1).arg() < 2 * math.pi


def test_canonical_norm_divisor_examples():
    g = G(-1, 8)
    assert G(1, 2) * G(3, 2) == g
    assert canonical_norm_divisor(g, 5) == G(1, 2)
    assert canonical_norm_divisor(g, 13) == G(3, 2)
    assert canonical_norm_divisor(g, 1) == G(1, 0)
    assert canonical_norm_divisor(g, 65) == G(-1, 8).associates()[2] or canonical_norm_divisor(g, 65).re % 2
    with pytest.raises(PreconditionError):
        canonical_norm_divisor(G(1, 1), 2)  # even norm
    with pytest.raises(PreconditionError):
        canonical_norm_divisor(G(3, 9), 5)  # imprimitive
    with pytest.raises(PreconditionError):
        canonical_norm_divisor(g, 7)


def test_elements_of_norm_against_search():
    for m in range(1, 400):
        r = math.isqrt(m)
        ref = sorted(G(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1) if a * a + b * b == m)
        assert elements_of_norm(m) == ref


def test_census_small():
    rng = random.Random(8)
    done = 0
    while done < 500:
        z = G(rng.randint(-7000, 7000), rng.randint(-7000, 7000))
        if not z or math.gcd(z.re, z.im) != 1 or z.norm() % 2 == 0:
            continue
        done += 1
        for m in sympy.divisors(z.norm()):
            divs = [lam for lam in elements_of_norm(m) if lam.divides(z)]
            assert len(divs) == 4
            canon = [lam for lam in divs if lam.re > 0 and lam.re % 2]
            assert canon == [canonical_norm_divisor(z, m)]


def test_in_exclusion_region():
    assert in_exclusion_region(G(1, 0), 1, 0.01)
    assert not in_exclusion_region(G(5, 5), 10, 0.1)
    z = G(1, 2)
    assert in_exclusion_region(z, 5, abs(z.arg() - math.pi / 2))
    assert not in_exclusion_region(z, 6, 1.0)  # norm below N
    assert in_exclusion_region(G(7, -1), 40, 0.2)  # near 2 pi
    with pytest.raises(DomainError):
        in_exclusion_region(z, 0.5, 0.1)


def test_sector_S():
    z = w = G(3, 4)  # Re(conj(w) z) = 25
    assert sector_S(z, w, (20, 30), 1) == pytest.approx(2 * 5 * math.log(5))
    assert sector_S(z, w, (20, 30), 2) == 0
    assert sector_S(z, -w, (20, 30), 1) == 0
    assert sector_S(G(23, 0), G(1, 5), (20, 30), 2) == pytest.approx(math.log(23))
    assert sector_S(z, w, (25, 30), 1) == 0  # half-open at the left


def test_recover_w_examples():
    z1, z2 = G(1, 2), G(3, 2)
    assert delta(z1, z2) == -4
    rng = random.Random(0)
    for _ in range(200):
        w = G(rng.randint(-99, 99), rng.randint(-99, 99))
        q1, q2 = w.re * z1.re + w.im * z1.im, w.re * z2.re + w.im * z2.im
        assert recover_w(q1, q2, z1, z2) == w
    assert recover_w(1, 0, z1, z2) is None
    with pytest.raises(DomainError):
        recover_w(1, 1, z1, z1)


@given(gauss, gauss, gauss)
def test_recover_w_roundtrip(w, z1, z2):
    if delta(z1, z2) == 0:
        return
    q1, q2 = w.re * z1.re + w.im * z1.im, w.re * z2.re + w.im * z2.im
    v = z2 * q1 - z1 * q2
    D = delta(z1, z2)
    assert v.re % D == 0 and v.im % D == 0
    assert recover_w(q1, q2, z1, z2) == w


def test_count_w_examples():
    assert count_w(G(1, 0), 3, 0.5) == 0
    assert count_w(G(1, 0), 3, 25) == 9
    with pytest.raises(PreconditionError):
        count_w(G(2, 2), 3, 25)


@given(st.integers(-15, 15), st.integers(-15, 15), st.integers(-60, 60), st.floats(0, 900))
def test_count_w_matches_enumeration_and_bound(s, t, q, M):
    if math.gcd(s, t) != 1:
        return
    z = G(s, t)
    r = math.isqrt(int(M)) + 1
    ref = sum(1 for u in range(-r, r + 1) for v in range(-r, r + 1) if u * u + v * v <= M and u * s + v * t == q)
    assert count_w(z, q, M) == ref
    assert ref <= count_w_bound(z, M)


def test_angular_region_membership():
    U = AngularRegion(1.0, 0.0, 0.5, math.pi / 2, 25)
    assert U.contains(G(6, 1))
    assert not U.contains(G(5, 0))  # arg 0 excluded, |z| = 5 = c sqrt(N) excluded
    assert not U.contains(G(0, 6))  # arg pi/2 excluded
    ref = sorted(
        G(a, b)
        for a in range(-10, 11)
        for b in range(-10, 11)
        if 25 < a * a + b * b <= 56.25 and 0 < math.atan2(b, a) < math.pi / 2
    )
    assert U.points() == ref
    with pytest.raises(DomainError):
        AngularRegion(2.0, 0, 0.1, 0.1, 10)


_PTS = {}


def _region_points(U, exclusion):
    key = (U, exclusion)
    if key not in _PTS:
        _PTS[key] = [
            G(x, y)
            for x in range(1, 60, 2)
            for y in range(-60, 61, 2)
            if math.gcd(x, y) == 1 and U.contains(G(x, y)) and not (exclusion and in_exclusion_region(G(x, y), *exclusion))
        ]
    return _PTS[key]


def _z_oracle(a, D, U1, U2, beta, exclusion=None):
    total = 0.0
    count = 0
    for z1 in _region_points(U1, exclusion):
        for z2 in _region_points(U2, exclusion):
            d = z1.re * z2.im - z1.im * z2.re
            if d == D and (a * z2.re - z1.re) % D == 0 and (a * z2.im - z1.im) % D == 0:
                total += beta(z1) * beta(z2)
                count += 1
    return total, count


def test_z_sum_hand_built():
    U1 = AngularRegion(1.0, 0.0, 0.3, 0.9, 400)
    U2 = AngularRegion(1.0, 0.6, 0.3, 0.9, 400)
    beta = lambda z: math.cos(z.re + 3 * z.im)  # noqa: E731
    hits = 0
    for D in range(2, 400, 6):
        for a in (1, 3, 5, 7):
            if math.gcd(a, D) != 1:
                continue
            ref, cnt = _z_oracle(a, D, U1, U2, beta)
            assert z_sum(a, D, U1, U2, beta) == pytest.approx(ref, abs=1e-12)
            assert z_sum(a, D, U1, U2, variant="tilde") == cnt
            hits += cnt
    assert hits > 0


def test_z_sum_exclusion_and_empty():
    U1 = AngularRegion(1.0, 0.0, 0.3, 0.9, 400)
    U2 = AngularRegion(1.0, 0.6, 0.3, 0.9, 400)
    ex = (400, 0.3)
    for D in (8, 16, 24, 32):
        ref, cnt = _z_oracle(1, D, U1, U2, lambda z: 1.0, ex)
        assert z_sum(1, D, U1, U2, None, "tilde", exclusion=ex) == cnt
    tiny = AngularRegion(1.0, 0.1, 1e-9, 1e-9, 10)
    assert z_sum(1, 4, tiny, tiny, {}) == 0
    with pytest.raises(PreconditionError):
        z_sum(2, 4, U1, U2)


@given(st.integers(0, 2**32 - 1))
def test_z_bounded_by_tilde(seed):
    rng = random.Random(seed)
    U1 = AngularRegion(1.0, rng.uniform(0, 1), 0.3, 0.8, 300)
    U2 = AngularRegion(1.0, rng.uniform(0, 1), 0.3, 0.8, 300)
    table = {}
    beta = lambda z: table.setdefault(z, rng.uniform(-1, 1))  # noqa: E731
    D = 2 * rng.randint(1, 150)
    a = 2 * rng.randint(0, D) + 1
    if math.gcd(a, D) != 1:
        return
    cs = congruence_sums(a, D, U1, U2, (20, 30), (20, 30), beta=beta)
    assert abs(cs.Z) <= cs.Ztilde


def test_y_sums():
    L = math.log(23) + math.log(29)
    assert y_sum(1, 3, (20, 30), (20, 30), "g", "g") == pytest.approx(L * L)
    assert y_sum(1, 3, (24, 28), (20, 30), "g", "g") == 0
    assert y_sum(1, 5, (20, 30), (20, 30), "g", "g") == pytest.approx(2 * math.log(23) * math.log(29) * 0 + math.log(23) ** 2 + math.log(29) ** 2)
    for J1, J2, h1, h2 in [((20, 30), (10, 60), "g", "g"), ((20, 200), (30, 900), "f", "g"), ((4, 200), (9, 400), "f", "f")]:
        assert y_sum(1, 1, J1, J2, h1, h2) == pytest.approx(y_main(1, J1, J2, h1, h2), rel=1e-13)
        assert y_main(1, J1, J2, h1, h2) == pytest.approx(y_interval(J1, h1, 1) * y_interval(J2, h2, 1))


def test_y_sum_classes_sum_to_total():
    J1, J2 = (100, 3000), (50, 2000)
    for D in (3, 8, 15, 28):
        classes = [a for a in range(D) if math.gcd(a, D) == 1]
        total = sum(y_sum(a, D, J1, J2, "g", "f") for a in classes)
        assert total == pytest.approx(y_interval(J1, "g", D) * y_interval(J2, "f", D), rel=1e-12)


def test_y_f_square_classes():
    # Y(a, D; f, f) = sum over b with b^2 = a (mod D) of Y_f(b, D)
    J1, J2 = (4, 40000), (9, 30000)
    for D in (3, 5, 8, 12, 35):
        for a in range(D):
            if math.gcd(a, D) != 1:
                continue
            rhs = sum(y_f_sum(b, D, J1, J2) for b in range(D) if math.gcd(b, D) == 1 and (b * b - a) % D == 0)
            assert y_sum(a, D, J1, J2, "f", "f") == pytest.approx(rhs, rel=1e-12, abs=1e-9)


def test_reciprocity_chain_examples():
    with pytest.raises(DomainError):
        reciprocity_chain(G(1, 2), G(1, 2), 1, 2)
    rec = reciprocity_chain(G(1, 0), G(1, 2), 1, 2)
    assert rec.d1 == 1 and rec.lhs == 1
    with pytest.raises(PreconditionError):
        reciprocity_chain(G(2, 1), G(1, 2), 1, 2)


def test_reciprocity_class_constancy():
    rng = random.Random(21)
    for e, t in [(1, 2), (3, 2), (5, 4), (7, 8), (15, 2), (21, 16)]:
        w1, w2 = sample_reciprocity_class(e, t, rng)
        seen = set()
        got = 0
        while got < 50:
            r = sample_class_member(w1, w2, e, t, rng)
            if r:
                got += 1
                seen.add(r[2].lhs * r[2].rhs_product)
        assert len(seen) == 1


def test_reciprocity_class_requires_even_t():
    with pytest.raises(PreconditionError):
        sample_reciprocity_class(3, 1, random.Random(0))


@given(flat(4000), flat(4000))
def test_intermediate_identities(z1, z2):
    if delta(z1, z2) <= 0:
        return
    assert intermediate_identities(z1, z2).holds


def test_spinor():
    assert spinor(G(1, 0)) == 1
    assert spinor(G(1, 2)) == 1
    assert spinor(G(3, 2)) == -1j
    for bad in (G(2, 1), G(-3, 2), G(3, 3)):
        with pytest.raises(PreconditionError):
            spinor(bad)


def test_lambda_coeff():
    assert lambda_coeff(3) == 0
    assert lambda_coeff(1) == 1
    zs = [G(x, y) for x in range(-3, 4) for y in range(-3, 4) if x * x + y * y == 5]
    assert len(zs) == 8
    kept = [z for z in zs if z.re > 0 and z.re % 2]
    assert lambda_coeff(5) == sum(spinor(z) for z in kept) == 2
    k = 3
    ref = sum((complex(z.re, z.im) / math.sqrt(5)) ** k * spinor(z) for z in kept)
    assert abs(lambda_coeff(5, k) - ref) < 1e-12
    assert lambda_coeff(25) == sum(spinor(z) for z in [G(3, 4), G(3, -4)])


def test_gauss_phi():
    assert gauss_phi(1) == 1 and gauss_phi(3) == 8 and gauss_phi(5) == 16
    for q in range(1, 51):
        units = sum(1 for a in range(q) for b in range(q) if math.gcd(a * a + b * b, q) == 1)
        assert gauss_phi(q) == units


def _is_gaussian_prime(a, b):
    if a == 0 or b == 0:
        v = abs(a + b)
        return sympy.isprime(v) and v % 4 == 3
    return sympy.isprime(a * a + b * b)


def test_mitsui_small_oracle():
    total = sum(1 for a in range(-10, 11) for b in range(-10, 11) if a * a + b * b <= 100 and _is_gaussian_prime(a, b))
    assert mitsui_count(100, 1, G(1, 0), 2 * math.pi) == total
    # theta = 0: rational inert primes p = 1 (mod q) on the positive axis
    for q in (1, 2, 4, 5):
        ref = sum(1 for p in sympy.primerange(2, 1001) if p % 4 == 3 and p * p <= 10**6 and (p - 1) % q == 0)
        assert mitsui_count(10**6, q, G(1, 0), 0.0) == ref


def test_mitsui_residue_classes_against_oracle():
    x, q = 2000, 3
    for alpha in (G(1, 0), G(1, 1), G(2, 1)):
        ref = sum(
            1
            for a in range(-45, 46)
            for b in range(-45, 46)
            if a * a + b * b <= x
            and _is_gaussian_prime(a, b)
            and (a - alpha.re) % q == 0
            and (b - alpha.im) % q == 0
            and 0 <= math.atan2(b, a) % (2 * math.pi) <= math.pi / 2
        )
        assert mitsui_count(x, q, alpha, math.pi / 2) == ref


def test_mitsui_errors_and_main():
    with pytest.raises(PreconditionError):
        mitsui_count(100, 5, G(1, 2), 1.0)  # 1 + 2i divides 5
    with pytest.raises(DomainError):
        mitsui_count(100, 1, G(1, 0), 7.0)
    assert mitsui_main(10**5, 1, 2 * math.pi) == pytest.approx(4 * li(10**5))


def test_mitsui_ratio_pi():
    for q in (1, 3, 5):
        r = mitsui_count(10**6, q, G(1, 0), math.pi) / mitsui_main(10**6, q, math.pi)
        assert 0.9 <= r <= 1.1
