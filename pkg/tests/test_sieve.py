import math

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from antlab.errors import CapacityError, DomainError
from antlab.sequences import SieveParams, WeightedSequence, build_sequence, pi_of
from antlab.sieve import (
    CoefficientSupport,
    buchstab_terms,
    coefficient_indicator,
    decompose_T_U,
    sift,
    sift_multiple,
    u_split,
)

from oracles import sifted_terms


def unit(ns, params=None):
    return WeightedSequence.from_mapping({n: 1.0 for n in ns}, params)


def test_sift_examples():
    C = unit(range(2, 31))
    assert sift(C, 2) == 29
    assert sift(C, 5) == 9
    D = unit(range(1, 31))
    assert sift(D, 1000) == 1
    with pytest.raises(DomainError):
        sift(C, 1.5)


@given(
    st.dictionaries(st.integers(1, 10**4), st.floats(-10, 10), min_size=1, max_size=80),
    st.integers(2, 99),
    st.integers(3, 100),
)
def test_buchstab_recursion_random(mapping, w, z):
    if w >= z:
        w, z = z - 1, w + 1 if z - 1 < 2 else z
    w, z = min(w, z), max(w, z)
    C = WeightedSequence.from_mapping(mapping)
    rhs = sift(C, w) - math.fsum(sift(C.restrict(p), p) for p in sympy.primerange(w, z))
    lhs = sift(C, z)
    assert lhs == pytest.approx(rhs, abs=1e-9 * (1 + sum(abs(v) for v in mapping.values())))


def test_sift_multiple_is_sift_of_restriction():
    C = WeightedSequence.from_mapping({n: math.sin(n) for n in range(1, 3000)})
    for d in (1, 2, 3, 7, 30, 97):
        for z in (2, 5, 11, 50):
            assert sift_multiple(C, d, z) == pytest.approx(sift(C.restrict(d), z), abs=1e-12)


@pytest.fixture(scope="module")
def p6():
    return SieveParams.standard(10**6)


@pytest.fixture(scope="module")
def B6(p6):
    return build_sequence("B", p6)


def test_buchstab_B_against_oracle(B6, p6):
    rep = buchstab_terms(B6, p6)
    ref = sifted_terms(B6, p6)
    for k in ("S1", "S2", "S3", "tail", "sifted"):
        assert getattr(rep, k) == pytest.approx(ref[k], rel=1e-12)
    assert np.allclose(rep.T, ref["T"], rtol=1e-12)
    assert np.allclose(rep.U, ref["U"], rtol=1e-12)
    assert np.allclose(rep.V, ref["V"], rtol=1e-12)
    # pinned from the oracle
    assert rep.S1 == pytest.approx(10698.778822078448, rel=1e-12)
    assert rep.S2 == pytest.approx(7377.977990135573, rel=1e-12)
    assert rep.S3 == pytest.approx(511.62511198667903, rel=1e-12)
    assert rep.tail == pytest.approx(611.8617839163893, rel=1e-12)
    assert rep.max_relative_residual() <= 1e-12
    assert rep.sifted == pytest.approx(pi_of(B6), rel=1e-13)


def test_u_split_B_against_oracle(B6, p6):
    ref = sifted_terms(B6, p6)["U_bands"][1]
    s = u_split(B6, p6, 1)
    assert [s.U1, s.middle, s.U2] == pytest.approx(ref, rel=1e-12)
    assert s.U1 + s.middle + s.U2 == pytest.approx(s.total, rel=1e-14)
    assert s.U1 == pytest.approx(992.580322270121, rel=1e-12)
    with pytest.raises(DomainError):
        u_split(B6, p6, 3)


def test_decompose_T_U(B6, p6):
    for n in range(1, p6.n0 + 1):
        r = decompose_T_U(B6, p6, n)
        assert r.T - r.U - r.Vnext == pytest.approx(r.V, abs=1e-9 * (abs(r.T) + abs(r.U) + 1))
    with pytest.raises(DomainError):
        decompose_T_U(B6, p6, p6.n0 + 1)


def test_empty_sequence_all_zero(p6):
    E = WeightedSequence.empty(p6, "B")
    rep = buchstab_terms(E, p6)
    assert (rep.S1, rep.S2, rep.S3, rep.tail) == (0, 0, 0, 0)
    assert not any(rep.T) and not any(rep.U)
    r = decompose_T_U(E, p6, 1)
    assert (r.T, r.U, r.V, r.Vnext) == (0, 0, 0, 0)
    assert u_split(E, p6, 2).total == 0


def test_hand_built_tuples():
    # x = 10^4: x^delta ~ 3.5, Y ~ 26; tuples of primes in [5, 26)
    p = SieveParams.standard(10**4)
    C = WeightedSequence.from_mapping({5 * 7 * 101: 1.0, 11 * 13 * 17: 2.0, 23 * 29: 4.0, 5 * 5 * 31: 8.0}, p)
    r = decompose_T_U(C, p, 1)
    ref = sifted_terms(C, p)
    assert r.T == pytest.approx(ref["T"][0])
    assert r.U == pytest.approx(ref["U"][0])
    assert r.V == pytest.approx(ref["V"][0])
    # T(1): single primes p < Y dividing n with spf >= x^delta, counted per prime
    assert r.T == 1 * 2 + 2 * 3 + 4 * 1 + 8 * 1


@given(st.dictionaries(st.integers(101, 10**4), st.floats(0, 10), min_size=1, max_size=100), st.integers(0, 2**31))
def test_buchstab_identities_random_sequences(mapping, seed):
    p = SieveParams.standard(10**4)
    C = WeightedSequence.from_mapping(mapping, p)
    rep = buchstab_terms(C, p)
    assert rep.max_relative_residual() <= 1e-9


def test_sifted_equals_pi_without_prime_squares(p6):
    # support in (sqrt x, x] with no p^2 for p >= sqrt x (there are none below x)
    rng = np.random.default_rng(0)
    ns = np.unique(rng.integers(1001, 10**6, size=3000))
    C = WeightedSequence(ns, rng.random(ns.size), p6, "custom")
    assert sift(C, 1000) == pytest.approx(pi_of(C), rel=1e-13)


def test_coefficient_indicator_examples():
    R = CoefficientSupport("R", J=(10, 11))
    assert not coefficient_indicator(R, 77)
    assert coefficient_indicator(R, 143)
    Q0 = CoefficientSupport("Qj", j=0, J=(100, 110), window=(10**4, 1.1 * 10**4))
    assert not coefficient_indicator(Q0, 10303)
    Q0 = CoefficientSupport("Qj", j=0, J=(100, 110))
    assert coefficient_indicator(Q0, 103) and not coefficient_indicator(Q0, 113)
    Q1 = CoefficientSupport("Qj", j=1, J=(5, 8), Y=50, upper=10**3)
    assert coefficient_indicator(Q1, 11 * 7)  # 11 < 50 <= 77
    assert not coefficient_indicator(Q1, 13 * 3)
    assert not coefficient_indicator(Q1, 53 * 7)  # p_1 >= Y


def test_sift_capacity():
    big = WeightedSequence(np.arange(1, 5_000_002), np.ones(5_000_001))
    with pytest.raises(CapacityError):
        sift(big, 3)
