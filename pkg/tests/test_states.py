import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntz_pentagon.states import (
    VectorSequence,
    box_vector,
    check_monoid_condition,
    eta,
    parse_family,
    rho,
    sequence_value,
    state_distinctness,
    state_tensor,
    unit_vector,
)
from cuntz_pentagon.word_algebra import AlgebraElement, Monomial, canonical_form, level_raise, random_monomial

from oracles import oracle_rho
from strategies import elements, monomials

E = AlgebraElement
FAMILIES = ["basis-first", "basis-last", "uniform", "phase:1.0", "phase:0.5:uniform", "phase:3.0:basis-last"]


def test_rho_examples():
    z = np.array([0.6, 0.8j])
    assert rho(z, E.generator(2, 2)) == pytest.approx(np.conj(z[1]))
    e1 = np.array([1, 0])
    assert rho(e1, E.monomial(2, (2,), (2,))) == 0
    assert rho(e1, E.monomial(2, (1,), (1,))) == 1
    w = np.array([1, 1j]) / math.sqrt(2)
    assert rho(w, E.monomial(2, (1,), (2,))) == pytest.approx(0.5j)


def test_rho_word_order():
    # rho(s_j1 s_j2 s_k2^* s_k1^*) = conj(z_j1 z_j2) z_k2 z_k1
    z = np.array([0.5, 0.5j, math.sqrt(0.5)])
    mono = Monomial(3, (1, 2), (3, 2))
    assert rho(z, E(3, {mono: 1})) == pytest.approx(np.conj(z[0] * z[1]) * z[2] * z[1])


def test_rho_rejects_mismatch():
    with pytest.raises(ValueError):
        rho(np.array([1.0, 0.0]), E.generator(3, 1))
    with pytest.raises(ValueError):
        unit_vector([1.0, 1.0])
    with pytest.raises(ValueError):
        unit_vector([-1.0])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_rho_is_a_state(data):
    n = data.draw(st.integers(2, 3))
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    z /= np.linalg.norm(z)
    x = data.draw(elements(n, 2))
    assert rho(z, x * x.star).real >= -1e-12
    assert abs(rho(z, x * x.star).imag) < 1e-10
    assert rho(z, x.star) == pytest.approx(np.conj(rho(z, x)))
    # invariant under rewriting
    assert rho(z, canonical_form(x)) == pytest.approx(rho(z, x))
    m = data.draw(monomials(n))
    assert rho(z, level_raise(m)) == pytest.approx(oracle_rho(z, m))
    assert rho(z, E.identity(n)) == pytest.approx(1)


def test_state_tensor_examples():
    z, y = np.array([0.6, 0.8]), np.array([0, 1j, 0])
    for k in range(1, 7):
        i, j = (k - 1) // 3, (k - 1) % 3
        assert state_tensor(z, y, E.generator(6, k)) == pytest.approx(np.conj(z[i] * y[j]))
    x = E.monomial(3, (1, 2), (3,), 2)
    assert state_tensor([1.0], y, x) == pytest.approx(rho(y, x))


@pytest.mark.parametrize("family", FAMILIES)
def test_state_equation_property(family):
    seq = parse_family(family)
    rng = np.random.default_rng(0)
    for n in range(1, 5):
        for m in range(1, 5):
            for _ in range(15):
                x = E(n * m, {random_monomial(n * m, 3, rng): 1.0})
                assert abs(state_tensor(seq(n), seq(m), x) - rho(seq(n * m), x)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_state_tensor_is_associative(data):
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))

    def rand(k):
        v = rng.normal(size=k) + 1j * rng.normal(size=k)
        return np.array([1.0]) if k == 1 else v / np.linalg.norm(v)

    z, y, w = rand(a), rand(b), rand(c)
    assert np.allclose(box_vector(box_vector(z, y), w), box_vector(z, box_vector(y, w)))
    x = data.draw(elements(a * b * c, 2))
    # (rho_z (x) rho_y (x) rho_w) through either bracketing equals rho of the product vector
    lhs = state_tensor(box_vector(z, y), w, x)
    rhs = state_tensor(z, box_vector(y, w), x)
    assert lhs == pytest.approx(rhs)
    assert lhs == pytest.approx(rho(box_vector(box_vector(z, y), w), x))


def test_box_vector_examples():
    assert np.array_equal(box_vector([1, 0], [0, 1]), [0, 1, 0, 0])
    assert np.array_equal(box_vector(eta(2), eta(3)), eta(6))
    u = parse_family("uniform")
    assert np.allclose(box_vector(u(2), u(3)), np.full(6, 6 ** -0.5))


def test_sequence_values():
    assert np.array_equal(sequence_value(VectorSequence("basis_first"), 3), [1, 0, 0])
    assert np.array_equal(parse_family("basis-last")(3), [0, 0, 1])
    assert parse_family("phase:2.5")(1) == pytest.approx([1])
    assert np.allclose(parse_family("uniform")(4), [0.5] * 4)
    z = parse_family("phase:1.0:uniform")(3)
    assert np.allclose(z, np.exp(1j * math.log(3)) * np.full(3, 3 ** -0.5))
    for fam in FAMILIES:
        for n in range(1, 8):
            assert np.linalg.norm(parse_family(fam)(n)) == pytest.approx(1)


def test_family_ids_round_trip():
    for fam in FAMILIES:
        seq = parse_family(fam)
        assert parse_family(seq.id) == seq
    with pytest.raises(ValueError):
        parse_family("gaussian")
    with pytest.raises(ValueError):
        parse_family("phase:abc")
    with pytest.raises(ValueError):
        sequence_value(parse_family("uniform"), 0)


@pytest.mark.parametrize("family", ["basis-first", "basis-last", "uniform", "phase:0", "phase:1", "phase:3.141592653589793",
                                    "phase:1:uniform"])
def test_monoid_condition(family):
    seq = parse_family(family)
    worst = max(check_monoid_condition(seq, n, m) for n in range(1, 31) for m in range(1, 31))
    assert worst <= 1e-12


def test_monoid_condition_fails_for_a_non_multiplicative_sequence():
    # phases e^{i n} are not multiplicative
    seq = VectorSequence("uniform")
    bad = lambda n: np.exp(1j * n) * seq(n)  # noqa: E731
    assert np.linalg.norm(box_vector(bad(2), bad(3)) - bad(6)) > 0.1


def test_distinct_vectors_give_distinct_states():
    gap, j = state_distinctness([1, 0], [0, 1])
    assert gap == pytest.approx(1) and j in (1, 2)
    z, y = np.array([0.6, 0.8]), np.array([0.6, 0.8j])
    gap, j = state_distinctness(z, y)
    assert j == 2
    assert abs(rho(z, E.generator(2, j)) - rho(y, E.generator(2, j))) == pytest.approx(gap)
