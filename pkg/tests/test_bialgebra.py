import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuntz_pentagon.bialgebra import (
    DirectSumElement,
    TensorElement,
    alpha,
    apply_leg,
    box_unitary,
    check_coassociativity,
    coproduct,
    counit_e,
    divisor_pairs,
    phi,
    split_letter,
    swap_legs,
)
from cuntz_pentagon.word_algebra import AlgebraElement, Monomial, random_element

from oracles import haar_unitary, oracle_divisor_pairs
from strategies import elements

E = AlgebraElement


def gen(n, i):
    return E.generator(n, i)


def test_phi_on_generators():
    assert phi(2, 2, gen(4, 3)) == TensorElement.simple(gen(2, 2), gen(2, 1))
    assert phi(2, 3, gen(6, 5)) == TensorElement.simple(gen(2, 2), gen(3, 2))


@pytest.mark.parametrize("n,m", [(2, 2), (2, 3), (3, 2), (4, 3)])
def test_phi_generator_table(n, m):
    for k in range(1, n * m + 1):
        i, j = (k - 1) // m + 1, (k - 1) % m + 1
        assert split_letter(k, m) == (i, j)
        assert phi(n, m, gen(n * m, k)) == TensorElement.simple(gen(n, i), gen(m, j))


def test_phi_with_trivial_left_factor():
    x = random_element(3, 3, 4, seed=1)
    assert phi(1, 3, x) == TensorElement.simple(E.identity(1), x)
    assert phi(3, 1, x) == TensorElement.simple(x, E.identity(1))


def test_phi_rejects_wrong_arity():
    with pytest.raises(ValueError):
        phi(2, 2, gen(6, 1))


def test_coproduct_blocks():
    value = coproduct(gen(4, 1))[4]
    assert sorted(value.blocks) == [(1, 4), (2, 2), (4, 1)]
    assert value.blocks[(1, 4)] == TensorElement.simple(E.identity(1), gen(4, 1))
    assert value.blocks[(2, 2)] == TensorElement.simple(gen(2, 1), gen(2, 1))
    assert value.blocks[(4, 1)] == TensorElement.simple(gen(4, 1), E.identity(1))
    one = coproduct(DirectSumElement({1: E.identity(1)}))[1]
    assert list(one.blocks) == [(1, 1)]
    assert one.blocks[(1, 1)] == TensorElement.identity((1, 1))
    for p in (2, 3, 5, 7, 11):
        assert sorted(coproduct(gen(p, 1))[p].blocks) == [(1, p), (p, 1)]


def test_divisor_pairs_examples():
    assert divisor_pairs(4) == [(1, 4), (2, 2), (4, 1)]
    assert divisor_pairs(1) == [(1, 1)]
    assert divisor_pairs(12) == [(1, 12), (2, 6), (3, 4), (4, 3), (6, 2), (12, 1)]


def test_divisor_pairs_oracle():
    for n in range(1, 500):
        assert divisor_pairs(n) == oracle_divisor_pairs(n)


def test_coassociativity_examples():
    assert check_coassociativity(2, 2, 2, gen(8, 1)) == 0
    for k in range(6):
        assert check_coassociativity(1, 2, 3, random_element(6, 3, 3, seed=k)) == 0
        assert check_coassociativity(2, 3, 2, random_element(12, 2, 3, seed=k)) == 0


def test_coassociativity_detects_a_wrong_splitting():
    # splitting with the roles of the factors swapped is not coassociative
    x = gen(8, 2)
    lhs = apply_leg(phi(2, 4, x), 1, lambda m: phi(2, 2, E(4, {m: 1})))
    swapped = swap_legs(apply_leg(phi(4, 2, x), 0, lambda m: phi(2, 2, E(4, {m: 1}))), 0, 2)
    assert (lhs - swapped).canonical().max_abs_coefficient() > 0.5


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_phi_is_a_star_homomorphism(data):
    n, m = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    x, y = data.draw(elements(n * m, 2)), data.draw(elements(n * m, 2))
    assert phi(n, m, x * y) == phi(n, m, x) * phi(n, m, y)
    assert phi(n, m, x.star) == phi(n, m, x).adjoint()
    assert phi(n, m, x + y) == phi(n, m, x) + phi(n, m, y)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_phi_respects_completeness(data):
    n, m = data.draw(st.integers(1, 3)), data.draw(st.integers(2, 3))
    total = sum((E.monomial(n * m, (k,), (k,)) for k in range(2, n * m + 1)), E.monomial(n * m, (1,), (1,)))
    assert phi(n, m, total) == TensorElement.identity((n, m))


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_coassociativity_property(data):
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    x = data.draw(elements(a * b * c, 3))
    assert check_coassociativity(a, b, c, x) <= 1e-14


def test_alpha_examples():
    x = random_element(2, 2, 3, seed=0)
    assert alpha(np.eye(2), x) == x
    assert alpha([[0, 1], [1, 0]], gen(2, 1)) == gen(2, 2)


def test_alpha_group_action():
    rng = np.random.default_rng(5)
    for n in (2, 3):
        g, h = haar_unitary(n, rng), haar_unitary(n, rng)
        x = random_element(n, 2, 3, seed=n)
        assert alpha(g, alpha(g.conj().T, x)) == x
        assert alpha(g, alpha(h, x)) == alpha(g @ h, x)
        y = random_element(n, 2, 2, seed=10 + n)
        assert alpha(g, x * y) == alpha(g, x) * alpha(g, y)


def test_alpha_rejects_nonunitary():
    with pytest.raises(ValueError):
        alpha(np.ones((2, 2)), gen(2, 1))
    with pytest.raises(ValueError):
        alpha(np.eye(3), gen(2, 1))


def test_box_unitary_properties():
    rng = np.random.default_rng(2)
    assert np.array_equal(box_unitary(np.eye(2), np.eye(2)), np.eye(4))
    g, h, k = haar_unitary(2, rng), haar_unitary(3, rng), haar_unitary(2, rng)
    gh = box_unitary(g, h)
    assert np.allclose(gh @ gh.conj().T, np.eye(6))
    assert np.allclose(box_unitary(box_unitary(g, h), k), box_unitary(g, box_unitary(h, k)))
    # entrywise formula with k = m(i-1)+j
    for i in range(2):
        for j in range(3):
            for i2 in range(2):
                for j2 in range(3):
                    assert gh[3 * i + j, 3 * i2 + j2] == pytest.approx(g[i, i2] * h[j, j2])


def test_alpha_intertwines_phi():
    # phi_{n,m} o alpha_{g [x] h} = (alpha_g (x) alpha_h) o phi_{n,m}
    rng = np.random.default_rng(9)
    g, h = haar_unitary(2, rng), haar_unitary(2, rng)
    x = random_element(4, 1, 3, seed=4)
    lhs = phi(2, 2, alpha(box_unitary(g, h), x))
    rhs = apply_leg(apply_leg(phi(2, 2, x), 0, lambda m: TensorElement.simple(alpha(g, E(2, {m: 1})))), 1,
                    lambda m: TensorElement.simple(alpha(h, E(2, {m: 1}))))
    assert (lhs - rhs).canonical().max_abs_coefficient() < 1e-12


def test_counit():
    assert counit_e(E.identity(1, 3)) == 3
    assert counit_e(E.identity(1)) == 1
    with pytest.raises(ValueError):
        counit_e(E.identity(2))


def test_tensor_canonical_collapses_each_leg():
    t = TensorElement((2, 2), {(Monomial(2, (1,), (1,)), Monomial(2)): 1, (Monomial(2, (2,), (2,)), Monomial(2)): 1})
    assert t.canonical().terms == {(Monomial(2), Monomial(2)): 1}
