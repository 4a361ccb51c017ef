"""Brute-force reference implementations used by the tests.

They deliberately share no code with the package beyond the ``Monomial`` and
``AlgebraElement`` containers.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np

from cuntz_pentagon.word_algebra import AlgebraElement, Monomial


def raised_table(x: AlgebraElement, level: int) -> dict:
    """Expand every term of ``x`` until ``|nu| == level`` using ``I = sum_i s_i s_i^*``.

    For fixed ``|nu|`` the monomials ``s_mu s_nu^*`` are linearly independent,
    so two elements agree exactly when their tables agree.
    """
    table = defaultdict(complex)
    for mono, c in x.terms.items():
        for tail in itertools.product(range(1, x.arity + 1), repeat=level - len(mono.nu)):
            table[(mono.mu + tail, mono.nu + tail)] += c
    return {k: v for k, v in table.items() if abs(v) > 1e-12}


def oracle_equal(x: AlgebraElement, y: AlgebraElement) -> bool:
    if x.arity != y.arity:
        return False
    if x.arity == 1:
        return abs(sum(x.terms.values()) - sum(y.terms.values())) <= 1e-12
    level = max([len(m.nu) for m in x.terms] + [len(m.nu) for m in y.terms] + [0])
    a, b = raised_table(x, level), raised_table(y, level)
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= 1e-12 for k in set(a) | set(b))


def oracle_product(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Multiply by raising both factors until the inner words have equal length."""
    terms = defaultdict(complex)
    for (m1, c1), (m2, c2) in itertools.product(x.terms.items(), y.terms.items()):
        # s_mu s_nu^* s_al s_be^*; pad the shorter of nu, al
        nu, al = m1.nu, m2.mu
        if len(nu) < len(al):
            for tail in itertools.product(range(1, x.arity + 1), repeat=len(al) - len(nu)):
                if nu + tail == al:
                    terms[Monomial(x.arity, m1.mu + tail, m2.nu)] += c1 * c2
        else:
            for tail in itertools.product(range(1, x.arity + 1), repeat=len(nu) - len(al)):
                if al + tail == nu:
                    terms[Monomial(x.arity, m1.mu, m2.nu + tail)] += c1 * c2
    return AlgebraElement(x.arity, dict(terms))


def oracle_words(n: int, L: int):
    """Basis words of the truncated permutative space, graded then lexicographic."""
    if n == 1:
        return [()]
    out = []
    for ell in range(L + 1):
        for w in itertools.product(range(1, n + 1), repeat=ell):
            if ell == 0 or w[-1] != 1:
                out.append(w)
    return out


def oracle_divisor_pairs(n: int):
    return [(d, n // d) for d in range(1, n + 1) if n % d == 0]


def strip(w):
    w = list(w)
    while w and w[-1] == 1:
        w.pop()
    return tuple(w)


def oracle_generators(n: int, L: int):
    """Dense ``S_i`` built from dictionaries of words."""
    words = oracle_words(n, L)
    index = {w: k for k, w in enumerate(words)}
    mats = []
    for i in range(1, n + 1):
        s = np.zeros((len(words), len(words)), dtype=complex)
        for k, w in enumerate(words):
            image = strip((i,) + w)
            if image in index:
                s[index[image], k] = 1
        mats.append(s)
    return words, mats


def oracle_rep(z, L: int, g):
    """Dense ``pi_z(s_i) = sum_k g_ki S_k``."""
    n = len(z)
    words, gens = oracle_generators(n, L)
    return words, [sum(g[k, i] * gens[k] for k in range(n)) for i in range(n)]


def oracle_rho(z, mono: Monomial) -> complex:
    val = 1 + 0j
    for j in mono.mu:
        val *= np.conj(z[j - 1])
    for k in mono.nu:
        val *= z[k - 1]
    return val


def oracle_U(n: int, m: int, L: int) -> np.ndarray:
    """Dense digit-splitting map on words, built from dictionaries."""
    words_nm = oracle_words(n * m, L)
    words_n, words_m = oracle_words(n, L), oracle_words(m, L)
    idx_n = {w: k for k, w in enumerate(words_n)}
    idx_m = {w: k for k, w in enumerate(words_m)}
    out = np.zeros((len(words_n) * len(words_m), len(words_nm)))
    for col, w in enumerate(words_nm):
        left = strip(tuple((k - 1) // m + 1 for k in w))
        right = strip(tuple((k - 1) % m + 1 for k in w))
        out[idx_n[left] * len(words_m) + idx_m[right], col] = 1
    return out


def haar_unitary(n: int, rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))
