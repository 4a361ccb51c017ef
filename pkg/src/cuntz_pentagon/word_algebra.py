"""Exact calculus on the dense *-subalgebra of the Cuntz algebra O_n.

Elements are finite complex combinations of monomials ``s_mu s_nu^*`` where
``mu`` and ``nu`` are words over the letters ``1..n``.  Products use the
Cuntz relations ``s_i^* s_j = delta_ij I``; equality modulo the completeness
relation ``sum_i s_i s_i^* = I`` is decided through :func:`canonical_form`.

Words are plain tuples of 1-based ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Mapping, Tuple, TypeVar

import numpy as np

__all__ = [
    "TOL",
    "Word",
    "Monomial",
    "AlgebraElement",
    "multiply",
    "adjoint",
    "level_raise",
    "canonical_form",
    "equal",
    "random_element",
    "collapse_terms",
    "check_word",
    "random_monomial",
    "all_monomials",
]

#: coefficient tolerance used by canonicalisation and equality
TOL = 1e-12

Word = Tuple[int, ...]


def check_word(word: Iterable[int], arity: int) -> Word:
    w = tuple(int(c) for c in word)
    for c in w:
        if not 1 <= c <= arity:
            raise ValueError(f"letter {c} outside 1..{arity}")
    return w


@dataclass(frozen=True)
class Monomial:
    """The monomial ``s_mu s_nu^*`` of O_arity."""

    arity: int
    mu: Word = ()
    nu: Word = ()

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be a positive integer")
        object.__setattr__(self, "mu", check_word(self.mu, self.arity))
        object.__setattr__(self, "nu", check_word(self.nu, self.arity))

    @property
    def degree(self) -> int:
        """Creation degree ``|mu|``."""
        return len(self.mu)

    @property
    def gauge(self) -> int:
        return len(self.mu) - len(self.nu)

    def adjoint(self) -> "Monomial":
        return Monomial(self.arity, self.nu, self.mu)

    def sort_key(self):
        return (len(self.mu) - len(self.nu), len(self.mu), self.mu, self.nu)

    def __repr__(self):
        def fmt(w):
            return "".join(map(str, w)) if self.arity < 10 else ".".join(map(str, w))

        if not self.mu and not self.nu:
            return f"I_{self.arity}"
        parts = []
        if self.mu:
            parts.append(f"s_{fmt(self.mu)}")
        if self.nu:
            parts.append(f"s_{fmt(self.nu)}*")
        return " ".join(parts)


def _clean(terms: Mapping[Monomial, complex]) -> Dict[Monomial, complex]:
    return {m: complex(c) for m, c in terms.items() if abs(c) > TOL}


class AlgebraElement:
    """Finite linear combination of Cuntz monomials at a fixed arity.

    The stored terms are merged but not necessarily canonical; use
    :func:`canonical_form` (or ``==``) to compare elements in O_n.
    """

    __slots__ = ("arity", "terms", "_is_canonical")

    def __init__(self, arity: int, terms: Mapping[Monomial, complex] | None = None,
                 _canonical: bool = False):
        if arity < 1:
            raise ValueError("arity must be a positive integer")
        terms = dict(terms or {})
        for m in terms:
            if m.arity != arity:
                raise ValueError(f"monomial {m!r} has arity {m.arity}, expected {arity}")
        self.arity = arity
        self.terms = _clean(terms)
        self._is_canonical = _canonical

    # constructors ---------------------------------------------------------
    @classmethod
    def identity(cls, n: int, coeff: complex = 1.0) -> "AlgebraElement":
        return cls(n, {Monomial(n): coeff})

    @classmethod
    def monomial(cls, n: int, mu: Iterable[int] = (), nu: Iterable[int] = (),
                 coeff: complex = 1.0) -> "AlgebraElement":
        return cls(n, {Monomial(n, tuple(mu), tuple(nu)): coeff})

    @classmethod
    def generator(cls, n: int, i: int) -> "AlgebraElement":
        """The isometry ``s_i``."""
        return cls.monomial(n, (i,))

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.arity != self.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement(self.arity, out)

    def __neg__(self):
        return AlgebraElement(self.arity, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (int, float, complex, np.number)):
            return AlgebraElement(self.arity, {m: c * other for m, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement) or other.arity != self.arity:
            return NotImplemented
        return equal(self, other)

    __hash__ = None

    @property
    def star(self) -> "AlgebraElement":
        return adjoint(self)

    def is_zero(self) -> bool:
        return not canonical_form(self).terms

    def max_length(self) -> int:
        return max((max(len(m.mu), len(m.nu)) for m in self.terms), default=0)

    def creation_degree(self) -> int:
        return max((len(m.mu) for m in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self):
        if not self.terms:
            return f"0 (O_{self.arity})"
        return " + ".join(f"({c:.6g})·{m!r}" for m, c in self.sorted_terms())


def _monomial_product(a: Monomial, b: Monomial) -> Monomial | None:
    # (s_mu s_nu*)(s_al s_be*)
    nu, al = a.nu, b.mu
    if len(al) >= len(nu):
        if al[: len(nu)] != nu:
            return None
        return Monomial(a.arity, a.mu + al[len(nu):], b.nu)
    if nu[: len(al)] != al:
        return None
    return Monomial(a.arity, a.mu, b.nu + nu[len(al):])


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in O_n, returned in canonical form."""
    a._check(b)
    out: Dict[Monomial, complex] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            m = _monomial_product(ma, mb)
            if m is not None:
                out[m] = out.get(m, 0) + ca * cb
    return canonical_form(AlgebraElement(a.arity, out))


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(
        a.arity,
        {m.adjoint(): c.conjugate() for m, c in a.terms.items()},
        _canonical=False,
    )


def level_raise(m: Monomial) -> AlgebraElement:
    """Expand ``s_mu s_nu^*`` as ``sum_i s_{mu i} s_{nu i}^*``.

    At arity 1 the monomial is returned unchanged (``s_1 = I_1``).
    """
    if m.arity == 1:
        return AlgebraElement(1, {m: 1.0})
    return AlgebraElement(
        m.arity, {Monomial(m.arity, m.mu + (i,), m.nu + (i,)): 1.0 for i in range(1, m.arity + 1)}
    )


V = TypeVar("V")


def _split_root(mono: Monomial) -> Tuple[Word, Word, Word]:
    mu, nu = mono.mu, mono.nu
    k = 0
    while k < min(len(mu), len(nu)) and mu[-1 - k] == nu[-1 - k]:
        k += 1
    return mu[: len(mu) - k], nu[: len(nu) - k], mu[len(mu) - k:]


def collapse_terms(
    arity: int,
    terms: Mapping[Monomial, V],
    zero: V,
    add: Callable[[V, V], V],
    is_zero: Callable[[V], bool],
    same: Callable[[V, V], bool],
) -> Dict[Monomial, V]:
    """Canonical representative of ``sum_m value_m * m`` with values in any vector space.

    Every monomial lies on a unique raising tree rooted at the pair obtained by
    stripping the common trailing letters of ``mu`` and ``nu``; the element is
    a function on the leaves of that tree.  The representative keeps a node iff
    the function is constant on its subtree and not on its parent's.
    """
    if arity == 1:
        total = zero
        for v in terms.values():
            total = add(total, v)
        return {} if is_zero(total) else {Monomial(1): total}

    roots: Dict[Tuple[Word, Word], Dict[Word, V]] = {}
    for mono, val in terms.items():
        rmu, rnu, suffix = _split_root(mono)
        table = roots.setdefault((rmu, rnu), {})
        table[suffix] = add(table[suffix], val) if suffix in table else val

    out: Dict[Monomial, V] = {}
    letters = range(1, arity + 1)
    for (rmu, rnu), table in roots.items():
        nodes = set()
        for w in table:
            for k in range(len(w) + 1):
                nodes.add(w[:k])

        def resolve(w: Word, inherited: V):
            # returns (True, value) for a constant subtree, else (False, leaves)
            acc = add(inherited, table[w]) if w in table else inherited
            kids = [w + (i,) for i in letters]
            if not any(k in nodes for k in kids):
                return True, acc
            results = [resolve(k, acc) if k in nodes else (True, acc) for k in kids]
            if all(r[0] for r in results):
                first = results[0][1]
                if all(same(first, r[1]) for r in results[1:]):
                    return True, first
            leaves = []
            for k, (const, payload) in zip(kids, results):
                if const:
                    leaves.append((k, payload))
                else:
                    leaves.extend(payload)
            return False, leaves

        const, payload = resolve((), zero)
        leaves = [((), payload)] if const else payload
        for w, val in leaves:
            if not is_zero(val):
                out[Monomial(arity, rmu + w, rnu + w)] = val
    return dict(sorted(out.items(), key=lambda kv: kv[0].sort_key()))


def canonical_form(a: AlgebraElement) -> AlgebraElement:
    """Unique representative of ``a`` in O_n (up to the coefficient tolerance)."""
    if a._is_canonical:
        return a
    terms = collapse_terms(
        a.arity,
        a.terms,
        0j,
        lambda x, y: x + y,
        lambda x: abs(x) <= TOL,
        lambda x, y: abs(x - y) <= TOL,
    )
    return AlgebraElement(a.arity, terms, _canonical=True)


def equal(a: AlgebraElement, b: AlgebraElement) -> bool:
    a._check(b)
    return not canonical_form(a - b).terms


def random_element(arity: int, max_len: int, n_terms: int, seed=None) -> AlgebraElement:
    """Random element with at most ``n_terms`` monomials of word length ``<= max_len``."""
    if arity < 1 or max_len < 0 or n_terms < 1:
        raise ValueError("need arity >= 1, max_len >= 0, n_terms >= 1")
    rng = np.random.default_rng(seed)
    terms: Dict[Monomial, complex] = {}
    for _ in range(n_terms):
        mu = tuple(rng.integers(1, arity + 1, size=rng.integers(0, max_len + 1)).tolist())
        nu = tuple(rng.integers(1, arity + 1, size=rng.integers(0, max_len + 1)).tolist())
        c = complex(rng.normal(), rng.normal())
        m = Monomial(arity, mu, nu)
        terms[m] = terms.get(m, 0) + c
    return AlgebraElement(arity, terms)


def random_monomial(arity: int, max_len: int, rng: np.random.Generator) -> Monomial:
    mu = tuple(rng.integers(1, arity + 1, size=rng.integers(0, max_len + 1)).tolist())
    nu = tuple(rng.integers(1, arity + 1, size=rng.integers(0, max_len + 1)).tolist())
    return Monomial(arity, mu, nu)


def all_monomials(arity: int, max_len: int):
    """Every monomial with ``|mu|, |nu| <= max_len``."""
    words = [w for k in range(max_len + 1) for w in itertools.product(range(1, arity + 1), repeat=k)]
    for mu in words:
        for nu in words:
            yield Monomial(arity, mu, nu)
