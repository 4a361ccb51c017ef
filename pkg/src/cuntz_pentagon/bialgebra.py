"""Comultiplication of the direct sum of Cuntz algebras.

The embeddings ``phi_{n,m}: O_{nm} -> O_n (x) O_m`` send ``s_{m(i-1)+j}`` to
``s_i (x) s_j``.  Summing them over the factorisations of ``n`` gives the
coproduct on the direct sum ``O_* = O_1 + O_2 + ...``.  The monoid of
arities is (N, x).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, List, Mapping, Tuple

import numpy as np

from .word_algebra import (
    TOL,
    AlgebraElement,
    Monomial,
    Word,
    _monomial_product,
    canonical_form,
    collapse_terms,
)

__all__ = [
    "TensorElement",
    "DirectSumElement",
    "CoproductValue",
    "divisor_pairs",
    "split_letter",
    "phi",
    "coproduct",
    "apply_leg",
    "swap_legs",
    "check_coassociativity",
    "check_unitary",
    "alpha",
    "box_unitary",
    "counit_e",
]

Key = Tuple[Monomial, ...]


class TensorElement:
    """Element of the algebraic tensor product ``O_{n1} (x) ... (x) O_{nk}``.

    Two legs is the usual case; three-leg elements use leg order 1, 2, 3.
    """

    __slots__ = ("arities", "terms", "_is_canonical")

    def __init__(self, arities: Iterable[int], terms: Mapping[Key, complex] | None = None,
                 _canonical: bool = False):
        self.arities = tuple(int(a) for a in arities)
        if not self.arities:
            raise ValueError("a tensor element needs at least one leg")
        clean: Dict[Key, complex] = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if tuple(m.arity for m in key) != self.arities:
                raise ValueError(f"term {key!r} does not match arities {self.arities}")
            clean[key] = clean.get(key, 0) + complex(c)
        self.terms = {k: c for k, c in clean.items() if abs(c) > TOL}
        self._is_canonical = _canonical

    @classmethod
    def identity(cls, arities) -> "TensorElement":
        arities = tuple(arities)
        return cls(arities, {tuple(Monomial(a) for a in arities): 1.0})

    @classmethod
    def simple(cls, *factors: AlgebraElement) -> "TensorElement":
        """``a (x) b (x) ...`` for algebra elements."""
        terms: Dict[Key, complex] = {}
        for combo in product(*(f.terms.items() for f in factors)):
            key = tuple(m for m, _ in combo)
            c = np.prod([c for _, c in combo])
            terms[key] = terms.get(key, 0) + c
        return cls(tuple(f.arity for f in factors), terms)

    def _check(self, other):
        if not isinstance(other, TensorElement):
            raise TypeError(f"expected TensorElement, got {type(other).__name__}")
        if other.arities != self.arities:
            raise ValueError(f"arity mismatch: {self.arities} vs {other.arities}")

    def __add__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TensorElement(self.arities, out)

    def __neg__(self):
        return TensorElement(self.arities, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return TensorElement(self.arities, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, TensorElement):
            return NotImplemented
        self._check(other)
        out: Dict[Key, complex] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                legs = [_monomial_product(a, b) for a, b in zip(ka, kb)]
                if any(m is None for m in legs):
                    continue
                key = tuple(legs)
                out[key] = out.get(key, 0) + ca * cb
        return TensorElement(self.arities, out).canonical()

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TensorElement) or other.arities != self.arities:
            return NotImplemented
        return not (self - other).canonical().terms

    __hash__ = None

    def adjoint(self) -> "TensorElement":
        return TensorElement(
            self.arities,
            {tuple(m.adjoint() for m in k): c.conjugate() for k, c in self.terms.items()},
        )

    def canonical(self) -> "TensorElement":
        """Canonical form, collapsing the completeness relation on every leg."""
        if self._is_canonical:
            return self
        if len(self.arities) == 1:
            alg = canonical_form(AlgebraElement(self.arities[0], {k[0]: c for k, c in self.terms.items()}))
            return TensorElement(self.arities, {(m,): c for m, c in alg.terms.items()}, _canonical=True)
        rest = self.arities[1:]
        grouped: Dict[Monomial, Dict[Key, complex]] = {}
        for key, c in self.terms.items():
            sub = grouped.setdefault(key[0], {})
            sub[key[1:]] = sub.get(key[1:], 0) + c
        values = {m: TensorElement(rest, sub).canonical() for m, sub in grouped.items()}
        zero = TensorElement(rest, {}, _canonical=True)
        collapsed = collapse_terms(
            self.arities[0],
            values,
            zero,
            lambda x, y: (x + y).canonical(),
            lambda x: not x.terms,
            lambda x, y: not (x - y).canonical().terms,
        )
        out = {}
        for m, val in collapsed.items():
            for k, c in val.terms.items():
                out[(m,) + k] = c
        return TensorElement(self.arities, out, _canonical=True)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def __repr__(self):
        if not self.terms:
            return f"0 (arities {self.arities})"
        return " + ".join(
            f"({c:.6g})·" + " ⊗ ".join(repr(m) for m in k) for k, c in self.terms.items()
        )


@dataclass
class DirectSumElement:
    """Finitely supported element ``(x_n)`` of the direct sum ``O_*``."""

    components: Dict[int, AlgebraElement] = field(default_factory=dict)

    def __post_init__(self):
        for n, x in self.components.items():
            if x.arity != n:
                raise ValueError(f"component {n} has arity {x.arity}")


@dataclass
class CoproductValue:
    """Blocks ``phi_{m,l}(x)`` of the coproduct of an element of O_n, keyed by ``(m, l)``."""

    source_arity: int
    blocks: Dict[Tuple[int, int], TensorElement]


def divisor_pairs(n: int) -> List[Tuple[int, int]]:
    """All ordered factorisations ``(m, l)`` with ``m * l == n``, sorted by ``m``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    small = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
        d += 1
    divs = sorted(set(small) | {n // d for d in small})
    return [(m, n // m) for m in divs]


def split_letter(k: int, m: int) -> Tuple[int, int]:
    """Write ``k = m(i-1) + j`` with ``1 <= j <= m``."""
    return (k - 1) // m + 1, (k - 1) % m + 1


def _split_word(w: Word, m: int) -> Tuple[Word, Word]:
    pairs = [split_letter(k, m) for k in w]
    return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


def _phi_monomial(n: int, m: int, mono: Monomial) -> Tuple[Monomial, Monomial]:
    mu_l, mu_r = _split_word(mono.mu, m)
    nu_l, nu_r = _split_word(mono.nu, m)
    left = Monomial(n) if n == 1 else Monomial(n, mu_l, nu_l)
    right = Monomial(m) if m == 1 else Monomial(m, mu_r, nu_r)
    return left, right


def phi(n: int, m: int, x: AlgebraElement) -> TensorElement:
    """The embedding ``phi_{n,m}`` of O_{nm} into O_n (x) O_m."""
    if x.arity != n * m:
        raise ValueError(f"phi_{{{n},{m}}} needs arity {n * m}, got {x.arity}")
    terms: Dict[Key, complex] = {}
    for mono, c in x.terms.items():
        key = _phi_monomial(n, m, mono)
        terms[key] = terms.get(key, 0) + c
    return TensorElement((n, m), terms)


def coproduct(x: DirectSumElement | AlgebraElement) -> Dict[int, CoproductValue]:
    if isinstance(x, AlgebraElement):
        x = DirectSumElement({x.arity: x})
    out = {}
    for n, xn in sorted(x.components.items()):
        out[n] = CoproductValue(n, {(m, l): phi(m, l, xn) for m, l in divisor_pairs(n)})
    return out


def apply_leg(t: TensorElement, leg: int, f: Callable[[Monomial], TensorElement]) -> TensorElement:
    """Replace leg ``leg`` by the legs of ``f(monomial)`` (linear extension)."""
    arities = None
    terms: Dict[Key, complex] = {}
    for key, c in t.terms.items():
        image = f(key[leg])
        new_ar = t.arities[:leg] + image.arities + t.arities[leg + 1:]
        if arities is None:
            arities = new_ar
        for ikey, ic in image.terms.items():
            k = key[:leg] + ikey + key[leg + 1:]
            terms[k] = terms.get(k, 0) + c * ic
    if arities is None:
        return TensorElement(t.arities, {})
    return TensorElement(arities, terms)


def swap_legs(t: TensorElement, i: int, j: int) -> TensorElement:
    """Exchange two legs (the flip ``tau``)."""
    perm = list(range(len(t.arities)))
    perm[i], perm[j] = perm[j], perm[i]
    return TensorElement(
        tuple(t.arities[p] for p in perm),
        {tuple(k[p] for p in perm): c for k, c in t.terms.items()},
    )


def check_coassociativity(a: int, b: int, c: int, x: AlgebraElement) -> float:
    """Largest canonical coefficient of ``(id (x) phi_{b,c}) phi_{a,bc}(x) - (phi_{a,b} (x) id) phi_{ab,c}(x)``."""
    if x.arity != a * b * c:
        raise ValueError(f"need arity {a * b * c}, got {x.arity}")
    lhs = apply_leg(phi(a, b * c, x), 1, lambda mono: phi(b, c, AlgebraElement(b * c, {mono: 1.0})))
    rhs = apply_leg(phi(a * b, c, x), 0, lambda mono: phi(a, b, AlgebraElement(a * b, {mono: 1.0})))
    return (lhs - rhs).canonical().max_abs_coefficient()


def check_unitary(g, tol: float = 1e-10) -> np.ndarray:
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("unitary must be a square matrix")
    if np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0])), initial=0.0) > tol:
        raise ValueError("matrix is not unitary")
    return g


def _word_images(g: np.ndarray, w: Word) -> np.ndarray:
    # coefficient of s_alpha in s_{w1}...s_{wk} under alpha_g, alpha in lex order
    vec = np.ones(1, dtype=complex)
    for letter in w:
        vec = np.kron(vec, g[:, letter - 1])
    return vec


def alpha(g, x: AlgebraElement) -> AlgebraElement:
    """Canonical U(n)-action ``s_i -> sum_j g_ji s_j``, extended as a *-homomorphism."""
    g = check_unitary(g)
    n = x.arity
    if g.shape[0] != n:
        raise ValueError(f"unitary of size {g.shape[0]} acting on O_{n}")
    out: Dict[Monomial, complex] = {}
    for mono, c in x.terms.items():
        cmu = _word_images(g, mono.mu)
        cnu = _word_images(g, mono.nu).conj()
        words_mu = list(product(range(1, n + 1), repeat=len(mono.mu)))
        words_nu = list(product(range(1, n + 1), repeat=len(mono.nu)))
        for a, wa in enumerate(words_mu):
            if cmu[a] == 0:
                continue
            for b, wb in enumerate(words_nu):
                coeff = c * cmu[a] * cnu[b]
                if coeff != 0:
                    key = Monomial(n, wa, wb)
                    out[key] = out.get(key, 0) + coeff
    return AlgebraElement(n, out)


def box_unitary(g, h) -> np.ndarray:
    """``(g [x] h)_{m(i-1)+j, m(i'-1)+j'} = g_ii' h_jj'``, i.e. the Kronecker product."""
    return np.kron(np.asarray(g, dtype=complex), np.asarray(h, dtype=complex))


def counit_e(x: AlgebraElement) -> complex:
    """Counit of O_1 = C."""
    if x.arity != 1:
        raise ValueError("the counit is defined on the arity-1 component only")
    return complex(sum(x.terms.values()))
