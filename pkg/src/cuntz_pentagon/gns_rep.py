"""Truncated GNS representations of the GP states.

The GNS space of ``rho_eta`` (``eta = (1, 0, ..., 0)``) is realised on
ell^2 over words whose last letter is not 1, the word ``mu`` standing for
``s_mu Omega`` with trailing 1s removed (``s_1 Omega = Omega``).  A general
unit vector ``z`` is handled by twisting with a unitary ``g`` such that
``g z = eta``: ``pi_z = pi_eta o alpha_g``.  Every space is cut at word
length ``L``; creation operators drop anything that would leave the cutoff.

Basis order is graded, lexicographic inside a length.  With 0-based digits,
a word of length ``l >= 1`` sits at index
``n^(l-1) + (d_1 ... d_{l-1})_n * (n-1) + d_l - 1``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import List, Sequence

import numpy as np
import scipy.sparse as sp

from .bialgebra import check_unitary
from .states import unit_vector
from .word_algebra import AlgebraElement, Monomial, Word

__all__ = [
    "TruncatedSpace",
    "build_space",
    "generator_ops",
    "choose_unitary",
    "Representation",
    "represent",
    "safe_indices",
    "gns_gram_residual",
    "second_quantization",
    "truncated_dimension",
]


def truncated_dimension(n: int, L: int) -> int:
    if n == 1:
        return 1
    return n ** L


class TruncatedSpace:
    """Words over ``1..n`` of length ``<= L`` not ending in 1."""

    def __init__(self, n: int, L: int):
        if n < 1 or L < 0:
            raise ValueError("need n >= 1 and L >= 0")
        self.n = n
        self.L = L
        self.dim = truncated_dimension(n, L)
        lengths = [np.zeros(1, dtype=np.int64)]
        digits = [np.zeros((1, L), dtype=np.int64)]
        if n > 1:
            for ell in range(1, L + 1):
                count = n ** (ell - 1) * (n - 1)
                idx = np.arange(count)
                block = np.zeros((count, L), dtype=np.int64)
                block[:, ell - 1] = idx % (n - 1) + 1
                prefix = idx // (n - 1)
                for pos in range(ell - 2, -1, -1):
                    block[:, pos] = prefix % n
                    prefix //= n
                digits.append(block)
                lengths.append(np.full(count, ell, dtype=np.int64))
        self.digits = np.concatenate(digits)
        self.lengths = np.concatenate(lengths)
        self.digits.flags.writeable = False
        self.lengths.flags.writeable = False

    def __repr__(self):
        return f"TruncatedSpace(n={self.n}, L={self.L}, dim={self.dim})"

    def word(self, index: int) -> Word:
        ell = int(self.lengths[index])
        return tuple(int(d) + 1 for d in self.digits[index, :ell])

    @property
    def words(self) -> List[Word]:
        return [self.word(i) for i in range(self.dim)]

    def index(self, word: Sequence[int]) -> int:
        """Index of the basis vector ``s_word Omega``; trailing 1s are stripped first."""
        w = [int(c) for c in word]
        if any(not 1 <= c <= self.n for c in w):
            raise ValueError(f"word {word!r} is not over 1..{self.n}")
        while w and w[-1] == 1:
            w.pop()
        if len(w) > self.L:
            raise KeyError(f"word {tuple(word)!r} exceeds the cutoff L={self.L}")
        d = np.zeros((1, self.L), dtype=np.int64)
        d[0, : len(w)] = np.array(w, dtype=np.int64) - 1
        return int(self.index_array(d, np.array([len(w)]))[0])

    def index_array(self, digits: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        """Vectorised index of stripped words (0-based digits, last digit nonzero)."""
        n = self.n
        lengths = np.asarray(lengths, dtype=np.int64)
        out = np.zeros(len(lengths), dtype=np.int64)
        if n == 1:
            return out
        nz = lengths > 0
        if not np.any(nz):
            return out
        dg = np.asarray(digits, dtype=np.int64)[nz]
        ln = lengths[nz]
        rows = np.arange(len(ln))
        last = dg[rows, ln - 1]
        prefix = np.zeros(len(ln), dtype=np.int64)
        for pos in range(dg.shape[1]):
            active = pos < ln - 1
            prefix = np.where(active, prefix * n + dg[:, pos], prefix)
        out[nz] = n ** (ln - 1) + prefix * (n - 1) + last - 1
        return out

    def safe_mask(self, degree: int) -> np.ndarray:
        """Basis vectors on which operators of creation degree ``degree`` are exact."""
        return self.lengths <= self.L - degree


@lru_cache(maxsize=64)
def build_space(n: int, L: int) -> TruncatedSpace:
    return TruncatedSpace(n, L)


def strip_trailing(digits: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """New lengths after removing trailing zero digits (letter 1)."""
    lengths = np.asarray(lengths, dtype=np.int64)
    out = np.zeros_like(lengths)
    for pos in range(digits.shape[1]):
        hit = (pos < lengths) & (digits[:, pos] != 0)
        out = np.where(hit, pos + 1, out)
    return out


@lru_cache(maxsize=64)
def _generators(n: int, L: int):
    space = build_space(n, L)
    if n == 1:
        eye = sp.identity(1, dtype=complex, format="csr")
        return (eye,)
    ops = []
    ell = space.lengths
    for i in range(1, n + 1):
        if i == 1:
            target = np.where(ell == 0, 0, -1)
        else:
            target = np.where(ell == 0, i - 1, -1)
        grow = (ell >= 1) & (ell < L)
        src = np.nonzero(grow)[0]
        target[src] = src + i * (n - 1) * n ** (ell[src] - 1)
        cols = np.nonzero(target >= 0)[0]
        rows = target[cols]
        m = sp.csr_matrix(
            (np.ones(len(cols), dtype=complex), (rows, cols)), shape=(space.dim, space.dim)
        )
        ops.append(m)
    return tuple(ops)


def generator_ops(space: TruncatedSpace) -> List[sp.csr_matrix]:
    """The permutative isometries ``S_i`` (prepend letter i) on the truncated space."""
    return list(_generators(space.n, space.L))


def choose_unitary(z) -> np.ndarray:
    """Deterministic ``g`` in U(n) with ``g z = eta`` (first row ``conj(z)``).

    A complex Householder reflection sends ``z`` to ``e^{i theta} eta``
    (``theta = arg z_1``); a phase on the first row removes ``e^{i theta}``.
    """
    z = unit_vector(z)
    n = z.size
    theta = np.angle(z[0]) if abs(z[0]) > 0 else 0.0
    phase = np.exp(1j * theta)
    tail = float(np.sum(np.abs(z[1:]) ** 2))
    w = z.copy()
    # |z_1| - 1 written without cancellation
    w[0] = -tail / (abs(z[0]) + 1) * phase
    norm2 = float(np.vdot(w, w).real)
    h = np.eye(n, dtype=complex)
    if norm2 > 0:
        h -= 2 * np.outer(w, w.conj()) / norm2
    h[0, :] *= np.conj(phase)
    return h


def safe_indices(space: TruncatedSpace, degree: int) -> np.ndarray:
    return np.nonzero(space.safe_mask(degree))[0]


class Representation:
    """``pi = pi_eta o alpha_g`` on a truncated space.

    ``g`` defaults to :func:`choose_unitary` of ``z``; any unitary with
    ``g z = eta`` realises the GNS representation of ``rho_z``.
    """

    def __init__(self, space: TruncatedSpace, z=None, g=None):
        self.space = space
        n = space.n
        if g is None:
            if z is None:
                raise ValueError("need a unit vector z or a unitary g")
            z = unit_vector(z)
            if z.size != n:
                raise ValueError(f"unit vector in C^{z.size} for a space of arity {n}")
            g = choose_unitary(z)
        g = check_unitary(g)
        if g.shape[0] != n:
            raise ValueError(f"unitary of size {g.shape[0]} for a space of arity {n}")
        if z is not None:
            z = unit_vector(z)
            if np.linalg.norm(g @ z - np.eye(n)[0]) > 1e-10:
                raise ValueError("g does not send z to eta")
        self.g = g
        self.z = z if z is not None else g.conj()[0]
        base = generator_ops(space)
        # pi(s_i) = sum_k g_ki S_k
        self.gens = [
            sum((g[k, i] * base[k] for k in range(n) if g[k, i] != 0),
                sp.csr_matrix((space.dim, space.dim), dtype=complex)).tocsr()
            for i in range(n)
        ]
        self.adjs = [t.conj().T.tocsr() for t in self.gens]

    def monomial(self, mono: Monomial) -> sp.csr_matrix:
        out = sp.identity(self.space.dim, dtype=complex, format="csr")
        for i in mono.mu:
            out = out @ self.gens[i - 1]
        for k in reversed(mono.nu):
            out = out @ self.adjs[k - 1]
        return out.tocsr()

    def __call__(self, x: AlgebraElement) -> sp.csr_matrix:
        if x.arity != self.space.n:
            raise ValueError(f"element of O_{x.arity} on a space of arity {self.space.n}")
        out = sp.csr_matrix((self.space.dim, self.space.dim), dtype=complex)
        for mono, c in x.terms.items():
            out = out + c * self.monomial(mono)
        return out.tocsr()

    def apply(self, x: AlgebraElement, vecs):
        """``pi(x) @ vecs`` without forming ``pi(x)``; ``vecs`` may be sparse or dense."""
        if x.arity != self.space.n:
            raise ValueError(f"element of O_{x.arity} on a space of arity {self.space.n}")
        total = None
        for mono, c in x.terms.items():
            v = vecs
            for k in mono.nu:
                v = self.adjs[k - 1] @ v
            for i in reversed(mono.mu):
                v = self.gens[i - 1] @ v
            total = c * v if total is None else total + c * v
        if total is None:
            total = 0 * vecs
        return total


def represent(z, space: TruncatedSpace, x: AlgebraElement, g=None) -> sp.csr_matrix:
    """Sparse matrix of ``pi_z(x)`` on ``space``."""
    return Representation(space, z=z, g=g)(x)


def gns_gram_residual(rep: Representation, max_len: int) -> float:
    """``max |<Omega, pi(s_mu s_nu^*) Omega> - rho_z(s_mu s_nu^*)|`` over ``|mu|, |nu| <= max_len``.

    Uses ``<Omega, pi(s_mu) pi(s_nu)^* Omega> = <v_mu, v_nu>`` with
    ``v_w = pi(s_w)^* Omega`` built letter by letter.
    """
    n = rep.space.n
    omega = np.zeros(rep.space.dim, dtype=complex)
    omega[0] = 1
    words = [()]
    vecs = [sp.csc_matrix(omega.reshape(-1, 1))]
    frontier = [((), vecs[0])]
    for _ in range(max_len):
        nxt = []
        for w, v in frontier:
            for i in range(1, n + 1):
                # s_{w i}^* = s_i^* s_w^*
                nv = rep.adjs[i - 1] @ v
                nxt.append((w + (i,), nv))
        words.extend(w for w, _ in nxt)
        vecs.extend(v for _, v in nxt)
        frontier = nxt
    mat = sp.hstack(vecs).tocsc()
    gram = (mat.conj().T @ mat).toarray()
    z = rep.z
    amp = np.array([np.prod(z[np.array(w, dtype=int) - 1]) if w else 1.0 for w in words])
    expected = np.outer(amp.conj(), amp)
    return float(np.max(np.abs(gram - expected)))


MAX_GAMMA_NNZ = 30_000_000


@lru_cache(maxsize=32)
def _kron_power_cached(key, ell):
    u = np.array(key[1]).reshape(key[0], key[0])
    out = sp.csr_matrix(np.ones((1, 1), dtype=complex))
    su = sp.csr_matrix(u)
    for _ in range(ell):
        out = sp.kron(out, su, format="csr")
    return out


def second_quantization(space: TruncatedSpace, u) -> sp.csr_matrix:
    """Unitary ``Gamma`` with ``Gamma s_w Omega = pi_eta(alpha_u(s_w)) Omega``.

    ``u`` must fix ``eta``; then letters 1 stay 1, so ``Gamma`` keeps word
    lengths and acts as ``u^(x l)`` on the length-``l`` block.
    """
    u = check_unitary(u)
    n = space.n
    if u.shape[0] != n:
        raise ValueError("size mismatch")
    e = np.eye(n)[0]
    if np.linalg.norm(u @ e - e) > 1e-10:
        raise ValueError("u must fix eta")
    if n == 1:
        return sp.identity(1, dtype=complex, format="csr")
    nnz_u = int(np.count_nonzero(np.abs(u) > 0))
    estimate = sum(nnz_u ** ell for ell in range(space.L + 1))
    if estimate > MAX_GAMMA_NNZ:
        raise ValueError(
            f"second quantisation at n={n}, L={space.L} would hold ~{estimate:.2e} entries; "
            "use the product realisation or a smaller cutoff"
        )
    u = u.copy()
    u[0, 1:] = 0
    u[1:, 0] = 0
    u[0, 0] = 1
    blocks = [sp.identity(1, dtype=complex, format="csr")]
    for ell in range(1, space.L + 1):
        full = _kron_power_cached((n, tuple(u.ravel().tolist())), ell)
        # all words of length ell in lex order, keep those ending in a letter != 1
        keep = np.nonzero(np.arange(n ** ell) % n != 0)[0]
        blocks.append(full[keep][:, keep])
    return sp.block_diag(blocks, format="csr")


def all_words(n: int, max_len: int):
    return [w for k in range(max_len + 1) for w in itertools.product(range(1, n + 1), repeat=k)]
