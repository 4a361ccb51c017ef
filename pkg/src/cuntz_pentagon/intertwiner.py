"""The partial isometries ``W^(n,m) = U V^*`` and their verification.

``U: H_{nm} -> H_n (x) H_m`` sends ``pi_{nm}(x) Omega`` to
``(pi_n (x)_phi pi_m)(x) (Omega (x) Omega)``.  In the word realisation it
splits every letter ``k = m(i-1) + j`` of a basis word into the pair of
words ``(i..., j...)`` and strips trailing 1s on both sides; when the
product space is realised with a unitary other than ``g_n [x] g_m`` a
second-quantised correction is composed on the right.
``V: H_{nm} -> H_{nm} (x) H_m`` is ``v -> v (x) Omega_m``.

Tensor products of truncated spaces use Kronecker ordering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .bialgebra import box_unitary, divisor_pairs, phi
from .gns_rep import (
    Representation,
    build_space,
    choose_unitary,
    second_quantization,
    strip_trailing,
    TruncatedSpace,
)
from .states import VectorSequence, parse_family
from .word_algebra import AlgebraElement

__all__ = [
    "TensorSpace",
    "LegOperator",
    "build_U",
    "build_V",
    "build_W",
    "realization_unitaries",
    "tensor_rep_apply",
    "partial_isometry_residual",
    "check_coisometry",
    "check_covariance",
    "check_U_defining_property",
    "pentagon_matrices",
    "check_pentagon",
    "total_length_basis",
    "DirectSumAssembly",
    "assemble_direct_sum",
    "check_direct_sum_covariance",
    "REALIZATIONS",
]

REALIZATIONS = ("product", "canonical")


class TensorSpace:
    """Ordered tensor product of truncated spaces (Kronecker ordering)."""

    def __init__(self, factors: Sequence[TruncatedSpace]):
        self.factors = tuple(factors)
        self.dims = tuple(f.dim for f in self.factors)
        self.dim = int(np.prod(self.dims, dtype=np.int64))

    def index(self, *indices) -> int:
        return int(np.ravel_multi_index(indices, self.dims))

    def unravel(self, index):
        return np.unravel_index(index, self.dims)

    def __repr__(self):
        return f"TensorSpace({', '.join(f'H_{f.n}' for f in self.factors)}; L={[f.L for f in self.factors]}, dim={self.dim})"


def build_U(n: int, m: int, L: int, correction=None) -> sp.csr_matrix:
    """``U: H_{nm} -> H_n (x) H_m`` on words of length ``<= L``.

    ``correction`` is the unitary ``u = g_{nm} (g_n [x] g_m)^*`` relating the
    realisation of ``H_{nm}`` to the product one; ``None`` means ``u = I``.
    """
    src = build_space(n * m, L)
    left_space, right_space = build_space(n, L), build_space(m, L)
    dg, ln = src.digits, src.lengths
    left_d, right_d = dg // m, dg % m
    left_len = strip_trailing(left_d, ln)
    right_len = strip_trailing(right_d, ln)
    rows = left_space.index_array(left_d, left_len) * right_space.dim + right_space.index_array(right_d, right_len)
    cols = np.arange(src.dim)
    u_mat = sp.csr_matrix(
        (np.ones(src.dim, dtype=complex), (rows, cols)), shape=(left_space.dim * right_space.dim, src.dim)
    )
    if correction is not None:
        gamma = second_quantization(src, correction)
        u_mat = (u_mat @ gamma.conj().T).tocsr()
    return u_mat


def build_V(nm: int, m: int, L: int) -> sp.csr_matrix:
    """``V v = v (x) Omega_m`` from ``H_{nm}`` into ``H_{nm} (x) H_m``."""
    src, right = build_space(nm, L), build_space(m, L)
    cols = np.arange(src.dim)
    return sp.csr_matrix(
        (np.ones(src.dim, dtype=complex), (cols * right.dim, cols)), shape=(src.dim * right.dim, src.dim)
    )


def build_W(n: int, m: int, L: int, correction=None) -> sp.csr_matrix:
    """``W^(n,m) = U V^*`` from ``H_{nm} (x) H_m`` to ``H_n (x) H_m``."""
    u_mat = build_U(n, m, L, correction).tocsc()
    v_adj = build_V(n * m, m, L).conj().T.tocoo()
    # V^* has at most one entry per column, so column c of U V^* is v * U[:, r]
    picked = (u_mat[:, v_adj.row] @ sp.diags(v_adj.data)).tocoo()
    return sp.csr_matrix(
        (picked.data, (picked.row, v_adj.col[picked.col])), shape=(u_mat.shape[0], v_adj.shape[1])
    )


def realization_unitaries(seq: VectorSequence | str, n: int, m: int, realization: str = "product"):
    """Unitaries ``(g_n, g_m, g_nm, correction)`` realising the three GNS spaces.

    ``product`` realises ``H_{nm}`` with ``g_n [x] g_m`` (no correction);
    ``canonical`` uses :func:`choose_unitary` of ``z^(nm)`` for every arity.
    """
    if realization not in REALIZATIONS:
        raise ValueError(f"unknown realization {realization!r}")
    seq = parse_family(seq)
    g_n, g_m = choose_unitary(seq(n)), choose_unitary(seq(m))
    prod = box_unitary(g_n, g_m)
    if realization == "product":
        return g_n, g_m, prod, None
    g_nm = choose_unitary(seq(n * m))
    return g_n, g_m, g_nm, g_nm @ prod.conj().T


def tensor_rep_apply(rep_n: Representation, rep_m: Representation, x: AlgebraElement, vecs):
    """``(pi_n (x)_phi pi_m)(x) @ vecs`` on ``H_n (x) H_m``."""
    n, m = rep_n.space.n, rep_m.space.n
    t = phi(n, m, x)
    eye_n = sp.identity(rep_n.space.dim, dtype=complex, format="csr")
    eye_m = sp.identity(rep_m.space.dim, dtype=complex, format="csr")
    total = None
    for (a, b), c in t.terms.items():
        v = sp.kron(eye_n, rep_m.monomial(b), format="csr") @ vecs
        v = sp.kron(rep_n.monomial(a), eye_m, format="csr") @ v
        total = c * v if total is None else total + c * v
    if total is None:
        total = 0 * vecs
    return total


def _max_abs(mat) -> float:
    if sp.issparse(mat):
        mat = mat.tocoo()
        return float(np.max(np.abs(mat.data), initial=0.0))
    return float(np.max(np.abs(mat), initial=0.0))


def partial_isometry_residual(w) -> float:
    """``|| W W^* W - W ||_max``."""
    w = sp.csr_matrix(w)
    return _max_abs(w @ (w.conj().T @ w) - w)


def check_coisometry(n: int, m: int, L: int, correction=None) -> float:
    """``|| W W^* - I ||_max`` on ``(H_n (x) H_m)^{<= L}``."""
    w = build_W(n, m, L, correction)
    return _max_abs(w @ w.conj().T - sp.identity(w.shape[0], dtype=complex, format="csr"))


def _column_norms(mat) -> np.ndarray:
    if sp.issparse(mat):
        sq = mat.multiply(mat.conj()).real
        return np.sqrt(np.asarray(sq.sum(axis=0)).ravel())
    return np.linalg.norm(mat, axis=0)


def check_U_defining_property(n: int, m: int, L: int, family, x: AlgebraElement,
                              realization: str = "product") -> float:
    """``|| U pi_{nm}(x) Omega - (pi_n (x)_phi pi_m)(x)(Omega (x) Omega) ||`` (requires ``deg x <= L``)."""
    seq = parse_family(family)
    g_n, g_m, g_nm, corr = realization_unitaries(seq, n, m, realization)
    rep_nm = Representation(build_space(n * m, L), z=seq(n * m), g=g_nm)
    rep_n = Representation(build_space(n, L), z=seq(n), g=g_n)
    rep_m = Representation(build_space(m, L), z=seq(m), g=g_m)
    u_mat = build_U(n, m, L, corr)
    omega_nm = sp.csc_matrix(([1.0 + 0j], ([0], [0])), shape=(rep_nm.space.dim, 1))
    omega_t = sp.csc_matrix(([1.0 + 0j], ([0], [0])), shape=(u_mat.shape[0], 1))
    lhs = u_mat @ rep_nm.apply(x, omega_nm)
    rhs = tensor_rep_apply(rep_n, rep_m, x, omega_t)
    return float(np.max(_column_norms(lhs - rhs), initial=0.0))


@lru_cache(maxsize=8)
def _covariance_setup(n: int, m: int, L: int, family_id: str, realization: str):
    seq = parse_family(family_id)
    g_n, g_m, g_nm, corr = realization_unitaries(seq, n, m, realization)
    rep_nm = Representation(build_space(n * m, L), z=seq(n * m), g=g_nm)
    rep_n = Representation(build_space(n, L), z=seq(n), g=g_n)
    rep_m = Representation(build_space(m, L), z=seq(m), g=g_m)
    w = build_W(n, m, L, corr).tocoo()
    dim_m = rep_m.space.dim
    # W restricted to the columns xi (x) u, one block per u that W does not kill
    blocks = []
    for u in np.unique(w.col % dim_m):
        keep = w.col % dim_m == u
        blocks.append(sp.csc_matrix(
            (w.data[keep], (w.row[keep], w.col[keep] // dim_m)), shape=(w.shape[0], rep_nm.space.dim)
        ))
    return rep_nm, rep_n, rep_m, blocks


def check_covariance(n: int, m: int, L: int, family, x: AlgebraElement,
                     realization: str = "product") -> float:
    """Largest ``|| W (pi_{nm}(x) (x) I) v - (pi_n (x)_phi pi_m)(x) W v ||`` over safe basis vectors.

    Safe vectors are ``xi (x) u`` with ``|xi| <= L - deg(x)`` and ``u`` any
    basis vector of ``H_m``. Blocks of columns on which W vanishes contribute
    zero to both sides and are skipped.
    """
    if x.arity != n * m:
        raise ValueError(f"need an element of O_{n * m}")
    if realization not in REALIZATIONS:
        raise ValueError(f"unknown realization {realization!r}")
    rep_nm, rep_n, rep_m, blocks = _covariance_setup(n, m, L, parse_family(family).id, realization)
    space_nm = rep_nm.space
    safe = np.nonzero(space_nm.safe_mask(x.creation_degree()))[0]
    if len(safe) == 0:
        return 0.0
    probe = sp.csc_matrix(
        (np.ones(len(safe), dtype=complex), (safe, np.arange(len(safe)))), shape=(space_nm.dim, len(safe))
    )
    pi_x = rep_nm.apply(x, probe).tocsc()
    worst = 0.0
    for w_u in blocks:
        lhs = w_u @ pi_x
        rhs = tensor_rep_apply(rep_n, rep_m, x, w_u @ probe)
        diff = sp.csc_matrix(lhs - rhs)
        if diff.nnz:
            worst = max(worst, float(np.max(_column_norms(diff))))
    return worst


# --- pentagon -------------------------------------------------------------


class LegOperator:
    """A sparse operator acting on two legs of a tensor product by index arithmetic."""

    def __init__(self, mat, in_dims: Tuple[int, int], out_dims: Tuple[int, int], legs: Tuple[int, int]):
        coo = sp.coo_matrix(mat)
        order = np.argsort(coo.col, kind="stable")
        self.cols = coo.col[order].astype(np.int64)
        self.rows = coo.row[order].astype(np.int64)
        self.vals = coo.data[order]
        self.in_dims = in_dims
        self.out_dims = out_dims
        self.legs = legs

    def apply(self, vid: np.ndarray, idx: np.ndarray, val: np.ndarray):
        """Apply to a batch of vectors stored as coordinate triples ``(vector id, multi-index, value)``."""
        p, q = self.legs
        col = idx[:, p] * self.in_dims[1] + idx[:, q]
        lo = np.searchsorted(self.cols, col, side="left")
        hi = np.searchsorted(self.cols, col, side="right")
        counts = hi - lo
        src = np.repeat(np.arange(len(col)), counts)
        starts = np.cumsum(counts) - counts
        pos = np.repeat(lo, counts) + np.arange(counts.sum()) - np.repeat(starts, counts)
        rows = self.rows[pos]
        new_idx = idx[src].copy()
        new_idx[:, p] = rows // self.out_dims[1]
        new_idx[:, q] = rows % self.out_dims[1]
        return vid[src], new_idx, val[src] * self.vals[pos]


def _merge(vid, idx, val):
    if len(vid) == 0:
        return vid, idx, val
    keys = np.column_stack([vid, idx])
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=complex)
    np.add.at(acc, inv.ravel(), val)
    return uniq[:, 0], uniq[:, 1:], acc


def total_length_basis(spaces: Sequence[TruncatedSpace], L: int) -> np.ndarray:
    """Multi-indices of basis tuples whose word lengths sum to at most ``L``."""
    out = [np.zeros((1, 0), dtype=np.int64)]
    tot = [np.zeros(1, dtype=np.int64)]
    for s in spaces:
        new_out, new_tot = [], []
        for prefix, t in zip(out, tot):
            for ell in range(0, L + 1):
                sel = np.nonzero(s.lengths == ell)[0]
                if len(sel) == 0:
                    continue
                ok = np.nonzero(t + ell <= L)[0]
                if len(ok) == 0:
                    continue
                rep_prefix = np.repeat(prefix[ok], len(sel), axis=0)
                rep_sel = np.tile(sel, len(ok))
                new_out.append(np.column_stack([rep_prefix, rep_sel]))
                new_tot.append(np.repeat(t[ok] + ell, len(sel)))
        out, tot = new_out, new_tot
    return np.concatenate(out)


def _pentagon_blocks(n: int, m: int, l: int, L: int, family=None, realization: str = "product"):
    corr = {}
    if family is not None and realization == "canonical":
        for a, b in [(n, m), (n * m, l), (m, l), (n, m * l)]:
            corr[(a, b)] = realization_unitaries(family, a, b, "canonical")[3]
    return {key: build_W(*key, L, corr.get(key)) for key in [(n, m), (n * m, l), (m, l), (n, m * l)]}


def check_pentagon(n: int, m: int, l: int, L: int, family=None, realization: str = "product",
                   chunk: int = 200_000) -> float:
    """Largest discrepancy of ``W12 W13 W23 = W23 W12`` over basis vectors of ``H_{nml} (x) H_{ml} (x) H_l``.

    The inputs are all basis tuples whose word lengths sum to at most ``L``;
    intermediate vectors are kept exactly (each leg stays within the
    per-factor cutoff ``L``, which every ``W`` preserves).

    With the product realisation every ``W`` is a 0/1 partial permutation and
    the work is linear in the basis size.  The canonical realisation mixes
    words through the second-quantised correction, so images become dense;
    keep ``L <= 3`` there.
    """
    if min(n, m, l) < 1:
        raise ValueError("n, m, l must be positive")
    w = _pentagon_blocks(n, m, l, L, family, realization)
    d = {a: build_space(a, L).dim for a in {n, m, l, n * m, m * l, n * m * l}}
    w23 = LegOperator(w[(m, l)], (d[m * l], d[l]), (d[m], d[l]), (1, 2))
    w13 = LegOperator(w[(n * m, l)], (d[n * m * l], d[l]), (d[n * m], d[l]), (0, 2))
    w12 = LegOperator(w[(n, m)], (d[n * m], d[m]), (d[n], d[m]), (0, 1))
    w12_big = LegOperator(w[(n, m * l)], (d[n * m * l], d[m * l]), (d[n], d[m * l]), (0, 1))
    basis = total_length_basis([build_space(n * m * l, L), build_space(m * l, L), build_space(l, L)], L)
    worst = 0.0
    for start in range(0, len(basis), chunk):
        idx = basis[start:start + chunk]
        vid = np.arange(start, start + len(idx), dtype=np.int64)
        val = np.ones(len(idx), dtype=complex)
        lhs = w12.apply(*w13.apply(*w23.apply(vid, idx, val)))
        rhs = w23.apply(*w12_big.apply(vid, idx, val))
        diff = _merge(
            np.concatenate([lhs[0], rhs[0]]),
            np.concatenate([lhs[1], rhs[1]]),
            np.concatenate([lhs[2], -rhs[2]]),
        )
        if len(diff[2]):
            worst = max(worst, float(np.max(np.abs(diff[2]))))
    return worst


def _swap23(d1: int, d2: int, d3: int) -> sp.csr_matrix:
    """Permutation ``e_a (x) e_b (x) e_c -> e_a (x) e_c (x) e_b``."""
    a, b, c = np.meshgrid(np.arange(d1), np.arange(d2), np.arange(d3), indexing="ij")
    src = (a * d2 * d3 + b * d3 + c).ravel()
    dst = (a * d3 * d2 + c * d2 + b).ravel()
    n = d1 * d2 * d3
    return sp.csr_matrix((np.ones(n), (dst, src)), shape=(n, n))


def pentagon_matrices(n: int, m: int, l: int, L: int, family=None, realization: str = "product"):
    """Both sides of the pentagon as sparse matrices on the product-truncated triple space.

    The leg-13 operator is ``tau^{-1} (W (x) I) tau`` with ``tau`` the flip of
    the last two factors.
    """
    w = _pentagon_blocks(n, m, l, L, family, realization)
    d = {a: build_space(a, L).dim for a in {n, m, l, n * m, m * l, n * m * l}}
    eye = lambda k: sp.identity(k, dtype=complex, format="csr")  # noqa: E731
    w23 = sp.kron(eye(d[n * m * l]), w[(m, l)], format="csr")
    tau_in = _swap23(d[n * m * l], d[m], d[l])
    tau_out = _swap23(d[n * m], d[m], d[l])
    w13 = (tau_out.T @ sp.kron(w[(n * m, l)], eye(d[m]), format="csr") @ tau_in).tocsr()
    w12 = sp.kron(w[(n, m)], eye(d[l]), format="csr")
    lhs = (w12 @ w13 @ w23).tocsr()
    rhs = (sp.kron(eye(d[n]), w[(m, l)], format="csr") @ sp.kron(w[(n, m * l)], eye(d[l]), format="csr")).tocsr()
    return lhs, rhs


# --- direct sum -------------------------------------------------------------


@dataclass
class DirectSumAssembly:
    """``W = sum_{a,b} W^(a/b, b)`` on ``(sum_a H_a) (x) (sum_b H_b)`` for ``a, b <= n_max``."""

    n_max: int
    L: int
    family: VectorSequence
    dims: Dict[int, int]
    offsets: Dict[int, int]
    pair_offsets: Dict[Tuple[int, int], int]
    W: sp.csr_matrix
    blocks: Dict[Tuple[int, int], Tuple[int, int]] = field(default_factory=dict)
    reps: Dict[int, Representation] = field(default_factory=dict)
    kernel_residual: float = 0.0
    kernel_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def pair_slice(self, a: int, b: int) -> slice:
        start = self.pair_offsets[(a, b)]
        return slice(start, start + self.dims[a] * self.dims[b])


def assemble_direct_sum(n_max: int, L: int, family="basis-first", realization: str = "canonical",
                        seed: int = 0) -> DirectSumAssembly:
    """Assemble the direct-sum operator and measure it on ``H_a (x) H_b`` for ``b`` not dividing ``a``.

    Every arity ``a`` carries one fixed realisation ``pi_a``; the block with
    source ``H_a (x) H_b`` is ``W^(a/b, b)`` when ``b | a`` and zero otherwise.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    seq = parse_family(family)
    arities = range(1, n_max + 1)
    g = {}
    for a in arities:
        g[a] = choose_unitary(seq(a))
    reps = {a: Representation(build_space(a, L), z=seq(a), g=g[a]) for a in arities}
    dims = {a: reps[a].space.dim for a in arities}
    offsets, pos = {}, 0
    for a in arities:
        offsets[a] = pos
        pos += dims[a]
    pair_offsets, pos = {}, 0
    for a in arities:
        for b in arities:
            pair_offsets[(a, b)] = pos
            pos += dims[a] * dims[b]
    total = pos
    rows, cols, vals = [], [], []
    blocks = {}
    for a in arities:
        for b in arities:
            if a % b:
                continue
            q = a // b
            if realization == "canonical":
                corr = g[a] @ box_unitary(g[q], g[b]).conj().T
            else:
                corr = None
            blk = build_W(q, b, L, corr).tocoo()
            rows.append(blk.row + pair_offsets[(q, b)])
            cols.append(blk.col + pair_offsets[(a, b)])
            vals.append(blk.data)
            blocks[(a, b)] = (q, b)
    w = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(total, total)
    )
    asm = DirectSumAssembly(n_max, L, seq, dims, offsets, pair_offsets, w, blocks, reps)
    wc = w.tocsc()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for a in arities:
        for b in arities:
            if a % b == 0:
                continue
            asm.kernel_pairs.append((a, b))
            sl = asm.pair_slice(a, b)
            blk = wc[:, sl]
            worst = max(worst, _max_abs(blk))
            probe = rng.normal(size=blk.shape[1]) + 1j * rng.normal(size=blk.shape[1])
            worst = max(worst, float(np.linalg.norm(blk @ probe)))
    asm.kernel_residual = worst
    return asm


def check_direct_sum_covariance(asm: DirectSumAssembly, x: AlgebraElement) -> float:
    """``W (pi(x) (x) I) = (pi (x) pi)(Delta(x)) W`` on safe basis vectors, for ``x`` in O_a.

    Safe vectors: every basis vector outside ``H_a (x) H``, and ``xi (x) v``
    with ``|xi| <= L - deg x`` inside it.
    """
    a = x.arity
    if a > asm.n_max:
        raise ValueError("arity beyond the assembled range")
    arities = range(1, asm.n_max + 1)
    # (pi x pi) on (sum H_a)(x)(sum H_b) arranged in pair blocks
    total = asm.W.shape[0]
    phi_pairs = {(b, c) for b, c in divisor_pairs(a) if b <= asm.n_max and c <= asm.n_max}
    delta_blocks, lift_blocks = [], []
    pi_x = asm.reps[a](x)
    for b in arities:
        for c in arities:
            d = asm.dims[b] * asm.dims[c]
            if (b, c) in phi_pairs:
                block = sp.csr_matrix((d, d), dtype=complex)
                for (ma, mb), coeff in phi(b, c, x).terms.items():
                    block = block + coeff * sp.kron(
                        asm.reps[b].monomial(ma), asm.reps[c].monomial(mb), format="csr"
                    )
                delta_blocks.append(block)
            else:
                delta_blocks.append(sp.csr_matrix((d, d), dtype=complex))
            # pi(x) (x) I acts on the first factor of H_a (x) H_c only
            if b == a:
                lift_blocks.append(sp.kron(pi_x, sp.identity(asm.dims[c], dtype=complex), format="csr"))
            else:
                lift_blocks.append(sp.csr_matrix((d, d), dtype=complex))
    delta = sp.block_diag(delta_blocks, format="csr")
    lift = sp.block_diag(lift_blocks, format="csr")
    safe = np.ones(total, dtype=bool)
    deg = x.creation_degree()
    lengths = asm.reps[a].space.lengths
    for c in arities:
        sl = asm.pair_slice(a, c)
        safe[sl] = np.repeat(lengths <= asm.L - deg, asm.dims[c])
    cols = np.nonzero(safe)[0]
    w_safe = asm.W.tocsc()[:, cols]
    return _max_abs(asm.W @ lift.tocsc()[:, cols] - delta @ w_safe)
