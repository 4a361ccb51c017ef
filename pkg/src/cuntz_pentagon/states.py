"""GP states of Cuntz algebras and sequences of unit vectors closed under the box product."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bialgebra import phi
from .word_algebra import AlgebraElement

__all__ = [
    "FAMILIES",
    "unit_vector",
    "eta",
    "rho",
    "state_tensor",
    "box_vector",
    "VectorSequence",
    "parse_family",
    "sequence_value",
    "check_monoid_condition",
    "state_distinctness",
]

FAMILIES = ("basis_first", "basis_last", "uniform", "phase_twist")
NORM_TOL = 1e-12


def unit_vector(z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1 or z.size == 0:
        raise ValueError("a unit vector is a nonempty 1-d array")
    if abs(np.linalg.norm(z) - 1) > NORM_TOL:
        raise ValueError(f"vector has norm {np.linalg.norm(z)!r}, expected 1")
    if z.size == 1 and abs(z[0] - 1) > NORM_TOL:
        raise ValueError("the only admissible unit vector in C^1 is z = 1")
    return z


def eta(n: int) -> np.ndarray:
    """``(1, 0, ..., 0)`` in C^n."""
    v = np.zeros(n, dtype=complex)
    v[0] = 1
    return v


def rho(z, x: AlgebraElement) -> complex:
    """Evaluate the GP state: ``rho_z(s_J s_K^*) = conj(z_J) z_K`` letterwise."""
    z = unit_vector(z)
    if z.size != x.arity:
        raise ValueError(f"state on C^{z.size} applied to an element of O_{x.arity}")
    return complex(sum(c * _rho_monomial(z, mono) for mono, c in x.terms.items()))


def _rho_monomial(z: np.ndarray, mono) -> complex:
    val = 1 + 0j
    for j in mono.mu:
        val *= z[j - 1].conjugate()
    for k in mono.nu:
        val *= z[k - 1]
    return val


def state_tensor(z, y, x: AlgebraElement) -> complex:
    """``(rho_z (x) rho_y)(phi_{n,m}(x))``."""
    z, y = unit_vector(z), unit_vector(y)
    if x.arity != z.size * y.size:
        raise ValueError(f"need an element of O_{z.size * y.size}, got O_{x.arity}")
    t = phi(z.size, y.size, x)
    return complex(
        sum(c * _rho_monomial(z, left) * _rho_monomial(y, right) for (left, right), c in t.terms.items())
    )


def box_vector(z, y) -> np.ndarray:
    """``(z [x] y)_{m(i-1)+j} = z_i y_j``."""
    return np.kron(np.asarray(z, dtype=complex), np.asarray(y, dtype=complex))


@dataclass(frozen=True)
class VectorSequence:
    """A sequence ``n -> z^(n)`` in the unit spheres S(C^n).

    ``phase_twist`` multiplies the ``base`` family by ``exp(i t log n)``.
    """

    family: str
    t: float = 0.0
    base: Optional["VectorSequence"] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown sequence family {self.family!r}")
        if self.family == "phase_twist" and self.base is None:
            object.__setattr__(self, "base", VectorSequence("basis_first"))

    def __call__(self, n: int) -> np.ndarray:
        return sequence_value(self, n)

    @property
    def id(self) -> str:
        if self.family == "phase_twist":
            return f"phase:{self.t!r}:{self.base.id}"
        return self.family.replace("_", "-")


def parse_family(text: str | VectorSequence) -> VectorSequence:
    """Parse ``basis-first``, ``basis-last``, ``uniform`` or ``phase:<t>[:base]``."""
    if isinstance(text, VectorSequence):
        return text
    s = text.strip()
    if s.startswith("phase:"):
        _, rest = s.split(":", 1)
        t_str, _, base = rest.partition(":")
        try:
            t = float(t_str)
        except ValueError:
            raise ValueError(f"bad phase parameter in {text!r}") from None
        return VectorSequence("phase_twist", t, parse_family(base) if base else None)
    name = s.replace("-", "_")
    if name not in FAMILIES or name == "phase_twist":
        raise ValueError(f"unknown sequence family {text!r}")
    return VectorSequence(name)


def sequence_value(seq: VectorSequence, n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be a positive integer")
    if seq.family == "basis_first":
        return eta(n)
    if seq.family == "basis_last":
        v = np.zeros(n, dtype=complex)
        v[-1] = 1
        return v
    if seq.family == "uniform":
        return np.full(n, n ** -0.5, dtype=complex)
    if seq.family == "phase_twist":
        return np.exp(1j * seq.t * math.log(n)) * sequence_value(seq.base, n)
    raise ValueError(f"unknown sequence family {seq.family!r}")


def check_monoid_condition(seq: VectorSequence, n: int, m: int) -> float:
    """``|| z^(n) [x] z^(m) - z^(nm) ||``."""
    return float(np.linalg.norm(box_vector(seq(n), seq(m)) - seq(n * m)))


def state_distinctness(z, y):
    """Largest entry gap ``max_j |z_j - y_j|`` and the generator index attaining it.

    ``rho_z(s_j) = conj(z_j)``, so a positive gap is witnessed by ``s_j``.
    """
    z, y = unit_vector(z), unit_vector(y)
    if z.size != y.size:
        raise ValueError("vectors live in different dimensions")
    gaps = np.abs(z - y)
    j = int(np.argmax(gaps))
    return float(gaps[j]), j + 1
