"""Hermitian linear algebra on small bipartite spaces.

Operators act on C^dA (x) C^dB with the product basis |i>_A|j>_B mapped to
row index ``i * dim_b + j``.  Values are immutable: every operation returns a
new object and the underlying arrays are flagged read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

HERMITIAN_ATOL = 1e-12
UNIT_NORM_ATOL = 1e-12


class ValidationError(ValueError):
    """Raised when an input violates a structural contract."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix on C^dim_a (x) C^dim_b.

    Inputs whose elementwise asymmetry is at most 1e-12 are symmetrized to
    ``(H + H^dagger) / 2``; anything less symmetric is rejected.
    """

    dim_a: int
    dim_b: int
    entries: np.ndarray

    def __post_init__(self):
        if int(self.dim_a) != self.dim_a or int(self.dim_b) != self.dim_b:
            raise ValidationError("dimensions must be integers")
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValidationError("dimensions must be positive")
        m = np.asarray(self.entries, dtype=complex)
        n = self.dim_a * self.dim_b
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] != n:
            raise ValidationError(
                f"side {m.shape[0]} does not match dim_a*dim_b = {n}"
            )
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix has non-finite entries")
        asym = np.max(np.abs(m - m.conj().T)) if n else 0.0
        if asym > HERMITIAN_ATOL:
            raise ValidationError(f"matrix is not Hermitian (asymmetry {asym:.3g})")
        object.__setattr__(self, "entries", _frozen((m + m.conj().T) / 2))

    @classmethod
    def from_array(cls, m, dim_a: int | None = None, dim_b: int | None = None):
        """Build from an array; a bare array is treated as acting on C^n (x) C^1."""
        m = np.asarray(m, dtype=complex)
        if dim_a is None and dim_b is None:
            dim_a, dim_b = m.shape[0], 1
        elif dim_b is None:
            dim_b = m.shape[0] // dim_a
        elif dim_a is None:
            dim_a = m.shape[0] // dim_b
        return cls(dim_a, dim_b, m)

    @classmethod
    def _trusted(cls, m: np.ndarray, dim_a: int, dim_b: int) -> "HermitianOperator":
        # Results of exact-Hermitian-preserving algebra; symmetrize unconditionally.
        m = np.asarray(m, dtype=complex)
        return cls(dim_a, dim_b, (m + m.conj().T) / 2)

    @classmethod
    def identity(cls, dim_a: int, dim_b: int = 1) -> "HermitianOperator":
        return cls(dim_a, dim_b, np.eye(dim_a * dim_b))

    @classmethod
    def zeros(cls, dim_a: int, dim_b: int = 1) -> "HermitianOperator":
        return cls(dim_a, dim_b, np.zeros((dim_a * dim_b,) * 2))

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def _check_same_space(self, other: "HermitianOperator"):
        if not isinstance(other, HermitianOperator):
            raise TypeError(f"expected HermitianOperator, got {type(other).__name__}")
        if self.dims != other.dims:
            raise ValidationError(f"space mismatch: {self.dims} vs {other.dims}")

    def __add__(self, other):
        self._check_same_space(other)
        return HermitianOperator._trusted(self.entries + other.entries, *self.dims)

    def __sub__(self, other):
        self._check_same_space(other)
        return HermitianOperator._trusted(self.entries - other.entries, *self.dims)

    def __neg__(self):
        return HermitianOperator._trusted(-self.entries, *self.dims)

    def __mul__(self, c):
        if not isinstance(c, Number) or isinstance(c, complex) and c.imag != 0:
            return NotImplemented
        return HermitianOperator._trusted(float(c) * self.entries, *self.dims)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self * (1.0 / float(c))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def expectation(self, v: "UnitVector | np.ndarray") -> float:
        """<v|H|v> for a vector of matching length."""
        x = v.amplitudes if isinstance(v, UnitVector) else np.asarray(v, dtype=complex)
        if x.shape != (self.dim,):
            raise ValidationError(f"vector length {x.shape} does not match {self.dim}")
        return float(np.vdot(x, self.entries @ x).real)

    def allclose(self, other: "HermitianOperator", atol: float = 1e-12) -> bool:
        self._check_same_space(other)
        return bool(np.allclose(self.entries, other.entries, rtol=0.0, atol=atol))

    def __repr__(self):
        return f"HermitianOperator(dims={self.dims}, entries=\n{np.round(self.entries, 6)})"


@dataclass(frozen=True, eq=False)
class UnitVector:
    """A normalized complex column vector."""

    amplitudes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if x.size == 0:
            raise ValidationError("empty vector")
        norm = np.linalg.norm(x)
        if abs(norm - 1.0) > UNIT_NORM_ATOL:
            raise ValidationError(f"vector norm {norm!r} is not 1")
        object.__setattr__(self, "amplitudes", _frozen(x))

    @classmethod
    def normalized(cls, x) -> "UnitVector":
        x = np.asarray(x, dtype=complex).reshape(-1)
        norm = np.linalg.norm(x)
        if norm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(x / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self, dim_a: int | None = None, dim_b: int | None = None) -> HermitianOperator:
        """|v><v| on the given bipartite split (default C^dim (x) C^1)."""
        x = self.amplitudes
        return HermitianOperator.from_array(np.outer(x, x.conj()), dim_a, dim_b)

    def kron(self, other: "UnitVector") -> "UnitVector":
        return UnitVector.normalized(np.kron(self.amplitudes, other.amplitudes))

    def overlap(self, other: "UnitVector") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def jacobi_eigh(m: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns ``(w, V)`` with ``w`` ascending and the eigenvectors as columns of
    the unitary ``V``.  Each rotation zeroes one off-diagonal pair after first
    removing its complex phase.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    scale = max(1.0, float(np.max(np.abs(a))))
    for _ in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.abs(np.triu(a, 1)) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                # real symmetric rotation on the phase-corrected pair
                theta = (aqq - app) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # columns p, q of the unitary J = [[c, s*phase], [-s*conj(phase), c]]
                j = np.array([[c, s * phase], [-s * phase.conjugate(), c]])
                cols = a[:, [p, q]] @ j
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = j.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                vc = v[:, [p, q]] @ j
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def fast_eigh(m: np.ndarray):
    """LAPACK eigendecomposition for inner loops; certificates use the Jacobi path."""
    return np.linalg.eigh(m)


def eig_hermitian(h: HermitianOperator) -> tuple[np.ndarray, list[UnitVector]]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of ``h``."""
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator.from_array(h)
    w, v = jacobi_eigh(h.entries)
    return w, [UnitVector.normalized(v[:, k]) for k in range(v.shape[1])]


def min_eig(h: HermitianOperator) -> tuple[float, UnitVector]:
    """Smallest eigenvalue and a corresponding unit eigenvector."""
    w, v = jacobi_eigh(h.entries)
    return float(w[0]), UnitVector.normalized(v[:, 0])


def spectral_function(h: HermitianOperator, fn) -> HermitianOperator:
    """Apply a real scalar function to the spectrum of ``h``."""
    w, v = jacobi_eigh(h.entries)
    return HermitianOperator._trusted((v * fn(w)) @ v.conj().T, *h.dims)


def tensor(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """A (x) B on C^dim(A) (x) C^dim(B)."""
    return HermitianOperator(a.dim, b.dim, np.kron(a.entries, b.entries))


def partial_transpose(h: HermitianOperator) -> HermitianOperator:
    """Transpose on the second tensor factor in the computational basis."""
    da, db = h.dims
    t = h.entries.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)
    return HermitianOperator(da, db, t)


def partial_contraction_b(h: HermitianOperator, b: UnitVector) -> HermitianOperator:
    """(I (x) <b|) H (I (x) |b>), an operator on C^dim_a."""
    da, db = h.dims
    if b.dim != db:
        raise ValidationError(f"vector on C^{b.dim} cannot contract factor C^{db}")
    t = h.entries.reshape(da, db, da, db)
    x = np.einsum("j,ijkl,l->ik", b.amplitudes.conj(), t, b.amplitudes)
    return HermitianOperator._trusted(x, da, 1)


def partial_contraction_a(h: HermitianOperator, a: UnitVector) -> HermitianOperator:
    """(<a| (x) I) H (|a> (x) I), an operator on C^dim_b."""
    da, db = h.dims
    if a.dim != da:
        raise ValidationError(f"vector on C^{a.dim} cannot contract factor C^{da}")
    t = h.entries.reshape(da, db, da, db)
    x = np.einsum("i,ijkl,k->jl", a.amplitudes.conj(), t, a.amplitudes)
    return HermitianOperator._trusted(x, db, 1)


def inner(a: HermitianOperator, b: HermitianOperator) -> float:
    """Hilbert-Schmidt inner product Tr(AB), real for Hermitian arguments."""
    a._check_same_space(b)
    return float(np.sum(a.entries * b.entries.T).real)


def trace_norm(h: HermitianOperator) -> float:
    w, _ = jacobi_eigh(h.entries)
    return float(np.sum(np.abs(w)))


def spectral_norm(h: HermitianOperator) -> float:
    w, _ = jacobi_eigh(h.entries)
    return float(np.max(np.abs(w)))


# matrix literal format: nested rows of [re, im] pairs

def matrix_to_literal(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_literal(rows: Sequence) -> np.ndarray:
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix literal: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(
            f"matrix literal must be an n x n grid of [re, im] pairs, got shape {arr.shape}"
        )
    return arr[..., 0] + 1j * arr[..., 1]


def operator_to_literal(h: HermitianOperator) -> dict:
    return {"dims": {"dA": h.dim_a, "dB": h.dim_b}, "matrix": matrix_to_literal(h.entries)}


def operator_from_literal(doc: dict) -> HermitianOperator:
    try:
        dims = doc["dims"]
        return HermitianOperator(int(dims["dA"]), int(dims["dB"]), matrix_from_literal(doc["matrix"]))
    except KeyError as exc:
        raise ValidationError(f"operator document missing field {exc}") from None
