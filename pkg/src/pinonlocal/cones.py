"""Membership oracles for the PSD cone, the block-positive cone and witnesses.

PSD membership is decided exactly from the spectrum.  Block positivity
(nonnegative expectation on every product vector) is probed with a multi-start
see-saw over product vectors: a negative value is a certified counterexample,
while failure to find one is only a heuristic IN.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .hermlin import (
    HermitianOperator,
    UnitVector,
    eig_hermitian,
    min_eig,
)

DEFAULT_TOL = 1e-9
DEFAULT_STARTS = 64
DEFAULT_MAX_ITERS = 200
SPLIT_ZERO_BAND = 1e-12


class Cone(enum.Enum):
    PSD = "PSD"
    SEP_STAR = "SEP_STAR"
    EW = "EW"


class Status(enum.Enum):
    IN = "IN"
    OUT = "OUT"


class Confidence(enum.Enum):
    CERTIFIED = "CERTIFIED"
    HEURISTIC = "HEURISTIC"


@dataclass(frozen=True)
class ConeVerdict:
    """Outcome of a cone membership test.

    ``margin`` is the smallest eigenvalue for PSD tests and the smallest
    product expectation found for block-positivity tests.  OUT verdicts always
    carry a witness vector whose expectation reproduces the margin.
    """

    cone: Cone
    status: Status
    margin: float
    witness: UnitVector | None
    confidence: Confidence
    parts: tuple["ConeVerdict", ...] = field(default=(), compare=False)

    @property
    def inside(self) -> bool:
        return self.status is Status.IN

    def to_dict(self) -> dict:
        out = {
            "cone": self.cone.value,
            "status": self.status.value,
            "margin": self.margin,
            "confidence": self.confidence.value,
        }
        if self.witness is not None:
            out["witness"] = [[float(z.real), float(z.imag)] for z in self.witness.amplitudes]
        return out


def in_psd(h: HermitianOperator, tol: float = DEFAULT_TOL) -> ConeVerdict:
    lam, vec = min_eig(h)
    status = Status.IN if lam >= -tol else Status.OUT
    return ConeVerdict(Cone.PSD, status, lam, vec, Confidence.CERTIFIED)


def _fibonacci_qubits(count: int) -> list[np.ndarray]:
    """Qubit states whose Bloch vectors lie on a Fibonacci sphere."""
    golden = np.pi * (3.0 - np.sqrt(5.0))
    out = []
    for k in range(count):
        z = 1.0 - 2.0 * (k + 0.5) / count
        theta = np.arccos(z)
        phi = golden * k
        out.append(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))
    return out


def _random_vectors(rng: np.random.Generator, dim: int, count: int) -> list[np.ndarray]:
    raw = rng.normal(size=(count, dim)) + 1j * rng.normal(size=(count, dim))
    return [x / np.linalg.norm(x) for x in raw]


def _see_saw(t: np.ndarray, b: np.ndarray, max_iters: int, tol: float):
    """Alternating minimization run for a batch of starting vectors ``b``.

    ``t`` is H reshaped to (dA, dB, dA, dB); ``b`` has shape (starts, dB).
    A start stops updating once its value improves by less than ``tol``.
    """
    value = np.full(b.shape[0], np.inf)
    active = np.ones(b.shape[0], dtype=bool)
    a = np.zeros((b.shape[0], t.shape[0]), dtype=complex)
    for _ in range(max_iters):
        bb = b[active]
        xa = np.einsum("sj,ijkl,sl->sik", bb.conj(), t, bb)
        _, va = np.linalg.eigh((xa + xa.conj().transpose(0, 2, 1)) / 2)
        aa = va[:, :, 0]
        xb = np.einsum("si,ijkl,sk->sjl", aa.conj(), t, aa)
        wb, vb = np.linalg.eigh((xb + xb.conj().transpose(0, 2, 1)) / 2)
        a[active] = aa
        b[active] = vb[:, :, 0]
        improved = value[active] - wb[:, 0]
        value[active] = wb[:, 0]
        idx = np.flatnonzero(active)
        active[idx[improved < tol]] = False
        if not active.any():
            break
    return a, b


def min_product_expectation(
    h: HermitianOperator,
    starts: int = DEFAULT_STARTS,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = 1e-12,
    seed: int = 0,
) -> tuple[float, UnitVector, UnitVector]:
    """Smallest <a(x)b|H|a(x)b> found by alternating minimization.

    Half of the starts are random vectors on the second factor and, for a
    qubit second factor, half lie on a Fibonacci grid of the Bloch sphere.
    Each start alternates between the exact minimizer over ``a`` with ``b``
    fixed and vice versa.  The returned value is attained by the returned
    vectors, so it is an upper bound on the true product minimum.
    """
    if starts < 1:
        raise ValueError("starts must be positive")
    da, db = h.dims
    t = h.entries.reshape(da, db, da, db)
    rng = np.random.default_rng(seed)
    n_grid = starts // 2 if db == 2 else 0
    b0 = np.array(_fibonacci_qubits(n_grid) + _random_vectors(rng, db, starts - n_grid))
    a, b = _see_saw(t, b0.reshape(starts, db), max_iters, tol)
    prods = np.einsum("si,sj->sij", a, b).reshape(starts, da * db)
    values = np.einsum("sx,xy,sy->s", prods.conj(), h.entries, prods).real
    k = int(np.argmin(values))
    return float(values[k]), UnitVector.normalized(a[k]), UnitVector.normalized(b[k])


def in_sep_star(
    h: HermitianOperator,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> ConeVerdict:
    value, a, b = min_product_expectation(h, starts=starts, seed=seed)
    if value < -tol:
        witness = a.kron(b)
        return ConeVerdict(
            Cone.SEP_STAR, Status.OUT, h.expectation(witness), witness, Confidence.CERTIFIED
        )
    return ConeVerdict(Cone.SEP_STAR, Status.IN, value, a.kron(b), Confidence.HEURISTIC)


def is_ew(
    h: HermitianOperator,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> ConeVerdict:
    """Entanglement-witness test: block positive but not PSD.

    An IN verdict carries the negative-eigenvalue eigenvector (the entangled
    state the witness detects) with the PSD margin.  OUT verdicts carry either
    the product vector refuting block positivity or, for PSD input, the
    lowest eigenvector.
    """
    psd = in_psd(h, tol)
    sep = in_sep_star(h, tol, starts=starts, seed=seed)
    parts = (psd, sep)
    if not sep.inside:
        return ConeVerdict(Cone.EW, Status.OUT, sep.margin, sep.witness, Confidence.CERTIFIED, parts)
    if psd.inside:
        return ConeVerdict(Cone.EW, Status.OUT, psd.margin, psd.witness, Confidence.CERTIFIED, parts)
    return ConeVerdict(Cone.EW, Status.IN, psd.margin, psd.witness, Confidence.HEURISTIC, parts)


def positive_part_split(w: HermitianOperator) -> tuple[HermitianOperator, HermitianOperator]:
    """Split W = W_plus - W_minus into orthogonal PSD parts.

    Eigenvalues within 1e-12 of zero go to neither part.
    """
    lam, vecs = eig_hermitian(w)
    n = w.dim
    plus = np.zeros((n, n), dtype=complex)
    minus = np.zeros((n, n), dtype=complex)
    for value, v in zip(lam, vecs):
        x = v.amplitudes
        if value > SPLIT_ZERO_BAND:
            plus += value * np.outer(x, x.conj())
        elif value < -SPLIT_ZERO_BAND:
            minus -= value * np.outer(x, x.conj())
    return (
        HermitianOperator._trusted(plus, *w.dims),
        HermitianOperator._trusted(minus, *w.dims),
    )
