"""State ensembles, postmeasurement-information contexts and fixture ensembles."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Iterable, Sequence

import numpy as np

from .cones import DEFAULT_STARTS, DEFAULT_TOL, is_ew, positive_part_split
from .hermlin import (
    HermitianOperator,
    UnitVector,
    ValidationError,
    min_eig,
    partial_transpose,
    tensor,
)

PRIOR_SUM_ATOL = 1e-10
STATE_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class StateEnsemble:
    """Prior/state pairs ``{eta_i, rho_i}`` indexed by an ordered label list.

    With ``weighted=True`` the priors are nonnegative weights that need not
    sum to one; this is how averaged ensembles over unbalanced partitions are
    represented.
    """

    priors: tuple[float, ...]
    states: tuple[HermitianOperator, ...]
    labels: tuple[Hashable, ...] = None
    weighted: bool = False

    def __post_init__(self):
        priors = tuple(float(p) for p in self.priors)
        states = tuple(self.states)
        labels = tuple(range(1, len(priors) + 1)) if self.labels is None else tuple(self.labels)
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "labels", labels)

        if not priors:
            raise ValidationError("ensemble is empty")
        if len(states) != len(priors) or len(labels) != len(priors):
            raise ValidationError("priors, states and labels must have equal length")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate labels in {labels}")
        for p in priors:
            if not (0.0 < p <= 1.0) and not self.weighted:
                raise ValidationError(f"prior {p} outside (0, 1]")
            if self.weighted and p <= 0.0:
                raise ValidationError(f"weight {p} must be positive")
        if not self.weighted and abs(sum(priors) - 1.0) > PRIOR_SUM_ATOL:
            raise ValidationError(f"priors sum to {sum(priors)!r}, not 1")
        dims = states[0].dims
        for lab, rho in zip(labels, states):
            if not isinstance(rho, HermitianOperator):
                raise ValidationError(f"state {lab!r} is not a HermitianOperator")
            if rho.dims != dims:
                raise ValidationError(f"state {lab!r} lives on {rho.dims}, expected {dims}")
            if abs(rho.trace() - 1.0) > STATE_ATOL:
                raise ValidationError(f"state {lab!r} has trace {rho.trace()!r}")
            lam, _ = min_eig(rho)
            if lam < -STATE_ATOL:
                raise ValidationError(f"state {lab!r} is not PSD (min eigenvalue {lam:.3g})")

    def __len__(self):
        return len(self.priors)

    @property
    def dims(self) -> tuple[int, int]:
        return self.states[0].dims

    def index(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown label {label!r}") from None

    def prior(self, label) -> float:
        return self.priors[self.index(label)]

    def state(self, label) -> HermitianOperator:
        return self.states[self.index(label)]

    def weighted_state(self, label) -> HermitianOperator:
        """eta_i * rho_i."""
        k = self.index(label)
        return self.priors[k] * self.states[k]

    def difference(self, i, j) -> HermitianOperator:
        """eta_i rho_i - eta_j rho_j."""
        return self.weighted_state(i) - self.weighted_state(j)

    def subensemble(self, labels: Iterable) -> "StateEnsemble":
        """Members with the given labels, priors renormalized within the subset."""
        labels = tuple(labels)
        idx = [self.index(lab) for lab in labels]
        total = sum(self.priors[k] for k in idx)
        return StateEnsemble(
            tuple(self.priors[k] / total for k in idx),
            tuple(self.states[k] for k in idx),
            labels,
        )


@dataclass(frozen=True, eq=False)
class PiContext:
    """A partition (S, S^c) of an ensemble and its averaged ensemble over S x S^c."""

    parent: StateEnsemble
    s: tuple
    s_complement: tuple
    omega: tuple[tuple, ...]
    tilde: StateEnsemble = field(repr=False)

    def pi_bit(self, label) -> int:
        """Which subensemble the label belongs to: 0 for S, 1 for S^c."""
        if label in self.s:
            return 0
        if label in self.s_complement:
            return 1
        raise ValidationError(f"unknown label {label!r}")

    def tilde_weighted(self, omega) -> HermitianOperator:
        return self.tilde.weighted_state(tuple(omega))

    def difference(self, mu, omega) -> HermitianOperator:
        return self.tilde.difference(tuple(mu), tuple(omega))


def make_pi_context(ensemble: StateEnsemble, s: Iterable) -> PiContext:
    """Split ``ensemble`` into S and its complement and average over S x S^c.

    S is reordered to follow the ensemble's label order, so ``omega`` is
    lexicographic in (S order, S^c order).
    """
    s = list(s)
    if not s:
        raise ValidationError("S must be nonempty")
    unknown = [x for x in s if x not in ensemble.labels]
    if unknown:
        raise ValidationError(f"S contains labels not in the ensemble: {unknown}")
    if len(set(s)) != len(s):
        raise ValidationError(f"S has repeated labels: {s}")
    s_set = set(s)
    s_ord = tuple(lab for lab in ensemble.labels if lab in s_set)
    comp = tuple(lab for lab in ensemble.labels if lab not in s_set)
    if not comp:
        raise ValidationError("S must be a proper subset of the labels")

    omega = tuple(product(s_ord, comp))
    priors, states = [], []
    for w0, w1 in omega:
        e0, e1 = ensemble.prior(w0), ensemble.prior(w1)
        priors.append((e0 + e1) / 2)
        mix = ensemble.weighted_state(w0) + ensemble.weighted_state(w1)
        states.append(mix / (e0 + e1))
    balanced = len(s_ord) == len(comp)
    tilde = StateEnsemble(tuple(priors), tuple(states), omega, weighted=not balanced)
    return PiContext(ensemble, s_ord, comp, omega, tilde)


# --- fixtures ---------------------------------------------------------------

_R2 = 1 / np.sqrt(2)
_W8 = np.exp(1j * np.pi / 4)


def bell_fixtures() -> dict[str, UnitVector]:
    """Named vectors: qubit states 0, 1, +, -, xi+-, zeta+- and the Bell basis."""
    q = {
        "0": np.array([1, 0]),
        "1": np.array([0, 1]),
        "+": np.array([_R2, _R2]),
        "-": np.array([_R2, -_R2]),
        "xi+": np.array([_R2, _R2 * _W8]),
        "xi-": np.array([_R2, -_R2 * _W8]),
        "zeta+": np.array([_R2, _R2 * _W8.conjugate()]),
        "zeta-": np.array([_R2, -_R2 * _W8.conjugate()]),
    }
    e00, e01, e10, e11 = np.eye(4)
    two = {
        "phi+": _R2 * (e00 + e11),
        "phi-": _R2 * (e00 - e11),
        "psi+": _R2 * (e01 + e10),
        "psi-": _R2 * (e01 - e10),
    }
    return {k: UnitVector.normalized(v) for k, v in {**q, **two}.items()}


def projector(name: str) -> HermitianOperator:
    """|v><v| for a named fixture; two-qubit vectors get dims (2, 2)."""
    v = bell_fixtures()[name]
    return v.projector(2, 2) if v.dim == 4 else v.projector()


def product_projector(*names: str) -> HermitianOperator:
    """|x><x| (x) |y><y| for named single-qubit fixtures."""
    a, b = names
    return tensor(projector(a), projector(b))


def phi_plus_pt() -> HermitianOperator:
    """Partial transpose of the |Phi+> projector (equal to SWAP / 2)."""
    return partial_transpose(projector("phi+"))


def _mixture(terms: Sequence[tuple[Fraction, HermitianOperator]]) -> HermitianOperator:
    out = HermitianOperator.zeros(2, 2)
    for c, h in terms:
        out = out + float(c) * h
    return out


def _from_fractions(priors, states) -> StateEnsemble:
    return StateEnsemble(tuple(float(p) for p in priors), tuple(states))


EXAMPLE3_PRIORS = (Fraction(3, 7), Fraction(3, 14), Fraction(3, 14), Fraction(1, 7))
EXAMPLE4_PRIORS = (Fraction(1, 3), Fraction(1, 4), Fraction(1, 4), Fraction(1, 6))


def build_example3() -> StateEnsemble:
    """Separable two-qubit ensemble meeting the annihilation premises."""
    pp = product_projector
    eye = HermitianOperator.identity(2, 2)
    f = Fraction
    rho1 = _mixture([(f(1, 3), pp("+", "+")), (f(1, 3), pp("-", "-")), (f(1, 12), eye)])
    rho2 = _mixture([
        (f(1, 6), pp("0", "0")), (f(1, 6), pp("1", "1")),
        (f(1, 3), pp("+", "+")), (f(1, 3), pp("-", "-")),
    ])
    rho3 = _mixture([
        (f(1, 6), pp("0", "0")), (f(1, 6), pp("1", "1")),
        (f(1, 6), pp("xi+", "xi+")), (f(1, 6), pp("xi-", "xi-")),
        (f(1, 6), pp("zeta+", "zeta+")), (f(1, 6), pp("zeta-", "zeta-")),
    ])
    rho4 = _mixture([(f(1, 2), pp("+", "+")), (f(1, 2), pp("-", "-"))])
    return _from_fractions(EXAMPLE3_PRIORS, (rho1, rho2, rho3, rho4))


def build_example4() -> StateEnsemble:
    """Separable two-qubit ensemble meeting the creation premises."""
    pp = product_projector
    eye = HermitianOperator.identity(2, 2)
    f = Fraction
    rho1 = _mixture([(f(1, 4), pp("+", "+")), (f(1, 4), pp("-", "-")), (f(1, 8), eye)])
    rho2 = _mixture([
        (f(1, 6), pp("0", "1")), (f(1, 6), pp("1", "0")),
        (f(1, 3), pp("+", "+")), (f(1, 3), pp("-", "-")),
    ])
    rho3 = _mixture([
        (f(1, 6), pp("0", "0")), (f(1, 6), pp("1", "1")),
        (f(1, 3), pp("+", "+")), (f(1, 3), pp("-", "-")),
    ])
    rho4 = _mixture([
        (f(1, 4), pp("xi+", "zeta+")), (f(1, 4), pp("xi-", "zeta-")),
        (f(1, 4), pp("zeta+", "xi+")), (f(1, 4), pp("zeta-", "xi-")),
    ])
    return _from_fractions(EXAMPLE4_PRIORS, (rho1, rho2, rho3, rho4))


def _checked_split(w, tol, starts, seed):
    if w is None:
        w = phi_plus_pt()
    verdict = is_ew(w, tol, starts=starts, seed=seed)
    if not verdict.inside:
        raise ValidationError("W is not an entanglement witness")
    return positive_part_split(w)


def build_example1(
    w: HermitianOperator | None = None,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> StateEnsemble:
    """Four-state ensemble built from the positive/negative parts of a witness.

    Its pairwise differences are (W+ + W-)/4T and W/4T with T = Tr(W+ + W-),
    which matches the annihilation premises.
    """
    wp, wm = _checked_split(w, tol, starts, seed)
    total = 4 * (wp.trace() + wm.trace())
    parts = (2 * wp + wm, wp, wp + 2 * wm, wm)
    return StateEnsemble(
        tuple(x.trace() / total for x in parts),
        tuple(x / x.trace() for x in parts),
    )


def build_example2(
    w: HermitianOperator | None = None,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> StateEnsemble:
    """Four-state ensemble built from a witness, matching the creation premises."""
    wp, wm = _checked_split(w, tol, starts, seed)
    total = (4 * wp + 3 * wm).trace()
    parts = (2 * wp + wm, wp + wm, wp, wm)
    return StateEnsemble(
        tuple(x.trace() / total for x in parts),
        tuple(x / x.trace() for x in parts),
    )


EXAMPLE_BUILDERS = {
    "example1": build_example1,
    "example2": build_example2,
    "example3": build_example3,
    "example4": build_example4,
}
