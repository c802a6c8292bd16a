"""Minimum-error discrimination: closed forms, an iterative solver, shortcuts.

The solver returns a POVM together with the dual candidate
``Y = sym(sum_i eta_i rho_i M_i)``.  If ``Y - eta_i rho_i >= -eps`` for every
``i`` then ``Tr Y + d * eps`` bounds the optimum from above, so a converged
result is certified to within ``d * eps`` of the true guessing probability.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import (
    DEFAULT_STARTS,
    DEFAULT_TOL,
    Confidence,
    ConeVerdict,
    in_psd,
    in_sep_star,
)
from .ensembles import PiContext, StateEnsemble, make_pi_context
from .hermlin import (
    HermitianOperator,
    ValidationError,
    fast_eigh,
    min_eig,
    trace_norm,
)

PINV_CUTOFF = 1e-12
DEFAULT_SOLVER_TOL = 1e-8
DEFAULT_MAX_ITERS = 20000
CHECK_EVERY = 10
STALL_LIMIT = 100
EXACT_MARGIN = 1e-12


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    value: float
    measurement: tuple[HermitianOperator, ...]
    dual_operator: HermitianOperator
    dual_margins: tuple[float, ...]
    converged: bool
    iterations: int
    labels: tuple = ()
    history: tuple[float, ...] = ()

    @property
    def upper_bound(self) -> float:
        """Certified upper bound on the optimum from the dual candidate."""
        worst = max(0.0, -min(self.dual_margins))
        return self.dual_operator.trace() + self.dual_operator.dim * worst

    def element(self, label) -> HermitianOperator:
        return self.measurement[self.labels.index(label)]


def _sym(m):
    return (m + np.swapaxes(m, -1, -2).conj()) / 2


def _povm(b):
    return _sym(b @ np.swapaxes(b, -1, -2).conj())


def _objective(p, m) -> float:
    return float(np.einsum("nij,nji->", p, m).real)


def _inv_sqrt(g):
    """Pseudo-inverse square root of a PSD matrix and the basis of its support."""
    w, v = fast_eigh(_sym(g))
    keep = w > PINV_CUTOFF
    vk = v[:, keep]
    return (vk / np.sqrt(w[keep])) @ vk.conj().T, vk


def _factor(m):
    # any B_i with B_i B_i^dagger = M_i
    w, v = np.linalg.eigh(_sym(m))
    return v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]


def _dual(p, m):
    return _sym(np.einsum("nij,njk->ik", p, m))


def _margins_fast(p, m):
    return np.linalg.eigvalsh(_dual(p, m)[None] - p)[:, 0]


def _fixed_point_step(p, b, fill):
    """B_i <- G^{-1/2} P_i B_i, i.e. M_i <- G^{-1/2} P_i M_i P_i G^{-1/2}."""
    d = p.shape[1]
    g = np.einsum("nij,njk,nkl->il", p, _povm(b), p)
    r, support = _inv_sqrt(g)
    new = r @ p @ b
    # directions outside the support of g are invisible to every state
    deficit = np.eye(d) - support @ support.conj().T
    if np.max(np.abs(deficit)) > PINV_CUTOFF:
        m = _povm(new)
        m[fill] += _sym(deficit)
        new = _factor(m)
    return new


def _extrapolate(p, b, new, new_value, alpha):
    """Try longer steps along new - b, renormalized back onto the POVM set.

    Working with the factors B_i keeps every element PSD; rescaling by
    ``S^{-1/2}`` with ``S = sum_i B_i B_i^dagger`` restores completeness.
    """
    d = p.shape[1]
    a = 2 * alpha
    while a > 1:
        trial = b + a * (new - b)
        r, support = _inv_sqrt(np.einsum("nij,nkj->ik", trial, trial.conj()))
        if support.shape[1] == d:
            trial = r @ trial
            value = _objective(p, _povm(trial))
            if value > new_value:
                return trial, value, a
        a /= 2
    return new, new_value, max(1.0, alpha / 2)


def solve_me(
    ensemble: StateEnsemble,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_SOLVER_TOL,
) -> DiscriminationResult:
    """Maximize ``sum_i eta_i Tr(rho_i M_i)`` over POVMs.

    Starts from the uniform POVM and applies the fixed-point map
    ``M_i <- G^{-1/2} P_i M_i P_i G^{-1/2}`` with ``P_i = eta_i rho_i`` and
    ``G = sum_i P_i M_i P_i``.  Steps that would lower the objective are
    damped toward the current POVM, and accepted steps are extrapolated while
    that keeps improving the objective, so the objective never decreases.
    The run stops once every dual margin is at least ``-tol``, or early when
    the objective has not moved for ``STALL_LIMIT`` iterations.

    Before iterating, each "always guess i" measurement is tried; one whose
    dual margins are nonnegative up to rounding is exactly optimal and is
    returned after zero iterations.
    """
    p = np.array([ensemble.weighted_state(lab).entries for lab in ensemble.labels])
    n, d = p.shape[0], p.shape[1]
    fill = int(np.argmax(ensemble.priors))
    b = np.array([np.eye(d, dtype=complex) / np.sqrt(n)] * n)
    value = _objective(p, _povm(b))
    history = [value]

    converged = False
    alpha = 1.0
    it = stalled = 0
    for k in range(n):
        if np.min(np.linalg.eigvalsh(p[k][None] - p)) >= -EXACT_MARGIN:
            b = np.zeros_like(b)
            b[k] = np.eye(d)
            value = _objective(p, _povm(b))
            history.append(value)
            converged = True
            max_iters = 0
            break
    for it in range(1, max_iters + 1):
        proposal = _fixed_point_step(p, b, fill)
        new, new_value = proposal, _objective(p, _povm(proposal))
        step = 1.0
        while new_value < value and step > 1e-6:
            step /= 2
            new = _factor((1 - step) * _povm(b) + step * _povm(proposal))
            new_value = _objective(p, _povm(new))
        if new_value >= value:
            new, new_value, alpha = _extrapolate(p, b, new, new_value, alpha)
        stalled = stalled + 1 if new_value <= value else 0
        if new_value >= value:
            b, value = new, new_value
        history.append(value)
        if it % CHECK_EVERY == 0 or it == 1:
            if np.min(_margins_fast(p, _povm(b))) >= -tol:
                converged = True
                break
        if stalled >= STALL_LIMIT:
            break

    m = _povm(b)
    elements = tuple(HermitianOperator._trusted(x, *ensemble.dims) for x in m)
    y = HermitianOperator._trusted(_dual(p, m), *ensemble.dims)
    margins = tuple(
        min_eig(y - ensemble.weighted_state(lab))[0] for lab in ensemble.labels
    )
    converged = converged and min(margins) >= -tol
    return DiscriminationResult(
        value=_objective(p, m),
        measurement=elements,
        dual_operator=y,
        dual_margins=margins,
        converged=converged,
        iterations=it,
        labels=ensemble.labels,
        history=tuple(history),
    )


def helstrom_two(eta1_rho1: HermitianOperator, eta2_rho2: HermitianOperator) -> float:
    """Optimal success probability for two prior-weighted states."""
    for name, h in (("first", eta1_rho1), ("second", eta2_rho2)):
        if min_eig(h)[0] < -1e-10:
            raise ValidationError(f"{name} weighted state is not PSD")
    total = eta1_rho1.trace() + eta2_rho2.trace()
    if abs(total - 1.0) > 1e-10:
        raise ValidationError(f"weighted traces sum to {total!r}, not 1")
    return total / 2 + trace_norm(eta1_rho1 - eta2_rho2) / 2


@dataclass(frozen=True)
class Dominance:
    """A label whose weighted state dominates every other one in some cone."""

    mu: object
    checks: tuple[tuple[object, ConeVerdict], ...]
    ew_labels: tuple = ()

    @property
    def ew_found(self) -> bool:
        return bool(self.ew_labels)

    @property
    def confidence(self) -> Confidence:
        for _, verdict in self.checks:
            if verdict.confidence is Confidence.HEURISTIC:
                return Confidence.HEURISTIC
        return Confidence.CERTIFIED


def psd_dominant_index(ensemble: StateEnsemble, tol: float = DEFAULT_TOL) -> Dominance | None:
    """Smallest label mu with ``eta_mu rho_mu - eta_i rho_i`` PSD for all i.

    When it exists, always guessing ``mu`` is optimal and needs no
    measurement at all, so the guessing probability is ``eta_mu`` even under
    LOCC.
    """
    for mu in ensemble.labels:
        checks = []
        for lab in ensemble.labels:
            if lab == mu:
                continue
            verdict = in_psd(ensemble.difference(mu, lab), tol)
            if not verdict.inside:
                break
            checks.append((lab, verdict))
        else:
            return Dominance(mu, tuple(checks))
    return None


def sep_star_dominant_index(
    ensemble: StateEnsemble,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> Dominance | None:
    """Smallest label mu whose differences to all others are block positive.

    ``ew_labels`` lists the i for which the difference is additionally not
    PSD (an entanglement witness).  Such an i exists exactly when separable
    measurements fall short of the global optimum.  PSD differences get a
    CERTIFIED verdict since the PSD cone sits inside the block-positive cone.
    """
    for mu in ensemble.labels:
        checks, ews = [], []
        for lab in ensemble.labels:
            if lab == mu:
                continue
            diff = ensemble.difference(mu, lab)
            psd = in_psd(diff, tol)
            if psd.inside:
                checks.append((lab, psd))
                continue
            sep = in_sep_star(diff, tol, starts=starts, seed=seed)
            if not sep.inside:
                break
            checks.append((lab, sep))
            ews.append(lab)
        else:
            return Dominance(mu, tuple(checks), tuple(ews))
    return None


def pi_values(
    ensemble: StateEnsemble,
    s,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_SOLVER_TOL,
) -> tuple[float, DiscriminationResult]:
    """Guessing probability with postmeasurement information about S.

    Equals twice the optimum for the averaged ensemble over S x S^c; the
    returned measurement is indexed by that outcome grid.
    """
    context = s if isinstance(s, PiContext) else make_pi_context(ensemble, s)
    result = solve_me(context.tilde, max_iters=max_iters, tol=tol)
    return 2 * result.value, result


def _witness_direction(context: PiContext, mu, omega_star):
    mu, omega_star = tuple(mu), tuple(omega_star)
    for x in (mu, omega_star):
        if x not in context.omega:
            raise ValidationError(f"{x} is not an outcome of the grid {context.omega}")
    lam, u = min_eig(context.difference(mu, omega_star))
    return lam, u


def pi_witness_lower_bound(
    context: PiContext, mu, omega_star, tol: float = DEFAULT_TOL
) -> float | None:
    """Lower bound on the PI guessing probability from one negative direction.

    With ``D`` the difference of averaged weighted states at ``mu`` and
    ``omega_star`` and ``u`` its lowest eigenvector, the measurement
    ``{I - |u><u| at mu, |u><u| at omega_star}`` succeeds with probability
    ``2 eta~_mu - 2 lambda_min(D)``.  Returns None when ``D`` is PSD within
    ``tol``.
    """
    lam, _ = _witness_direction(context, mu, omega_star)
    if lam >= -tol:
        return None
    return 2 * context.tilde.prior(tuple(mu)) - 2 * lam


def witness_strategy(context: PiContext, mu, omega_star) -> dict[tuple, HermitianOperator]:
    """The two-outcome measurement achieving ``pi_witness_lower_bound``."""
    _, u = _witness_direction(context, mu, omega_star)
    proj = u.projector(*context.parent.dims)
    eye = HermitianOperator.identity(*context.parent.dims)
    povm = {w: HermitianOperator.zeros(*context.parent.dims) for w in context.omega}
    povm[tuple(mu)] = eye - proj
    povm[tuple(omega_star)] = proj
    return povm


def trivial_strategy(context: PiContext, mu) -> dict[tuple, HermitianOperator]:
    """Always report outcome ``mu``; needs no measurement, hence is LOCC."""
    mu = tuple(mu)
    if mu not in context.omega:
        raise ValidationError(f"{mu} is not an outcome of the grid {context.omega}")
    dims = context.parent.dims
    return {
        w: HermitianOperator.identity(*dims) if w == mu else HermitianOperator.zeros(*dims)
        for w in context.omega
    }


def check_povm(povm: dict, dims, atol: float = 1e-9):
    total = None
    for w, m in povm.items():
        if m.dims != tuple(dims):
            raise ValidationError(f"POVM element {w} lives on {m.dims}, expected {dims}")
        if min_eig(m)[0] < -atol:
            raise ValidationError(f"POVM element {w} is not PSD")
        total = m if total is None else total + m
    if total is None or not total.allclose(HermitianOperator.identity(*dims), atol):
        raise ValidationError("POVM elements do not sum to the identity")


def pi_success_probability(context: PiContext, povm: dict) -> float:
    """Exact success probability of a strategy over the outcome grid.

    Outcome ``(w0, w1)`` guesses ``w0`` when the revealed bit is 0 and ``w1``
    when it is 1.
    """
    check_povm(povm, context.parent.dims)
    total = 0.0
    for w in context.omega:
        m = povm.get(w)
        if m is None:
            continue
        for lab in w:
            total += float(np.sum(context.parent.weighted_state(lab).entries * m.entries.T).real)
    return total
