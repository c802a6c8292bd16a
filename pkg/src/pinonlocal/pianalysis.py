"""Certificate-producing checks for nonlocality with and without PI, and the
annihilation/creation classifier.

LOCC guessing probabilities are never computed directly.  Every statement
about them in a report follows from one of two facts recorded alongside it:

* a strict separable gap (``p_SEP < p_G``) implies ``p_L < p_G`` because
  ``p_L <= p_SEP``;
* when one label dominates all others in the PSD order, always guessing it is
  optimal and needs no measurement, so ``p_L = p_G``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .cones import (
    DEFAULT_STARTS,
    DEFAULT_TOL,
    Cone,
    Confidence,
    ConeVerdict,
    in_psd,
    in_sep_star,
)
from .discrim import (
    DEFAULT_MAX_ITERS,
    DEFAULT_SOLVER_TOL,
    pi_values,
    pi_witness_lower_bound,
    psd_dominant_index,
    sep_star_dominant_index,
    solve_me,
)
from .ensembles import PiContext, StateEnsemble, make_pi_context
from .hermlin import HermitianOperator, ValidationError


class PreconditionError(ValidationError):
    """A check was called without the premise it depends on."""


class Theorem(enum.Enum):
    T1_SEP_VALUE = "T1_SEP_VALUE"
    T2_GAP = "T2_GAP"
    T3_PREMISE = "T3_PREMISE"
    T4_PREMISE = "T4_PREMISE"
    PROP1 = "PROP1"


class Conclusion(enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"


class Tri(enum.Enum):
    CERTIFIED_YES = "CERTIFIED_YES"
    CERTIFIED_NO = "CERTIFIED_NO"
    UNKNOWN = "UNKNOWN"


class Classification(enum.Enum):
    ANNIHILATES = "ANNIHILATES"
    CREATES = "CREATES"
    PRESERVES_NONLOCALITY = "PRESERVES_NONLOCALITY"
    PRESERVES_LOCALITY = "PRESERVES_LOCALITY"
    INCONCLUSIVE = "INCONCLUSIVE"


class Requirement(enum.Enum):
    PSD = "PSD"
    SEP_STAR = "SEP_STAR"
    EW = "EW"


@dataclass(frozen=True, eq=False)
class InclusionCheck:
    """Cone verdicts for one difference operator."""

    label: object
    operator: HermitianOperator = field(repr=False)
    psd: ConeVerdict
    sep_star: ConeVerdict | None

    @property
    def is_psd(self) -> bool:
        return self.psd.inside

    @property
    def is_sep_star(self) -> bool:
        return self.psd.inside or (self.sep_star is not None and self.sep_star.inside)

    @property
    def is_ew(self) -> bool:
        return self.is_sep_star and not self.is_psd

    @property
    def confidence(self) -> Confidence:
        # PSD implies block positive; only a see-saw IN without PSD is heuristic
        if self.is_ew:
            return self.sep_star.confidence
        return Confidence.CERTIFIED

    def satisfies(self, req: Requirement) -> bool:
        if req is Requirement.PSD:
            return self.is_psd
        if req is Requirement.EW:
            return self.is_ew
        return self.is_sep_star

    def to_dict(self) -> dict:
        out = {
            "label": _label_str(self.label),
            "psd": self.psd.to_dict(),
            "kind": "PSD" if self.is_psd else "EW" if self.is_ew else "NOT_SEP_STAR",
        }
        if self.sep_star is not None:
            out["sep_star"] = self.sep_star.to_dict()
        return out


def inclusion_check(
    label, h: HermitianOperator, tol: float = DEFAULT_TOL, starts: int = DEFAULT_STARTS, seed: int = 0
) -> InclusionCheck:
    psd = in_psd(h, tol)
    sep = in_sep_star(h, tol, starts=starts, seed=seed)
    return InclusionCheck(label, h, psd, sep)


def _combined(checks) -> Confidence:
    if any(c.confidence is Confidence.HEURISTIC for c in checks):
        return Confidence.HEURISTIC
    return Confidence.CERTIFIED


@dataclass(frozen=True, eq=False)
class TheoremCertificate:
    theorem: Theorem
    conclusion: Conclusion
    confidence: Confidence
    mu: object = None
    checks: tuple[InclusionCheck, ...] = ()
    ew_labels: tuple = ()
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.conclusion is Conclusion.HOLDS

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem.value,
            "conclusion": self.conclusion.value,
            "confidence": self.confidence.value,
            "mu": _label_str(self.mu),
            "ew_labels": [_label_str(x) for x in self.ew_labels],
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def _label_str(x):
    if x is None:
        return None
    if isinstance(x, tuple):
        return "(" + ",".join(str(y) for y in x) + ")"
    return str(x)


# --- PI-side checks -----------------------------------------------------------

def check_theorem1(
    context: PiContext,
    mu,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> TheoremCertificate:
    """Is ``2 eta~_mu`` the separable PI optimum?

    Holds iff ``eta~_mu rho~_mu - eta~_w rho~_w`` is block positive for every
    outcome ``w``.  Every difference is recorded, including the zero one at
    ``w = mu``.
    """
    mu = tuple(mu)
    if mu not in context.omega:
        raise ValidationError(f"mu={mu} is not in the outcome grid {context.omega}")
    checks = tuple(
        inclusion_check(w, context.difference(mu, w), tol, starts, seed) for w in context.omega
    )
    ok = all(c.is_sep_star for c in checks)
    notes = []
    if ok:
        value = 2 * context.tilde.prior(mu)
        notes.append(f"p_SEP^PI = 2*eta~{_label_str(mu)} = {value:.12g}")
        confidence = _combined(checks)
    else:
        bad = [_label_str(c.label) for c in checks if not c.is_sep_star]
        notes.append(f"product vector refutes block positivity at {', '.join(bad)}")
        confidence = Confidence.CERTIFIED
    return TheoremCertificate(
        Theorem.T1_SEP_VALUE,
        Conclusion.HOLDS if ok else Conclusion.FAILS,
        confidence,
        mu,
        checks,
        notes=tuple(notes),
    )


def check_theorem2(
    context: PiContext,
    mu,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
    premise: TheoremCertificate | None = None,
) -> TheoremCertificate:
    """Strict separable gap with PI, given the block-positivity premise at mu.

    HOLDS (``p_SEP^PI < p_G^PI``) iff some difference is an entanglement
    witness.  FAILS means every difference is PSD, so always reporting ``mu``
    is globally optimal.
    """
    if premise is None:
        premise = check_theorem1(context, mu, tol, starts, seed)
    if premise.theorem is not Theorem.T1_SEP_VALUE or tuple(premise.mu) != tuple(mu):
        raise PreconditionError("premise certificate does not match mu")
    if not premise.holds:
        raise PreconditionError(f"block-positivity premise fails at mu={tuple(mu)}")
    ews = tuple(c.label for c in premise.checks if c.is_ew)
    notes = []
    if ews:
        for w in ews:
            bound = pi_witness_lower_bound(context, mu, w, tol)
            notes.append(
                f"witness measurement at {_label_str(w)} attains {bound:.12g} "
                f"> 2*eta~{_label_str(tuple(mu))}"
            )
        conclusion = Conclusion.HOLDS
    else:
        notes.append(
            "all differences PSD: always reporting mu attains p_G^PI, "
            "and needs no measurement, so p_L^PI = p_SEP^PI = p_G^PI"
        )
        conclusion = Conclusion.FAILS
    return TheoremCertificate(
        Theorem.T2_GAP,
        conclusion,
        premise.confidence,
        tuple(mu),
        premise.checks,
        ews,
        tuple(notes),
    )


# --- base-ensemble premise patterns ----------------------------------------

_T3_PATTERN = (
    ((0, 1), Requirement.PSD),
    ((0, 2), Requirement.EW),
    ((1, 3), Requirement.SEP_STAR),
    ((2, 3), Requirement.PSD),
)
_T4_PATTERN = (
    ((0, 1), Requirement.PSD),
    ((0, 2), Requirement.PSD),
    ((1, 3), Requirement.PSD),
    ((2, 3), Requirement.EW),
)


def _check_pattern(ensemble, pattern, theorem, tol, starts, seed, consequence):
    if len(ensemble) != 4:
        raise ValidationError(f"premise check needs exactly 4 states, got {len(ensemble)}")
    labs = ensemble.labels
    checks, failed = [], []
    for (i, j), req in pattern:
        pair = (labs[i], labs[j])
        c = inclusion_check(pair, ensemble.difference(*pair), tol, starts, seed)
        checks.append(c)
        if not c.satisfies(req):
            failed.append(f"{_label_str(pair)} is not {req.value}")
    ok = not failed
    return TheoremCertificate(
        theorem,
        Conclusion.HOLDS if ok else Conclusion.FAILS,
        _combined(checks) if ok else Confidence.CERTIFIED,
        labs[0],
        tuple(checks),
        tuple(c.label for c in checks if c.is_ew),
        (consequence,) if ok else tuple(failed),
    )


def check_theorem3_premises(
    ensemble: StateEnsemble, tol: float = DEFAULT_TOL, starts: int = DEFAULT_STARTS, seed: int = 0
) -> TheoremCertificate:
    """Premises under which PI about {1,2} annihilates nonlocality but {1,3} does not."""
    l = ensemble.labels
    msg = (
        f"PI_{{{l[0]},{l[1]}}} annihilates nonlocality "
        f"but PI_{{{l[0]},{l[2]}}} does not" if len(l) == 4 else ""
    )
    return _check_pattern(ensemble, _T3_PATTERN, Theorem.T3_PREMISE, tol, starts, seed, msg)


def check_theorem4_premises(
    ensemble: StateEnsemble, tol: float = DEFAULT_TOL, starts: int = DEFAULT_STARTS, seed: int = 0
) -> TheoremCertificate:
    """Premises under which PI about {1,2} creates nonlocality but {1,3} does not."""
    l = ensemble.labels
    msg = (
        f"PI_{{{l[0]},{l[1]}}} creates nonlocality "
        f"but PI_{{{l[0]},{l[2]}}} does not" if len(l) == 4 else ""
    )
    return _check_pattern(ensemble, _T4_PATTERN, Theorem.T4_PREMISE, tol, starts, seed, msg)


# --- classifier ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Leg:
    """Nonlocality status of one game (with or without PI) and its proof."""

    nonlocal_: Tri
    certificate: TheoremCertificate | None
    confidence: Confidence
    derivation: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "nonlocal": self.nonlocal_.value,
            "confidence": self.confidence.value,
            "derivation": list(self.derivation),
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class PiReport:
    s: tuple
    base: Leg
    pi: Leg
    classification: Classification
    confidence: Confidence
    values: dict

    def to_dict(self) -> dict:
        return {
            "S": [str(x) for x in self.s],
            "classification": self.classification.value,
            "confidence": self.confidence.value,
            "values": dict(self.values),
            "base": self.base.to_dict(),
            "pi": self.pi.to_dict(),
        }


def _base_leg(ensemble, tol, starts, seed, values) -> Leg:
    dom = sep_star_dominant_index(ensemble, tol, starts, seed)
    if dom is not None and dom.ew_found:
        checks = tuple(
            InclusionCheck(
                lab,
                ensemble.difference(dom.mu, lab),
                in_psd(ensemble.difference(dom.mu, lab), tol),
                v if v.cone is Cone.SEP_STAR else None,
            )
            for lab, v in dom.checks
        )
        cert = TheoremCertificate(
            Theorem.PROP1,
            Conclusion.HOLDS,
            _combined(checks),
            dom.mu,
            checks,
            dom.ew_labels,
            (f"p_SEP = eta_{dom.mu} = {ensemble.prior(dom.mu):.12g}",),
        )
        values["p_SEP"] = ensemble.prior(dom.mu)
        return Leg(
            Tri.CERTIFIED_YES,
            cert,
            cert.confidence,
            (
                f"all eta_{dom.mu} rho_{dom.mu} - eta_i rho_i block positive",
                "witness among them: p_SEP < p_G",
                "p_L <= p_SEP < p_G",
            ),
        )
    psd_dom = psd_dominant_index(ensemble, tol)
    if psd_dom is not None:
        checks = tuple(
            InclusionCheck(lab, ensemble.difference(psd_dom.mu, lab), v, None) for lab, v in psd_dom.checks
        )
        cert = TheoremCertificate(
            Theorem.PROP1,
            Conclusion.FAILS,
            Confidence.CERTIFIED,
            psd_dom.mu,
            checks,
            (),
            (f"p_G = eta_{psd_dom.mu} = {ensemble.prior(psd_dom.mu):.12g}",),
        )
        values["p_SEP"] = ensemble.prior(psd_dom.mu)
        return Leg(
            Tri.CERTIFIED_NO,
            cert,
            Confidence.CERTIFIED,
            (
                f"all eta_{psd_dom.mu} rho_{psd_dom.mu} - eta_i rho_i PSD",
                f"always guessing {psd_dom.mu} is optimal and needs no measurement",
                "p_L = p_SEP = p_G",
            ),
        )
    return Leg(Tri.UNKNOWN, None, Confidence.CERTIFIED, ("no dominant label found",))


def _pi_leg(context, tol, starts, seed, values) -> Leg:
    for mu in context.omega:
        t1 = check_theorem1(context, mu, tol, starts, seed)
        if not t1.holds:
            continue
        t2 = check_theorem2(context, mu, tol, starts, seed, premise=t1)
        values["p_SEP_PI"] = 2 * context.tilde.prior(mu)
        if t2.holds:
            bounds = [pi_witness_lower_bound(context, mu, w, tol) for w in t2.ew_labels]
            values["pi_witness_bound"] = max(bounds)
            return Leg(
                Tri.CERTIFIED_YES,
                t2,
                t2.confidence,
                (
                    f"block-positivity premise holds at mu={_label_str(mu)}: p_SEP^PI = 2 eta~_mu",
                    f"witness difference at {', '.join(_label_str(w) for w in t2.ew_labels)}: "
                    "p_SEP^PI < p_G^PI",
                    "p_L^PI <= p_SEP^PI < p_G^PI",
                ),
            )
        return Leg(
            Tri.CERTIFIED_NO,
            t2,
            t2.confidence,
            (
                f"all differences at mu={_label_str(mu)} PSD",
                "always reporting mu is optimal and needs no measurement",
                "p_L^PI = p_SEP^PI = p_G^PI",
            ),
        )
    return Leg(Tri.UNKNOWN, None, Confidence.CERTIFIED, ("no outcome satisfies the block-positivity premise",))


_TABLE = {
    (Tri.CERTIFIED_YES, Tri.CERTIFIED_NO): Classification.ANNIHILATES,
    (Tri.CERTIFIED_NO, Tri.CERTIFIED_YES): Classification.CREATES,
    (Tri.CERTIFIED_YES, Tri.CERTIFIED_YES): Classification.PRESERVES_NONLOCALITY,
    (Tri.CERTIFIED_NO, Tri.CERTIFIED_NO): Classification.PRESERVES_LOCALITY,
}


def classify(
    ensemble: StateEnsemble,
    s,
    tol: float = DEFAULT_TOL,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
    solver_tol: float = DEFAULT_SOLVER_TOL,
) -> PiReport:
    """Decide whether PI about S annihilates, creates or preserves nonlocality.

    Outcomes of the averaged ensemble are tried in lexicographic order and
    the first one meeting the block-positivity premise is used.  Anything
    that no certificate chain covers is reported INCONCLUSIVE.
    """
    context = s if isinstance(s, PiContext) else make_pi_context(ensemble, s)
    values: dict = {}
    base = _base_leg(ensemble, tol, starts, seed, values)
    pi = _pi_leg(context, tol, starts, seed, values)

    result = solve_me(ensemble, max_iters=max_iters, tol=solver_tol)
    values["p_G"] = result.value
    values["p_G_certified"] = result.converged
    pg_pi, pi_result = pi_values(ensemble, context, max_iters=max_iters, tol=solver_tol)
    values["p_G_PI"] = pg_pi
    values["p_G_PI_certified"] = pi_result.converged

    cls = _TABLE.get((base.nonlocal_, pi.nonlocal_), Classification.INCONCLUSIVE)
    confidence = (
        Confidence.HEURISTIC
        if Confidence.HEURISTIC in (base.confidence, pi.confidence)
        else Confidence.CERTIFIED
    )
    return PiReport(context.s, base, pi, cls, confidence, values)
