"""Command-line front end.

    pinonlocal analyze  --input E.json [--subset 1,2]
    pinonlocal examples example3 --output example3.json
    pinonlocal pi       --input E.json --subset 1,2
    pinonlocal simulate --input E.json --subset 1,2 --strategy witness --trials 1000000
    pinonlocal certify  --input E.json | W.json

Exit codes: 0 success, 2 validation error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations
from pathlib import Path

from . import io
from .cones import DEFAULT_STARTS, DEFAULT_TOL, in_psd, in_sep_star, is_ew
from .discrim import pi_values, solve_me, trivial_strategy, witness_strategy
from .ensembles import EXAMPLE_BUILDERS, make_pi_context
from .hermlin import ValidationError
from .pianalysis import (
    check_theorem1,
    check_theorem2,
    check_theorem3_premises,
    check_theorem4_premises,
    classify,
)
from .simulate import simulate

EXIT_OK, EXIT_VALIDATION, EXIT_INTERNAL = 0, 2, 3


def _resolve_labels(text: str, labels) -> list:
    by_name = {str(lab): lab for lab in labels}
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in by_name:
            raise ValidationError(f"unknown label {tok!r}; labels are {list(by_name)}")
        out.append(by_name[tok])
    return out


def _subsets(args, ensemble):
    if args.subset:
        return [_resolve_labels(args.subset, ensemble.labels)]
    return [list(s) for s in combinations(ensemble.labels, len(ensemble) // 2)]


def _fmt(x):
    return f"{x:.10f}" if isinstance(x, float) else str(x)


def _emit(args, doc, human_lines):
    if args.format == "json":
        print(json.dumps(doc, indent=1))
    else:
        print("\n".join(human_lines))


def cmd_analyze(args) -> int:
    ensemble = io.load_ensemble(args.input)
    reports = [
        classify(ensemble, s, tol=args.tol, starts=args.starts, seed=args.seed)
        for s in _subsets(args, ensemble)
    ]
    lines = [f"{'S':<10}{'classification':<24}{'confidence':<12}{'base':<15}{'pi':<15}p_G^PI"]
    for r in reports:
        lines.append(
            f"{'{' + ','.join(map(str, r.s)) + '}':<10}{r.classification.value:<24}"
            f"{r.confidence.value:<12}{r.base.nonlocal_.value:<15}{r.pi.nonlocal_.value:<15}"
            f"{_fmt(r.values['p_G_PI'])}"
        )
    _emit(args, {"seed": args.seed, "reports": [r.to_dict() for r in reports]}, lines)
    return EXIT_OK


def cmd_examples(args) -> int:
    names = list(EXAMPLE_BUILDERS) if args.name == "all" else [args.name]
    for name in names:
        if name not in EXAMPLE_BUILDERS:
            raise ValidationError(f"unknown example {name!r}; choose from {list(EXAMPLE_BUILDERS)}")
    w = io.load_operator(args.witness) if args.witness else None
    for name in names:
        builder = EXAMPLE_BUILDERS[name]
        ensemble = builder(w) if name in ("example1", "example2") else builder()
        if args.output is None:
            print(json.dumps(io.ensemble_to_doc(ensemble), indent=1))
            continue
        out = Path(args.output)
        if len(names) > 1 or out.is_dir():
            out.mkdir(parents=True, exist_ok=True)
            out = out / f"{name}.json"
        io.dump_ensemble(ensemble, out)
        print(f"wrote {out}", file=sys.stderr)
    return EXIT_OK


def cmd_pi(args) -> int:
    ensemble = io.load_ensemble(args.input)
    docs, lines = [], []
    for s in _subsets(args, ensemble):
        ctx = make_pi_context(ensemble, s)
        pg_pi, result = pi_values(ensemble, ctx)
        sep_value = None
        for mu in ctx.omega:
            if check_theorem1(ctx, mu, args.tol, args.starts, args.seed).holds:
                sep_value = 2 * ctx.tilde.prior(mu)
                break
        docs.append({
            "S": [str(x) for x in ctx.s],
            "omega": [list(map(str, w)) for w in ctx.omega],
            "tilde_priors": list(ctx.tilde.priors),
            "p_G_PI": pg_pi,
            "certified": result.converged,
            "dual_margins": list(result.dual_margins),
            "p_SEP_PI": sep_value,
        })
        lines.append(f"S = {{{','.join(map(str, ctx.s))}}}")
        for w, p in zip(ctx.omega, ctx.tilde.priors):
            lines.append(f"  eta~{w} = {_fmt(p)}")
        lines.append(f"  p_G^PI   = {_fmt(pg_pi)}  (certified: {result.converged})")
        lines.append(f"  p_SEP^PI = {_fmt(sep_value) if sep_value is not None else 'unknown'}")
    _emit(args, {"results": docs}, lines)
    return EXIT_OK


def _pick_strategy(args, ensemble, ctx):
    if args.strategy == "optimal":
        _, result = pi_values(ensemble, ctx)
        return {w: result.element(w) for w in ctx.omega}, None
    mu = tuple(_resolve_labels(args.mu, ensemble.labels)) if args.mu else None
    if mu is None:
        for cand in ctx.omega:
            if check_theorem1(ctx, cand, args.tol, args.starts, args.seed).holds:
                mu = cand
                break
        else:
            raise ValidationError("no outcome meets the block-positivity premise; pass --mu")
    if args.strategy == "trivial":
        return trivial_strategy(ctx, mu), mu
    if args.omega_star:
        omega_star = tuple(_resolve_labels(args.omega_star, ensemble.labels))
    else:
        t2 = check_theorem2(ctx, mu, args.tol, args.starts, args.seed)
        if not t2.ew_labels:
            raise ValidationError(f"no witness difference at mu={mu}; pass --omega-star")
        omega_star = t2.ew_labels[0]
    return witness_strategy(ctx, mu, omega_star), mu


def cmd_simulate(args) -> int:
    from .discrim import pi_success_probability

    ensemble = io.load_ensemble(args.input)
    if not args.subset:
        raise ValidationError("simulate needs --subset")
    if args.trials <= 0:
        raise ValidationError("--trials must be positive")
    ctx = make_pi_context(ensemble, _resolve_labels(args.subset, ensemble.labels))
    strategy, mu = _pick_strategy(args, ensemble, ctx)
    res = simulate(ensemble, ctx, strategy, args.trials, args.seed)
    analytic = pi_success_probability(ctx, strategy)
    doc = {
        "S": [str(x) for x in ctx.s],
        "strategy": args.strategy,
        "mu": None if mu is None else [str(x) for x in mu],
        "trials": res.trials,
        "seed": res.seed,
        "successes": res.successes,
        "estimate": res.estimate,
        "stderr": res.stderr,
        "analytic": analytic,
    }
    lines = [
        f"strategy {args.strategy} on S={{{','.join(map(str, ctx.s))}}}, seed {res.seed}",
        f"  estimate {res.estimate:.6f} +- {res.stderr:.6f} over {res.trials} trials",
        f"  analytic {analytic:.6f}",
    ]
    _emit(args, doc, lines)
    return EXIT_OK


def cmd_certify(args) -> int:
    doc = io.load_document(args.input)
    if isinstance(doc, dict) and "states" in doc:
        ensemble = io.ensemble_from_doc(doc)
        result = solve_me(ensemble)
        certs = []
        if len(ensemble) == 4:
            certs = [
                check_theorem3_premises(ensemble, args.tol, args.starts, args.seed),
                check_theorem4_premises(ensemble, args.tol, args.starts, args.seed),
            ]
        out = {
            "p_G": result.value,
            "certified": result.converged,
            "dual_margins": list(result.dual_margins),
            "premises": [c.to_dict() for c in certs],
        }
        lines = [f"p_G = {_fmt(result.value)} (certified: {result.converged})"]
        for c in certs:
            lines.append(f"{c.theorem.value}: {c.conclusion.value} [{c.confidence.value}]")
            for chk in c.checks:
                kind = "PSD" if chk.is_psd else "EW" if chk.is_ew else "not block positive"
                lines.append(f"  {chk.label}: {kind} (min eig {chk.psd.margin:.6g})")
            lines.extend(f"  {n}" for n in c.notes)
    else:
        h = io.operator_from_literal(doc)
        verdicts = [
            in_psd(h, args.tol),
            in_sep_star(h, args.tol, starts=args.starts, seed=args.seed),
            is_ew(h, args.tol, starts=args.starts, seed=args.seed),
        ]
        out = {"verdicts": [v.to_dict() for v in verdicts]}
        lines = [
            f"{v.cone.value:<9} {v.status.value:<4} margin {v.margin:.6g} [{v.confidence.value}]"
            for v in verdicts
        ]
    _emit(args, out, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "json"), default="human")

    parser = argparse.ArgumentParser(prog="pinonlocal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify PI partitions")
    p.add_argument("--input", required=True)
    p.add_argument("--subset", help="comma-separated labels of S (default: all halves)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("examples", parents=[common], help="write fixture ensembles")
    p.add_argument("name", help="example1..example4 or all")
    p.add_argument("--output", help="file or directory (default: stdout)")
    p.add_argument("--witness", help="operator file used as W for example1/2")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("pi", parents=[common], help="averaged ensemble and PI values")
    p.add_argument("--input", required=True)
    p.add_argument("--subset")
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo guessing game")
    p.add_argument("--input", required=True)
    p.add_argument("--subset")
    p.add_argument("--strategy", choices=("trivial", "witness", "optimal"), default="trivial")
    p.add_argument("--mu", help="outcome pair for trivial/witness strategies, e.g. 1,3")
    p.add_argument("--omega-star", help="outcome receiving the witness projector")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("certify", parents=[common], help="premise or cone certificates")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
