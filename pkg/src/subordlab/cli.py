"""Command-line front end.  Reports go to stdout as one JSON object per line.

Exit codes: 0 when every verdict is Holds/Pass, 1 when any is Fails/Fail,
2 otherwise (something Inconclusive), 3 for usage and parse errors.

Settings are resolved as defaults < ``--config`` file < flags; the suite
seed additionally honours ``SUBORDLAB_SEED``, which an explicit ``--seed``
flag still overrides.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from . import lemmas
from .disk import ProbeConfig, subordination_check
from .dsl import parse_complex, parse_function_spec, parse_map
from .errors import ParameterError, ParseError, QNotAdmissible, SubordlabError, UsageError
from .operators import ClassParams, OperatorParams, class_membership, operator_series
from .operators import robertson_functional, spirallike_functional
from .reports import RunReport, load_config, write_curve_csv
from .theorems import (
    TheoremRun,
    iter_suite,
    summarize,
    verify_corollary_robertson,
    verify_corollary_spirallike,
    verify_sandwich,
    verify_th31,
    verify_th32,
    verify_th41_superordination,
)
from .zoo import AnalyticMap, PValentFunction, make_pvalent

SEED_ENV = "SUBORDLAB_SEED"
EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(f"bad complex literal {text!r}: {exc}") from exc


def _radii_arg(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radii list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file (radii, n_theta, tol, order, seed)")
    common.add_argument("--radii", type=_radii_arg, help="comma-separated probe radii")
    common.add_argument("--n-theta", type=int, dest="n_theta")
    common.add_argument("--tol", type=float)
    common.add_argument("--order", type=int)
    common.add_argument("--seed", type=int)

    parser = _Parser(prog="subordlab", description="Numerical subordination verifier.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-subordination", parents=[common], help="test g < h")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--dump-curve", metavar="CSV", help="write h on |z| = r_max as theta,re,im")

    p = sub.add_parser("verify-lemma", parents=[common], help="check one preliminary lemma")
    p.add_argument("--name", required=True, choices=["royster", "lemma24", "lemma25", "lemma26",
                                                     "lemma27", "th31-admissibility",
                                                     "th32-admissibility"])
    p.add_argument("--lam", type=_complex_arg)
    p.add_argument("--q")
    p.add_argument("--B", type=float)
    p.add_argument("--zeta", type=_complex_arg)
    p.add_argument("--u", type=_complex_arg)
    p.add_argument("--v", type=_complex_arg)
    p.add_argument("--gamma", type=_complex_arg, default=1.0)
    p.add_argument("--sigma", type=_complex_arg, default=1.0)

    p = sub.add_parser("verify-theorem", parents=[common], help="implication test of a theorem")
    p.add_argument("--theorem", required=True,
                   choices=["th31", "th32", "th41", "sandwich", "spirallike", "robertson"])
    p.add_argument("--f")
    p.add_argument("--q")
    p.add_argument("--q2")
    p.add_argument("--eta", type=_complex_arg, default=1.0)
    p.add_argument("--mu", type=_complex_arg, default=0.0)
    p.add_argument("--gamma", type=_complex_arg, default=1.0)
    p.add_argument("--sigma", type=_complex_arg, default=1.0)
    p.add_argument("--a", type=_complex_arg, default=0.5)
    p.add_argument("--lambda", type=float, default=0.0, dest="spiral_angle")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--b", type=_complex_arg, default=1.0)
    p.add_argument("--suite", type=int, metavar="N", help="N seeded random runs (th31/th32)")
    p.add_argument("--summary-only", action="store_true")

    p = sub.add_parser("class-test", parents=[common], help="spirallike/Robertson membership")
    p.add_argument("--f", required=True)
    p.add_argument("--which", choices=["spirallike", "robertson"], default="spirallike")
    p.add_argument("--lambda", type=float, default=0.0, dest="spiral_angle")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--b", type=_complex_arg, default=1.0)

    p = sub.add_parser("expand-operator", parents=[common], help="Taylor coefficients of F[f]")
    p.add_argument("--f", required=True)
    p.add_argument("--eta", type=_complex_arg, required=True)
    p.add_argument("--mu", type=_complex_arg, required=True)

    p = sub.add_parser("region-scan", parents=[common],
                       help="compare the Royster region with numeric univalence of (1-z)^lam")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--extent", type=float, default=2.5)
    p.add_argument("--band", type=float, default=0.05)
    return parser


# -- settings ---------------------------------------------------------------------

def _settings(args) -> tuple[ProbeConfig, int]:
    conf = load_config(args.config) if args.config else {}
    for key in ("radii", "n_theta", "tol", "order"):
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    seed = conf.pop("seed", 0)
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            seed = int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    if args.seed is not None:
        seed = args.seed
    try:
        cfg = ProbeConfig(**conf)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid probe settings: {exc}") from exc
    return cfg, int(seed)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + m for m in missing))


def _valence(spec) -> tuple[AnalyticMap, int]:
    if isinstance(spec, PValentFunction):
        return make_pvalent(spec), spec.p
    return spec, spec.valence or 1


# -- commands ---------------------------------------------------------------------

def _cmd_check(args, cfg, seed, err):
    g, h = parse_map(args.g), parse_map(args.h)
    v = subordination_check(g, h, cfg)
    params = {"g": g.descriptor, "h": h.descriptor, "reason": v.reason}
    if args.dump_curve:
        with open(args.dump_curve, "w", encoding="utf-8", newline="\n") as fh:
            write_curve_csv(h, cfg.r_max, cfg.n_theta, fh)
    yield RunReport("check-subordination", v.status.value, v.margin, params, v.witness, cfg, seed)


def _dominant_spec(q: AnalyticMap) -> lemmas.DominantSpec:
    if q.family == "moebius":
        return lemmas.DominantSpec("moebius", dict(q.params))
    if q.family == "binomial_power":
        return lemmas.DominantSpec("binomial_power", {"B": q.params["B"], "lam": q.params["lam"]})
    raise UsageError("lemma24 needs --q of family moebius or binpow")


def _cmd_lemma(args, cfg, seed, err):
    name = args.name
    if name == "royster":
        _need(args, "lam")
        member = lemmas.royster_region(args.lam)
        yield RunReport("verify-lemma:royster", "Pass" if member else "Fail",
                        lemmas.royster_distance(args.lam), {"lam": args.lam, "member": member},
                        None, cfg, seed)
        return
    if name == "lemma24":
        _need(args, "q")
        rep = lemmas.lemma24_check(_dominant_spec(parse_map(args.q)), cfg)
    elif name == "lemma25":
        _need(args, "q")
        rep = lemmas.lemma25_nonvanishing(parse_map(args.q), cfg)
    elif name == "lemma26":
        _need(args, "B", "zeta")
        rep = lemmas.lemma26_threshold(args.B, args.zeta, cfg)
    elif name == "lemma27":
        _need(args, "u", "v", "B")
        rep = lemmas.lemma27_halfplane(args.u, args.v, args.B, cfg)
    elif name == "th31-admissibility":
        _need(args, "q")
        try:
            rep = lemmas.th31_admissibility(parse_map(args.q), args.gamma, cfg)
        except QNotAdmissible as exc:
            rep = lemmas.LemmaReport("th31_admissibility", lemmas.Outcome.FAIL, math.nan,
                                     {"error": str(exc)})
    else:
        _need(args, "q")
        rep = lemmas.th32_admissibility(parse_map(args.q), args.sigma, args.gamma, cfg)
    used = {"lemma24": ("q",), "lemma25": ("q",), "lemma26": ("B", "zeta"),
            "lemma27": ("u", "v", "B"), "th31-admissibility": ("q", "gamma"),
            "th32-admissibility": ("q", "sigma", "gamma")}[name]
    params = {k: getattr(args, k) for k in used}
    params["details"] = _plain(rep.details)
    yield RunReport(f"verify-lemma:{name}", rep.status.value, rep.margin, params, None, cfg, seed)


def _plain(obj):
    """Make lemma details serialisable (float dict keys, numpy scalars)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def run_report(run: TheoremRun, seed: int) -> RunReport:
    params = {"theorem": run.theorem, "functions": dict(run.functions), "op": dict(run.params),
              "vacuous": run.vacuous, "assumptions": dict(run.assumptions)}
    for tag, checks in (("hyp", run.hypotheses), ("concl", run.conclusions)):
        for c in checks:
            params[f"{tag}.{c.name}.status"] = c.status.value
            params[f"{tag}.{c.name}.margin"] = float(c.margin)
    witness = None
    if run.counterexample is not None:
        witness = run.counterexample["witness"]
    return RunReport(f"verify-theorem:{run.theorem}", run.verdict.value, run.margin, params,
                     witness, run.probe, seed)


def _cmd_theorem(args, cfg, seed, err):
    th = args.theorem
    if args.suite is not None:
        if th not in ("th31", "th32"):
            raise UsageError("--suite is available for th31 and th32")
        if args.suite < 1:
            raise UsageError("--suite needs a positive run count")
        runs = []
        for run in iter_suite(th, args.suite, seed, cfg):
            runs.append(run)
            if not args.summary_only:
                yield run_report(run, seed)
            if run.counterexample is not None:
                err.write("counterexample state reached; aborting suite\n")
                err.write(run.dump() + "\n")
                break
        s = summarize(th, seed, runs)
        verdict = "Fails" if s.counterexamples else "Holds"
        params = {"theorem": th, "runs": s.runs, "holds": s.holds,
                  "inconclusive": s.inconclusive, "vacuous": s.vacuous,
                  "non_vacuous": s.non_vacuous, "non_vacuous_fraction": s.non_vacuous_fraction,
                  "counterexamples": s.counterexamples}
        yield RunReport(f"suite:{th}", verdict, math.nan, params, None, cfg, seed)
        return

    if th in ("spirallike", "robertson"):
        _need(args, "f")
        f, p = _valence(parse_function_spec(args.f))
        cls = ClassParams(p, args.spiral_angle, args.alpha, args.b)
        verify = verify_corollary_spirallike if th == "spirallike" else verify_corollary_robertson
        yield run_report(verify(f, cls, args.a, cfg), seed)
        return

    _need(args, "f", "q")
    f, p = _valence(parse_function_spec(args.f))
    q = parse_map(args.q)
    params = OperatorParams(args.eta, args.mu, p, args.gamma, args.sigma)
    if th == "th31":
        run = verify_th31(f, params, q, cfg)
    elif th == "th32":
        run = verify_th32(f, params, q, cfg)
    elif th == "th41":
        run = verify_th41_superordination(f, params, q, cfg)
    else:
        _need(args, "q2")
        run = verify_sandwich(f, params, q, parse_map(args.q2), cfg)
    if run.counterexample is not None:
        err.write(run.dump() + "\n")
    yield run_report(run, seed)


def _cmd_class(args, cfg, seed, err):
    f, p = _valence(parse_function_spec(args.f))
    cls = ClassParams(p, args.spiral_angle, args.alpha, args.b)
    m = class_membership(f, cls, args.which, cfg)
    witness = None
    if m.status.value == "Fails":
        fn = spirallike_functional if args.which == "spirallike" else robertson_functional
        witness = (m.z_min, fn(f, cls, m.z_min))
    params = {"f": f.descriptor, "which": args.which, "p": p, "lambda": args.spiral_angle,
              "alpha": args.alpha, "b": args.b, "min_re": m.min_re}
    yield RunReport(f"class-test:{args.which}", m.status.value, m.margin, params, witness,
                    cfg, seed)


def _cmd_expand(args, cfg, seed, err):
    f, p = _valence(parse_function_spec(args.f))
    params = OperatorParams(args.eta, args.mu, p)
    ser = operator_series(f, params, cfg.order)
    a_next = complex(f.series_at_origin(p + 1).coeffs[p + 1])
    predicted = params.first_coefficient_factor * a_next
    err = abs(complex(ser.coeffs[1]) - predicted) if cfg.order >= 1 else 0.0
    rep = {"f": f.descriptor, "eta": args.eta, "mu": args.mu, "p": p,
           "coeffs": [complex(c) for c in ser.coeffs], "z_coefficient": complex(ser.coeffs[1]),
           "predicted_z_coefficient": predicted, "z_coefficient_error": err}
    verdict = "Pass" if err <= 1e-10 else "Fail"
    yield RunReport("expand-operator", verdict, 1e-10 - err, rep, None, cfg, seed)


def _cmd_region(args, cfg, seed, err):
    if args.grid < 1 or not args.extent > 0:
        raise UsageError("region-scan needs --grid >= 1 and --extent > 0")
    axis = np.linspace(-args.extent, args.extent, args.grid) if args.grid > 1 else np.zeros(1)
    for im in axis:
        for re in axis:
            lam = complex(float(re), float(im))
            if lam == 0:
                continue
            rep = lemmas.royster_point(lam, cfg, args.band)
            params = {"lam": lam, **_plain({k: v for k, v in rep.details.items()
                                            if k != "witness"})}
            wit = rep.details.get("witness")
            yield RunReport("region-scan", rep.status.value, rep.margin, params,
                            None if wit is None else (wit[0], wit[1]), cfg, seed)


COMMANDS = {
    "check-subordination": _cmd_check,
    "verify-lemma": _cmd_lemma,
    "verify-theorem": _cmd_theorem,
    "class-test": _cmd_class,
    "expand-operator": _cmd_expand,
    "region-scan": _cmd_region,
}


def exit_code(verdicts: Iterable[str]) -> int:
    vs = list(verdicts)
    if any(v in ("Fails", "Fail") for v in vs):
        return EXIT_FAIL
    if vs and all(v in ("Holds", "Pass") for v in vs):
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[IO[str]] = None,
         stderr: Optional[IO[str]] = None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg, seed = _settings(args)
        verdicts = []
        is_suite = args.command == "verify-theorem" and args.suite is not None
        for rep in COMMANDS[args.command](args, cfg, seed, err):
            out.write(rep.to_json() + "\n")
            if not is_suite or rep.check.startswith("suite:"):
                verdicts.append(rep.verdict)
        out.flush()
        return exit_code(verdicts)
    except (UsageError, ParseError, ParameterError, OSError) as exc:
        err.write(f"error: {exc}\n")
        err.write(parser.format_usage())
        return EXIT_USAGE
    except SubordlabError as exc:
        err.write(f"inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
