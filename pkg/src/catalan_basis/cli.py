"""Command-line front end.

Exit status: 0 when every check passes, 1 on a verification failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import verifier as V
from .catalan_core import ArrangementParams, Derivation, basis, hyperplanes, psi, psi_coned

WORKERS_ENV = "CATALAN_BASIS_WORKERS"
IDENTITY_CHECKS = ("prop1", "lemma1", "prop2", "phi", "phi_partial", "symm", "integral")

# acceptance-suite ranges used when a range flag is omitted
DEFAULT_RANGES = {
    "prop1": {"m": (0, 3), "u": (1, 4)},
    "lemma1": {"m": (0, 4), "u": (0, 4)},
    "prop2": {"m": (0, 3), "u": (0, 3)},
    "phi": {"m": (0, 3), "v": (0, 3)},
    "phi_partial": {"m": (0, 3), "v": (0, 3)},
    "symm": {"ell": (2, 4), "m": (0, 2), "u": (0, 2)},
    "integral": {"m": (0, 3), "u": (0, 3)},
}


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    """``"a..b"`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a..b") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _params(args) -> ArrangementParams:
    try:
        return ArrangementParams(args.ell, args.m)
    except ValueError as e:
        raise UsageError(str(e)) from None


# -- task execution -------------------------------------------------------------


def _run_task(task):
    name, kwargs = task
    if name == "membership":
        return V.check_membership(ArrangementParams(kwargs["ell"], kwargs["m"]), kwargs["u"])
    if name == "saito":
        return V.saito_report(ArrangementParams(kwargs["ell"], kwargs["m"]))
    if name == "prop1":
        return V.check_prop1(kwargs["m"], kwargs["u"])
    if name == "lemma1":
        return V.check_lemma1(kwargs["m"], kwargs["u"])
    if name == "prop2":
        return V.prop2_report(kwargs["m"], kwargs["u"])
    if name == "phi":
        return V.check_phi(kwargs["m"], kwargs["k"], kwargs["v"])
    if name == "phi_partial":
        return V.check_phi_partial(kwargs["m"], kwargs["k"], kwargs["v"], kwargs["r"])
    if name == "symm":
        return V.check_symm_recurrence(kwargs["ell"], kwargs["m"], kwargs["u"], kwargs["i"])
    if name == "integral":
        return V.check_integral_formula(kwargs["m"], kwargs["u"])
    raise ValueError(f"unknown task {name!r}")


def _workers(args) -> int:
    if args.workers is not None:
        return max(1, args.workers)
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def run_tasks(tasks, workers: int = 1) -> list[V.VerificationReport]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_task, tasks))
    else:
        reports = [_run_task(t) for t in tasks]
    return sorted(reports, key=V.VerificationReport.sort_key)


def _emit_reports(reports, args, out) -> int:
    for r in reports:
        if args.format == "json":
            out.write(r.to_json() + "\n")
        else:
            params = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            line = f"{r.status.upper():4} {r.check_id} {params}"
            if r.detail:
                line += f"  [{r.detail}]"
            if not r.passed:
                line += f"\n     witness: {r.witness}"
            out.write(line + "\n")
        if args.timing:
            print(f"{r.check_id} {sorted(r.params.items())} {r.elapsed:.4f}s", file=sys.stderr)
    failed = sum(not r.passed for r in reports)
    if args.format == "text":
        out.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
    return 1 if failed else 0


# -- subcommands ----------------------------------------------------------------


def cmd_basis(args, out) -> int:
    params = _params(args)
    derivs = basis(params)
    if args.format == "json":
        payload = {
            "ell": params.ell,
            "m": params.m,
            "vars": list(params.vars),
            "derivations": [d.to_dict() for d in derivs],
        }
        out.write(json.dumps(payload, separators=(",", ":")) + "\n")
    else:
        for d in derivs:
            out.write(f"{d.label} = {d}\n")
    return 0


def _load_derivations(path: str) -> tuple[ArrangementParams, list[Derivation]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        params = ArrangementParams(int(data["ell"]), int(data["m"]))
        derivs = [Derivation.from_dict(d) for d in data["derivations"]]
    except (OSError, KeyError, ValueError, TypeError) as e:
        raise UsageError(f"cannot read derivations from {path}: {e}") from None
    return params, derivs


def cmd_verify(args, out) -> int:
    if args.derivations:
        params, derivs = _load_derivations(args.derivations)
        reports = [V.check_membership(params, u, derivation=d) for u, d in enumerate(derivs[1:])]
        reports.append(V.saito_report(params, derivations=derivs))
        reports.sort(key=V.VerificationReport.sort_key)
        return _emit_reports(reports, args, out)
    params = _params(args)
    top = params.ell if args.profile == "thorough" else params.ell - 1
    tasks = [("membership", {"ell": params.ell, "m": params.m, "u": u}) for u in range(top + 1)]
    tasks.append(("saito", {"ell": params.ell, "m": params.m}))
    return _emit_reports(run_tasks(tasks, _workers(args)), args, out)


def _rng(args, key, which, m=None):
    given = getattr(args, key, None)
    if given is not None:
        lo, hi = given
    elif key == "k":
        lo, hi = 0, 2 * m
    else:
        lo, hi = DEFAULT_RANGES[which][key]
    return range(lo, hi + 1)


def identity_tasks(args) -> list:
    which = IDENTITY_CHECKS if args.which == "all" else (args.which,)
    tasks = []
    for w in which:
        if w in ("prop1", "lemma1", "prop2", "integral"):
            for m in _rng(args, "m", w):
                for u in _rng(args, "u", w):
                    if w == "prop1" and u < 1:
                        continue
                    tasks.append((w, {"m": m, "u": u}))
        elif w in ("phi", "phi_partial"):
            for m in _rng(args, "m", w):
                for k in _rng(args, "k", w, m):
                    for v in _rng(args, "v", w):
                        if w == "phi":
                            tasks.append((w, {"m": m, "k": k, "v": v}))
                        else:
                            for r in range(m + 2):
                                tasks.append((w, {"m": m, "k": k, "v": v, "r": r}))
        elif w == "symm":
            for ell in _rng(args, "ell", w):
                for m in _rng(args, "m", w):
                    for u in _rng(args, "u", w):
                        for i in range(1, ell + 1):
                            tasks.append((w, {"ell": ell, "m": m, "u": u, "i": i}))
    return tasks


def cmd_identities(args, out) -> int:
    for key in ("m", "u", "k", "v", "ell"):
        rng = getattr(args, key, None)
        if rng is not None and rng[0] < 0:
            raise UsageError(f"--{key} must be non-negative")
    if args.ell is not None and args.ell[0] < 1:
        raise UsageError("--ell must be positive")
    return _emit_reports(run_tasks(identity_tasks(args), _workers(args)), args, out)


def cmd_det(args, out) -> int:
    params = _params(args)
    res = V.saito_check(params)
    c = res.quotient_constant
    if args.format == "json":
        payload = {
            "ell": params.ell,
            "m": params.m,
            "det": res.det.to_dict(),
            "quotient_constant": None if c is None else [str(c.numerator), str(c.denominator)],
            "predicted_abs_c": [str(res.predicted_abs_c.numerator), str(res.predicted_abs_c.denominator)],
            "degrees": res.degrees,
            "status": "pass" if res.passed else "fail",
        }
        out.write(json.dumps(payload, separators=(",", ":")) + "\n")
    else:
        out.write(f"Q = {res.det}\n")
        out.write(f"constant c = {c}\n")
        out.write(f"|c| = {abs(c) if c is not None else None}\n")
        out.write(f"predicted |C| = {res.predicted_abs_c}\n")
        out.write(f"degrees = {res.degrees} (sum {sum(res.degrees)}, deg zPsi = {res.defining_degree})\n")
        out.write(f"status: {'pass' if res.passed else 'fail'}\n")
    return 0 if res.passed else 1


def export_payload(params: ArrangementParams) -> dict:
    return {
        "ell": params.ell,
        "m": params.m,
        "vars": list(params.vars),
        "psi": psi(params).to_dict(),
        "psi_coned": psi_coned(params).to_dict(),
        "generators": [d.to_dict() for d in basis(params)],
        "hyperplanes": [
            {
                "kind": fam.kind,
                "indices": list(fam.indices),
                "factors": [f.poly.to_dict() for f in fam.factors],
                "text": [str(f) for f in fam.factors],
            }
            for fam in hyperplanes(params)
        ],
    }


def cmd_export(args, out) -> int:
    params = _params(args)
    text = json.dumps(export_payload(params), separators=(",", ":")) + "\n"
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as e:
            raise UsageError(f"cannot write {args.output}: {e}") from None
    else:
        out.write(text)
    return 0


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catalan-basis",
        description="Exact construction and verification of a basis of logarithmic derivations "
        "for the coned extended Catalan arrangement of type B.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, ell_m=True):
        if ell_m:
            p.add_argument("--ell", type=int, required=True, help="rank (>= 1)")
            p.add_argument("--m", type=int, required=True, help="extension parameter (>= 0)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", help="write to this file instead of stdout")

    p = sub.add_parser("basis", help="print delta_E and delta_{ell,m,u}, u = 0..ell-1")
    common(p)

    p = sub.add_parser("verify", help="membership and Saito's criterion for one (ell, m)")
    p.add_argument("--ell", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.add_argument("--profile", choices=("fast", "thorough"), default="fast")
    p.add_argument("--derivations", help="verify derivations read from a `basis --format json` file")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", help="per-check timings on stderr")

    p = sub.add_parser("identities", help="run the identity suite")
    p.add_argument("--which", choices=IDENTITY_CHECKS + ("all",), default="all")
    for key in ("m", "u", "k", "v", "ell"):
        p.add_argument(f"--{key}", type=parse_range, help="inclusive range a..b")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output")
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", help="per-check timings on stderr")

    p = sub.add_parser("det", help="Saito determinant and its constant")
    common(p)

    p = sub.add_parser("export", help="write psi, its cone, generators and hyperplanes as JSON")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--output")
    return parser


COMMANDS = {
    "basis": cmd_basis,
    "verify": cmd_verify,
    "identities": cmd_identities,
    "det": cmd_det,
    "export": cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.derivations and (args.ell is None or args.m is None):
        parser.error("verify needs --ell and --m (or --derivations)")
    if not hasattr(args, "timing"):
        args.timing = False
    handler = COMMANDS[args.command]
    try:
        if args.command != "export" and getattr(args, "output", None):
            try:
                fh = open(args.output, "w")
            except OSError as e:
                raise UsageError(f"cannot write {args.output}: {e}") from None
            with fh:
                return handler(args, fh)
        return handler(args, sys.stdout)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
