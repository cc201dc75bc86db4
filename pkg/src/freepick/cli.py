"""freepick command line: evaluate, certify, classify, interpolate.

Exit codes separate failure modes so pipelines can branch on verdicts:
0 means the command ran and nothing was refuted, 2 means it ran and the
mathematical check failed (monotonicity refuted, axioms violated), and 1
means the command itself could not run (bad file, bad flag, infeasible
target, singular resolvent). Reports are JSON with sorted keys and every
report embeds the resolved config, so identical invocations are
byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass

from . import hardy, herglotz, jsonio, monotone, nevanlinna, series
from .matcore import DISK_TO_HALF, HALF_TO_DISK, CalcError, MatrixTuple, cayley

_CAYLEY_DIRECTIONS = {
    "disk2half": DISK_TO_HALF,
    "half2disk": HALF_TO_DISK,
    DISK_TO_HALF: DISK_TO_HALF,
    HALF_TO_DISK: HALF_TO_DISK,
}


@dataclass(frozen=True)
class RunConfig:
    degree: int = 4
    tol: float = 1e-9
    seed: int = 0
    samples: int = 100
    dim: int = 2

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if self.tol <= 0 or self.samples <= 0 or self.dim <= 0:
            raise ValueError("tol, samples, and dim must be positive")


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 on usage errors (2 means refuted)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    p = _Parser(prog="freepick", description="free function calculus toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name: str, help_text: str) -> argparse.ArgumentParser:
        c = sub.add_parser(name, help=help_text)
        c.add_argument("--degree", type=int, default=4)
        c.add_argument("--tol", type=float, default=1e-9)
        c.add_argument("--seed", type=int, default=0)
        c.add_argument("--samples", type=int, default=100)
        c.add_argument("--dim", type=int, default=2)
        c.add_argument("--out", default=None, help="write the report here instead of stdout")
        return c

    c = cmd("eval", "evaluate a series at a matrix tuple")
    c.add_argument("--series", required=True)
    c.add_argument("--point", required=True)

    c = cmd("deriv", "directional derivative of a series")
    c.add_argument("--series", required=True)
    c.add_argument("--point", required=True)
    c.add_argument("--direction", required=True, help="tuple file with the direction H")
    c.add_argument("--method", choices=series.METHODS, default=series.BLOCK)

    c = cmd("monotone", "certify or refute local monotonicity near 0")
    c.add_argument("--series", required=True)

    c = cmd("interpolate", "minimum-norm interpolation through the kernel span")
    c.add_argument("--point", required=True)
    c.add_argument("--direction", required=True, help="matrix file with the target value")

    c = cmd("axioms", "fuzz the free-function axioms")
    c.add_argument("--series", default=None)
    c.add_argument("--rep", default=None)

    c = cmd("rep-eval", "evaluate a Nevanlinna representation on the half-plane")
    c.add_argument("--rep", required=True)
    c.add_argument("--point", required=True)

    c = cmd("rep-classify", "asymptotic type of a representation")
    c.add_argument("--rep", required=True)
    c.add_argument("--smax", type=float, default=2.0**20)

    c = cmd("herglotz-eval", "evaluate a Herglotz model on the polydisk")
    c.add_argument("--model", required=True)
    c.add_argument("--point", required=True)
    c.add_argument("--method", choices=herglotz.FORMS, default=herglotz.CAYLEY_FORM)

    c = cmd("cayley", "coordinatewise Cayley transform of a tuple")
    c.add_argument("--point", required=True)
    c.add_argument("--direction", required=True, choices=sorted(_CAYLEY_DIRECTIONS))

    return p


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        degree=args.degree, tol=args.tol, seed=args.seed, samples=args.samples, dim=args.dim
    )


def _summary_to_json(s: nevanlinna.SequenceSummary) -> dict:
    return {
        "values": [jsonio.float_to_json(x) for x in s.values],
        "limit": jsonio.float_to_json(s.limit),
        "converged": s.converged,
    }


def _run_eval(args, cfg: RunConfig) -> tuple[dict, int]:
    f = jsonio.parse_series(args.series)
    X = jsonio.parse_tuple(args.point)
    res = series.eval_series(f, X)
    return {
        "value": jsonio.matrix_to_json(res.value),
        "tail_bound": jsonio.float_to_json(res.tail_bound),
    }, 0


def _run_deriv(args, cfg: RunConfig) -> tuple[dict, int]:
    f = jsonio.parse_series(args.series)
    X = jsonio.parse_tuple(args.point)
    H = jsonio.parse_tuple(args.direction)
    D = series.derivative(f, X, H, method=args.method)
    return {"value": jsonio.matrix_to_json(D), "method": args.method}, 0


def _run_monotone(args, cfg: RunConfig) -> tuple[dict, int]:
    f = jsonio.parse_series(args.series)
    cert = monotone.certify_monotone(f, cfg.degree, cfg.tol)
    witness = None
    if cert.witness is not None:
        witness = {
            "k": cert.witness.k,
            "vector": jsonio.vector_to_json(cert.witness.vector),
            "min_eig": jsonio.float_to_json(cert.witness.min_eig),
        }
    report = {
        "certificate": {
            "degree": cert.degree,
            "coefficient_horizon": cert.coefficient_horizon,
            "letters": [
                {"k": k, "min_eig": jsonio.float_to_json(r.min_eig), "psd": r.is_psd}
                for k, r in enumerate(cert.reports, start=1)
            ],
            "verdict": cert.verdict,
            "witness": witness,
        }
    }
    return report, 0 if cert.certified else 2


def _run_interpolate(args, cfg: RunConfig) -> tuple[dict, int]:
    X = jsonio.parse_tuple(args.point)
    target = jsonio.parse_matrix(args.direction)
    f = hardy.min_norm_interpolate(X, target, cfg.degree)
    norm = float(sum(abs(c) ** 2 for c in f.coeffs.values()) ** 0.5)
    return {"series": jsonio.series_to_json(f), "norm": norm}, 0


def _run_axioms(args, cfg: RunConfig) -> tuple[dict, int]:
    if (args.series is None) == (args.rep is None):
        raise CalcError("axioms needs exactly one of --series or --rep")
    if args.series is not None:
        f = jsonio.parse_series(args.series)
        evaluator = series.series_evaluator(f)
        d = f.d
        sampler = None
        subject = "series"
    else:
        spec = jsonio.parse_spec(args.rep)
        if not isinstance(spec, nevanlinna.RepresentationSpec):
            raise CalcError("axioms --rep needs a representation file, not a model")
        evaluator = nevanlinna.representation_evaluator(spec)
        d = spec.d
        sampler = nevanlinna.pi_sampler(d)
        subject = "representation"
    report = series.axiom_verify(
        evaluator,
        d,
        trials=cfg.samples,
        seed=cfg.seed,
        tol=cfg.tol,
        sampler=sampler,
        sizes=tuple(range(1, cfg.dim + 1)),
    )
    out = {
        "subject": subject,
        "trials": len(report.trials),
        "all_graded": report.all_graded,
        "max_direct_sum": jsonio.float_to_json(report.max_direct_sum),
        "max_similarity": jsonio.float_to_json(report.max_similarity),
        "errors": [t.error for t in report.trials if t.error is not None],
        "passed": report.passed,
    }
    return out, 0 if report.passed else 2


def _run_rep_eval(args, cfg: RunConfig) -> tuple[dict, int]:
    spec = jsonio.parse_spec(args.rep)
    if not isinstance(spec, nevanlinna.RepresentationSpec):
        raise CalcError("rep-eval needs a representation file, not a model")
    Z = jsonio.parse_tuple(args.point)
    h = nevanlinna.eval_representation(spec, Z)
    return {"value": jsonio.matrix_to_json(h)}, 0


def _run_rep_classify(args, cfg: RunConfig) -> tuple[dict, int]:
    spec = jsonio.parse_spec(args.rep)
    if not isinstance(spec, nevanlinna.RepresentationSpec):
        raise CalcError("rep-classify needs a representation file, not a model")
    probe = nevanlinna.asymptotic_probe(nevanlinna.scalar_evaluator(spec), smax=args.smax)
    verdict = nevanlinna.classify_type(probe)
    report = {
        "type": verdict.type,
        "inconclusive": verdict.inconclusive,
        "limits": {
            "scaled_modulus": jsonio.float_to_json(probe.scaled_modulus.limit),
            "scaled_imag": jsonio.float_to_json(probe.scaled_imag.limit),
            "damped_imag": jsonio.float_to_json(probe.damped_imag.limit),
        },
        "grid": [jsonio.float_to_json(s) for s in probe.grid],
        "sequences": {
            "scaled_modulus": _summary_to_json(probe.scaled_modulus),
            "scaled_imag": _summary_to_json(probe.scaled_imag),
            "damped_imag": _summary_to_json(probe.damped_imag),
        },
        "smax": jsonio.float_to_json(args.smax),
    }
    return report, 0


def _run_herglotz_eval(args, cfg: RunConfig) -> tuple[dict, int]:
    model = jsonio.parse_spec(args.model)
    if not isinstance(model, herglotz.HerglotzModel):
        raise CalcError("herglotz-eval needs a model file, not a representation")
    X = jsonio.parse_tuple(args.point)
    h = herglotz.eval_herglotz(model, X, form=args.method)
    return {"value": jsonio.matrix_to_json(h), "form": args.method}, 0


def _run_cayley(args, cfg: RunConfig) -> tuple[dict, int]:
    X = jsonio.parse_tuple(args.point)
    direction = _CAYLEY_DIRECTIONS[args.direction]
    out = cayley(X, direction)
    return {"tuple": jsonio.tuple_to_json(out), "direction": direction}, 0


_DISPATCH = {
    "eval": _run_eval,
    "deriv": _run_deriv,
    "monotone": _run_monotone,
    "interpolate": _run_interpolate,
    "axioms": _run_axioms,
    "rep-eval": _run_rep_eval,
    "rep-classify": _run_rep_classify,
    "herglotz-eval": _run_herglotz_eval,
    "cayley": _run_cayley,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        body, status = _DISPATCH[args.command](args, cfg)
    except (CalcError, ValueError) as exc:
        print(f"freepick: {exc}", file=sys.stderr)
        return 1
    report = {"command": args.command, "config": asdict(cfg)}
    report.update(body)
    text = jsonio.dump_report(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
