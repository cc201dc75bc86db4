"""Probe and classify the bundled structured-resolvent fixtures.

For each representation, prints the three asymptotic channels along the
dyadic grid s = 1, 2, 4, ... and the resulting type verdict, then runs a
quick sampled positivity check on the half-plane.
"""

import argparse
from pathlib import Path

from freepick.jsonio import parse_spec
from freepick.nevanlinna import (
    asymptotic_probe,
    classify_type,
    pick_positivity_check,
    scalar_evaluator,
)

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"
REPS = ("type1_rep.json", "type2_rep.json", "type3_rep.json", "type4_rep.json")


def show(name: str, smax: float, samples: int, every: int) -> None:
    spec = parse_spec(str(FIXTURES / name))
    probe = asymptotic_probe(scalar_evaluator(spec), smax=smax)
    verdict = classify_type(probe)
    print(f"{name}  (kind {spec.kind}, a={spec.a:g}, m={spec.m})")
    print("        s    s|h(is)|     s Im h(is)   Im h(is)/s")
    rows = list(zip(
        probe.grid,
        probe.scaled_modulus.values,
        probe.scaled_imag.values,
        probe.damped_imag.values,
    ))
    for idx, (s, m, si, di) in enumerate(rows):
        if idx % every and idx != len(rows) - 1:
            continue
        print(f"  {s:9.0f}  {m:11.6f}  {si:11.6f}  {di:11.6f}")
    flag = " (inconclusive)" if verdict.inconclusive else ""
    print(f"  verdict: type {verdict.type}{flag}")
    pos = pick_positivity_check(spec, samples=samples, seed=0)
    print(f"  positivity over {pos.samples} half-plane samples: "
          f"min imaginary eigenvalue {pos.min_imag_eig:.3e}\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--smax", type=float, default=2.0**20)
    ap.add_argument("--samples", type=int, default=30, help="positivity samples per fixture")
    ap.add_argument("--every", type=int, default=4, help="print every k-th grid row")
    args = ap.parse_args()
    for name in REPS:
        show(name, args.smax, args.samples, max(1, args.every))


if __name__ == "__main__":
    main()
