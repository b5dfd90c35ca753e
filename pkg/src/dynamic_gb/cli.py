"""Command-line front end: run static or dynamic Groebner basis computations
and print one statistics row per system."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .engine import StrategyConfig, Stats, distinct_terms, dynamic_run, is_groebner_oracle, static_run
from .polycore import TermOrdering, reduce
from .systems import SystemFile, SystemParseError, load_system, render_system

TSV_COLUMNS = (
    "system",
    "mode",
    "rejected_corners",
    "rejected_disjoint",
    "lps_solved",
    "lps_failed",
    "constraints_final",
    "pols",
    "terms",
    "verified",
)

EXIT_OK, EXIT_UNVERIFIED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunReport:
    system_name: str
    mode: str
    stats: Stats
    basis_size_pols: int
    basis_size_terms: int
    final_order: dict
    verified: bool | None
    variables: tuple = ()

    def row(self) -> list:
        s = self.stats
        verified = "-" if self.verified is None else str(self.verified).lower()
        return [
            self.system_name,
            self.mode,
            s.rejected_by_corners,
            s.rejected_by_disjoint_cones,
            s.lps_solved,
            s.lps_failed,
            s.constraint_count,
            self.basis_size_pols,
            self.basis_size_terms,
            verified,
        ]

    def as_dict(self) -> dict:
        return {
            "system_name": self.system_name,
            "mode": self.mode,
            "stats": self.stats.as_dict(),
            "basis_size_pols": self.basis_size_pols,
            "basis_size_terms": self.basis_size_terms,
            "final_order": self.final_order,
            "verified": self.verified,
            "variables": list(self.variables),
        }


def parse_order(text: str, n: int) -> TermOrdering:
    """``grevlex``, ``lex``, matrix rows such as ``"1,1,1;0,0,-1;0,-1,0"``, or a
    single positive weight row refined by grevlex."""
    text = text.strip()
    if text == "grevlex":
        return TermOrdering.grevlex(n)
    if text == "lex":
        return TermOrdering.lex(n)
    try:
        rows = [tuple(int(x) for x in row.split(",")) for row in text.split(";") if row.strip()]
    except ValueError:
        raise InputError(f"cannot parse ordering {text!r}") from None
    if not rows or any(len(r) != n for r in rows):
        raise InputError(f"matrix ordering must have rows of length {n}")
    if len(rows) == 1 and min(rows[0]) > 0:
        return TermOrdering(rows[0])
    try:
        return TermOrdering.matrix(rows)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def describe_order(order: TermOrdering) -> dict:
    tb = order.tiebreak
    return {
        "weight": list(order.weight),
        "tiebreak": tb if isinstance(tb, str) else [list(r) for r in tb],
    }


def run_one(spec: str, opts: dict) -> tuple:
    """Compute one basis.  Returns ``(report, basis as a SystemFile, final order)``."""
    name, sf = load_system(spec, homogenized=opts["homogenize"])
    F = sf.polynomials
    cfg = StrategyConfig(
        static_mode=opts["static"],
        strategy=opts["strategy"],
        weighted_sugar=opts["weighted_sugar"],
        use_boundary_vectors=opts["boundary_vectors"],
        use_disjoint_cones=opts["disjoint_cones"],
        graded_candidates=opts.get("graded_candidates", True),
        seed=opts["seed"],
    )
    if cfg.static_mode:
        result = static_run(F, parse_order(opts["order"], len(sf.variables)), cfg)
        mode = "static"
    else:
        result = dynamic_run(F, cfg)
        mode = "dynamic"
    basis = result.basis
    verified = None
    if opts["verify"]:
        verified = is_groebner_oracle(basis, result.order) and _contains_inputs(F, basis, result.order)
    report = RunReport(
        system_name=name,
        mode=mode,
        stats=result.stats,
        basis_size_pols=len(basis),
        basis_size_terms=distinct_terms(basis),
        final_order=describe_order(result.order),
        verified=verified,
        variables=sf.variables,
    )
    return report, SystemFile(sf.variables, basis), result.order


def _contains_inputs(F, basis, order) -> bool:
    return all(not reduce(order, f, basis) for f in F)


def _worker(args):
    spec, opts = args
    try:
        return "ok", run_one(spec, opts)
    except (OSError, SystemParseError, InputError, ValueError) as exc:
        return "error", f"{spec}: {exc}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dynamic-gb",
        description="Groebner bases by the static or the dynamic Buchberger algorithm.",
    )
    p.add_argument("--system", action="append", required=True, metavar="SPEC",
                   help="system file, cyclic-N or katsura-N (repeatable)")
    p.add_argument("--static", action="store_true", help="use a fixed ordering instead of refining one")
    p.add_argument("--order", default="grevlex",
                   help="ordering for --static: grevlex, lex, a weight 'a,b,c' or matrix rows 'a,b;c,d' (default grevlex)")
    p.add_argument("--strategy", choices=("sugar", "normal", "mindeg"), default="normal",
                   help="critical pair selection (default normal)")
    p.add_argument("--weighted-sugar", action="store_true", help="measure sugar by the current weight")
    p.add_argument("--no-boundary-vectors", dest="boundary_vectors", action="store_false",
                   help="disable the boundary vectors criterion")
    p.add_argument("--no-disjoint-cones", dest="disjoint_cones", action="store_false",
                   help="disable the disjoint cones criterion")
    p.add_argument("--ungraded-candidates", dest="graded_candidates", action="store_false",
                   help="let terms below the top total degree become leading terms")
    p.add_argument("--homogenize", action="store_true", help="homogenize the inputs with a new last variable")
    p.add_argument("--verify", action="store_true", help="check the result by brute force")
    p.add_argument("--output", choices=("tsv", "json"), default="tsv")
    p.add_argument("--seed", type=int, default=0, help="tie-break seed for Hilbert-equal candidates")
    p.add_argument("--out-basis", type=Path, metavar="FILE", help="write the reduced basis here")
    p.add_argument("--jobs", type=int, default=1, help="systems computed in parallel")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def _basis_path(base: Path, k: int, total: int) -> Path:
    if total == 1:
        return base
    return base.with_name(f"{base.stem}.{k}{base.suffix}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    if args.jobs < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_INPUT
    opts = {
        "static": args.static,
        "order": args.order,
        "strategy": args.strategy,
        "weighted_sugar": args.weighted_sugar,
        "boundary_vectors": args.boundary_vectors,
        "disjoint_cones": args.disjoint_cones,
        "graded_candidates": args.graded_candidates,
        "homogenize": args.homogenize,
        "verify": args.verify,
        "seed": args.seed,
    }
    work = [(spec, opts) for spec in args.system]
    if args.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_worker, work))
    else:
        outcomes = [_worker(w) for w in work]

    errors = [msg for status, msg in outcomes if status == "error"]
    for msg in errors:
        print(f"error: {msg}", file=sys.stderr)
    done = [payload for status, payload in outcomes if status == "ok"]

    if args.output == "tsv":
        print("\t".join(TSV_COLUMNS))
        for report, _, _ in done:
            print("\t".join(str(x) for x in report.row()))
    else:
        print(json.dumps([report.as_dict() for report, _, _ in done], indent=2))

    if args.out_basis is not None:
        for k, (_, sf, order) in enumerate(done):
            _basis_path(args.out_basis, k, len(done)).write_text(render_system(sf, order), encoding="utf-8")

    if errors:
        return EXIT_INPUT
    if any(report.verified is False for report, _, _ in done):
        return EXIT_UNVERIFIED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
