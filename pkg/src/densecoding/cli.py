"""Command line entry point: ``densecode eval`` and ``densecode sweep``.

Exit codes: 0 success, 1 input or configuration error, 2 a verdict failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .capacity import cyclic_groups, dc_capacity
from .linalg import DimensionError
from .states import (
    NAMED_STATES,
    MultipartiteState,
    RandomSpec,
    StateError,
    load_state,
    named_state,
    sample,
)
from .theorems import THEOREM_IDS, TheoremVerdict, compatibility_error, run_check

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERDICT = 2

WORKERS_ENV = "DENSECODE_WORKERS"

DEFAULT_DIMS = {
    "ghz": (2, 2, 2),
    "w": (2, 2, 2),
    "bell": (2, 2),
    "product_zero": (2, 2),
    "bell_times_pure": (2, 2, 2),
}

CSV_COLUMNS = ("theorem", "sample", "lhs", "rhs", "slack", "holds", "applicable")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def round12(x: float) -> float:
    return float(f"{x:.12g}")


def party_label(k: int, n: int) -> str:
    return chr(ord("A") + k) if n <= 26 else f"P{k}"


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_theorems(text: str) -> list[str]:
    ids = [t.strip().upper() for t in text.split(",") if t.strip()]
    for t in ids:
        if t not in THEOREM_IDS:
            raise UsageError(f"unknown theorem id {t!r}; choose from {', '.join(THEOREM_IDS)}")
    return ids


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- eval ------------------------------------------------------------------------


def resolve_state(args: argparse.Namespace) -> MultipartiteState:
    if args.file:
        if args.state:
            raise UsageError("give either --state or --file, not both")
        s = load_state(args.file)
    elif args.state:
        if args.state not in NAMED_STATES:
            raise UsageError(f"unknown state {args.state!r}; choose from {', '.join(NAMED_STATES)}")
        dims = parse_int_list(args.dims) if args.dims else DEFAULT_DIMS[args.state]
        s = named_state(args.state, dims)
    else:
        raise UsageError("one of --state or --file is required")
    if args.relabel:
        perm = parse_int_list(args.relabel)
        s = s.permuted(perm)
    return s


def applicable_theorems(s: MultipartiteState) -> list[str]:
    pure = s.is_pure()
    return [t for t in THEOREM_IDS if compatibility_error(t, s.dims, pure) is None]


def cmd_eval(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    s = resolve_state(args)
    n = s.n_parties
    lab = lambda k: party_label(k, n)  # noqa: E731

    rows = []
    for i in range(n):
        for j in range(n):
            if i != j:
                rows.append(dc_capacity(s, [i], j))
    if n >= 4:
        rows += [dc_capacity(s, senders, r) for senders, r in cyclic_groups(n)]
    if args.senders is not None:
        if args.receiver is None:
            raise UsageError("--senders needs --receiver")
        rows.append(dc_capacity(s, parse_int_list(args.senders), args.receiver))

    print(f"state dims {list(s.dims)}  fingerprint {s.fingerprint()[:16]}", file=out)
    print(f"{'channel':<12} {'quantum_part':>20} {'floor':>20} {'capacity':>20}  advantage", file=out)
    seen = set()
    for r in rows:
        key = (r.senders, r.receiver)
        if key in seen:
            continue
        seen.add(key)
        name = "C_" + "".join(lab(k) for k in r.senders) + (":" if len(r.senders) > 1 else "") + lab(r.receiver)
        print(
            f"{name:<12} {fmt(r.quantum_part):>20} {fmt(r.classical_floor):>20} "
            f"{fmt(r.full_capacity):>20}  {'yes' if r.advantage else 'no'}",
            file=out,
        )

    ids = parse_theorems(args.theorems) if args.theorems else applicable_theorems(s)
    failed = False
    if ids:
        print(file=out)
        print(f"{'theorem':<12} {'lhs':>20} {'rhs':>20} {'slack':>20}  applicable  holds", file=out)
    for t in ids:
        reason = compatibility_error(t, s.dims, s.is_pure())
        if reason:
            raise UsageError(reason)
        v = run_check(t, s)
        failed |= not v.holds
        print(
            f"{t:<12} {fmt(v.lhs):>20} {fmt(v.rhs):>20} {fmt(v.slack):>20}"
            f"  {'yes' if v.applicable else 'no':<10}  {'yes' if v.holds else 'NO'}",
            file=out,
        )
    return EXIT_VERDICT if failed else EXIT_OK


# -- sweep -----------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    dims: tuple[int, ...]
    kind: str
    samples: int
    seed: int
    theorems: tuple[str, ...]
    format: str = "json"

    def validate(self) -> None:
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.kind not in ("pure", "mixed"):
            raise UsageError("--kind must be 'pure' or 'mixed'")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be 'json' or 'csv'")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if not self.theorems:
            raise UsageError("no theorems selected")
        try:
            RandomSpec(self.dims)
        except (DimensionError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        for t in self.theorems:
            reason = compatibility_error(t, self.dims, self.kind == "pure")
            if reason:
                raise UsageError(reason)

    def random_spec(self) -> RandomSpec:
        kind = "haar_pure" if self.kind == "pure" else "induced_mixed"
        return RandomSpec(self.dims, kind, self.seed)


def verdict_row(v: TheoremVerdict, k: int) -> dict:
    return {
        "theorem": v.theorem_id,
        "sample": k,
        "lhs": round12(v.lhs),
        "rhs": round12(v.rhs),
        "slack": round12(v.slack),
        "holds": bool(v.holds),
        "applicable": bool(v.applicable),
    }


def _sweep_one(config: SweepConfig, k: int) -> list[dict]:
    s = sample(config.random_spec(), k)
    return [verdict_row(run_check(t, s), k) for t in config.theorems]


def _sweep_chunk(config: SweepConfig, ks: Sequence[int]) -> list[list[dict]]:
    return [_sweep_one(config, k) for k in ks]


def run_sweep(config: SweepConfig, workers: int = 1) -> list[dict]:
    """Verdict rows ordered by sample index, then by theorem order."""
    indices = list(range(config.samples))
    if workers <= 1:
        per_sample = [_sweep_one(config, k) for k in indices]
    else:
        size = max(1, -(-len(indices) // (4 * workers)))
        chunks = [indices[i : i + size] for i in range(0, len(indices), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_sweep_chunk, [config] * len(chunks), chunks)
            per_sample = [rows for chunk in results for rows in chunk]
    return [row for rows in per_sample for row in rows]


def summarize(config: SweepConfig, rows: list[dict]) -> dict:
    per = {}
    for t in config.theorems:
        mine = [r for r in rows if r["theorem"] == t]
        slacks = [r["slack"] for r in mine if r["applicable"]]
        per[t] = {
            "checked": len(mine),
            "held": sum(r["holds"] for r in mine),
            "applicable": sum(r["applicable"] for r in mine),
            "min_slack": min(slacks) if slacks else None,
        }
    return {"per_theorem": per}


def render_report(config: SweepConfig, rows: list[dict]) -> str:
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({**r, "holds": str(r["holds"]).lower(), "applicable": str(r["applicable"]).lower()})
        return buf.getvalue()
    cfg = asdict(config)
    cfg["dims"] = list(config.dims)
    cfg["theorems"] = list(config.theorems)
    report = {"config": cfg, "verdicts": rows, "summary": summarize(config, rows)}
    return json.dumps(report, indent=1) + "\n"


def cmd_sweep(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout
    config = SweepConfig(
        dims=tuple(parse_int_list(args.dims)),
        kind=args.kind,
        samples=args.samples,
        seed=args.seed,
        theorems=tuple(parse_theorems(args.theorems)),
        format=args.format,
    )
    config.validate()
    workers = args.workers if args.workers is not None else default_workers()
    rows = run_sweep(config, workers)
    text = render_report(config, rows)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    failed = [r for r in rows if not r["holds"]]
    summary = summarize(config, rows)["per_theorem"]
    for t, st in summary.items():
        print(f"{t}: {st['held']}/{st['checked']} held, min slack {st['min_slack']}", file=sys.stderr)
    return EXIT_VERDICT if failed else EXIT_OK


# -- entry -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="densecode", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="capacities and theorem verdicts for one state")
    e.add_argument("--state", help=f"named state: {', '.join(NAMED_STATES)}")
    e.add_argument("--dims", help="comma-separated local dimensions for a named state")
    e.add_argument("--file", help="JSON state file")
    e.add_argument("--theorems", help="comma-separated ids (default: all that apply)")
    e.add_argument("--relabel", help="permutation: new party i is old party perm[i]")
    e.add_argument("--senders", help="extra channel: comma-separated sender indices")
    e.add_argument("--receiver", type=int, help="receiver index for --senders")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", help="seeded random sweep of theorem checks")
    s.add_argument("--dims", required=True)
    s.add_argument("--kind", choices=("pure", "mixed"), default="mixed")
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--theorems", default="T1")
    s.add_argument("--output", help="report path (default: stdout)")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--workers", type=int, help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, StateError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
