"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 size-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import engine, hexmodel, matchcore
from .exceptions import HexSystemError, SizeGuardError
from .poly import Polynomial, eval_at_one, to_json

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3
SKIPPED = "skipped"


@dataclass
class RunReport:
    command: str
    input: Optional[str] = None
    polynomial: Optional[Polynomial] = None
    spectrum: Optional[engine.Spectrum] = None
    verdicts: dict[str, object] = field(default_factory=dict)
    timings_ms: dict[str, float] = field(default_factory=dict)
    extra: dict[str, object] = field(default_factory=dict)
    rows: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.verdicts.values())

    def as_dict(self, timings: bool) -> dict:
        out: dict[str, object] = {"command": self.command}
        if self.input is not None:
            out["input"] = self.input
        if self.polynomial is not None:
            out["polynomial"] = to_json(self.polynomial)
            out["text"] = str(self.polynomial)
        if self.spectrum is not None:
            out["spectrum"] = self.spectrum.as_dict()
        out.update(self.extra)
        if self.rows:
            out["rows"] = self.rows
        if self.verdicts:
            out["verdicts"] = self.verdicts
            out["passed"] = self.passed
        if timings and self.timings_ms:
            out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out

    def render_text(self, timings: bool) -> str:
        d = self.as_dict(timings)
        lines = []
        for key, value in d.items():
            if key == "polynomial":
                continue
            if key == "rows":
                for row in value:
                    lines.append("  ".join(f"{k}={_fmt(v)}" for k, v in row.items()))
            elif isinstance(value, dict):
                lines.append(f"{key}:")
                lines.extend(f"  {k}: {_fmt(v)}" for k, v in value.items())
            else:
                lines.append(f"{key}: {_fmt(value)}")
        return "\n".join(lines)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(map(str, v)) + "]"
    if isinstance(v, dict):
        return json.dumps(v)
    return str(v)


class _Timer:
    def __init__(self, report: RunReport, name: str):
        self.report, self.name = report, name

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings_ms[self.name] = (time.perf_counter() - self.t0) * 1000.0


def _read_system(path: str) -> tuple[str, hexmodel.HexSystem]:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    h = hexmodel.parse_system(text)
    return " ".join(text.split("#")[0].split()) or path, h


def _guarded(fn: Callable, *args):
    """Run an oracle step; report 'skipped' above the size guard."""
    try:
        return fn(*args)
    except SizeGuardError:
        return SKIPPED


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> RunReport:
    src, h = _read_system(args.file)
    g = matchcore.build_graph(h)
    rep = RunReport("validate", src)
    rep.extra = {
        "hexagons": len(h),
        "vertices": g.n_vertices,
        "edges": g.n_edges,
        "segments": [s.length for s in hexmodel.segments(h)],
        "canonical_key": hexmodel.canonical_key(h).decode(),
        "hextree": h.to_hextree(),
    }
    rep.verdicts = {
        "valid": True,
        "vertex_count": g.n_vertices == 4 * len(h) + 2,
        "edge_count": g.n_edges == 5 * len(h) + 1,
    }
    return rep


def cmd_poly(args) -> RunReport:
    src, h = _read_system(args.file)
    rep = RunReport("poly", src)
    with _Timer(rep, "brute" if args.brute else "recurrence"):
        rep.polynomial = engine.brute_af_poly(h) if args.brute else engine.af_poly(h)
    rep.extra = {"perfect_matchings": eval_at_one(rep.polynomial)}
    return rep


def cmd_spectrum(args) -> RunReport:
    src, h = _read_system(args.file)
    rep = RunReport("spectrum", src)
    with _Timer(rep, "recurrence"):
        rep.polynomial = engine.af_poly(h)
        rep.spectrum = engine.spectrum(h)
    return rep


def verify_system(h: hexmodel.HexSystem, rep: RunReport) -> None:
    """Fill ``rep`` with recurrence-vs-oracle verdicts for ``h``."""
    with _Timer(rep, "recurrence"):
        rec = engine.af_poly(h)
    rep.polynomial = rec
    with _Timer(rep, "oracle"):
        brute = _guarded(engine.brute_af_poly, h)
    rep.verdicts["recurrence_equals_oracle"] = SKIPPED if brute == SKIPPED else brute == rec
    spec = hexmodel.chain_spec(h)
    if spec is not None:
        rep.extra["chain"] = "Hl(" + ",".join(map(str, spec)) + ")"
        rep.verdicts["chain_recurrence"] = engine.chain_af_poly(spec) == rec
    g = matchcore.build_graph(h)
    matchings = _guarded(matchcore.enumerate_perfect_matchings, g)
    if matchings == SKIPPED:
        for name in ("af_equals_c_prime", "vertical_edge_rule", "matching_count"):
            rep.verdicts[name] = SKIPPED
    else:
        rep.verdicts["af_equals_c_prime"] = all(
            matchcore.af_number(g, m, certify=False) == matchcore.c_prime(g, m) for m in matchings
        )
        rep.verdicts["vertical_edge_rule"] = all(matchcore.check_vertical_edge_rule(g, m) for m in matchings)
        rep.verdicts["matching_count"] = eval_at_one(rec) == len(matchings)
    rep.spectrum = engine.Spectrum(frozenset(d for d, _ in rec))
    rep.verdicts["spectrum_contiguous"] = rep.spectrum.contiguous


def cmd_verify(args) -> RunReport:
    src, h = _read_system(args.file)
    rep = RunReport("verify", src)
    verify_system(h, rep)
    return rep


def cmd_family(args) -> RunReport:
    rep = RunReport("family", f"{args.family} {args.n}")
    with _Timer(rep, "family"):
        if args.closed_form:
            rep.polynomial = engine.family_closed_form(args.family, args.n)
        else:
            rep.polynomial = engine.family_poly(args.family, args.n)
    if args.cross_check:
        rep.verdicts["closed_form"] = engine.family_closed_form(args.family, args.n) == engine.family_poly(
            args.family, args.n
        )
        if args.family == "R" and args.n == 0:
            rep.verdicts["geometry"] = rep.polynomial == engine.af_poly(())
        else:
            with _Timer(rep, "geometry"):
                h = engine.family_system(args.family, args.n)
                rep.verdicts["geometry"] = engine.af_poly(h) == rep.polynomial
            rep.extra["hextree"] = h.to_hextree()
    return rep


def cmd_catalogue(args) -> RunReport:
    rep = RunReport("catalogue", str(args.h_max))
    systems = hexmodel.generate_all(args.h_max)
    counts: dict[int, int] = {}
    all_ok: dict[str, bool] = {}
    for h in systems:
        counts[len(h)] = counts.get(len(h), 0) + 1
        row = {"h": len(h), "hextree": h.to_hextree(), "poly": str(engine.af_poly(h))}
        if args.verify:
            sub = RunReport("verify")
            verify_system(h, sub)
            row["verdicts"] = sub.verdicts
            for k, v in sub.verdicts.items():
                if v is not SKIPPED:
                    all_ok[k] = all_ok.get(k, True) and bool(v)
                else:
                    all_ok.setdefault(k, True)
        rep.rows.append(row)
    rep.extra["counts"] = {str(k): v for k, v in sorted(counts.items())}
    if args.verify:
        rep.verdicts = all_ok
    return rep


def cmd_bench(args) -> RunReport:
    rep = RunReport("bench", str(args.h_max))
    systems = hexmodel.generate_all(args.h_max)
    for size in range(1, args.h_max + 1):
        batch = [h for h in systems if len(h) == size]
        t0 = time.perf_counter()
        for h in batch:
            engine.af_poly(h, cache=engine.MemoCache())
        t_rec = (time.perf_counter() - t0) * 1000
        t0 = time.perf_counter()
        oracle: object = 0.0
        try:
            for h in batch:
                engine.brute_af_poly(h, certify=False)
            oracle = round((time.perf_counter() - t0) * 1000, 3)
        except SizeGuardError:
            oracle = SKIPPED
        rep.rows.append({"h": size, "systems": len(batch), "recurrence_ms": round(t_rec, 3), "oracle_ms": oracle})
    return rep


COMMANDS = {
    "validate": cmd_validate,
    "poly": cmd_poly,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "family": cmd_family,
    "catalogue": cmd_catalogue,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")

    parser = argparse.ArgumentParser(prog="afpoly", description="Anti-forcing polynomials of catacondensed hexagonal systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and check a system file")
    p.add_argument("file")
    p = sub.add_parser("poly", parents=[common], help="anti-forcing polynomial of a system")
    p.add_argument("file")
    p.add_argument("--brute", action="store_true", help="use the brute-force oracle")
    p = sub.add_parser("spectrum", parents=[common], help="anti-forcing spectrum")
    p.add_argument("file")
    p = sub.add_parser("verify", parents=[common], help="recurrence vs oracle checks")
    p.add_argument("file")
    p = sub.add_parser("family", parents=[common], help="P, Q or R family polynomial")
    p.add_argument("family", choices=["P", "Q", "R"])
    p.add_argument("n", type=int)
    p.add_argument("--closed-form", action="store_true")
    p.add_argument("--cross-check", action="store_true")
    p = sub.add_parser("catalogue", parents=[common], help="all systems up to H_MAX hexagons")
    p.add_argument("h_max", type=int)
    p.add_argument("--verify", action="store_true")
    p = sub.add_parser("bench", parents=[common], help="recurrence vs oracle timings")
    p.add_argument("h_max", type=int)
    return parser


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        rep = COMMANDS[args.command](args)
    except SizeGuardError as exc:
        print(f"afpoly: refused: {exc}", file=err)
        return EXIT_GUARD
    except (HexSystemError, OSError, ValueError) as exc:
        print(f"afpoly: error: {exc}", file=err)
        return EXIT_INPUT
    timings = args.timings or args.command == "bench"
    if args.json:
        out.write(json.dumps(rep.as_dict(timings), indent=2) + "\n")
    else:
        out.write(rep.render_text(timings) + "\n")
    return EXIT_OK if rep.passed else EXIT_VERIFY


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
