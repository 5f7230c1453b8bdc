"""Command line front end: ``fanoforge <command> [options]``.

Reports go to stdout (or ``--out``) as JSON with a fixed key order; timings
go to stderr so reruns are byte-identical. Exit codes: 0 success, 1 a check
failed, 2 bad input or I/O error, 3 an internal invariant broke.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import algebra, fano, formats
from .errors import AxiomViolation, FanoForgeError, InputError
from .plane import Plane, verify_plane_axioms
from .polarity import PolarityGraph, incidence_preservation_witness

log = logging.getLogger("fanoforge")

EXHAUSTIVE_LIMIT = 32


@dataclass
class RunConfig:
    source: str = "field"
    k: int | None = None
    modulus: int | None = None
    seed: int = 0
    mode: str = "auto"
    workers: int = 1
    out: Path | None = None
    samples: int = 100_000

    @property
    def table_path(self) -> Path | None:
        return Path(self.source[len("table:") :]) if self.source.startswith("table:") else None

    def resolve_mode(self, n: int) -> str:
        if self.mode == "auto":
            return "exhaustive" if n <= EXHAUSTIVE_LIMIT else "sampled"
        return self.mode


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("FANOFORGE_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError as exc:
            raise InputError(f"FANOFORGE_SEED is not an integer: {env!r}") from exc
    cfg = RunConfig(
        source=args.source,
        k=args.k,
        modulus=args.modulus,
        seed=seed,
        mode=args.mode,
        workers=args.workers,
        out=Path(args.out) if args.out else None,
        samples=args.samples,
    )
    if cfg.source not in ("field", "knuth") and cfg.table_path is None:
        raise InputError(f"unknown source {cfg.source!r}; use field, knuth or table:PATH")
    if cfg.table_path is None and cfg.k is None:
        raise InputError("--k is required for field and knuth sources")
    if cfg.workers < 1:
        raise InputError("--workers must be positive")
    return cfg


def build_presemifield(cfg: RunConfig) -> algebra.Presemifield:
    if cfg.table_path is not None:
        try:
            return algebra.presemifield_from_table(cfg.table_path)
        except OSError as exc:
            raise InputError(f"cannot read {cfg.table_path}: {exc}") from exc
    if cfg.source == "field":
        return algebra.field_presemifield(cfg.k, cfg.modulus)
    try:
        return algebra.knuth_binary_presemifield(cfg.k, cfg.modulus)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def build_all(cfg: RunConfig):
    t0 = time.perf_counter()
    S = build_presemifield(cfg)
    plane = Plane(S)
    G = PolarityGraph(plane)
    log.info("built order-%d plane from %s in %.3fs", plane.n, S.source, time.perf_counter() - t0)
    return S, plane, G


def _plane_summary(S, plane, G) -> dict:
    return {
        "n": plane.n,
        "k": S.k,
        "source": S.source,
        "modulus": S.modulus,
        "points": plane.size,
        "lines": plane.size,
        "absolute_points": len(G.absolutes),
        "baer_line": repr(G.baer_line),
        "pole": G.pole,
        "axioms": {
            "distributive": S.verified_distributive,
            "no_zero_divisors": S.verified_no_zero_divisors,
            "commutative": S.verified_commutative,
            "method": S.report.method,
        },
    }


def _emit(text: str, cfg: RunConfig, *, default_name: str | None = None) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    path = cfg.out
    if path.is_dir() and default_name:
        path = path / default_name
    try:
        path.write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


# -- commands ---------------------------------------------------------------


def cmd_build(cfg: RunConfig) -> int:
    S, plane, G = build_all(cfg)
    summary = _plane_summary(S, plane, G)
    if cfg.out is not None:
        try:
            cfg.out.mkdir(parents=True, exist_ok=True)
            algebra.write_table(S, cfg.out / "semifield.tbl")
            (cfg.out / "incidence.txt").write_text(formats.incidence_text(plane))
            (cfg.out / "incidence.bin").write_bytes(formats.incidence_bitmap(plane))
            (cfg.out / "graph.edges").write_text(formats.edge_list(G))
        except OSError as exc:
            raise InputError(f"cannot write exports to {cfg.out}: {exc}") from exc
        summary["exports"] = ["semifield.tbl", "incidence.txt", "incidence.bin", "graph.edges"]
    sys.stdout.write(formats.dumps(summary))
    return 0


def verification_report(cfg: RunConfig) -> tuple[dict, bool]:
    checks: dict = {}
    try:
        S, plane, G = build_all(cfg)
    except AxiomViolation as exc:
        rep = exc.report
        checks["axioms"] = {"pass": False, "failures": rep.failures() if rep else [str(exc)]}
        return {"source": cfg.source, "checks": checks}, False

    n = plane.n
    mode = cfg.resolve_mode(n)
    checks["axioms"] = {"pass": S.report.ok, "failures": S.report.failures(), "method": S.report.method}

    pa = verify_plane_axioms(plane, mode=mode, samples=cfg.samples, seed=cfg.seed)
    checks["plane_axioms"] = {
        "pass": pa.ok,
        "mode": pa.mode,
        "pairs_checked": pa.pairs_checked,
        "point_pair_witness": pa.point_pair_witness,
        "line_pair_witness": pa.line_pair_witness,
        "quadrilateral": pa.quadrilateral,
    }

    if mode == "exhaustive":
        w = incidence_preservation_witness(plane)
    else:
        rng = np.random.default_rng(cfg.seed)
        w = incidence_preservation_witness(plane, rng.integers(0, plane.size, (cfg.samples, 2)))
    checks["polarity_preserves_incidence"] = {"pass": w is None, "witness": w}

    checks["absolute_count"] = {"pass": len(G.absolutes) == n + 1, "count": len(G.absolutes), "expected": n + 1}
    checks["baer_line"] = {"pass": True, "line": repr(G.baer_line), "pole": G.pole}
    try:
        classes = G.partition()
        sizes = sorted({len(c) for c in classes})
        checks["partition"] = {
            "pass": True,
            "classes": len(classes),
            "class_sizes": sizes,
            "total": 1 + len(G.absolutes) + sum(len(c) for c in classes),
        }
    except FanoForgeError as exc:
        checks["partition"] = {"pass": False, "error": str(exc)}

    lem = G.check_lemma21(mode, samples=cfg.samples, seed=cfg.seed)
    checks["lemma_local"] = {"pass": lem.ok, "mode": lem.mode, "parts": lem.as_dict()}

    ok = all(c["pass"] for c in checks.values())
    return {"n": n, "source": S.source, "mode": mode, "seed": cfg.seed, "checks": checks, "pass": ok}, ok


def cmd_verify(cfg: RunConfig) -> int:
    report, ok = verification_report(cfg)
    _emit(formats.dumps(report), cfg, default_name="verify.json")
    return 0 if ok else 1


def cmd_census(cfg: RunConfig) -> int:
    _, plane, G = build_all(cfg)
    t0 = time.perf_counter()
    c = fano.census(G, workers=cfg.workers)
    log.info("census in %.3fs", time.perf_counter() - t0)
    _emit(formats.dumps({"source": plane.S.source, "census": c.as_dict()}), cfg, default_name="census.json")
    return 0


def cmd_fano(cfg: RunConfig) -> int:
    _, plane, G = build_all(cfg)
    t0 = time.perf_counter()
    cert = fano.find_fano(G)
    c = fano.census(G, workers=cfg.workers)
    log.info("certificate and census in %.3fs", time.perf_counter() - t0)
    _emit(formats.dumps(fano.certificate_record(cert, plane, c)), cfg, default_name="certificate.json")
    return 0


def cmd_bound(cfg: RunConfig, n: int | None) -> int:
    if n is None:
        if cfg.k is None:
            raise InputError("bound needs --n or --k")
        n = 1 << cfg.k
    sys.stdout.write(f"{fano.lower_bound(n)}\n")
    return 0


def cmd_export_graph(cfg: RunConfig) -> int:
    _, _, G = build_all(cfg)
    _emit(formats.edge_list(G), cfg, default_name="graph.edges")
    return 0


def cmd_export_incidence(cfg: RunConfig, fmt: str) -> int:
    _, plane, _ = build_all(cfg)
    if fmt == "bitmap":
        data = formats.incidence_bitmap(plane)
        if cfg.out is None:
            sys.stdout.buffer.write(data)
        else:
            cfg.out.write_bytes(data)
        return 0
    _emit(formats.incidence_text(plane), cfg, default_name="incidence.txt")
    return 0


# -- entry point ------------------------------------------------------------


def _int(text: str) -> int:
    return int(text, 0)


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--source", default="field", help="field, knuth, or table:PATH")
    common.add_argument("--k", type=int, help="dimension over GF(2); order n = 2^k")
    common.add_argument("--modulus", type=_int, help="irreducible polynomial as an int (0b/0x ok)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled checks (env FANOFORGE_SEED)")
    common.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    common.add_argument("--samples", type=int, default=100_000)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="output file or directory")
    common.add_argument("-v", "--verbose", action="store_true", help="timings on stderr")

    parser = argparse.ArgumentParser(prog="fanoforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build and verify the plane; --out DIR writes exports")
    sub.add_parser("verify", parents=[common], help="run every structural check")
    sub.add_parser("fano", parents=[common], help="first Fano certificate plus census")
    sub.add_parser("census", parents=[common], help="good-triangle census against the bound")
    b = sub.add_parser("bound", parents=[common], help="print the lower bound for order n")
    b.add_argument("--n", type=int)
    sub.add_parser("export-graph", parents=[common], help="polarity graph edge list")
    e = sub.add_parser("export-incidence", parents=[common], help="incidence lists or packed bitmap")
    e.add_argument("--format", choices=("text", "bitmap"), default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(name)s: %(message)s")
    try:
        if args.command == "bound":
            cfg = RunConfig(k=args.k)
            return cmd_bound(cfg, args.n)
        cfg = _config(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        if args.command == "fano":
            return cmd_fano(cfg)
        if args.command == "census":
            return cmd_census(cfg)
        if args.command == "export-graph":
            return cmd_export_graph(cfg)
        if args.command == "export-incidence":
            return cmd_export_incidence(cfg, args.format)
    except FanoForgeError as exc:
        print(f"fanoforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"fanoforge: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - anything else is our bug
        print(f"fanoforge: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
