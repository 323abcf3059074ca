"""Command-line entry point: ``ffetf <command> [flags]``.

Exit status is 0 on success, 1 on a verified negative result (not an ETF,
hypotheses fail, nonexistence proved) and 2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .cliquesearch import (
    nonexistence_pipeline,
    read_nonexistence_certificate,
    write_nonexistence_certificate,
)
from .constructions import (
    centered_or_axial,
    default_workers,
    format_scan_csv,
    read_scan_csv,
    scan,
    seidel_waldron,
    steiner_modular,
    triangular_gerzon,
)
from .frames import (
    EtfCertificate,
    naimark,
    project_real_signature,
    read_certificate,
    verify_etf,
    write_certificate,
)
from .graphs import parse_family
from .matgf import IntMat, MatGF, read_matrix

__all__ = ["RunConfig", "InputError", "build_parser", "dispatch", "report", "main"]

OK, NEGATIVE, BAD_INPUT = 0, 1, 2

COMMANDS = ("verify", "construct", "scan", "gerzon", "steiner", "naimark", "project-real", "nonexist", "report")


class InputError(ValueError):
    """Flags or files that a command cannot accept."""


@dataclass
class RunConfig:
    command: str
    paths: list[str] = field(default_factory=list)
    input: str | None = None
    output: str | None = None
    p: list[int] = field(default_factory=list)
    l: int = 1
    d: int | None = None
    n: int | None = None
    m: int | None = None
    family: str | None = None
    mode: str = "bordered"
    pmax: int | None = None
    dmax: int | None = None
    workers: int | None = None
    real_exists: bool = False

    def need(self, *names: str) -> None:
        missing = [f"--{x.replace('_', '-')}" for x in names if getattr(self, x) in (None, [])]
        if missing:
            raise InputError(f"{self.command} needs {', '.join(missing)}")

    def single_p(self) -> int:
        self.need("p")
        if len(self.p) != 1:
            raise InputError(f"{self.command} takes a single prime, got {self.p}")
        return self.p[0]

    def source(self) -> str:
        """The one input file, from --input or a positional argument."""
        srcs = ([self.input] if self.input else []) + self.paths
        if len(srcs) != 1:
            raise InputError(f"{self.command} needs exactly one input file")
        return srcs[0]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffetf", description="Equiangular tight frames over finite fields.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("paths", nargs="*", help="input files (verify, naimark, project-real, report)")
    ap.add_argument("--input")
    ap.add_argument("--output")
    ap.add_argument("--p", type=_int_list, default=[], help="prime, or comma-separated primes for nonexist")
    ap.add_argument("--l", type=int, default=1, choices=(1, 2))
    ap.add_argument("--d", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--family", help="e.g. paley(9), triangular(7), from_edge_list(g.txt)")
    ap.add_argument("--mode", choices=("bordered", "centroidal"), default="bordered")
    ap.add_argument("--pmax", type=int)
    ap.add_argument("--dmax", type=int)
    ap.add_argument("--workers", type=int, help="defaults to FFETF_WORKERS, else the CPU count")
    ap.add_argument("--real-exists", type=_bool, default=False, metavar="{true,false}")
    return ap


def _config(argv: Sequence[str] | None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    return RunConfig(**vars(ns))


# -- output helpers -------------------------------------------------------------------------


def _emit_cert(cert: EtfCertificate, out: str | None, index: int | None = None) -> None:
    rec = cert.summary()
    if out:
        path = Path(out)
        if index is not None:
            path = path.with_name(f"{path.stem}-{index}{path.suffix or '.json'}")
        write_certificate(cert, path)
        rec["file"] = str(path)
    print(json.dumps(rec))


def _workers(cfg: RunConfig) -> int:
    w = cfg.workers if cfg.workers is not None else default_workers()
    if w < 1:
        raise InputError("--workers must be positive")
    return w


# -- commands -------------------------------------------------------------------------------


def _cmd_verify(cfg: RunConfig) -> int:
    g = read_matrix(cfg.source())
    if not isinstance(g, MatGF):
        raise InputError("verify needs a matrix over a finite field (header p l rows cols)")
    cert = verify_etf(g, "verify")
    if cert is None:
        print(json.dumps({"etf": False, "p": g.ctx.p, "l": g.ctx.l, "n": g.rows}))
        return NEGATIVE
    _emit_cert(cert, cfg.output)
    return OK


def _cmd_construct(cfg: RunConfig) -> int:
    cfg.need("family")
    p = cfg.single_p()
    graph = parse_family(cfg.family)
    certs = (seidel_waldron if cfg.mode == "bordered" else centered_or_axial)(graph, p)
    if not certs:
        print(json.dumps({"etf": False, "family": cfg.family, "mode": cfg.mode, "p": p}))
        return NEGATIVE
    for i, cert in enumerate(certs):
        _emit_cert(cert, cfg.output, i if len(certs) > 1 else None)
    return OK


def _cmd_scan(cfg: RunConfig) -> int:
    cfg.need("pmax")
    rows = read_scan_csv(cfg.source())
    out = scan(rows, cfg.pmax, cfg.dmax, workers=_workers(cfg))
    text = format_scan_csv(out)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def _cmd_gerzon(cfg: RunConfig) -> int:
    cfg.need("d")
    _emit_cert(triangular_gerzon(cfg.d, cfg.single_p()), cfg.output)
    return OK


def _cmd_steiner(cfg: RunConfig) -> int:
    cfg.need("m")
    _emit_cert(steiner_modular(cfg.m, cfg.single_p()), cfg.output)
    return OK


def _cmd_naimark(cfg: RunConfig) -> int:
    src = cfg.source()
    if src.endswith(".json"):
        cert = read_certificate(src)
    else:
        g = read_matrix(src)
        cert = verify_etf(g, "naimark-input") if isinstance(g, MatGF) else None
        if cert is None:
            raise InputError(f"{src} is not the Gram matrix of an ETF")
    if cert.params.c.is_zero():
        raise InputError("Naimark complement needs c != 0")
    _emit_cert(naimark(cert), cfg.output)
    return OK


def _cmd_project_real(cfg: RunConfig) -> int:
    cfg.need("d")
    s = read_matrix(cfg.source())
    if not isinstance(s, IntMat):
        raise InputError("project-real needs an integer signature matrix (header 0 0 n n)")
    cert = project_real_signature(s, cfg.d, cfg.single_p(), cfg.l)
    _emit_cert(cert, cfg.output)
    return OK


def _cmd_nonexist(cfg: RunConfig) -> int:
    cfg.need("d", "n")
    primes = cfg.p or None
    if primes is None and cfg.real_exists:
        raise InputError("a real ETF exists, so pass the primes to search with --p")
    cert = nonexistence_pipeline(cfg.d, cfg.n, primes, cfg.real_exists, workers=_workers(cfg))
    if cfg.output:
        write_nonexistence_certificate(cert, cfg.output)
    print(
        json.dumps(
            {
                "d": cert.d,
                "n": cert.n,
                "primes": cert.primes,
                "verdict": cert.verdict,
                "blocks": len(cert.blocks),
            }
        )
    )
    if cert.witness is not None:
        print(json.dumps({"witness": cert.witness.witness, "p": cert.witness.p, "s": cert.witness.s}))
    return NEGATIVE if cert.verdict == "nonexistent" else OK


# -- report ---------------------------------------------------------------------------------


ETF_HEADER = ("p", "d", "n", "a", "c", "flags")
BLOCK_HEADER = ("p", "s", "a", "|V|", "omega")


def _etf_flags(d: int, n: int) -> str:
    bound = d * (d + 1) // 2
    if n == bound:
        return "gerzon-equality"
    return "gerzon-violation" if n > bound else ""


def _table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(map(str, header))] + [[str(x) for x in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells)


def _load_report_item(path: str) -> tuple[str, list[tuple]]:
    text = Path(path).read_text()
    if not text.strip():
        return "etf", []
    if path.endswith(".csv"):
        rows = []
        for rec in csv.DictReader(text.splitlines()):
            if "p" not in rec:
                raise InputError(f"{path}: not a scan output (no p column)")
            rows.append((rec["p"], rec["d"], rec["n"], rec["a"], rec["c"], rec.get("flags", "")))
        return "etf", rows
    rec = json.loads(text)
    kind = rec.get("kind")
    if kind == "nonexistence":
        cert = read_nonexistence_certificate(path)
        return "blocks", [(b.p, b.s, b.a, b.V_size, b.omega) for b in cert.blocks]
    if kind == "etf":
        cert = read_certificate(path)
        pr = cert.params
        return "etf", [(pr.ctx.q, pr.d, pr.n, pr.a, pr.c, _etf_flags(pr.d, pr.n))]
    raise InputError(f"{path}: unknown certificate kind {kind!r}")


def report(paths: Sequence[str]) -> str:
    """Tabulate ETF certificates and scan CSVs as (p,d,n,a,c) rows and
    nonexistence certificates as (p,s,a,|V|,omega) rows."""
    etf: list[tuple] = []
    blocks: list[tuple] = []
    for path in paths:
        kind, rows = _load_report_item(path)
        (blocks if kind == "blocks" else etf).extend(rows)
    parts = []
    if etf or not blocks:
        parts.append(_table(ETF_HEADER, etf))
    if blocks:
        parts.append(_table(BLOCK_HEADER, blocks))
    return "\n\n".join(parts) + "\n"


def _cmd_report(cfg: RunConfig) -> int:
    paths = ([cfg.input] if cfg.input else []) + cfg.paths
    text = report(paths)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


_DISPATCH = {
    "verify": _cmd_verify,
    "construct": _cmd_construct,
    "scan": _cmd_scan,
    "gerzon": _cmd_gerzon,
    "steiner": _cmd_steiner,
    "naimark": _cmd_naimark,
    "project-real": _cmd_project_real,
    "nonexist": _cmd_nonexist,
    "report": _cmd_report,
}


def dispatch(cfg: RunConfig) -> int:
    try:
        handler = _DISPATCH[cfg.command]
    except KeyError:
        print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
        return BAD_INPUT
    try:
        return handler(cfg)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = _config(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
