"""ETFs from (modular) strongly regular graphs.

Two shapes of Gram matrix are built from the Seidel matrix Sigma of a graph
on v vertices:

* bordered, n = v + 1:   [[a, 1^T], [1, Sigma + aI]]
* centroidal, n = v:     Sigma + aI, with the all-ones vector an eigenvector

Parameter mode predicts (a, c, n, d) from SRG parameters alone; graph mode
builds the Gram matrix over F_p and certifies it.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sympy import primerange

from .frames import EtfCertificate, gerzon_check, GerzonStatus, verify_etf
from .gf import FieldCtx, FieldElem, lift_int, make_field, sqrt
from .graphs import (
    Graph,
    SrgParams,
    SrgSpectrum,
    check_modular_srg,
    check_srg,
    registry_graph,
    seidel_matrix,
    srg_spectrum,
    triangular_complement,
)
from .matgf import MatGF, rank

__all__ = [
    "HypothesisError",
    "ConstructionPrediction",
    "ScanRow",
    "seidel_waldron",
    "centered_or_axial",
    "two_graph_star",
    "centroidal",
    "triangular_gerzon",
    "steiner_modular",
    "scan",
    "read_scan_csv",
    "write_scan_csv",
]

BORDERED = "bordered"
CENTROIDAL = "centroidal"


class HypothesisError(ValueError):
    """A construction was asked to run outside its hypotheses."""


@dataclass(frozen=True)
class ConstructionPrediction:
    p: int
    mode: str
    theorem: str
    a: int
    c: int
    n: int
    d: int | None
    d_status: str  # "exact", "bound" or "graph-dependent"
    cases: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScanRow:
    params: SrgParams
    p: int
    d: int
    d_status: str  # "exact", "bound" or "computed-from-graph"
    n: int
    a: int
    c: int
    theorem: str
    flags: tuple[str, ...] = field(default_factory=tuple)

    def as_record(self) -> dict:
        v, k, lam, mu = self.params
        return {
            "v": v,
            "k": k,
            "lambda": lam,
            "mu": mu,
            "p": self.p,
            "d": self.d,
            "d_status": self.d_status,
            "n": self.n,
            "a": self.a,
            "c": self.c,
            "theorem": self.theorem,
            "flags": ";".join(self.flags),
        }


# -- Gram builders -------------------------------------------------------------------


def _seidel_over(g: Graph, ctx: FieldCtx) -> MatGF:
    return seidel_matrix(g).reduce(ctx)


def _bordered_gram(sigma: MatGF, a: FieldElem) -> MatGF:
    ctx = sigma.ctx
    v = sigma.rows
    comps = np.zeros((ctx.l, v + 1, v + 1), dtype=sigma.comps.dtype)
    comps[:, 1:, 1:] = sigma.comps
    comps[0, 0, 1:] = 1
    comps[0, 1:, 0] = 1
    return MatGF(ctx, comps) + MatGF.identity(ctx, v + 1).scale(a)


def _centroidal_gram(sigma: MatGF, a: FieldElem) -> MatGF:
    return sigma + MatGF.identity(sigma.ctx, sigma.rows).scale(a)


def _row_sum_constant(g: MatGF) -> FieldElem | None:
    """theta with G 1 = theta 1, if any."""
    sums = g.comps.sum(axis=2) % g.ctx.p
    if not (sums == sums[:, :1]).all():
        return None
    return FieldElem(g.ctx, int(sums[0, 0]), int(sums[1, 0]) if g.ctx.l == 2 else 0)


def _delta_roots(value: int, p: int) -> tuple[FieldCtx, tuple[FieldElem, ...]]:
    """Roots of delta^2 = value in F_p, or else in F_{p^2}."""
    for l in (1, 2):
        ctx = make_field(p, l)
        roots = sqrt(lift_int(value, ctx))
        if roots is not None:
            return ctx, roots
    raise AssertionError("every element of F_p is a square in F_{p^2}")


def _modular_etfs(g: Graph, p: int, mode: str) -> tuple[EtfCertificate, ...] | None:
    mp = check_modular_srg(g, p)
    if mp is None:
        return None
    v, k, lam, mu = g.v, mp.k, mp.lam, mp.mu
    if mode == BORDERED:
        if (k - 2 * mu) % p or (v - 3 * k + 2 * lam + 1) % p:
            return None
    elif (v - 4 * k + 2 * lam + 2 * mu) % p:
        return None
    ctx, roots = _delta_roots((lam - mu) ** 2 + 4 * (k - mu), p)
    delta = roots[-1]
    sigma = _seidel_over(g, ctx)
    out = []
    signs = (1,) if delta.is_zero() else (1, -1)
    for eps in signs:
        a = lift_int(lam - mu + 1, ctx) + eps * delta
        c = 2 * eps * delta
        if mode == BORDERED:
            gram = _bordered_gram(sigma, a)
            tag = f"seidel-waldron(p={p},eps={eps:+d})"
        else:
            gram = _centroidal_gram(sigma, a)
            tag = f"centered-or-axial(p={p},eps={eps:+d})"
        cert = verify_etf(gram, tag)
        if cert is None or cert.params.a != a or cert.params.c != c or cert.params.b != 1:
            raise AssertionError(f"{tag}: constructed Gram matrix failed to verify")
        if mode == CENTROIDAL and _row_sum_constant(gram) is None:
            raise AssertionError(f"{tag}: all-ones vector is not an eigenvector")
        out.append(cert)
    return tuple(out)


def seidel_waldron(g: Graph, p: int) -> tuple[EtfCertificate, ...] | None:
    """Bordered (a,1,c)-ETFs of n = v+1 vectors from an SRG_p meeting
    k = 2mu, v = 3k - 2lambda - 1 mod p; one certificate per sign of delta."""
    return _modular_etfs(g, p, BORDERED)


def centered_or_axial(g: Graph, p: int) -> tuple[EtfCertificate, ...] | None:
    """Centroidal (a,1,c)-ETFs of n = v vectors from an SRG_p with
    v = 4k - 2lambda - 2mu mod p."""
    return _modular_etfs(g, p, CENTROIDAL)


# -- SRG theorems -------------------------------------------------------------------------


def _resolve(source: SrgParams | Graph) -> tuple[SrgParams, Graph | None]:
    if isinstance(source, Graph):
        params = check_srg(source)
        if params is None:
            raise HypothesisError("graph is not a nontrivial strongly regular graph")
        return params, source
    return source, None


def _spectrum(params: SrgParams) -> SrgSpectrum:
    spec = srg_spectrum(params)
    if spec.f == spec.g:
        raise HypothesisError(f"{params} has f = g; the conference case is excluded")
    return spec


def _p_adic_valuation(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    m = 0
    while x % p == 0:
        x //= p
        m += 1
    return m


def predict_two_graph_star(params: SrgParams, p: int) -> ConstructionPrediction:
    make_field(p)
    v, k, lam, mu = params
    spec = _spectrum(params)
    if (k - 2 * mu) % p:
        raise HypothesisError(f"p={p} does not divide k - 2mu = {k - 2 * mu}")
    if (v - 3 * k + 2 * lam + 1) % p:
        raise HypothesisError(f"p={p} does not divide v - 3k + 2lambda + 1 = {v - 3 * k + 2 * lam + 1}")
    r, s, f, g = spec.r, spec.s, spec.f, spec.g
    a, c = (2 * r + 1) % p, (2 * r - 2 * s) % p
    if (r - s) % p:
        d, status, cases = g + 1, "exact", ("r!=s",)
    else:
        d, status, cases = min(f + 1, g + 1), "bound", ("r=s",)
    return ConstructionPrediction(p, BORDERED, "2-graph*", a, c, v + 1, d, status, cases)


def predict_centroidal(params: SrgParams, p: int) -> ConstructionPrediction:
    make_field(p)
    v, k, lam, mu = params
    spec = _spectrum(params)
    if (v - 4 * k + 2 * lam + 2 * mu) % p:
        raise HypothesisError(
            f"p={p} does not divide v - 4k + 2lambda + 2mu = {v - 4 * k + 2 * lam + 2 * mu}"
        )
    r, s, f, g = spec.r, spec.s, spec.f, spec.g
    a, c = (2 * r + 1) % p, (2 * r - 2 * s) % p
    t = v - 2 * k + 2 * r
    cases: list[str] = []
    exact: int | None = None
    bound: int | None = None
    if (r - s) % p:
        if t % p:
            exact = g + 1
            cases.append("a")
        else:
            exact = g
            cases.append("b")
    else:
        bound = min(f + 1, g + 1)
        cases.append("c")
    if t % p ** (_p_adic_valuation(v, p) + 1) == 0:
        cases.append("d")
        if exact is None:
            bound = g if bound is None else min(bound, g)
    if exact is not None:
        return ConstructionPrediction(p, CENTROIDAL, "2-graph", a, c, v, exact, "exact", tuple(cases))
    return ConstructionPrediction(p, CENTROIDAL, "2-graph", a, c, v, bound, "bound", tuple(cases))


def two_graph_star(source: SrgParams | Graph, p: int) -> ConstructionPrediction | EtfCertificate:
    """Bordered ETF with a = 2r+1, c = 2r-2s and n = v+1.

    Given parameters, returns the prediction; given a graph, builds and
    certifies the Gram matrix over F_p.
    """
    params, graph = _resolve(source)
    pred = predict_two_graph_star(params, p)
    if graph is None:
        return pred
    ctx = make_field(p)
    gram = _bordered_gram(_seidel_over(graph, ctx), ctx(pred.a))
    cert = verify_etf(gram, f"2-graph*(p={p})")
    if cert is None or cert.params.c != pred.c:
        raise AssertionError("2-graph* Gram matrix failed to verify")
    return cert


def centroidal(source: SrgParams | Graph, p: int) -> ConstructionPrediction | EtfCertificate:
    """Centroidal ETF Sigma + (2r+1)I with c = 2r-2s and n = v.

    Given parameters, returns the prediction; given a graph, builds and
    certifies the Gram matrix over F_p and checks G 1 = theta 1.
    """
    params, graph = _resolve(source)
    pred = predict_centroidal(params, p)
    if graph is None:
        return pred
    ctx = make_field(p)
    gram = _centroidal_gram(_seidel_over(graph, ctx), ctx(pred.a))
    return _certify_centroidal(gram, pred.c, f"2-graph(p={p})")


def _certify_centroidal(gram: MatGF, c: int, tag: str) -> EtfCertificate:
    cert = verify_etf(gram, tag)
    if cert is None or cert.params.c != c:
        raise AssertionError(f"{tag}: Gram matrix failed to verify")
    if _row_sum_constant(gram) is None:
        raise AssertionError(f"{tag}: all-ones vector is not an eigenvector")
    return cert


def triangular_gerzon(d: int, p: int) -> EtfCertificate:
    """(3,1,12)-ETF of d(d+1)/2 vectors in dimension d over F_p, p | d-7.

    Uses the complement of the triangular graph T(d+1), where r = 1 and the
    centroidal Gram matrix is Sigma + 3I.
    """
    if d <= 1:
        raise HypothesisError("need d > 1")
    ctx = make_field(p)
    if (d - 7) % p:
        raise HypothesisError(f"p={p} does not divide d - 7 = {d - 7}")
    graph = triangular_complement(d + 1)
    gram = _centroidal_gram(_seidel_over(graph, ctx), ctx(3))
    cert = _certify_centroidal(gram, 12 % p, f"triangular-gerzon(d={d},p={p})")
    n = d * (d + 1) // 2
    if cert.params.n != n or cert.params.d != d:
        raise AssertionError(f"expected rank {d} with {n} vectors, got {cert.params}")
    return cert


def steiner_gram_vectors(m: int, ctx: FieldCtx) -> MatGF:
    """Synthesis matrix (b x m^2) of the Steiner ETF built from all 2-subsets
    of [m] and H = [[1, 1^T], [1, 2I - J]] with its all-ones row removed."""
    blocks = [(i, j) for i in range(m) for j in range(i + 1, m)]
    block_index = {blk: t for t, blk in enumerate(blocks)}
    h = np.ones((m, m), dtype=np.int64)
    h[1:, 1:] = 2 * np.eye(m - 1, dtype=np.int64) - 1
    h_cut = h[1:]  # (m-1) x m
    phi = np.zeros((len(blocks), m * m), dtype=np.int64)
    for j in range(m):
        others = [x for x in range(m) if x != j]
        for i, x in enumerate(others):
            t = block_index[(min(j, x), max(j, x))]
            phi[t, j * m : (j + 1) * m] = h_cut[i]
    return MatGF.from_ints(ctx, phi)


def steiner_modular(m: int, p: int) -> EtfCertificate:
    """(3,1,8)-ETF of m^2 vectors in the real model on F_p^{m(m-1)/2}, m = 4 mod p."""
    ctx = make_field(p)
    if m < 4:
        raise HypothesisError("need m >= 4")
    if (m - 4) % p:
        raise HypothesisError(f"m={m} is not 4 mod {p}")
    phi = steiner_gram_vectors(m, ctx)
    gram = phi.T @ phi
    cert = _certify_centroidal(gram, 8 % p, f"steiner(m={m},p={p})")
    pr = cert.params
    if pr.a != 3 or pr.b != 1 or pr.d != m * (m - 1) // 2 or pr.n != m * m:
        raise AssertionError(f"Steiner ETF has unexpected parameters {pr}")
    return cert


# -- parameter scan -------------------------------------------------------------------------


def _gerzon_flags(d: int, status: str, n: int, a: int, p: int) -> tuple[str, list[str]]:
    """Gerzon's bound n <= d(d+1)/2 holds for (a,1)-systems with a^2 != 1.

    A bound d <= B with n = B(B+1)/2 is then forced to equality, and a bound
    with n > B(B+1)/2 is a contradiction.
    """
    flags: list[str] = []
    g = gerzon_check(d, n)
    applies = (a * a - 1) % p != 0
    if g == GerzonStatus.VIOLATION and applies:
        flags.append("gerzon-violation")
    elif g == GerzonStatus.AT_BOUND:
        if status == "bound":
            if not applies:
                return status, flags
            status = "exact"
            flags.append("forced-by-gerzon")
        flags.append("gerzon-equality")
    return status, flags


def _scan_one(args: tuple[SrgParams, int, int | None, int]) -> list[ScanRow]:
    params, pmax, dmax, graph_vmax = args
    try:
        spec = srg_spectrum(params)
    except ValueError:
        return []
    if spec.f == spec.g:
        return []
    out: list[ScanRow] = []
    graph: Graph | None | bool = False
    for p in primerange(3, pmax + 1):
        p = int(p)
        preds = []
        for fn in (predict_two_graph_star, predict_centroidal):
            try:
                preds.append(fn(params, p))
            except HypothesisError:
                continue
        for pred in preds:
            d, status = pred.d, pred.d_status
            if status == "bound":
                if graph is False:
                    graph = registry_graph(params, graph_vmax)
                if graph is not None:
                    cert = (two_graph_star if pred.mode == BORDERED else centroidal)(graph, p)
                    d, status = cert.params.d, "computed-from-graph"
            status, flags = _gerzon_flags(d, status, pred.n, pred.a, p)
            if dmax is not None and d > dmax:
                continue
            theorem = pred.theorem
            if pred.mode == CENTROIDAL:
                theorem += "(" + ",".join(pred.cases) + ")"
            out.append(ScanRow(params, p, d, status, pred.n, pred.a, pred.c, theorem, tuple(flags)))
    return out


def scan(
    rows: Iterable[SrgParams],
    pmax: int,
    dmax: int | None = None,
    workers: int = 1,
    graph_vmax: int = 300,
) -> list[ScanRow]:
    """Predicted ETFs for every row and odd prime p <= pmax meeting either
    theorem's hypotheses; output in input order, then ascending p.

    (a, c) are the theorem's representatives (2r+1, 2r-2s) reduced into [0, p).
    """
    rows = list(rows)
    for r in rows:
        if not isinstance(r, SrgParams):
            raise TypeError(f"scan rows must be SrgParams, got {r!r}")
    jobs = [(r, pmax, dmax, graph_vmax) for r in rows]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_scan_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [_scan_one(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]


SCAN_COLUMNS = ["v", "k", "lambda", "mu", "p", "d", "d_status", "n", "a", "c", "theorem", "flags"]


def parse_scan_input(text: str) -> list[SrgParams]:
    reader = csv.DictReader(io.StringIO(text))
    need = {"v", "k", "lambda", "mu"}
    if reader.fieldnames is None or not need <= {f.strip() for f in reader.fieldnames}:
        raise ValueError("scan input needs a header with v,k,lambda,mu")
    out = []
    for i, rec in enumerate(reader, start=2):
        rec = {k.strip(): (v or "").strip() for k, v in rec.items() if k is not None}
        try:
            params = SrgParams(int(rec["v"]), int(rec["k"]), int(rec["lambda"]), int(rec["mu"]))
        except ValueError as exc:
            raise ValueError(f"line {i}: malformed SRG parameters") from exc
        if not params.identity_holds():
            raise ValueError(f"line {i}: {params} violates k(k-lambda-1) = mu(v-k-1)")
        out.append(params)
    return out


def read_scan_csv(path: str | Path) -> list[SrgParams]:
    return parse_scan_input(Path(path).read_text())


def format_scan_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.as_record())
    return buf.getvalue()


def write_scan_csv(rows: Sequence[ScanRow], path: str | Path) -> None:
    Path(path).write_text(format_scan_csv(rows))


def default_workers() -> int:
    env = os.environ.get("FFETF_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1
