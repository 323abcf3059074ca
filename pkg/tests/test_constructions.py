import numpy as np
import pytest

from conftest import mu_from
from ffetf.constructions import (
    HypothesisError,
    SCAN_COLUMNS,
    centered_or_axial,
    centroidal,
    format_scan_csv,
    parse_scan_input,
    predict_centroidal,
    predict_two_graph_star,
    read_scan_csv,
    scan,
    seidel_waldron,
    steiner_modular,
    triangular_gerzon,
    two_graph_star,
    write_scan_csv,
)
from ffetf.frames import GerzonStatus, gerzon_check, normalize_sign
from ffetf.graphs import (
    SrgParams,
    check_srg,
    complement_params,
    lattice,
    paley,
    petersen,
    seidel_matrix,
    triangular,
    triangular_complement,
)
from ffetf.matgf import IntMat, p_rank


def ac(cert):
    return int(cert.params.a), int(cert.params.c)


def test_seidel_waldron_examples():
    (c,) = seidel_waldron(paley(9), 3)
    assert ac(c) == (0, 0) and c.params.n == 10 and c.params.d == 4
    assert seidel_waldron(petersen(), 3) is None
    certs = seidel_waldron(triangular(9), 3)
    assert len(certs) == 2
    # delta^2 = 3^2 + 4*10 = 49 = 1 mod 3, so c = +-2
    assert sorted(int(x.params.c) for x in certs) == [1, 2]


def test_seidel_waldron_pairs():
    # (a, c) = (lambda - mu + eps*delta + 1, 2 eps delta)
    for g in (triangular(9), lattice(5), paley(13), triangular_complement(7)):
        params = check_srg(g)
        for p in (3, 5, 7, 11, 13):
            certs = seidel_waldron(g, p)
            if not certs:
                continue
            _, k, lam, mu = params
            for c in certs:
                delta = c.params.c / 2
                assert delta * delta == (lam - mu) ** 2 + 4 * (k - mu)
                assert c.params.a == lam - mu + 1 + delta
            if len(certs) == 2:
                assert certs[0].params.c == -certs[1].params.c


def test_two_graph_star_examples():
    pred = two_graph_star(SrgParams(3250, 57, 0, 1), 11)
    assert (pred.a, pred.c, pred.n, pred.d, pred.d_status) == (4, 8, 3251, 1521, "exact")
    cert = two_graph_star(triangular(9), 3)
    assert ac(cert) == (2, 2) and cert.params.n == 37 and cert.params.d == 28
    pred = two_graph_star(SrgParams(36, 21, 10, 15), 3)
    assert pred.d == 9 and pred.n == 37
    assert normalize_sign(pred.a, pred.c, 3) == (0, 1)
    with pytest.raises(HypothesisError):
        two_graph_star(SrgParams(10, 3, 0, 1), 5)


def test_centroidal_examples():
    c3 = centroidal(petersen(), 3)
    assert ac(c3) == (0, 0) and c3.params.d == 4
    c5 = centroidal(petersen(), 5)
    assert ac(c5) == (3, 1) and c5.params.d == 5
    pred = centroidal(complement_params(SrgParams(841, 200, 87, 35)), 5)
    assert (pred.a, pred.c, pred.n, pred.d) == (0, 1, 841, 40)
    assert gerzon_check(pred.d, pred.n) is GerzonStatus.VIOLATION


def test_conference_case_rejected():
    with pytest.raises(HypothesisError):
        predict_centroidal(SrgParams(9, 4, 1, 2), 3)


def test_centroidal_row_sums():
    for g in (petersen(), triangular(7), lattice(4), paley(13)):
        for p in (3, 5, 7, 11, 13):
            for c in centered_or_axial(g, p) or ():
                one = c.gram.comps.sum(axis=2) % p
                assert (one == one[:, :1]).all()


def test_triangular_gerzon_examples():
    t = triangular_gerzon(10, 3)
    assert ac(t) == (0, 0) and t.params.n == 55 and t.params.d == 10
    t = triangular_gerzon(14, 7)
    assert ac(t) == (3, 5) and t.params.n == 105 and t.params.d == 14
    t = triangular_gerzon(7, 5)
    assert t.params.n == 28 and t.params.d == 7
    with pytest.raises(HypothesisError):
        triangular_gerzon(9, 3)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_triangular_gerzon_family(p):
    for d in range(2, 41):
        if (d - 7) % p:
            continue
        t = triangular_gerzon(d, p)
        assert t.params.n == d * (d + 1) // 2 and t.params.d == d


def test_steiner_examples():
    s = steiner_modular(7, 3)
    assert (str(s.params.a), str(s.params.c), s.params.d, s.params.n) == ("0", "2", 21, 49)
    for p in (3, 5, 7, 11):
        s = steiner_modular(4, p)
        assert s.params.d == 6 and s.params.n == 16
        assert ac(s) == (3 % p, 8 % p)
    with pytest.raises(HypothesisError):
        steiner_modular(6, 5)


@pytest.mark.slow
def test_steiner_large():
    s = steiner_modular(22, 3)
    assert s.params.d == 231 and s.params.n == 484


@pytest.mark.parametrize(
    "graph", [petersen(), triangular(7), triangular(9), lattice(5), lattice(7), triangular_complement(8), paley(13)],
    ids=lambda g: g.name,
)
def test_graph_rank_matches_prediction(graph):
    params = check_srg(graph)
    for p in (3, 5, 7, 11, 13):
        for build, predict in ((two_graph_star, predict_two_graph_star), (centroidal, predict_centroidal)):
            try:
                pred = predict(params, p)
            except HypothesisError:
                continue
            cert = build(graph, p)
            assert (int(cert.params.a), int(cert.params.c)) == (pred.a, pred.c)
            if pred.d_status == "exact":
                assert cert.params.d == pred.d
            else:
                assert cert.params.d <= pred.d


def test_p_rank_oracle_for_centroidal_rank():
    # rank of Sigma + aI over F_p, computed independently through p_rank
    for g, p in ((petersen(), 5), (triangular(9), 5), (lattice(5), 3)):
        try:
            cert = centroidal(g, p)
        except HypothesisError:
            continue
        s = seidel_matrix(g).entries + int(cert.params.a) * np.eye(g.v, dtype=np.int64)
        assert p_rank(IntMat(s), p) == cert.params.d


# -- scan ---------------------------------------------------------------------------------


def test_scan_examples():
    rows = scan([SrgParams(99, 14, 1, 2)], 5)
    assert [(r.p, r.d, r.n, r.a, r.c) for r in rows] == [(5, 45, 100, 2, 4)]
    rows = scan([SrgParams(351, 210, 113, 144)], 5)
    (r,) = [r for r in rows if r.p == 5]
    assert (r.d, r.n, r.a, r.c) == (26, 351, 0, 0) and "gerzon-equality" in r.flags
    rows = scan([SrgParams(3250, 57, 0, 1)], 11)
    assert (11, 1521, 3251, 4, 8) in [(r.p, r.d, r.n, r.a, r.c) for r in rows]


def test_scan_violation():
    rows = scan([complement_params(SrgParams(841, 200, 87, 35))], 5)
    (r,) = [r for r in rows if r.p == 5]
    assert (r.d, r.n, r.a, r.c) == (40, 841, 0, 1)
    assert "gerzon-violation" in r.flags


def test_scan_golden_rows(srg_etf_rows):
    missing = []
    for v, k, lam, p, d, n, a, c in srg_etf_rows:
        params = SrgParams(v, k, lam, mu_from(v, k, lam))
        got = {(r.p, r.d, r.n, r.a, r.c) for r in scan([params], p)}
        if (p, d, n, a, c) not in got:
            missing.append((v, k, lam, p, d, n, a, c))
    assert missing == []


def test_scan_gerzon_equality_rows(gerzon_equality_rows):
    for v, k, lam, mu, p, d, a, c in gerzon_equality_rows:
        rows = [r for r in scan([SrgParams(v, k, lam, mu)], p) if r.p == p and r.n == d * (d + 1) // 2]
        assert [(r.d, r.a, r.c) for r in rows] == [(d, a, c)]
        assert "gerzon-equality" in rows[0].flags


def test_scan_predictions_satisfy_relations(srg_etf_rows):
    for v, k, lam, p, *_ in srg_etf_rows[:60]:
        for r in scan([SrgParams(v, k, lam, mu_from(v, k, lam))], p):
            # trace and Welch relations hold for exact rows with b = 1
            if r.d_status != "bound":
                assert (r.n * r.a - r.d * r.c) % r.p == 0
            assert (r.a * (r.c - r.a) - (r.n - 1)) % r.p == 0


def test_scan_dmax_and_order():
    params = [SrgParams(99, 14, 1, 2), SrgParams(10, 3, 0, 1)]
    rows = scan(params, 13)
    assert [r.params for r in rows] == sorted([r.params for r in rows], key=params.index)
    assert all(r.d <= 20 for r in scan(params, 13, dmax=20))


def test_scan_workers_identical():
    params = [SrgParams(99, 14, 1, 2), SrgParams(10, 3, 0, 1), SrgParams(36, 14, 7, 4), SrgParams(351, 210, 113, 144)]
    assert format_scan_csv(scan(params, 13, workers=1)) == format_scan_csv(scan(params, 13, workers=3))


def test_scan_csv_io(tmp_path):
    text = "v,k,lambda,mu\n99,14,1,2\n10,3,0,1\n"
    (tmp_path / "in.csv").write_text(text)
    params = read_scan_csv(tmp_path / "in.csv")
    assert params == [SrgParams(99, 14, 1, 2), SrgParams(10, 3, 0, 1)]
    rows = scan(params, 7)
    write_scan_csv(rows, tmp_path / "out.csv")
    header = (tmp_path / "out.csv").read_text().splitlines()[0]
    assert header.split(",") == SCAN_COLUMNS
    with pytest.raises(ValueError):
        parse_scan_input("v,k,lambda,mu\n10,3,0,2\n")
    with pytest.raises(ValueError):
        parse_scan_input("a,b\n1,2\n")
