from pathlib import Path

import pytest
from hypothesis import settings

DATA = Path(__file__).parent / "data"

settings.register_profile("ci", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("ci")


def load_rows(name: str) -> list[tuple[int, ...]]:
    rows = []
    for line in (DATA / name).read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            rows.append(tuple(int(t) for t in line.split()))
    return rows


def mu_from(v: int, k: int, lam: int) -> int:
    num, den = k * (k - lam - 1), v - k - 1
    assert num % den == 0
    return num // den


@pytest.fixture(scope="session")
def srg_etf_rows():
    return load_rows("srg_etf_rows.txt")


@pytest.fixture(scope="session")
def gerzon_equality_rows():
    return load_rows("gerzon_equality_rows.txt")


@pytest.fixture(scope="session")
def dim5_blocks():
    return load_rows("dim5_blocks.txt")
