"""Built-in degree and rank distribution tables.

Rank tables (h1, h2, h3) are empirical line-network measurements; degree
tables (psi1..psi18) are reference designs for various (q, K, M, precode)
operating points.  Published table entries are rounded to four decimals,
so loaders renormalize to an exact probability vector.
"""

from __future__ import annotations

import json
from importlib import resources

from batskit.code_model import DegreeDistribution, RankDistribution

RANK_TABLES = ("h1", "h2", "h3")
DEGREE_TABLES = tuple(f"psi{i}" for i in range(1, 19))


def _read(name: str) -> dict:
    path = resources.files("batskit").joinpath("data", f"{name}.json")
    return json.loads(path.read_text())


def load_rank_dist(name: str) -> RankDistribution:
    if name not in RANK_TABLES:
        raise KeyError(f"unknown rank table {name!r}; have {RANK_TABLES}")
    return RankDistribution(_read(name)["probs"], normalize=True)


def rank_table_meta(name: str) -> dict:
    """The (M, q) the table was measured for."""
    obj = _read(name)
    return {"M": obj["M"], "q": obj["q"]}


def load_degree_dist(name: str) -> DegreeDistribution:
    if name not in DEGREE_TABLES:
        raise KeyError(f"unknown degree table {name!r}; have psi1..psi18")
    obj = _read(name)
    return DegreeDistribution(obj["K"], obj["weights"], normalize=True)


def dump_table(name: str) -> str:
    """Raw JSON of a built-in table, as shipped."""
    if name not in RANK_TABLES + DEGREE_TABLES:
        raise KeyError(f"unknown table {name!r}")
    return json.dumps(_read(name), indent=1)
