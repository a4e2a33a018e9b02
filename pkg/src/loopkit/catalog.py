"""Embedded loops and small generators used as a test corpus."""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .cayley import Loop, LoopError, direct_product, dumps, validate_table

# Flexible IP C-loop of order 20 whose commutant is not a subloop.
_TABLE1_ROWS = (
    "1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17 18 19 20",
    "2 4 1 3 7 8 6 5 10 12 9 11 19 20 17 18 16 15 14 13",
    "3 1 4 2 8 7 5 6 11 9 12 10 20 19 18 17 15 16 13 14",
    "4 3 2 1 6 5 8 7 12 11 10 9 14 13 16 15 18 17 20 19",
    "5 7 8 6 4 1 3 2 13 17 18 14 12 9 19 20 11 10 16 15",
    "6 8 7 5 1 4 2 3 14 18 17 13 9 12 20 19 10 11 15 16",
    "7 6 5 8 3 2 1 4 15 19 20 16 17 18 9 12 13 14 10 11",
    "8 5 6 7 2 3 4 1 16 20 19 15 18 17 12 9 14 13 11 10",
    "9 10 11 12 13 14 16 15 1 2 3 4 5 6 8 7 19 20 17 18",
    "10 12 9 11 17 18 20 19 2 4 1 3 16 15 13 14 6 5 7 8",
    "11 9 12 10 18 17 19 20 3 1 4 2 15 16 14 13 5 6 8 7",
    "12 11 10 9 14 13 15 16 4 3 2 1 6 5 7 8 20 19 18 17",
    "13 19 20 14 12 9 18 17 5 15 16 6 4 1 11 10 7 8 3 2",
    "14 20 19 13 9 12 17 18 6 16 15 5 1 4 10 11 8 7 2 3",
    "15 17 18 16 19 20 12 9 7 14 13 8 10 11 4 1 3 2 6 5",
    "16 18 17 15 20 19 9 12 8 13 14 7 11 10 1 4 2 3 5 6",
    "17 16 15 18 11 10 14 13 19 6 5 20 8 7 3 2 1 4 9 12",
    "18 15 16 17 10 11 13 14 20 5 6 19 7 8 2 3 4 1 12 9",
    "19 14 13 20 16 15 11 10 17 8 7 18 3 2 6 5 9 12 1 4",
    "20 13 14 19 15 16 10 11 18 7 8 17 2 3 5 6 12 9 4 1",
)

# sha256 of the serialized table, guards against edits to the literal above
TABLE1_SHA256 = "f189b564f3da89fb504d7239a4d4e8916543dd2d04ba84562d491de363d3fa4c"


def table1_raw() -> list[list[int]]:
    return [[int(v) for v in row.split()] for row in _TABLE1_ROWS]


@lru_cache(maxsize=None)
def table1_loop() -> Loop:
    q = validate_table(table1_raw(), name="table1")
    digest = hashlib.sha256(dumps(q).encode()).hexdigest()
    if digest != TABLE1_SHA256:
        raise LoopError(f"embedded table checksum mismatch: {digest}")
    return q


# --- groups ------------------------------------------------------------------

def cyclic_group(n: int) -> Loop:
    if n < 1:
        raise ValueError("order must be positive")
    i = np.arange(n)
    return Loop((i[:, None] + i[None, :]) % n, name=f"Z{n}")


def klein_four() -> Loop:
    i = np.arange(4)
    return Loop(i[:, None] ^ i[None, :], name="V4")


def symmetric_group(n: int) -> Loop:
    """S_n on one-line permutations in lexicographic order (identity first).

    The product ``p*q`` applies ``p`` first, then ``q``.
    """
    if not 1 <= n <= 4:
        raise ValueError("symmetric_group supports 1 <= n <= 4")
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    table = [[index[tuple(q[p[i]] for i in range(n))] for q in perms] for p in perms]
    return Loop.from_table(table, name=f"S{n}")


# --- Steiner triple systems --------------------------------------------------

class InvalidTripleSystem(ValueError):
    def __init__(self, msg: str, pair: tuple[int, int] | None = None):
        super().__init__(msg)
        self.pair = pair


@dataclass(frozen=True)
class TripleSystem:
    """Points are ``0 .. point_count-1``."""

    point_count: int
    triples: tuple[frozenset[int], ...]

    def __post_init__(self):
        v = self.point_count
        seen: dict[tuple[int, int], frozenset[int]] = {}
        for t in self.triples:
            if len(t) != 3 or not all(0 <= p < v for p in t):
                raise InvalidTripleSystem(f"bad triple {sorted(t)}")
            for a, b in itertools.combinations(sorted(t), 2):
                if (a, b) in seen:
                    raise InvalidTripleSystem(f"pair {(a + 1, b + 1)} lies in two triples",
                                              (a, b))
                seen[a, b] = t
        for a, b in itertools.combinations(range(v), 2):
            if (a, b) not in seen:
                raise InvalidTripleSystem(f"pair {(a + 1, b + 1)} lies in no triple", (a, b))

    @classmethod
    def from_triples(cls, v: int, triples) -> "TripleSystem":
        return cls(v, tuple(frozenset(t) for t in triples))


def affine_plane_sts(q: int = 3) -> TripleSystem:
    """Lines of AG(2, q) for q = 3: the unique STS(9)."""
    if q != 3:
        raise ValueError("lines have three points only for q = 3")
    pts = [(a, b) for a in range(q) for b in range(q)]
    index = {p: i for i, p in enumerate(pts)}
    lines = set()
    for p, d in itertools.product(pts, [(0, 1), (1, 0), (1, 1), (1, 2)]):
        line = frozenset(index[((p[0] + k * d[0]) % q, (p[1] + k * d[1]) % q)]
                         for k in range(q))
        lines.add(line)
    return TripleSystem(len(pts), tuple(sorted(lines, key=sorted)))


def fano_sts() -> TripleSystem:
    lines = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
    return TripleSystem.from_triples(7, lines)


def steiner_loop(ts: TripleSystem, name: str | None = None) -> Loop:
    """Adjoin an identity ``e`` (index 0); point ``p`` becomes ``p + 1``."""
    n = ts.point_count + 1
    table = np.zeros((n, n), dtype=np.int64)
    table[0] = np.arange(n)
    table[:, 0] = np.arange(n)
    for t in ts.triples:
        for a, b, c in itertools.permutations(t):
            table[a + 1, b + 1] = c + 1
    # diagonal stays 0: x*x = e
    return Loop(table, name=name or f"Steiner{n}")


def parse_triple_system(text: str) -> TripleSystem:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise InvalidTripleSystem("empty triple system")
    v = int(lines[0])
    triples = []
    for ln in lines[1:]:
        pts = [int(tok) - 1 for tok in ln.split()]
        if len(pts) != 3:
            raise InvalidTripleSystem(f"expected three points in {ln!r}")
        triples.append(pts)
    return TripleSystem.from_triples(v, triples)


def read_triple_system(path: str | Path) -> TripleSystem:
    return parse_triple_system(Path(path).read_text())


# --- corpus ------------------------------------------------------------------

@lru_cache(maxsize=None)
def corpus() -> tuple[Loop, ...]:
    """Deterministic list of small loops used by the theorem suites."""
    from .doubling import (DoublingSpec, chein_double, dbj_double, star_identity,
                           star_inversion, twice_comparison)

    s3 = symmetric_group(3)
    st10 = steiner_loop(affine_plane_sts(), name="Steiner10")
    inv3 = star_inversion(s3)
    ch = chein_double(DoublingSpec(s3, 0, inv3, "chein"))
    db = dbj_double(DoublingSpec(s3, 0, inv3, "dbj"))
    ch_st = chein_double(DoublingSpec(st10, 0, star_identity(st10), "chein"))
    db_st = dbj_double(DoublingSpec(st10, 0, star_identity(st10), "dbj"))
    chch = twice_comparison(s3, 0, inv3).q2
    tw_s3 = twice_comparison(s3, 0, inv3).q1
    z4 = cyclic_group(4)
    tw_z4 = twice_comparison(z4, 2, star_inversion(z4))

    return (
        cyclic_group(1),
        cyclic_group(2),
        cyclic_group(3),
        z4,
        klein_four(),
        cyclic_group(6),
        s3,
        symmetric_group(4),
        steiner_loop(TripleSystem.from_triples(3, [(0, 1, 2)]), name="Steiner4"),
        st10,
        table1_loop(),
        ch,
        db,
        ch_st,
        db_st,
        chch,
        tw_s3,
        tw_z4.q1,
        tw_z4.q2,
    )


TABLE1_INDEX = 10


def corpus_names() -> list[str]:
    return [q.name or f"loop{i}" for i, q in enumerate(corpus())]


def product_with_z2(q: Loop) -> Loop:
    return direct_product(q, cyclic_group(2))
