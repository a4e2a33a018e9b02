"""Finite loops stored as dense Cayley tables.

Elements are the integers ``0 .. n-1`` and element ``0`` is always the
identity.  On disk (the ``.loop`` format) elements are 1-based, so the
identity is written as ``1``, which is how hand-written tables are usually
laid out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class LoopError(ValueError):
    """Base class for malformed loop data."""


class NotSquare(LoopError):
    pass


class EntryOutOfRange(LoopError):
    pass


class LatinRowViolation(LoopError):
    def __init__(self, row: int):
        super().__init__(f"row {row + 1} is not a permutation")
        self.row = row


class LatinColViolation(LoopError):
    def __init__(self, col: int):
        super().__init__(f"column {col + 1} is not a permutation")
        self.col = col


class NoIdentity(LoopError):
    pass


class NoTwoSidedInverse(LoopError):
    def __init__(self, x: int, left: int, right: int):
        super().__init__(
            f"element {x} has left inverse {left} but right inverse {right}"
        )
        self.x, self.left, self.right = x, left, right


class Loop:
    """An immutable loop of order ``n`` with identity ``0``.

    Construct through :func:`validate_table` or :meth:`from_table`; both
    check the Latin square and identity conditions.
    """

    __slots__ = ("table", "order", "name", "_ldiv", "_rdiv")

    def __init__(self, table: np.ndarray, name: str | None = None):
        table = np.array(table, dtype=np.int64, copy=True)
        _check_zero_based(table)
        table.setflags(write=False)
        n = table.shape[0]
        # ldiv[x, b] = x \ b, rdiv[b, x] = b / x
        ldiv = np.empty_like(table)
        ldiv[np.arange(n)[:, None], table] = np.arange(n)[None, :]
        rdiv = np.empty_like(table)
        rdiv[table, np.arange(n)[None, :]] = np.arange(n)[:, None]
        ldiv.setflags(write=False)
        rdiv.setflags(write=False)
        self.table = table
        self.order = n
        self.name = name
        self._ldiv = ldiv
        self._rdiv = rdiv

    @classmethod
    def from_table(cls, rows: Sequence[Sequence[int]], name: str | None = None) -> "Loop":
        """Build from a 0-based grid."""
        return cls(np.asarray(rows, dtype=np.int64), name=name)

    def __len__(self) -> int:
        return self.order

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Loop) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Loop{label} order={self.order}>"

    @property
    def elements(self) -> range:
        return range(self.order)

    @property
    def ldiv_table(self) -> np.ndarray:
        return self._ldiv

    @property
    def rdiv_table(self) -> np.ndarray:
        return self._rdiv

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.order:
                raise IndexError(f"element {x} out of range for order {self.order}")

    def mul(self, x: int, y: int) -> int:
        self._check(x, y)
        return int(self.table[x, y])

    def ldiv(self, x: int, b: int) -> int:
        """The unique ``y`` with ``x*y == b``."""
        self._check(x, b)
        return int(self._ldiv[x, b])

    def rdiv(self, b: int, x: int) -> int:
        """The unique ``y`` with ``y*x == b``."""
        self._check(b, x)
        return int(self._rdiv[b, x])

    def left_inverse(self, x: int) -> int:
        return self.rdiv(0, x)

    def right_inverse(self, x: int) -> int:
        return self.ldiv(x, 0)

    def two_sided_inverse(self, x: int) -> int:
        left, right = self.left_inverse(x), self.right_inverse(x)
        if left != right:
            raise NoTwoSidedInverse(x, left, right)
        return left

    def inverses(self) -> np.ndarray:
        """Array of two-sided inverses; raises if some element lacks one."""
        left = self._rdiv[0]
        right = self._ldiv[:, 0]
        bad = np.flatnonzero(left != right)
        if bad.size:
            x = int(bad[0])
            raise NoTwoSidedInverse(x, int(left[x]), int(right[x]))
        return left.copy()

    def power(self, a: int, k: int) -> int:
        """Left-nested power ``a*(a*(...*a))``; negative ``k`` uses the
        two-sided inverse of ``a``."""
        self._check(a)
        if k < 0:
            a, k = self.two_sided_inverse(a), -k
        result = 0
        for _ in range(k):
            result = int(self.table[a, result])
        return result

    def element_order(self, a: int) -> int | None:
        """Smallest ``k >= 1`` with left-nested ``a^k == 1``, or ``None``."""
        x = a
        for k in range(1, self.order + 1):
            if x == 0:
                return k
            x = int(self.table[a, x])
        return None

    def subloop_generated(self, gens: Iterable[int]) -> list[int]:
        """Smallest subset containing ``gens`` and the identity closed under
        multiplication and both divisions."""
        current = {0}
        for g in gens:
            self._check(g)
            current.add(int(g))
        while True:
            idx = np.fromiter(current, dtype=np.int64)
            grid = np.ix_(idx, idx)
            new = set(np.unique(np.concatenate([
                self.table[grid].ravel(),
                self._ldiv[grid].ravel(),
                self._rdiv[grid].ravel(),
            ])).tolist())
            if new <= current:
                return sorted(current)
            current |= new

    def restrict(self, elements: Sequence[int], name: str | None = None) -> "Loop":
        """Subloop on ``elements`` (which must contain 0 and be closed),
        reindexed in the given order; ``elements[0]`` must be 0."""
        elements = list(elements)
        if not elements or elements[0] != 0:
            raise LoopError("restriction must list the identity first")
        pos = {e: i for i, e in enumerate(elements)}
        rows = []
        for x in elements:
            row = []
            for y in elements:
                p = int(self.table[x, y])
                if p not in pos:
                    raise LoopError(f"subset not closed: {x}*{y}={p}")
                row.append(pos[p])
            rows.append(row)
        return Loop.from_table(rows, name=name)

    def relabel(self, images: Sequence[int], name: str | None = None) -> "Loop":
        """Isomorphic copy where element ``x`` becomes ``images[x]``."""
        f = np.asarray(images, dtype=np.int64)
        if f[0] != 0 or sorted(f.tolist()) != list(range(self.order)):
            raise LoopError("relabelling must be a bijection fixing 0")
        new = np.empty_like(self.table)
        new[np.ix_(f, f)] = f[self.table]
        return Loop(new, name=name or self.name)


def _check_zero_based(table: np.ndarray) -> None:
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise NotSquare(f"table shape {table.shape} is not a non-empty square")
    n = table.shape[0]
    if table.min() < 0 or table.max() >= n:
        raise EntryOutOfRange(f"entries must lie in 1..{n}")
    full = np.arange(n)
    # columns first: a repeated entry is reported against its column
    srt = np.sort(table, axis=0)
    bad = np.flatnonzero((srt != full[:, None]).any(axis=0))
    if bad.size:
        raise LatinColViolation(int(bad[0]))
    srt = np.sort(table, axis=1)
    bad = np.flatnonzero((srt != full).any(axis=1))
    if bad.size:
        raise LatinRowViolation(int(bad[0]))
    if not (np.array_equal(table[0], full) and np.array_equal(table[:, 0], full)):
        raise NoIdentity("element 1 is not a two-sided identity")


def validate_table(raw: Sequence[Sequence[int]], identity_first: bool = True,
                   name: str | None = None) -> Loop:
    """Validate a 1-based grid and return the corresponding :class:`Loop`.

    With ``identity_first=False`` the grid may use any element as identity;
    it is then relabelled by swapping that element with ``1``.
    """
    rows = [list(r) for r in raw]
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotSquare("grid is not square")
    try:
        arr = np.array(rows, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise EntryOutOfRange(str(exc)) from None
    if arr.min() < 1 or arr.max() > n:
        raise EntryOutOfRange(f"entries must lie in 1..{n}")
    arr -= 1
    if not identity_first:
        e = _find_identity(arr)
        if e is None:
            _check_zero_based(arr)  # raises the precise Latin violation first
            raise NoIdentity("no two-sided identity")
        if e != 0:
            perm = np.arange(n)
            perm[[0, e]] = perm[[e, 0]]
            new = np.empty_like(arr)
            new[np.ix_(perm, perm)] = perm[arr]
            arr = new
    return Loop(arr, name=name)


def _find_identity(arr: np.ndarray) -> int | None:
    full = np.arange(arr.shape[0])
    for e in range(arr.shape[0]):
        if np.array_equal(arr[e], full) and np.array_equal(arr[:, e], full):
            return e
    return None


def direct_product(q1: Loop, q2: Loop, name: str | None = None) -> Loop:
    """Componentwise product; the pair ``(a, b)`` has index ``a*n2 + b``."""
    n2 = q2.order
    a = np.arange(q1.order).repeat(n2)
    b = np.tile(np.arange(n2), q1.order)
    table = q1.table[a[:, None], a[None, :]] * n2 + q2.table[b[:, None], b[None, :]]
    if name is None and q1.name and q2.name:
        name = f"{q1.name}x{q2.name}"
    return Loop(table, name=name)


# --- .loop text format -------------------------------------------------------

def dumps(q: Loop) -> str:
    lines = []
    if q.name:
        lines.append(f"# name: {q.name}")
    lines.append(str(q.order))
    lines.extend(" ".join(str(v + 1) for v in row) for row in q.table.tolist())
    return "\n".join(lines) + "\n"


def loads(text: str, name: str | None = None) -> Loop:
    rows: list[list[int]] = []
    n = None
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if body.startswith("name:") and name is None:
                name = body[5:].strip() or None
            continue
        try:
            values = [int(tok) for tok in s.split()]
        except ValueError:
            raise LoopError(f"non-integer token in line {line!r}") from None
        if n is None:
            if len(values) != 1 or values[0] < 1:
                raise LoopError("first line must hold the order n")
            n = values[0]
        else:
            rows.append(values)
    if n is None:
        raise LoopError("empty loop file")
    if len(rows) != n:
        raise NotSquare(f"expected {n} rows, found {len(rows)}")
    return validate_table(rows, name=name)


def read_loop(path: str | Path) -> Loop:
    path = Path(path)
    return loads(path.read_text(), name=None)


def write_loop(q: Loop, path: str | Path) -> None:
    Path(path).write_text(dumps(q))


@dataclass(frozen=True)
class SubsetReport:
    """Characteristic subsets of a loop, each a sorted list of elements."""

    commutant: list[int]
    left_nucleus: list[int]
    middle_nucleus: list[int]
    right_nucleus: list[int]
    nucleus: list[int]
    center: list[int]
    moufang_elements: list[int]
    c_elements: list[int]
    fields_order: tuple[str, ...] = field(
        default=("commutant", "left_nucleus", "middle_nucleus", "right_nucleus",
                 "nucleus", "center", "moufang_elements", "c_elements"),
        repr=False, compare=False,
    )

    def as_lines(self) -> list[str]:
        """``key=1 2 3`` lines with 1-based element labels."""
        return [
            f"{key}=" + " ".join(str(x + 1) for x in getattr(self, key))
            for key in self.fields_order
        ]
