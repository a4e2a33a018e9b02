"""Doubling constructions on ``Q u Qt`` and isomorphism checks between them.

Index scheme: for a base loop of order ``n`` the element ``g`` keeps index
``g`` and ``gt`` gets index ``n + g``.  Doubling twice (first with ``s``, then
with ``t``) therefore places ``g, gs, gt, (gs)t`` at ``g, n+g, 2n+g, 3n+g``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

import numpy as np

from .cayley import Loop, NoTwoSidedInverse
from .idents import center, is_semiautomorphic_ip, _semiauto_mask

Kind = Literal["chein", "dbj", "generalized"]
KINDS: tuple[str, ...] = ("chein", "dbj", "generalized")


class InvalidSpec(ValueError):
    def __init__(self, report: "Report"):
        super().__init__(str(report))
        self.report = report


class PreconditionFailed(ValueError):
    pass


class OrderMismatch(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Report:
    """Outcome of a validation; ``witness`` holds 0-based elements."""

    ok: bool
    clause: str | None = None
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        if self.witness is None:
            return f"invalid: {self.clause}"
        w = ", ".join(str(x + 1) for x in self.witness)
        return f"invalid: {self.clause} (witness {w})"


PASS = Report(True)


@dataclass(frozen=True, eq=False)
class StarMap:
    """A bijection ``x -> x*`` on the elements of ``base`` fixing 1."""

    base: Loop
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.base.order:
            raise ValueError("star map length differs from the loop order")
        if sorted(self.images) != list(range(self.base.order)):
            raise ValueError("star map is not a bijection")
        if self.images[0] != 0:
            raise ValueError("star map must fix the identity")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StarMap) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.images, dtype=np.int64)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def to_line(self) -> str:
        return " ".join(str(v + 1) for v in self.images) + "\n"

    @classmethod
    def from_line(cls, base: Loop, text: str) -> "StarMap":
        vals = [int(tok) - 1 for tok in text.split()]
        return cls(base, tuple(vals))


def star_inversion(q: Loop) -> StarMap:
    return StarMap(q, tuple(q.inverses().tolist()))


def star_identity(q: Loop) -> StarMap:
    return StarMap(q, tuple(range(q.order)))


@dataclass(frozen=True)
class DoublingSpec:
    base: Loop
    g0: int
    star: StarMap
    kind: str = "chein"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown construction {self.kind!r}")
        if not 0 <= self.g0 < self.base.order:
            raise IndexError("g0 out of range")
        if self.star.base.order != self.base.order:
            raise ValueError("star map belongs to a loop of another order")


@dataclass(frozen=True)
class Bijection:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images do not form a bijection")

    @property
    def order(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]


# --- validation --------------------------------------------------------------

def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    bad = np.argwhere(~mask)
    return None if bad.size == 0 else tuple(int(v) for v in bad[0])


def validate_star_antiauto(q: Loop, star: StarMap, g0: int) -> Report:
    """Involutory antiautomorphism with g0 central, g0* = g0, gg* central."""
    T = q.table
    s = star.array
    n = q.order
    w = _first(s[s] == np.arange(n))
    if w is not None:
        return Report(False, "(g*)* = g", w)
    g, h = np.arange(n)[:, None], np.arange(n)[None, :]
    w = _first(s[T[g, h]] == T[s[h], s[g]])
    if w is not None:
        return Report(False, "(gh)* = h*g*", w)
    z = set(center(q))
    if g0 not in z:
        return Report(False, "g0 in Z(Q)", (g0,))
    if s[g0] != g0:
        return Report(False, "g0* = g0", (g0,))
    for x in range(n):
        if int(T[x, s[x]]) not in z:
            return Report(False, "gg* in Z(Q)", (x,))
    return PASS


def validate_star_semi(q: Loop, star: StarMap, g0: int, check_base: bool = True) -> Report:
    """Hypotheses for the generalized doubling: star a semiautomorphism with
    (g*)* = g, (g g0)* = g* g0 and
    g*h . (k . g*h)* = ((g . h*k)* g) . h*  for all g, h, k."""
    if check_base and not is_semiautomorphic_ip(q):
        return Report(False, "Q semiautomorphic IP")
    T = q.table
    s = star.array
    n = q.order
    if g0 not in set(center(q)):
        return Report(False, "g0 in Z(Q)", (g0,))
    if not _semiauto_mask(q, s[None, :])[0]:
        g, h = np.arange(n)[:, None], np.arange(n)[None, :]
        w = _first(s[T[g, T[h, g]]] == T[s[g], T[s[h], s[g]]])
        return Report(False, "* is a semiautomorphism", w)
    w = _first(s[s] == np.arange(n))
    if w is not None:
        return Report(False, "(g*)* = g", w)
    x = np.arange(n)
    w = _first(s[T[x, g0]] == T[s[x], g0])
    if w is not None:
        return Report(False, "(g g0)* = g* g0", w)
    g, h, k = np.arange(n)[:, None, None], np.arange(n)[None, :, None], np.arange(n)[None, None, :]
    sgh = T[s[g], h]
    lhs = T[sgh, s[T[k, sgh]]]
    rhs = T[T[s[T[g, T[s[h], k]]], g], s[h]]
    w = _first(lhs == rhs)
    if w is not None:
        return Report(False, "g*h.(k.g*h)* = (g.h*k)*g.h*", w)
    return PASS


def validate(spec: DoublingSpec) -> Report:
    if spec.kind == "generalized":
        return validate_star_semi(spec.base, spec.star, spec.g0)
    return validate_star_antiauto(spec.base, spec.star, spec.g0)


# --- constructions -----------------------------------------------------------

def _assemble(n: int, qq: np.ndarray, q_qt: np.ndarray, qt_q: np.ndarray,
              qt_qt: np.ndarray, name: str) -> Loop:
    """Blocks hold base-loop indices; the two mixed blocks land in Qt."""
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    table[:n, :n] = qq
    table[:n, n:] = q_qt + n
    table[n:, :n] = qt_q + n
    table[n:, n:] = qt_qt
    return Loop(table, name=name)


def _blocks(spec: DoublingSpec):
    q = spec.base
    T = q.table
    s = spec.star.array
    g = np.arange(q.order)[:, None]
    h = np.arange(q.order)[None, :]
    return q, T, s, g, h, spec.g0


def _name(kind: str, spec: DoublingSpec) -> str:
    return f"{kind}({spec.base.name or 'Q'},g0={spec.g0 + 1})"


def _require(spec: DoublingSpec, kinds: tuple[str, ...]) -> None:
    if spec.kind not in kinds:
        raise ValueError(f"spec kind {spec.kind!r} does not match this construction")
    report = validate(spec)
    if not report:
        raise InvalidSpec(report)


def chein_double(spec: DoublingSpec) -> Loop:
    """g.h = gh,  g.(ht) = (hg)t,  gt.h = (gh*)t,  gt.ht = g0 (h*g)."""
    _require(spec, ("chein",))
    q, T, s, g, h, g0 = _blocks(spec)
    return _assemble(q.order, T, T[h, g], T[g, s[h]], T[g0, T[s[h], g]],
                     _name("chein", spec))


def dbj_double(spec: DoublingSpec) -> Loop:
    """g.h = gh,  g.(ht) = (gh)t,  gt.h = (h*g)t,  gt.ht = g0 (gh*)."""
    _require(spec, ("dbj",))
    q, T, s, g, h, g0 = _blocks(spec)
    return _assemble(q.order, T, T[g, h], T[s[h], g], T[g0, T[g, s[h]]],
                     _name("dbj", spec))


def generalized_double(spec: DoublingSpec) -> Loop:
    """g.h = gh,  g.(ht) = (g*h*)*t,  gt.h = (gh*)t,  gt.ht = g0 (g*h)*."""
    _require(spec, ("generalized",))
    q, T, s, g, h, g0 = _blocks(spec)
    return _assemble(q.order, T, s[T[s[g], s[h]]], T[g, s[h]], T[g0, s[T[s[g], h]]],
                     _name("gen", spec))


CONSTRUCTIONS = {"chein": chein_double, "dbj": dbj_double, "generalized": generalized_double}


def double(spec: DoublingSpec) -> Loop:
    return CONSTRUCTIONS[spec.kind](spec)


# --- stars on the double -----------------------------------------------------

def is_antiautomorphism(q: Loop, images: Sequence[int]) -> Report:
    s = np.asarray(images, dtype=np.int64)
    T = q.table
    g, h = np.arange(q.order)[:, None], np.arange(q.order)[None, :]
    w = _first(s[T[g, h]] == T[s[h], s[g]])
    return PASS if w is None else Report(False, "(xy)* = y*x*", w)


def _check_extension(images: list[int], double: Loop) -> StarMap:
    if double.order != len(images):
        raise PreconditionFailed("double has the wrong order")
    report = is_antiautomorphism(double, images)
    if not report:
        raise PreconditionFailed(f"extended star is not an antiautomorphism: {report}")
    return StarMap(double, tuple(images))


def extend_star_p2(q: Loop, star: StarMap, double: Loop) -> StarMap:
    """g* unchanged, (gt)* = gt; checked to be an antiautomorphism of ``double``."""
    report = is_antiautomorphism(q, star.images)
    if not report:
        raise PreconditionFailed(f"star is not an antiautomorphism of Q: {report}")
    n = q.order
    images = list(star.images) + [n + g for g in range(n)]
    return _check_extension(images, double)


def extend_star_p3(q: Loop, star: StarMap, c: int, double: Loop) -> StarMap:
    """g* unchanged, (gt)* = c.gt = (gc)t for central c with c^2 = 1, c* = c."""
    report = is_antiautomorphism(q, star.images)
    if not report:
        raise PreconditionFailed(f"star is not an antiautomorphism of Q: {report}")
    if c not in center(q):
        raise PreconditionFailed("c must be central")
    if q.mul(c, c) != 0:
        raise PreconditionFailed("c^2 must be 1")
    if star(c) != c:
        raise PreconditionFailed("c* must equal c")
    n = q.order
    images = list(star.images) + [n + q.mul(g, c) for g in range(n)]
    return _check_extension(images, double)


# --- isomorphisms ------------------------------------------------------------

def verify_isomorphism(q1: Loop, q2: Loop, phi: Bijection) -> Report:
    if not (q1.order == q2.order == phi.order):
        raise OrderMismatch("orders differ")
    f = np.asarray(phi.images, dtype=np.int64)
    if f[0] != 0:
        return Report(False, "phi(1) = 1", (0,))
    w = _first(f[q1.table] == q2.table[f[:, None], f[None, :]])
    return PASS if w is None else Report(False, "(xy)phi = (x phi)(y phi)", w)


@dataclass(frozen=True)
class TwiceResult:
    q1: Loop
    q2: Loop
    phi: Bijection
    report: Report

    @property
    def verified(self) -> bool:
        return self.report.ok


def _check_twice_base(q: Loop, g0: int, star: StarMap, check_base: bool) -> None:
    if check_base and not is_semiautomorphic_ip(q):
        raise PreconditionFailed("Q must be semiautomorphic IP")
    if q.mul(g0, g0) != 0:
        raise PreconditionFailed("g0^2 must be 1")
    report = validate_star_antiauto(q, star, g0)
    if not report:
        raise PreconditionFailed(str(report))


def dbj_into_chein_twice(q: Loop, star: StarMap, check_base: bool = True) -> TwiceResult:
    """With g0 = 1: dbj(Q) against the subloop Q u (Qs)t of chein(chein(Q)),
    via g -> g, gs -> (g*s)t."""
    _check_twice_base(q, 0, star, check_base)
    n = q.order
    q1 = dbj_double(DoublingSpec(q, 0, star, "dbj"))
    inner = chein_double(DoublingSpec(q, 0, star, "chein"))
    ext = extend_star_p2(q, star, inner)
    full = chein_double(DoublingSpec(inner, 0, StarMap(inner, ext.images), "chein"))
    sub = full.restrict(list(range(n)) + [3 * n + g for g in range(n)],
                        name=f"{full.name}|Q+(Qs)t")
    phi = Bijection(tuple(range(n)) + tuple(n + star(g) for g in range(n)))
    return TwiceResult(q1, sub, phi, verify_isomorphism(q1, sub, phi))


def twice_comparison(q: Loop, g0: int, star: StarMap, check_base: bool = True) -> TwiceResult:
    """chein(dbj(Q)) against chein(chein(Q)), stars extended with c = g0.

    phi: g -> g, gs -> (g*s)t, gt -> g0.gt, (gs)t -> g*s.
    """
    _check_twice_base(q, g0, star, check_base)
    n = q.order
    loops = []
    for kind in ("dbj", "chein"):
        inner = double(DoublingSpec(q, g0, star, kind))
        ext = extend_star_p3(q, star, g0, inner)
        outer = chein_double(DoublingSpec(inner, g0, ext, "chein"))
        loops.append(Loop(outer.table, name=f"chein({inner.name},g0={g0 + 1})"))
    q1, q2 = loops
    images = list(range(n))
    images += [3 * n + star(g) for g in range(n)]
    images += [q2.mul(g0, 2 * n + g) for g in range(n)]
    images += [n + star(g) for g in range(n)]
    phi = Bijection(tuple(images))
    return TwiceResult(q1, q2, phi, verify_isomorphism(q1, q2, phi))


# --- isomorphism search ------------------------------------------------------

def _invariants(q: Loop) -> list[tuple]:
    orders = [q.element_order(x) or 0 for x in q.elements]
    T = q.table
    comm = (T == T.T).all(axis=1)
    sq = T[np.arange(q.order), np.arange(q.order)]
    out = []
    for x in q.elements:
        row_profile = tuple(sorted(Counter(orders[int(v)] for v in T[x]).items()))
        out.append((orders[x], orders[int(sq[x])], bool(comm[x]), row_profile))
    return out


def _extend(q1: Loop, q2: Loop, mapping: dict[int, int], used: set[int]) -> bool:
    """Close a partial map under products and divisions; False on conflict."""
    tables = [(q1.table, q2.table), (q1.ldiv_table, q2.ldiv_table),
              (q1.rdiv_table, q2.rdiv_table)]
    pending = list(mapping)
    while pending:
        a = pending.pop()
        for b in list(mapping):
            for t1, t2 in tables:
                for x, y in ((a, b), (b, a)):
                    src = int(t1[x, y])
                    dst = int(t2[mapping[x], mapping[y]])
                    known = mapping.get(src)
                    if known is None:
                        if dst in used:
                            return False
                        mapping[src] = dst
                        used.add(dst)
                        pending.append(src)
                    elif known != dst:
                        return False
    return True


def find_isomorphism(q1: Loop, q2: Loop, node_limit: int = 1_000_000) -> Bijection | None:
    """Backtracking search over images of a generating set.

    Candidates are pruned by per-element invariants (left-nested order, order
    of the square, commutant membership, order profile of the row).  Returns
    ``None`` when the loops are not isomorphic.
    """
    if q1.order != q2.order:
        return None
    inv1, inv2 = _invariants(q1), _invariants(q2)
    if Counter(inv1) != Counter(inv2):
        return None
    by_inv: dict[tuple, list[int]] = {}
    for y, key in enumerate(inv2):
        by_inv.setdefault(key, []).append(y)
    rarity = Counter(inv1)
    nodes = 0

    def search(mapping: dict[int, int], used: set[int]) -> dict[int, int] | None:
        nonlocal nodes
        if len(mapping) == q1.order:
            return mapping
        free = [x for x in q1.elements if x not in mapping]
        x = min(free, key=lambda e: (rarity[inv1[e]], e))
        for y in by_inv[inv1[x]]:
            if y in used:
                continue
            nodes += 1
            if nodes > node_limit:
                raise SearchBudgetExceeded(f"more than {node_limit} search nodes")
            m, u = dict(mapping), set(used)
            m[x] = y
            u.add(y)
            if _extend(q1, q2, m, u):
                found = search(m, u)
                if found is not None:
                    return found
        return None

    result = search({0: 0}, {0})
    if result is None:
        return None
    phi = Bijection(tuple(result[x] for x in q1.elements))
    if not verify_isomorphism(q1, q2, phi):
        raise AssertionError("search produced a non-isomorphism")
    return phi


# --- star enumeration --------------------------------------------------------

def antiautomorphic_stars(q: Loop, g0: int, limit: int | None = None) -> Iterator[StarMap]:
    """All stars passing :func:`validate_star_antiauto` for ``g0``.

    Since gg* must be central, g* ranges over g \\ z for z in Z(Q); the
    search assigns images element by element and prunes on the
    antiautomorphism law among assigned elements.
    """
    z = center(q)
    if g0 not in z:
        return
    n = q.order
    T = q.table
    cands = [sorted({q.ldiv(g, c) for c in z}) for g in range(n)]
    s = [-1] * n
    s[0] = 0
    taken = {0}
    count = 0

    def consistent(g: int) -> bool:
        for h in range(n):
            if s[h] < 0:
                continue
            for a, b in ((g, h), (h, g)):
                p = int(T[a, b])
                if s[p] >= 0 and s[p] != int(T[s[b], s[a]]):
                    return False
        return True

    def rec(g: int) -> Iterator[list[int]]:
        if g == n:
            yield list(s)
            return
        if s[g] >= 0:
            yield from rec(g + 1)
            return
        for c in cands[g]:
            if c in taken:
                continue
            s[g] = c
            s[c] = g
            taken.update((c, g))
            if consistent(g) and consistent(c):
                yield from rec(g + 1)
            s[g] = -1
            if c != g:
                s[c] = -1
            taken.difference_update((c, g))

    for images in rec(1):
        star = StarMap(q, tuple(images))
        if validate_star_antiauto(q, star, g0):
            yield star
            count += 1
            if limit is not None and count >= limit:
                return
