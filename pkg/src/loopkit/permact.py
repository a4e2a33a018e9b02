"""Permutations of loop elements, translations, Mlt(Q) and Inn(Q).

All maps act on the right: ``apply(compose(s, t), x) == apply(t, apply(s, x))``,
i.e. ``x(st) = (xs)t``.  Chains of translations therefore read left to right,
so ``L_x P_y R_x`` means "first L_x, then P_y, then R_x".

Batched helpers work on image arrays whose last axis is the point being
moved; ``chain(A, B)[..., z] == B[..., A[..., z]]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .cayley import Loop

DEFAULT_SIZE_LIMIT = 2_000_000


class DegreeMismatch(ValueError):
    pass


class SizeLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"group closure exceeded {limit} elements")
        self.limit = limit


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_array(cls, arr) -> "Permutation":
        return cls(tuple(int(v) for v in arr))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return invert(self)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        """1-based cycle notation, ``()`` for the identity."""
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + 1) for x in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation{self.cycle_string()}"


def _same_degree(*perms: Permutation) -> None:
    degrees = {p.degree for p in perms}
    if len(degrees) > 1:
        raise DegreeMismatch(f"degrees differ: {sorted(degrees)}")


def compose(s: Permutation, t: Permutation) -> Permutation:
    """First ``s`` then ``t``."""
    _same_degree(s, t)
    ti = t.images
    return Permutation(tuple(ti[x] for x in s.images))


def invert(s: Permutation) -> Permutation:
    out = [0] * s.degree
    for x, y in enumerate(s.images):
        out[y] = x
    return Permutation(tuple(out))


def apply(s: Permutation, x: int) -> int:
    return s.images[x]


# --- translations ------------------------------------------------------------

def left_translation(q: Loop, x: int) -> Permutation:
    q._check(x)
    return Permutation.from_array(q.table[x])


def right_translation(q: Loop, x: int) -> Permutation:
    q._check(x)
    return Permutation.from_array(q.table[:, x])


def p_translation(q: Loop, x: int) -> Permutation:
    """``L_x R_x``: y -> (x*y)*x."""
    return compose(left_translation(q, x), right_translation(q, x))


def chain(*arrays: np.ndarray) -> np.ndarray:
    """Batched right-action composition of image arrays (broadcasting)."""
    out = arrays[0]
    for nxt in arrays[1:]:
        a, b = np.broadcast_arrays(out, nxt)
        out = np.take_along_axis(b, a, axis=-1)
    return out


def inverse_arrays(arr: np.ndarray) -> np.ndarray:
    return np.argsort(arr, axis=-1)


@dataclass(frozen=True)
class Translations:
    """Stacked translation maps: ``L[x]`` is the image array of ``L_x``."""

    L: np.ndarray
    R: np.ndarray
    Linv: np.ndarray
    Rinv: np.ndarray
    P: np.ndarray


def translations(q: Loop) -> Translations:
    L = q.table
    R = np.ascontiguousarray(q.table.T)
    return Translations(L=L, R=R, Linv=q.ldiv_table, Rinv=np.ascontiguousarray(q.rdiv_table.T),
                        P=chain(L, R))


def labelled_inner_generators(q: Loop) -> tuple[list[str], np.ndarray]:
    """Labels (1-based) and image rows of every standard inner generator:
    all ``T_x``, then all ``L_{x,y}``, then all ``R_{x,y}``.

    T_x = R_x L_x^{-1},  L_{x,y} = L_x L_y L_{yx}^{-1},  R_{x,y} = R_x R_y R_{xy}^{-1}
    """
    tr = translations(q)
    n = q.order
    T = chain(tr.R, tr.Linv)
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    Lxy = chain(tr.L[X], tr.L[Y], tr.Linv[q.table[Y, X]]).reshape(-1, n)
    Rxy = chain(tr.R[X], tr.R[Y], tr.Rinv[q.table[X, Y]]).reshape(-1, n)
    pairs = [(x + 1, y + 1) for x in range(n) for y in range(n)]
    labels = ([f"T[{x + 1}]" for x in range(n)]
              + [f"L[{x},{y}]" for x, y in pairs]
              + [f"R[{x},{y}]" for x, y in pairs])
    return labels, np.concatenate([T, Lxy, Rxy])


def inner_generators(q: Loop) -> list[tuple[str, Permutation]]:
    labels, arr = labelled_inner_generators(q)
    return [(lbl, Permutation.from_array(row)) for lbl, row in zip(labels, arr)]


def inner_generator_array(q: Loop) -> np.ndarray:
    """Distinct standard inner generators as rows of an int array."""
    return np.unique(labelled_inner_generators(q)[1], axis=0)


# --- closure -----------------------------------------------------------------

@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Permutation, ...]
    array: np.ndarray  # one element per row, identity first

    def __len__(self) -> int:
        return self.array.shape[0]

    @property
    def order(self) -> int:
        return len(self)

    @property
    def elements(self) -> frozenset[Permutation]:
        return frozenset(Permutation.from_array(r) for r in self.array)

    def __iter__(self) -> Iterator[Permutation]:
        for r in self.array:
            yield Permutation.from_array(r)

    def __contains__(self, p: Permutation) -> bool:
        key = np.asarray(p.images, dtype=self.array.dtype)
        return bool((self.array == key).all(axis=1).any())

    def stabilizer(self, point: int) -> np.ndarray:
        return self.array[self.array[:, point] == point]

    def export_generators(self) -> str:
        return "".join(g.cycle_string() + "\n" for g in self.generators)


def _dtype_for(n: int):
    return np.uint8 if n <= 256 else np.uint16


class _HashCollision(RuntimeError):
    pass


class _Closure:
    """Incremental product closure.

    Membership uses a 64-bit linear hash of the image array kept in a sorted
    array.  :meth:`verify` re-derives every generator product and compares
    the image arrays themselves, so a hash collision is detected instead of
    silently dropping an element.
    """

    CHUNK_BYTES = 1 << 24

    def __init__(self, degree: int, limit: int, seed: int = 0x10F5):
        self.degree = degree
        self.limit = limit
        self.dtype = _dtype_for(degree)
        rng = np.random.default_rng(seed)
        self.weights = rng.integers(1, 2**63, size=degree, dtype=np.uint64) | np.uint64(1)
        ident = np.arange(degree, dtype=self.dtype)[None, :]
        self.chunks = [ident]
        self.count = 1
        self.seen = self._hash(ident)
        self.gens = np.empty((0, degree), dtype=self.dtype)

    def _hash(self, arr: np.ndarray) -> np.ndarray:
        return (arr.astype(np.uint64) * self.weights).sum(axis=-1, dtype=np.uint64)

    def _member(self, h: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(self.seen, h)
        pos[pos == self.seen.size] = 0
        return self.seen[pos] == h

    def contains(self, arr: np.ndarray) -> np.ndarray:
        return self._member(self._hash(arr))

    def _insert(self, cand: np.ndarray) -> np.ndarray:
        h, first = np.unique(self._hash(cand), return_index=True)
        fresh = ~self._member(h)
        if not fresh.any():
            return cand[:0]
        new = cand[np.sort(first[fresh])]
        self.seen = np.sort(np.concatenate([self.seen, h[fresh]]), kind="stable")
        self.count += new.shape[0]
        if self.count > self.limit:
            raise SizeLimitExceeded(self.limit)
        self.chunks.append(new)
        return new

    def _row_chunks(self, arr: np.ndarray, per_row: int) -> Iterator[np.ndarray]:
        step = max(1, self.CHUNK_BYTES // max(1, per_row * self.degree))
        for i in range(0, arr.shape[0], step):
            yield arr[i:i + step]

    def add_generator(self, g: np.ndarray) -> Iterator[np.ndarray]:
        g = np.asarray(g, dtype=self.dtype)
        self.gens = np.vstack([self.gens, g[None, :]])
        old = np.concatenate(self.chunks)
        frontier = []
        for chunk in self._row_chunks(old, 1):
            new = self._insert(g[chunk])  # x then g
            if new.shape[0]:
                frontier.append(new)
                yield new
        k = self.gens.shape[0]
        while frontier:
            todo, frontier = np.concatenate(frontier), []
            for chunk in self._row_chunks(todo, k):
                cand = self.gens[:, chunk].reshape(-1, self.degree)
                new = self._insert(cand)
                if new.shape[0]:
                    frontier.append(new)
                    yield new

    def elements(self) -> np.ndarray:
        return np.concatenate(self.chunks)

    def verify(self, gens: np.ndarray | None = None) -> None:
        """Each generator permutes a closed set, so sorting the products by
        hash must reproduce the stored rows exactly.  Generators skipped as
        already present must match their stored row exactly as well."""
        elems = self.elements()
        h = self._hash(elems)
        order = np.argsort(h)
        hs = h[order]
        if (hs[1:] == hs[:-1]).any():
            raise _HashCollision
        ordered = elems[order]
        if gens is not None and gens.shape[0]:
            hg = self._hash(gens)
            pos = np.minimum(np.searchsorted(hs, hg), hs.size - 1)
            if not (np.array_equal(hs[pos], hg) and np.array_equal(ordered[pos], gens)):
                raise _HashCollision
        for g in self.gens:
            prod = g[elems]
            hp = self._hash(prod)
            po = np.argsort(hp)
            if not (np.array_equal(hp[po], hs) and np.array_equal(prod[po], ordered)):
                raise _HashCollision


def _closure_batches(gens: np.ndarray, degree: int, limit: int,
                     seed: int) -> Iterator[np.ndarray]:
    state = _Closure(degree, limit, seed)
    yield state.chunks[0]
    pending = np.unique(np.asarray(gens).reshape(-1, degree).astype(state.dtype), axis=0)
    supplied = pending
    while pending.shape[0]:
        pending = pending[~state.contains(pending)]
        if not pending.shape[0]:
            break
        yield from state.add_generator(pending[0])
        pending = pending[1:]
    state.verify(supplied)


_SEEDS = (0x10F5, 0xBEEF, 0x5EED)


def iter_closure(gens: np.ndarray, degree: int,
                 limit: int = DEFAULT_SIZE_LIMIT) -> Iterator[np.ndarray]:
    """Yield the elements of the generated group in batches, identity first.

    Generators are added one at a time and only when not already generated,
    which keeps the working generating set small.  On a (detected) hash
    collision the enumeration restarts with fresh hash weights, so a consumer
    may see repeated elements in that case.
    """
    for seed in _SEEDS:
        try:
            yield from _closure_batches(gens, degree, limit, seed)
            return
        except _HashCollision:
            continue
    raise RuntimeError("repeated hash collisions during closure")


def closure_array(gens, degree: int, limit: int = DEFAULT_SIZE_LIMIT) -> np.ndarray:
    """All group elements as rows (identity first)."""
    for seed in _SEEDS:
        try:
            return np.concatenate(list(_closure_batches(gens, degree, limit, seed)))
        except _HashCollision:
            continue
    raise RuntimeError("repeated hash collisions during closure")


def closure(gens: Sequence[Permutation], degree: int | None = None,
            limit: int = DEFAULT_SIZE_LIMIT) -> PermGroup:
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = gens[0].degree
    if any(g.degree != degree for g in gens):
        raise DegreeMismatch("generators of differing degree")
    arr = np.array([g.images for g in gens], dtype=np.int64).reshape(-1, degree)
    return PermGroup(degree, tuple(gens), closure_array(arr, degree, limit))


def find_in_closure(gens: np.ndarray, degree: int,
                    predicate: Callable[[np.ndarray], np.ndarray],
                    limit: int = DEFAULT_SIZE_LIMIT) -> np.ndarray | None:
    """First group element (in BFS order) on which the vectorised
    ``predicate`` is False, or ``None`` when it holds on the whole group.

    The generators themselves are tested first, so a failing generator is
    reported without any enumeration."""
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, degree)
    if gens.shape[0]:
        bad = np.flatnonzero(~predicate(gens))
        if bad.size:
            return gens[bad[0]].copy()
    for batch in iter_closure(gens, degree, limit):
        ok = predicate(batch.astype(np.int64))
        bad = np.flatnonzero(~ok)
        if bad.size:
            return batch[bad[0]].astype(np.int64)
    return None


def mlt_generators(q: Loop) -> list[Permutation]:
    return ([left_translation(q, x) for x in q.elements]
            + [right_translation(q, x) for x in q.elements])


def mlt_group(q: Loop, limit: int = DEFAULT_SIZE_LIMIT) -> PermGroup:
    return closure(mlt_generators(q), q.order, limit)


def inn_group(q: Loop, limit: int = DEFAULT_SIZE_LIMIT) -> PermGroup:
    gens = inner_generator_array(q)
    arr = closure_array(gens, q.order, limit)
    return PermGroup(q.order, tuple(Permutation.from_array(g) for g in gens), arr)


def as_set(arr: np.ndarray) -> set[bytes]:
    arr = np.ascontiguousarray(np.asarray(arr, dtype=np.int64))
    return {row.tobytes() for row in arr}


def inn_is_stabilizer(q: Loop, limit: int = DEFAULT_SIZE_LIMIT,
                      inn: np.ndarray | None = None) -> bool:
    """Decide Inn(Q) == {theta in Mlt(Q) : 0 theta = 0} without listing Mlt.

    With coset representatives u_x = L_x (so 0 u_x = x), the union of the
    cosets Inn(Q) u_x contains the identity, and it is closed under every
    translation g exactly when each Schreier element u_x g u_{xg}^{-1} lies
    in Inn(Q).  Then the union is Mlt(Q) and its part fixing 0 is Inn(Q).
    Since the standard inner generators fix 0, the converse holds as well.
    ``inn`` may pass an already enumerated Inn(Q).
    """
    if inn is None:
        inn = closure_array(inner_generator_array(q), q.order, limit)
    if not (inn[:, 0] == 0).all():
        return False
    tr = translations(q)
    gens = np.concatenate([tr.L, tr.R])
    x = np.arange(q.order)
    ux = tr.L[x][:, None, :]                   # (n, 1, n)
    moved = gens[:, ux[:, 0, :]]               # moved[k, x] = u_x then g_k
    moved = np.transpose(moved, (1, 0, 2))     # (n, 2n, n)
    y = moved[:, :, 0]                         # 0 u_x g = x g
    schreier = chain(moved, tr.Linv[y]).reshape(-1, q.order)
    return as_set(schreier) <= as_set(inn)
