"""Exhaustive identity checkers and characteristic subsets.

Every check is evaluated over the whole Cayley table with numpy
broadcasting; nothing is sampled.  Where an identity contains an
unparenthesised ``xyx`` it is evaluated as ``(x*y)*x`` and flexibility is a
checked precondition.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, fields
from functools import lru_cache

import numpy as np

from .cayley import Loop, NoTwoSidedInverse, SubsetReport
from .permact import (DEFAULT_SIZE_LIMIT, Permutation, chain, find_in_closure,
                      inner_generator_array, labelled_inner_generators,
                      translations)


class NotFlexible(ValueError):
    pass


class NotIP(ValueError):
    pass


class HypothesisNotMet(UserWarning):
    pass


def _grids(n: int, k: int) -> list[np.ndarray]:
    """``k`` broadcastable index grids over ``range(n)``."""
    out = []
    for i in range(k):
        shape = [1] * k
        shape[i] = n
        out.append(np.arange(n).reshape(shape))
    return out


def is_commutative(q: Loop) -> bool:
    return bool(np.array_equal(q.table, q.table.T))


def is_associative(q: Loop) -> bool:
    T = q.table
    x, y, z = _grids(q.order, 3)
    return bool((T[T[x, y], z] == T[x, T[y, z]]).all())


def is_flexible(q: Loop) -> bool:
    T = q.table
    x, y = _grids(q.order, 2)
    return bool((T[T[x, y], x] == T[x, T[y, x]]).all())


def has_inverse_property(q: Loop) -> bool:
    try:
        inv = q.inverses()
    except NoTwoSidedInverse:
        return False
    T = q.table
    x, y = _grids(q.order, 2)
    return bool((T[inv[x], T[x, y]] == y).all() and (T[T[y, x], inv[x]] == y).all())


def is_moufang(q: Loop) -> bool:
    """(xy)(zx) = x((yz)x)."""
    T = q.table
    x, y, z = _grids(q.order, 3)
    return bool((T[T[x, y], T[z, x]] == T[x, T[T[y, z], x]]).all())


def is_steiner(q: Loop) -> bool:
    """xy = yx and x(yx) = y."""
    T = q.table
    x, y = _grids(q.order, 2)
    return is_commutative(q) and bool((T[x, T[y, x]] == y).all())


def is_c_loop(q: Loop) -> bool:
    """x(y(yz)) = ((xy)y)z."""
    T = q.table
    x, y, z = _grids(q.order, 3)
    return bool((T[x, T[y, T[y, z]]] == T[T[T[x, y], y], z]).all())


def is_semiautomorphism(q: Loop, theta: Permutation) -> bool:
    """theta fixes 1 and (x(yx))theta = x theta (y theta x theta)."""
    if theta.degree != q.order:
        from .permact import DegreeMismatch
        raise DegreeMismatch(f"degree {theta.degree} != order {q.order}")
    return bool(_semiauto_mask(q, np.asarray(theta.images)[None, :])[0])


def _semiauto_mask(q: Loop, thetas: np.ndarray) -> np.ndarray:
    """Row-wise semiautomorphism test for a batch of image arrays."""
    T = q.table
    n = q.order
    xyx = T[np.arange(n)[:, None], T.T]  # xyx[x, y] = x*(y*x)
    step = max(1, (1 << 21) // (n * n))
    out = np.empty(thetas.shape[0], dtype=bool)
    for i in range(0, thetas.shape[0], step):
        th = thetas[i:i + step]
        col = th[:, :, None]  # col[k, x, 0] = x theta
        lhs = th[:, xyx]
        rhs = T[col, T[th[:, None, :], col]]
        out[i:i + step] = (th[:, 0] == 0) & (lhs == rhs).all(axis=(1, 2))
    return out


def _inner_check(q: Loop, predicate, limit: int) -> bool:
    gens = inner_generator_array(q)
    return find_in_closure(gens, q.order, predicate, limit) is None


def first_non_semiautomorphic_inner(q: Loop, limit: int = DEFAULT_SIZE_LIMIT):
    """An inner mapping failing the semiautomorphism test, or ``None``."""
    gens = inner_generator_array(q)
    bad = find_in_closure(gens, q.order, lambda b: _semiauto_mask(q, b), limit)
    return None if bad is None else Permutation.from_array(bad)


def first_non_semiautomorphic_generator(q: Loop):
    """Label and permutation of a standard inner generator that is not a
    semiautomorphism, or ``None``."""
    labels, arr = labelled_inner_generators(q)
    bad = np.flatnonzero(~_semiauto_mask(q, arr))
    if not bad.size:
        return None
    return labels[bad[0]], Permutation.from_array(arr[bad[0]])


SEMI_METHODS = ("enumerate", "generators")


@lru_cache(maxsize=512)
def _semi_cached(q: Loop, limit: int, method: str) -> bool:
    if not (is_flexible(q) and has_inverse_property(q)):
        return False
    if method == "generators":
        return first_non_semiautomorphic_generator(q) is None
    return first_non_semiautomorphic_inner(q, limit) is None


def is_semiautomorphic_ip(q: Loop, limit: int = DEFAULT_SIZE_LIMIT,
                          method: str = "enumerate") -> bool:
    """Flexible, IP, and every element of Inn(Q) is a semiautomorphism.

    ``method="enumerate"`` walks Inn(Q) breadth-first from the standard
    generators and stops at the first failing element; it raises
    SizeLimitExceeded on groups larger than ``limit``.

    ``method="generators"`` tests only the standard generators.  This is
    exact too: the semiautomorphisms of a loop are closed under composition
    (apply the defining law twice), so in a finite loop they form a group,
    and a group containing the generators contains Inn(Q).
    """
    if method not in SEMI_METHODS:
        raise ValueError(f"method must be one of {SEMI_METHODS}")
    return _semi_cached(q, limit, method)


def inner_preserve_inverses(q: Loop, limit: int = DEFAULT_SIZE_LIMIT) -> bool:
    """(x^-1)theta = (x theta)^-1 for every theta in Inn(Q)."""
    if not has_inverse_property(q):
        raise NotIP("inner_preserve_inverses needs an IP loop")
    inv = q.inverses()

    def pred(batch):
        return (batch[:, inv] == inv[batch]).all(axis=1)

    return _inner_check(q, pred, limit)


def check_rif1(q: Loop) -> bool:
    """L_x P_y R_x = P_{yx} for all x, y."""
    tr = translations(q)
    x, y = _grids(q.order, 2)
    lhs = chain(tr.L[x], tr.P[y], tr.R[x])
    return bool((lhs == tr.P[q.table[y, x]]).all())


def check_rif2(q: Loop) -> bool:
    """R_x P_y L_x = P_{xy} for all x, y."""
    tr = translations(q)
    x, y = _grids(q.order, 2)
    lhs = chain(tr.R[x], tr.P[y], tr.L[x])
    return bool((lhs == tr.P[q.table[x, y]]).all())


def check_arif(q: Loop) -> bool:
    """R_x R_{yxy} = R_{xyx} R_y and L_x L_{yxy} = L_{xyx} L_y."""
    if not is_flexible(q):
        raise NotFlexible("ARIF is only defined here for flexible loops")
    T = q.table
    tr = translations(q)
    x, y = _grids(q.order, 2)
    yxy = T[T[y, x], y]
    xyx = T[T[x, y], x]
    right = chain(tr.R[x], tr.R[yxy]) == chain(tr.R[xyx], tr.R[y])
    left = chain(tr.L[x], tr.L[yxy]) == chain(tr.L[xyx], tr.L[y])
    return bool(right.all() and left.all())


def rif_pair_form(q: Loop) -> bool:
    """Flexible and R_{x,y} = L_{x^-1,y^-1} for all x, y (IP loops only)."""
    if not is_flexible(q):
        return False
    inv = q.inverses()
    tr = translations(q)
    T = q.table
    x, y = _grids(q.order, 2)
    rxy = chain(tr.R[x], tr.R[y], tr.Rinv[T[x, y]])
    xi, yi = inv[x], inv[y]
    lxy = chain(tr.L[xi], tr.L[yi], tr.Linv[T[yi, xi]])
    return bool((rxy == lxy).all())


def is_diassociative(q: Loop) -> bool:
    T = q.table
    seen: set[tuple[int, ...]] = set()
    for a in q.elements:
        for b in range(a, q.order):
            sub = tuple(q.subloop_generated([a, b]))
            if sub in seen:
                continue
            seen.add(sub)
            idx = np.array(sub)
            x, y, z = idx[:, None, None], idx[None, :, None], idx[None, None, :]
            if not (T[T[x, y], z] == T[x, T[y, z]]).all():
                return False
    return True


# --- characteristic subsets --------------------------------------------------

def commutant_mask(q: Loop) -> np.ndarray:
    return (q.table == q.table.T).all(axis=1)


def nucleus_masks(q: Loop) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    T = q.table
    a, x, y = _grids(q.order, 3)
    left = (T[a, T[x, y]] == T[T[a, x], y]).all(axis=(1, 2))
    middle = (T[x, T[a, y]] == T[T[x, a], y]).all(axis=(1, 2))
    right = (T[x, T[y, a]] == T[T[x, y], a]).all(axis=(1, 2))
    return left, middle, right


def moufang_element_mask(q: Loop) -> np.ndarray:
    T = q.table
    a, x, y = _grids(q.order, 3)
    m1 = T[a, T[T[x, y], a]] == T[T[a, x], T[y, a]]
    m2 = T[a, T[x, T[a, y]]] == T[T[T[a, x], a], y]
    m3 = T[T[T[y, a], x], a] == T[y, T[a, T[x, a]]]
    return (m1 & m2 & m3).all(axis=(1, 2))


def c_element_mask(q: Loop) -> np.ndarray:
    """x(a(ay)) = ((xa)a)y."""
    T = q.table
    a, x, y = _grids(q.order, 3)
    return (T[x, T[a, T[a, y]]] == T[T[T[x, a], a], y]).all(axis=(1, 2))


def _members(mask: np.ndarray) -> list[int]:
    return np.flatnonzero(mask).tolist()


def characteristic_subsets(q: Loop) -> SubsetReport:
    c = commutant_mask(q)
    left, middle, right = nucleus_masks(q)
    nuc = left & middle & right
    return SubsetReport(
        commutant=_members(c),
        left_nucleus=_members(left),
        middle_nucleus=_members(middle),
        right_nucleus=_members(right),
        nucleus=_members(nuc),
        center=_members(c & nuc),
        moufang_elements=_members(moufang_element_mask(q)),
        c_elements=_members(c_element_mask(q)),
    )


def center(q: Loop) -> list[int]:
    left, middle, right = nucleus_masks(q)
    return _members(commutant_mask(q) & left & middle & right)


def moufang_element_alt(q: Loop, a: int, check_hypothesis: bool = True) -> bool:
    """(yx * a)x = y(xax) for all x, y, with xax = (x*a)*x.

    Agrees with Moufang-element membership on semiautomorphic IP loops.
    """
    if check_hypothesis and not is_semiautomorphic_ip(q):
        warnings.warn("loop is not semiautomorphic IP; the criterion may differ "
                      "from Moufang-element membership", HypothesisNotMet, stacklevel=2)
    T = q.table
    x, y = _grids(q.order, 2)
    xax = T[T[x, a], x]
    return bool((T[T[T[y, x], a], x] == T[y, xax]).all())


# --- profile -----------------------------------------------------------------

@dataclass(frozen=True)
class PropertyProfile:
    order: int
    flexible: bool
    inverse_property: bool
    semiautomorphic_ip: bool
    rif1: bool
    rif2: bool
    arif: bool | None  # None when the loop is not flexible
    moufang: bool
    steiner: bool
    c_loop: bool
    diassociative: bool
    commutative: bool
    associative: bool
    subsets: SubsetReport

    def flags(self) -> dict[str, object]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "subsets"}

    def to_text(self, name: str | None = None) -> str:
        lines = []
        if name:
            lines.append(f"name={name}")
        for key, value in self.flags().items():
            if isinstance(value, bool):
                value = str(value).lower()
            elif value is None:
                value = "undefined"
            lines.append(f"{key}={value}")
        lines.extend(self.subsets.as_lines())
        return "\n".join(lines) + "\n"


def profile(q: Loop, limit: int = DEFAULT_SIZE_LIMIT) -> PropertyProfile:
    flexible = is_flexible(q)
    return PropertyProfile(
        order=q.order,
        flexible=flexible,
        inverse_property=has_inverse_property(q),
        semiautomorphic_ip=is_semiautomorphic_ip(q, limit),
        rif1=check_rif1(q),
        rif2=check_rif2(q),
        arif=check_arif(q) if flexible else None,
        moufang=is_moufang(q),
        steiner=is_steiner(q),
        c_loop=is_c_loop(q),
        diassociative=is_diassociative(q),
        commutative=is_commutative(q),
        associative=is_associative(q),
        subsets=characteristic_subsets(q),
    )
