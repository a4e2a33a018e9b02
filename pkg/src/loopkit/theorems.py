"""Invariant suites over a list of loops.

Each check returns a :class:`CheckResult`; an empty violation list means the
property held on every instance examined.  Everything is exhaustive over the
Cayley tables involved.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .cayley import Loop, NoTwoSidedInverse, direct_product
from .catalog import corpus, cyclic_group
from .doubling import (DoublingSpec, PreconditionFailed, StarMap, chein_double,
                       dbj_into_chein_twice, double, extend_star_p2, extend_star_p3,
                       find_isomorphism, generalized_double, star_identity,
                       star_inversion, twice_comparison, validate,
                       validate_star_semi)
from .idents import (_grids, c_element_mask, check_arif, check_rif1, check_rif2,
                     commutant_mask, has_inverse_property, inner_preserve_inverses,
                     is_c_loop, is_commutative, is_diassociative, is_flexible,
                     is_semiautomorphic_ip, is_steiner, moufang_element_alt,
                     moufang_element_mask, nucleus_masks, rif_pair_form)
from .permact import chain, translations

# brute-force search for semiautomorphic stars only on tiny loops
SEMI_STAR_MAX_ORDER = 6


@dataclass
class CheckResult:
    name: str
    instances: int = 0
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, msg: str) -> None:
        self.violations.append(msg)

    def line(self) -> str:
        status = "pass" if self.ok else "fail"
        return (f"{self.name}={status} instances={self.instances} "
                f"violations={len(self.violations)}")


def _tag(q: Loop) -> str:
    return q.name or f"order{q.order}"


def semi(q: Loop) -> bool:
    # the generator test is exact (see is_semiautomorphic_ip) and avoids
    # enumerating Inn(Q); check_semi_methods compares it with enumeration
    return is_semiautomorphic_ip(q, method="generators")


def _is_ip(q: Loop) -> bool:
    return has_inverse_property(q)


def _power(q: Loop, a: int, k: int) -> int:
    return q.power(a, k)


def _center_mask(q: Loop) -> np.ndarray:
    left, middle, right = nucleus_masks(q)
    return commutant_mask(q) & left & middle & right


def exponent(q: Loop) -> int:
    e = 1
    for x in q.elements:
        e = np.lcm(e, q.element_order(x) or 1)
    return int(e)


# --- identity equivalences ----------------------------------------------------

def check_semi_ip_equivalence(loops: Sequence[Loop]) -> CheckResult:
    """Semiautomorphic IP  <=>  flexible, IP, inner maps preserve inverses."""
    res = CheckResult("semi_ip_equivalence")
    for q in loops:
        res.instances += 1
        ip = _is_ip(q)
        rhs = is_flexible(q) and ip and inner_preserve_inverses(q)
        if is_semiautomorphic_ip(q) != rhs:
            res.fail(f"{_tag(q)}: semiautomorphic_ip={not rhs} but criterion={rhs}")
    return res


def check_semi_methods(loops: Sequence[Loop]) -> CheckResult:
    """Generator test and full enumeration of Inn(Q) agree."""
    res = CheckResult("semi_methods_agree")
    for q in loops:
        res.instances += 1
        a = is_semiautomorphic_ip(q, method="generators")
        b = is_semiautomorphic_ip(q, method="enumerate")
        if a != b:
            res.fail(f"{_tag(q)}: generators={a} enumerate={b}")
    return res


def check_rif_equivalence(loops: Sequence[Loop]) -> CheckResult:
    """On IP loops: inner maps preserve inverses <=> RIF1 <=> RIF2 <=>
    flexible with R_{x,y} = L_{x^-1,y^-1}."""
    res = CheckResult("rif_equivalence")
    for q in loops:
        if not _is_ip(q):
            continue
        res.instances += 1
        values = {"inner_preserve_inverses": inner_preserve_inverses(q),
                  "rif1": check_rif1(q), "rif2": check_rif2(q),
                  "rif_pair_form": rif_pair_form(q)}
        if len(set(values.values())) != 1:
            res.fail(f"{_tag(q)}: {values}")
    return res


def check_semi_consequences(loops: Sequence[Loop]) -> CheckResult:
    """Semiautomorphic IP loops satisfy ARIF and are diassociative."""
    res = CheckResult("semi_arif_diassociative")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        if not check_arif(q):
            res.fail(f"{_tag(q)}: ARIF fails")
        if not is_diassociative(q):
            res.fail(f"{_tag(q)}: not diassociative")
    return res


# --- commutant suite ----------------------------------------------------------

def _commutant_elements(q: Loop) -> list[int]:
    return np.flatnonzero(commutant_mask(q)).tolist()


def check_commutant_powers(loops: Sequence[Loop]) -> CheckResult:
    """For a in C(Q): a^2 in M(Q), a^3 in C0(Q), a^6 in Z(Q), and <a> in C(Q)."""
    res = CheckResult("commutant_powers")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        comm = commutant_mask(q)
        moufang = moufang_element_mask(q)
        c0 = c_element_mask(q)
        z = _center_mask(q)
        for a in _commutant_elements(q):
            if not moufang[_power(q, a, 2)]:
                res.fail(f"{_tag(q)}: a={a + 1}, a^2 not a Moufang element")
            if not c0[_power(q, a, 3)]:
                res.fail(f"{_tag(q)}: a={a + 1}, a^3 not a c-element")
            if not z[_power(q, a, 6)]:
                res.fail(f"{_tag(q)}: a={a + 1}, a^6 not central")
            k = q.element_order(a) or q.order
            for m in range(-k, k + 1):
                if not comm[_power(q, a, m)]:
                    res.fail(f"{_tag(q)}: a={a + 1}, a^{m} leaves the commutant")
    return res


def check_commutant_subloop(loops: Sequence[Loop]) -> CheckResult:
    res = CheckResult("commutant_subloop")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        comm = commutant_mask(q)
        idx = np.flatnonzero(comm)
        prods = q.table[np.ix_(idx, idx)]
        if not comm[prods].all():
            i, j = np.argwhere(~comm[prods])[0]
            res.fail(f"{_tag(q)}: {idx[i] + 1}*{idx[j] + 1} not in commutant")
        inv = q.inverses()
        if not comm[inv[idx]].all():
            res.fail(f"{_tag(q)}: commutant not closed under inverses")
    return res


def check_power_laws(loops: Sequence[Loop]) -> CheckResult:
    """(xa)^n = x^n a^n for a in C(Q), |n| up to the exponent, plus agreement
    of left- and right-nested powers on diassociative loops."""
    res = CheckResult("power_laws")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        e = exponent(q)
        for a in _commutant_elements(q):
            for x in q.elements:
                xa = q.mul(x, a)
                for m in range(-e, e + 1):
                    lhs = _power(q, xa, m)
                    rhs = q.mul(_power(q, x, m), _power(q, a, m))
                    if lhs != rhs:
                        res.fail(f"{_tag(q)}: (xa)^{m} != x^{m} a^{m} at x={x + 1}, a={a + 1}")
        if is_diassociative(q):
            for a in q.elements:
                right = 0
                for k in range(1, q.order + 1):
                    right = q.mul(right, a)
                    if right != _power(q, a, k):
                        res.fail(f"{_tag(q)}: a={a + 1}, powers of order {k} disagree")
                        break
    return res


def check_commutant_translations(loops: Sequence[Loop]) -> CheckResult:
    """Five translation identities for a in C(Q) and all x (and y)."""
    res = CheckResult("commutant_translations")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        T = q.table
        tr = translations(q)
        inv = q.inverses()
        n = q.order
        xs = np.arange(n)
        for a in _commutant_elements(q):
            ax = T[a, xs]
            a2 = T[a, a]
            la = chain(tr.P[a], tr.L[xs], tr.R[a], tr.Linv[xs])
            ra = chain(tr.L[xs], tr.R[a], tr.Linv[xs], tr.P[a])
            if not (la == ra).all():
                res.fail(f"{_tag(q)}: P_a L_x R_a L_x^-1 identity fails for a={a + 1}")
            lb_r = chain(tr.R[ax], tr.R[ax]) == chain(tr.R[a], tr.R[xs], tr.R[xs], tr.R[a])
            lb_l = chain(tr.L[ax], tr.L[ax]) == chain(tr.L[a], tr.L[xs], tr.L[xs], tr.L[a])
            if not (lb_r.all() and lb_l.all()):
                res.fail(f"{_tag(q)}: R_ax^2 / L_ax^2 identity fails for a={a + 1}")
            a2x = T[a2, xs]
            lc = chain(tr.R[xs], tr.Rinv[a2x], tr.R[a]) == chain(tr.R[a], tr.R[xs], tr.Rinv[a2x])
            if not lc.all():
                res.fail(f"{_tag(q)}: R_x R_a2x^-1 R_a identity fails for a={a + 1}")
            x, y = _grids(n, 2)
            axg = T[a, x]
            ld = T[inv[T[x, y]], axg] == T[axg, inv[T[y, x]]]
            if not ld.all():
                res.fail(f"{_tag(q)}: (xy)^-1 . ax identity fails for a={a + 1}")
            tx = chain(tr.R, tr.Linv)
            if not (tx[ax] == tx).all():
                res.fail(f"{_tag(q)}: T_ax = T_x fails for a={a + 1}")
    return res


def check_moufang_element_alt(loops: Sequence[Loop]) -> CheckResult:
    res = CheckResult("moufang_element_alt")
    for q in loops:
        if not semi(q):
            continue
        res.instances += 1
        m = moufang_element_mask(q)
        for a in q.elements:
            if moufang_element_alt(q, a, check_hypothesis=False) != bool(m[a]):
                res.fail(f"{_tag(q)}: disagreement at a={a + 1}")
    return res


def check_ip_element_facts(loops: Sequence[Loop]) -> CheckResult:
    """On IP loops: x in M(Q) and C(Q) gives x^3 central; a in C0(Q) iff
    a^2 in N(Q)."""
    res = CheckResult("ip_element_facts")
    for q in loops:
        if not _is_ip(q):
            continue
        res.instances += 1
        comm = commutant_mask(q)
        moufang = moufang_element_mask(q)
        z = _center_mask(q)
        left, middle, right = nucleus_masks(q)
        nuc = left & middle & right
        c0 = c_element_mask(q)
        for x in q.elements:
            if moufang[x] and comm[x] and not z[_power(q, x, 3)]:
                res.fail(f"{_tag(q)}: x={x + 1} in M and C but x^3 not central")
            if bool(c0[x]) != bool(nuc[_power(q, x, 2)]):
                res.fail(f"{_tag(q)}: c-element test and a^2 in N disagree at {x + 1}")
    return res


# --- doubling suite -----------------------------------------------------------

def candidate_stars(q: Loop) -> list[StarMap]:
    """Inversion (when defined) and the identity map, without repeats."""
    stars = []
    try:
        stars.append(star_inversion(q))
    except NoTwoSidedInverse:
        pass
    ident = star_identity(q)
    if ident not in stars:
        stars.append(ident)
    return stars


def antiauto_specs(q: Loop, kind: str = "chein") -> Iterator[DoublingSpec]:
    """Every (g0, star) over the candidate stars and central g0 that passes
    validation."""
    z = np.flatnonzero(_center_mask(q)).tolist()
    for star in candidate_stars(q):
        for g0 in z:
            spec = DoublingSpec(q, g0, star, kind)
            if validate(spec):
                yield spec


def semi_stars(q: Loop, g0: int) -> Iterator[StarMap]:
    """Brute force over all bijections fixing 0 that pass validate_star_semi."""
    for tail in itertools.permutations(range(1, q.order)):
        star = StarMap(q, (0,) + tail)
        if validate_star_semi(q, star, g0, check_base=False):
            yield star


def _doubles(spec: DoublingSpec) -> dict[str, Loop]:
    out = {}
    for kind in ("chein", "dbj"):
        out[kind] = double(DoublingSpec(spec.base, spec.g0, spec.star, kind))
    return out


def _spec_tag(spec: DoublingSpec) -> str:
    star = "inv" if spec.star == _maybe_inversion(spec.base) else (
        "id" if spec.star.is_identity() else "other")
    return f"{_tag(spec.base)}[g0={spec.g0 + 1},star={star}]"


def _maybe_inversion(q: Loop) -> StarMap | None:
    try:
        return star_inversion(q)
    except NoTwoSidedInverse:
        return None


def check_doubling(loops: Sequence[Loop]) -> list[CheckResult]:
    """Closure of the variety under doubling, plus structural facts about the doubles."""
    closure = CheckResult("closure_semiautomorphic")
    central = CheckResult("g0_central_in_double")
    star_comm = CheckResult("star_commutes")
    prods = CheckResult("star_product_identities")
    embed = CheckResult("embedding")
    comm = CheckResult("commutative_double")
    ext = CheckResult("star_extensions")
    gen = CheckResult("generalized_equals_chein")
    steiner = CheckResult("steiner_double_g0")
    for q in loops:
        if not semi(q):
            continue
        n = q.order
        T = q.table
        z = _center_mask(q)
        for spec in antiauto_specs(q):
            tag = _spec_tag(spec)
            s = spec.star.array
            doubles = _doubles(spec)
            for kind, d in doubles.items():
                closure.instances += 1
                if not semi(d):
                    closure.fail(f"{kind} {tag}: double is not semiautomorphic IP")
                central.instances += 1
                if not _center_mask(d)[spec.g0]:
                    central.fail(f"{kind} {tag}: g0 not central in the double")
                embed.instances += 1
                if not np.array_equal(d.table[:n, :n], T):
                    embed.fail(f"{kind} {tag}: base table not embedded")
                comm.instances += 1
                d_comm = is_commutative(d)
                if d_comm != spec.star.is_identity():
                    comm.fail(f"{kind} {tag}: commutative={d_comm}, star identity="
                              f"{spec.star.is_identity()}")
                if d_comm:
                    squares = T[np.arange(n), np.arange(n)]
                    if not z[squares].all():
                        comm.fail(f"{kind} {tag}: some g^2 not central")
                    if not (is_commutative(q) and is_c_loop(q)):
                        comm.fail(f"{kind} {tag}: base not a commutative C-loop")
                steiner.instances += 1
                if is_steiner(q) and is_steiner(d) and spec.g0 != 0:
                    steiner.fail(f"{kind} {tag}: Steiner double with g0 != 1")
                ext.instances += 1
                try:
                    extend_star_p2(q, spec.star, d)
                    for c in np.flatnonzero(z).tolist():
                        if q.mul(c, c) == 0 and spec.star(c) == c:
                            extend_star_p3(q, spec.star, c, d)
                except PreconditionFailed as exc:
                    ext.fail(f"{kind} {tag}: {exc}")
            # these two are statements about the base
            g, h = _grids(n, 2)
            star_comm.instances += 1
            x = np.arange(n)
            if not (np.array_equal(T[s, x], T[x, s]) and z[T[x, s]].all()):
                star_comm.fail(f"{tag}: g*g != gg* or not central")
            prods.instances += 1
            hh = T[h, s[h]]
            a1 = T[g, hh] == T[T[g, h], s[h]]
            a2 = T[T[g, s[g]], h] == T[g, T[s[g], h]]
            a3 = T[T[g, hh], s[g]] == T[T[g, h], T[s[h], s[g]]]
            if not (a1.all() and a2.all() and a3.all()):
                prods.fail(f"{tag}: a star product identity fails")
            gen.instances += 1
            gspec = DoublingSpec(q, spec.g0, spec.star, "generalized")
            if not np.array_equal(generalized_double(gspec).table, doubles["chein"].table):
                gen.fail(f"{tag}: generalized table differs from chein table")
    return [closure, central, star_comm, prods, embed, comm, ext, gen, steiner]


def check_semi_stars(loops: Sequence[Loop]) -> list[CheckResult]:
    """Stars that are semiautomorphisms (not necessarily antiautomorphisms):
    the derived identities hold and the generalized double is semiautomorphic IP."""
    ids = CheckResult("semi_star_identities")
    closure = CheckResult("generalized_closure")
    for q in loops:
        if q.order > SEMI_STAR_MAX_ORDER or not semi(q):
            continue
        n = q.order
        T = q.table
        g, h = _grids(n, 2)
        for g0 in np.flatnonzero(_center_mask(q)).tolist():
            for star in semi_stars(q, g0):
                s = star.array
                ids.instances += 1
                i1 = T[g, s[T[h, g]]] == T[s[T[s[g], h]], s[g]]
                i2 = s[T[s[T[g, h]], g]] == T[s[T[s[g], s[h]]], s[g]]
                i3 = s[T[g, s[T[h, g]]]] == T[s[g], s[T[s[h], s[g]]]]
                if not (i1.all() and i2.all() and i3.all()):
                    ids.fail(f"{_tag(q)}[g0={g0 + 1},star={star.to_line().strip()}]")
                closure.instances += 1
                d = generalized_double(DoublingSpec(q, g0, star, "generalized"))
                if not semi(d):
                    closure.fail(f"{_tag(q)}[g0={g0 + 1},star={star.to_line().strip()}]")
    return [ids, closure]


def check_arif_construction(loops: Sequence[Loop]) -> CheckResult:
    """Flexible ARIF base with an antiautomorphic star: doubles are flexible
    and ARIF.  The base need not be semiautomorphic."""
    res = CheckResult("arif_construction")
    for q in loops:
        if not (is_flexible(q) and check_arif(q)):
            continue
        for spec in antiauto_specs(q):
            for kind, d in _doubles(spec).items():
                res.instances += 1
                if not (is_flexible(d) and check_arif(d)):
                    res.fail(f"{kind} {_spec_tag(spec)}: double not flexible ARIF")
    return res


def check_twice(loops: Sequence[Loop], max_order: int = 12) -> CheckResult:
    """Both explicit isomorphisms between iterated doubles."""
    res = CheckResult("twice_isomorphisms")
    for q in loops:
        if q.order > max_order or not semi(q):
            continue
        inv = star_inversion(q)
        z = np.flatnonzero(_center_mask(q)).tolist()
        for g0 in z:
            if q.mul(g0, g0) != 0 or not validate(DoublingSpec(q, g0, inv, "chein")):
                continue
            res.instances += 1
            if not twice_comparison(q, g0, inv).verified:
                res.fail(f"{_tag(q)}: twice phi fails for g0={g0 + 1}")
        if validate(DoublingSpec(q, 0, inv, "chein")):
            res.instances += 1
            if not dbj_into_chein_twice(q, inv).verified:
                res.fail(f"{_tag(q)}: first-level phi fails")
    return res


def steiner_product_report(q: Loop) -> list[str]:
    """Informational: is each Steiner double of ``q`` isomorphic to Q x Z2?"""
    lines = []
    target = direct_product(q, cyclic_group(2))
    for spec in antiauto_specs(q):
        for kind, d in _doubles(spec).items():
            if is_steiner(d):
                found = find_isomorphism(d, target) is not None
                lines.append(f"{kind} {_spec_tag(spec)}: isomorphic_to_QxZ2={str(found).lower()}")
    return lines


# --- runner -------------------------------------------------------------------

SUITES: tuple[tuple[str, Callable[[Sequence[Loop]], object]], ...] = (
    ("semi_ip_equivalence", check_semi_ip_equivalence),
    ("semi_methods", check_semi_methods),
    ("rif_equivalence", check_rif_equivalence),
    ("semi_consequences", check_semi_consequences),
    ("commutant_powers", check_commutant_powers),
    ("commutant_subloop", check_commutant_subloop),
    ("power_laws", check_power_laws),
    ("commutant_translations", check_commutant_translations),
    ("moufang_element_alt", check_moufang_element_alt),
    ("ip_element_facts", check_ip_element_facts),
    ("doubling", check_doubling),
    ("semi_stars", check_semi_stars),
    ("arif_construction", check_arif_construction),
    ("twice", check_twice),
)


def commutant_suite(loops: Sequence[Loop]) -> list[CheckResult]:
    return [check_commutant_powers(loops), check_commutant_subloop(loops),
            check_power_laws(loops), check_commutant_translations(loops)]


def run_all(loops: Iterable[Loop] | None = None) -> list[CheckResult]:
    loops = list(corpus() if loops is None else loops)
    results: list[CheckResult] = []
    for _, fn in SUITES:
        out = fn(loops)
        results.extend(out if isinstance(out, list) else [out])
    return results
