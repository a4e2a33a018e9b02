import itertools

import pytest
from hypothesis import given, settings

from loopkit.catalog import (cyclic_group, klein_four, symmetric_group, table1_loop)
from loopkit.cayley import direct_product, read_loop
from loopkit.doubling import DoublingSpec, chein_double, dbj_double, star_inversion
from loopkit.idents import (HypothesisNotMet, NotFlexible, NotIP, characteristic_subsets,
                            check_arif, check_rif1, check_rif2,
                            first_non_semiautomorphic_generator,
                            first_non_semiautomorphic_inner, has_inverse_property,
                            inner_preserve_inverses, is_associative, is_c_loop,
                            is_commutative, is_diassociative, is_flexible, is_moufang,
                            is_semiautomorphic_ip, is_semiautomorphism, is_steiner,
                            moufang_element_alt, profile, rif_pair_form)
from loopkit.permact import DegreeMismatch, Permutation, inner_generators

from . import oracles
from .strategies import isotopic_groups, latin_loops


@pytest.fixture(scope="module")
def s3_doubles():
    s3 = symmetric_group(3)
    inv = star_inversion(s3)
    return (chein_double(DoublingSpec(s3, 0, inv, "chein")),
            dbj_double(DoublingSpec(s3, 0, inv, "dbj")))


@pytest.fixture(scope="module")
def nonflexible5(data_dir):
    return read_loop(data_dir / "nonflexible5.loop")


@pytest.fixture(scope="module")
def ip7(data_dir):
    return read_loop(data_dir / "ip7.loop")


GROUPS = [cyclic_group(1), cyclic_group(4), klein_four(), symmetric_group(3), symmetric_group(4)]


@pytest.mark.parametrize("g", GROUPS, ids=lambda g: g.name)
def test_groups_satisfy_everything(g):
    p = profile(g)
    for key in ("flexible", "inverse_property", "semiautomorphic_ip", "rif1", "rif2", "arif",
                "moufang", "c_loop", "diassociative", "associative"):
        assert getattr(p, key) is True, key
    assert inner_preserve_inverses(g)


def test_abelian_groups():
    for q in (cyclic_group(4), klein_four(), cyclic_group(6)):
        p = profile(q)
        assert p.commutative and p.associative and p.moufang and p.c_loop
        s = p.subsets
        everything = list(q.elements)
        for key in s.fields_order:
            assert getattr(s, key) == everything
    assert is_steiner(klein_four())
    assert not is_steiner(cyclic_group(4))


def test_table1_profile():
    q = table1_loop()
    p = profile(q)
    assert p.flexible and p.inverse_property and p.c_loop and p.diassociative
    assert p.arif is True
    assert not p.semiautomorphic_ip
    assert not (p.rif1 and p.rif2)
    assert not p.moufang and not p.commutative and not p.associative
    assert inner_preserve_inverses(q) == (check_rif1(q) and check_rif2(q))


def test_table1_subsets():
    q = table1_loop()
    s = characteristic_subsets(q)
    assert s.commutant == [0, 1, 2, 3, 4, 5]
    assert s.center == s.nucleus == s.moufang_elements == [0, 3]
    assert s.c_elements == list(q.elements)
    # the commutant is not closed under multiplication
    c = set(s.commutant)
    assert any(q.mul(a, b) not in c for a in c for b in c)


def test_table1_some_lxy_fails():
    q = table1_loop()
    failing = [lbl for lbl, th in inner_generators(q) if not is_semiautomorphism(q, th)]
    assert any(lbl.startswith("L[") for lbl in failing)
    label, _ = first_non_semiautomorphic_generator(q)
    assert label in failing
    assert first_non_semiautomorphic_inner(q) is not None


def test_table1_p_translation_value():
    q = table1_loop()
    assert q.mul(q.mul(1, 2), 1) == q.mul(1, q.mul(2, 1))


def test_nonflexible(nonflexible5):
    q = nonflexible5
    assert not is_flexible(q)
    assert not oracles.is_flexible(oracles.rows(q))
    with pytest.raises(NotFlexible):
        check_arif(q)
    p = profile(q)
    assert p.arif is None and not p.semiautomorphic_ip
    assert "arif=undefined" in p.to_text()


def test_non_diassociative_ip_loop(ip7):
    q = ip7
    t = oracles.rows(q)
    assert is_flexible(q) and has_inverse_property(q)
    assert not is_diassociative(q) and not oracles.is_diassociative(t)
    assert not is_semiautomorphic_ip(q)
    assert not check_arif(q)


def test_not_ip():
    # a loop in which 2 has distinct left and right inverses
    from loopkit.cayley import validate_table
    q = validate_table([[1, 2, 3, 4, 5], [2, 3, 1, 5, 4], [3, 4, 5, 1, 2],
                        [4, 5, 2, 3, 1], [5, 1, 4, 2, 3]])
    assert not has_inverse_property(q)
    with pytest.raises(NotIP):
        inner_preserve_inverses(q)
    assert not is_semiautomorphic_ip(q)


def test_semiautomorphism_basics():
    s3 = symmetric_group(3)
    assert is_semiautomorphism(s3, Permutation.identity(6))
    with pytest.raises(DegreeMismatch):
        is_semiautomorphism(s3, Permutation.identity(5))
    assert not is_semiautomorphism(s3, Permutation.from_cycles(6, [(0, 1)]))


def test_group_automorphisms_are_semiautomorphisms():
    # conjugation by each element of S3
    q = symmetric_group(3)
    for g in q.elements:
        gi = q.two_sided_inverse(g)
        theta = Permutation(tuple(q.mul(q.mul(gi, x), g) for x in q.elements))
        assert is_semiautomorphism(q, theta)


def test_s3_doubles(s3_doubles):
    ch, db = s3_doubles
    assert ch.order == db.order == 12
    assert is_moufang(ch) and is_semiautomorphic_ip(ch)
    assert not is_moufang(db) and not is_steiner(db)
    for q in (ch, db):
        assert is_semiautomorphic_ip(q)
        assert check_arif(q) and is_diassociative(q)


def test_moufang_element_alt(s3_doubles):
    ch, _ = s3_doubles
    members = set(characteristic_subsets(ch).moufang_elements)
    for a in ch.elements:
        assert moufang_element_alt(ch, a) == (a in members)
    assert moufang_element_alt(table1_loop(), 0, check_hypothesis=False)
    with pytest.warns(HypothesisNotMet):
        moufang_element_alt(table1_loop(), 0)


def test_s3_subsets():
    s = characteristic_subsets(symmetric_group(3))
    assert s.commutant == s.center == [0]
    assert s.nucleus == s.moufang_elements == s.c_elements == list(range(6))


def test_semi_methods_agree(loops, s3_doubles):
    small = [q for q in loops if q.order <= 12] + list(s3_doubles)
    for q in small:
        assert (is_semiautomorphic_ip(q, method="enumerate")
                == is_semiautomorphic_ip(q, method="generators"))
    with pytest.raises(ValueError):
        is_semiautomorphic_ip(small[0], method="sample")


def test_profile_text_is_stable():
    text = profile(symmetric_group(3)).to_text("S3")
    keys = [ln.split("=")[0] for ln in text.splitlines()]
    assert keys[:3] == ["name", "order", "flexible"]
    assert keys[-1] == "c_elements"
    assert "commutant=1" in text.splitlines()


def test_product_with_table1_inherits_failure():
    q = direct_product(table1_loop(), cyclic_group(2))
    assert not is_semiautomorphic_ip(q, method="generators")
    assert is_flexible(q) and has_inverse_property(q)


def _subsets_by_oracle(t):
    return oracles.commutant(t), oracles.nucleus(t), oracles.center(t)


@settings(max_examples=60, deadline=None)
@given(latin_loops(max_order=6))
def test_identities_against_oracle(q):
    t = oracles.rows(q)
    assert is_flexible(q) == oracles.is_flexible(t)
    assert has_inverse_property(q) == oracles.has_ip(t)
    assert is_associative(q) == oracles.is_associative(t)
    assert is_moufang(q) == oracles.is_moufang(t)
    assert is_semiautomorphic_ip(q) == oracles.is_semiautomorphic_ip(t)
    assert is_diassociative(q) == oracles.is_diassociative(t)
    s = characteristic_subsets(q)
    assert (s.commutant, s.nucleus, s.center) == _subsets_by_oracle(t)


@settings(max_examples=60, deadline=None)
@given(latin_loops(max_order=6))
def test_profile_invariants(q):
    p = profile(q)
    if p.semiautomorphic_ip:
        assert p.flexible and p.inverse_property
        assert p.rif1 and p.rif2 and p.arif and p.diassociative
    if p.steiner:
        assert p.commutative and p.inverse_property
    if p.associative:
        assert p.moufang and p.c_loop and p.flexible and p.diassociative
        assert p.rif1 and p.rif2 and p.arif
    if p.inverse_property:
        pres = inner_preserve_inverses(q)
        assert pres == p.rif1 == p.rif2 == rif_pair_form(q)
        assert p.semiautomorphic_ip == (p.flexible and pres)


@settings(max_examples=30, deadline=None)
@given(isotopic_groups())
def test_relabelled_groups(q):
    assert is_associative(q) and is_commutative(q)
    assert is_c_loop(q) and is_semiautomorphic_ip(q)
    assert characteristic_subsets(q).center == list(q.elements)


def test_power_conventions_on_diassociative_corpus(loops):
    for q in loops:
        if q.order > 24 or not is_diassociative(q):
            continue
        for a in q.elements:
            for m, k in itertools.product(range(4), repeat=2):
                assert q.mul(q.power(a, m), q.power(a, k)) == q.power(a, m + k)
