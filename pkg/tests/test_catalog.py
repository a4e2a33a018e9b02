import hashlib
from collections import Counter

import pytest

from loopkit.catalog import (TABLE1_INDEX, TABLE1_SHA256, InvalidTripleSystem, TripleSystem,
                             affine_plane_sts, corpus, corpus_names, cyclic_group, fano_sts,
                             klein_four, parse_triple_system, product_with_z2,
                             read_triple_system, steiner_loop, symmetric_group, table1_loop,
                             table1_raw)
from loopkit.cayley import dumps, loads
from loopkit.idents import (has_inverse_property, is_associative, is_semiautomorphic_ip,
                            is_steiner)

from . import oracles


def test_table1_literal():
    q = table1_loop()
    assert q.order == 20 and q.name == "table1"
    assert hashlib.sha256(dumps(q).encode()).hexdigest() == TABLE1_SHA256
    raw = table1_raw()
    assert raw[0] == list(range(1, 21))
    assert [r[0] for r in raw] == list(range(1, 21))
    assert oracles.is_latin([[v - 1 for v in r] for r in raw])


def test_table1_round_trip():
    q = table1_loop()
    text = dumps(q)
    assert dumps(loads(text)) == text
    assert loads(text) == q


def test_symmetric_group_ordering():
    s3 = symmetric_group(3)
    assert s3.order == 6 and s3.name == "S3"
    assert not oracles.commutant(oracles.rows(s3))[1:]
    # lexicographic one-line order: (0 1 2), (0 2 1), (1 0 2), (1 2 0), (2 0 1), (2 1 0)
    assert [s3.element_order(x) for x in s3.elements] == [1, 2, 2, 3, 3, 2]
    assert symmetric_group(1).order == 1
    assert symmetric_group(4).order == 24
    with pytest.raises(ValueError):
        symmetric_group(5)


def test_cyclic_and_klein():
    assert cyclic_group(1).order == 1
    assert sorted(cyclic_group(4).element_order(x) for x in range(4)) == [1, 2, 4, 4]
    assert sorted(klein_four().element_order(x) for x in range(4)) == [1, 2, 2, 2]
    with pytest.raises(ValueError):
        cyclic_group(0)


@pytest.mark.parametrize("q", [cyclic_group(1), cyclic_group(5), klein_four(),
                               symmetric_group(3), symmetric_group(4)], ids=lambda q: q.name)
def test_groups_are_associative(q):
    assert is_associative(q)
    assert oracles.is_associative(oracles.rows(q))


def test_steiner_from_single_triple():
    q = steiner_loop(TripleSystem.from_triples(3, [(0, 1, 2)]))
    assert q.order == 4
    assert q == klein_four()


def test_affine_plane():
    ts = affine_plane_sts()
    assert ts.point_count == 9 and len(ts.triples) == 12
    q = steiner_loop(ts)
    assert q.order == 10 and q.name == "Steiner10"
    t = oracles.rows(q)
    n = len(t)
    assert all(t[x][y] == t[y][x] and t[x][t[y][x]] == y for x in range(n) for y in range(n))
    assert is_steiner(q) and has_inverse_property(q)
    with pytest.raises(ValueError):
        affine_plane_sts(4)


def test_fano():
    q = steiner_loop(fano_sts())
    assert q.order == 8 and is_steiner(q)
    # the Steiner loop of the Fano plane is the elementary abelian group of order 8
    assert is_associative(q)


def test_invalid_triple_systems():
    with pytest.raises(InvalidTripleSystem) as info:
        TripleSystem.from_triples(4, [(0, 1, 2)])
    assert info.value.pair == (0, 3)
    with pytest.raises(InvalidTripleSystem) as info:
        TripleSystem.from_triples(3, [(0, 1, 2), (0, 1, 2)])
    assert info.value.pair == (0, 1)
    with pytest.raises(InvalidTripleSystem):
        TripleSystem.from_triples(3, [(0, 1, 5)])
    with pytest.raises(InvalidTripleSystem):
        TripleSystem.from_triples(3, [(0, 1)])


def test_parse_triple_system(tmp_path):
    ts = parse_triple_system("# one line\n3\n1 2 3\n")
    assert ts.point_count == 3
    with pytest.raises(InvalidTripleSystem):
        parse_triple_system("")
    with pytest.raises(InvalidTripleSystem):
        parse_triple_system("3\n1 2\n")
    path = tmp_path / "fano.sts"
    path.write_text("7\n" + "".join(" ".join(str(p + 1) for p in sorted(t)) + "\n"
                                    for t in fano_sts().triples))
    assert steiner_loop(read_triple_system(path)) == steiner_loop(fano_sts())


def test_corpus_shape(loops):
    assert loops is corpus()
    names = corpus_names()
    assert len(names) == len(loops) == 19
    assert loops[TABLE1_INDEX] == table1_loop()
    assert [q.order for q in loops[:11]] == [1, 2, 3, 4, 4, 6, 6, 24, 4, 10, 20]
    assert Counter(q.order for q in loops)[24] >= 3
    assert len(set(names)) == len(names)


def test_corpus_has_semiautomorphic_order_24(loops):
    big = [q for q in loops if q.order == 24 and not is_associative(q)]
    assert big
    assert all(is_semiautomorphic_ip(q, method="generators") for q in big)


def test_corpus_members_are_loops(loops):
    for q in loops:
        if q.order <= 24:
            t = oracles.rows(q)
            assert oracles.is_latin(t) and oracles.identity_of(t) == 0


def test_product_with_z2():
    q = product_with_z2(cyclic_group(3))
    assert q.order == 6 and is_associative(q)
