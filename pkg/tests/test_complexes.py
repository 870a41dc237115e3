import random

import pytest
from hypothesis import given, settings, strategies as st

from _support import random_valid_complex
from floerforge import catalog
from floerforge.complexes import (
    BifilteredComplex,
    BigradedModule,
    ComplexError,
    Grading,
    associated_graded_homology,
    empty_complex,
    hfk_mirror,
    mirror_grading,
    project_to_hfk,
    reduce_grading_preserving,
    symmetry_image,
    total_homology,
    validate_complex,
)
from floerforge.decomposition import Decomposition
from floerforge.exactalg import GF2, Q, SparseMatrix, rank


def G(a1, a2, m):
    return Grading.of(a1, a2, m)


def test_grading_helpers():
    g = G("3/2", "1/2", -1)
    assert g.alex == (3, 1) and g.maslov == -2
    assert symmetry_image(g) == G("-3/2", "-1/2", -5)
    assert mirror_grading(mirror_grading(g)) == g


def test_validate_examples():
    single = BifilteredComplex(GF2, {"x": G(0, 0, 0)})
    assert validate_complex(single) == []
    bad = BifilteredComplex(GF2, {"x": G(0, 0, 0), "y": G(0, 0, -2)}, {("x", "y"): 1})
    assert any("maslov drop" in p for p in validate_complex(bad))
    up = BifilteredComplex(GF2, {"x": G(0, 0, 0), "y": G(1, 0, -1)}, {("x", "y"): 1})
    assert any("filtration" in p for p in validate_complex(up))
    coset = BifilteredComplex(GF2, {"x": G(0, 0, 0), "y": G("1/2", 0, 0)})
    assert any("coset" in p for p in validate_complex(coset))
    assert validate_complex(catalog.lookup("T(2,8)").complex) == []


def test_d_squared_detected():
    gens = {"a": G(1, 1, 0), "b": G(0, 1, -1), "c": G(0, 0, -2)}
    c = BifilteredComplex(Q, gens, {("a", "b"): 1, ("b", "c"): 2})
    assert any("d^2" in p for p in validate_complex(c))


def test_json_round_trip():
    c = Decomposition.parse("B[-4][0,0] + Y[-1]^1[3/2,3/2]").realize(Q)
    again = BifilteredComplex.loads(c.dumps())
    assert again.generators == c.generators and again.diff == c.diff
    with pytest.raises(ComplexError):
        BifilteredComplex.from_json({"field": "q", "generators": [{"id": "x", "a": ["1/3", 0], "m": 0}]})


def test_homology_examples():
    c = empty_complex()
    assert total_homology(c) == {} and associated_graded_homology(c).total() == 0
    box = Decomposition.parse("B[-4][0,0]").realize(Q)
    assert associated_graded_homology(box).total() == 4
    assert total_homology(box) == {}
    t28 = catalog.lookup("T(2,8)").complex
    assert total_homology(t28) == {0: 1, -2: 1}
    zero = BifilteredComplex(GF2, {"x": G(0, 0, 0), "y": G(0, 0, 0)})
    assert associated_graded_homology(zero) == BigradedModule.from_gradings([G(0, 0, 0)] * 2)


def _dense_block_oracle(c):
    """Associated graded homology by one dense rank computation per bigrading."""
    ranks = {}
    blocks = c.blocks()
    for g, ids in blocks.items():
        below = blocks.get(Grading(g.alex, g.maslov - 2), [])
        above = blocks.get(Grading(g.alex, g.maslov + 2), [])

        def mrank(src, tgt):
            if not src or not tgt:
                return 0
            entries = {(tgt.index(t), src.index(s)): v for (s, t), v in c.diff.items()
                       if s in src and t in tgt}
            return rank(SparseMatrix(len(tgt), len(src), entries, c.field))
        r = len(ids) - mrank(ids, below) - mrank(above, ids)
        if r:
            ranks[g] = r
    return BigradedModule(ranks, c.n)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 10 ** 6), field=st.sampled_from([GF2, Q]))
def test_associated_graded_matches_oracle(seed, field):
    c, _ = random_valid_complex(seed, field)
    assert associated_graded_homology(c) == _dense_block_oracle(c)


def test_reduction_examples():
    t28 = catalog.lookup("T(2,8)").complex
    r = reduce_grading_preserving(t28)
    assert r.generators == t28.generators and r.diff == t28.diff
    pair = BifilteredComplex(Q, {"x": G(0, 0, 1), "y": G(0, 0, 0)}, {("x", "y"): 3})
    assert len(reduce_grading_preserving(pair)) == 0


def test_random_complexes_mix_filtration_levels():
    # the generator is meant to produce arrows that drop both Alexander gradings
    diagonal = 0
    for seed in range(60):
        c, _ = random_valid_complex(seed, Q)
        diagonal += any(all(x > 0 for x in c.drop(s, t)) for s, t in c.diff)
    assert diagonal > 5


def test_reduction_deterministic():
    c, _ = random_valid_complex(11, Q)
    a, b = reduce_grading_preserving(c), reduce_grading_preserving(c)
    assert a.generators == b.generators and a.diff == b.diff


def test_project_examples():
    assert project_to_hfk(BigradedModule({}, 2)) == {}
    one = BigradedModule.from_gradings([G(1, 0, 0)])
    assert project_to_hfk(one, 2) == {(2, 1): 1}
    hfk = project_to_hfk(catalog.lookup("T(2,8)").module, 2)
    assert [hfk.get((2 * a, 1 + 2 * a - 8), 0) for a in range(4, -5, -1)] == [1, 2, 2, 2, 2, 2, 2, 2, 1]
    assert sum(hfk.values()) == 16


def test_module_operations():
    m = catalog.lookup("T(2,8)").module
    assert m.mirror().mirror() == m
    assert BigradedModule.from_json(m.to_json()) == m
    v = BigradedModule.from_gradings([Grading((0,), 0)], 1).tensor_v()
    assert v.n == 2 and v.total() == 2
    assert hfk_mirror(hfk_mirror(catalog.torus_hfk(4))) == catalog.torus_hfk(4)


def test_dual_reverses_arrows():
    c = Decomposition.parse("B[-4][0,0]").realize(GF2)
    d = c.dual()
    assert {(t, s) for s, t in c.diff} == set(d.diff)
    assert validate_complex(d) == []
