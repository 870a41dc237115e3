import pytest
from hypothesis import given, settings, strategies as st

from floerforge import catalog
from floerforge.constraints import FAIL, PASS
from floerforge.khovanov import (
    KNOT_I_MINUS_J,
    KhovanovError,
    KhTable,
    batson_seed_check,
    dowlin_bound,
    format_graded,
    i_minus_j,
    kh_tensor,
    kh_thin_s_chi,
    lee_constraint,
    lee_data,
    reduced_rank_f2,
    total_rank,
    uct_ranks,
    unknot_table,
)


def _uct_oracle(t, p):
    """Rank over F_p: free part plus one for each p-power torsion summand in
    H^{i,j} and in H^{i+1,j}."""
    out = {}
    for (i, j), (free, tors) in t.entries.items():
        out[(i, j)] = out.get((i, j), 0) + free
        k = sum(1 for q in tors if q % p == 0)
        if k:
            out[(i, j)] = out.get((i, j), 0) + k
            out[(i - 1, j)] = out.get((i - 1, j), 0) + k
    return {g: r for g, r in out.items() if r}


@pytest.mark.parametrize("name,gf2,q,tors", [("T(2,8)", 16, 10, 3), ("T(2,10)", 20, 12, 4)])
def test_torus_tables(name, gf2, q, tors):
    t = catalog.lookup(name).kh
    assert total_rank(t, "gf2") == gf2 and total_rank(t, "q") == q
    assert t.torsion_count() == tors
    assert uct_ranks(t, "gf2") == _uct_oracle(t, 2)
    assert reduced_rank_f2(t) == gf2 // 2


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(-4, 4), st.integers(-5, 5).map(lambda j: 2 * j)),
                       st.tuples(st.integers(0, 3), st.lists(st.sampled_from([2, 4, 3]), max_size=2)),
                       max_size=6))
def test_uct_matches_oracle(entries):
    t = KhTable({g: (f, tuple(ts)) for g, (f, ts) in entries.items()})
    assert uct_ranks(t, "gf2") == _uct_oracle(t, 2)
    assert total_rank(t, "q") == sum(f for f, _ in t.entries.values())


def test_table_validation():
    with pytest.raises(KhovanovError):
        KhTable({(0, 1): (1, (6,))})
    with pytest.raises(KhovanovError):
        KhTable({(0, 1): (1, ()), (0, 0): (1, ())})
    with pytest.raises(KhovanovError):
        KhTable.from_json({"entries": [{"i": 0}]})
    t = catalog.lookup("T(2,8)").kh
    assert KhTable.from_json(t.to_json()) == t


def test_reduced_rank_needs_even_total():
    with pytest.raises(KhovanovError):
        reduced_rank_f2(KhTable({(0, 1): (1, ())}))
    assert reduced_rank_f2(unknot_table()) == 1


def test_tensor_and_display():
    unknot = KNOT_I_MINUS_J["unknot"]
    assert kh_tensor(unknot, {0: 1}) == unknot
    for a in KNOT_I_MINUS_J.values():
        for b in KNOT_I_MINUS_J.values():
            assert sum(kh_tensor(a, b).values()) == sum(a.values()) * sum(b.values())
    assert format_graded(KNOT_I_MINUS_J["figure-eight"]) == "Q_-3 + Q_-1 + Q^2_0 + Q_1 + Q_3"
    assert format_graded({}) == "0"
    assert i_minus_j({(0, 1): 1, (1, 2): 2}) == {-1: 3}


def test_batson_seed():
    unknot = KNOT_I_MINUS_J["unknot"]
    split = kh_tensor(unknot, unknot)
    assert batson_seed_check(split, split, 0).verdict == PASS
    link = i_minus_j(uct_ranks(catalog.lookup("T(2,8)").kh, "q"))
    rep = batson_seed_check(link, kh_tensor(KNOT_I_MINUS_J["T(2,3)"], unknot), 4)
    assert rep.verdict == FAIL and rep.data["violations"]


def test_lee():
    u = unknot_table()
    assert lee_data(u).gradings == (0,) and lee_data(u).n_components == 1
    assert lee_constraint(u, 1).verdict == PASS
    assert lee_constraint(u, 2).verdict == FAIL
    t = catalog.lookup("T(2,8)").kh
    assert lee_data(t).gradings == (0, 8) and lee_data(t).linking == 4
    assert lee_constraint(t, 2, 4).verdict == PASS
    assert lee_constraint(t, 2, 3).verdict == FAIL


def test_dowlin():
    assert dowlin_bound(1, 1) == 1
    assert dowlin_bound(8, 2) == 16 == sum(catalog.lookup("T(2,8)").hfk.values())


def test_thinness():
    d = kh_thin_s_chi(unknot_table())
    assert d.thin and d.s == 0 and d.chi_bound == 1
    wide = KhTable({(0, 1): (1, ()), (0, -1): (1, ()), (2, 9): (1, ())})
    d = kh_thin_s_chi(wide)
    assert not d.thin and d.s is None
    d = kh_thin_s_chi(catalog.lookup("T(2,8)").kh)
    assert d.thin and d.chi_bound == -6
