import dataclasses
import json
import shutil

import pytest

from floerforge import catalog
from floerforge.complexes import BigradedModule, Grading, hfk_mirror, project_to_hfk
from floerforge.constraints import FAIL
from floerforge.khovanov import dowlin_bound, reduced_rank_f2


def test_selfcheck_is_clean():
    lines = catalog.selfcheck_catalog()
    assert len(lines) > 200
    assert [l.to_json() for l in lines if l.verdict == FAIL] == []


def test_corrupted_maslov_is_caught():
    e = catalog.lookup("T(2,8)")
    ranks = dict(e.module.ranks)
    g = next(g for g in ranks if g.alex == (4, 4))
    ranks[Grading(g.alex, g.maslov - 2)] = ranks.pop(g)
    bad = dataclasses.replace(e, module=BigradedModule(ranks, 2), complex=None)
    fails = [l for l in catalog.check_entry(bad) if l.verdict == FAIL]
    assert any(l.check == "symmetry" and "(2, 2; 0)" in l.witness for l in fails)
    assert any(l.check == "module-hfk" for l in fails)


@pytest.mark.parametrize("k", [3, 4, 8])
def test_mirror_pairs(k):
    pos, neg = catalog.lookup(f"T(2,{k})"), catalog.lookup(f"T(2,-{k})")
    assert hfk_mirror(pos.hfk) == neg.hfk
    if pos.n == 2:
        assert pos.module.mirror() == neg.module
        assert neg.lk == -pos.lk


def test_projection_matches_stored_hfk():
    for e in catalog.all_entries():
        if e.module is not None and e.hfk is not None:
            assert project_to_hfk(e.module, e.n) == e.hfk, e.id


def test_torus_hfk_formula():
    for n in range(1, 6):
        assert catalog.lookup(f"T(2,{2 * n})").hfk == catalog.torus_hfk(n)
        assert sum(catalog.torus_hfk(n).values()) == 4 * n


def test_unknown_id():
    with pytest.raises(catalog.CatalogError):
        catalog.lookup("T(2,12)")


def test_ambiguous_entry_keeps_both_candidates():
    e = catalog.lookup("T(2,3)_{2,0}")
    assert e.status.startswith("ambiguous") and len(e.hfk_candidates) == 2
    json.dumps(e.to_json())


def test_braid_axis_flags():
    from floerforge.constraints import check_braid_axis
    for name, want in [("T(2,8)", True), ("T(2,2)", True), ("unlink-2", False)]:
        e = catalog.lookup(name)
        assert check_braid_axis(e.module, e.components, 0).data["braid_axis"] is want


def test_dowlin_bound_is_sharp_for_t28():
    e = catalog.lookup("T(2,8)")
    assert dowlin_bound(reduced_rank_f2(e.kh), 2) == sum(e.hfk.values()) == 16


def test_assets_override(tmp_path, monkeypatch):
    for f in catalog.assets_dir().iterdir():
        shutil.copy(f, tmp_path / f.name)
    data = json.loads((tmp_path / "catalog.json").read_text())
    data["links"] = [item for item in data["links"] if item["id"] in ("unknot", "T(2,3)")]
    (tmp_path / "catalog.json").write_text(json.dumps(data))
    monkeypatch.setenv("FLOERFORGE_ASSETS", str(tmp_path))
    assert catalog.list_ids() == ["unknot", "T(2,3)"]
    with pytest.raises(catalog.CatalogError):
        catalog.lookup("T(2,8)")
    data["schema"] = 2
    other = tmp_path / "v2"
    other.mkdir()
    (other / "catalog.json").write_text(json.dumps(data))
    monkeypatch.setenv("FLOERFORGE_ASSETS", str(other))
    with pytest.raises(catalog.CatalogError):
        catalog.list_ids()
