import io
import json
from pathlib import Path

import pytest

from floerforge import cli

DEMOS = Path(__file__).resolve().parent.parent / "demos"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--json")
    payload = json.loads(out or err)
    assert payload["schema"] == "floerforge/1"
    return code, payload


def test_conway_from_file():
    code, p = call_json("conway", "--complex", str(DEMOS / "b6pair.json"))
    assert code == 0 and p["result"]["lk"] == 25
    assert p["result"]["conway"].startswith("u^{13} + 10*u^{11}")
    code, p = call_json("conway", "--alexander", "t^{1/2}-t^{-1/2}", "--mode", "strict-hoste")
    assert code == 0


def test_validate(tmp_path):
    code, p = call_json("validate", str(DEMOS / "empty.json"))
    assert code == 0 and p["result"]["valid"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"generators": [{"id": "x", "gr": [0, 0, 0]}, {"id": "y", "gr": [0, 0, -4]}],
                               "diff": [{"from": "x", "to": "y"}]}))
    code, p = call_json("validate", str(bad))
    assert code == 1 and not p["result"]["valid"]


def test_input_errors(tmp_path):
    code, p = call_json("validate", str(tmp_path / "missing.json"))
    assert code == 2 and p["error"]["type"] == "FileNotFoundError"
    code, p = call_json("gauntlet", str(DEMOS / "b6pair.json"))
    assert code == 2 and "generators" in p["error"]["message"]
    code, p = call_json("validate", "--no-such-flag", "x")
    assert code == 2 and p["error"]["type"] == "usage"
    code, p = call_json("catalog", "show", "T(2,99)")
    assert code == 2
    code, p = call_json("botany", "--window", "1", "--budget", "99")
    assert code == 2


def test_internal_error_exit(monkeypatch):
    def boom(args):
        raise RuntimeError("broken invariant")
    monkeypatch.setitem(cli.COMMANDS, "validate", boom)
    code, p = call_json("validate", str(DEMOS / "empty.json"))
    assert code == 3 and p["error"]["type"] == "internal" and "bug" in p["error"]


def test_detect_and_threads():
    code, p = call_json("detect", "t28")
    assert code == 0 and p["result"]["reproduced"]
    assert p["result"]["survivors"] == ["B[-2][1,1] + B[-4][0,0] + B[-6][-1,-1] + Y[-1]^1[3/2,3/2] + Y[0]^0[2,2]"]
    assert call("detect", "t28", "--threads", "4")[1] == call("detect", "t28")[1]
    assert call("detect", "t28", "--threads", "0")[0] == 2


def test_catalog_and_kh():
    code, p = call_json("catalog", "selfcheck")
    assert code == 0
    code, out, _ = call("catalog", "list")
    assert "T(2,8)" in out.split()
    code, p = call_json("kh", "T(2,8)", "--split", "T(2,3),unknot", "--lk", "4")
    assert code == 0 and p["result"]["batson_seed"]["verdict"] == "fail"
    assert p["result"]["s"] == 7 and p["result"]["dowlin"] == 16


def test_botany_thin():
    code, p = call_json("botany", "--window", "3/2", "--budget", "4", "--lk", "1")
    assert code == 0
    code, out, _ = call("botany", "--window", "3/2", "--budget", "4", "--lk", "1")
    assert out.splitlines()[0] == "1060 thin candidates, 2 survivors"


@pytest.mark.parametrize("name", ["homology", "decompose", "polytope", "gauntlet"])
def test_module_commands_on_demo(name, tmp_path):
    from floerforge import catalog
    f = tmp_path / "t28.json"
    f.write_text(catalog.lookup("T(2,8)").complex.dumps())
    args = [name, str(f)] + (["--lk", "4", "--unknotted", "yes,yes"] if name == "gauntlet" else [])
    code, p = call_json(*args)
    assert code == 0, p
