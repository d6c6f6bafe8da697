import json
import os
import sys

MODULE_DIR = os.environ.get("CATCOV_MODULE_DIR")
if MODULE_DIR:
    sys.path.insert(0, MODULE_DIR)

import _catcov  # noqa: E402

FIXTURES = os.environ.get(
    "CATCOV_FIXTURE_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures")
)


def fixture(name):
    return os.path.join(FIXTURES, name)


def load(name):
    with open(fixture(name)) as f:
        return _catcov.Category.from_json(f.read())


def test_category_roundtrip():
    k2 = load("k2.json")
    assert k2.num_objects == 2
    assert k2.num_morphisms == 2
    assert k2.is_connected()
    assert k2.object_name(0) == "x"
    again = _catcov.Category.from_json(k2.to_json())
    assert again.num_morphisms == 2
    assert again.dot().startswith("digraph")


def test_pi1():
    report = json.loads(_catcov.pi1(load("k2.json"), "x0"))
    assert report["abelian"] == {"rank": 1, "torsion": []}
    assert report["tree"] == ["alpha"]


def test_smash():
    result = json.loads(_catcov.smash(fixture("k2_z2_grading.json"), "o"))
    assert len(result["total"]["objects"]) == 4
    assert result["galois"] is True


def test_universal_ball():
    ball = json.loads(_catcov.universal_ball(load("k2.json"), "x0", 2))
    assert len(ball["objects"]) == 10
    assert len(ball["morphisms"]) == 9
    assert ball["base_point"] == "x0"


def test_cli_passthrough():
    code, out, err = _catcov.run_cli(["pi1", fixture("idem.json"), "--base", "o"])
    assert code == 0
    assert json.loads(out)["abelian"]["rank"] == 0

    code, _, _ = _catcov.run_cli(["validate", fixture("missing_composite.json")])
    assert code == 2


def test_errors_surface():
    try:
        _catcov.pi1(load("k2.json"), "nope")
    except _catcov.CatError as e:
        assert "NoSuchObject" in str(e)
    else:
        raise AssertionError("expected CatError")
