import json

import pytest

from k3tower.cli import _json_safe, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def test_cone(capsys):
    code, doc = run_json(capsys, "cone", "--ell", "3", "--n", "1")
    assert code == 0
    assert doc["points"] == [[0, 0, 1], [1, 0, 0], [1, 1, 2], [1, 2, 2]]
    assert doc["size_check"] and doc["version"] and "timing" in doc
    assert doc["config"]["ell"] == 3
    code, doc = run_json(capsys, "cone", "--ell", "5", "--n", "1", "--method", "brute")
    assert doc["size"] == 6


def test_cone_rejects_ell_two(capsys):
    code, doc = run_json(capsys, "cone", "--ell", "2", "--n", "1")
    assert code == 2 and doc["error"] == "InvalidEll"


def test_cone_size_guard(capsys):
    code, doc = run_json(capsys, "cone", "--ell", "7", "--n", "3", "--method", "brute")
    assert code == 3 and doc["error"] == "TooLarge"


def test_orbits_default(capsys):
    code, doc = run_json(capsys, "orbits", "--ell", "3", "--n", "2")
    assert code == 0 and doc["transitive"] is True and doc["orbit_sizes"] == [12]
    assert doc["witness"] is None


def test_orbits_only_t(capsys, tmp_path):
    path = write(tmp_path, "only-t.json", {"ell": 3, "n": 1, "generators": [[[1, 0, 0], [1, 1, 0], [2, 4, 1]]]})
    code, doc = run_json(capsys, "orbits", "--generators", path)
    assert code == 0 and doc["orbit_count"] == 2 and not doc["transitive"]
    assert sorted(doc["witness"]) == [[0, 0, 1], [1, 0, 0]]


@pytest.mark.parametrize(
    "doc",
    [
        {"generators": [[[1, 0], [0, 1, 0], [0, 0, 1]]]},
        {"generators": [[[1, 1, 0], [0, 1, 0], [0, 0, 1]]]},  # not a similitude
        {"generators": []},
        {"ell": 5, "n": 1, "generators": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]},  # disagrees with --ell 3
        "not json",
    ],
)
def test_orbits_config_errors(capsys, tmp_path, doc):
    path = write(tmp_path, "gens.json", doc)
    code, out = run_json(capsys, "orbits", "--ell", "3", "--n", "1", "--generators", path)
    assert code == 2 and out["error"] == "ConfigError"


@pytest.mark.parametrize("p, n_max, cls", [("3", "2", "optimal"), ("7", "2", "good"), ("5", "1", "unknown")])
def test_tower(capsys, p, n_max, cls):
    code, doc = run_json(capsys, "tower", "--ell", "3", "--p", p, "--n-max", n_max)
    assert code == 0 and doc["classification"] == cls
    assert len(doc["levels"]) == int(n_max)
    assert (doc["missing_certificate"] is None) == (cls != "unknown")


def test_tower_branch_file(capsys, tmp_path):
    path = write(
        tmp_path,
        "branches.json",
        [{"label": "inf", "kind": "MUM"}] + [{"label": f"b{i}", "kind": "involution"} for i in range(4)],
    )
    code, doc = run_json(capsys, "tower", "--ell", "3", "--p", "7", "--branches", path, "--no-timing")
    assert code == 0
    _, default = run_json(capsys, "tower", "--ell", "3", "--p", "7", "--no-timing")
    assert [lv["genus_exact"] for lv in doc["levels"]] == [lv["genus_exact"] for lv in default["levels"]]
    bad = write(tmp_path, "bad.json", [{"label": "x", "kind": "weird"}])
    code, doc = run_json(capsys, "tower", "--ell", "3", "--p", "7", "--branches", bad)
    assert code == 2


def test_tower_csv(capsys):
    code, out = run(capsys, "tower", "--ell", "3", "--p", "7", "--n-max", "2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("n,degree,R0,R,genus_exact")
    assert lines[1].split(",")[:5] == ["1", "4", "2", "4", "0"]
    assert len(lines) == 3


def test_fermat(capsys):
    code, doc = run_json(capsys, "fermat", "--p", "3")
    assert code == 0 and doc["count"] == 280 and doc["epsilon"] == 1 and doc["holds"]
    code, doc = run_json(capsys, "fermat", "--p", "7")
    assert doc["count"] == 3480
    code, doc = run_json(capsys, "fermat", "--p", "2")
    assert code == 2 and doc["error"] == "NotOdd"


def test_byte_identical_without_timing(capsys, tmp_path):
    outs = []
    for i in range(2):
        target = tmp_path / f"r{i}.json"
        assert main(["tower", "--ell", "5", "--p", "7", "--n-max", "2", "--no-timing", "-o", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    _, a = run_json(capsys, "orbits", "--ell", "5", "--n", "2")
    _, b = run_json(capsys, "orbits", "--ell", "5", "--n", "2")
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_big_integers_serialized_as_strings():
    assert _json_safe({"x": [2**53, 2**53 - 1, True]}) == {"x": [str(2**53), 2**53 - 1, True]}
