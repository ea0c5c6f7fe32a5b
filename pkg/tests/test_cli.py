import json

import pytest

from desconf.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_count_json(capsys):
    status, out, _ = run(capsys, "count", "--quantity", "TOTAL_PLANAR", "--q", "3")
    assert status == 0 and json.loads(out)["closed_form"] == "234"


def test_count_tsv_matrix(capsys):
    status, out, _ = run(capsys, "count", "--quantity", "ALL", "--qs", "3", "4", "--format", "tsv")
    lines = out.strip().splitlines()
    assert status == 0 and len(lines) == 1 + 7 * 2
    assert "THETA_PLANAR\t4\t9600" in lines


def test_oracle_agrees(capsys):
    status, out, _ = run(capsys, "oracle", "--quantity", "TOTAL_SPATIAL", "--q", "2", "--jobs", "1")
    doc = json.loads(out)
    assert status == 0 and doc["agree"] and doc["brute_force"] == "168"


def test_oracle_naive_disagrees(capsys):
    status, out, _ = run(capsys, "oracle", "--quantity", "NAIVE_PLANAR_THROUGH_POINT", "--q", "3",
                         "--through-point", "0,0,1", "--jobs", "1")
    doc = json.loads(out)
    assert status == 1 and doc["closed_form"] == "144" and doc["brute_force"] == "180"


def test_scale_limit_exit_code(capsys, tmp_path):
    status, _, err = run(capsys, "oracle", "--quantity", "TOTAL_PLANAR", "--q", "5")
    assert status == 2 and json.loads(err)["error"] == "ScaleLimit"
    limits = tmp_path / "limits"
    limits.write_text("compressors=5\n")
    status, out, _ = run(capsys, "oracle", "--quantity", "P5_CHOICES", "--q", "5", "--limits", str(limits))
    assert status == 0 and json.loads(out)["brute_force"] == "51"


def test_bad_field_exit_code(capsys):
    status, _, err = run(capsys, "count", "--quantity", "THETA_PLANAR", "--q", "6")
    assert status == 2
    status, _, err = run(capsys, "verify", "--suite", "desargues-theorem", "--field-poly", "2^2/1,0,0")
    assert status == 2 and json.loads(err)["error"] == "ReducibleModulus"


def test_deterministic_output(capsys):
    argv = ("verify", "--suite", "desargues-theorem", "--q", "4", "--samples", "300", "--seed", "7", "--no-timing")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second and json.loads(first)["passed"]


def test_section_inspect_lift_roundtrip(capsys, tmp_path):
    comp = "0,0,0,1;1,0,0,1;0,1,0,1;0,0,1,1;1,1,1,1"
    status, out, _ = run(capsys, "section", "--q", "5", "--compressor", comp)
    assert status == 0
    doc = json.loads(out)
    path = tmp_path / "d.json"
    path.write_text(out)
    status, out, _ = run(capsys, "inspect", "--config", str(path))
    info = json.loads(out)
    assert status == 0 and info["self_conjugate"] == doc["self_conjugate"]
    assert len(info["blockline_structure"]) == 10
    v = doc["points"]["12"]
    status, out, _ = run(capsys, "lift", "--config", str(path), "--vertex", "12", "--apex", f"{v},1;0,0,0,1")
    lifted = json.loads(out)["compressors"]
    assert status == 0 and len(lifted) == 2
    for S in lifted:
        status, again, _ = run(capsys, "section", "--q", "5", "--compressor", ";".join(S["points"]))
        assert json.loads(again)["points"] == doc["points"]


def test_section_through_compressor_point(capsys):
    status, _, err = run(capsys, "section", "--q", "3", "--compressor", "1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1;1,1,1,1")
    assert status == 2 and json.loads(err)["error"] == "CompressorMeetsHyperplane"


def test_twoblock(capsys, tmp_path):
    out_path = tmp_path / "tb.json"
    status, _, _ = run(capsys, "twoblock", "--no-timing", "-o", str(out_path))
    doc = json.loads(out_path.read_text())
    assert status == 0 and doc["hyperplane"] == 15 and doc["spatial_desargues"] == 168 and doc["other"] == 0


@pytest.mark.parametrize("suite,q", [("lift-uniqueness", 3), ("blockline-injectivity", 3), ("sc-bounds", 4), ("identities", 3)])
def test_verify_suites(capsys, suite, q):
    status, out, _ = run(capsys, "verify", "--suite", suite, "--q", str(q))
    assert status == 0 and json.loads(out)["passed"]
