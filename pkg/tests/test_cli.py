import json
import subprocess
import sys

import jsonschema
import pytest

from glblocks.cli import ATLAS_SCHEMA, EXIT_INVALID, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_atlas_lists_six_blocks(capsys):
    code, out, _ = run(capsys, "atlas", "--group", "GL:2", "--q", "3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["count"] == 6 and len(doc["blocks"]) == 6
    jsonschema.validate(doc, ATLAS_SCHEMA)


def test_atlas_is_byte_identical_across_runs(capsys):
    argv = ("atlas", "--group", "GL:1xRes:1,2:GL:1", "--p", "3", "--a", "1")
    first = run(capsys, *argv)[1]
    assert first == run(capsys, *argv)[1]
    jsonschema.validate(json.loads(first), ATLAS_SCHEMA)


def test_atlas_ell_prime_kind_schema(capsys):
    code, out, _ = run(capsys, "atlas", "--group", "GL:2", "--q", "5", "--K", "ell-prime", "--ell", "3")
    assert code == EXIT_OK
    jsonschema.validate(json.loads(out), ATLAS_SCHEMA)


def test_fuse_single_class(capsys):
    code, out, _ = run(capsys, "fuse", "--group", "GL:2", "--q", "3", "--ell", "2")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["sizes"] == [6]


def test_transfer_base_change_condition(capsys):
    code, out, _ = run(
        capsys, "transfer", "--hom", "bc:e=2,f=1", "--param", "trivial", "--group", "GL:2", "--q", "3"
    )
    doc = json.loads(out)
    assert code == EXIT_OK and doc["condition"]["holds"] is True
    assert doc["target_group"] == "Res:2,1:GL:2"


def test_transfer_reports_failing_condition(capsys):
    code, out, _ = run(capsys, "transfer", "--hom", "bc:e=1,f=2", "--group", "GL:2", "--q", "3")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["condition"]["holds"] is False
    assert doc["condition"]["source_dim"] == 4 and doc["condition"]["target_dim"] == 8


def test_param_forms_agree(capsys, tmp_path):
    compact = run(capsys, "factorize", "--group", "GL:2", "--q", "5", "--param", "2/16*1")[1]
    inline = json.dumps(
        {"pairs": [{"factor": 0, "orbit": {"rep": {"level": 2, "residue": "8"}}, "mult": 1}]}
    )
    assert run(capsys, "factorize", "--group", "GL:2", "--q", "5", "--param", inline)[1] == compact
    path = tmp_path / "param.json"
    path.write_text(inline)
    assert run(capsys, "factorize", "--group", "GL:2", "--q", "5", "--param", str(path))[1] == compact
    doc = json.loads(compact)
    assert doc["G_phi"] == "Res:1,2:GL:1" and doc["pushforward_matches"]


def test_plan_defaults_to_factorization(capsys):
    code, out, _ = run(capsys, "plan", "--group", "GL:2", "--q", "5", "--param", "2/8*1")
    tags = [s["tag"] for s in json.loads(out)["steps"]]
    assert code == EXIT_OK and tags == ["UnramifiedAutInd", "UnramifiedTwist", "HeckeSimpleType"]


def test_plan_with_failing_condition_is_invalid(capsys):
    code, _, err = run(capsys, "plan", "--group", "GL:2", "--q", "5", "--hom", "bc:f=2")
    assert code == EXIT_INVALID and "centralizer" in err


def test_oracle_and_table_format(capsys, tmp_path):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "oracle", "--group", "GL:3", "--q", "4", "--format", "table", "--out", str(target))
    assert code == EXIT_OK and out == ""
    assert "agree       true" in target.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ("atlas", "--group", "GL:2", "--q", "6"),
        ("atlas", "--group", "SL:2", "--q", "3"),
        ("atlas", "--group", "Res:2,1:GL:2", "--q", "4"),
        ("fuse", "--group", "GL:2", "--q", "3", "--ell", "3"),
        ("atlas", "--group", "GL:2", "--q", "3", "--K", "ell-prime"),
        ("factorize", "--group", "GL:2", "--q", "3", "--param", "1/0*1"),
        ("oracle", "--group", "GL:8", "--q", "2"),
    ],
)
def test_validation_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INVALID and err.startswith("glblocks:")


@pytest.mark.parametrize("argv", [(), ("bogus",), ("atlas",), ("atlas", "--group", "GL:2", "--format", "xml")])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "glblocks", "atlas", "--group", "GL:1", "--q", "5"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 4
