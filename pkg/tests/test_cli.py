import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

import chabauty as ch
from chabauty.cli import run
from chabauty.serialize import dumps, subgroup_from_dict

FIXTURES = Path(__file__).parent / "fixtures"


def invoke(argv, capsys):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


def test_info_integer_lattice(capsys):
    code, out = invoke(["info", str(FIXTURES / "z3.json")], capsys)
    assert code == 0
    assert '"type": [0, 3]' in out
    assert '"norms": [1, 1, 1]' in out
    data = json.loads(out)
    assert data["rank"] == 3


def test_dual_command(capsys):
    code, out = invoke(["dual", str(FIXTURES / "two_z_e1.json")], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["type"] == [1, 1]
    # output re-parses under the subgroup schema
    g = subgroup_from_dict(data)
    assert ch.type_of(g) == (1, 1)


def test_fiber_dim_command(capsys):
    code, out = invoke(["fiber-dim", "3", "0", "1", "0", "3"], capsys)
    assert code == 0
    assert out.strip() == "2"


def test_dist_command(capsys):
    code, out = invoke(["dist", str(FIXTURES / "z3.json"),
                        str(FIXTURES / "z3.json")], capsys)
    assert code == 0
    assert json.loads(out)["distance"] == 0


def test_reduce2_command(capsys):
    code, out = invoke(["reduce2", str(FIXTURES / "hexagonal.json")], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["z"][0] == pytest.approx(0.5)
    assert data["z"][1] == pytest.approx(math.sqrt(3) / 2)


def test_stab_batch_preserves_order(capsys):
    code, out = invoke(["stab", str(FIXTURES / "z3.json"),
                        str(FIXTURES / "hexagonal.json")], capsys)
    # first input is not planar: the whole batch fails as a domain error
    assert code == 1
    code, out = invoke(["stab", str(FIXTURES / "hexagonal.json"),
                        str(FIXTURES / "hexagonal.json")], capsys)
    assert code == 0
    data = json.loads(out)
    assert [d["order"] for d in data] == [3, 3]


def test_suspend_command(capsys):
    code, out = invoke(["suspend", str(FIXTURES / "hexagonal.json"),
                        "--t", "1.0"], capsys)
    # hexagonal lattice has covolume sqrt(3)/2, not 1
    assert code == 1
    data = json.loads(out)
    assert data["error"]["kind"] == "NotInC1"


def test_decompose_command(capsys):
    code, out = invoke(["decompose", str(FIXTURES / "coarse_offsets.json"),
                        "--base-type", "0", "2", "--delta", "0.1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["coarse_basis"] == [[50]]
    assert data["coarse_offset_medium"][0][0] == pytest.approx(0.2)
    # the embedded fine part re-parses under the subgroup schema
    fine = subgroup_from_dict(data["fine_part"])
    assert fine.ambient_dim == 0


def test_limit_command(capsys):
    code, out = invoke(["limit", "--template", "shrink", "--n", "2",
                        "--source", "0", "2", "--delta", "0.01",
                        "--t", "64", "128", "256", "512", "1024"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["type"] == [1, 1]
    assert data["to_zero"] == [0]


def test_poset_command(capsys):
    code, out = invoke(["poset", "--n", "2"], capsys)
    assert code == 0
    data = json.loads(out)
    dims = dict(zip(map(tuple, data["types"]), data["dimensions"]))
    assert dims[(0, 2)] == 4 and dims[(1, 1)] == 2
    assert [[0, 2], [1, 1]] in data["covers"]


def test_sample_deterministic(capsys):
    code1, out1 = invoke(["sample", "--n", "3", "--type", "1", "1",
                          "--seed", "7"], capsys)
    code2, out2 = invoke(["sample", "--n", "3", "--type", "1", "1",
                          "--seed", "7"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    g = subgroup_from_dict(json.loads(out1))
    assert ch.type_of(g) == (1, 1)


def test_atlas_csv(capsys):
    code, out = invoke(["atlas", "--re-steps", "5", "--im-steps", "4",
                        "--im-max", "2.0"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "re,im,stabilizer_order"
    assert all(len(line.split(",")) == 3 for line in lines[1:])


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "result.json"
    code, _ = invoke(["info", str(FIXTURES / "z3.json"),
                      "--out", str(target)], capsys)
    assert code == 0
    assert json.loads(target.read_text())["type"] == [0, 3]


def test_params_file(tmp_path, capsys):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"radii": [1.0, 2.0],
                                  "weights": [1.0, 0.5], "grid": 0.1}))
    code, out = invoke(["dist", str(FIXTURES / "z3.json"),
                        str(FIXTURES / "z3.json"),
                        "--params", str(params)], capsys)
    assert code == 0
    assert json.loads(out)["distance"] == 0


def test_usage_error_exit_code(capsys):
    assert run(["no-such-command"]) == 2
    assert run(["info", "x.json", "--format", "csv"]) == 2


def test_domain_error_object(capsys):
    code, out = invoke(["reduce2", str(FIXTURES / "z3.json")], capsys)
    assert code == 1
    data = json.loads(out)
    assert data["error"]["kind"] == "WrongAmbientDim"


def test_missing_input_file(capsys):
    code, out = invoke(["info", "does-not-exist.json"], capsys)
    assert code == 1
    assert json.loads(out)["error"]["kind"] == "FileNotFoundError"


def test_float_serialization_rules():
    assert dumps(float("inf")) == '"inf"'
    assert dumps(ch.INDETERMINATE) == '"indeterminate"'
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps({"a": [1, 2.5]}) == '{"a": [1, 2.5]}'


def test_cli_subprocess_entry():
    out = subprocess.run(
        [sys.executable, "-m", "chabauty.cli", "fiber-dim",
         "3", "0", "1", "0", "2"],
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "1"
