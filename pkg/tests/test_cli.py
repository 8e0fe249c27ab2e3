import json
import subprocess
import sys

import numpy as np
import pytest

from unital import cli
from unital.channels import depolarizing_channel, reset_channel, werner_holevo_channel
from unital.covariant import rho_minus
from unital.io import channel_to_json, matrix_to_json


def run_json(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in {
        "wh": channel_to_json(werner_holevo_channel(3)),
        "depol": channel_to_json(depolarizing_channel(2)),
        "reset": channel_to_json(reset_channel(2)),
        "b": matrix_to_json(np.eye(3)),
        "rho": matrix_to_json(rho_minus(3)),
        "nonsquare": {"d": 2, "kraus": [{"rows": 2, "cols": 3, "re": [1, 0, 0, 0, 1, 0], "im": [0] * 6}]},
        "short": {"rows": 2, "cols": 2, "re": [1, 0, 0], "im": [0, 0, 0]},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
    bad = tmp_path / "garbage.json"
    bad.write_text("{not json")
    paths["garbage"] = str(bad)
    return paths


def test_negativity_example(capsys):
    code, res = run_json(["covariant", "negativity", "--d", "3", "--epsilon", "0.6667"], capsys)
    assert code == 0 and res["status"] == "ok"
    assert res["outputs"]["negativity"] == pytest.approx(0.5, abs=1e-12)
    assert res["outputs"]["clamped"] is True


def test_quaternion_example(capsys):
    code, res = run_json(["birkhoff", "quaternion", "--d", "3"], capsys)
    out = res["outputs"]
    assert code == 0 and out["hermitian"] and out["unitary"]
    assert out["y"] == pytest.approx(-7 / 9, abs=1e-12)


def test_check_and_choi(files, capsys):
    code, res = run_json(["check", files["wh"]], capsys)
    assert code == 0 and res["outputs"] == {"cp": True, "d": 3, "n_kraus": 3, "tp": True, "unital": True}
    code, res = run_json(["check", files["reset"]], capsys)
    assert res["outputs"]["unital"] is False
    code, res = run_json(["choi", files["depol"]], capsys)
    assert code == 0 and np.allclose(res["outputs"]["eigenvalues"], 0.25)


def test_malformed_files_exit_3(files, capsys):
    for argv in (["check", files["nonsquare"]], ["check", files["garbage"]], ["witness", "--b", files["short"]]):
        code, res = run_json(argv, capsys)
        assert code == 3 and res["status"] == "error"


def test_unknown_subcommand_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nosuch"])
    assert exc.value.code == 2


def test_out_of_range_exit_4(files, capsys):
    for argv in (
        ["covariant", "coords", "--d", "3", "--epsilon", "0.9"],
        ["covariant", "coords", "--d", "3", "--q0", "0.5", "--q1", "0.7", "--q2", "0"],
        ["birkhoff", "quaternion", "--d", "7"],
        ["birkhoff", "depolarizing", "--d", "4", "--D", "2", "--epsilon", "0.1"],
        ["decompose", "affine", files["reset"], "--seed", "0"],
        ["figure", "two-copy", "--d", "5", "--out", "x.csv"],
    ):
        code, res = run_json(argv, capsys)
        assert code == 4, argv


def test_seed_required(files):
    for argv in (["decompose", "affine", files["depol"]], ["optimize", "--objective", "tr-u-ubar-t2", "--d", "3"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2


def test_decompose(files, capsys):
    code, res = run_json(["decompose", "affine", files["wh"], "--seed", "1"], capsys)
    out = res["outputs"]
    assert code == 0 and out["residual"] < 1e-8 and abs(out["coefficient_sum"] - 1) < 1e-10
    assert out["min_coefficient"] < 0
    code, res = run_json(["decompose", "hs", files["depol"], "--seed", "1"], capsys)
    assert code == 0 and res["outputs"]["residual"] < 1e-10 and res["outputs"]["unitary"]


def test_extremal(files, capsys):
    code, res = run_json(["extremal", "--appendix-b"], capsys)
    out = res["outputs"]
    assert out["extremal_in_unital"] and not out["extremal_in_all"]
    code, res = run_json(["extremal", files["wh"]], capsys)
    assert code == 0 and res["outputs"]["n_kraus"] == 3


def test_witness(files, capsys):
    code, res = run_json(["witness", "--b", files["b"], "--rho", files["rho"]], capsys)
    out = res["outputs"]
    assert out["w"] == pytest.approx(1 / 3) and out["value"] == pytest.approx(-2 / 3) and out["detects"]


def test_covariant_q_inputs(capsys):
    code, res = run_json(["covariant", "membership", "--d", "4", "--q0", "0", "--q1", "1", "--q2", "0"], capsys)
    assert res["outputs"]["in_U"] is True
    code, res = run_json(["covariant", "negativity", "--d", "3", "--q0", "0", "--q1", "0.8", "--q2", "0.2"], capsys)
    assert res["outputs"]["negativity"] == pytest.approx(0.2)


def test_birkhoff_commands(capsys):
    code, res = run_json(["birkhoff", "two-copy", "--epsilon", "0.3"], capsys)
    assert res["outputs"]["two_copies_in_U"] and not res["outputs"]["single_copy_in_U"]
    code, res = run_json(["birkhoff", "two-copy", "--epsilon", "0.35"], capsys)
    assert not res["outputs"]["two_copies_in_U"]
    code, res = run_json(["birkhoff", "depolarizing", "--d", "3", "--D", "2", "--epsilon", "0.4"], capsys)
    assert res["outputs"]["y"] == pytest.approx(-1 / 3 - 0.4) and res["outputs"]["certified_in_U"]


def test_optimize_command(capsys):
    argv = ["optimize", "--objective", "tr-u-ubar-t2", "--d", "3", "--D", "2", "--restarts", "3", "--seed", "7"]
    code, res = run_json(argv, capsys)
    out = res["outputs"]
    assert code == 0 and set(out) >= {"value", "residuals", "restarts"}
    assert out["value"] == pytest.approx(-7 / 9, abs=1e-6)
    argv = ["optimize", "--objective", "tr-a-abar", "--d", "3", "--sigma", "2,1,0", "--restarts", "3", "--seed", "0"]
    code, res = run_json(argv, capsys)
    assert res["outputs"]["value"] == pytest.approx(res["outputs"]["closed_form"], abs=1e-6)


@pytest.mark.parametrize("kind,d,header", [
    ("covariant", 3, "series,x=<F>,y=<Fhat>"),
    ("covariant", 4, "series,x=<F>,y=<Fhat>"),
    ("negativity", 3, "series,x=<F>,y=<Fhat> (family rows: negativity)"),
    ("two-copy", 3, "series,x=<F>,y=<F12>"),
])
def test_figures(tmp_path, capsys, kind, d, header):
    out = tmp_path / "f.csv"
    code, res = run_json(["figure", kind, "--d", str(d), "--out", str(out)], capsys)
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == header and len(lines) == res["outputs"]["rows"] + 1
    for line in lines[1:]:
        series, x, y = line.rsplit(",", 2)
        float(x), float(y)


def test_byte_identical_runs(files):
    argvs = [
        ["optimize", "--objective", "tr-u-ubar-t2", "--d", "3", "--D", "2", "--restarts", "2", "--seed", "7"],
        ["decompose", "affine", files["depol"], "--seed", "3"],
    ]
    for argv in argvs:
        outs = [
            subprocess.run([sys.executable, "-m", "unital", *argv], capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        assert outs[0] == outs[1]


def test_every_subcommand_has_help():
    parser = cli.build_parser()
    sub = next(a for a in parser._actions if a.__class__.__name__ == "_SubParsersAction")
    for name, choice in sub.choices.items():
        helptext = next(a.help for a in sub._choices_actions if a.dest == name)
        assert helptext and len(helptext) > 10
        assert choice.format_help()
