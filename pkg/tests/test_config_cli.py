import json

import pytest

from hspsim.cli import main
from hspsim.config import (
    config_from_dict,
    config_to_dict,
    parse_config,
    serialize_config,
)
from hspsim.errors import ConfigError, ResourceCapError
from hspsim.experiments import run_experiment


def test_parse_shor_config_example():
    cfg = parse_config(
        '{"experiment":"shor","N":15,"a":7,"Q":16,"transversal":{"kind":"shor"},"seed":1}'
    )
    assert cfg.modulus == 15 and cfg.base == 7 and cfg.big_q == 16
    assert cfg.transversal.kind == "shor"
    assert cfg.seed == 1


def test_parse_rejects_non_coprime_base():
    with pytest.raises(ConfigError, match="'a'"):
        parse_config('{"experiment":"shor","N":15,"a":5,"Q":16}')


def test_parse_simon_config_with_coordinate_generators():
    cfg = parse_config(
        '{"experiment":"simon","group":"Z2^3","hidden_generators":[[1,0,1]]}'
    )
    assert cfg.group == "Z2^3"
    assert cfg.hidden_generators == ((1, 0, 1),)


def test_parse_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown field 'surprise'"):
        parse_config('{"experiment":"irreps","group":"Z4","surprise":1}')
    with pytest.raises(ConfigError, match="transversal.verbose"):
        parse_config(
            '{"experiment":"shor","N":15,"a":7,"Q":16,'
            '"transversal":{"kind":"shor","verbose":true}}'
        )


def test_parse_rejects_missing_and_malformed_fields():
    with pytest.raises(ConfigError, match="missing field 'Q'"):
        parse_config('{"experiment":"shor","N":15,"a":7}')
    with pytest.raises(ConfigError, match="experiment"):
        parse_config('{"experiment":"warp"}')
    with pytest.raises(ConfigError, match="JSON"):
        parse_config("{not json")
    with pytest.raises(ConfigError, match="'group'"):
        parse_config('{"experiment":"irreps","group":"K9"}')
    with pytest.raises(ConfigError, match="power of two"):
        parse_config('{"experiment":"shor","N":15,"a":7,"Q":12}')
    with pytest.raises(ConfigError, match="Z2"):
        parse_config('{"experiment":"simon","group":"Z6","hidden_generators":[3]}')


def test_parse_enforces_resource_caps():
    with pytest.raises(ResourceCapError):
        parse_config('{"experiment":"shor","N":4097,"a":3,"Q":2048}')
    with pytest.raises(ResourceCapError):
        parse_config(
            '{"experiment":"simulate","group":"Z512","hidden_generators":[]}'
        )


@pytest.mark.parametrize(
    "text",
    [
        '{"experiment":"shor","N":15,"a":7,"Q":16,"transversal":{"kind":"offset","bound":4},"seed":9}',
        '{"experiment":"simon","group":"Z2^4","hidden_generators":[[1,0,1,0],[0,1,0,1]],"trials":12}',
        '{"experiment":"simulate","group":"D4","hidden_generators":[2],"oracle_seed":7,"trials":3}',
        '{"experiment":"irreps","group":"Z12"}',
        '{"experiment":"fourier-check","group":"D6","ordering":"dim_desc_then_label"}',
        '{"experiment":"sweep-transversal","N":21,"a":2,"Q":512,"bound":21,"seeds":10}',
        '{"experiment":"recover","group":"D4","dist":"distribution.csv"}',
    ],
)
def test_config_round_trips(text):
    cfg = parse_config(text)
    again = parse_config(serialize_config(cfg))
    assert again == cfg
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_run_simon_experiment_matches_brute_force(tmp_path):
    cfg = parse_config(
        '{"experiment":"simon","group":"Z2^3","hidden_generators":[[1,0,1]],'
        '"trials":20,"seed":4}'
    )
    report = run_experiment(cfg, tmp_path)
    assert report["matches_brute_force"]
    assert report["recovered_generators"] == [[1, 0, 1]]
    assert report["trials_used"] == 20
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "distribution.csv").exists()
    assert (tmp_path / "samples.csv").exists()


def test_run_shor_exact_experiment(tmp_path):
    cfg = parse_config(
        '{"experiment":"shor","N":15,"a":7,"Q":16,"transversal":{"kind":"shor"},'
        '"seed":1,"trials":8}'
    )
    report = run_experiment(cfg, tmp_path)
    assert report["peak_mass"] == 1.0
    assert report["r_true"] == 4
    assert report["period_estimate"]["period"] == 4
    assert report["period_estimate"]["confirmed"]


def test_rerun_is_byte_identical(tmp_path):
    text = (
        '{"experiment":"simulate","group":"D4","hidden_generators":[2],'
        '"oracle_seed":7,"trials":25,"seed":13}'
    )
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    run_experiment(parse_config(text), out_a)
    run_experiment(parse_config(text), out_b)
    for name in ("report.json", "distribution.csv", "samples.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_reports_echo_config_for_replay(tmp_path):
    text = '{"experiment":"shor","N":15,"a":7,"Q":16,"transversal":{"kind":"shor"},"seed":1}'
    report = run_experiment(parse_config(text), tmp_path)
    echoed = config_from_dict(report["config"])
    assert echoed == parse_config(text)


def test_cli_simulate_and_exit_codes(tmp_path, capsys):
    instance = tmp_path / "instance.json"
    instance.write_text('{"group": "D4", "hidden_generators": [2], "seed": 7}')
    out = tmp_path / "run"
    code = main(
        ["simulate", "--instance", str(instance), "--trials", "4",
         "--seed", "2", "--out-dir", str(out)]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["hidden_elements"] == ["e", "r2"]
    table_lines = (out / "f_table.csv").read_text().splitlines()
    assert table_lines[0] == "g_index,f_index"
    assert len(table_lines) == 9
    capsys.readouterr()

    assert main(["shor", "--N", "15", "--a", "5", "--Q", "16"]) == 2
    assert "field 'a'" in capsys.readouterr().err
    assert main(["shor", "--N", "4097", "--a", "3", "--Q", "2048"]) == 3
    capsys.readouterr()


def test_cli_maps_integrity_errors_to_exit_4(monkeypatch, capsys):
    from hspsim import cli
    from hspsim.errors import IntegrityError

    def boom(cfg, out_dir):
        raise IntegrityError("norm drifted")

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert cli.main(["irreps", "Z4"]) == 4
    assert "invariant" in capsys.readouterr().err


def test_cli_simon_flags(tmp_path, capsys):
    out = tmp_path / "simon"
    code = main(
        ["simon", "--n", "4", "--hidden", "1010,0110", "--trials", "16",
         "--seed", "5", "--out-dir", str(out)]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["matches_brute_force"]
    assert main(["simon", "--n", "3", "--hidden", "10"]) == 2
    capsys.readouterr()
    assert main(["simon", "--n", "3", "--hidden", "abc"]) == 2
    capsys.readouterr()


def test_cli_fourier_check_prints_residuals(tmp_path, capsys):
    code = main(["fourier", "D4", "--check", "--out-dir", str(tmp_path), "--format", "csv"])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    fields = dict(line.split(",", 1) for line in lines)
    assert fields["completeness_defect"] == "0"
    assert float(fields["max_schur_residual"]) < 1e-12
    assert float(fields["max_unitarity_residual"]) < 1e-12


def test_cli_recover_round_trip(tmp_path, capsys):
    instance = tmp_path / "instance.json"
    instance.write_text('{"group": "D4", "hidden_generators": [2], "seed": 0}')
    run_dir = tmp_path / "sim"
    assert main(["simulate", "--instance", str(instance), "--out-dir", str(run_dir)]) == 0
    capsys.readouterr()
    code = main(
        ["recover", "--dist", str(run_dir / "distribution.csv"), "--group", "D4",
         "--out-dir", str(tmp_path / "rec")]
    )
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["candidates"][0]["elements"] == ["e", "r2"]
    assert report["candidates"][0]["total_variation"] < 1e-10


def test_cli_recover_bad_dist_exits_2(tmp_path, capsys):
    assert main(["recover", "--dist", str(tmp_path / "nope.csv"), "--group", "Z4"]) == 2
    assert "'dist'" in capsys.readouterr().err
    bad = tmp_path / "bad.csv"
    bad.write_text("wrong,header\n1,2\n")
    assert main(["recover", "--dist", str(bad), "--group", "Z4"]) == 2
    capsys.readouterr()


def test_cli_sweep_transversal(tmp_path, capsys):
    out = tmp_path / "sweep"
    code = main(
        ["sweep-transversal", "--N", "21", "--a", "2", "--Q", "512",
         "--bound", "21", "--seeds", "3", "--out-dir", str(out)]
    )
    assert code == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "seed,peak_mass_shor,peak_mass_offset"
    assert len(lines) == 4
    report = json.loads(capsys.readouterr().out)
    assert report["wins_shor"] == 3
