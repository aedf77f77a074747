import json

import pytest

from lossyphase.cli import build_parser, fmt_number, main, parse_grid

SUBCOMMANDS = [
    "constants", "classical-mp", "quantum-bound", "advantage", "fig2a", "gaussian-fisher", "fig2b",
    "network-eval", "network-opt", "imperfect-advantage", "fig4-surface", "reproduce",
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_constants_json(capsys):
    code, out, _ = run(capsys, "constants", "--format", "json")
    assert code == 0
    assert json.loads(out)["advantage_ratio"] == pytest.approx(0.805, abs=1e-3)


def test_classical_single_pass(capsys):
    code, out, _ = run(capsys, "classical-mp", "--eta", "0.5", "--k", "1", "--mode", "tm")
    lines = out.splitlines()
    assert lines[0] == "eta,strategy,k,fisher_per_lost,normalized_precision"
    assert lines[1].split(",")[3] == "1.0"


def test_network_opt_json(capsys):
    code, out, _ = run(capsys, "network-opt", "--eta", "0.5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["h"] == 5
    assert data["ratio"] == pytest.approx(0.930968, abs=1e-6)


def test_grid_and_na(capsys):
    code, out, _ = run(capsys, "fig2b", "--grid", "0.05,0.5")
    assert code == 0
    assert out.splitlines() == [
        "eta,n_sq,r,squeezing_db",
        "0.05,NA,NA,NA",
        out.splitlines()[2],
    ]
    assert out.splitlines()[2].startswith("0.5,0.1377")


@pytest.mark.parametrize("argv,code,kind", [
    (["classical-mp", "--eta", "1.5"], 3, "domain"),
    (["classical-mp", "--eta", "abc"], 2, "validation"),
    (["classical-mp"], 2, "validation"),
    (["network-eval", "--eta", "0.5", "--h", "3", "--xi", "0"], 3, "domain"),
    (["nonsense"], 2, "validation"),
])
def test_error_codes(capsys, argv, code, kind):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert len(err.splitlines()) == 1 and err.startswith(f"error: kind={kind} message=")


def test_help_lists_flags(capsys):
    parser = build_parser()
    for name in SUBCOMMANDS:
        with pytest.raises(SystemExit):
            parser.parse_args([name, "--help"])
        text = capsys.readouterr().out
        sub = parser._subparsers._group_actions[0].choices[name]
        for action in sub._actions:
            for opt in action.option_strings:
                assert opt in text


def test_deterministic_output(capsys):
    argv = ["fig2a", "--grid", "0.1:0.9:5", "--mode", "tm"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("argv", [
    ["advantage", "--eta", "0.3", "--discrete", "--normalization", "discrete"],
    ["network-eval", "--eta", "0.4", "--h", "3", "--xi", "0.2", "--phi", "0.1", "--format", "csv"],
    ["imperfect-advantage", "--eta", "0.9", "--eta-r", "0.95"],
    ["quantum-bound", "--grid", "0.2:0.8:4", "--discrete"],
])
def test_config_round_trip(capsys, tmp_path, argv):
    _, direct, _ = run(capsys, *argv)
    _, cfg, _ = run(capsys, *argv, "--dump-config")
    path = tmp_path / "cfg.json"
    path.write_text(cfg)
    code, replay, _ = run(capsys, "run", str(path))
    assert code == 0 and replay == direct


def test_config_rejects_unknown_keys(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"subcommand": "advantage", "parameters": {"eta": 0.5, "seed": 3}}))
    code, _, err = run(capsys, "run", str(path))
    assert code == 2 and "seed" in err


def test_no_seed_flag(capsys):
    assert run(capsys, "fig2a", "--seed", "1")[0] == 2


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LOSSYPHASE_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "fig2b", "--grid", "0.5", "--output", "fig2b.csv")
    assert code == 0 and out == ""
    text = (tmp_path / "fig2b.csv").read_bytes()
    assert b"\r" not in text and text.startswith(b"eta,n_sq,r,squeezing_db\n")


def test_reproduce_constants(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LOSSYPHASE_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "reproduce", "constants")
    assert code == 0
    assert out.count("PASS") == 6
    assert (tmp_path / "constants.csv").exists()


def test_number_format():
    assert fmt_number(1.0) == "1.0"
    assert fmt_number(1) == "1"
    assert fmt_number(None) == "NA"
    assert fmt_number(0.1 + 0.2) == "0.3"
    assert fmt_number(1e20) == "1e+20"
    assert fmt_number(2.0 / 3.0) == "0.666666666667"


def test_parse_grid():
    assert parse_grid("0.1:0.5:5") == [0.1, 0.2, 0.3, 0.4, 0.5]
    assert parse_grid("0.3,0.7") == [0.3, 0.7]
