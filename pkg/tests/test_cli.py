import json

import pytest

from everettsim import fixtures
from everettsim.circuit import superdense_source
from everettsim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def fixture_file(tmp_path, name):
    path = tmp_path / name
    path.write_text(fixtures.read(name), encoding="utf-8")
    return str(path)


def test_superdense_reports_the_pointer(capsys):
    code, out, _ = run_cli(capsys, "superdense", "--p", "0", "--q", "0")
    assert code == 0
    assert "pointer: 00" in out
    assert "decode table: 00->00 01->10 10->01 11->11" in out


def test_teleport_reports_unit_fidelity(capsys):
    code, out, _ = run_cli(capsys, "teleport", "--alpha", "1,0", "--beta", "0,0")
    assert code == 0
    assert "fidelity: 1.000000000000" in out
    assert "schmidt rank (b cut): 1" in out


def test_run_fixture_passes(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "run", fixture_file(tmp_path, fixtures.TELEPORT))
    assert code == 0
    assert "PASS" in out


def test_run_with_failing_assertion_exits_one(capsys, tmp_path):
    path = tmp_path / "bad.ecirc"
    path.write_text(superdense_source(0, 1, (0, 1)), encoding="utf-8")
    code, out, _ = run_cli(capsys, "run", str(path))
    assert code == 1
    assert "FAIL" in out


def test_run_with_locality_violation_exits_one(capsys, tmp_path):
    path = tmp_path / "nonlocal.ecirc"
    source = superdense_source(0, 1, (1, 0)).replace("transfer a -> Bob\n", "")
    path.write_text(source, encoding="utf-8")
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 1
    assert "cannot act on wire" in err


def test_missing_file_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "no_such_file.ecirc"])
    assert exc.value.code == 2


def test_parse_error_exits_two_with_position(capsys, tmp_path):
    path = tmp_path / "broken.ecirc"
    path.write_text("wire a @ Alice\ntransfer a ->\n", encoding="utf-8")
    with pytest.raises(SystemExit) as exc:
        main(["run", str(path)])
    assert exc.value.code == 2
    assert "line 2" in capsys.readouterr().err


def test_unknown_verb_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["entangle"])
    assert exc.value.code == 2


def test_bad_bit_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["superdense", "--p", "2", "--q", "0"])
    assert exc.value.code == 2


def test_bad_amplitude_flag_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["teleport", "--alpha", "1", "--beta", "0,0"])
    assert exc.value.code == 2


def test_zero_qubit_rejected(capsys):
    code, _, err = run_cli(capsys, "teleport", "--alpha", "0,0", "--beta", "0,0")
    assert code == 2
    assert "nonzero" in err


def test_json_output_is_parseable_and_matches_human_numbers(capsys):
    _, human, _ = run_cli(capsys, "teleport", "--alpha", "0.6,0", "--beta", "0,0.8")
    _, machine, _ = run_cli(capsys, "teleport", "--alpha", "0.6,0", "--beta", "0,0.8", "--json")
    records = [json.loads(line) for line in machine.splitlines()]
    summary = records[-1]
    assert summary["event"] == "Summary"
    human_fidelity = float(next(l for l in human.splitlines() if l.startswith("fidelity:")).split()[1])
    assert summary["fidelity"] == human_fidelity
    assert summary["schmidt_rank_b_cut"] == 1


def test_json_trace_records_have_event_and_seq(capsys):
    _, out, _ = run_cli(capsys, "superdense", "--p", "1", "--q", "1", "--json", "--trace")
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["event"] for r in records] == [
        "Init", "Gate", "Transfer", "Gate", "Decompose", "Summary"
    ]
    assert [r["seq"] for r in records[:-1]] == [0, 1, 2, 3, 4]


def test_trace_lines_follow_the_documented_layout(capsys):
    _, out, _ = run_cli(capsys, "superdense", "--p", "0", "--q", "1", "--trace")
    lines = out.splitlines()
    start = lines.index("trace:")
    assert lines[start + 1].startswith("0 Init wires=c,d,a,b,E1,E2 at=c:Alice,")
    assert lines[start + 2] == "1 Gate name=cu_sigma wires=c,d,a actor=Alice"
    assert lines[start + 3] == "2 Transfer wire=a from=Alice to=Bob"
    assert lines[start + 4] == "3 Gate name=cu_meas wires=E1,E2,a,b actor=Bob"
    assert lines[start + 5].startswith("4 Decompose pointer=E1,E2 branches=10:")
    assert "final state:" in lines
    assert "wires: c d a b E1 E2" in lines


def test_render_output_is_byte_identical_across_runs(capsys, tmp_path):
    path = fixture_file(tmp_path, fixtures.SUPERDENSE)
    _, first, _ = run_cli(capsys, "render", path)
    _, second, _ = run_cli(capsys, "render", path)
    assert first == second
    assert "[Uσ]" in first


def test_json_output_is_byte_identical_across_runs(capsys):
    args = ("superdense", "--p", "0", "--q", "1", "--json", "--trace")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_everett_tol_env_var_is_honored(capsys, monkeypatch):
    monkeypatch.setenv("EVERETT_TOL", "1e-6")
    code, out, _ = run_cli(capsys, "superdense", "--p", "0", "--q", "0")
    assert code == 0 and "pointer: 00" in out
    monkeypatch.setenv("EVERETT_TOL", "banana")
    with pytest.raises(SystemExit) as exc:
        main(["superdense", "--p", "0", "--q", "0"])
    assert exc.value.code == 2
