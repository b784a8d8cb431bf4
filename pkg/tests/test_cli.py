import json
import os
import subprocess
import sys

import pytest

from shufflealg.cli import ConfigError, main, parse_expression, parse_grading, parse_window
from shufflealg.presentations import SL21_ODD


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def body(out):
    lines = out.strip().splitlines()
    assert lines[0] == "# shufflealg-report v1"
    return lines[1:]


def test_parse_helpers():
    assert parse_window("-2..2") == (-2, 2)
    assert parse_grading("1,2,1") == (1, 2, 1)
    for bad in ("2..1", "a..b", "3"):
        with pytest.raises(ConfigError):
            parse_window(bad)
    with pytest.raises(ConfigError):
        parse_grading("1,-1")


def test_verify_relations_without_comm(capsys):
    code, out, _ = run(capsys, "verify-relations", "--presentation", "sl21", "--window", "-1..1", "--no-comm")
    assert code == 0
    assert all(l.startswith("PASS\t") for l in body(out))


def test_verify_relations_reports_printed_chain(capsys):
    # the printed r_k chain fails at one step, so the full suite exits 1
    code, out, _ = run(capsys, "verify-relations", "--presentation", "sl21", "--window", "-1..1")
    assert code == 1
    fails = [l for l in body(out) if l.startswith("FAIL")]
    assert fails and all(l.split("\t")[1] == "rr.chain" for l in fails)


def test_verify_relations_d21f(capsys):
    code, out, _ = run(capsys, "verify-relations", "--presentation", "d21f", "--window", "0..1")
    assert code == 0


def test_unknown_presentation(capsys):
    code, _, err = run(capsys, "verify-relations", "--presentation", "gl3")
    assert code == 2 and "error" in err


def test_bad_window_exits_2(capsys):
    code, _, _ = run(capsys, "pbw", "--presentation", "sl21", "--window", "3..1")
    assert code == 2


def test_pbw(capsys):
    code, out, _ = run(capsys, "pbw", "--presentation", "sl21", "--grading", "1,1", "--window", "0..1")
    assert code == 0
    assert "rank 6 of 6" in out
    code, out, _ = run(capsys, "pbw", "--presentation", "d21f", "--grading", "1,1,1", "--window", "0..0")
    assert code == 0
    code, out, _ = run(capsys, "pbw", "--presentation", "d21f", "--grading", "0,0,0", "--window", "0..0")
    assert code == 0 and "rank 1 of 1" in out


def test_rou(capsys):
    code, out, _ = run(capsys, "rou", "--t", "2", "--grading", "2,2", "--degree", "4")
    assert code == 0
    lines = body(out)
    assert sum("EQUAL" in l for l in lines) == 5
    assert not any(l.startswith("FAIL") or "MISMATCH" in l for l in lines)


def test_rou_nilpotency_only(capsys):
    code, out, _ = run(capsys, "rou", "--t", "2", "--nilpotency")
    assert code == 0
    assert any("nilpotency" in l for l in body(out))


def test_rou_t1(capsys):
    code, out, _ = run(capsys, "rou", "--t", "1")
    assert code == 0
    assert "vacuous" in out


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--presentation", "sl21", "p0")
    assert code == 0
    data = json.loads("\n".join(l for l in out.splitlines() if not l.startswith("#")))
    assert data["family"] == "LAMBDA" and data["grading"] == [1, 0]
    assert data["numerator"]["terms"] == [{"exp": [0], "coeff": "1*v^0*u^0"}]


def test_eval_parse_error(capsys):
    code, _, _ = run(capsys, "eval", "--presentation", "sl21", "p0 * * q1")
    assert code == 2


def test_decompose_comm_lemma(capsys):
    code, out, _ = run(capsys, "decompose", "--presentation", "sl21", "--window", "0..1", "q0 * p1")
    assert code == 0
    lines = body(out)
    assert any(l.startswith("a1(1) a2(0)") and "-1*v^1" in l for l in lines)
    assert any(l.startswith("g(1)") for l in lines)
    assert lines[-1].startswith("PASS")


def test_decompose_not_in_span(capsys):
    code, out, err = run(capsys, "decompose", "--presentation", "sl21", "--window", "0..1",
                         "--widen", "0", "q0 * p3")
    assert code == 1
    assert "window" in (out + err)


def test_parse_expression_bracket():
    F = parse_expression("[p0,q0]_-1", SL21_ODD, None)
    from shufflealg.presentations import root_vector_image
    assert F == root_vector_image(SL21_ODD, "g", 0)


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    main(["-o", str(a), "pbw", "--presentation", "sl21", "--grading", "2,1", "--window", "0..1"])
    main(["-o", str(b), "pbw", "--presentation", "sl21", "--grading", "2,1", "--window", "0..1"])
    assert a.read_text() == b.read_text()
    assert a.read_text().startswith("# shufflealg-report v1")


def test_worker_count_does_not_change_output(tmp_path):
    outs = []
    for w in ("1", "2"):
        env = dict(os.environ, SHUFFLEALG_WORKERS=w)
        r = subprocess.run([sys.executable, "-m", "shufflealg", "verify-relations",
                            "--presentation", "d21f", "--window", "0..0"],
                           capture_output=True, text=True, env=env, timeout=300)
        assert r.returncode == 0
        outs.append(r.stdout)
    assert outs[0] == outs[1]


def test_console_script_present():
    import shutil
    assert shutil.which("shufflealg") is not None
