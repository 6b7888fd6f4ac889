import pytest

from ggtkit.cli import main


def test_pipeline_gen_refute_check(tmp_path):
    cnf = tmp_path / "f.cnf"
    prf = tmp_path / "p.prf"
    assert main(["gen", "--family", "ggt", "--n", "6", "--seed", "1", "-o", str(cnf)]) == 0
    assert main(["refute", "--mode", "pool", "-i", str(cnf), "-o", str(prf)]) == 0
    assert main(
        ["check", "-f", str(cnf), "-p", str(prf), "--profiles", "valid,regular,pool"]
    ) == 0


def test_regrti_pipeline(tmp_path):
    cnf = tmp_path / "f.cnf"
    prf = tmp_path / "p.prf"
    assert main(["gen", "--family", "ggt", "--n", "5", "--seed", "0", "-o", str(cnf)]) == 0
    assert main(["refute", "--mode", "regrti", "-i", str(cnf), "-o", str(prf)]) == 0
    assert main(
        ["check", "-f", str(cnf), "-p", str(prf),
         "--profiles", "valid,regular,pool,input_lemma"]
    ) == 0


def test_pn_pipeline(tmp_path):
    cnf = tmp_path / "f.cnf"
    prf = tmp_path / "p.prf"
    assert main(["gen", "--family", "gt", "--n", "6", "-o", str(cnf)]) == 0
    assert main(["refute", "--mode", "pn", "-i", str(cnf), "-o", str(prf)]) == 0
    assert main(["check", "-f", str(cnf), "-p", str(prf), "--profiles", "valid,regular"]) == 0


def test_corrupted_pivot_detected(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    prf = tmp_path / "p.prf"
    main(["gen", "--family", "ggt", "--n", "4", "--seed", "0", "-o", str(cnf)])
    main(["refute", "--mode", "pool", "-i", str(cnf), "-o", str(prf)])
    lines = prf.read_text().splitlines()
    for idx, line in enumerate(lines):
        parts = line.split()
        if len(parts) > 2 and parts[1] == "R":
            parts[2] = "1" if parts[2] != "1" else "2"
            lines[idx] = " ".join(parts)
            corrupted_node = parts[0]
            break
    prf.write_text("\n".join(lines) + "\n")
    code = main(["check", "-f", str(cnf), "-p", str(prf), "--profiles", "valid"])
    assert code == 1
    out = capsys.readouterr().out
    assert f"node {corrupted_node}" in out


def test_solve_and_trace(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    trc = tmp_path / "t.prf"
    main(["gen", "--family", "ggt", "--n", "5", "--seed", "2", "-o", str(cnf)])
    assert main(["solve", "-i", str(cnf), "--trace", str(trc)]) == 0
    out = capsys.readouterr().out
    assert "UNSAT" in out and "restarts=0" in out
    assert main(["check", "-f", str(cnf), "-p", str(trc), "--profiles", "valid"]) == 0


def test_solve_gt(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    main(["gen", "--family", "gt", "--n", "5", "-o", str(cnf)])
    assert main(["solve", "-i", str(cnf)]) == 0
    assert "UNSAT" in capsys.readouterr().out


def test_gtpi_gen(tmp_path):
    cnf = tmp_path / "f.cnf"
    assert main(["gen", "--family", "gtpi", "--n", "5", "--pi", "0:3,1:4", "-o", str(cnf)]) == 0
    text = cnf.read_text()
    assert "pi=0:3,1:4" in text


def test_bench_csv_deterministic(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["bench", "--artifacts", "pn,pool,dpll", "--n-min", "4", "--n-max", "6",
            "--seeds", "2", "--no-wall"]
    assert main(args + ["-o", str(out1)]) == 0
    assert main(args + ["-o", str(out2)]) == 0
    assert out1.read_text() == out2.read_text()
    header = out1.read_text().splitlines()[0]
    assert header == ("family,n,seed,artifact,lines,maxWidth,stages,caseIvCount,"
                      "conflicts,decisions,wallMillis,status")


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["gen", "--family", "nope", "--n", "4", "-o", str(tmp_path / "x")])
    assert info.value.code == 2
    assert main(["solve", "-i", str(tmp_path / "missing.cnf")]) == 2


def test_refute_mode_mismatch(tmp_path):
    cnf = tmp_path / "f.cnf"
    main(["gen", "--family", "gt", "--n", "5", "-o", str(cnf)])
    assert main(["refute", "--mode", "pool", "-i", str(cnf), "-o", str(tmp_path / "p")]) == 2
