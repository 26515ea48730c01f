import csv
import json
from fractions import Fraction

import pytest

from conjpoints.cli import main
from conjpoints.config import ExperimentConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def write_config(tmp_path, **kw):
    path = tmp_path / "exp.ini"
    path.write_text(ExperimentConfig(**kw).to_ini(), encoding="utf-8")
    return str(path)


def test_schur_print(capsys, tmp_path):
    assert run(capsys, "schur", "--lambda", "2,1", "--tau", "2", "--out", str(tmp_path))[:2] == (0, "T0^2*T1 + T0*T1^2")
    assert run(capsys, "schur", "--lambda", "1,1,1", "--tau", "2", "--out", str(tmp_path))[:2] == (0, "0")
    assert run(capsys, "schur", "--lambda", "2,1", "--tau", "2", "--point", "1/2,3",
               "--out", str(tmp_path))[:2] == (0, "21/4")


def test_schur_validation(capsys, tmp_path):
    assert run(capsys, "schur", "--lambda", "2,x", "--tau", "2", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "schur", "--lambda", "1,2", "--tau", "2", "--out", str(tmp_path))[0] == 2
    assert run(capsys, "schur", "--tau", "2")[0] == 2


def test_symord(capsys, tmp_path):
    out = str(tmp_path)
    assert run(capsys, "symord", "(x, x^2)", "--out", out)[:2] == (0, "4")
    assert run(capsys, "symord", "(x, x^2, x^3, x^4)", "--out", out)[:2] == (0, "5")
    assert run(capsys, "symord", "(x, y)", "--vars", "x,y", "--out", out)[:2] == (0, "infinite")
    cert = (tmp_path / "symord_certificate.txt").read_text()
    assert "symord: infinite" in cert


def test_symord_budget(capsys, tmp_path):
    code, _, err = run(capsys, "symord", "(x, x^2, x^3, x^4, x^5)", "--budget-ms", "300",
                       "--out", str(tmp_path))
    assert code == 3 and "budget" in err


def test_count_csv(capsys, tmp_path):
    cfg = write_config(tmp_path, Q=(4, 8, 16))
    code, out, _ = run(capsys, "count", "--config", cfg, "--out", str(tmp_path))
    assert code == 0 and "slope" in out
    table = rows(tmp_path / "count.csv")
    assert table[0] == ["Q", "gamma", "c", "count", "undecidable", "wall_ms"]
    assert [(r[0], r[2]) for r in table[1:]] == [(q, c) for c in ("1", "4", "16") for q in ("4", "8", "16")]
    by_key = {(r[0], r[2]): int(r[3]) for r in table[1:]}
    assert by_key["16", "4"] == 229
    assert by_key["16", "1"] <= by_key["16", "4"] <= by_key["16", "16"]
    raw = (tmp_path / "count.csv").read_bytes()
    assert b"\r" not in raw
    rec = json.loads((tmp_path / "count.run.json").read_text())
    assert rec["config_hash"] == ExperimentConfig.from_ini(open(cfg).read()).hash()
    assert rec["outputs"] == ["count.csv"]


def test_empty_schedule(capsys, tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[experiment]\nQ =\n")
    assert run(capsys, "count", "--config", str(path), "--out", str(tmp_path))[0] == 2


def test_measure_is_deterministic_and_monotone(capsys, tmp_path):
    cfg = write_config(tmp_path, n=3, psi=("1, -1", "1, -1"), phi=("eps^4, 1", "1, 1"), Q=(100,),
                       eps=(Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)), samples=60)
    tables = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        assert run(capsys, "measure", "--config", cfg, "--seed", "9", "--out", str(d))[0] == 0
        tables.append([r[:-1] for r in rows(d / "measure.csv")])
    assert tables[0] == tables[1]
    fracs = [Fraction(r[3]) for r in tables[0][1:]]
    assert fracs == sorted(fracs, reverse=True)


def test_scaling(capsys, tmp_path):
    cfg = write_config(tmp_path, n=3, psi=("1, -1", "1, -1"), phi=("eps^4, 1", "1, 1"), Q=(1000,),
                       eps=(Fraction(1, 2),))
    assert run(capsys, "scaling", "--config", cfg, "--out", str(tmp_path))[0] == 0
    header, row = rows(tmp_path / "scaling.csv")
    assert header == ["eps", "Q", "delta", "t0", "t1", "t2", "t3"]
    assert float(row[2]) == pytest.approx(0.5)


def test_tailor_rows_replay(capsys, tmp_path):
    cfg = write_config(tmp_path, n=3, psi=("1, -1", "1, -1"), phi=("1, 1", "1, 1"), Q=(1000,),
                       domain=((Fraction(1, 10), Fraction(9, 10)),), samples=3, seed=4)
    assert run(capsys, "tailor", "--config", cfg, "--out", str(tmp_path / "all"))[0] == 0
    table = rows(tmp_path / "all" / "tailor.csv")
    assert len(table) == 4
    for row in table[1:]:
        x = row[2].replace(" ", ",")
        d = tmp_path / "one"
        assert run(capsys, "tailor", "--config", cfg, "--x", x, "--out", str(d))[0] == 0
        (single,) = rows(d / "tailor.csv")[1:]
        assert single[:-1] == row[:-1]


def test_goodness(capsys, tmp_path):
    cfg = write_config(tmp_path, maps=20, resolution=128)
    code, out, _ = run(capsys, "goodness", "--config", cfg, "--out", str(tmp_path))
    assert code == 0 and out.startswith("0 violating")
    assert len(rows(tmp_path / "goodness.csv")) == 21


def test_accept_subset(capsys, tmp_path):
    code, out, _ = run(capsys, "accept", "--only", "1,3", "--out", str(tmp_path))
    assert code == 0
    assert out.count("[PASS]") == 2
    assert run(capsys, "accept", "--only", "12", "--out", str(tmp_path))[0] == 2
