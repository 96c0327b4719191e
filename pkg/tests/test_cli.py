import csv
import json

import pytest

from unclab.cli import (
    EXIT_DISAGREE,
    EXIT_OK,
    EXIT_USAGE,
    NONSYM_COLUMNS,
    SCAN_COLUMNS,
    UsageError,
    atomic_write,
    main,
    parse_ladder,
    parse_number,
    run,
)


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


class TestParsing:
    def test_numbers(self):
        assert parse_number("4/3") * 3 == 4
        assert parse_number("2^-6") * 64 == 1
        assert parse_number("inf") == float("inf")

    def test_ladders(self):
        assert parse_ladder("16:512:x2") == [16, 32, 64, 128, 256, 512]
        assert parse_ladder("2:10:+4") == [2, 6, 10]
        assert parse_ladder("1,2,3") == [1, 2, 3]
        assert parse_ladder("") == []
        with pytest.raises(UsageError):
            parse_ladder("1:10:x1")
        with pytest.raises(UsageError):
            parse_ladder("1:10")


class TestClassify:
    @pytest.mark.parametrize("argv, expected", [
        ("classify nonsym -d 1 -p 2 -q 2 --alpha 1 --beta 1", "HOLDS"),
        ("classify H -d 1 -p 2 -q 2 -A 1,1 -B 1,1", "x^0.5 | x^0.5"),
        ("classify H -d 1 -p inf -q 1 -A 1,1 -B 1,0.4", "INFINITE"),
    ])
    def test_examples(self, argv, expected, capsys):
        assert main(argv.split()) == EXIT_OK
        assert capsys.readouterr().out.strip() == expected

    def test_json_report(self, capsys):
        assert main("classify local -p 2 -q 2 -D 0,1 --format json".split()) == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["profile"]["small"]["power"] == "0.5"
        assert report["config"]["D"] == "0,1"

    @pytest.mark.parametrize("argv", [
        "bogus",
        "classify nonsym -p 0.5 -q 2 --alpha 1 --beta 1",
        "classify nonsym -p 2 -q 2",
        "classify sym -p 1.5",
        "classify discrete --gamma -1",
        "estimate discrete --Ms 16:64:x2",
    ])
    def test_usage_errors(self, argv, capsys):
        assert main(argv.split()) == EXIT_USAGE
        assert "unclab" in capsys.readouterr().err


class TestEstimate:
    def test_parseval_sweep(self):
        report, code = run("estimate discrete -p 2 -q 2 --gamma 0 --Ms 16:256:x2".split())
        assert code == EXIT_OK
        assert all(pt["value"] == pytest.approx(1.0, abs=1e-10) for pt in report["points"])
        assert abs(report["fit"]["power"]) < 0.05

    def test_agreeing_sweep(self, capsys):
        assert main("estimate discrete -d 1 -p 2 -q 4 --gamma 0 --Ms 16:512:x2".split()) == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("AGREE")

    def test_deterministic(self):
        argv = "estimate discrete -p 3 -q 4 --Ms 8:128:x2 --seed 5".split()
        assert strip_timing(run(argv)[0]) == strip_timing(run(argv)[0])

    def test_disagreement_exit_code(self):
        # a tolerance nobody can meet turns the comparison into a disagreement
        argv = "estimate discrete -p 2 -q 4 --Ms 16:256:x2 --power-tol 0".split()
        assert main(argv) == EXIT_DISAGREE


class TestScan:
    def test_empty_grid(self, tmp_path):
        out = tmp_path / "cells.csv"
        report, code = run(["scan", "sym", "--ps", "2", "--grid", "", "--csv", str(out)])
        assert code == EXIT_OK and report["rows"] == []
        assert out.read_text(encoding="utf-8") == ",".join(SCAN_COLUMNS) + "\n"

    def test_small_symmetric_scan(self, tmp_path, monkeypatch):
        monkeypatch.setenv("UNCLAB_THREADS", "1")
        out = tmp_path / "cells.csv"
        report, code = run(["scan", "sym", "--ps", "2", "--grid", "0.5,1", "--csv", str(out)])
        assert code == EXIT_OK
        assert report["confusion"]["Holds/Divergent"] == 0
        with open(out, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 16
        assert set(rows[0]) == set(SCAN_COLUMNS)

    def test_nonsymmetric_scan(self, tmp_path):
        out = tmp_path / "nonsym.csv"
        report, code = run(["scan", "nonsym", "--dims", "1", "--ps", "2,inf", "--qs", "1,2",
                            "--alphas", "1", "--betas", "0.4,1", "--csv", str(out)])
        assert code == EXIT_OK
        assert report["confusion"] == {"consistent": 8, "inconsistent": 0}
        header = out.read_text(encoding="utf-8").splitlines()[0]
        assert header == ",".join(NONSYM_COLUMNS)

    def test_bad_thread_count(self, monkeypatch):
        monkeypatch.setenv("UNCLAB_THREADS", "many")
        assert main(["scan", "nonsym", "--dims", "1"]) == EXIT_USAGE


class TestOutput:
    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert main(["classify", "H", "-A", "1,1", "-B", "1,1", "--out", str(out)]) == EXIT_OK
        text = out.read_text(encoding="utf-8")
        assert text.endswith("\n")
        assert json.loads(text)["summary"] == "x^0.5 | x^0.5"
        assert [p.name for p in tmp_path.iterdir()] == ["report.json"]

    def test_atomic_write_leaves_no_temp_on_failure(self, tmp_path, monkeypatch):
        import os
        target = tmp_path / "x.txt"
        target.write_text("old\n", encoding="utf-8")

        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            atomic_write(str(target), "new")
        assert target.read_text(encoding="utf-8") == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["x.txt"]

    def test_csv_quoting(self, tmp_path):
        from unclab.cli import rows_to_csv
        text = rows_to_csv(("a", "b"), [{"a": "x, y", "b": 'say "hi"'}])
        assert text == 'a,b\n"x, y","say ""hi"""\n'
