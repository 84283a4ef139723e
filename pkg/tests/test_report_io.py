"""Test report_io: number formats, CSV rendering, atomic writes"""

import pytest

from core import report_io
from core.report_io import fmt_db, fmt_full, render_csv, write_csv, write_text_atomic


def test_fmt_full_round_trips():
    for value in (0.1, 1 / 3, 0.21845678901234567, 3.0):
        assert float(fmt_full(value)) == value
    assert fmt_full(3.0) == "3"


def test_fmt_db_two_decimals():
    assert fmt_db(-14.8567) == "-14.86"
    assert fmt_db(0) == "0.00"


def test_render_csv_unix_newlines():
    text = render_csv(["of1", "of2"], [["0.1", "0.2"], ["0.3", "0.4"]])
    assert text == "of1,of2\n0.1,0.2\n0.3,0.4\n"


def test_write_creates_parent_dirs(tmp_path):
    path = write_csv(tmp_path / "a" / "b" / "pareto.csv", ["x"], [["1"]])
    assert path.read_text(encoding="utf-8") == "x\n1\n"


def test_write_replaces_existing_file_without_temp_leftovers(tmp_path):
    target = tmp_path / "knee.txt"
    target.write_text("old", encoding="utf-8")
    write_text_atomic(target, "new")
    assert target.read_text(encoding="utf-8") == "new"
    assert [p.name for p in tmp_path.iterdir()] == ["knee.txt"]


def test_write_retries_transient_permission_error(tmp_path, monkeypatch):
    calls = {"n": 0}
    real_replace = report_io.os.replace

    def flaky_replace(src, dst):
        calls["n"] += 1
        if calls["n"] == 1:
            raise PermissionError("file locked")
        return real_replace(src, dst)

    monkeypatch.setattr(report_io.os, "replace", flaky_replace)
    write_text_atomic(tmp_path / "out.txt", "data")
    assert calls["n"] == 2
    assert (tmp_path / "out.txt").read_text(encoding="utf-8") == "data"
    assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]


def test_write_gives_up_after_three_attempts(tmp_path, monkeypatch):
    calls = {"n": 0}

    def always_locked(src, dst):
        calls["n"] += 1
        raise PermissionError("file locked")

    monkeypatch.setattr(report_io.os, "replace", always_locked)
    with pytest.raises(PermissionError):
        write_text_atomic(tmp_path / "out.txt", "data")
    assert calls["n"] == 3
    assert list(tmp_path.iterdir()) == []
