import csv
import io
import json

import pytest

from dualpolar.cli import main, parse_grid, parse_range, UsageError


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--family", "W", "--q", "2", "--d", "3")
    assert code == 0 and out.splitlines()[0] == "num_generators: 135"


def test_hoffman_json(capsys):
    code, out, _ = run(capsys, "hoffman", "--family", "W", "--q", "2", "--d", "2", "--t", "1", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["hoffman"] == "3" and obj["schema_version"] == 1


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--family", "Qplus", "--q", "2", "--d", "3", "--t", "2",
                       "--format", "json", "--cache", str(tmp_path))
    obj = json.loads(out)
    assert code == 0 and obj["size"] == "15" and obj["optimal"] is True
    assert obj["classification"]["tag"] == "hyperbolic-special"
    assert len(obj["witness"]) == 15


def test_lp_dump(capsys):
    code, out, _ = run(capsys, "lp", "--family", "W", "--q", "2", "--d", "2", "--t", "1", "--dump")
    assert code == 0 and "lp_value: 3" in out and ">=" in out


def test_gauss_and_psi(capsys):
    assert run(capsys, "gauss", "--n", "4", "--k", "2", "--q", "2")[1].endswith("gauss: 35\n")
    code, out, _ = run(capsys, "count", "--q", "2", "--d", "8", "--t", "3", "--psi", "bar_odd")
    assert code == 0 and "psi_bar_odd: 240" in out


def test_spectrum_verify(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", "W", "--q", "2", "--d", "2", "--verify", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and all(c["ok"] for c in obj["verify"])


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--family", "W", "--grid", "q=3,4", "--grid", "d=4..5", "--grid", "t=2")
    lines = out.splitlines()
    assert code == 0 and lines[-1].startswith("# rows=4")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[:-1]))))
    assert len(rows) == 4 and rows[0]["hoffman"] == "364"


def test_bounds_single_json(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "W", "--q", "2", "--d", "3", "--t", "1", "--lp", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["hoffman"] == "45/7" and obj["lp_bound"] == "3"


def test_bounds_csv_single_row(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "W", "--q", "3", "--d", "4", "--t", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("family,q,d,t,n,")


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "qcore", "--suite", "explicit")
    assert code == 0 and out.count("PASS") == 2


@pytest.mark.parametrize("args", [
    ["hoffman", "--family", "W", "--q", "6", "--d", "2", "--t", "1"],
    ["hoffman", "--family", "W", "--q", "2", "--d", "2", "--t", "2"],
    ["hoffman"],
    ["nosuch"],
    ["verify", "--suite", "nosuch"],
    ["table", "--grid", "z=1..2"],
    ["search", "--family", "W", "--q", "2", "--d", "2", "--t", "1", "--workers", "0"],
])
def test_usage_errors(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_falsification_exit_code(capsys, monkeypatch):
    import dualpolar.cli as cli
    from dualpolar.spectra import SpectrumReport

    real = cli.verify_spectrum

    def broken(g, t):
        rep = real(g, t)
        return SpectrumReport(rep.params, t, rep.values, rep.distinct, False, (0, 1), True, True)

    monkeypatch.setattr(cli, "verify_spectrum", broken)
    code, out, _ = run(capsys, "spectrum", "--family", "W", "--q", "2", "--d", "2", "--verify", "--format", "json")
    assert code == 1 and json.loads(out)["verify"][0]["witness"] == ["0", "1"]


def test_range_parsing():
    assert parse_range("2..4,7") == [2, 3, 4, 7]
    assert parse_grid(["d=2..3", "q=2"]) == {"d": [2, 3], "q": [2]}
    with pytest.raises(UsageError):
        parse_grid(["d2..3"])
