import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from hyperfpp import __version__
from hyperfpp.cli import nearest_rank, run
from hyperfpp.solver import min_path
from hyperfpp.weights import derive_replica


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1], rows[2:]


def test_sample_delegates_to_min_path(capsys):
    code, out, _ = invoke(capsys, "sample", "--n", "2", "--seed", "1", "--reps", "1")
    assert code == 0
    echo, header, rows = parse_csv(out)
    assert echo[0] == f"#hyperfpp={__version__}"
    assert "n=2" in echo and "seed=1" in echo and "reps=1" in echo
    assert header == ["kind", "key", "value"]
    samples = [r for r in rows if r[0] == "sample"]
    assert len(samples) == 1
    assert float(samples[0][2]) == min_path(2, derive_replica(1, 0)).min_weight


def test_seventeen_significant_digits(capsys):
    _, out, _ = invoke(capsys, "sample", "--n", "4", "--seed", "3", "--reps", "2")
    _, _, rows = parse_csv(out)
    v = min_path(4, derive_replica(3, 1)).min_weight
    assert rows[1][2] == format(v, ".17g")


def test_fnk_n3(capsys):
    code, out, _ = invoke(capsys, "fnk", "--n", "3")
    assert code == 0
    _, header, rows = parse_csv(out)
    col = {name: [r[i] for r in rows] for i, name in enumerate(header)}
    assert col["f"][:2] == ["5", "1"]
    assert col["bound_iii"][:2] == ["", "1"]


def test_threads_do_not_change_output(tmp_path):
    paths = []
    for threads in (1, 8):
        p = tmp_path / f"out{threads}.csv"
        assert run(["sample", "--n", "10", "--seed", "7", "--reps", "16",
                    "--threads", str(threads), "--output", str(p)]) == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_json_output(capsys):
    code, out, _ = invoke(capsys, "tail", "--n-values", "1,2", "--x-values", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["hyperfpp"] == __version__
    assert doc["config"]["subcommand"] == "tail"
    assert len(doc["rows"]) == 2
    assert doc["rows"][1]["cdf"] == pytest.approx(1 - 2 / np.e)


def test_json_nonfinite_becomes_null(capsys):
    code, out, _ = invoke(capsys, "sample", "--n", "6", "--reps", "3", "--cutoff", "0.01",
                          "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [r["value"] for r in doc["rows"] if r["kind"] == "sample"] == [None] * 3


def test_usage_error_exit_2(capsys):
    code, _, err = invoke(capsys, "sample", "--n", "3", "--bogus")
    assert code == 2 and "unrecognized" in err
    code, _, _ = invoke(capsys, "sample", "--n", "3", "--threads", "0")
    assert code == 2
    code, _, _ = invoke(capsys, "nonsense")
    assert code == 2


def test_domain_error_exit_2(capsys):
    code, _, err = invoke(capsys, "sample", "--n", "1", "--reps", "1")
    assert code == 2 and "dimension" in err


def test_resource_error_exit_3(capsys, monkeypatch):
    code, _, err = invoke(capsys, "fnk", "--n", "11")
    assert code == 3
    monkeypatch.setenv("HYPERFPP_CAP", "5")
    code, _, err = invoke(capsys, "sample", "--n", "6", "--reps", "1")
    assert code == 3 and "HYPERFPP_CAP" in err


def test_path_is_one_based(capsys):
    _, out, _ = invoke(capsys, "path", "--n", "5", "--seed", "2")
    _, _, rows = parse_csv(out)
    res = min_path(5, derive_replica(2, 0))
    assert rows[0][2] == " ".join(str(d + 1) for d in res.argmin)


@pytest.mark.parametrize("argv", [
    ["convergence", "--n-values", "4,6", "--reps", "5"],
    ["independent", "--n-values", "5,20"],
    ["enumerate", "--n", "6", "--reps", "4"],
    ["enumerate", "--n", "6", "--reps", "2", "--first", "1,2", "--last", "6", "--x", "2"],
    ["bounds", "--n-values", "100,1e16"],
    ["goodedges", "--n", "1000", "--t-values", "0.1,0.5", "--reps", "3"],
    ["secondmoment", "--n", "6", "--reps", "50"],
])
def test_every_subcommand_runs(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 0, err
    echo, header, rows = parse_csv(out)
    assert echo[0].startswith("#hyperfpp=") and f"subcommand={argv[0]}" in echo
    assert rows and all(len(r) == len(header) for r in rows)


def test_enumerate_echoes_resolved_sets(capsys):
    _, out, _ = invoke(capsys, "enumerate", "--n", "7", "--reps", "1")
    echo, _, _ = parse_csv(out)
    assert "first=1" in echo and "last=7" in echo


def test_bounds_blank_t3_below_threshold(capsys):
    _, out, _ = invoke(capsys, "bounds", "--n-values", "100")
    _, header, rows = parse_csv(out)
    assert rows[0][header.index("t3_log")] == ""


def test_nearest_rank():
    v = np.arange(1.0, 11.0)
    assert nearest_rank(v, 0.5) == 5.0
    assert nearest_rank(v, 0.05) == 1.0
    assert nearest_rank(v, 0.95) == 10.0
    assert nearest_rank(v, 0.51) == 6.0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hyperfpp", "fnk", "--n", "4"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.splitlines()[2].startswith("0,21,")
