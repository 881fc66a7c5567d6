import json

import pytest

from pigeonstats import cli
from pigeonstats.errors import ConditioningStarvedError
from pigeonstats.output import data_section, read_table


def run(argv):
    return cli.main(argv)


def test_empirical_hist_hand_case(tmp_path):
    out = tmp_path / "eh.csv"
    assert run(["empirical-hist", "--N", "5", "--s", "1", "--out", str(out)]) == 0
    meta, cols, rows = read_table(str(out))
    assert meta["N"] == 5 and meta["n_points"] == 5
    assert cols == ["j", "proportion"]
    by_j = {r[0]: r[1] for r in rows}
    assert (by_j[0], by_j[1], by_j[2]) == (0.2, 0.6, 0.2)


def test_empirical_hist_s_zero(tmp_path):
    out = tmp_path / "eh0.csv"
    assert run(["empirical-hist", "--N", "50", "--s", "0", "--jmax", "0",
                "--out", str(out)]) == 0
    _, _, rows = read_table(str(out))
    assert rows[0] == (0, 1.0)
    assert rows[1] == ("tail", 0.0)


def test_limit_hist_partition_and_poisson(tmp_path):
    out = tmp_path / "lh.json"
    assert run(["limit-hist", "--s", "1", "--samples", "50000", "--jmax", "8",
                "--out", str(out), "--format", "json"]) == 0
    meta, cols, rows = read_table(str(out))
    total = sum(r[1] for r in rows)
    assert abs(total - 1.0) <= 1e-12
    import math

    assert rows[0][3] == pytest.approx(math.exp(-1))


def test_compare_round_trip(tmp_path):
    out = tmp_path / "cmp.csv"
    assert run(["compare", "--N", "1000,10000", "--s", "1",
                "--samples", "50000", "--out", str(out)]) == 0
    meta, cols, rows = read_table(str(out))
    data_rows = [r for r in rows if isinstance(r[0], int)]
    summary = rows[-1]
    assert summary[0] == "max_dev"
    assert summary[-1] == max(r[-1] for r in data_rows)  # bit-exact round trip


def test_second_moment_table(tmp_path):
    out = tmp_path / "sm.csv"
    assert run(["second-moment", "--N", "100000", "--s", "1", "--out", str(out)]) == 0
    _, _, rows = read_table(str(out))
    table = {r[0]: r for r in rows}
    assert table["second_moment"][2] == 3.0
    assert table["variance"][2] == 2.0
    out2 = tmp_path / "sm2.csv"
    assert run(["second-moment", "--N", "100000", "--s", "1", "--remove-squares",
                "--out", str(out2)]) == 0
    _, _, rows2 = read_table(str(out2))
    table2 = {r[0]: r for r in rows2}
    assert table2["variance"][2] == 1.0


def test_void_table(tmp_path):
    out = tmp_path / "v.csv"
    assert run(["void", "--N", "100000", "--intervals", "0,1;2,3",
                "--samples", "50000", "--out", str(out)]) == 0
    _, _, rows = read_table(str(out))
    assert rows[0][-1] <= 0.05


def test_minkowski_table(tmp_path):
    out = tmp_path / "mk.json"
    assert run(["minkowski", "--samples", "100000", "--out", str(out),
                "--format", "json"]) == 0
    _, _, rows = read_table(str(out))
    table = {r[0]: r for r in rows}
    assert table["conditional"][1] == 1.0
    assert table["unconditional"][1] < 1.0


def test_horocycle_table(tmp_path):
    out = tmp_path / "hc.csv"
    assert run(["horocycle", "--N", "500,1000", "--samples", "50000",
                "--out", str(out)]) == 0
    _, cols, rows = read_table(str(out))
    assert cols[0] == "N" and len(rows) == 2
    out2 = tmp_path / "hc_lin.csv"
    assert run(["horocycle", "--N", "500", "--samples", "20000",
                "--section", "linear", "--out", str(out2)]) == 0
    meta2, _, _ = read_table(str(out2))
    assert meta2["nonlinear"] is False


def test_horocycle_poly_section(tmp_path):
    out = tmp_path / "hp.csv"
    assert run(["horocycle", "--N", "300", "--samples", "20000",
                "--section", "poly:x=0,1:y=0,0,1", "--out", str(out)]) == 0
    meta, _, _ = read_table(str(out))
    assert meta["nonlinear"] is True


def test_determinism_same_seed(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["limit-hist", "--s", "1", "--samples", "30000",
                    "--seed", "7", "--out", str(path)]) == 0
    assert data_section(str(a)) == data_section(str(b))


def test_different_seed_differs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["limit-hist", "--s", "1", "--samples", "30000", "--seed", "7",
                "--out", str(a)]) == 0
    assert run(["limit-hist", "--s", "1", "--samples", "30000", "--seed", "8",
                "--out", str(b)]) == 0
    assert data_section(str(a)) != data_section(str(b))


def test_exit_code_config(tmp_path):
    assert run(["empirical-hist", "--N", "100", "--alpha", "7/4",
                "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["void", "--N", "100", "--intervals", "2,1",
                "--out", str(tmp_path / "x.csv")]) == 2
    assert run(["limit-hist", "--samples", "0",
                "--out", str(tmp_path / "x.csv")]) == 2


def test_exit_code_capacity(tmp_path):
    assert run(["empirical-hist", "--N", "1000000000",
                "--out", str(tmp_path / "x.csv")]) == 3


def test_exit_code_io(tmp_path):
    missing = tmp_path / "no_such_dir" / "x.csv"
    assert run(["empirical-hist", "--N", "100", "--out", str(missing)]) == 4


def test_exit_code_starved(tmp_path, monkeypatch):
    def starved(*a, **k):
        raise ConditioningStarvedError("no conditioning events")

    monkeypatch.setattr(cli.mc, "minkowski_demo", starved)
    assert run(["minkowski", "--samples", "10000",
                "--out", str(tmp_path / "x.csv")]) == 5


def test_bad_subcommand_exits_two():
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2


def test_json_and_csv_agree(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.json"
    run(["empirical-hist", "--N", "1000", "--out", str(a)])
    run(["empirical-hist", "--N", "1000", "--out", str(b), "--format", "json"])
    _, _, rows_a = read_table(str(a))
    _, _, rows_b = read_table(str(b))
    assert rows_a == rows_b


def test_compare_poisson_flag(tmp_path):
    out = tmp_path / "c12.csv"
    run(["compare", "--N", "1000", "--samples", "20000", "--out", str(out)])
    meta, _, _ = read_table(str(out))
    assert meta["poisson_column"] == "non-limit"
    out2 = tmp_path / "c13.csv"
    run(["compare", "--N", "1000", "--alpha", "1/3", "--samples", "20000",
         "--out", str(out2)])
    meta2, _, _ = read_table(str(out2))
    assert meta2["poisson_column"] == "conjectural"


def test_threads_flag_deterministic(tmp_path):
    a, b = tmp_path / "t1.csv", tmp_path / "t2.csv"
    run(["limit-hist", "--s", "1", "--samples", "40000", "--threads", "1",
         "--out", str(a)])
    run(["limit-hist", "--s", "1", "--samples", "40000", "--threads", "2",
         "--out", str(b)])
    assert data_section(str(a)) == data_section(str(b))


def test_void_csv_cell_with_commas_round_trips(tmp_path):
    out = tmp_path / "vq.csv"
    run(["void", "--N", "10000", "--intervals", "0,1;2,3",
         "--samples", "20000", "--out", str(out)])
    _, cols, rows = read_table(str(out))
    assert len(rows[0]) == len(cols)
    assert rows[0][0] == "0,1;2,3"
