# test_analysis.py
import pickle

import pandas as pd
import pytest

from analysis import (
    SWEEP_COLUMNS,
    SweepGrid,
    SweepPointError,
    bound_envelope,
    fit_exponent,
    format_fits,
    load_rows,
    run_point,
    save_rows,
    sweep,
)
from graph_core import SpannerDomainError


def test_grid_points_and_edges():
    grid = SweepGrid("greedy", n_values=(10, 100), s_values=(2, 4), k_values=(2,), seeds=(1, 2))
    points = grid.points()
    assert len(points) == 8
    assert points[0] == (10, 2, 2, 1)
    assert grid.edge_count(100) == 1000
    assert grid.edge_count(10) == 32
    assert grid.edge_count(4) == 6
    assert "jobs" not in grid.config()


def test_grid_validation():
    with pytest.raises(SpannerDomainError):
        SweepGrid("bfs", n_values=(10,), s_values=(2,))
    with pytest.raises(SpannerDomainError):
        SweepGrid("greedy", n_values=(), s_values=(2,))
    with pytest.raises(SpannerDomainError):
        SweepGrid("greedy", n_values=(10,), s_values=(2,), partition_mode="round-robin")


def test_bound_envelope():
    assert bound_envelope("additive2", 100, 4, None) == pytest.approx(2 * 1000 + 400)
    assert bound_envelope("additive2", 100, 4, None, duplicated=True) == pytest.approx(4000)
    assert bound_envelope("greedy", 100, 4, 2) == pytest.approx(4000)
    assert bound_envelope("send-all", 10, 3, None) == 300
    with pytest.raises(SpannerDomainError):
        bound_envelope("baswana-sen", 100, 4, None)


def test_run_point_row():
    grid = SweepGrid("greedy", n_values=(20,), s_values=(3,), k_values=(2,))
    row = run_point(grid, 20, 3, 2, 1)
    assert set(row) == set(SWEEP_COLUMNS)
    assert row["verified"] == 1
    assert row["envelope_ratio"] > 0


def test_run_point_wraps_errors():
    grid = SweepGrid("baswana-sen", n_values=(20,), s_values=(2,))
    with pytest.raises(SweepPointError) as excinfo:
        run_point(grid, 20, 2, None, 1)
    err = excinfo.value
    assert err.coordinates["protocol"] == "baswana-sen"
    assert "seed=1" in str(err)
    assert isinstance(err.__cause__, SpannerDomainError)

    restored = pickle.loads(pickle.dumps(err))
    assert str(restored) == str(err)


def test_sweep_rows_in_grid_order(tmp_path):
    grid = SweepGrid("additive2", n_values=(16, 24), s_values=(2,), seeds=(1, 2))
    df = sweep(grid, progress=False)
    assert list(df.columns) == SWEEP_COLUMNS
    assert df["n"].tolist() == [16, 16, 24, 24]
    assert df["seed"].tolist() == [1, 2, 1, 2]

    path = tmp_path / "rows.csv"
    save_rows(df, path, "spanner-sim sweep", grid.config())
    text = path.read_text(encoding="utf-8")
    assert text.startswith("# spanner-sim sweep\n")
    loaded = load_rows(path)
    assert loaded["total_bits"].tolist() == df["total_bits"].tolist()


def test_sweep_is_deterministic():
    grid = SweepGrid("simultaneous", n_values=(20,), s_values=(2, 4), k_values=(2,), seeds=(3,))
    first = sweep(grid, progress=False)
    second = sweep(grid, progress=False)
    pd.testing.assert_frame_equal(first, second)


def test_fit_exponent_exact():
    rows = pd.DataFrame({
        "n": [100, 100, 200, 200, 400, 400, 800],
        "s": [4] * 7,
        "total_bits": [3 * n ** 1.5 for n in (100, 100, 200, 200, 400, 400, 800)],
    })
    fit = fit_exponent(rows, "n", {"s": 4})
    assert fit["slope"] == pytest.approx(1.5)
    assert fit["r2"] == pytest.approx(1.0)
    assert fit["points"] == 4

    text = format_fits([fit], {"variable": "n"})
    assert text.startswith("# fit\n")
    assert '"slope"' in text


def test_fit_needs_three_values():
    rows = pd.DataFrame({"n": [100, 200], "total_bits": [10, 20]})
    with pytest.raises(SpannerDomainError):
        fit_exponent(rows, "n")


def test_fit_rejects_unfixed_coordinates():
    rows = pd.DataFrame({
        "n": [100, 200, 400, 100, 200, 400],
        "s": [4, 4, 4, 8, 8, 8],
        "total_bits": [10, 20, 40, 15, 30, 60],
    })
    with pytest.raises(SpannerDomainError):
        fit_exponent(rows, "n")
    fit = fit_exponent(rows, "n", {"s": 8})
    assert fit["slope"] == pytest.approx(1.0)


def test_grid_sampling_constants():
    grid = SweepGrid("additive-k", n_values=(20,), s_values=(2,), k_values=(4,),
                     c_r1_k=3.0, c_rate=0.5)
    plan = grid.plan()
    assert (plan.c_r1_k, plan.c_rate) == (3.0, 0.5)
    assert grid.config()["c_r1_k"] == 3.0
    with pytest.raises(ValueError):
        SweepGrid("greedy", n_values=(20,), s_values=(2,), c_rate=0.0)


@pytest.mark.slow
def test_additive2_slope_in_s():
    # m = n: рассылки BFS-деревьев доминируют над отчётами игроков
    grid = SweepGrid(
        "additive2", n_values=(2048,), s_values=(4, 16, 64), seeds=(1, 2, 3, 4, 5),
        edge_exponent=1.0, edge_factor=1.0, c_sample=4.0,
    )
    fit = fit_exponent(sweep(grid, progress=False), "s", {"n": 2048})
    assert 0.35 <= fit["slope"] <= 0.65


@pytest.mark.slow
def test_greedy_slope_in_n():
    grid = SweepGrid("greedy", n_values=(128, 512, 2048), s_values=(4,), k_values=(2,), seeds=(1,))
    fit = fit_exponent(sweep(grid, progress=False), "n", {"s": 4})
    assert 1.35 <= fit["slope"] <= 1.75


if __name__ == '__main__':
    test_grid_points_and_edges()
    test_fit_exponent_exact()
    print("✅ analysis OK")
