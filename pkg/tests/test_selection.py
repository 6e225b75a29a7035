import math

import numpy as np
import pandas as pd
import pytest

from ragalib.errors import EmptyDataError, GridError, SweepError
from ragalib.network import NetworkConfig, NetworkWeights, Prediction
from ragalib.selection import (
    SWEEP_COLUMNS,
    GridEntry,
    MetricPair,
    SweepCell,
    fit_and_evaluate,
    load_grid_csv,
    mae,
    metrics,
    read_sweep_csv,
    residuals,
    rmse,
    run_sweep,
    select_best,
    select_best_frame,
    table1c_grid,
)
from ragalib.series import ScalerKind, ScalingSpec, SplitSpec
from ragalib.training import TrainConfig

QUICK = TrainConfig(max_epochs=30, restarts=1)


def cell(row, q, rmse_, mae_, failed=False):
    return SweepCell(
        row=row,
        net_cfg=NetworkConfig(2, q),
        metrics=MetricPair(rmse_, mae_),
        parameter_count=NetworkConfig(2, q).parameter_count,
        train_seconds=0.0,
        seed=row,
        failed=failed,
    )


class TestMetrics:
    def test_residuals(self):
        assert residuals([Prediction(2, 1.0, 1.0), Prediction(3, 2.0, 2.0)]).tolist() == [0.0, 0.0]
        assert residuals([Prediction(2, 3.0, 1.0)]).tolist() == [2.0]

    def test_mae(self):
        assert mae([1, -2, 3]) == 2.0
        assert mae([0, 0]) == 0.0

    def test_rmse(self):
        assert rmse([3, 4]) == pytest.approx(3.5355339059, abs=1e-9)
        assert rmse([0, 0, 0]) == 0.0
        assert rmse([1, -2, 3]) == pytest.approx(2.1602468995, abs=1e-9)

    def test_match_loop_oracle(self):
        rng = np.random.default_rng(8)
        e = rng.normal(size=50)
        assert mae(e) == pytest.approx(sum(abs(x) for x in e) / 50, rel=1e-12)
        assert rmse(e) == pytest.approx(math.sqrt(sum(x * x for x in e) / 50), rel=1e-12)

    def test_rmse_dominates_mae(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            e = rng.normal(scale=rng.uniform(0.1, 10), size=int(rng.integers(1, 30)))
            assert rmse(e) >= mae(e) - 1e-12

    def test_rmse_scales_with_residuals(self):
        e = np.random.default_rng(5).normal(size=40)
        for c in (-3.0, 0.5, 10.0):
            assert rmse(c * e) == pytest.approx(abs(c) * rmse(e), rel=1e-12)
            assert mae(c * e) == pytest.approx(abs(c) * mae(e), rel=1e-12)

    def test_rmse_squared_is_mean_square(self):
        e = np.random.default_rng(6).normal(scale=3.0, size=237)
        assert rmse(e) ** 2 * len(e) == pytest.approx(np.sum(e**2), rel=1e-9)

    @pytest.mark.parametrize("fn", [mae, rmse])
    def test_empty(self, fn):
        with pytest.raises(EmptyDataError):
            fn([])

    def test_empty_predictions(self):
        with pytest.raises(EmptyDataError):
            metrics([])


class TestTable1cGrid:
    def test_has_38_rows_in_order(self):
        grid = table1c_grid()
        assert len(grid) == 38
        assert [e.row for e in grid] == list(range(1, 39))

    @pytest.mark.parametrize(
        "row, p, q, hidden",
        [(1, 1, 1, "tanh"), (10, 2, 4, "sigmoid"), (29, 4, 6, "sigmoid")],
    )
    def test_published_rows(self, row, p, q, hidden):
        entry = table1c_grid()[row - 1]
        assert (entry.net_cfg.p, entry.net_cfg.q) == (p, q)
        assert entry.net_cfg.hidden_act.value == hidden
        assert entry.net_cfg.output_act.value == "identity"
        assert entry.net_cfg.label == f"N^{{{p}-{q}-1}}"

    def test_parameter_count_of_every_row(self):
        for entry in table1c_grid():
            cfg = entry.net_cfg
            assert cfg.parameter_count == cfg.q * (cfg.p + 2) + 1
            assert NetworkWeights.zeros(cfg).flatten().size == cfg.parameter_count

    def test_row_10_carries_reported_metrics(self):
        assert table1c_grid()[9].reported == MetricPair(2.521, 2.071)

    def test_label_disagreement_is_noted(self):
        entry = table1c_grid()[10]
        assert entry.net_cfg.q == 5
        assert "hidden units" in entry.note or "units column" in entry.note

    def test_unpacks_as_config_pair(self):
        net_cfg, train_cfg = table1c_grid(QUICK)[0]
        assert net_cfg == NetworkConfig(1, 1, "tanh", "identity")
        assert train_cfg == QUICK


class TestLoadGridCsv:
    def test_minimal_columns(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("p,q,hidden_act,output_act\n1,2,tanh,identity\n3,1,sigmoid,sigmoid\n")
        grid = load_grid_csv(path)
        assert [e.row for e in grid] == [1, 2]
        assert grid[1].net_cfg == NetworkConfig(3, 1, "sigmoid", "sigmoid")
        assert grid[0].reported is None

    def test_empty_file(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("")
        with pytest.raises(GridError):
            load_grid_csv(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("p,q,hidden_act,output_act\n")
        with pytest.raises(GridError):
            load_grid_csv(path)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("p,q,hidden_act\n1,1,tanh\n")
        with pytest.raises(GridError, match="output_act"):
            load_grid_csv(path)

    def test_ragged_rows(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("p,q,hidden_act,output_act\n1,1,tanh,identity\n2,2,tanh,identity,x,y\n")
        with pytest.raises(GridError):
            load_grid_csv(path)

    def test_bad_activation(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("p,q,hidden_act,output_act\n1,1,relu,identity\n")
        with pytest.raises(GridError, match="row 1"):
            load_grid_csv(path)


class TestSelectBest:
    def test_minimal_rmse(self):
        assert select_best([cell(1, 2, 3.0, 2.0), cell(2, 2, 2.5, 2.2)]) == 1

    def test_tie_prefers_fewer_parameters(self):
        assert select_best([cell(1, 5, 2.5, 2.0), cell(2, 3, 2.5, 2.0)]) == 1

    def test_then_lower_mae(self):
        assert select_best([cell(1, 3, 2.5, 2.1), cell(2, 3, 2.5, 2.0)]) == 1

    def test_then_enumeration_order(self):
        assert select_best([cell(1, 3, 2.5, 2.0), cell(2, 3, 2.5, 2.0)]) == 0

    def test_diverged_cells_are_skipped(self):
        cells = [cell(1, 1, math.nan, math.nan, failed=True), cell(2, 4, 9.0, 8.0)]
        assert select_best(cells) == 1

    def test_all_diverged(self):
        with pytest.raises(SweepError):
            select_best([cell(1, 1, math.nan, math.nan, failed=True)])


class TestSelectBestFrame:
    def frame(self, rmse_, params, mae_, **extra):
        return pd.DataFrame({"rmse": rmse_, "params": params, "mae": mae_, **extra})

    def test_same_tie_rules_as_cells(self):
        assert select_best_frame(self.frame([2.5, 2.5], [21, 13], [2.0, 2.0])) == 1
        assert select_best_frame(self.frame([2.5, 2.5], [13, 13], [2.1, 2.0])) == 1
        assert select_best_frame(self.frame([2.5, 2.5], [13, 13], [2.0, 2.0])) == 0

    def test_nan_rows_never_win(self):
        assert select_best_frame(self.frame([math.nan, 9.0], [5, 5], [math.nan, 8.0])) == 1

    def test_failed_column_is_honoured(self):
        df = self.frame([1.0, 2.0], [5, 5], [1.0, 2.0], failed=[True, False])
        assert select_best_frame(df) == 1

    def test_all_failed(self):
        with pytest.raises(SweepError):
            select_best_frame(self.frame([math.nan], [5], [math.nan]))

    def test_agrees_with_sweep_csv(self, corpus, tmp_path):
        report = run_sweep(table1c_grid(QUICK)[:4], corpus, base_seed=1)
        path = tmp_path / "sweep.csv"
        report.write_csv(path)
        assert select_best_frame(read_sweep_csv(path)) == report.best


class TestFitAndEvaluate:
    def test_holdout_scores_tail_only(self, corpus):
        result = fit_and_evaluate(
            NetworkConfig(2, 2), QUICK, corpus, split_spec=SplitSpec(0.1)
        )
        assert len(result.predictions) == 24
        assert result.predictions[0].t == 217
        assert result.model.metadata["holdout_fraction"] == 0.1

    def test_in_sample_by_default(self, corpus):
        result = fit_and_evaluate(NetworkConfig(2, 2), QUICK, corpus)
        assert len(result.predictions) == 238
        assert result.model.scaler_out.kind is ScalerKind.MINMAX


class TestRunSweep:
    def test_single_cell(self, corpus):
        report = run_sweep([(NetworkConfig(1, 1), QUICK)], corpus)
        assert report.best == 0
        assert len(report.cells) == 1

    def test_cell_seed_is_base_xor_row(self, corpus):
        grid = [(NetworkConfig(1, 1), QUICK), (NetworkConfig(1, 2), QUICK)]
        report = run_sweep(grid, corpus, base_seed=7)
        assert [c.seed for c in report.cells] == [7 ^ 1, 7 ^ 2]

    def test_thread_pool_matches_serial(self, corpus):
        grid = table1c_grid(QUICK)[:4]
        serial = run_sweep(grid, corpus, base_seed=3).to_frame(timings=False)
        pooled = run_sweep(grid, corpus, base_seed=3, jobs=3).to_frame(timings=False)
        pd.testing.assert_frame_equal(serial, pooled)

    def test_diverged_cell_is_reported(self, corpus):
        wild = TrainConfig(eta=1e6, max_epochs=500, patience=500, restarts=1)
        grid = [(NetworkConfig(2, 2, "tanh", "identity"), wild), (NetworkConfig(1, 1), QUICK)]
        report = run_sweep(grid, corpus, scaling=ScalingSpec(ScalerKind.NONE))
        assert report.cells[0].failed
        assert math.isnan(report.cells[0].metrics.rmse)
        assert "diverged" in report.cells[0].note
        assert report.best == 1

    def test_all_diverged_raises(self, corpus):
        wild = TrainConfig(eta=1e6, max_epochs=500, patience=500, restarts=1)
        with pytest.raises(SweepError):
            run_sweep(
                [(NetworkConfig(2, 2, "tanh", "identity"), wild)],
                corpus,
                scaling=ScalingSpec(ScalerKind.NONE),
            )

    def test_empty_grid(self, corpus):
        with pytest.raises(GridError):
            run_sweep([], corpus)

    def test_csv_is_reproducible(self, corpus, tmp_path):
        grid = table1c_grid(QUICK)[:3]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_sweep(grid, corpus, base_seed=7).write_csv(a)
        run_sweep(grid, corpus, base_seed=7).write_csv(b)
        assert a.read_bytes() == b.read_bytes()

        df = read_sweep_csv(a)
        assert list(df.columns) == SWEEP_COLUMNS
        assert (df["seconds"] == 0).all()
        assert df["seed"].tolist() == [str(7 ^ r) for r in (1, 2, 3)]

    def test_records_into_collector(self, corpus, tmp_path):
        from ragalib.result_collector import ResultCollector

        collector = ResultCollector(run_id="unit", output_dir=str(tmp_path))
        report = run_sweep(table1c_grid(QUICK)[:2], corpus, collector=collector)
        assert report.run_id == "unit"
        assert sorted(r["row"] for r in collector.results) == [1, 2]


@pytest.mark.slow
class TestTable1cSweep:
    def test_an_n241_cell_is_near_the_best(self, corpus):
        report = run_sweep(table1c_grid(), corpus, base_seed=7)
        assert len(report.cells) == 38
        best = report.best_cell.metrics.rmse
        n241 = [
            c.metrics.rmse
            for c in report.cells
            if (c.net_cfg.p, c.net_cfg.q) == (2, 4) and not c.failed
        ]
        assert min(n241) <= 1.15 * best
