import math
import threading

import pandas as pd

from ragalib.network import NetworkConfig
from ragalib.result_collector import ResultCollector
from ragalib.selection import MetricPair, SweepCell


def make_cell(row, failed=False):
    return SweepCell(
        row=row,
        net_cfg=NetworkConfig(2, 4, "sigmoid", "identity"),
        metrics=MetricPair(math.nan, math.nan) if failed else MetricPair(2.5, 2.0),
        parameter_count=17,
        train_seconds=0.25,
        seed=7 ^ row,
        note="diverged" if failed else "",
        failed=failed,
        printed_label="N^{2-4-1}",
        reported=MetricPair(2.521, 2.071),
    )


class TestResultCollector:
    def test_concurrent_records_get_unique_iteration_numbers(self, tmp_path):
        collector = ResultCollector(output_dir=str(tmp_path))
        threads = [
            threading.Thread(target=collector.record_cell, args=(make_cell(r),))
            for r in range(1, 21)
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(r["iteration_number"] for r in collector.results) == list(range(20))
        assert sorted(r["row"] for r in collector.results) == list(range(1, 21))

    def test_write_then_append(self, tmp_path):
        collector = ResultCollector(run_id="sweep-a", output_dir=str(tmp_path))
        collector.record_cell(make_cell(1))
        collector.record_cell(make_cell(2, failed=True))
        path = collector.write_to_parquet()
        assert path == str(tmp_path / "sweep-a.parquet")

        df = pd.read_parquet(path)
        assert len(df) == 2
        assert set(df["run_id"]) == {"sweep-a"}
        assert df.loc[df["row"] == 1, "reported_rmse"].item() == 2.521
        assert df["failed"].tolist() == [False, True]
        assert df["seed"].tolist() == [str(7 ^ 1), str(7 ^ 2)]

        collector.reset()
        collector.record_cell(make_cell(3))
        collector.write_to_parquet()
        assert len(pd.read_parquet(path)) == 3

    def test_nothing_to_write(self, tmp_path):
        collector = ResultCollector(run_id="empty", output_dir=str(tmp_path))
        path = collector.write_to_parquet()
        assert not (tmp_path / "empty.parquet").exists()
        assert path.endswith("empty.parquet")
