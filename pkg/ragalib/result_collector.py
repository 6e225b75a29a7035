import os
import threading
import time
import uuid
from typing import TYPE_CHECKING

import pyarrow as pa
import pyarrow.parquet as pq

if TYPE_CHECKING:
    from ragalib.selection import SweepCell


class ResultCollector:
    """Thread-safe sink for sweep cells, flushed to a parquet file.

    Workers call record_cell() concurrently; rows keep arrival order, which
    depends on scheduling, so readers should sort by `row`.
    """

    def __init__(self, run_id: str = None, output_dir: str = "/tmp/run_stats"):
        self.run_id = run_id or str(uuid.uuid4())
        self.output_dir = output_dir

        # Lock for thread-safe result collection
        self._lock = threading.Lock()
        self.results = []
        self.iteration_counter = 0

        os.makedirs(output_dir, exist_ok=True)

    def reset(self):
        with self._lock:
            self.results = []
            self.iteration_counter = 0

    def record_cell(self, cell: "SweepCell") -> None:
        row = {
            "run_id": self.run_id,
            "row": cell.row,
            "label": cell.label,
            "printed_label": cell.printed_label,
            "p": cell.net_cfg.p,
            "q": cell.net_cfg.q,
            "hidden_act": cell.net_cfg.hidden_act.value,
            "output_act": cell.net_cfg.output_act.value,
            "rmse": cell.metrics.rmse,
            "mae": cell.metrics.mae,
            "reported_rmse": cell.reported.rmse if cell.reported else None,
            "reported_mae": cell.reported.mae if cell.reported else None,
            "params": cell.parameter_count,
            "seconds": cell.train_seconds,
            "seed": str(cell.seed),
            "failed": cell.failed,
            "note": cell.note,
            "end_time": time.time(),
        }
        # Set iteration_number inside lock to avoid race condition
        with self._lock:
            row["iteration_number"] = self.iteration_counter
            self.results.append(row)
            self.iteration_counter += 1

    def write_to_parquet(self, filename: str = None) -> str:
        """Write all collected cells to a parquet file.

        If the file already exists, appends to it instead of overwriting.
        Returns the file path.
        """
        filename = filename or f"{self.run_id}.parquet"
        filepath = os.path.join(self.output_dir, filename)

        with self._lock:
            rows = list(self.results)
        if not rows:
            print("No results to write.")
            return filepath

        new_table = pa.Table.from_pylist(rows)

        if os.path.exists(filepath):
            try:
                existing_table = pq.read_table(filepath)
                combined_table = pa.concat_tables([existing_table, new_table])
                pq.write_table(combined_table, filepath)
                print(
                    f"Appended {len(rows)} results to {filepath} "
                    f"(total: {len(combined_table)} rows)"
                )
                return filepath
            except Exception as e:
                print(f"Error reading existing file, overwriting: {e}")
        pq.write_table(new_table, filepath)
        print(f"Wrote {len(rows)} sweep results to {filepath}")
        return filepath
