"""Benchmark harness: a grid of mining runs, one CSV row per run.

Every cell runs in a fresh interpreter so a hung miner can be killed at the
timeout and the peak resident size belongs to that run alone. Rows are
written and flushed as soon as each cell finishes.

CSV layout::

    # key: value              metadata (memory method, timeout, ...)
    algo,dataset,sigma,maxgap,maxspan,patterns,time_ms,peak_mem_bytes
    # status=timeout ...      precedes a row that did not complete

Unbounded ``maxgap``/``maxspan`` are written as ``inf``. Rows that timed
out or failed leave ``patterns``, ``time_ms`` and ``peak_mem_bytes`` empty.
"""
from __future__ import annotations

import csv
import itertools
import json
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, TextIO

try:
    import resource
except ImportError:  # not on every platform
    resource = None

CSV_COLUMNS = ("algo", "dataset", "sigma", "maxgap", "maxspan", "patterns", "time_ms", "peak_mem_bytes")
DEFAULT_TIMEOUT = 300.0
ALGOS = ("negpspan", "ensp")


@dataclass(frozen=True)
class BenchCell:
    algo: str
    dataset: str
    sigma: float | int
    maxgap: int | None = None
    maxspan: int | None = None
    max_length: int | None = 5
    nu: int | None = None
    partner_frac: float = 1.0


@dataclass
class BenchRow:
    algo: str
    dataset: str
    sigma: float | int
    maxgap: int | None
    maxspan: int | None
    patterns: int | None = None
    time_ms: float | None = None
    peak_mem_bytes: int | None = None
    status: str = "ok"  # ok, timeout, error
    message: str = ""

    def csv_fields(self):
        def bound(v):
            return "inf" if v is None else str(v)

        def opt(v):
            return "" if v is None else str(v)

        return [self.algo, self.dataset, str(self.sigma), bound(self.maxgap), bound(self.maxspan),
                opt(self.patterns), "" if self.time_ms is None else f"{self.time_ms:.1f}",
                opt(self.peak_mem_bytes)]


def memory_method() -> str:
    return "ru_maxrss" if resource is not None else "tracemalloc"


def expand_grid(algos: Iterable[str], datasets: Iterable[str], sigmas: Iterable,
                maxgaps: Iterable = (None,), maxspans: Iterable = (None,), **fixed) -> list:
    """Cartesian product of the axes, in a stable order.

    eNSP cannot honour gap constraints, so it only gets the unconstrained
    cells; duplicates that this creates are dropped.
    """
    cells, seen = [], set()
    for algo, ds, sigma, mg, ms in itertools.product(algos, datasets, sigmas, maxgaps, maxspans):
        if algo not in ALGOS:
            raise ValueError(f"unknown algorithm {algo!r}")
        if algo == "ensp" and (mg is not None or ms is not None):
            continue
        cell = BenchCell(algo, ds, sigma, mg, ms, **fixed)
        if cell not in seen:
            seen.add(cell)
            cells.append(cell)
    return cells


def load_dataset(spec: str):
    """``gen:key=value,...`` builds a synthetic db, anything else is an SPMF path."""
    from .generator import GenParams, generate
    from .io import read_spmf

    if spec.startswith("gen:"):
        kwargs = {}
        body = spec[4:]
        for part in filter(None, body.split(",")):
            key, _, value = part.partition("=")
            kwargs[key.strip()] = float(value) if key.strip() == "min_occ_freq" else int(value)
        db, _ = generate(GenParams(**kwargs))
        return db
    with open(spec, encoding="utf-8") as fh:
        return read_spmf(fh)


def count_patterns(cell: BenchCell, db) -> int:
    from . import ensp, negpspan

    if cell.algo == "negpspan":
        cfg = negpspan.MinerConfig(sigma=cell.sigma, maxgap=cell.maxgap, maxspan=cell.maxspan,
                                   max_length=cell.max_length, nu=cell.nu)
        return sum(1 for _ in negpspan.mine(db, cfg))
    if cell.maxgap is not None or cell.maxspan is not None:
        raise ValueError("eNSP does not support gap constraints")
    return sum(1 for _ in ensp.mine(db, cell.sigma, cell.partner_frac, cell.max_length))


def _measure(cell: BenchCell) -> dict:
    db = load_dataset(cell.dataset)
    if resource is None:
        import tracemalloc

        tracemalloc.start()
    t0 = time.perf_counter()
    n = count_patterns(cell, db)
    elapsed = (time.perf_counter() - t0) * 1000
    if resource is None:
        peak = tracemalloc.get_traced_memory()[1]
    else:
        # kilobytes on Linux, bytes on macOS
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        if sys.platform != "darwin":
            peak *= 1024
    return {"patterns": n, "time_ms": elapsed, "peak_mem_bytes": peak}


def run_cell(cell: BenchCell, timeout=DEFAULT_TIMEOUT, measure_memory=True) -> BenchRow:
    row = BenchRow(cell.algo, cell.dataset, cell.sigma, cell.maxgap, cell.maxspan)
    cmd = [sys.executable, "-m", "negseq.bench", json.dumps(asdict(cell))]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired:
        row.status, row.message = "timeout", f"exceeded {timeout:g} s"
        return row
    if proc.returncode != 0:
        lines = proc.stderr.strip().splitlines()
        row.status, row.message = "error", lines[-1] if lines else f"exit code {proc.returncode}"
        return row
    result = json.loads(proc.stdout.strip().splitlines()[-1])
    row.patterns = result["patterns"]
    row.time_ms = result["time_ms"]
    row.peak_mem_bytes = result["peak_mem_bytes"] if measure_memory else None
    return row


def write_header(stream: TextIO, timeout, parallel):
    stream.write(f"# memory: {'disabled (parallel run)' if parallel else memory_method()}\n")
    stream.write(f"# timeout_s: {timeout:g}\n")
    stream.write(",".join(CSV_COLUMNS) + "\n")
    stream.flush()


def write_row(stream: TextIO, row: BenchRow):
    if row.status != "ok":
        msg = row.message.replace("\n", " ")
        stream.write(f"# status={row.status} algo={row.algo} dataset={row.dataset} "
                     f"sigma={row.sigma}: {msg}\n")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(row.csv_fields())
    stream.flush()


def run_bench(cells: list, stream: TextIO, timeout=DEFAULT_TIMEOUT, jobs=1) -> list:
    """Run every cell and stream the CSV; returns the rows.

    ``jobs > 1`` runs cells concurrently and leaves the memory column empty
    (concurrent runs would disturb each other's measurements). Rows are
    still written in grid order.
    """
    parallel = jobs > 1
    write_header(stream, timeout, parallel)
    rows = []
    if not parallel:
        for cell in cells:
            row = run_cell(cell, timeout)
            write_row(stream, row)
            rows.append(row)
        return rows
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_cell, c, timeout, False) for c in cells]
        for fut in futures:
            row = fut.result()
            write_row(stream, row)
            rows.append(row)
    return rows


def _child(argv):
    cell = BenchCell(**json.loads(argv[0]))
    print(json.dumps(_measure(cell)))


if __name__ == "__main__":
    _child(sys.argv[1:])
