"""Batch analysis of function files and the qubit-count CSV."""
from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .counting import CountBackend
from .embedder import WidthReport, width_report
from .errors import QembedError
from .function import BooleanFunction, OutputHistogram, histogram
from .pla_io import load_function

SUFFIXES = (".pla", ".tt")


@dataclass(frozen=True)
class RunConfig:
    inputs: tuple[Path, ...]
    format: str = "auto"
    backend: CountBackend = field(default_factory=CountBackend)
    implicit_zero: bool = False
    skip_reversible: bool = False
    emit: str = "summary"
    output_path: Path | None = None

    def __post_init__(self):
        if not self.inputs:
            raise ValueError("at least one input is required")


@dataclass
class Analysis:
    path: Path
    function: BooleanFunction
    histogram: OutputHistogram
    widths: WidthReport

    @property
    def reversible(self) -> bool:
        f = self.function
        return f.n == f.m and all(mu == 1 for _, mu in self.histogram.items())


def expand_inputs(inputs: Iterable[str | Path], fmt: str = "auto") -> list[Path]:
    """Files as given plus matching files found in directories, sorted by path."""
    paths = set()
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            for child in p.rglob("*"):
                if child.is_file() and (fmt != "auto" or child.suffix.lower() in SUFFIXES):
                    paths.add(child)
        else:
            paths.add(p)
    return sorted(paths)


def analyze(path: str | Path, cfg: RunConfig) -> Analysis:
    path = Path(path)
    f = load_function(path, cfg.format)
    h = histogram(f, cfg.backend, implicit_zero=cfg.implicit_zero)
    return Analysis(path, f, h, width_report(f, h))


def analyze_file(path: str | Path, cfg: RunConfig) -> WidthReport | None:
    """Width figures for one file; None for a skipped reversible function."""
    a = analyze(path, cfg)
    if cfg.skip_reversible and a.reversible:
        return None
    return a.widths


def worker_count() -> int:
    env = os.environ.get("QEMBED_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


@dataclass
class BatchResult:
    reports: list[WidthReport]
    errors: list[tuple[Path, str]]
    skipped: list[Path]


def analyze_batch(paths: Sequence[Path], cfg: RunConfig, workers: int | None = None) -> BatchResult:
    """Analyze files concurrently; results come back in input (sorted) order."""

    def one(path):
        try:
            return analyze_file(path, cfg), None
        except (QembedError, OSError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    workers = workers or worker_count()
    if workers > 1 and len(paths) > 1:
        with ThreadPoolExecutor(workers) as pool:
            outcomes = list(pool.map(one, paths))
    else:
        outcomes = [one(p) for p in paths]
    result = BatchResult([], [], [])
    for path, (rep, err) in zip(paths, outcomes):
        if err is not None:
            result.errors.append((path, err))
        elif rep is None:
            result.skipped.append(path)
        else:
            result.reports.append(rep)
    return result


def average_reduction(reports: Sequence[WidthReport]) -> float:
    """Equal-weight mean of (minimal - encoded) / minimal, in percent."""
    return 100.0 * sum((r.minimal - r.encoded) / r.minimal for r in reports) / len(reports)


def report_csv(reports: Sequence[WidthReport]) -> str:
    if not reports:
        raise ValueError("report_csv needs at least one report")
    buf = io.StringIO()
    buf.write("name,n,m,bennett,minimal,encoded\n")
    for r in reports:
        buf.write(",".join(str(v) for v in r.row()) + "\n")
    buf.write(f"# avg_reduction_vs_minimal={average_reduction(reports):.2f}\n")
    buf.write("# averaging=equal weight per function, mean of (minimal-encoded)/minimal\n")
    return buf.getvalue()


def format_summary(a: Analysis) -> str:
    from .phcoder import build_ph_tree, assign_codes

    f, h, w = a.function, a.histogram, a.widths
    cb = assign_codes(build_ph_tree(h))
    lines = [f"{f.name}: n={f.n} m={f.m} cubes={len(f.cubes)}"]
    if len(h) <= 64:
        pw = max(f.m, 3)
        cw = max(w.encoded, 4)
        lines.append(f"  {'i':>3}  {'p_i':<{pw}}  {'mu(p_i)':>8}  {'code(p_i)':<{cw}}")
        for i, (p, mu, word) in enumerate(cb.rows(), 1):
            shown = word + "-" * (cb.total_width - len(word))
            lines.append(f"  {i:>3}  {str(p):<{pw}}  {mu:>8}  {shown:<{cw}}")
    else:
        lines.append(f"  {len(h)} distinct output patterns (table omitted)")
    lines.append(
        f"  qubits: bennett={w.bennett} minimal={w.minimal} encoded={w.encoded}"
    )
    return "\n".join(lines) + "\n"
