"""Parameter sweeps over simulated corpora and over the estimated topic count."""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from os import PathLike

from . import goodness
from .corpus import DocumentTermMatrix
from .lda import GibbsConfig, fit_lda
from .simgen import SimulationConfig, simulate_corpus

VARIED_FIELDS = {"topics": "k", "documents": "d", "vocabulary": "v", "doc_length": "lam"}
METRICS = ("r_squared", "mcfadden", "log_likelihood")
CSV_HEADER = ("varied", "value", "seed", "metric", "metric_value", "elapsed_ms")


class SweepCellError(ValueError):
    """A sweep cell failed; ``cell`` names it and ``__cause__`` holds the error."""

    def __init__(self, cell: str, cause: Exception):
        self.cell = cell
        super().__init__(f"sweep cell {cell}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class SweepSpec:
    varied: str
    values: tuple
    base: SimulationConfig = field(default_factory=SimulationConfig)
    seeds: tuple = (0,)
    metrics: tuple = METRICS

    def __post_init__(self):
        if self.varied not in VARIED_FIELDS:
            raise ValueError(f"varied must be one of {sorted(VARIED_FIELDS)}, got {self.varied!r}")
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        if not self.values:
            raise ValueError("values must be non-empty")
        if any(v <= 0 for v in self.values):
            raise ValueError("values must be positive")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be strictly increasing")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        bad = set(self.metrics) - set(METRICS)
        if bad or not self.metrics:
            raise ValueError(f"metrics must be a non-empty subset of {METRICS}")

    def cell_config(self, value, seed: int) -> SimulationConfig:
        return self.base.replace(**{VARIED_FIELDS[self.varied]: value, "seed": seed})


@dataclass(frozen=True)
class SweepRow:
    varied: str
    value: float
    seed: int
    metric: str
    metric_value: float
    elapsed_ms: float


@dataclass
class SweepResult:
    rows: list[SweepRow]
    provenance: dict

    def series(self, metric: str, seed: int) -> list[float]:
        """Metric values for one seed, in sweep order."""
        rows = [r for r in self.rows if r.metric == metric and r.seed == seed]
        return [r.metric_value for r in sorted(rows, key=lambda r: r.value)]

    def write_csv(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in self.rows:
                w.writerow([r.varied, _num(r.value), r.seed, r.metric, repr(r.metric_value),
                            f"{r.elapsed_ms:.3f}"])

    def write_provenance(self, path: str | PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(self.provenance, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _num(x):
    return repr(int(x)) if float(x).is_integer() else repr(float(x))


def _evaluate_cell(spec: SweepSpec, value, seed: int) -> list[SweepRow]:
    config = spec.cell_config(value, seed)
    start = time.perf_counter()
    truth = simulate_corpus(config)
    rows = []
    metrics = {}
    if "r_squared" in spec.metrics:
        metrics["r_squared"] = goodness.r_squared(truth.dtm, truth.model).r_squared
    if "mcfadden" in spec.metrics or "log_likelihood" in spec.metrics:
        lik = goodness.mcfadden_r2(truth.dtm, truth.model)
        metrics["mcfadden"] = lik.mcfadden_r2
        metrics["log_likelihood"] = lik.log_l_full
    elapsed = (time.perf_counter() - start) * 1000.0
    for name in spec.metrics:
        rows.append(SweepRow(spec.varied, value, seed, name, metrics[name], elapsed))
    return rows


def run_property_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Simulate one corpus per (value, seed) and score the generating model.

    Metrics are computed against the true Theta and Phi, so they describe the
    best fit any estimator could reach on that corpus.
    """
    cells = [(value, seed) for value in spec.values for seed in spec.seeds]

    def run(cell):
        try:
            return _evaluate_cell(spec, *cell)
        except Exception as exc:
            raise SweepCellError(f"{spec.varied}={cell[0]}, seed={cell[1]}", exc) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(run, cells))
    else:
        batches = [run(c) for c in cells]
    rows = sorted((r for b in batches for r in b), key=lambda r: (r.value, r.seed))
    provenance = {
        "kind": "property",
        "varied": spec.varied,
        "metrics": list(spec.metrics),
        "cells": [
            {"value": v, "seed": s, "config": spec.cell_config(v, s).to_dict()} for v, s in cells
        ],
    }
    return SweepResult(rows, provenance)


def run_k_sweep(
    dtm: DocumentTermMatrix, k_values, gibbs: GibbsConfig, threads: int = 1
) -> SweepResult:
    """Fit LDA at each k and score the fit in-sample.

    ``gibbs`` is a template; its ``k`` is replaced per cell while priors,
    chain lengths and seed are kept.
    """
    k_values = [int(k) for k in k_values]
    if not k_values:
        raise ValueError("k_values must be non-empty")
    if any(b <= a for a, b in zip(k_values, k_values[1:])):
        raise ValueError("k_values must be strictly increasing")

    def run(k):
        config = GibbsConfig(**{**gibbs.to_dict(), "k": k})
        start = time.perf_counter()
        try:
            model = fit_lda(dtm, config)
            r2 = goodness.r_squared(dtm, model).r_squared
            ll = goodness.log_likelihood_full(dtm, model)
        except Exception as exc:
            raise SweepCellError(f"estimated_topics={k}", exc) from exc
        elapsed = (time.perf_counter() - start) * 1000.0
        return [
            SweepRow("estimated_topics", k, config.seed, "r_squared", r2, elapsed),
            SweepRow("estimated_topics", k, config.seed, "log_likelihood", ll, elapsed),
        ]

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(run, k_values))
    else:
        batches = [run(k) for k in k_values]
    rows = sorted((r for b in batches for r in b), key=lambda r: (r.value, r.seed))
    provenance = {
        "kind": "k",
        "k_values": k_values,
        "gibbs": gibbs.to_dict(),
        "corpus": {"documents": dtm.n_docs, "terms": dtm.n_terms, "tokens": dtm.total_tokens},
    }
    return SweepResult(rows, provenance)
