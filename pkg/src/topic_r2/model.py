"""Topic model parameters (Theta, Phi) and their dense CSV representation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from os import PathLike
from typing import Sequence

import numpy as np

from .errors import DataError, DimensionMismatchError

ROW_SUM_TOL = 1e-9


def _check_stochastic(name: str, mat: np.ndarray) -> None:
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise DataError(f"{name} must be a non-empty 2-D array, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise DataError(f"{name} contains non-finite entries")
    if mat.min() < 0:
        raise DataError(f"{name} contains negative entries")
    err = np.abs(mat.sum(axis=1) - 1.0)
    bad = int(np.argmax(err))
    if err[bad] > ROW_SUM_TOL:
        raise DataError(f"{name} row {bad} sums to {mat[bad].sum()!r}, not 1")


@dataclass(frozen=True, eq=False)
class TopicModel:
    """Document-topic matrix ``theta`` (D x K) and topic-term matrix ``phi`` (K x V)."""

    theta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        theta = np.array(self.theta, dtype=np.float64)
        phi = np.array(self.phi, dtype=np.float64)
        _check_stochastic("theta", theta)
        _check_stochastic("phi", phi)
        if theta.shape[1] != phi.shape[0]:
            raise DimensionMismatchError(
                f"theta has {theta.shape[1]} topics but phi has {phi.shape[0]}"
            )
        theta.flags.writeable = False
        phi.flags.writeable = False
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @property
    def n_docs(self) -> int:
        return self.theta.shape[0]

    @property
    def n_topics(self) -> int:
        return self.phi.shape[0]

    @property
    def n_terms(self) -> int:
        return self.phi.shape[1]


def topic_labels(k: int) -> list[str]:
    return [f"topic_{i + 1}" for i in range(k)]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_theta_csv(theta: np.ndarray, doc_ids: Sequence[str], path: str | PathLike) -> None:
    theta = np.asarray(theta)
    if len(doc_ids) != theta.shape[0]:
        raise DimensionMismatchError(f"{len(doc_ids)} doc ids for {theta.shape[0]} theta rows")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["doc_id", *topic_labels(theta.shape[1])])
        for doc_id, row in zip(doc_ids, theta):
            w.writerow([doc_id, *map(_fmt, row)])


def write_phi_csv(phi: np.ndarray, vocabulary: Sequence[str], path: str | PathLike) -> None:
    phi = np.asarray(phi)
    if len(vocabulary) != phi.shape[1]:
        raise DimensionMismatchError(f"{len(vocabulary)} terms for {phi.shape[1]} phi columns")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["topic", *vocabulary])
        for label, row in zip(topic_labels(phi.shape[0]), phi):
            w.writerow([label, *map(_fmt, row)])


def _read_labeled_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Return (row labels, column labels, values) of a header-plus-rows CSV."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError("empty file", path) from None
        if len(header) < 2:
            raise DataError("header needs a label column and at least one value column", path, 1)
        cols = header[1:]
        labels, rows = [], []
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DataError(f"expected {len(header)} fields, got {len(rec)}", path, lineno)
            try:
                rows.append([float(x) for x in rec[1:]])
            except ValueError:
                raise DataError("non-numeric value", path, lineno) from None
            labels.append(rec[0])
    if not rows:
        raise DataError("no data rows", path)
    return labels, cols, np.asarray(rows, dtype=np.float64)


def read_theta_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Return (doc ids, topic labels, theta)."""
    return _read_labeled_csv(path)


def read_phi_csv(path) -> tuple[list[str], list[str], np.ndarray]:
    """Return (topic labels, terms, phi)."""
    return _read_labeled_csv(path)


def _align(labels, target, what, path):
    """Index array putting ``labels`` into ``target`` order."""
    if len(labels) != len(target):
        raise DimensionMismatchError(
            f"{what}: file has {len(labels)} but corpus has {len(target)}", path
        )
    if list(labels) == list(target):
        return None
    pos = {x: i for i, x in enumerate(labels)}
    if len(pos) != len(labels):
        raise DataError(f"{what}: duplicate labels", path)
    missing = [x for x in target if x not in pos]
    if missing:
        raise DimensionMismatchError(f"{what}: {missing[0]!r} missing from file", path)
    return np.array([pos[x] for x in target])


def load_model(theta_path, phi_path, doc_ids: Sequence[str], vocabulary: Sequence[str]) -> TopicModel:
    """Load Theta/Phi CSVs and align their rows/columns to a corpus.

    Rows of Theta are matched by doc id and columns of Phi by term, so files
    may list them in any order, but the label sets must match exactly.
    """
    t_ids, t_topics, theta = read_theta_csv(theta_path)
    p_topics, p_terms, phi = read_phi_csv(phi_path)
    if len(t_topics) != len(p_topics):
        raise DimensionMismatchError(
            f"theta has {len(t_topics)} topic columns but phi has {len(p_topics)} topic rows"
        )
    idx = _align(t_ids, doc_ids, "theta documents", theta_path)
    if idx is not None:
        theta = theta[idx]
    idx = _align(p_terms, vocabulary, "phi terms", phi_path)
    if idx is not None:
        phi = phi[:, idx]
    return TopicModel(theta, phi)
