"""Goodness of fit for topic models: geometric R^2 and McFadden's pseudo-R^2.

For document d with observed counts y_d and length n_d, the fitted value is
the expected count vector ``f_d = n_d * theta_d @ phi``. R^2 compares the
summed squared Euclidean distances ||y_d - f_d||^2 against ||y_d - ybar||^2.

Both log-likelihoods are raw multinomial log-likelihoods with the
multinomial coefficient omitted::

    log L = sum_{d,v} w_dv * ln p_dv

where p_dv is ``theta_d @ phi[:, v]`` for the model and the corpus-wide
relative frequency of v for the model-free null. Omitting the coefficient
in both terms changes the value of McFadden's ratio relative to a
convention that keeps it.

Work is split into fixed-size document chunks whose per-document partial
results are combined with ``math.fsum`` (correctly rounded), so totals do not
depend on the number of worker threads or on the order chunks finish.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .corpus import DocumentTermMatrix, mean_document
from .errors import DegenerateCorpusError, DimensionMismatchError, ZeroProbabilityError
from .model import TopicModel

CHUNK_DOCS = 256


@dataclass(frozen=True, eq=False)
class FitReport:
    ss_tot: float
    ss_resid: float
    r_squared: float
    per_doc_resid: np.ndarray

    def to_dict(self) -> dict:
        return {"ss_tot": self.ss_tot, "ss_resid": self.ss_resid, "r_squared": self.r_squared}


@dataclass(frozen=True)
class LikelihoodReport:
    log_l_full: float
    log_l_restricted: float
    mcfadden_r2: float

    def to_dict(self) -> dict:
        return asdict(self)


def _check_dims(dtm: DocumentTermMatrix, model: TopicModel) -> None:
    if model.n_docs != dtm.n_docs:
        raise DimensionMismatchError(
            f"theta has {model.n_docs} rows but the corpus has {dtm.n_docs} documents"
        )
    if model.n_terms != dtm.n_terms:
        raise DimensionMismatchError(
            f"phi has {model.n_terms} columns but the corpus has {dtm.n_terms} terms"
        )


def _chunks(n: int):
    return [(lo, min(lo + CHUNK_DOCS, n)) for lo in range(0, n, CHUNK_DOCS)]


def _map_chunks(fn, n_docs: int, threads: int):
    chunks = _chunks(n_docs)
    if threads <= 1 or len(chunks) == 1:
        return [fn(lo, hi) for lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def fitted_values(dtm: DocumentTermMatrix, model: TopicModel, d: int) -> np.ndarray:
    """Expected counts ``n_d * theta_d @ phi`` for document ``d``."""
    _check_dims(dtm, model)
    if not 0 <= d < dtm.n_docs:
        raise IndexError(f"document index {d} out of range")
    return float(dtm.doc_lengths[d]) * (model.theta[d] @ model.phi)


def sum_of_squares(dtm: DocumentTermMatrix, model: TopicModel, threads: int = 1):
    """Per-document squared distances to the mean and to the fitted values.

    Returns:
        (to_mean, to_fitted), two length-D arrays.
    """
    _check_dims(dtm, model)
    ybar = mean_document(dtm)
    counts = dtm.counts
    lengths = dtm.doc_lengths.astype(np.float64)

    def work(lo, hi):
        y = counts[lo:hi].toarray().astype(np.float64)
        fitted = lengths[lo:hi, None] * (model.theta[lo:hi] @ model.phi)
        return ((y - ybar) ** 2).sum(axis=1), ((y - fitted) ** 2).sum(axis=1)

    parts = _map_chunks(work, dtm.n_docs, threads)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def r_squared(dtm: DocumentTermMatrix, model: TopicModel, threads: int = 1) -> FitReport:
    """Coefficient of determination of ``model`` on ``dtm``.

    Negative values are returned as-is.

    Raises:
        DegenerateCorpusError: if every document equals the mean (SS_tot == 0).
    """
    to_mean, to_fitted = sum_of_squares(dtm, model, threads)
    ss_tot = math.fsum(to_mean)
    ss_resid = math.fsum(to_fitted)
    if ss_tot == 0:
        raise DegenerateCorpusError("total sum of squares is zero (all documents identical)")
    to_fitted.flags.writeable = False
    return FitReport(ss_tot, ss_resid, 1.0 - ss_resid / ss_tot, to_fitted)


def _doc_log_likelihoods(dtm: DocumentTermMatrix, model: TopicModel, threads: int) -> np.ndarray:
    counts = dtm.counts

    def work(lo, hi):
        block = counts[lo:hi].tocoo()
        r = block.row + lo
        c = block.col
        p = np.einsum("ij,ji->i", model.theta[r], model.phi[:, c])
        bad = np.flatnonzero(p <= 0)
        if bad.size:
            d, v = int(r[bad[0]]), int(c[bad[0]])
            raise ZeroProbabilityError(d, v, dtm.doc_ids[d], dtm.vocabulary[v])
        out = np.zeros(hi - lo)
        np.add.at(out, block.row, block.data * np.log(p))
        return out

    return np.concatenate(_map_chunks(work, dtm.n_docs, threads))


def log_likelihood_full(dtm: DocumentTermMatrix, model: TopicModel, threads: int = 1) -> float:
    """Raw multinomial log-likelihood of ``dtm`` under ``model``.

    Raises:
        ZeroProbabilityError: if an observed token has model probability 0.
    """
    _check_dims(dtm, model)
    return math.fsum(_doc_log_likelihoods(dtm, model, threads))


def log_likelihood_null(dtm: DocumentTermMatrix) -> float:
    """Log-likelihood under one multinomial with corpus relative frequencies."""
    totals = dtm.term_totals()
    seen = totals > 0
    n = totals[seen].astype(np.float64)
    return math.fsum(n * np.log(n / dtm.total_tokens))


def mcfadden_r2(dtm: DocumentTermMatrix, model: TopicModel, threads: int = 1) -> LikelihoodReport:
    """McFadden's pseudo-R^2 against the corpus-frequency null."""
    full = log_likelihood_full(dtm, model, threads)
    null = log_likelihood_null(dtm)
    if null == 0:
        raise DegenerateCorpusError("null log-likelihood is zero (single-term corpus)")
    return LikelihoodReport(full, null, 1.0 - full / null)
