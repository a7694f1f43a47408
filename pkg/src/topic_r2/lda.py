"""Collapsed Gibbs sampling for LDA with symmetric, fixed priors."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numba
import numpy as np

from .corpus import DocumentTermMatrix
from .model import TopicModel


@dataclass(frozen=True)
class GibbsConfig:
    k: int
    alpha: float = 0.1
    beta: float = 0.01
    burn_in: int = 200
    samples: int = 50
    thin: int = 2
    seed: int = 0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if self.samples < 1 or self.thin < 1:
            raise ValueError("samples and thin must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict:
        return asdict(self)


@numba.njit(cache=True, nogil=True)
def _sweep(docs, words, z, ndk, nkv, nk, alpha, beta, vbeta, uniforms):
    n_topics = nk.shape[0]
    weights = np.empty(n_topics)
    for i in range(docs.shape[0]):
        d = docs[i]
        v = words[i]
        old = z[i]
        ndk[d, old] -= 1
        nkv[old, v] -= 1
        nk[old] -= 1
        total = 0.0
        for k in range(n_topics):
            total += (ndk[d, k] + alpha) * (nkv[k, v] + beta) / (nk[k] + vbeta)
            weights[k] = total
        target = uniforms[i] * total
        new = 0
        while new < n_topics - 1 and weights[new] <= target:
            new += 1
        z[i] = new
        ndk[d, new] += 1
        nkv[new, v] += 1
        nk[new] += 1


class GibbsSampler:
    """One Markov chain over per-token topic assignments.

    Tokens are laid out document by document, and within a document by
    column order of the DTM. Chains share no mutable state, so several may
    run side by side with different seeds.
    """

    def __init__(self, dtm: DocumentTermMatrix, config: GibbsConfig):
        if config.k > dtm.total_tokens:
            raise ValueError(
                f"k={config.k} exceeds the corpus token count ({dtm.total_tokens})"
            )
        self.dtm = dtm
        self.config = config
        mat = dtm.counts
        n_per_entry = mat.data.astype(np.int64)
        rows = np.repeat(np.arange(dtm.n_docs), np.diff(mat.indptr))
        self.docs = np.repeat(rows, n_per_entry).astype(np.int64)
        self.words = np.repeat(mat.indices, n_per_entry).astype(np.int64)
        self.rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))

        k, n_tokens = config.k, self.docs.size
        self.z = self.rng.integers(0, k, size=n_tokens, dtype=np.int64)
        self.doc_topic = np.zeros((dtm.n_docs, k), dtype=np.int64)
        self.topic_term = np.zeros((k, dtm.n_terms), dtype=np.int64)
        np.add.at(self.doc_topic, (self.docs, self.z), 1)
        np.add.at(self.topic_term, (self.z, self.words), 1)
        self.topic_totals = self.topic_term.sum(axis=1)
        self.sweeps_done = 0

    def sweep(self) -> None:
        uniforms = self.rng.random(self.docs.size)
        c = self.config
        _sweep(
            self.docs, self.words, self.z, self.doc_topic, self.topic_term, self.topic_totals,
            float(c.alpha), float(c.beta), float(c.beta) * self.dtm.n_terms, uniforms,
        )
        self.sweeps_done += 1

    def check_state(self) -> None:
        """Assert the count matrices agree with the assignments."""
        k = self.config.k
        ndk = np.zeros_like(self.doc_topic)
        nkv = np.zeros_like(self.topic_term)
        np.add.at(ndk, (self.docs, self.z), 1)
        np.add.at(nkv, (self.z, self.words), 1)
        assert np.array_equal(ndk, self.doc_topic)
        assert np.array_equal(nkv, self.topic_term)
        assert np.array_equal(nkv.sum(axis=1), self.topic_totals)
        assert np.array_equal(ndk.sum(axis=1), self.dtm.doc_lengths)
        assert self.topic_totals.sum() == self.dtm.total_tokens
        assert self.z.min() >= 0 and self.z.max() < k

    def point_estimate(self) -> tuple[np.ndarray, np.ndarray]:
        """Posterior means of (theta, phi) given the current assignments."""
        return self._theta(self.doc_topic), self._phi()

    def _theta(self, ndk):
        c = self.config
        lengths = self.dtm.doc_lengths.astype(np.float64)[:, None]
        return (ndk + c.alpha) / (lengths + c.k * c.alpha)

    def _phi(self):
        c = self.config
        return (self.topic_term + c.beta) / (
            self.topic_totals[:, None] + self.dtm.n_terms * c.beta
        )


def fit_lda(dtm: DocumentTermMatrix, config: GibbsConfig) -> TopicModel:
    """Fit LDA by collapsed Gibbs sampling.

    Runs ``burn_in`` sweeps, then ``samples * thin`` more, keeping every
    ``thin``-th. The returned Theta and Phi average the per-sweep posterior
    means over the kept sweeps.
    """
    sampler = GibbsSampler(dtm, config)
    for _ in range(config.burn_in):
        sampler.sweep()
    ndk_sum = np.zeros(sampler.doc_topic.shape, dtype=np.int64)
    phi_sum = np.zeros(sampler.topic_term.shape)
    for _ in range(config.samples):
        for _ in range(config.thin):
            sampler.sweep()
        # theta's denominator is fixed per document, so counts can be summed
        ndk_sum += sampler.doc_topic
        phi_sum += sampler._phi()
    theta = sampler._theta(ndk_sum / config.samples)
    phi = phi_sum / config.samples
    # strip last-ulp drift from the closed forms
    theta /= theta.sum(axis=1, keepdims=True)
    phi /= phi.sum(axis=1, keepdims=True)
    return TopicModel(theta, phi)
