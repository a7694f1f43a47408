"""Monte Carlo corpora drawn from the LDA generative process.

Random streams are keyed so that a draw depends only on (seed, role, index):

* topic k uses ``SeedSequence(seed, spawn_key=(0, k, 0))`` for its Gamma
  variates and ``(0, k, 1)`` for the accompanying uniforms;
* document d uses ``SeedSequence(seed, spawn_key=(1, d))`` for its topic
  mixture, length, and words.

Documents are therefore generated independently of one another, and the
first V' entries of a topic's raw draws are shared by every run with V >= V'
(common random numbers across vocabulary sweeps).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
import scipy.sparse as sp

from .corpus import DocumentTermMatrix
from .model import TopicModel

DEFAULT_ALPHA: dict = {"sum": 5.0}
DEFAULT_BETA: dict = {"power_law": {"exponent": 1.0, "magnitude": 10.0}}

_TOPIC_ROLE = 0
_DOC_ROLE = 1


def power_law_beta(v: int, exponent: float = 1.0, magnitude: float = 10.0) -> np.ndarray:
    """``magnitude * rank**-exponent`` for ranks 1..v."""
    if v < 1:
        raise ValueError("V must be >= 1")
    if not exponent > 0 or not magnitude > 0:
        raise ValueError("exponent and magnitude must be positive")
    ranks = np.arange(1, v + 1, dtype=np.float64)
    return magnitude * ranks ** (-float(exponent))


def _resolve_alpha(spec, k: int) -> np.ndarray:
    if isinstance(spec, dict):
        if set(spec) != {"sum"}:
            raise ValueError(f"unrecognised alpha spec {spec!r}")
        vec = np.full(k, float(spec["sum"]) / k)
    elif np.ndim(spec) == 0:
        vec = np.full(k, float(spec))
    else:
        vec = np.asarray(spec, dtype=np.float64)
        if vec.shape != (k,):
            raise ValueError(f"alpha has {vec.size} entries, expected K={k}")
    return vec


def _resolve_beta(spec, v: int) -> np.ndarray:
    if isinstance(spec, dict):
        if set(spec) != {"power_law"}:
            raise ValueError(f"unrecognised beta spec {spec!r}")
        pl = spec["power_law"]
        return power_law_beta(v, float(pl.get("exponent", 1.0)), float(pl.get("magnitude", 10.0)))
    if np.ndim(spec) == 0:
        return np.full(v, float(spec))
    vec = np.asarray(spec, dtype=np.float64)
    if vec.shape != (v,):
        raise ValueError(f"beta has {vec.size} entries, expected V={v}")
    return vec


@dataclass(frozen=True, eq=True)
class SimulationConfig:
    """Generative parameters for a synthetic corpus.

    ``alpha`` may be a scalar (per-topic value), a length-K sequence, or
    ``{"sum": A}`` meaning a symmetric prior with entries A/K. ``beta`` may be
    a scalar, a length-V sequence, or ``{"power_law": {"exponent", "magnitude"}}``.
    The default ``{"sum": 5.0}`` keeps the total topic concentration fixed as
    K varies (entries are 0.1 at K=50).
    """

    k: int = 50
    d: int = 2000
    v: int = 5000
    lam: float = 500.0
    alpha: Any = field(default_factory=lambda: dict(DEFAULT_ALPHA))
    beta: Any = field(default_factory=lambda: json.loads(json.dumps(DEFAULT_BETA)))
    seed: int = 0

    def __post_init__(self):
        for name in ("k", "d", "v"):
            val = getattr(self, name)
            if int(val) != val or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be positive, got {self.lam!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))
        if isinstance(self.alpha, (list, np.ndarray)):
            object.__setattr__(self, "alpha", tuple(float(x) for x in self.alpha))
        if isinstance(self.beta, (list, np.ndarray)):
            object.__setattr__(self, "beta", tuple(float(x) for x in self.beta))
        for name, vec in (("alpha", self.alpha_vector()), ("beta", self.beta_vector())):
            if not np.all(np.isfinite(vec)) or vec.min() <= 0:
                raise ValueError(f"every entry of {name} must be strictly positive")

    def alpha_vector(self) -> np.ndarray:
        return _resolve_alpha(self.alpha, self.k)

    def beta_vector(self) -> np.ndarray:
        return _resolve_beta(self.beta, self.v)

    def replace(self, **changes) -> "SimulationConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        def plain(x):
            return list(x) if isinstance(x, tuple) else x

        return {
            "k": self.k,
            "d": self.d,
            "v": self.v,
            "lambda": self.lam,
            "alpha": plain(self.alpha),
            "beta": plain(self.beta),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SimulationConfig":
        known = {"k", "d", "v", "lambda", "alpha", "beta", "seed"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown simulation config keys: {sorted(extra)}")
        kw = {}
        for key in ("k", "d", "v", "alpha", "beta", "seed"):
            if key in obj:
                kw[key] = obj[key]
        if "lambda" in obj:
            kw["lam"] = float(obj["lambda"])
        return cls(**kw)


@dataclass(frozen=True, eq=False)
class GroundTruthCorpus:
    dtm: DocumentTermMatrix
    model: TopicModel
    config: SimulationConfig


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def sample_dirichlet(
    conc: np.ndarray, gamma_rng: np.random.Generator, unif_rng: np.random.Generator
) -> np.ndarray:
    """One Dirichlet draw via normalised Gamma variates.

    Uses Gamma(a) = Gamma(a + 1) * U**(1/a), evaluated in log space, so tiny
    concentrations never underflow to an all-zero vector.
    """
    conc = np.asarray(conc, dtype=np.float64)
    log_g = np.log(gamma_rng.standard_gamma(conc + 1.0))
    log_g += np.log(unif_rng.random(conc.shape)) / conc
    log_g -= log_g.max()
    p = np.exp(log_g)
    return p / p.sum()


def vocabulary_labels(v: int) -> list[str]:
    width = max(5, len(str(v)))
    return [f"t{i:0{width}d}" for i in range(1, v + 1)]


def draw_topics(config: SimulationConfig) -> np.ndarray:
    beta = config.beta_vector()
    phi = np.empty((config.k, config.v))
    for k in range(config.k):
        phi[k] = sample_dirichlet(
            beta, _stream(config.seed, _TOPIC_ROLE, k, 0), _stream(config.seed, _TOPIC_ROLE, k, 1)
        )
    return phi


def simulate_document(config: SimulationConfig, d: int, alpha: np.ndarray, phi: np.ndarray):
    """Draw (theta_d, word counts) for document ``d`` from its own stream."""
    rng = _stream(config.seed, _DOC_ROLE, d)
    theta_d = sample_dirichlet(alpha, rng, rng)
    n_d = 0
    while n_d == 0:  # zero-truncated Poisson
        n_d = int(rng.poisson(config.lam))
    topic_counts = rng.multinomial(n_d, theta_d)
    used = np.flatnonzero(topic_counts)
    words = rng.multinomial(topic_counts[used], phi[used]).sum(axis=0)
    return theta_d, words


def simulate_corpus(config: SimulationConfig) -> GroundTruthCorpus:
    """Simulate a corpus and return it with the exact Theta and Phi used."""
    alpha = config.alpha_vector()
    phi = draw_topics(config)
    theta = np.empty((config.d, config.k))
    rows, cols, vals = [], [], []
    for d in range(config.d):
        theta[d], words = simulate_document(config, d, alpha, phi)
        nz = np.flatnonzero(words)
        rows.append(np.full(nz.size, d))
        cols.append(nz)
        vals.append(words[nz])
    counts = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(config.d, config.v),
    )
    width = max(5, len(str(config.d)))
    doc_ids = [f"d{i:0{width}d}" for i in range(1, config.d + 1)]
    dtm = DocumentTermMatrix(counts, doc_ids, vocabulary_labels(config.v))
    return GroundTruthCorpus(dtm=dtm, model=TopicModel(theta, phi), config=config)


def expected_term_frequencies(config: SimulationConfig, total_tokens: float) -> np.ndarray:
    """Expected aggregate term counts, ``total_tokens * beta / sum(beta)``."""
    if not total_tokens > 0:
        raise ValueError("total_tokens must be positive")
    beta = config.beta_vector()
    return (total_tokens / beta.sum()) * beta


def zipf_fit(term_frequencies) -> tuple[float, float]:
    """OLS fit of log(frequency) on log(rank).

    Zeros are dropped and frequencies ranked in descending order. Returns the
    slope and the fit's R^2 (1.0 when the log frequencies are all equal).
    """
    f = np.asarray(term_frequencies, dtype=np.float64).ravel()
    if np.any(f < 0) or not np.all(np.isfinite(f)):
        raise ValueError("frequencies must be finite and non-negative")
    f = np.sort(f[f > 0])[::-1]
    if f.size < 3:
        raise ValueError("need at least 3 positive frequencies")
    x = np.log(np.arange(1, f.size + 1, dtype=np.float64))
    y = np.log(f)
    if np.ptp(y) == 0:
        return 0.0, 1.0
    xc = x - x.mean()
    yc = y - y.mean()
    slope = float(xc @ yc / (xc @ xc))
    resid = yc - slope * xc
    ss_tot = float(yc @ yc)
    ss_res = float(resid @ resid)
    return slope, 1.0 - ss_res / ss_tot
