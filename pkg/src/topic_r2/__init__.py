"""Goodness-of-fit metrics for probabilistic topic models."""

__version__ = "0.1.0"

from .corpus import DocumentTermMatrix, IngestOptions, build_dtm, load_dtm, mean_document, save_dtm
from .goodness import (
    FitReport,
    LikelihoodReport,
    fitted_values,
    log_likelihood_full,
    log_likelihood_null,
    mcfadden_r2,
    r_squared,
)
from .lda import GibbsConfig, fit_lda
from .model import TopicModel
from .simgen import (
    GroundTruthCorpus,
    SimulationConfig,
    expected_term_frequencies,
    power_law_beta,
    simulate_corpus,
    zipf_fit,
)

__all__ = [
    "DocumentTermMatrix", "IngestOptions", "build_dtm", "load_dtm", "mean_document", "save_dtm",
    "FitReport", "LikelihoodReport", "fitted_values", "log_likelihood_full",
    "log_likelihood_null", "mcfadden_r2", "r_squared", "GibbsConfig", "fit_lda", "TopicModel",
    "GroundTruthCorpus", "SimulationConfig", "expected_term_frequencies", "power_law_beta",
    "simulate_corpus", "zipf_fit",
]
