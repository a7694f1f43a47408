import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import HAND_PHI, HAND_THETA, HAND_Y  # noqa: E402
from topic_r2 import DocumentTermMatrix, TopicModel  # noqa: E402


@pytest.fixture
def hand_dtm():
    return DocumentTermMatrix(np.array(HAND_Y), ["d1", "d2"], ["a", "b", "c"])


@pytest.fixture
def hand_model():
    return TopicModel(HAND_THETA, HAND_PHI)


def random_corpus(seed, n_docs, n_terms, n_topics, max_count=6):
    """Random DTM plus a random strictly positive model of matching shape."""
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, max_count, size=(n_docs, n_terms)) * (rng.random((n_docs, n_terms)) < 0.4)
    # two distinct documents over two terms: SS_tot > 0 and a non-trivial null
    counts[0, 0] = max_count + 1
    counts[1, 0] = 0
    counts[1, 1] = max(counts[1, 1], 1)
    empty = counts.sum(axis=1) == 0
    counts[empty, rng.integers(0, n_terms, size=empty.sum())] = 1
    dtm = DocumentTermMatrix(
        counts, [f"doc{i}" for i in range(n_docs)], [f"w{j}" for j in range(n_terms)]
    )
    theta = rng.dirichlet(np.ones(n_topics), size=n_docs)
    phi = rng.dirichlet(np.full(n_terms, 0.5), size=n_topics)
    phi = np.maximum(phi, 1e-12)
    phi /= phi.sum(axis=1, keepdims=True)
    return dtm, TopicModel(theta, phi)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS, key=lambda k: int(k[1:])):
        terminalreporter.write_line(VERDICTS[key])
