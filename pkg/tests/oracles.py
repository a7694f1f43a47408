"""Independent brute-force reference computations.

Plain Python lists and ``math`` only, so nothing here shares code paths with
the package under test.
"""

import math


def dense_r_squared(y, theta, phi):
    """Return (ss_tot, ss_resid, r2) for dense nested-list inputs."""
    n_docs = len(y)
    n_terms = len(y[0])
    n_topics = len(phi)
    ybar = [sum(y[d][v] for d in range(n_docs)) / n_docs for v in range(n_terms)]
    ss_tot = 0.0
    ss_resid = 0.0
    for d in range(n_docs):
        n_d = sum(y[d])
        for v in range(n_terms):
            f = n_d * sum(theta[d][k] * phi[k][v] for k in range(n_topics))
            ss_tot += (y[d][v] - ybar[v]) ** 2
            ss_resid += (y[d][v] - f) ** 2
    return ss_tot, ss_resid, 1.0 - ss_resid / ss_tot


def dense_log_likelihoods(y, theta, phi):
    """Return (log_l_full, log_l_null, mcfadden) for dense nested-list inputs."""
    n_docs = len(y)
    n_terms = len(y[0])
    n_topics = len(phi)
    total = sum(sum(row) for row in y)
    col = [sum(y[d][v] for d in range(n_docs)) for v in range(n_terms)]
    full = 0.0
    null = 0.0
    for d in range(n_docs):
        for v in range(n_terms):
            if y[d][v] == 0:
                continue
            p = sum(theta[d][k] * phi[k][v] for k in range(n_topics))
            full += y[d][v] * math.log(p)
            null += y[d][v] * math.log(col[v] / total)
    return full, null, 1.0 - full / null


# the 2x3 hand corpus used throughout the tests
HAND_Y = [[2, 1, 0], [0, 1, 2]]
HAND_THETA = [[1.0, 0.0], [0.0, 1.0]]
HAND_PHI = [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]]
