import numpy as np
from scipy.stats import ortho_group

from msmacof import DissimilarityData, normalize


def random_instance(seed, n, p, noise=0.1, weights=False):
    """Normalized dissimilarities from a noisy random p-dimensional point set."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, p))
    diff = z[:, None, :] - z[None, :, :]
    d = np.sqrt((diff**2).sum(-1))
    e = np.triu(rng.uniform(1 - noise, 1 + noise, (n, n)), 1)
    delta = d * (e + e.T)
    w = None
    if weights:
        u = np.triu(rng.uniform(0.5, 2.0, (n, n)), 1)
        w = u + u.T
    return normalize(DissimilarityData.from_delta(delta, w=w))


def random_rotation(seed, p):
    return ortho_group.rvs(p, random_state=seed)


def brute_distances(x):
    n = x.shape[0]
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            d[i, j] = sum((x[i, s] - x[j, s]) ** 2 for s in range(x.shape[1])) ** 0.5
    return d


def multiset_close(a, b, tol):
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= tol))
