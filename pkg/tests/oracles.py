"""Independent brute-force oracles the tests check the library against.

Everything here recomputes membership and sampling from the raw formulas,
deliberately bypassing the library's structural point location.
"""

import numpy as np

from atlascover.suspension import chart_arrays


def brute_covered(charts, pts, scale=1.0, tol=1e-10):
    """Membership by direct formula over every chart (no index)."""
    b, d = chart_arrays(charts)
    pts = np.atleast_2d(np.asarray(pts, dtype=complex))
    out = np.zeros(pts.shape[0], dtype=bool)
    for lo in range(0, b.shape[0], 1024):
        bb, dd = b[lo:lo + 1024], d[lo:lo + 1024]
        n2 = (np.abs((pts[:, None, :] - bb[None, :, :]) / dd[None, :, :]) ** 2).sum(axis=2)
        out |= (n2 <= scale * scale * (1.0 + tol)).any(axis=1)
    return out


def annulus_grid(delta, n_radii, n_angles):
    """Deterministic polar grid of the closed annulus, endpoints included."""
    radii = delta ** np.linspace(1.0, 0.0, n_radii)
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return (radii[:, None] * np.exp(1j * angles[None, :])).ravel()


def annulus_random(delta, count, seed):
    rng = np.random.default_rng(seed)
    r = delta ** rng.random(count)
    return r * np.exp(2j * np.pi * rng.random(count))


def polydisc_random(eta, n, count, seed):
    rng = np.random.default_rng(seed)
    cols = [eta ** rng.random(count) * np.exp(2j * np.pi * rng.random(count))
            for _ in range(n)]
    return np.stack(cols, axis=-1)


def ball_points(dim, count, seed):
    """Seeded points of the unit ball of C^dim."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    x /= np.maximum(np.linalg.norm(x, axis=1, keepdims=True), 1e-300)
    return x * rng.random((count, 1)) ** (1.0 / (2 * dim))
