"""Independent floating-point oracles used to cross-check the exact library code."""

from __future__ import annotations

import itertools

import numpy as np


def _null(rows: np.ndarray, m: int) -> np.ndarray:
    if rows.size == 0:
        return np.eye(m)
    _, s, vt = np.linalg.svd(rows)
    rank = int(np.sum(s > 1e-10))
    return vt[rank:].T


def brute_force_sign_vectors(q, funcs, w0, samples: int = 4000, seed: int = 1) -> set[str]:
    """Sign vectors realized by random points of the cone {y.y < 0, q(w0, y) < 0}.

    For every subset S of functionals, points are drawn from the subspace where the
    functionals in S vanish (in Lorentz coordinates of the restricted form), so that
    lower-dimensional cells are hit with positive probability.
    """
    q = np.array([[float(x) for x in r] for r in q])
    funcs = np.array([[float(x) for x in f] for f in funcs]).reshape(len(funcs), q.shape[0])
    w0 = np.array([float(x) for x in w0])
    rng = np.random.default_rng(seed)
    m = q.shape[0]
    found: set[str] = set()
    for r in range(len(funcs) + 1):
        for sub in itertools.combinations(range(len(funcs)), r):
            b = _null(funcs[list(sub)], m)
            if b.shape[1] == 0:
                continue
            qs = b.T @ q @ b
            lam, vec = np.linalg.eigh(qs)
            neg = [i for i, x in enumerate(lam) if x < -1e-9]
            if not neg:
                continue
            pos = [i for i, x in enumerate(lam) if x > 1e-9]
            null = [i for i, x in enumerate(lam) if abs(x) <= 1e-9]
            t_dir = vec[:, neg[0]] / np.sqrt(-lam[neg[0]])
            # uniform points of the unit ball in the positive directions give q(c) = -1 + |x|^2 < 0
            x = rng.normal(size=(samples, len(pos)))
            x /= np.maximum(np.linalg.norm(x, axis=1, keepdims=True), 1e-300)
            x *= rng.uniform(0, 1, size=(samples, 1)) ** (1 / max(len(pos), 1))
            c = np.tile(t_dir, (samples, 1))
            if pos:
                c += x @ (vec[:, pos] / np.sqrt(lam[pos])).T
            if null:
                c += rng.normal(size=(samples, len(null))) * 3 @ vec[:, null].T
            y = c @ b.T
            y *= np.where(y @ q @ w0 > 0, -1.0, 1.0)[:, None]
            y = y[np.einsum("ij,jk,ik->i", y, q, y) < -1e-9]
            vals = y @ funcs.T
            scale = np.linalg.norm(y, axis=1, keepdims=True)
            codes = np.where(np.abs(vals) <= 1e-9 * scale, "0", np.where(vals > 0, "+", "-"))
            found.update("".join(row) for row in codes)
    return found
