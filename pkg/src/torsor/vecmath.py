"""Small vector/matrix helpers used throughout the package."""

import numpy as np


def skew(v) -> np.ndarray:
    """Skew matrix j(v) with j(v) @ b == np.cross(v, b)."""
    v = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def axial(A) -> np.ndarray:
    """Inverse of skew: axial(skew(v)) == v for skew-symmetric A."""
    A = np.asarray(A, dtype=float)
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


def rotation(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about `axis` (normalized here) by `angle`."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n == 0.0:
        raise ValueError("rotation axis must be nonzero")
    K = skew(axis / n)
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def random_rotation(rng) -> np.ndarray:
    """Uniform-ish random rotation from a random axis and angle."""
    axis = rng.normal(size=3)
    while np.linalg.norm(axis) < 1e-8:
        axis = rng.normal(size=3)
    return rotation(axis, rng.uniform(0.0, 2.0 * np.pi))
