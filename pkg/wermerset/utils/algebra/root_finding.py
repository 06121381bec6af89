import logging

import numpy as np

from wermerset.utils.algebra.root_set import RootSet
from wermerset.utils.algebra.uni_poly import UniPoly
from wermerset.utils.errors import Degenerate


logger = logging.getLogger("wermerset.algebra")

LEADING_FLOOR = 1e-14  # Relative size of a leading coefficient we still trust
POLISH_STEPS = 3


def _horner(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Evaluates ascending coefficient rows coeffs[..., j] at w[..., k] for every k"""

    acc = np.broadcast_to(coeffs[..., -1:], w.shape).astype(complex)
    for j in range(coeffs.shape[-1] - 2, -1, -1):
        acc = acc * w + coeffs[..., j : j + 1]
    return acc


def batch_roots(coeffs: np.ndarray, z_points=None) -> np.ndarray:
    """Finds all roots of many univariate polynomials at once

    Every row of coeffs (lowest degree first) is normalised to unit max modulus,
    turned into a companion matrix and solved through a stacked eigenvalue call;
    each root then gets a few Newton polishing steps that are kept only when they
    shrink the residual.

    Params:
        coeffs: array of shape (N, d+1)
            The polynomial coefficients, one polynomial per row
        z_points: array of shape (N,) = None
            Only used to label Degenerate errors

    Returns:
        An (N, d) complex array of roots
    """

    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.ndim == 1:
        coeffs = coeffs[None, :]
    count, size = coeffs.shape
    degree = size - 1
    if degree < 1:
        return np.zeros((count, 0), dtype=complex)

    scale = np.max(np.abs(coeffs), axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    normed = coeffs / scale
    lead = np.abs(normed[:, -1])
    bad = np.nonzero(lead <= LEADING_FLOOR)[0]
    if bad.size:
        z0 = complex(z_points[bad[0]]) if z_points is not None else complex("nan")
        raise Degenerate(z0, float(lead[bad[0]]))

    monic = normed[:, :-1] / normed[:, -1:]
    if degree == 1:
        roots = -monic
    else:
        companion = np.zeros((count, degree, degree), dtype=complex)
        companion[:, np.arange(1, degree), np.arange(degree - 1)] = 1.0
        companion[:, :, -1] = -monic
        roots = np.linalg.eigvals(companion)

    # Newton polishing
    derivative = normed[:, 1:] * np.arange(1, size)
    residual = np.abs(_horner(normed[:, None, :], roots[..., None])[..., 0])
    for _ in range(POLISH_STEPS):
        value = _horner(normed[:, None, :], roots[..., None])[..., 0]
        slope = _horner(derivative[:, None, :], roots[..., None])[..., 0]
        usable = np.abs(slope) > 1e-12
        step = np.where(usable, value / np.where(usable, slope, 1.0), 0.0)
        candidate = roots - step
        new_residual = np.abs(_horner(normed[:, None, :], candidate[..., None])[..., 0])
        better = new_residual < residual
        roots = np.where(better, candidate, roots)
        residual = np.where(better, new_residual, residual)
    return roots


def _balanced_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots after the substitution z = scale * x, scale = |a_0 / a_d|^(1/d)

    The scaled coefficients are formed from logarithms, so polynomials whose roots
    are all large (or all tiny) don't overflow on the way.
    """

    degree = coeffs.size - 1
    log_scale = (np.log(np.abs(coeffs[0])) - np.log(np.abs(coeffs[-1]))) / degree
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(coeffs)) + log_scale * np.arange(degree + 1)
    logs -= logs[np.isfinite(logs)].max()
    scaled = np.where(coeffs != 0, np.exp(logs) * np.exp(1j * np.angle(coeffs)), 0.0)
    return np.exp(log_scale) * batch_roots(scaled[None, :])[0]


def uni_roots(q: UniPoly, cluster_tol: float = 1e-7, strict: bool = True) -> RootSet:
    """Roots of a univariate polynomial, clustered into integer multiplicities

    Params:
        q: UniPoly
            A polynomial of degree at least 1
        cluster_tol: float = 1e-7
            Computed roots within this distance count as one root
        strict: bool = True
            Raise ClusterAmbiguity when clusters sit within 10x cluster_tol

    Returns:
        A RootSet whose multiplicities add up to deg q
    """

    if q.degree < 1:
        raise ValueError("uni_roots needs a polynomial of degree at least 1")
    coeffs = np.asarray(q.coeffs, dtype=complex)
    zeros = int(np.argmax(coeffs != 0))
    coeffs = coeffs[zeros:]
    values = np.zeros(zeros, dtype=complex)
    if coeffs.size > 1:
        values = np.concatenate([values, _balanced_roots(coeffs)])
    roots = RootSet.from_values(values, cluster_tol, strict=strict)
    logger.debug(f"uni_roots: degree {q.degree} -> {len(roots)} clusters")
    return roots
