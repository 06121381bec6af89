import logging

import numpy as np

from wermerset.utils.algebra.bi_poly import BiPoly
from wermerset.utils.algebra.root_finding import batch_roots
from wermerset.utils.algebra.root_set import RootSet
from wermerset.utils.algebra.uni_poly import UniPoly
from wermerset.utils.errors import NonPolynomialResidue


logger = logging.getLogger("wermerset.algebra")

RESIDUE_TOL = 1e-6
RESIDUE_SAMPLES = 6


def shift_product(p: BiPoly, c: float, R: UniPoly) -> BiPoly:
    """Forms p~(z, w - cA) * p~(z, w + cA) with A^2 = R(z) and p~ = p / lead(p)

    Writing p~(z, w + t) = sum_k q_k(z, w) t^k, the two factors are E +/- A*O with
    E = sum q_2l c^2l R^l and O = sum q_(2l+1) c^(2l+1) R^l, so the product is
    E^2 - R O^2 and never carries the radical. A handful of sampled points are
    compared with the direct product to catch bookkeeping mistakes.

    Params:
        p: BiPoly
            A polynomial whose top w-coefficient is a nonzero constant
        c: float
            The shift constant
        R: UniPoly
            The radicand

    Returns:
        A BiPoly of twice the w-degree
    """

    monic = p.scaled(1 / p.leading_constant())
    even = BiPoly.zero()
    odd = BiPoly.zero()
    radicand_power = UniPoly.one()
    for l in range(monic.deg_w // 2 + 1):
        even = even + monic.taylor_in_w(2 * l).times_uni(radicand_power) * (c ** (2 * l))
        if 2 * l + 1 <= monic.deg_w:
            odd = odd + monic.taylor_in_w(2 * l + 1).times_uni(radicand_power) * (
                c ** (2 * l + 1)
            )
        radicand_power = radicand_power * R
    product = even * even - (odd * odd).times_uni(R)
    _check_radical_cancellation(monic, c, R, product)
    logger.debug(f"shift_product: deg_w {p.deg_w} -> {product.deg_w}, deg_z {product.deg_z}")
    return product


def _check_radical_cancellation(monic: BiPoly, c: float, R: UniPoly, product: BiPoly):
    """Compares the expanded product with the two explicit factors at fixed points"""

    rng = np.random.default_rng(20240601)
    z = rng.uniform(-1, 1, RESIDUE_SAMPLES) + 1j * rng.uniform(-1, 1, RESIDUE_SAMPLES)
    w = rng.uniform(-1, 1, RESIDUE_SAMPLES) + 1j * rng.uniform(-1, 1, RESIDUE_SAMPLES)
    shift = c * np.sqrt(R(z))
    direct = monic(z, w - shift) * monic(z, w + shift)
    expanded = product(z, w)
    scale = np.abs(monic(z, w - shift)) * np.abs(monic(z, w + shift))
    scale = np.maximum(scale, np.abs(product.coeffs).sum() * 1e-9)
    residue = float(np.max(np.abs(direct - expanded) / scale))
    if residue > RESIDUE_TOL:
        raise NonPolynomialResidue(residue, RESIDUE_TOL)


def roots_in_w(p: BiPoly, z0: complex, cluster_tol: float = 1e-7) -> RootSet:
    """All roots of p(z0, .) with multiplicity"""

    if p.deg_w < 1:
        raise ValueError("roots_in_w needs deg_w >= 1")
    coeffs = p.w_coefficients(complex(z0))
    values = batch_roots(coeffs[None, :], np.array([z0]))[0]
    return RootSet.from_values(values, cluster_tol)


def fibre_roots(p: BiPoly, z) -> np.ndarray:
    """Raw roots of p(z, .) for an array of z, shape z.shape + (deg_w,)"""

    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    coeffs = p.w_coefficients(flat)
    roots = batch_roots(coeffs, flat)
    return roots.reshape(z.shape + (p.deg_w,))


def sylvester_matrices(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Stacked Sylvester matrices of f and g (ascending coefficients on the last axis)"""

    m = f.shape[-1] - 1
    n = g.shape[-1] - 1
    size = m + n
    matrices = np.zeros(f.shape[:-1] + (size, size), dtype=complex)
    f_desc = f[..., ::-1]
    g_desc = g[..., ::-1]
    for r in range(n):
        matrices[..., r, r : r + m + 1] = f_desc
    for r in range(m):
        matrices[..., n + r, r : r + n + 1] = g_desc
    return matrices


def bareiss_determinant(matrices: np.ndarray) -> np.ndarray:
    """Fraction-free (Bareiss) elimination with partial pivoting on a stack of matrices"""

    a = np.array(matrices, dtype=complex, copy=True)
    stack, size, _ = a.shape
    sign = np.ones(stack, dtype=complex)
    previous = np.ones(stack, dtype=complex)
    index = np.arange(stack)
    for k in range(size - 1):
        pivot_row = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        swap = pivot_row != k
        if np.any(swap):
            rows_k = a[index, k, :].copy()
            a[index, k, :] = a[index, pivot_row, :]
            a[index, pivot_row, :] = rows_k
            sign = np.where(swap, -sign, sign)
        pivot = a[:, k, k]
        singular = pivot == 0
        safe_previous = np.where(previous == 0, 1.0, previous)
        block = (
            a[:, k + 1 :, k + 1 :] * pivot[:, None, None]
            - a[:, k + 1 :, k : k + 1] * a[:, k : k + 1, k + 1 :]
        ) / safe_previous[:, None, None]
        a[:, k + 1 :, k + 1 :] = block
        a[:, k + 1 :, k] = 0
        previous = np.where(singular, previous, pivot)
        a[singular, -1, -1] = 0
    return sign * a[:, -1, -1]


def discriminant_in_w(p: BiPoly, trim_tol: float = 1e-12) -> UniPoly:
    """The resultant of p and dp/dw with respect to w, as a polynomial in z

    The resultant has z-degree at most (2 deg_w - 1) deg_z. It is evaluated at that
    many roots of unity (Sylvester determinant by fraction-free elimination at each
    node) and interpolated back to coefficients with an FFT.
    """

    if p.deg_w < 2:
        raise ValueError("discriminant_in_w needs deg_w >= 2")
    normed, _ = p.normalized()
    derivative = normed.w_derivative()
    bound = (2 * p.deg_w - 1) * p.deg_z
    nodes = np.exp(2j * np.pi * np.arange(bound + 1) / (bound + 1))
    f = normed.w_coefficients(nodes)
    g = derivative.w_coefficients(nodes)
    values = bareiss_determinant(sylvester_matrices(f, g))
    coeffs = np.fft.fft(values) / (bound + 1)
    return UniPoly(coeffs, trim_tol=trim_tol)
