"""Pure-Python (numpy) kernels.

Same signatures as the compiled ``_core`` extension; used when the extension
is not built or when ``HIDDENCORR_BACKEND=python`` is set.
"""
import math

import numpy as np

NAME = "python"
#: grid values this close to the maximum are treated as ties
TIE = 1e-12


def eigh(m):
    """Eigen-decomposition of a Hermitian matrix; eigenvalue order unspecified."""
    return np.linalg.eigh(np.asarray(m, dtype=complex))


def entropy_bits(values, floor):
    w = np.asarray(values, dtype=float)
    w = w[w > floor]
    return float(-(w * np.log2(w)).sum())


def _xlog2x(p):
    return p * math.log2(p) if p > 1e-15 else 0.0


def _table_mi(x, y, z):
    # outcome table p(s, t) = (1 + s x + t y + s t z) / 4, s, t = +-1
    joint = (
        _xlog2x((1 + x + y + z) / 4)
        + _xlog2x((1 + x - y - z) / 4)
        + _xlog2x((1 - x + y - z) / 4)
        + _xlog2x((1 - x - y + z) / 4)
    )
    marg = (
        _xlog2x((1 + x) / 2) + _xlog2x((1 - x) / 2)
        + _xlog2x((1 + y) / 2) + _xlog2x((1 - y) / 2)
    )
    return joint - marg


def _direction(theta, phi):
    st = math.sin(theta)
    return (st * math.cos(phi), st * math.sin(phi), math.cos(theta))


def measured_mi(ra, rb, corr, ta, pa, tb, pb):
    """Shannon mutual information (bits) of two Bloch-direction qubit measurements."""
    na = _direction(ta, pa)
    nb = _direction(tb, pb)
    x = na[0] * ra[0] + na[1] * ra[1] + na[2] * ra[2]
    y = nb[0] * rb[0] + nb[1] * rb[1] + nb[2] * rb[2]
    z = 0.0
    for i in range(3):
        for j in range(3):
            z += na[i] * corr[i][j] * nb[j]
    return _table_mi(x, y, z)


def _plogp(p):
    p = np.clip(p, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = p * np.log2(p)
    return np.where(p > 1e-15, out, 0.0)


def grid_search(ra, rb, corr, thetas, phis):
    """Exhaustive maximisation of ``measured_mi`` over a product angle grid.

    Returns ``(best_mi, k, l)`` where ``k``/``l`` index the flattened
    (theta, phi) grid of party a / b. Values within ``TIE`` of the maximum
    count as ties, which resolve to the first index in lexicographic order.
    """
    th, ph = np.meshgrid(np.asarray(thetas), np.asarray(phis), indexing="ij")
    dirs = np.stack(
        [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1
    ).reshape(-1, 3)
    x = dirs @ np.asarray(ra)
    y = dirs @ np.asarray(rb)
    z = dirs @ np.asarray(corr) @ dirs.T
    xs = x[:, None]
    ys = y[None, :]
    joint = (
        _plogp((1 + xs + ys + z) / 4)
        + _plogp((1 + xs - ys - z) / 4)
        + _plogp((1 - xs + ys - z) / 4)
        + _plogp((1 - xs - ys + z) / 4)
    )
    marg = _plogp((1 + xs) / 2) + _plogp((1 - xs) / 2) + _plogp((1 + ys) / 2) + _plogp((1 - ys) / 2)
    mi = joint - marg
    flat = int(np.argmax(mi >= mi.max() - TIE))
    k, l = divmod(flat, mi.shape[1])
    return float(mi[k, l]), k, l
