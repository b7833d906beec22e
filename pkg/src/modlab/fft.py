"""Radix-2 Cooley-Tukey transform.

Butterflies always run along the leading axis so every numpy operation sweeps
long contiguous rows.  A single long vector is first folded into an
``n1 x n2`` matrix (four-step scheme) to get the same effect.
"""

from functools import lru_cache

import numpy as np


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=None)
def _bit_reversal(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=None)
def _twiddles(size, sign):
    half = size // 2
    return np.exp(sign * 2j * np.pi * np.arange(half) / size)[:, None]


@lru_cache(maxsize=None)
def _fold_twiddles(n1, n2, sign):
    k1 = np.arange(n1)[None, :]
    j2 = np.arange(n2)[:, None]
    return np.exp(sign * 2j * np.pi * ((j2 * k1) % (n1 * n2)) / (n1 * n2))


def _rows(a, sign):
    """DFT along axis 0 of a 2D array ``(n, m)``."""
    n, m = a.shape
    x = np.ascontiguousarray(a[_bit_reversal(n)], dtype=np.complex128)
    y = np.empty_like(x)
    size = 2
    while size <= n:
        half = size // 2
        xv = x.reshape(n // size, size, m)
        yv = y.reshape(n // size, size, m)
        even = xv[:, :half]
        odd = xv[:, half:]
        if size > 2:
            np.multiply(odd, _twiddles(size, sign), out=odd)
        np.add(even, odd, out=yv[:, :half])
        np.subtract(even, odd, out=yv[:, half:])
        x, y = y, x
        size *= 2
    return x


def _vector(v, sign):
    """DFT of a single vector through an ``n1 x n2`` fold."""
    n = v.shape[0]
    if n <= 64:
        return _rows(v.reshape(n, 1), sign).reshape(n)
    bits = n.bit_length() - 1
    n1 = 1 << (bits // 2)
    n2 = n // n1
    # A[j1, j2] = v[j1 n2 + j2]; transform over j1, twiddle, transform over j2
    B = _rows(v.reshape(n1, n2), sign)
    C = _rows(np.ascontiguousarray(B.T) * _fold_twiddles(n1, n2, sign), sign)
    # C[k2, k1] holds X[k1 + n1 k2]
    return C.reshape(n)


def _transform(a, axis, sign):
    a = np.asarray(a)
    n = a.shape[axis]
    if not is_power_of_two(n):
        raise ValueError(f"length {n} is not a power of two")
    moved = np.moveaxis(a, axis, 0)
    rest = moved.shape[1:]
    flat = moved.reshape(n, -1)
    if flat.shape[1] == 1:
        out = _vector(flat[:, 0].astype(np.complex128), sign).reshape(n, 1)
    else:
        out = _rows(flat, sign)
    return np.moveaxis(out.reshape((n,) + rest), 0, axis)


def fft(a, axis=-1):
    """Unnormalised forward DFT ``X[m] = sum_j a[j] exp(-2 pi i j m / n)``."""
    return _transform(a, axis, -1)


def ifft(a, axis=-1):
    """Inverse of :func:`fft` (includes the ``1/n`` factor)."""
    n = np.shape(a)[axis]
    return _transform(a, axis, +1) / n


@lru_cache(maxsize=None)
def _unit_roots(n):
    return np.exp(2j * np.pi * np.arange(n) / n)


def block_ifft(block, start, n, phase=True):
    """``ifft`` along axis 0 of a length-``n`` signal that vanishes outside
    rows ``start .. start + w - 1``, where ``block`` has shape ``(w, m)``.

    The fold ``n = n1 * n2`` with ``n2 >= w`` makes the first transform act
    on a single nonzero row, so only the ``n2``-point stages remain.  With
    ``phase=False`` the unimodular factor ``exp(2 pi i j start / n)`` is
    omitted, which leaves absolute values unchanged.
    """
    block = np.asarray(block, dtype=np.complex128)
    w, m = block.shape
    if not is_power_of_two(n) or w > n:
        raise ValueError("block does not fit a power-of-two length")
    n2 = 1
    while n2 < w:
        n2 *= 2
    n1 = n // n2
    x = np.zeros((n2, m), dtype=np.complex128)
    x[:w] = block
    # M[j2, k1] = x[j2] exp(+2 pi i j2 k1 / n)
    M = x[:, None, :] * _fold_twiddles(n1, n2, +1)[:, :, None]
    # C[k2, k1] holds X[k1 + n1 k2]
    out = _rows(M.reshape(n2, n1 * m), +1).reshape(n, m)
    if phase:
        out = out * _unit_roots(n)[(np.arange(n) * start) % n][:, None]
    return out / n


def fftn(a, axes):
    out = np.asarray(a, dtype=np.complex128)
    for ax in axes:
        out = fft(out, axis=ax)
    return out


def ifftn(a, axes):
    out = np.asarray(a, dtype=np.complex128)
    for ax in axes:
        out = ifft(out, axis=ax)
    return out
