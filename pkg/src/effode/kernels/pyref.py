"""Pure-numpy kernel implementations (always available fallback).

Each function here has a signature-compatible twin in the compiled
backend (``effode.kernels._core``). All inputs and outputs are
C-contiguous float64 arrays of rank 2.
"""

import numpy as np


def matmul(a, b):
    return a @ b


def matmul_nt(a, b):
    """a @ b.T"""
    return a @ b.T


def matmul_tn(a, b):
    """a.T @ b"""
    return a.T @ b


def hadamard(a, b):
    return a * b


def add(a, b):
    return a + b


def scale(a, s):
    return a * s


def transpose(a):
    return np.ascontiguousarray(a.T)


def affine_combine(a, b, lam):
    """lam * a + (1 - lam) * b, entrywise."""
    return lam * a + (1.0 - lam) * b


def relu(x):
    return np.maximum(x, 0.0)


def relu_vjp(x, g):
    """Cotangent through relu; the subgradient at exactly 0 is 0."""
    return np.where(x > 0.0, g, 0.0)


def log_softmax(x):
    """Row-wise log-softmax with max subtraction for stability."""
    shifted = x - x.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    return shifted - lse


def log_softmax_vjp(y, g):
    """Cotangent through log-softmax given its output y: g - exp(y) * rowsum(g)."""
    return g - np.exp(y) * g.sum(axis=1, keepdims=True)


def row_mean(x):
    """Column-wise mean over rows, returned as a 1 x cols matrix."""
    return x.mean(axis=0, keepdims=True)


def row_mean_vjp(g, n):
    """Spread a 1 x cols cotangent evenly back over n rows."""
    return np.repeat(g / n, n, axis=0)


def total_sum(x):
    """Sum of all entries, returned as a 1 x 1 matrix."""
    return np.array([[x.sum()]])


def full(rows, cols, value):
    return np.full((rows, cols), value, dtype=np.float64)
