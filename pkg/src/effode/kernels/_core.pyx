# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel core. Same surface as pyref; plain single-threaded loops.

Matrices this package sees are small (tens to low hundreds of nodes), so
naive C loops beat library-call overhead and keep results deterministic.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log

cnp.import_array()


def matmul(double[:, ::1] a, double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, p
    cdef double aip
    for i in range(n):
        for p in range(k):
            aip = a[i, p]
            if aip == 0.0:
                continue
            for j in range(m):
                o[i, j] += aip * b[p, j]
    return out


def matmul_nt(double[:, ::1] a, double[:, ::1] b):
    # a @ b.T
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, p
    cdef double acc
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for p in range(k):
                acc += a[i, p] * b[j, p]
            o[i, j] = acc
    return out


def matmul_tn(double[:, ::1] a, double[:, ::1] b):
    # a.T @ b
    cdef Py_ssize_t n = a.shape[1], k = a.shape[0], m = b.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, p
    cdef double api
    for p in range(k):
        for i in range(n):
            api = a[p, i]
            if api == 0.0:
                continue
            for j in range(m):
                o[i, j] += api * b[p, j]
    return out


def hadamard(double[:, ::1] a, double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = a[i, j] * b[i, j]
    return out


def add(double[:, ::1] a, double[:, ::1] b):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = a[i, j] + b[i, j]
    return out


def scale(double[:, ::1] a, double s):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = a[i, j] * s
    return out


def transpose(double[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((m, n))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[j, i] = a[i, j]
    return out


def affine_combine(double[:, ::1] a, double[:, ::1] b, double lam):
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef double mu = 1.0 - lam
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = lam * a[i, j] + mu * b[i, j]
    return out


def relu(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = x[i, j] if x[i, j] > 0.0 else 0.0
    return out


def relu_vjp(double[:, ::1] x, double[:, ::1] g):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[i, j] = g[i, j] if x[i, j] > 0.0 else 0.0
    return out


def log_softmax(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double mx, acc, lse
    for i in range(n):
        mx = x[i, 0]
        for j in range(1, m):
            if x[i, j] > mx:
                mx = x[i, j]
        acc = 0.0
        for j in range(m):
            acc += exp(x[i, j] - mx)
        lse = log(acc)
        for j in range(m):
            o[i, j] = (x[i, j] - mx) - lse
    return out


def log_softmax_vjp(double[:, ::1] y, double[:, ::1] g):
    cdef Py_ssize_t n = y.shape[0], m = y.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double gsum
    for i in range(n):
        gsum = 0.0
        for j in range(m):
            gsum += g[i, j]
        for j in range(m):
            o[i, j] = g[i, j] - exp(y[i, j]) * gsum
    return out


def row_mean(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((1, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            o[0, j] += x[i, j]
    for j in range(m):
        o[0, j] /= n
    return out


def row_mean_vjp(double[:, ::1] g, Py_ssize_t n):
    cdef Py_ssize_t m = g.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n, m))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    cdef double v
    for j in range(m):
        v = g[0, j] / n
        for i in range(n):
            o[i, j] = v
    return out


def total_sum(double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], m = x.shape[1]
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(m):
            acc += x[i, j]
    return np.array([[acc]])


def full(Py_ssize_t rows, Py_ssize_t cols, double value):
    return np.full((rows, cols), value)
