"""Signed directed effective networks from multivariate time series.

The estimator treats each node's signal as driven by the others through a
time-varying directed coupling matrix. Discretizing that generative model
over consecutive segment means gives, for segment t and nodes i -> j,

    A(t)[i, j] = beta * (mean[j, t+1] / mean[i, t] - 1)

with rows indexing the source node and columns the target. The remaining
functions rescale the series and the structural (undirected) network to
their canonical ranges and apply the degree normalizations consumed by the
embedding model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Denominator clamp for the ratio estimator: a segment mean closer to zero
# than this is replaced by +/- SIGNAL_FLOOR (sign(0) counts as +).
SIGNAL_FLOOR = 1e-6


@dataclass
class BoldSeries:
    """Per-subject multivariate signal: n_nodes x n_timepoints."""

    subject_id: str
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"{self.subject_id}: signal must be 2-D, got shape {v.shape}")
        if v.shape[0] < 2 or v.shape[1] < 2:
            raise ValueError(f"{self.subject_id}: need at least 2 nodes and 2 timepoints")
        if not np.isfinite(v).all():
            raise ValueError(f"{self.subject_id}: non-finite signal values")
        self.values = v


@dataclass
class EffectiveSeries:
    """Ordered signed directed adjacencies, one per segment transition."""

    matrices: list[np.ndarray] = field(default_factory=list)
    beta: float = 0.5

    def __len__(self):
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]


def segment_means(bold: np.ndarray, n_segments: int) -> np.ndarray:
    """Mean signal per node within each of n_segments contiguous segments.

    When n_segments does not divide the number of timepoints, the first
    (timepoints mod n_segments) segments receive one extra timepoint.
    Returns an n_nodes x n_segments matrix.
    """
    b = np.asarray(bold, dtype=np.float64)
    if b.ndim != 2:
        raise ValueError(f"segment_means: expected 2-D signal, got shape {b.shape}")
    n_time = b.shape[1]
    if n_segments < 2:
        raise ValueError(f"segment_means: need at least 2 segments, got {n_segments}")
    if n_segments > n_time:
        raise ValueError(
            f"segment_means: {n_segments} segments exceed {n_time} timepoints"
        )
    base, extra = divmod(n_time, n_segments)
    out = np.empty((b.shape[0], n_segments))
    start = 0
    for t in range(n_segments):
        width = base + (1 if t < extra else 0)
        out[:, t] = b[:, start : start + width].mean(axis=1)
        start += width
    return out


def _clamped(denom: np.ndarray) -> np.ndarray:
    # sign-preserving clamp; exact zero goes to +SIGNAL_FLOOR
    return np.where(
        np.abs(denom) >= SIGNAL_FLOOR,
        denom,
        np.where(denom < 0.0, -SIGNAL_FLOOR, SIGNAL_FLOOR),
    )


def effective_adjacency(seg_means: np.ndarray, beta: float) -> EffectiveSeries:
    """Directed coupling estimate between consecutive segment means.

    Entry (i, j) of matrix t is beta * (seg_means[j, t+1] / seg_means[i, t] - 1),
    the denominator clamped away from zero (see SIGNAL_FLOOR). The diagonal
    follows the same formula. Output has one matrix per transition, i.e.
    n_segments - 1 of them.
    """
    m = np.asarray(seg_means, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"effective_adjacency: expected 2-D means, got shape {m.shape}")
    if m.shape[1] < 2:
        raise ValueError("effective_adjacency: need at least 2 segments")
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise ValueError(f"effective_adjacency: beta must be in [0, 1], got {beta}")
    mats = []
    for t in range(m.shape[1] - 1):
        denom = _clamped(m[:, t])
        mats.append(beta * (m[None, :, t + 1] / denom[:, None] - 1.0))
    return EffectiveSeries(mats, beta)


def rescale_effective(series: EffectiveSeries) -> EffectiveSeries:
    """Divide every matrix by the max absolute entry across the whole series.

    One shared scale per subject keeps relative magnitudes across time
    comparable. An all-zero series is returned unchanged.
    """
    if len(series) == 0:
        raise ValueError("rescale_effective: empty series")
    peak = max(np.abs(m).max() for m in series.matrices)
    if peak == 0.0:
        return EffectiveSeries([m.copy() for m in series.matrices], series.beta)
    return EffectiveSeries([m / peak for m in series.matrices], series.beta)


def validate_structural(a: np.ndarray, what: str = "structural network") -> np.ndarray:
    """Check the undirected-network invariants: symmetric, nonnegative, zero diagonal."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what}: expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{what}: non-finite entries")
    if not np.array_equal(a, a.T):
        raise ValueError(f"{what}: matrix is not symmetric")
    if (a < 0.0).any():
        raise ValueError(f"{what}: negative entry")
    if np.diagonal(a).any():
        raise ValueError(f"{what}: nonzero diagonal")
    return a


def rescale_structural(a: np.ndarray) -> np.ndarray:
    """Divide by the max entry so weights lie in [0, 1]; all-zero input unchanged."""
    a = validate_structural(a)
    peak = a.max()
    if peak == 0.0:
        return a.copy()
    return a / peak


def normalize_directed(a: np.ndarray) -> np.ndarray:
    """Degree-normalize a signed directed adjacency.

    Entry (i, j) is divided by sqrt(d_out(i) * d_in(j)), where the degrees
    are row and column sums of |a|. A zero degree is replaced by 1 so rows
    and columns of isolated nodes pass through unscaled.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"normalize_directed: expected a square matrix, got shape {a.shape}")
    mag = np.abs(a)
    d_out = mag.sum(axis=1)
    d_in = mag.sum(axis=0)
    d_out[d_out == 0.0] = 1.0
    d_in[d_in == 0.0] = 1.0
    return a / np.sqrt(np.outer(d_out, d_in))


def normalize_structural(a: np.ndarray) -> np.ndarray:
    """Self-loop degree normalization of an undirected nonnegative adjacency.

    Adds the identity, then scales entry (i, j) by 1/sqrt(deg(i) * deg(j))
    with degrees taken as row sums after the self-loops. Output is exactly
    symmetric for valid input.
    """
    a = validate_structural(a)
    a_hat = a + np.eye(a.shape[0])
    d_inv = 1.0 / np.sqrt(a_hat.sum(axis=1))
    return a_hat * np.outer(d_inv, d_inv)
