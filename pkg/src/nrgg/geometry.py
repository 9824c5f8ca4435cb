"""Norms, balls and distances on R^d.

All coordinates are float64.  Three norms are supported; everything else
is an argument error.  Volumes are exact closed forms, used by the theory
module wherever a bound carries the unit-ball volume theta.
"""
from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .errors import ArgumentError


class Norm(Enum):
    L1 = "L1"
    L2 = "L2"
    LINF = "LINF"

    @classmethod
    def parse(cls, s: str) -> "Norm":
        try:
            return cls[s.strip().upper()]
        except KeyError:
            raise ArgumentError(f"unknown norm {s!r}; expected L1, L2 or LINF") from None


def distance(x, y, norm: Norm = Norm.L2) -> float:
    """Distance between two points under the given norm."""
    v = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    if norm is Norm.L2:
        return float(np.sqrt(np.sum(v * v)))
    if norm is Norm.L1:
        return float(np.sum(np.abs(v)))
    if norm is Norm.LINF:
        return float(np.max(np.abs(v))) if v.size else 0.0
    raise ArgumentError(f"unsupported norm {norm!r}")


def dist_block(A: np.ndarray, B: np.ndarray, norm: Norm = Norm.L2) -> np.ndarray:
    """Pairwise distance matrix between the rows of A (m,d) and B (k,d).

    Float semantics match distance(): same reduction order along the
    coordinate axis, so thresholding a block gives bit-identical results
    to looping over distance().
    """
    diff = A[:, None, :] - B[None, :, :]
    if norm is Norm.L2:
        return np.sqrt(np.sum(diff * diff, axis=2))
    if norm is Norm.L1:
        return np.sum(np.abs(diff), axis=2)
    if norm is Norm.LINF:
        return np.max(np.abs(diff), axis=2)
    raise ArgumentError(f"unsupported norm {norm!r}")


def unit_ball_volume(d: int, norm: Norm = Norm.L2) -> float:
    """Volume theta of the unit ball of the norm in R^d.

    LINF: 2^d.  L1: 2^d / d!.  L2: pi^(d/2) / Gamma(d/2 + 1).
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ArgumentError(f"dimension must be a positive integer, got {d!r}")
    d = int(d)
    if norm is Norm.LINF:
        return float(2.0 ** d)
    if norm is Norm.L1:
        return float(2.0 ** d / math.factorial(d))
    if norm is Norm.L2:
        return float(math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0))
    raise ArgumentError(f"unsupported norm {norm!r}")


def min_set_distance(A, B, norm: Norm = Norm.L2) -> float:
    """min over a in A, b in B of distance(a, b).  Both sets non-empty."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.size == 0 or B.size == 0:
        raise ArgumentError("min_set_distance requires non-empty point sets")
    best = math.inf
    # block over A to bound the (|A| x |B|) intermediate
    step = max(1, int(2e6 // max(1, B.shape[0])))
    for lo in range(0, A.shape[0], step):
        m = dist_block(A[lo:lo + step], B, norm)
        best = min(best, float(m.min()))
    return best
