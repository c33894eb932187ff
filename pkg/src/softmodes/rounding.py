"""Rounding maps on probability simplices and categorical sampling.

A rounding map is an order-preserving self-map of the simplex: if one
coordinate dominates another on the way in, it still dominates on the way
out. Three family members are provided:

* plurality: mass 1/|argmax set| on the tied-maximum coordinates, 0 elsewhere
* uniform:   the identity map
* soft(t):   w_i proportional to x_i**t, for finite t >= 1

soft(1) coincides with uniform, and soft(t) approaches plurality as t grows;
the infinite limit is represented by the plurality variant itself, never by a
float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

PLURALITY = "plurality"
UNIFORM = "uniform"
SOFT = "soft"
VARIANTS = (PLURALITY, UNIFORM, SOFT)

# |sum(x) - 1| tolerance for accepting a vector as a simplex point.
SIMPLEX_SUM_TOL = 1e-9
# Scaled weights below this are flushed to zero so denormal handling cannot
# differ across platforms.
_FLUSH = 1e-300


@dataclass(frozen=True)
class RoundingSpec:
    """Which member of the rounding family to apply."""

    variant: str
    t: Optional[float] = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown rounding variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant == SOFT:
            if self.t is None:
                raise ValueError("soft rounding requires an exponent t")
            t = float(self.t)
            if not math.isfinite(t):
                raise ValueError("soft exponent t must be finite; use the plurality variant for the sharp limit")
            if t < 1.0:
                raise ValueError(f"soft exponent t must be >= 1, got {t}")
            object.__setattr__(self, "t", t)
        elif self.t is not None:
            raise ValueError(f"{self.variant} rounding takes no exponent")

    @classmethod
    def plurality(cls) -> "RoundingSpec":
        return cls(PLURALITY)

    @classmethod
    def uniform(cls) -> "RoundingSpec":
        return cls(UNIFORM)

    @classmethod
    def soft(cls, t: float) -> "RoundingSpec":
        return cls(SOFT, float(t))

    @classmethod
    def parse(cls, variant: str, t: Optional[float] = None) -> "RoundingSpec":
        """Build a spec from CLI-style arguments, ignoring t unless soft."""
        variant = variant.lower()
        if variant == SOFT:
            return cls(SOFT, t)
        return cls(variant)


def check_simplex(x: np.ndarray) -> np.ndarray:
    """Validate and return x as a float64 probability vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise ValueError(f"simplex point must be a non-empty 1-D vector, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValueError("simplex point contains non-finite entries")
    if (x < 0).any():
        raise ValueError("simplex point contains negative entries")
    total = float(x.sum())
    if abs(total - 1.0) > SIMPLEX_SUM_TOL:
        raise ValueError(f"simplex point sums to {total}, expected 1 within {SIMPLEX_SUM_TOL}")
    return x


def plurality_weights(x: np.ndarray) -> np.ndarray:
    """Plurality map along the last axis: 1/|argmax set| on exact maxima.

    Exact float comparison is intentional; empirical frequencies are ratios
    of small integers over a shared denominator, so ties compare exactly.
    """
    x = np.asarray(x, dtype=np.float64)
    top = x.max(axis=-1, keepdims=True)
    mask = x == top
    return mask / mask.sum(axis=-1, keepdims=True)


def soft_weights(x: np.ndarray, t: float) -> np.ndarray:
    """Power map along the last axis: w_i = x_i**t / sum x**t.

    Computed as (x_i / max x)**t before normalizing, which keeps large t
    from underflowing without changing the value; t == 1 short-circuits to
    the identity so it is bitwise equal to uniform rounding.
    """
    x = np.asarray(x, dtype=np.float64)
    if t == 1.0:
        return x.copy()
    top = x.max(axis=-1, keepdims=True)
    scaled = np.divide(x, top, out=np.zeros_like(x), where=top > 0)
    w = scaled**t
    w[w < _FLUSH] = 0.0
    return w / w.sum(axis=-1, keepdims=True)


def _round_weights(x: np.ndarray, spec: RoundingSpec) -> np.ndarray:
    """Apply the rounding map along the last axis without input validation."""
    if spec.variant == PLURALITY:
        return plurality_weights(x)
    if spec.variant == UNIFORM:
        return np.asarray(x, dtype=np.float64).copy()
    return soft_weights(x, spec.t)


def round_simplex(x: np.ndarray, spec: RoundingSpec) -> np.ndarray:
    """Round a single simplex point; validates the input."""
    return _round_weights(check_simplex(x), spec)


def sample_index(weights: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw along the last axis using uniforms u in [0, 1).

    Zero-weight categories are never selected. Shapes: weights (..., s),
    u (...), result (...) of integer indices.
    """
    weights = np.asarray(weights, dtype=np.float64)
    cum = np.cumsum(weights[..., :-1], axis=-1)
    return (np.asarray(u)[..., None] >= cum).sum(axis=-1, dtype=np.int64)


def sample_category(x: np.ndarray, rng: np.random.Generator) -> int:
    """Draw one category index with probability x_i from a simplex point."""
    x = check_simplex(x)
    return int(sample_index(x, rng.random()))


def field_grid(spec: RoundingSpec, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric grid over the 2-simplex with per-point displacements.

    Returns (points, displacements), both of shape (m, 3) with
    m = (resolution+1)(resolution+2)/2 and displacement = round(x) - x,
    ready for quiver-style plotting.
    """
    resolution = int(resolution)
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    pts = []
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            pts.append((i, j, resolution - i - j))
    points = np.array(pts, dtype=np.float64) / resolution
    rounded = _round_weights(points, spec)
    return points, rounded - points
