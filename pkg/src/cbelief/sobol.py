"""Low-discrepancy Sobol point generation for up to seven dimensions.

Direction numbers come from the published Joe-Kuo primitive-polynomial table,
so the sequence is reproducible across implementations.  Points are evaluated
directly from the binary digits of the index (natural ordering); dimension one
is then exactly the base-2 radical-inverse (van der Corput) sequence.
"""

from __future__ import annotations

import numpy as np

from .arm import ArmSpec

_BITS = 32
_MAX_INDEX = 2**_BITS

# (degree s, coefficient word a, initial m values) for dimensions 2..7 from the
# Joe-Kuo table; dimension 1 needs no polynomial (m_k = 1 for all k).
_JOE_KUO_ROWS = (
    (1, 0, (1,)),
    (2, 1, (1, 3)),
    (3, 1, (1, 3, 1)),
    (3, 2, (1, 1, 1)),
    (4, 1, (1, 1, 3, 3)),
    (4, 4, (1, 3, 5, 13)),
)

MAX_DIMENSION = 1 + len(_JOE_KUO_ROWS)


def _direction_integers(dim_index: int) -> list[int]:
    """Direction integers V_1..V_32 for one dimension (0-based dim index)."""
    if dim_index == 0:
        m = [1] * _BITS
    else:
        s, a, m_init = _JOE_KUO_ROWS[dim_index - 1]
        m = list(m_init) + [0] * (_BITS - s)
        for k in range(s, _BITS):
            val = m[k - s] ^ (m[k - s] << s)
            for i in range(1, s):
                if (a >> (s - 1 - i)) & 1:
                    val ^= m[k - i] << i
            m[k] = val
    return [m[k] << (_BITS - k - 1) for k in range(_BITS)]


class SobolGenerator:
    """Stateful generator over [0,1)^dimension, starting at index 1.

    Index 0 (the all-zeros point) is skipped: it maps to the exact lower joint
    limits, a boundary configuration of no sampling value.
    """

    def __init__(self, dimension: int = 7, start_index: int = 1):
        if not 1 <= dimension <= MAX_DIMENSION:
            raise ValueError(f"dimension must be in [1, {MAX_DIMENSION}]")
        if start_index < 1:
            raise ValueError("start_index must be >= 1")
        self.dimension = dimension
        self.index = start_index
        self._directions = [_direction_integers(j) for j in range(dimension)]

    def point_at(self, index: int) -> np.ndarray:
        """Sobol point for an explicit index, independent of generator state."""
        if not 1 <= index < _MAX_INDEX:
            raise ValueError(f"index must be in [1, 2^{_BITS})")
        out = np.empty(self.dimension)
        for j in range(self.dimension):
            acc = 0
            n = index
            bit = 0
            while n:
                if n & 1:
                    acc ^= self._directions[j][bit]
                n >>= 1
                bit += 1
            out[j] = acc / _MAX_INDEX
        return out

    def next_point(self) -> np.ndarray:
        if self.index >= _MAX_INDEX:
            raise OverflowError("Sobol index counter exhausted (2^32 points)")
        point = self.point_at(self.index)
        self.index += 1
        return point


def transform_to_cspace(point: np.ndarray, arm: ArmSpec) -> np.ndarray:
    """Affine map of a unit-cube point onto the arm's joint limits."""
    point = np.asarray(point, dtype=float)
    if point.shape != (arm.joint_count,):
        raise ValueError("point dimension must match the arm's joint count")
    if np.any(point < 0.0) or np.any(point > 1.0):
        raise ValueError("unit-cube point has entries outside [0, 1]")
    return arm.lower + (arm.upper - arm.lower) * point


def star_discrepancy_proxy(points: np.ndarray, n_corners: int = 4096,
                           corner_seed: int = 20240611) -> float:
    """Anchored-box discrepancy estimate over a fixed random corner family.

    For each corner c the local discrepancy is |fraction(points <= c) - vol|;
    the proxy is the maximum over corners.  A fixed corner seed makes the
    proxy a deterministic functional of the point set.
    """
    points = np.asarray(points, dtype=float)
    rng = np.random.default_rng(corner_seed)
    corners = rng.uniform(size=(n_corners, points.shape[1]))
    worst = 0.0
    vols = corners.prod(axis=1)
    for c, vol in zip(corners, vols):
        frac = np.all(points <= c, axis=1).mean()
        worst = max(worst, abs(frac - vol))
    return worst
