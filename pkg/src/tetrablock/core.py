"""
Index mathematics for tetrahedral (3D discrete triangular) domains.

A pyramid of side ``n`` holds the points ``0 <= x <= y <= z < n``, enumerated
in lexicographic ``(z, y, x)`` order.  Layer ``z`` starts at rank
``tetra(z)`` and row ``y`` of a layer starts at layer-local rank ``tri(y)``,
so the forward map is ``tetra(z) + tri(y) + x``.

The inverse map first recovers the layer from the real root of
``v^3 + 3v^2 + 2v - 6*lam = 0`` and then the row with the triangular square
root.  Both roots are evaluated in double precision and then corrected
against exact integer comparisons, so results are exact wherever the
integers fit in 64 bits.

Scalar functions work on Python ints and raise ``OverflowError`` instead of
wrapping.  The ``*_array`` functions are numpy equivalents operating on
``int64`` arrays and are what the exhaustive checks and simulators use.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, RankOutOfRangeError

UINT64_MAX = 2**64 - 1
INT64_MAX = 2**63 - 1

# largest correction the float root guesses may need before we call it a bug
MAX_LAYER_CORRECTION = 2
MAX_ROW_CORRECTION = 1

_CBRT3 = 3.0 ** (1.0 / 3.0)
_CBRT9 = 3.0 ** (2.0 / 3.0)


def _tri(m):
    return m * (m + 1) // 2


def _tetra(m):
    return m * (m + 1) * (m + 2) // 6


def _check_u64(value, what):
    if value > UINT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in 64 bits")
    return value


def _largest_n(limit):
    # largest n with tetra(n + 1) <= limit
    n = int(round((6 * limit) ** (1.0 / 3.0)))
    while _tetra(n + 1) > limit:
        n -= 1
    while _tetra(n + 2) <= limit:
        n += 1
    return n


#: largest side length whose ranks (and the next layer boundary) fit in uint64
MAX_N = _largest_n(UINT64_MAX)
#: same limit for the int64 numpy paths
MAX_N_ARRAY = _largest_n(INT64_MAX)
# headroom for the correction steps, which probe a few layers past the guess
_ARRAY_RANK_LIMIT = _tetra(MAX_N_ARRAY - 4)


class Coord3(NamedTuple):
    x: int
    y: int
    z: int


class BoxCoord(NamedTuple):
    x: int
    y: int
    z: int
    valid: bool


@dataclass(frozen=True)
class PyramidShape:
    """Pyramid of ``n`` stacked triangular layers."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"side length must be >= 0, got {self.n}")
        if self.n > MAX_N:
            raise OverflowError(f"n = {self.n} exceeds MAX_N = {MAX_N}")

    @property
    def tn(self):
        return tetra(self.n)

    @property
    def tn_2d(self):
        """Element count of the largest (last) layer."""
        return tri(self.n)

    def layer_size(self, z):
        return tri(z + 1)

    def contains(self, c):
        x, y, z = c
        return 0 <= x <= y <= z < self.n


def tri(m):
    """Triangular number ``m(m+1)/2``."""
    if m < 0:
        raise DomainError(f"tri() needs m >= 0, got {m}")
    return _check_u64(_tri(m), f"tri({m})")


def tetra(m):
    """Tetrahedral number ``m(m+1)(m+2)/6``."""
    if m < 0:
        raise DomainError(f"tetra() needs m >= 0, got {m}")
    return _check_u64(_tetra(m), f"tetra({m})")


def rank3(c, shape):
    """Linear rank of pyramid point ``c`` in ``(z, y, x)`` order."""
    x, y, z = c
    if not shape.contains(c):
        raise DomainError(f"{tuple(c)} is not in a pyramid of side {shape.n}")
    return tetra(z) + tri(y) + x


def _layer_root(lam):
    # real root of v^3 + 3v^2 + 2v - 6*lam = 0; singular at lam = 0
    lf = float(lam)
    s = math.sqrt(729.0 * lf * lf - 3.0) + 27.0 * lf
    c = s ** (1.0 / 3.0)
    return c / _CBRT9 + 1.0 / (_CBRT3 * c) - 1.0


def unrank_layer(lam):
    """Layer ``z`` with ``tetra(z) <= lam < tetra(z+1)``."""
    if lam < 0:
        raise DomainError(f"rank must be >= 0, got {lam}")
    if lam == 0:
        return 0
    _check_u64(lam, "rank")
    z = math.floor(_layer_root(lam))
    guess = z
    while _tetra(z) > lam:
        z -= 1
    while _tetra(z + 1) <= lam:
        z += 1
    if abs(z - guess) > MAX_LAYER_CORRECTION:
        raise ArithmeticError(
            f"cube-root guess {guess} for rank {lam} is {abs(z - guess)} layers off"
        )
    return z


def unrank2(lam_prime):
    """Row-major ``(x, y)`` of a rank inside one triangular layer."""
    if lam_prime < 0:
        raise DomainError(f"rank must be >= 0, got {lam_prime}")
    _check_u64(lam_prime, "rank")
    y = math.floor(math.sqrt(0.25 + 2.0 * lam_prime) - 0.5)
    guess = y
    while _tri(y) > lam_prime:
        y -= 1
    while _tri(y + 1) <= lam_prime:
        y += 1
    if abs(y - guess) > MAX_ROW_CORRECTION:
        raise ArithmeticError(
            f"square-root guess {guess} for rank {lam_prime} is {abs(y - guess)} rows off"
        )
    return lam_prime - _tri(y), y


def g_map(lam, shape):
    """Map a linear rank to its pyramid coordinate."""
    if not 0 <= lam < shape.tn:
        raise RankOutOfRangeError(f"rank {lam} outside [0, {shape.tn})")
    z = unrank_layer(lam)
    x, y = unrank2(lam - _tetra(z))
    return Coord3(x, y, z)


def box_map(linear, side):
    """Row-major decomposition of ``linear`` over a ``side**3`` box."""
    z, rem = divmod(linear, side * side)
    y, x = divmod(rem, side)
    return BoxCoord(x, y, z, x <= y <= z)


# numpy paths


def tri_array(m):
    m = np.asarray(m, dtype=np.int64)
    return m * (m + 1) // 2


# below this the plain product m(m+1)(m+2) fits in int64
_TETRA_DIRECT = 2_000_000


def tetra_array(m):
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0 or m.max() < _TETRA_DIRECT:
        return m * (m + 1) * (m + 2) // 6
    # divide before the last product so nothing above the result is formed
    t = m * (m + 1) // 2
    m2 = m + 2
    return np.where(m2 % 3 == 0, t * (m2 // 3), (t // 3) * m2)


def rank3_array(x, y, z):
    return tetra_array(z) + tri_array(y) + np.asarray(x, dtype=np.int64)


def _check_ranks(lam):
    if lam.size and lam.min() < 0:
        raise DomainError("ranks must be >= 0")
    if lam.size and lam.max() >= _ARRAY_RANK_LIMIT:
        raise OverflowError(f"ranks of {_ARRAY_RANK_LIMIT} and above need the scalar path")


def unrank_layer_array(lam):
    lam = np.asarray(lam, dtype=np.int64)
    _check_ranks(lam)
    lf = lam.astype(np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.cbrt(np.sqrt(729.0 * lf * lf - 3.0) + 27.0 * lf)
        v = c / _CBRT9 + 1.0 / (_CBRT3 * c) - 1.0
    z = np.where(lam == 0, 0.0, np.floor(v)).astype(np.int64)
    guess = z
    for _ in range(MAX_LAYER_CORRECTION):
        z = np.where(tetra_array(z) > lam, z - 1, z)
    for _ in range(MAX_LAYER_CORRECTION):
        z = np.where(tetra_array(z + 1) <= lam, z + 1, z)
    bad = (tetra_array(z) > lam) | (tetra_array(z + 1) <= lam)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ArithmeticError(
            f"cube-root guess {int(guess[i])} for rank {int(lam[i])} needs more "
            f"than {MAX_LAYER_CORRECTION} correction steps"
        )
    return z


def unrank2_array(lam_prime):
    lam_prime = np.asarray(lam_prime, dtype=np.int64)
    _check_ranks(lam_prime)
    y = np.floor(np.sqrt(0.25 + 2.0 * lam_prime.astype(np.float64)) - 0.5)
    y = y.astype(np.int64)
    y = np.where(tri_array(y) > lam_prime, y - 1, y)
    y = np.where(tri_array(y + 1) <= lam_prime, y + 1, y)
    bad = (tri_array(y) > lam_prime) | (tri_array(y + 1) <= lam_prime)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ArithmeticError(f"square-root guess for rank {int(lam_prime[i])} is off by more than one row")
    return lam_prime - tri_array(y), y


def g_map_array(lam):
    """Vectorised :func:`g_map`; returns ``(x, y, z)`` int64 arrays."""
    lam = np.asarray(lam, dtype=np.int64)
    z = unrank_layer_array(lam)
    x, y = unrank2_array(lam - tetra_array(z))
    return x, y, z


def box_map_array(linear, side):
    """Vectorised :func:`box_map`; returns ``(x, y, z, valid)``.

    Keeps the dtype of ``linear`` so callers can sweep large boxes in int32.
    """
    linear = np.asarray(linear)
    dt = linear.dtype.type
    plane = dt(side * side)
    z = linear // plane
    rem = linear - z * plane
    y = rem // dt(side)
    x = rem - y * dt(side)
    return x, y, z, (x <= y) & (y <= z)
