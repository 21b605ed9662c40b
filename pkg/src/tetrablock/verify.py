"""
Exactness checks for the rank maps.

The exhaustive check compares ``g_map`` against an enumeration of every
pyramid point built from ``numpy.tril_indices``; the randomized check
compares layer and row recovery against binary search over cumulative-sum
tables of triangular and tetrahedral numbers.  Neither oracle uses the
closed-form roots.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .core import (
    MAX_N_ARRAY,
    PyramidShape,
    g_map,
    g_map_array,
    rank3,
    rank3_array,
    tetra,
    unrank2,
    unrank2_array,
    unrank_layer,
    unrank_layer_array,
)
from .errors import InvalidParameterError, VerificationError

EXHAUSTIVE_LIMIT = 512
DEFAULT_RANDOM_SAMPLES = 100_000
# scalar-path spot checks per randomized run
SCALAR_SAMPLES = 2000
_CHUNK = 1 << 21


@dataclass
class VerifyReport:
    n: int
    mode: str
    seed: object
    ranks_checked: int
    mismatches: int
    first_bad_rank: object

    def to_dict(self):
        return asdict(self)

    @property
    def ok(self):
        return self.mismatches == 0


def enumerate_layer(z):
    """All ``(x, y)`` of layer ``z`` in row-major order."""
    y, x = np.tril_indices(z + 1)
    return x.astype(np.int64), y.astype(np.int64)


def _first_bad(mask, ranks):
    return int(ranks[np.flatnonzero(mask)[0]]) if mask.any() else None


def verify_exhaustive(n):
    """Check ``g_map`` and ``rank3`` on every rank of a side-``n`` pyramid.

    Ranks ``[0, tetra(m))`` map to layers ``z < m`` for every ``m <= n`` as a
    consequence, since the oracle enumeration is layer-ordered.
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    checked = bad = 0
    first = None
    z = 0
    while z < n:
        xs, ys, zs = [], [], []
        size = 0
        while z < n and (size == 0 or size + (z + 1) * (z + 2) // 2 <= _CHUNK):
            x, y = enumerate_layer(z)
            xs.append(x)
            ys.append(y)
            zs.append(np.full(x.size, z, np.int64))
            size += x.size
            z += 1
        ox, oy, oz = (np.concatenate(a) for a in (xs, ys, zs))
        lam = np.arange(checked, checked + size, dtype=np.int64)
        gx, gy, gz = g_map_array(lam)
        wrong = (gx != ox) | (gy != oy) | (gz != oz) | (rank3_array(ox, oy, oz) != lam)
        bad += int(wrong.sum())
        if first is None:
            first = _first_bad(wrong, lam)
        checked += size
    if checked != tetra(n):
        raise VerificationError(f"enumerated {checked} points, expected {tetra(n)}")
    return VerifyReport(n, "exhaustive", None, checked, bad, first)


def _search_layer(lam, n):
    # integer binary search for the last m with tetra(m) <= lam
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid * (mid + 1) * (mid + 2) // 6 <= lam:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _search_row(lam_prime, n):
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid * (mid + 1) // 2 <= lam_prime:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _check_scalar(lams, shape):
    for lam in lams:
        lam = int(lam)
        z = _search_layer(lam, shape.n)
        lp = lam - tetra(z)
        y = _search_row(lp, z)
        expected = (lp - y * (y + 1) // 2, y, z)
        if unrank_layer(lam) != z or unrank2(lp) != expected[:2]:
            return lam
        c = g_map(lam, shape)
        if tuple(c) != expected or rank3(c, shape) != lam:
            return lam
    return None


def verify_random(n, samples=DEFAULT_RANDOM_SAMPLES, seed=0):
    """Check random ranks of a side-``n`` pyramid against binary-search oracles."""
    if samples < 0:
        raise InvalidParameterError("samples must be >= 0")
    shape = PyramidShape(n)
    tn = shape.tn
    if tn == 0 or samples == 0:
        return VerifyReport(n, "random", seed, 0, 0, None)
    rng = np.random.default_rng(seed)

    if n > MAX_N_ARRAY - 4:
        lams = [int(v) for v in rng.integers(0, tn, size=samples, dtype=np.uint64)]
        bad = _check_scalar(lams, shape)
        return VerifyReport(n, "random", seed, samples, int(bad is not None), bad)

    lam = rng.integers(0, tn, size=samples, dtype=np.int64)
    tri_table = np.cumsum(np.arange(n + 1, dtype=np.int64))
    tetra_table = np.cumsum(tri_table)
    z_ref = np.searchsorted(tetra_table, lam, side="right") - 1
    lp = lam - tetra_table[z_ref]
    y_ref = np.searchsorted(tri_table, lp, side="right") - 1
    x_ref = lp - tri_table[y_ref]

    z = unrank_layer_array(lam)
    x, y = unrank2_array(lp)
    gx, gy, gz = g_map_array(lam)
    wrong = (z != z_ref) | (x != x_ref) | (y != y_ref)
    wrong |= (gx != x_ref) | (gy != y_ref) | (gz != z_ref)
    wrong |= rank3_array(gx, gy, gz) != lam
    bad = int(wrong.sum())
    first = _first_bad(wrong, lam)

    scalar_bad = _check_scalar(lam[:SCALAR_SAMPLES], shape)
    if scalar_bad is not None:
        bad += 1
        first = scalar_bad if first is None else first
    return VerifyReport(n, "random", seed, samples, bad, first)


def verify(n, samples=None, seed=0, exhaustive_limit=EXHAUSTIVE_LIMIT):
    """Exhaustive up to ``exhaustive_limit``, randomized above it or when ``samples`` is given."""
    if samples is None and n <= exhaustive_limit:
        return verify_exhaustive(n)
    return verify_random(n, DEFAULT_RANDOM_SAMPLES if samples is None else samples, seed)
