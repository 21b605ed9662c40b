"""
Exact counting of warp transactions, thread occupancy and block dispatch.

Threads are laid over elements in layout order, ``omega`` to a warp.  In the
linear layout every row (or, with ``warp_scope="layer"``, every layer) starts
a fresh warp; in the blocked layout warps run straight through the padded
buffer.  Each warp access instruction is
split into ``k``-byte segments and every distinct segment costs one
transaction.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (
    box_map_array,
    g_map_array,
    rank3_array,
    tetra,
    tetra_array,
    tri,
    tri_array,
)
from .costmodel import WarpModel
from .errors import InvalidParameterError
from .layout import DIRECTIONS, BlockGrid, coords_of_slots, slot_array

PATTERNS = ("sweep-once", "stencil-6")
LAYOUTS = ("linear", "blocked")
STRATEGIES = ("box", "pyramidal")
WARP_SCOPES = ("row", "layer")

# elements per simulated chunk; bounds peak memory at a few hundred MB
CHUNK = 1 << 21


@dataclass
class TransactionReport:
    n: int
    layout: str
    pattern: str
    rho: object
    warp_scope: object
    omega: int
    b: int
    k: int
    warps_total: int
    warps_aligned: int
    transactions: int
    ideal_transactions: int
    measured_fraction: float
    measured_cost_ratio: float
    valid_bytes: int
    per_warp_transactions: np.ndarray = field(default=None, repr=False)

    def to_dict(self):
        d = asdict(self)
        del d["per_warp_transactions"]
        return d


@dataclass
class OccupancyReport:
    n: int
    rho: int
    strategy: str
    blocks_launched: int
    threads_launched: int
    threads_useful: int
    threads_wasted: int
    waste_ratio: float
    model_wasted: int  # n^2 rho^3, the analytic count of unnecessary threads

    def to_dict(self):
        return asdict(self)


def _warp_stats(group, addr, b, k):
    """Transactions and alignment per warp access.

    ``group`` labels the warp access of each active thread and must be
    nondecreasing.
    """
    m = group.size
    if m == 0:
        return np.zeros(0, np.int64), np.zeros(0, bool)
    seg = np.empty(2 * m, np.int64)
    seg[0::2] = addr // k
    seg[1::2] = (addr + b - 1) // k
    g2 = np.repeat(group, 2)
    same = g2[1:] == g2[:-1]
    if np.any(np.diff(seg)[same] < 0):
        order = np.lexsort((seg, g2))
        seg = seg[order]
    new = np.ones(2 * m, bool)
    new[1:] = ~same | (seg[1:] != seg[:-1])

    gstart = np.flatnonzero(np.concatenate(([True], group[1:] != group[:-1])))
    trans = np.add.reduceat(new.astype(np.int64), 2 * gstart)
    nthreads = np.diff(np.append(gstart, m))
    first = np.minimum.reduceat(addr, gstart)
    min_segs = -(-nthreads * b // k)
    aligned = (first % k == 0) & (trans == min_segs)
    return trans, aligned


def _linear_chunks(n):
    # whole layers per chunk so no warp straddles two chunks
    z0 = 0
    while z0 < n:
        z1 = z0 + 1
        while z1 < n and tetra(z1 + 1) - tetra(z0) <= CHUNK:
            z1 += 1
        yield z0, z1
        z0 = z1


def _linear_threads(z0, z1, omega, warp_base, scope):
    ranks = np.arange(tetra(z0), tetra(z1), dtype=np.int64)
    x, y, z = g_map_array(ranks)
    if scope == "layer":
        unit_warps = -(-_layer_sizes(z0, z1) // omega)
        unit = z - z0
        lane = ranks - tetra_array(z)
    else:
        row_len = np.concatenate([np.arange(1, zz + 2, dtype=np.int64) for zz in range(z0, z1)])
        unit_warps = -(-row_len // omega)
        unit = tri_array(z) + y - tri(z0)
        lane = x
    offsets = warp_base + np.concatenate(([0], np.cumsum(unit_warps)[:-1]))
    warp = offsets[unit] + lane // omega
    return x, y, z, warp, warp_base + int(unit_warps.sum())


def _layer_sizes(z0, z1):
    z = np.arange(z0, z1, dtype=np.int64)
    return (z + 1) * (z + 2) // 2


def _blocked_chunks(total, omega):
    step = max(omega, CHUNK // omega * omega)
    for s0 in range(0, total, step):
        yield s0, min(s0 + step, total)


def simulate_warps(n, layout="linear", model=None, pattern="sweep-once", rho=4, warp_scope="row"):
    """Replay one access pattern over a layout and count transactions.

    Parameters
    ----------
    n : int
        Pyramid side.
    layout : {"linear", "blocked"}
    model : WarpModel, optional
        Defaults to ``WarpModel()`` (32 threads, 4 bytes, 128-byte segments).
    pattern : {"sweep-once", "stencil-6"}
        ``sweep-once`` reads every slot of the layout once (padding included
        for the blocked layout).  ``stencil-6`` reads each element and its
        six axis neighbours, skipping neighbours outside the pyramid.
    rho : int
        Block edge, only used by the blocked layout.
    warp_scope : {"row", "layer"}
        Where the linear layout restarts warp numbering.  ``"layer"`` lets
        warps run across rows and only restart at each layer.

    Returns
    -------
    TransactionReport
    """
    model = model or WarpModel()
    if pattern not in PATTERNS:
        raise InvalidParameterError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")
    if layout not in LAYOUTS:
        raise InvalidParameterError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")
    if warp_scope not in WARP_SCOPES:
        raise InvalidParameterError(f"unknown warp scope {warp_scope!r}; expected one of {WARP_SCOPES}")
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}")
    omega, b, k = model.omega, model.b, model.k
    stencil = pattern == "stencil-6"
    steps = [(0, 0, 0)] + list(DIRECTIONS.values()) if stencil else [(0, 0, 0)]

    per_warp = []
    aligned_total = 0
    valid_bytes = 0

    def account(group, addr):
        nonlocal aligned_total
        trans, aligned = _warp_stats(group, addr, b, k)
        per_warp.append(trans)
        aligned_total += int(aligned.sum())

    if layout == "linear":
        ideal = -(-tetra(n) * b // k)
        warp_base = 0
        for z0, z1 in _linear_chunks(n):
            x, y, z, warp, warp_base = _linear_threads(z0, z1, omega, warp_base, warp_scope)
            valid_bytes += x.size * b
            for dx, dy, dz in steps:
                nx, ny, nz = x + dx, y + dy, z + dz
                ok = (nx >= 0) & (nx <= ny) & (ny <= nz) & (nz < n)
                account(warp[ok], rank3_array(nx[ok], ny[ok], nz[ok]) * b)
    else:
        grid = BlockGrid(n, rho)
        total = grid.nblocks * grid.block_volume
        rho = grid.rho
        ideal = -(-total * b // k)
        for s0, s1 in _blocked_chunks(total, omega):
            slots = np.arange(s0, s1, dtype=np.int64)
            warp = slots // omega
            x, y, z, valid = coords_of_slots(slots, grid)
            valid_bytes += int(valid.sum()) * b
            if not stencil:
                account(warp, slots * b)
                continue
            x, y, z, warp = x[valid], y[valid], z[valid], warp[valid]
            for dx, dy, dz in steps:
                nx, ny, nz = x + dx, y + dy, z + dz
                ok = (nx >= 0) & (nx <= ny) & (ny <= nz) & (nz < n)
                account(warp[ok], slot_array(nx[ok], ny[ok], nz[ok], grid) * b)

    per_warp = np.concatenate(per_warp) if per_warp else np.zeros(0, np.int64)
    warps_total = int(per_warp.size)
    transactions = int(per_warp.sum())
    return TransactionReport(
        n=n,
        layout=layout,
        pattern=pattern,
        rho=rho if layout == "blocked" else None,
        warp_scope=warp_scope if layout == "linear" else None,
        omega=omega,
        b=b,
        k=k,
        warps_total=warps_total,
        warps_aligned=aligned_total,
        transactions=transactions,
        ideal_transactions=ideal,
        measured_fraction=aligned_total / warps_total if warps_total else 1.0,
        measured_cost_ratio=transactions / ideal if ideal else 1.0,
        valid_bytes=valid_bytes,
        per_warp_transactions=per_warp,
    )


def simulate_occupancy(n, rho, strategy):
    """Threads launched and wasted by the box or pyramidal grid."""
    if strategy not in STRATEGIES:
        raise InvalidParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    grid = BlockGrid(n, rho)
    nb = grid.nb
    blocks = nb**3 if strategy == "box" else tetra(nb)
    launched = blocks * grid.block_volume
    useful = tetra(n)
    return OccupancyReport(
        n=n,
        rho=rho,
        strategy=strategy,
        blocks_launched=blocks,
        threads_launched=launched,
        threads_useful=useful,
        threads_wasted=launched - useful,
        waste_ratio=(launched - useful) / launched if launched else 0.0,
        model_wasted=n**2 * rho**3,
    )


def launched_ratio(n, rho):
    """Box over pyramidal launched threads, ``nb**3 / tetra(nb)``."""
    box = simulate_occupancy(n, rho, "box")
    pyr = simulate_occupancy(n, rho, "pyramidal")
    return box.threads_launched / pyr.threads_launched


def simulate_map_dispatch(n, rho, strategy):
    """Block coordinates reached by a dispatch strategy, as ``(bx, by, bz)`` arrays.

    The box strategy decomposes every index of the ``nb**3`` grid and drops
    the blocks outside the pyramid; the pyramidal strategy maps each of the
    ``tetra(nb)`` block ranks directly.
    """
    if strategy not in STRATEGIES:
        raise InvalidParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    nb = BlockGrid(n, rho).nb
    if strategy == "pyramidal":
        return g_map_array(np.arange(tetra(nb), dtype=np.int64))

    total = nb**3
    dtype = np.int32 if total < 2**31 else np.int64
    out = ([], [], [])
    step = 1 << 22
    for a in range(0, total, step):
        x, y, z, valid = box_map_array(np.arange(a, min(a + step, total), dtype=dtype), nb)
        for acc, v in zip(out, (x, y, z)):
            acc.append(v[valid].astype(np.int64))
    if not total:
        return tuple(np.zeros(0, np.int64) for _ in range(3))
    return tuple(np.concatenate(acc) for acc in out)


def same_block_set(a, b):
    """True when two dispatch results cover the same blocks."""
    if a[0].size != b[0].size:
        return False
    if all(np.array_equal(u, v) for u, v in zip(a, b)):
        return True
    ka = np.sort(rank3_array(a[0], a[1], a[2]))
    kb = np.sort(rank3_array(b[0], b[1], b[2]))
    return bool(np.array_equal(ka, kb))


def dispatch_equal(n, rho):
    return same_block_set(
        simulate_map_dispatch(n, rho, "box"),
        simulate_map_dispatch(n, rho, "pyramidal"),
    )
