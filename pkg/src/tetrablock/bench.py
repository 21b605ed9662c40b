"""
Host-CPU timing of the box and pyramidal block maps, and of layout sweeps.

Each sample maps a batch of at least ``min_evals`` block indices made of
whole dispatch sweeps, so per-block costs are comparable across grid sizes.
Numbers are machine-local.
"""

import gc
import statistics
import time
from dataclasses import asdict, dataclass

import numpy as np

from .core import box_map_array, g_map_array, rank3_array, tetra
from .costmodel import WarpModel, map_speedup
from .errors import InvalidParameterError, ResourceError, TimerResolutionError
from .layout import BlockGrid, coords_of_slots

DEFAULT_REPS = 9
DEFAULT_MIN_EVALS = 10**6
# a sample shorter than this many clock ticks is rejected
RESOLUTION_TICKS = 1000


def _clock_resolution():
    return time.get_clock_info("perf_counter").resolution


def _timed(fn, arg):
    t0 = time.perf_counter()
    out = fn(arg)
    return time.perf_counter() - t0, out


def _check_resolution(seconds, what):
    res = _clock_resolution()
    if seconds < RESOLUTION_TICKS * res:
        raise TimerResolutionError(
            f"{what} sample took {seconds:.3g}s, under {RESOLUTION_TICKS} ticks of a "
            f"{res:.3g}s clock; use a larger n or more evaluations per sample"
        )


def _stats(values):
    return {
        "min": min(values),
        "mean": statistics.fmean(values),
        "median": statistics.median(values),
        "stdev": statistics.stdev(values) if len(values) > 1 else 0.0,
    }


@dataclass
class MapBenchReport:
    n: int
    rho: int
    nb: int
    samples: int
    batch_box: int
    batch_pyramidal: int
    beta_ns: float
    tau_ns: float
    beta_min_ns: float
    beta_mean_ns: float
    beta_stdev_ns: float
    tau_min_ns: float
    tau_mean_ns: float
    tau_stdev_ns: float
    i_model: float
    i_limit: float
    i_throughput: float
    checksum_box: int
    checksum_pyramidal: int

    def to_dict(self):
        return asdict(self)


def _checksum(x, y, z, nb):
    return int((x + nb * (y + nb * z)).sum())


def bench_maps(n, rho, repetitions=DEFAULT_REPS, min_evals=DEFAULT_MIN_EVALS, warmup=1):
    """Measure per-block costs of the box map (beta) and the pyramidal map (tau).

    ``beta_ns`` and ``tau_ns`` are medians over ``repetitions`` samples.
    ``i_model`` plugs them into the dispatch gain formula at side ``n``;
    ``i_throughput`` is the ratio of whole-sweep times over the real grids,
    ``nb**3`` box blocks against ``tetra(nb)`` pyramid blocks.
    """
    if repetitions < 1:
        raise InvalidParameterError("repetitions must be >= 1")
    if min_evals < 1:
        raise InvalidParameterError("min_evals must be >= 1")
    grid = BlockGrid(n, rho)
    nb = grid.nb
    if nb < 1:
        raise InvalidParameterError("n must be >= 1")
    n_box, n_pyr = nb**3, tetra(nb)

    def batch(count):
        sweeps = -(-min_evals // count)
        return np.tile(np.arange(count, dtype=np.int64), sweeps)

    box_batch = batch(n_box)
    pyr_batch = batch(n_pyr)

    def run_box(idx):
        x, y, z, valid = box_map_array(idx, nb)
        return x[valid], y[valid], z[valid]

    def run_pyr(idx):
        return g_map_array(idx)

    for _ in range(warmup):
        run_box(box_batch)
        run_pyr(pyr_batch)

    beta, tau = [], []
    gc_was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repetitions):
            t_box, out_box = _timed(run_box, box_batch)
            t_pyr, out_pyr = _timed(run_pyr, pyr_batch)
            _check_resolution(t_box, "box map")
            _check_resolution(t_pyr, "pyramidal map")
            beta.append(t_box / box_batch.size * 1e9)
            tau.append(t_pyr / pyr_batch.size * 1e9)
    finally:
        if gc_was_enabled:
            gc.enable()

    # one sweep's worth of each side, so the two checksums are comparable
    sweeps_box = box_batch.size // n_box
    sweeps_pyr = pyr_batch.size // n_pyr
    ck_box = _checksum(*out_box, nb) // sweeps_box
    ck_pyr = _checksum(*out_pyr, nb) // sweeps_pyr

    sb, st = _stats(beta), _stats(tau)
    b_med, t_med = sb["median"], st["median"]
    ms = map_speedup(n, b_med, t_med)
    return MapBenchReport(
        n=n,
        rho=rho,
        nb=nb,
        samples=repetitions,
        batch_box=int(box_batch.size),
        batch_pyramidal=int(pyr_batch.size),
        beta_ns=b_med,
        tau_ns=t_med,
        beta_min_ns=sb["min"],
        beta_mean_ns=sb["mean"],
        beta_stdev_ns=sb["stdev"],
        tau_min_ns=st["min"],
        tau_mean_ns=st["mean"],
        tau_stdev_ns=st["stdev"],
        i_model=float(ms.i),
        i_limit=float(ms.i_limit),
        i_throughput=(n_box * b_med) / (n_pyr * t_med),
        checksum_box=ck_box,
        checksum_pyramidal=ck_pyr,
    )


@dataclass
class LayoutBenchReport:
    n: int
    rho: int
    b: int
    samples: int
    useful_bytes: int
    linear_bytes_per_s: float
    blocked_bytes_per_s: float
    ratio: float
    checksum_linear: float
    checksum_blocked: float

    def to_dict(self):
        return asdict(self)


def bench_layout_sweep(n, rho, model=None, repetitions=DEFAULT_REPS):
    """Read-accumulate throughput of the linear against the blocked layout.

    The linear side walks pyramid coordinates and computes each element's
    address before gathering it; the blocked side streams its buffer.  Both
    rates are counted over the ``T_n * b`` useful bytes.
    """
    model = model or WarpModel()
    if repetitions < 1:
        raise InvalidParameterError("repetitions must be >= 1")
    grid = BlockGrid(n, rho)
    tn = tetra(n)
    dtype = {4: np.float32, 8: np.float64, 2: np.float16}.get(model.b)
    if dtype is None:
        raise InvalidParameterError(f"no float type with element size {model.b}")
    slots = grid.nblocks * grid.block_volume
    try:
        linear = np.arange(1, tn + 1, dtype=np.float64).astype(dtype)
        blocked = np.zeros(slots, dtype=dtype)
        x, y, z, valid = coords_of_slots(np.arange(slots, dtype=np.int64), grid)
        blocked[valid] = linear[rank3_array(x[valid], y[valid], z[valid])]
        del x, y, z, valid
        ranks = np.arange(tn, dtype=np.int64)
        cx, cy, cz = g_map_array(ranks)
        del ranks
    except MemoryError as e:
        raise ResourceError(f"buffers for n={n}, rho={rho} do not fit in memory") from e

    def sweep_linear(_):
        return float(linear[rank3_array(cx, cy, cz)].sum(dtype=np.float64))

    def sweep_blocked(_):
        return float(blocked.sum(dtype=np.float64))

    t_lin, t_blk = [], []
    for _ in range(repetitions):
        t, ck_lin = _timed(sweep_linear, None)
        t_lin.append(t)
        t, ck_blk = _timed(sweep_blocked, None)
        t_blk.append(t)
    useful = tn * model.b
    lin_rate = useful / statistics.median(t_lin)
    blk_rate = useful / statistics.median(t_blk)
    return LayoutBenchReport(
        n=n,
        rho=rho,
        b=model.b,
        samples=repetitions,
        useful_bytes=useful,
        linear_bytes_per_s=lin_rate,
        blocked_bytes_per_s=blk_rate,
        ratio=blk_rate / lin_rate,
        checksum_linear=ck_lin,
        checksum_blocked=ck_blk,
    )
