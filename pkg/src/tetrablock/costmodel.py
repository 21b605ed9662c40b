"""
Closed-form warp alignment and access-cost model for pyramid layouts.

All quantities are per-warp transaction counts in units of ``k``-byte
transactions.  ``F`` below is the fraction of warps whose access starts on a
``k``-byte boundary in one triangular layer of side ``n``.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

from .core import tetra, tri
from .errors import InvalidParameterError

DEFAULT_OMEGA = 32
DEFAULT_ELEMENT_SIZE = 4
DEFAULT_K = 128
DEFAULT_ALPHA = 2.0
DEFAULT_RHO = 4


@dataclass(frozen=True)
class WarpModel:
    """Warp access parameters.

    Attributes
    ----------
    omega : int
        Threads per warp.
    b : int
        Bytes read by each thread.
    k : int
        Alignment and transaction size in bytes; must be even.
    alpha : float
        Cost multiplier of a misaligned warp access, ``>= 1``.
    """

    omega: int = DEFAULT_OMEGA
    b: int = DEFAULT_ELEMENT_SIZE
    k: int = DEFAULT_K
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if self.omega < 1:
            raise InvalidParameterError(f"omega must be >= 1, got {self.omega}")
        if self.b < 1:
            raise InvalidParameterError(f"b must be >= 1, got {self.b}")
        _check_k(self.k)
        if self.alpha < 1:
            raise InvalidParameterError(f"alpha must be >= 1, got {self.alpha}")


def _check_k(k, even=True):
    if k < 1:
        raise InvalidParameterError(f"alignment k must be >= 1, got {k}")
    if even and k % 2:
        raise InvalidParameterError(f"alignment k must be even, got {k}")


def _check_n(n):
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")


def aligned_rows_general(n, k):
    """Aligned row count for any ``k``, odd values included."""
    _check_n(n)
    _check_k(k, even=False)
    return n // (k + k * ((k + 1) % 2))


def aligned_rows(n, k):
    _check_n(n)
    _check_k(k)
    return n // (2 * k)


def aligned_warps(n, k):
    r = aligned_rows(n, k)
    w = r * (r + 1)
    assert w <= n**2 / (4 * k**2) + n / (2 * k)
    return w


def aligned_fraction(n, k):
    """Fraction of aligned warps in a triangular layer of side ``n``."""
    w = aligned_warps(n, k)
    f = w / -(-tri(n) // k)
    assert f < 1 / (2 * k) + 1 / n
    return f


def cost_linear(n, k, alpha=DEFAULT_ALPHA):
    """Transactions to read a linearly stored pyramid once.

    ``F`` is taken from the largest layer, side ``n``.
    """
    if alpha < 1:
        raise InvalidParameterError(f"alpha must be >= 1, got {alpha}")
    f = aligned_fraction(n, k)
    # == F + alpha * (1 - F), arranged so alpha = 1 gives exactly T_n / k
    return tetra(n) / k * (alpha - (alpha - 1) * f)


def cost_linear_layered(n, k, alpha=DEFAULT_ALPHA):
    """Like :func:`cost_linear` but each layer ``i`` uses its own ``F``."""
    if alpha < 1:
        raise InvalidParameterError(f"alpha must be >= 1, got {alpha}")
    total = 0.0
    for i in range(1, n + 1):
        f = aligned_fraction(i, k)
        total += tri(i) / k * (alpha - (alpha - 1) * f)
    return total


class BlockedCost(NamedTuple):
    model: float  # (T_n + n^2 rho^3) / k
    exact: float  # padded storage of the blocked layout / k


def cost_blocked(n, k, rho=DEFAULT_RHO):
    _check_n(n)
    _check_k(k)
    if rho < 1:
        raise InvalidParameterError(f"rho must be >= 1, got {rho}")
    model = (tetra(n) + n**2 * rho**3) / k
    exact = tetra(-(-n // rho)) * rho**3 / k
    return BlockedCost(model, exact)


class ReorgSpeedup(NamedTuple):
    approx: float  # 2 - F, the large-n limit
    ratio_model: float  # C / C' with the n^2 rho^3 overhead term
    ratio_exact: float  # C / C' with the real padded layout size


def reorg_speedup(n, k, rho=DEFAULT_RHO):
    """Gain of the blocked over the linear layout at ``alpha = 2``."""
    f = aligned_fraction(n, k)
    c = cost_linear(n, k, 2)
    blocked = cost_blocked(n, k, rho)
    out = ReorgSpeedup(2 - f, c / blocked.model, c / blocked.exact)
    assert max(out) <= 2
    return out


class MapSpeedup(NamedTuple):
    i: object
    i_limit: object


def _ratio(num, den):
    if isinstance(num, Rational) and isinstance(den, Rational):
        return Fraction(num) / Fraction(den)
    return num / den


def map_speedup(n, beta, tau):
    """Box-over-pyramid dispatch gain for per-block costs ``beta`` and ``tau``.

    Integer or ``Fraction`` inputs give exact ``Fraction`` results.
    """
    _check_n(n)
    if beta <= 0 or tau <= 0:
        raise InvalidParameterError("beta and tau must be positive")
    i = _ratio(6 * beta * n**3, tau * (n**3 + 3 * n**2 + 2 * n))
    return MapSpeedup(i, _ratio(6 * beta, tau))


@dataclass
class CostReport:
    n: int
    k: int
    rho: int
    alpha: float
    r_k: int
    w_k: int
    f: float
    c_linear: float
    c_blocked_model: float
    c_blocked_exact: float
    # C against a fully aligned, unpadded read of the pyramid; 2 - F at alpha=2
    ratio: float
    ratio_model: float
    ratio_exact: float
    i: float
    i_limit: float

    def to_dict(self):
        return asdict(self)


def cost_report(n, k=DEFAULT_K, rho=DEFAULT_RHO, alpha=DEFAULT_ALPHA, beta=1, tau=1):
    c = cost_linear(n, k, alpha)
    blocked = cost_blocked(n, k, rho)
    f = aligned_fraction(n, k)
    ms = map_speedup(n, beta, tau)
    return CostReport(
        n=n,
        k=k,
        rho=rho,
        alpha=alpha,
        r_k=aligned_rows(n, k),
        w_k=aligned_warps(n, k),
        f=f,
        c_linear=c,
        c_blocked_model=blocked.model,
        c_blocked_exact=blocked.exact,
        ratio=alpha - (alpha - 1) * f,
        ratio_model=c / blocked.model,
        ratio_exact=c / blocked.exact,
        i=float(ms.i),
        i_limit=float(ms.i_limit),
    )

