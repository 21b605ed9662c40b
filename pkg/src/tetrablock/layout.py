"""
Storage layouts for pyramid data.

``LinearLayout`` stores elements densely in ``(z, y, x)`` rank order.
``BlockedLayout`` cuts the pyramid into ``rho**3`` blocks, keeps only blocks
whose block coordinate is itself inside the pyramid of side ``nb``, stores
those blocks in block-rank order and each block row-major (``lz, ly, lx``)
inside a fully padded ``rho**3`` span.  Every block therefore starts on a
multiple of ``rho**3 * element_size`` bytes.
"""

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    Coord3,
    PyramidShape,
    g_map_array,
    rank3,
    rank3_array,
    tetra,
)
from .errors import DomainError, InvalidParameterError

DEFAULT_ELEMENT_SIZE = 4

#: unit steps accepted by :func:`neighbor`
DIRECTIONS = {
    "+x": (1, 0, 0),
    "-x": (-1, 0, 0),
    "+y": (0, 1, 0),
    "-y": (0, -1, 0),
    "+z": (0, 0, 1),
    "-z": (0, 0, -1),
}


@dataclass(frozen=True)
class BlockGrid:
    n: int
    rho: int

    def __post_init__(self):
        if self.rho < 1:
            raise InvalidParameterError(f"block size rho must be >= 1, got {self.rho}")
        if self.n < 0:
            raise InvalidParameterError(f"n must be >= 0, got {self.n}")

    @property
    def nb(self):
        return -(-self.n // self.rho)

    @property
    def nblocks(self):
        return tetra(self.nb)

    @property
    def block_volume(self):
        return self.rho**3

    @property
    def shape(self):
        return PyramidShape(self.n)

    @property
    def block_shape(self):
        return PyramidShape(self.nb)


@dataclass(frozen=True)
class LinearLayout:
    shape: PyramidShape
    element_size: int = DEFAULT_ELEMENT_SIZE
    kind = "linear"

    def __post_init__(self):
        if self.element_size < 1:
            raise InvalidParameterError("element_size must be >= 1")

    @property
    def n(self):
        return self.shape.n

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "rho": None, "element_size": self.element_size}


@dataclass(frozen=True)
class BlockedLayout:
    grid: BlockGrid
    element_size: int = DEFAULT_ELEMENT_SIZE
    kind = "blocked"

    def __post_init__(self):
        if self.element_size < 1:
            raise InvalidParameterError("element_size must be >= 1")

    @property
    def n(self):
        return self.grid.n

    @property
    def block_bytes(self):
        return self.grid.block_volume * self.element_size

    def to_dict(self):
        return {
            "kind": self.kind,
            "n": self.n,
            "rho": self.grid.rho,
            "element_size": self.element_size,
        }


def make_layout(kind, n, rho=4, element_size=DEFAULT_ELEMENT_SIZE):
    if kind == "linear":
        return LinearLayout(PyramidShape(n), element_size)
    if kind == "blocked":
        return BlockedLayout(BlockGrid(n, rho), element_size)
    raise InvalidParameterError(f"unknown layout kind {kind!r}")


def layout_to_json(layout):
    return json.dumps(layout.to_dict(), sort_keys=True)


def layout_from_json(text):
    d = json.loads(text)
    try:
        return make_layout(d["kind"], d["n"], d.get("rho") or 1, d["element_size"])
    except KeyError as e:
        raise InvalidParameterError(f"layout document is missing {e.args[0]!r}") from None


class BlockPosition(NamedTuple):
    block: Coord3
    local: Coord3


class PaddingReport(NamedTuple):
    padded: int
    ratio: float
    model: int  # the n^2 rho^3 overhead term of the analytic blocked cost


def linear_address(c, layout):
    return rank3(c, layout.shape) * layout.element_size


def block_of(c, grid):
    r = grid.rho
    x, y, z = c
    return BlockPosition(Coord3(x // r, y // r, z // r), Coord3(x % r, y % r, z % r))


def blocked_address(c, layout):
    grid = layout.grid
    if not grid.shape.contains(c):
        raise DomainError(f"{tuple(c)} is not in a pyramid of side {grid.n}")
    block, (lx, ly, lz) = block_of(c, grid)
    r = grid.rho
    slot = rank3(block, grid.block_shape) * r**3 + (lz * r + ly) * r + lx
    return slot * layout.element_size


def address(c, layout):
    if isinstance(layout, BlockedLayout):
        return blocked_address(c, layout)
    return linear_address(c, layout)


def storage_size(layout):
    """Bytes occupied by the layout, padding included."""
    if isinstance(layout, BlockedLayout):
        return layout.grid.nblocks * layout.block_bytes
    return layout.shape.tn * layout.element_size


def padding_overhead(grid):
    tn = tetra(grid.n)
    padded = grid.nblocks * grid.block_volume - tn
    ratio = padded / tn if tn else 0.0
    return PaddingReport(padded, ratio, grid.n**2 * grid.rho**3)


def neighbor(c, delta, n):
    """Shift ``c`` one step; ``None`` when the result leaves the pyramid."""
    dx, dy, dz = DIRECTIONS[delta] if isinstance(delta, str) else delta
    x, y, z = c
    moved = Coord3(x + dx, y + dy, z + dz)
    if 0 <= moved.x <= moved.y <= moved.z < n:
        return moved
    return None


# numpy paths


def slot_array(x, y, z, grid):
    """Element slot (address / element_size) in the blocked layout."""
    r = grid.rho
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    bx, lx = np.divmod(x, r)
    by, ly = np.divmod(y, r)
    bz, lz = np.divmod(z, r)
    return rank3_array(bx, by, bz) * r**3 + (lz * r + ly) * r + lx


def address_array(x, y, z, layout):
    if isinstance(layout, BlockedLayout):
        return slot_array(x, y, z, layout.grid) * layout.element_size
    return rank3_array(x, y, z) * layout.element_size


def coords_of_slots(slots, grid):
    """Inverse of :func:`slot_array` over the whole padded buffer.

    Returns ``(x, y, z, valid)``; padded slots come back with ``valid`` False.
    """
    r = grid.rho
    slots = np.asarray(slots, dtype=np.int64)
    brank, local = np.divmod(slots, r**3)
    lo = int(brank.min()) if brank.size else 0
    span = int(brank.max()) - lo + 1 if brank.size else 0
    if span <= brank.size:
        # map each block once, then spread to its slots
        bx, by, bz = (v[brank - lo] for v in g_map_array(np.arange(lo, lo + span, dtype=np.int64)))
    else:
        bx, by, bz = g_map_array(brank)
    lz, rem = np.divmod(local, r * r)
    ly, lx = np.divmod(rem, r)
    x = bx * r + lx
    y = by * r + ly
    z = bz * r + lz
    valid = (x <= y) & (y <= z) & (z < grid.n)
    return x, y, z, valid
