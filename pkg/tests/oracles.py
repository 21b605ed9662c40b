"""Slow, obviously-correct reference implementations used by the tests."""

from itertools import product


def pyramid_points(n):
    """All (x, y, z) with 0 <= x <= y <= z < n in (z, y, x) order."""
    return [(x, y, z) for z in range(n) for y in range(z + 1) for x in range(y + 1)]


def tri_sum(m):
    return sum(range(1, m + 1))


def tetra_sum(m):
    return sum(tri_sum(i) for i in range(1, m + 1))


def layer_by_bisection(lam):
    lo, hi = 0, 1
    while hi * (hi + 1) * (hi + 2) // 6 <= lam:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid * (mid + 1) * (mid + 2) // 6 <= lam:
            lo = mid
        else:
            hi = mid
    return lo


def row_by_bisection(lam_prime):
    lo, hi = 0, 1
    while hi * (hi + 1) // 2 <= lam_prime:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid * (mid + 1) // 2 <= lam_prime:
            lo = mid
        else:
            hi = mid
    return lo


def blocked_slots(n, rho):
    """Slot list of the blocked layout: ((x, y, z), valid) per slot."""
    nb = -(-n // rho)
    slots = []
    for bx, by, bz in pyramid_points(nb):
        for lz, ly, lx in product(range(rho), repeat=3):
            c = (bx * rho + lx, by * rho + ly, bz * rho + lz)
            slots.append((c, c[0] <= c[1] <= c[2] < n))
    return slots


STEPS = [(0, 0, 0), (1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]


def _inside(c, n):
    return 0 <= c[0] <= c[1] <= c[2] < n


def warp_counts(n, layout, omega, b, k, pattern="sweep-once", rho=4, scope="row"):
    """Brute-force (warps_total, warps_aligned, transactions)."""
    if layout == "linear":
        pts = pyramid_points(n)
        where = {c: i for i, c in enumerate(pts)}
        units = {}
        for c in pts:
            key = (c[2], c[1]) if scope == "row" else c[2]
            units.setdefault(key, []).append(c)
        warps = []
        for key in sorted(units):
            members = units[key]
            warps += [members[i:i + omega] for i in range(0, len(members), omega)]
        threads = [[(c, True) for c in w] for w in warps]
    else:
        slots = blocked_slots(n, rho)
        where = {c: i for i, (c, ok) in enumerate(slots) if ok}
        threads = [slots[i:i + omega] for i in range(0, len(slots), omega)]
        if pattern == "sweep-once":
            # padded slots are read too
            where = {i: i for i in range(len(slots))}
            threads = [[(i, True) for i in range(s, min(s + omega, len(slots)))] for s in range(0, len(slots), omega)]

    steps = STEPS if pattern == "stencil-6" else STEPS[:1]
    total = aligned = trans = 0
    for warp in threads:
        for d in steps:
            addrs = []
            for c, ok in warp:
                if not ok:
                    continue
                if isinstance(c, tuple):
                    t = (c[0] + d[0], c[1] + d[1], c[2] + d[2])
                    if not _inside(t, n):
                        continue
                    addrs.append(where[t] * b)
                else:
                    addrs.append(where[c] * b)
            if not addrs:
                continue
            segs = {a // k for a in addrs} | {(a + b - 1) // k for a in addrs}
            total += 1
            trans += len(segs)
            if min(addrs) % k == 0 and len(segs) == -(-len(addrs) * b // k):
                aligned += 1
    return total, aligned, trans
