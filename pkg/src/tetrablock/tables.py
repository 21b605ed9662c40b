"""Row builders shared by the CLI subcommands and the report."""

from itertools import product

from .core import tetra
from .costmodel import DEFAULT_ALPHA, WarpModel, aligned_fraction, cost_report
from .layout import BlockGrid, padding_overhead
from .simulator import (
    same_block_set,
    simulate_map_dispatch,
    simulate_occupancy,
    simulate_warps,
)

COST_FIELDS = [
    "n", "k", "rho", "alpha", "r_k", "w_k", "f", "c_linear", "c_blocked_model",
    "c_blocked_exact", "ratio", "ratio_model", "ratio_exact", "i", "i_limit",
]


def cost_rows(ns, ks, rhos, alpha=DEFAULT_ALPHA, beta=1, tau=1):
    return [
        cost_report(n, k, rho, alpha, beta, tau).to_dict()
        for n, k, rho in product(ns, ks, rhos)
    ]


def warp_rows(ns, layout, model, pattern, rho, warp_scope="row"):
    rows = []
    for n in ns:
        d = simulate_warps(n, layout, model, pattern, rho, warp_scope).to_dict()
        d["f_analytic"] = aligned_fraction(n, model.k) if layout == "linear" and n >= 1 else None
        rows.append(d)
    return rows


def divergence_rows(ns=(64, 128, 256, 512), k=128, b=4, omega=32):
    """Closed-form against simulated aligned fraction for the linear layout."""
    model = WarpModel(omega=omega, b=b, k=k)
    rows = []
    for n in ns:
        row_rep = simulate_warps(n, "linear", model, warp_scope="row")
        layer_rep = simulate_warps(n, "linear", model, warp_scope="layer")
        f = aligned_fraction(n, k)
        rows.append({
            "n": n,
            "k": k,
            "b": b,
            "omega": omega,
            "f_analytic": f,
            "f_bound": 1 / (2 * k) + 1 / n,
            "f_measured": row_rep.measured_fraction,
            "f_measured_layer": layer_rep.measured_fraction,
            "divergence": row_rep.measured_fraction - f,
            "transactions": row_rep.transactions,
            "ideal_transactions": row_rep.ideal_transactions,
        })
    return rows


def occupancy_rows(ns, rhos):
    rows = []
    for n, rho in product(ns, rhos):
        box = simulate_occupancy(n, rho, "box")
        pyr = simulate_occupancy(n, rho, "pyramidal")
        rows.append({
            "n": n,
            "rho": rho,
            "nb": BlockGrid(n, rho).nb,
            "box_blocks": box.blocks_launched,
            "box_threads": box.threads_launched,
            "pyramidal_blocks": pyr.blocks_launched,
            "pyramidal_threads": pyr.threads_launched,
            "threads_useful": pyr.threads_useful,
            "box_wasted": box.threads_wasted,
            "pyramidal_wasted": pyr.threads_wasted,
            "model_wasted": pyr.model_wasted,
            "launched_ratio": box.threads_launched / pyr.threads_launched if pyr.threads_launched else None,
        })
    return rows


def dispatch_rows(ns, rhos):
    rows = []
    for n, rho in product(ns, rhos):
        box = simulate_map_dispatch(n, rho, "box")
        pyr = simulate_map_dispatch(n, rho, "pyramidal")
        nb = BlockGrid(n, rho).nb
        rows.append({
            "n": n,
            "rho": rho,
            "nb": nb,
            "box_launched": nb**3,
            "box_valid": int(box[0].size),
            "pyramidal_launched": tetra(nb),
            "pyramidal_valid": int(pyr[0].size),
            "sets_equal": same_block_set(box, pyr),
        })
    return rows


def padding_rows(ns, rhos):
    rows = []
    for n, rho in product(ns, rhos):
        grid = BlockGrid(n, rho)
        p = padding_overhead(grid)
        rows.append({
            "n": n,
            "rho": rho,
            "nb": grid.nb,
            "elements": tetra(n),
            "slots": grid.nblocks * grid.block_volume,
            "padded": p.padded,
            "ratio": p.ratio,
            "model_padded": p.model,
        })
    return rows
