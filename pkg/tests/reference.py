"""Naive loop-based reference implementations used as independent oracles.

Everything here trades speed for obviousness: entries are placed one at a
time by explicit index arithmetic, with no reshape/transpose tricks, so the
fast implementations in the package can be checked against them.
"""

import itertools

import numpy as np


def index_ranges(dims):
    return itertools.product(*[range(d) for d in dims])


def pack(multi, dims):
    """Row-major multi-index -> flat index (subsystem 0 slowest)."""
    flat = 0
    for value, d in zip(multi, dims):
        flat = flat * d + value
    return flat


def naive_generalized_transpose(mat, dims, flips, c_slower=True, ascending=True):
    """Entry-by-entry generalized transpose.

    ``flips`` is a set of ("r"|"c", subsystem) pairs. The keyword knobs pick
    the within-side ordering so ordering-insensitivity of the trace norm can
    be exercised: the default (subsystem ascending, c slower than r) matches
    the package's canonical ordering.
    """
    n = len(dims)
    labels = [(kind, k) for k in range(n) for kind in ("r", "c")]

    def on_row(lab):
        return (lab[0] == "r") != (lab in flips)

    def key(lab):
        kind_rank = (0 if lab[0] == "c" else 1) if c_slower else (0 if lab[0] == "r" else 1)
        sub_rank = lab[1] if ascending else -lab[1]
        return (sub_rank, kind_rank)

    row = sorted([lab for lab in labels if on_row(lab)], key=key)
    col = sorted([lab for lab in labels if not on_row(lab)], key=key)
    row_dims = [dims[k] for _, k in row]
    col_dims = [dims[k] for _, k in col]
    out = np.zeros(
        (int(np.prod(row_dims, initial=1)), int(np.prod(col_dims, initial=1))),
        dtype=complex,
    )
    for i in index_ranges(dims):
        for j in index_ranges(dims):
            def bound(lab):
                kind, k = lab
                return i[k] if kind == "r" else j[k]

            out[
                pack([bound(lab) for lab in row], row_dims),
                pack([bound(lab) for lab in col], col_dims),
            ] = mat[pack(i, dims), pack(j, dims)]
    return out


def naive_realign(mat, dims):
    """Realignment straight from the block rule: row (J*m + I) holds the
    column-stacking of block (I, J)."""
    m, n = dims
    out = np.zeros((m * m, n * n), dtype=complex)
    for block_i in range(m):
        for block_j in range(m):
            block = mat[
                block_i * n:(block_i + 1) * n, block_j * n:(block_j + 1) * n
            ]
            stacked = [block[r, c] for c in range(n) for r in range(n)]
            out[block_j * m + block_i, :] = stacked
    return out


def naive_partial_transpose(mat, dims, subsystems):
    """Entry-by-entry partial transpose."""
    subs = set(subsystems)
    side = int(np.prod(dims))
    out = np.zeros((side, side), dtype=complex)
    for i in index_ranges(dims):
        for j in index_ranges(dims):
            a = tuple(j[k] if k in subs else i[k] for k in range(len(dims)))
            b = tuple(i[k] if k in subs else j[k] for k in range(len(dims)))
            out[pack(a, dims), pack(b, dims)] = mat[pack(i, dims), pack(j, dims)]
    return out


def naive_partial_trace(mat, dims, keep):
    """Entry-by-entry partial trace onto the kept subsystems."""
    keep = sorted(keep)
    traced = [k for k in range(len(dims)) if k not in keep]
    kept_dims = [dims[k] for k in keep]
    side = int(np.prod(kept_dims))
    out = np.zeros((side, side), dtype=complex)
    for a in index_ranges(kept_dims):
        for b in index_ranges(kept_dims):
            total = 0.0 + 0.0j
            for t in index_ranges([dims[k] for k in traced]):
                i = [0] * len(dims)
                j = [0] * len(dims)
                for pos, k in enumerate(keep):
                    i[k] = a[pos]
                    j[k] = b[pos]
                for pos, k in enumerate(traced):
                    i[k] = t[pos]
                    j[k] = t[pos]
                total += mat[pack(i, dims), pack(j, dims)]
            out[pack(a, kept_dims), pack(b, kept_dims)] = total
    return out


def naive_trace_norm(mat):
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def all_flip_sets(n):
    """All 2^(2n) flip sets keyed by canonical bitmask."""
    out = []
    for mask in range(1 << (2 * n)):
        flips = set()
        for k in range(n):
            if mask & (1 << (2 * k)):
                flips.add(("r", k))
            if mask & (1 << (2 * k + 1)):
                flips.add(("c", k))
        out.append((mask, frozenset(flips)))
    return out


def random_state(side, rng, rank=None):
    """Random density matrix, full rank unless ``rank`` is given."""
    rank = side if rank is None else rank
    g = rng.standard_normal((side, rank)) + 1j * rng.standard_normal((side, rank))
    mat = g @ g.conj().T
    return mat / mat.trace().real


def labels_to_flips(labels):
    """Package Label objects -> ("r"|"c", k) pairs for the naive routines."""
    return frozenset((lab.kind, lab.subsystem) for lab in labels)
