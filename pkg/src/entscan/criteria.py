"""Separability criteria and entanglement quantification.

All criteria here are necessary conditions for separability: a violation
certifies entanglement, while passing proves nothing, so the only negative
verdict is UNDETECTED.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInputError, NumericalError
from .linalg import PSD_TOL, DensityMatrix, matrix_fingerprint, trace_norm
from .reshape import (
    MAX_SCAN_SUBSYSTEMS,
    Label,
    complement_labels,
    cut_and_realign,
    enumerate_label_subsets,
    format_label_set,
    generalized_transpose,
    is_hermitian_label_set,
    partial_transpose,
)

# Absolute slack on (trace norm - 1) before a subset counts as a violation;
# SVD error for the matrix sizes handled here is orders of magnitude below.
NORM_TOL = 1e-9


class Verdict(str, Enum):
    ENTANGLED_CERTIFIED = "ENTANGLED_CERTIFIED"
    UNDETECTED = "UNDETECTED"


@dataclass(frozen=True)
class SubsetResult:
    """Outcome of one reshaped-matrix evaluation."""

    labels: frozenset[Label]
    complement: frozenset[Label]
    trace_norm: float
    shape: tuple[int, int]
    is_hermitian_case: bool
    min_eigenvalue: float | None
    violating: bool

    def label_text(self) -> str:
        return format_label_set(self.labels)


@dataclass(frozen=True)
class CriterionReport:
    """Full scan outcome over the enumerated label subsets."""

    results: tuple[SubsetResult, ...]
    max_norm: float
    argmax_labels: frozenset[Label]
    violations: tuple[frozenset[Label], ...]
    verdict: Verdict
    measure_e: float
    negativity_per_subsystem: tuple[float, ...]
    dedupe: bool
    norm_tol: float


def _hermitian_eigs(mat: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(mat)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"eigensolver did not converge for {matrix_fingerprint(mat)}"
        ) from exc


def evaluate_subset(
    rho: DensityMatrix, labels, norm_tol: float = NORM_TOL
) -> SubsetResult:
    """Trace norm (and, for square Hermitian cases, minimum eigenvalue) of
    one generalized transpose."""
    n = len(rho.dims)
    labels = frozenset(labels)
    reshaped = generalized_transpose(rho, labels)
    hermitian_case = is_hermitian_label_set(labels, n)
    if hermitian_case:
        eigs = _hermitian_eigs(reshaped.mat)
        norm = float(np.abs(eigs).sum())
        min_eig = float(eigs.min())
    else:
        norm = trace_norm(reshaped.mat)
        min_eig = None
    return SubsetResult(
        labels=labels,
        complement=complement_labels(labels, n),
        trace_norm=norm,
        shape=reshaped.shape,
        is_hermitian_case=hermitian_case,
        min_eigenvalue=min_eig,
        violating=norm > 1.0 + norm_tol,
    )


def ppt_criterion(
    rho: DensityMatrix, psd_tol: float = PSD_TOL
) -> list[SubsetResult]:
    """Positivity of every non-trivial partial transposition.

    One result per subsystem subset X (complements deduped, so 2^(n-1) - 1
    results); violating iff the minimum eigenvalue drops below ``-psd_tol``.
    """
    n = len(rho.dims)
    out = []
    full = (1 << n) - 1
    for mask in range(1, full):
        if mask > (full ^ mask):
            continue
        subs = [k for k in range(n) if mask & (1 << k)]
        eigs = _hermitian_eigs(partial_transpose(rho, subs))
        labels = frozenset(Label(k, kind) for k in subs for kind in ("r", "c"))
        min_eig = float(eigs.min())
        out.append(
            SubsetResult(
                labels=labels,
                complement=complement_labels(labels, n),
                trace_norm=float(np.abs(eigs).sum()),
                shape=(rho.dim, rho.dim),
                is_hermitian_case=True,
                min_eigenvalue=min_eig,
                violating=min_eig < -psd_tol,
            )
        )
    return out


def bipartite_cuts(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All unordered two-block partitions of ``range(n)``, subsystem 0 first."""
    cuts = []
    full = (1 << n) - 1
    for mask in range(1, full):
        if not mask & 1:  # fix subsystem 0 in the first block to avoid doubles
            continue
        block1 = tuple(k for k in range(n) if mask & (1 << k))
        block2 = tuple(k for k in range(n) if not mask & (1 << k))
        cuts.append((block1, block2))
    return cuts


def cut_label_set(cut, n: int) -> frozenset[Label]:
    """The label subset whose transpose matches the cut's realignment up to
    row/column permutations (hence with equal trace norm)."""
    block1, block2 = cut
    return frozenset(
        {Label(k, "c") for k in block1} | {Label(k, "r") for k in block2}
    )


def realignment_criterion(
    rho: DensityMatrix, cuts=None, norm_tol: float = NORM_TOL
) -> list[SubsetResult]:
    """Trace norm of the realignment across bipartite cuts (default: all).

    Any norm above 1 + ``norm_tol`` certifies entanglement.
    """
    n = len(rho.dims)
    if n < 2:
        raise InvalidInputError("realignment_criterion requires at least 2 subsystems")
    if cuts is None:
        cuts = bipartite_cuts(n)
    out = []
    for cut in cuts:
        block1, block2 = cut
        reshaped = cut_and_realign(rho, block1, block2)
        norm = trace_norm(reshaped.mat)
        labels = cut_label_set(cut, n)
        out.append(
            SubsetResult(
                labels=labels,
                complement=complement_labels(labels, n),
                trace_norm=norm,
                shape=reshaped.shape,
                is_hermitian_case=False,
                min_eigenvalue=None,
                violating=norm > 1.0 + norm_tol,
            )
        )
    return out


def negativity(rho: DensityMatrix, subsystem: int) -> float:
    """(trace norm of the subsystem's partial transpose - 1) / 2, floored at 0."""
    value = (trace_norm(partial_transpose(rho, [subsystem])) - 1.0) / 2.0
    return max(0.0, value)


def gpt_scan(
    rho: DensityMatrix,
    dedupe: bool = True,
    workers: int | None = None,
    norm_tol: float = NORM_TOL,
    max_subsystems: int = MAX_SCAN_SUBSYSTEMS,
) -> CriterionReport:
    """Evaluate every enumerated label subset and assemble the verdict.

    Results are produced in canonical (bitmask-ascending) subset order
    regardless of ``workers``, so reports are deterministic across runs and
    parallelism degrees. Ties for the largest norm resolve to the earliest
    subset in canonical order.
    """
    n = len(rho.dims)
    subsets = enumerate_label_subsets(n, dedupe=dedupe, max_n=max_subsystems)

    def one(labels):
        return evaluate_subset(rho, labels, norm_tol=norm_tol)

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = tuple(pool.map(one, subsets))
    else:
        results = tuple(one(labels) for labels in subsets)

    best = results[0]
    for res in results[1:]:
        if res.trace_norm > best.trace_norm:
            best = res
    violations = tuple(res.labels for res in results if res.violating)
    verdict = Verdict.ENTANGLED_CERTIFIED if violations else Verdict.UNDETECTED
    # Below the violation threshold the measure is exactly zero: rounding can
    # push the largest norm a few ulp past 1 on separable states, and those
    # must report E = 0, not 1e-16.
    measure = (best.trace_norm - 1.0) / 2.0 if violations else 0.0
    return CriterionReport(
        results=results,
        max_norm=best.trace_norm,
        argmax_labels=best.labels,
        violations=violations,
        verdict=verdict,
        measure_e=measure,
        negativity_per_subsystem=tuple(negativity(rho, k) for k in range(n)),
        dedupe=dedupe,
        norm_tol=norm_tol,
    )


def measure_e(
    rho: DensityMatrix,
    dedupe: bool = True,
    workers: int | None = None,
    max_subsystems: int = MAX_SCAN_SUBSYSTEMS,
) -> float:
    """Largest (trace norm - 1) / 2 over all label subsets, zero when no
    subset exceeds the violation threshold.

    Exactly zero on every separable state; an upper bound for each
    subsystem's negativity since the scan includes all partial
    transpositions.
    """
    return gpt_scan(
        rho, dedupe=dedupe, workers=workers, max_subsystems=max_subsystems
    ).measure_e
