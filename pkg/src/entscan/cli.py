"""Command-line front end.

Subcommands: ``analyze`` (run all criteria on a state), ``norms`` (one
label subset), ``scan-family`` (detection threshold of a one-parameter
family), ``generate`` (write a matrix file).

Exit codes: 0 = ran fine / nothing detected, 1 = input error,
2 = numerical failure, 3 = entanglement certified (analyze only).

Reports contain no timestamps or file paths, only content, so identical
inputs and flags produce byte-identical output regardless of scan
parallelism.
"""

import argparse
import json
import sys
from math import prod

import numpy as np

from . import __version__
from .criteria import (
    NORM_TOL,
    Verdict,
    bipartite_cuts,
    evaluate_subset,
    gpt_scan,
    ppt_criterion,
    realignment_criterion,
)
from .errors import InvalidInputError, NumericalError
from .linalg import (
    HERM_TOL_SCALE,
    NORMALIZE_MAX_DEV,
    PSD_TOL,
    PURITY_TOL,
    RECON_TOL,
    TRACE_TOL,
    DensityMatrix,
    density_matrix,
)
from .reshape import (
    MAX_SCAN_SUBSYSTEMS,
    format_label_set,
    mask_of_labels,
    parse_label_set,
    subsystem_letter,
)
from .states import family_help, generate, parse_state_spec, spec_text

PARAM_TOL = 1e-6  # absolute tolerance of the scan-family bisection


# --- matrix files -----------------------------------------------------------

def load_matrix_file(path: str):
    """Read a matrix file: dims, D x D entries as [re, im] pairs, metadata.

    Returns ``(matrix, dims, name, description)``; raises
    :class:`InvalidInputError` with the offending line or field on any
    malformed content.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(data, dict):
        raise InvalidInputError(f"{path}: top level must be a JSON object")
    dims = data.get("dims")
    if not isinstance(dims, list) or not dims or not all(
        isinstance(d, int) and d >= 1 for d in dims
    ):
        raise InvalidInputError(f"{path}: field 'dims' must be a list of positive integers")
    side = prod(dims)
    rows = data.get("matrix")
    if not isinstance(rows, list) or len(rows) != side:
        raise InvalidInputError(f"{path}: field 'matrix' must be a {side}x{side} array")
    mat = np.zeros((side, side), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != side:
            raise InvalidInputError(f"{path}: matrix[{i}] must have {side} entries")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) for v in cell)
            ):
                raise InvalidInputError(
                    f"{path}: matrix[{i}][{j}] must be a [re, im] pair of numbers"
                )
            mat[i, j] = complex(cell[0], cell[1])
    name = data.get("name")
    description = data.get("description")
    for field, value in (("name", name), ("description", description)):
        if value is not None and not isinstance(value, str):
            raise InvalidInputError(f"{path}: field '{field}' must be a string")
    return mat, tuple(dims), name, description


def save_matrix_file(path: str, rho: DensityMatrix, name=None, description=None) -> None:
    data = {
        "dims": list(rho.dims),
        "matrix": [
            [[float(v.real), float(v.imag)] for v in row] for row in rho.mat
        ],
    }
    if name is not None:
        data["name"] = name
    if description is not None:
        data["description"] = description
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


def _resolve_input(text: str, normalize: bool, seed: int):
    """Interpret ``text`` as an existing matrix file, else as a state spec."""
    import os

    if os.path.exists(text):
        mat, dims, name, _ = load_matrix_file(text)
        rho = density_matrix(mat, dims, normalize=normalize)
        return rho, (name or ""), normalize
    try:
        spec = parse_state_spec(text, default_seed=seed)
    except InvalidInputError as exc:
        raise InvalidInputError(
            f"input {text!r} is neither an existing file nor a state spec ({exc})"
        ) from exc
    return generate(spec), spec_text(spec), False


# --- report assembly --------------------------------------------------------

def _tolerances(norm_tol: float) -> dict:
    return {
        "hermiticity_tol_scale": HERM_TOL_SCALE,
        "trace_tol": TRACE_TOL,
        "psd_tol": PSD_TOL,
        "purity_tol": PURITY_TOL,
        "reconstruction_tol": RECON_TOL,
        "normalize_max_deviation": NORMALIZE_MAX_DEV,
        "norm_tol": norm_tol,
        "param_tol": PARAM_TOL,
    }


def _subset_dict(res) -> dict:
    return {
        "labels": format_label_set(res.labels),
        "mask": mask_of_labels(res.labels),
        "complement": format_label_set(res.complement),
        "shape": list(res.shape),
        "trace_norm": res.trace_norm,
        "hermitian_case": res.is_hermitian_case,
        "min_eigenvalue": res.min_eigenvalue,
        "violating": res.violating,
    }


def _subsystem_letters(labels) -> str:
    return "".join(
        subsystem_letter(k) for k in sorted({lab.subsystem for lab in labels})
    )


def build_analyze_report(
    rho: DensityMatrix, name: str, normalized: bool, *,
    dedupe: bool, workers, norm_tol: float, max_subsystems: int,
    min_eigenvalue=None,
) -> dict:
    n = len(rho.dims)
    scan = gpt_scan(
        rho, dedupe=dedupe, workers=workers,
        norm_tol=norm_tol, max_subsystems=max_subsystems,
    )
    ppt = ppt_criterion(rho)
    ppt_rows = []
    for res in ppt:
        row = _subset_dict(res)
        row["subsystems"] = _subsystem_letters(res.labels)
        ppt_rows.append(row)
    realignment_rows = []
    if n >= 2:
        cuts = bipartite_cuts(n)
        for cut, res in zip(cuts, realignment_criterion(rho, cuts, norm_tol=norm_tol)):
            row = _subset_dict(res)
            row["cut"] = "{}|{}".format(
                "".join(subsystem_letter(k) for k in cut[0]),
                "".join(subsystem_letter(k) for k in cut[1]),
            )
            realignment_rows.append(row)
    input_block = {
        "name": name,
        "dims": list(rho.dims),
        "trace_re": rho.trace().real,
        "trace_im": rho.trace().imag,
        "hermiticity_residual": rho.hermiticity_residual(),
        "normalized": normalized,
    }
    if min_eigenvalue is not None:
        input_block["min_eigenvalue"] = min_eigenvalue
    return {
        "tool": {"name": "entscan", "version": __version__},
        "input": input_block,
        "tolerances": _tolerances(norm_tol),
        "ppt": {"results": ppt_rows},
        "realignment": {"applicable": n >= 2, "results": realignment_rows},
        "scan": {
            "dedupe": dedupe,
            "subsets_evaluated": len(scan.results),
            "results": [_subset_dict(res) for res in scan.results],
            "max_norm": scan.max_norm,
            "argmax_labels": format_label_set(scan.argmax_labels),
            "violations": [format_label_set(v) for v in scan.violations],
        },
        "verdict": scan.verdict.value,
        "measure_e": scan.measure_e,
        "negativity_per_subsystem": list(scan.negativity_per_subsystem),
    }


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render_human_analyze(report: dict) -> str:
    lines = []
    tool = report["tool"]
    inp = report["input"]
    lines.append(f"{tool['name']} {tool['version']} separability report")
    lines.append(
        "input: {}  dims {}  trace {}{}{}j  herm residual {}".format(
            inp["name"] or "(unnamed)",
            "x".join(str(d) for d in inp["dims"]),
            _fmt(inp["trace_re"]),
            "+" if inp["trace_im"] >= 0 else "-",
            _fmt(abs(inp["trace_im"])),
            _fmt(inp["hermiticity_residual"]),
        )
    )
    if inp.get("normalized"):
        lines.append("input was auto-normalized by its trace")
    if "min_eigenvalue" in inp:
        lines.append(f"min eigenvalue of the input: {_fmt(inp['min_eigenvalue'])}")
    tol = report["tolerances"]
    lines.append(
        "tolerances: norm_tol {}  psd_tol {}  trace_tol {}".format(
            _fmt(tol["norm_tol"]), _fmt(tol["psd_tol"]), _fmt(tol["trace_tol"])
        )
    )
    lines.append("")
    lines.append("partial transposition (PPT):")
    if not report["ppt"]["results"]:
        lines.append("  (single subsystem: nothing to transpose)")
    for row in report["ppt"]["results"]:
        lines.append(
            "  X={{{}}}  min eig {}  trace norm {}  {}".format(
                row["subsystems"], _fmt(row["min_eigenvalue"]),
                _fmt(row["trace_norm"]),
                "VIOLATION" if row["violating"] else "ok",
            )
        )
    lines.append("realignment across bipartite cuts:")
    if not report["realignment"]["applicable"]:
        lines.append("  (single subsystem: not applicable)")
    for row in report["realignment"]["results"]:
        lines.append(
            "  {}  shape {}x{}  trace norm {}  {}".format(
                row["cut"], row["shape"][0], row["shape"][1],
                _fmt(row["trace_norm"]),
                "VIOLATION" if row["violating"] else "ok",
            )
        )
    scan = report["scan"]
    lines.append(
        "label-subset scan ({} subsets{}):".format(
            scan["subsets_evaluated"],
            ", complement pairs deduped" if scan["dedupe"] else "",
        )
    )
    for row in scan["results"]:
        mineig = (
            f"  min eig {_fmt(row['min_eigenvalue'])}"
            if row["min_eigenvalue"] is not None
            else ""
        )
        lines.append(
            "  [{:>4}] {{{}}}  shape {}x{}  trace norm {}{}  {}".format(
                row["mask"], row["labels"], row["shape"][0], row["shape"][1],
                _fmt(row["trace_norm"]), mineig,
                "VIOLATION" if row["violating"] else "ok",
            )
        )
    lines.append(
        "max norm {} at {{{}}}".format(_fmt(scan["max_norm"]), scan["argmax_labels"])
    )
    lines.append("")
    lines.append(f"verdict: {report['verdict']}")
    lines.append(f"E = {_fmt(report['measure_e'])}")
    lines.append(
        "negativity per subsystem: [{}]".format(
            ", ".join(_fmt(v) for v in report["negativity_per_subsystem"])
        )
    )
    return "\n".join(lines) + "\n"


def _emit(report: dict, fmt: str, human_renderer) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True))
        sys.stdout.write("\n")
    else:
        sys.stdout.write(human_renderer(report))


# --- subcommands ------------------------------------------------------------

def cmd_analyze(args) -> int:
    rho, name, normalized = _resolve_input(args.input, args.normalize, args.seed)
    min_eig = None
    if args.check_psd:
        min_eig = rho.min_eigenvalue()
        rho.validate_psd()
    report = build_analyze_report(
        rho, name, normalized,
        dedupe=not args.no_dedupe, workers=args.workers,
        norm_tol=args.tol_norm, max_subsystems=args.max_n,
        min_eigenvalue=min_eig,
    )
    _emit(report, args.format, render_human_analyze)
    return 3 if report["verdict"] == Verdict.ENTANGLED_CERTIFIED.value else 0


def render_human_norms(report: dict) -> str:
    return (
        "labels {{{}}}  shape {}x{}  trace norm {}{}\n".format(
            report["labels"], report["shape"][0], report["shape"][1],
            _fmt(report["trace_norm"]),
            "  VIOLATION" if report["violating"] else "",
        )
    )


def cmd_norms(args) -> int:
    rho, _, _ = _resolve_input(args.input, args.normalize, args.seed)
    labels = parse_label_set(args.labels, len(rho.dims))
    res = evaluate_subset(rho, labels, norm_tol=args.tol_norm)
    report = _subset_dict(res)
    _emit(report, args.format, render_human_norms)
    return 0


def _resolve_sweep(text: str):
    """Turn a family spec with its trailing real parameter omitted into a
    builder ``param -> DensityMatrix`` plus a canonical description."""
    family, _, rest = text.strip().partition(":")
    family = family.strip().lower()
    fixed = [t.strip() for t in rest.split(",") if t.strip()] if rest.strip() else []
    sweepable = {"werner": 0, "isotropic": 1, "horodecki3x3": 0, "horodecki2x4": 0}
    if family not in sweepable:
        raise InvalidInputError(
            f"family {family!r} cannot be swept; families with one free real "
            f"parameter: {', '.join(sorted(sweepable))}"
        )
    if len(fixed) != sweepable[family]:
        raise InvalidInputError(
            f"{family} needs {sweepable[family]} fixed parameter(s) before the "
            f"swept one, got {len(fixed)}"
        )

    def build(value: float) -> DensityMatrix:
        tokens = fixed + [repr(float(value))]
        return generate(f"{family}:{','.join(tokens)}")

    desc = family if not fixed else f"{family}:{','.join(fixed)}"
    return build, desc


def render_human_scan_family(report: dict) -> str:
    lines = [
        "threshold scan: {} over [{}, {}] ({} grid points)".format(
            report["family"], _fmt(report["param_min"]), _fmt(report["param_max"]),
            report["grid_points"],
        )
    ]
    for row in report["grid"]:
        lines.append(
            "  param {}  max norm {}  {}".format(
                _fmt(row["param"]), _fmt(row["max_norm"]),
                "VIOLATION" if row["violating"] else "ok",
            )
        )
    lines.append(report["message"])
    if report["threshold"] is not None:
        lines.append(
            "threshold: {} (+/- {})  first violating subset: {{{}}}".format(
                _fmt(report["threshold"]), _fmt(report["param_tol"]),
                report["first_violating_labels"],
            )
        )
    return "\n".join(lines) + "\n"


def cmd_scan_family(args) -> int:
    build, desc = _resolve_sweep(args.family)
    lo, hi = float(args.min), float(args.max)
    if not lo < hi:
        raise InvalidInputError(f"need min < max, got [{lo}, {hi}]")
    points = int(args.grid)
    if points < 2:
        raise InvalidInputError(f"grid needs at least 2 points, got {points}")

    def max_norm(value: float) -> float:
        return gpt_scan(
            build(value), dedupe=True, workers=args.workers,
            norm_tol=args.tol_norm, max_subsystems=args.max_n,
        ).max_norm

    def violates(norm: float) -> bool:
        return norm > 1.0 + args.tol_norm

    grid = [lo + (hi - lo) * i / (points - 1) for i in range(points)]
    grid_rows = []
    for value in grid:
        norm = max_norm(value)
        grid_rows.append({"param": value, "max_norm": norm, "violating": violates(norm)})

    bracket = None
    for left, right in zip(grid_rows, grid_rows[1:]):
        if left["violating"] != right["violating"]:
            bracket = (left, right)
            break

    threshold = None
    first_labels = None
    if bracket is None:
        if all(row["violating"] for row in grid_rows):
            message = "no threshold in range (every sampled parameter violates)"
        elif any(row["violating"] for row in grid_rows):
            message = "no threshold in range (no sign change between adjacent grid points)"
        else:
            message = "no threshold in range"
    else:
        # orient the bracket: ok_end stays non-violating, bad_end violating
        ok_end, bad_end = (
            (bracket[0]["param"], bracket[1]["param"])
            if bracket[1]["violating"]
            else (bracket[1]["param"], bracket[0]["param"])
        )
        while abs(bad_end - ok_end) > PARAM_TOL:
            mid = 0.5 * (ok_end + bad_end)
            if violates(max_norm(mid)):
                bad_end = mid
            else:
                ok_end = mid
        threshold = 0.5 * (ok_end + bad_end)
        at_bad = gpt_scan(
            build(bad_end), dedupe=True, workers=args.workers,
            norm_tol=args.tol_norm, max_subsystems=args.max_n,
        )
        first_labels = (
            format_label_set(at_bad.violations[0]) if at_bad.violations else ""
        )
        message = "violation threshold located"

    report = {
        "tool": {"name": "entscan", "version": __version__},
        "family": desc,
        "param_min": lo,
        "param_max": hi,
        "grid_points": points,
        "param_tol": PARAM_TOL,
        "norm_tol": args.tol_norm,
        "grid": grid_rows,
        "threshold": threshold,
        "first_violating_labels": first_labels,
        "message": message,
    }
    _emit(report, args.format, render_human_scan_family)
    return 0


def cmd_generate(args) -> int:
    spec = parse_state_spec(args.spec, default_seed=args.seed)
    rho = generate(spec)
    save_matrix_file(args.output, rho, name=spec_text(spec))
    sys.stdout.write(
        "wrote {}x{} matrix (dims {}) to {}\n".format(
            rho.dim, rho.dim, "x".join(str(d) for d in rho.dims), args.output
        )
    )
    return 0


# --- argument parsing -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_common(sub) -> None:
    sub.add_argument("--normalize", action="store_true",
                     help="divide by the trace when |tr - 1| <= 1e-3")
    sub.add_argument("--tol-norm", type=float, default=NORM_TOL, metavar="X",
                     help="violation slack on (trace norm - 1), default %(default)g")
    sub.add_argument("--max-n", type=int, default=MAX_SCAN_SUBSYSTEMS, metavar="N",
                     help="largest subsystem count the scan accepts, default %(default)s")
    sub.add_argument("--format", choices=("human", "json"), default="human",
                     help="report format, default %(default)s")
    sub.add_argument("--seed", type=int, default=0, metavar="S",
                     help="seed for seeded state specs that omit one, default %(default)s")
    sub.add_argument("--workers", type=int, default=1, metavar="W",
                     help="scan threads; the report does not depend on this")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="entscan",
        description="Entanglement detection for multipartite density matrices "
                    "via trace norms of row/column-relabeled matrices.",
        epilog=f"state specs: {family_help()}",
    )
    parser.add_argument("--version", action="version", version=f"entscan {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    analyze = subs.add_parser(
        "analyze", help="run PPT, realignment and the full label-subset scan",
        epilog=f"state specs: {family_help()}",
    )
    analyze.add_argument("input", help="matrix file path or state spec text")
    analyze.add_argument("--no-dedupe", action="store_true",
                         help="list all 2^(2n) subsets instead of complement pairs")
    analyze.add_argument("--check-psd", action="store_true",
                         help="reject input whose minimum eigenvalue is below -psd_tol")
    _add_common(analyze)
    analyze.set_defaults(func=cmd_analyze)

    norms = subs.add_parser("norms", help="trace norm of one label subset")
    norms.add_argument("input", help="matrix file path or state spec text")
    norms.add_argument("labels", help="label subset like 'cA,rB'; empty string for none")
    _add_common(norms)
    norms.set_defaults(func=cmd_norms)

    scan = subs.add_parser(
        "scan-family",
        help="locate the detection threshold of a one-parameter family",
    )
    scan.add_argument("family",
                      help="family with the swept parameter omitted, e.g. "
                           "'werner', 'isotropic:3', 'horodecki2x4'")
    scan.add_argument("--min", type=float, required=True, help="range start")
    scan.add_argument("--max", type=float, required=True, help="range end")
    scan.add_argument("--grid", type=int, default=33, metavar="N",
                      help="grid points before bisection, default %(default)s")
    _add_common(scan)
    scan.set_defaults(func=cmd_scan_family)

    gen = subs.add_parser("generate", help="write a state spec to a matrix file",
                          epilog=f"state specs: {family_help()}")
    gen.add_argument("spec", help="state spec text")
    gen.add_argument("output", help="output file path")
    gen.add_argument("--seed", type=int, default=0, metavar="S",
                     help="seed for seeded specs that omit one, default %(default)s")
    gen.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except InvalidInputError as exc:
        sys.stderr.write(f"entscan: error: {exc}\n")
        return 1
    except NumericalError as exc:
        sys.stderr.write(f"entscan: numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
