"""Command-line front end: evaluation, verification and export.

Exit status contract:
    0  success; verification commands found zero failures
    1  a verification command found failures (the document lists them)
    2  usage or parameter errors, reported as {"error": {"code", "message"}}

Every verification document carries a "failures" array; it is empty exactly
when the exit status is 0.  Exact values cross this boundary as "num/den"
strings, never as floats, unless --mode float is requested explicitly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import kernel as kernel_mod
from . import ortho, panels, recurrence
from .combinatorics import TriangularGrid
from .errors import ExactMathError, ParameterError
from .hyper import (
    F12Arguments,
    PolynomialTable,
    complementary_pair,
    krawtchouk_value,
    pfaff_pair,
)
from .params import (
    ParameterSet,
    PQuadruple,
    check_conditions_1_10,
    check_cone_2_7,
    dual_residuals,
    from_p,
    parameter_set_from_uv,
    solve_eta_from_uv,
)
from .scalar import FloatPolicy, as_rational, format_rational, to_float

WORKERS_ENV = "KRAWTCHOUK2_WORKERS"


@dataclass
class RunConfig:
    command: str
    n: int | None
    p: PQuadruple | None
    params: ParameterSet | None
    m: tuple[int, int] | None
    n_label: tuple[int, int] | None
    x: tuple[int, int] | None
    output_format: str
    mode: str
    seed: int
    panel: int | None
    workers: int | None


def _parse_pair(text: str) -> tuple[int, int]:
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) != 2:
        raise ParameterError(f"expected two comma-separated integers, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ParameterError(f"expected integers in {text!r}") from exc


def _parse_rational_pair(text: str):
    parts = [piece.strip() for piece in text.split(",")]
    if len(parts) != 2:
        raise ParameterError(f"expected two comma-separated rationals, got {text!r}")
    return as_rational(parts[0]), as_rational(parts[1])


def _workers_from_env() -> int | None:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return None
    try:
        count = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from exc
    if count < 1:
        raise ParameterError(f"{WORKERS_ENV} must be at least 1")
    return count


def _build_config(ns: argparse.Namespace) -> RunConfig:
    quad = None
    params = None
    explicit = [ns.u1, ns.v1, ns.u2, ns.v2]
    has_explicit = any(value is not None for value in explicit)
    if ns.p is not None and has_explicit:
        raise ParameterError("give either --p or explicit weights, not both")
    if ns.p is not None:
        quad = PQuadruple.parse(ns.p)
        params = from_p(quad)
    elif has_explicit:
        if any(value is None for value in explicit):
            raise ParameterError("explicit sets need all of --u1 --v1 --u2 --v2")
        weights = [as_rational(w) for w in explicit]
        if ns.eta1 is not None or ns.eta2 is not None:
            if ns.eta1 is None or ns.eta2 is None:
                raise ParameterError("--eta1 and --eta2 must be given together")
            params = ParameterSet(*weights, as_rational(ns.eta1), as_rational(ns.eta2))
        else:
            params = parameter_set_from_uv(*weights)
    return RunConfig(
        command=ns.command,
        n=ns.N,
        p=quad,
        params=params,
        m=_parse_pair(ns.m) if ns.m else None,
        n_label=_parse_pair(ns.n) if ns.n else None,
        x=_parse_pair(ns.x) if ns.x else None,
        output_format=ns.format,
        mode=ns.mode,
        seed=ns.seed,
        panel=ns.panel,
        workers=_workers_from_env(),
    )


def _require(config: RunConfig, *names: str):
    for name in names:
        if getattr(config, name) is None:
            flag = {"n": "--N", "m": "--m", "x": "--x", "params": "--p or --u1..--v2"}.get(name, name)
            raise ParameterError(f"{config.command} requires {flag}")


def _emit(document: dict, config: RunConfig) -> None:
    if config.output_format == "json":
        print(json.dumps(document, sort_keys=True, separators=(",", ":")))
    else:
        for line in _tableize(document):
            print(line)


def _tableize(document, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(document, dict):
        for key in sorted(document):
            value = document[key]
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{prefix}{key}:")
                lines.extend(_tableize(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {value if value != [] else '[]'}")
    elif isinstance(document, list):
        for item in document:
            rendered = _tableize(item, prefix + "  ")
            if len(rendered) == 1:
                lines.append(f"{prefix}- {rendered[0].strip()}")
            else:
                lines.append(f"{prefix}-")
                lines.extend(rendered)
    else:
        lines.append(f"{prefix}{document}")
    return lines


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_eval(config: RunConfig) -> int:
    _require(config, "params", "n", "m", "x")
    args = F12Arguments.from_params(config.params, config.n, config.m, config.x)
    value = krawtchouk_value(args)
    rendered = repr(to_float(value)) if config.mode == "float" else format_rational(value)
    if config.output_format == "json":
        _emit({"N": config.n, "m": list(config.m), "x": list(config.x), "value": rendered}, config)
    else:
        print(rendered)
    return 0


def _cmd_params(config: RunConfig) -> int:
    _require(config, "params")
    ps = config.params
    doc = ps.to_json_dict()
    residuals = check_conditions_1_10(ps)
    doc["conditionResiduals"] = [format_rational(r) for r in residuals]
    if all(w != 0 for w in ps.weights()):
        doc["coneResidual"] = format_rational(check_cone_2_7(ps))
    if not ps.dual_singular and ps.orthogonal:
        doc["dualResiduals"] = [format_rational(r) for r in dual_residuals(ps)]
    if config.p is not None:
        doc["p"] = config.p.to_json_dict()
        doc["delta"] = format_rational(config.p.delta)
        doc["deltaSingular"] = config.p.delta_singular
    _emit(doc, config)
    return 0


def _cmd_gram(config: RunConfig, dual: bool) -> int:
    _require(config, "params", "n")
    table = PolynomialTable.build(config.params, config.n, workers=config.workers)
    matrix = (ortho.dual_gram if dual else ortho.gram)(config.params, config.n, table=table)
    if config.output_format == "csv":
        sys.stdout.write(matrix.to_csv())
    else:
        _emit(matrix.to_json_dict(), config)
    return 0


def _cmd_norms(config: RunConfig) -> int:
    _require(config, "params", "n")
    ps = config.params
    table = PolynomialTable.build(ps, config.n, workers=config.workers)
    matrix = ortho.gram(ps, config.n, table=table)
    failures = []
    for (m, k), value in sorted(matrix.entries.items()):
        if m < k and value != 0:
            failures.append({"kind": "off_diagonal", "m": list(m), "n": list(k),
                             "value": format_rational(value)})
    diagonal = {}
    for m in matrix.grid:
        brute = matrix.entry(m, m)
        closed = ortho.norm_closed_form(ps, config.n, m)
        diagonal[f"{m[0]}_{m[1]}"] = format_rational(brute)
        if brute != closed:
            failures.append({"kind": "norm_mismatch", "m": list(m),
                             "bruteForce": format_rational(brute),
                             "closedForm": format_rational(closed)})
    doc = {"N": config.n, "diagonal": diagonal, "failures": failures}
    _emit(doc, config)
    return 1 if failures else 0


def _cmd_recurrence(config: RunConfig) -> int:
    _require(config, "n")
    if config.panel:
        quads = panels.quadruple_panel(config.panel, config.seed)
    else:
        if config.p is None:
            raise ParameterError("recurrence requires --p (or --panel)")
        quads = [config.p]
    reports = []
    failures = []
    for quad in quads:
        report = recurrence.verify_recurrence_grid(quad, config.n)
        reports.append(report.to_json_dict())
        failures.extend(report.to_json_dict()["failures"])
    doc = {"N": config.n, "seed": config.seed if config.panel else None,
           "reports": reports, "failures": failures}
    _emit(doc, config)
    return 1 if failures else 0


def _cmd_identity(config: RunConfig) -> int:
    _require(config, "n")
    if config.p is None:
        raise ParameterError("identity requires --p")
    report = recurrence.verify_euler_identity_grid(config.p, config.n, params=config.params)
    coefficient = [format_rational(r) for r in recurrence.coefficient_residuals(config.p)]
    cross = [format_rational(r) for r in recurrence.cross_coefficient_residuals(config.p)]
    doc = report.to_json_dict()
    doc["coefficientResiduals"] = coefficient
    doc["crossCoefficientResiduals"] = cross
    doc["note"] = ("failures list grid pairs where the first-order weighted Euler "
                   "operator does not annihilate the polynomial; the coefficient "
                   "residuals are the corrected, exactly-zero form")
    _emit(doc, config)
    return 1 if doc["failures"] or any(r != "0" for r in coefficient + cross) else 0


def _cmd_transform(config: RunConfig, which: str) -> int:
    _require(config, "params", "n")
    ps = config.params
    grid = TriangularGrid(config.n)
    if config.m and config.x:
        pairs = [(config.m, config.x)]
    else:
        pairs = [(m, x) for m in grid for x in grid]
    checked = 0
    skipped = 0
    failures = []

    def run(kind, fn, m, x):
        nonlocal checked, skipped
        args = F12Arguments.from_params(ps, config.n, m, x)
        try:
            lhs, rhs = fn(args)
        except ExactMathError:
            skipped += 1
            return
        checked += 1
        if lhs != rhs:
            failures.append({"kind": kind, "m": list(m), "x": list(x),
                             "lhs": format_rational(lhs), "rhs": format_rational(rhs)})

    for (m, x) in pairs:
        if which in ("pfaff1", "all"):
            run("pfaff1", lambda a: pfaff_pair(a, 1), m, x)
        if which in ("pfaff2", "all"):
            run("pfaff2", lambda a: pfaff_pair(a, 2), m, x)
        if which in ("complement", "all"):
            run("complement", complementary_pair, m, x)
    doc = {"N": config.n, "which": which, "checked": checked,
           "skipped": skipped, "failures": failures}
    _emit(doc, config)
    return 1 if failures else 0


def _cmd_kernel(config: RunConfig, ns: argparse.Namespace) -> int:
    _require(config, "n")
    policy = FloatPolicy(1e-8, 1e-8)
    failures = []
    doc: dict = {"N": config.n}
    if ns.alpha and ns.beta:
        alpha1, alpha2 = _parse_rational_pair(ns.alpha)
        beta1, beta2 = _parse_rational_pair(ns.beta)
        kp = kernel_mod.KernelParameters(alpha1, alpha2, beta1, beta2, config.n)
    elif config.params is not None and ns.mu1 is not None:
        calibration = kernel_mod.calibrate(config.params, as_rational(ns.mu1))
        doc["calibration"] = {
            "alpha1": format_rational(calibration.alpha1),
            "alpha2": format_rational(calibration.alpha2),
            "beta1": format_rational(calibration.beta1),
            "beta2": format_rational(calibration.beta2),
            "mu1": format_rational(calibration.mu1),
            "mu2": format_rational(calibration.mu2),
            "valid": calibration.valid,
        }
        if not calibration.valid:
            failures.append({"kind": "calibration_region",
                             "detail": "no kernel with probabilities in (0,1) matches this family"})
            doc["failures"] = failures
            _emit(doc, config)
            return 1
        kp = calibration.kernel_parameters(config.n)
    else:
        raise ParameterError("kernel requires --alpha/--beta, or a parameter source with --mu1")

    matrix = kernel_mod.build_kernel(kp)
    doc["parameters"] = kp.to_json_dict()
    if config.output_format == "csv":
        sys.stdout.write(matrix.to_csv())
        return 0
    bad_sums = [list(i) for i, total in matrix.source_sums().items() if total != 1]
    if bad_sums:
        failures.append({"kind": "source_sums", "sources": bad_sums})
    if kp.interior:
        pi = kernel_mod.stationary_distribution(matrix)
        fitted = kernel_mod.fit_eta(pi, config.n)
        doc["stationaryTrinomial"] = (None if fitted is None
                                      else [format_rational(fitted[0]), format_rational(fitted[1])])
        if fitted is None:
            failures.append({"kind": "stationary_not_trinomial"})
    spectrum = kernel_mod.spectrum_float(matrix)
    doc["spectrumFloat"] = [repr(value) for value in spectrum[:10]]
    mus = kernel_mod.slot_spectrum(kp)
    if mus is not None:
        try:
            family, mu1, mu2 = kernel_mod.family_from_kernel(kp)
        except ExactMathError:
            family = None
        if family is not None:
            doc["family"] = family.to_json_dict()
            table = PolynomialTable.build(family, config.n, workers=config.workers)
            lambdas = []
            for m in table.grid:
                is_eigen, lam = kernel_mod.eigenfunction_ratio_test(matrix, table, m)
                if not is_eigen:
                    failures.append({"kind": "ratio_test", "m": list(m)})
                else:
                    lambdas.append((m, lam))
            doc["eigenvalues"] = {f"{m[0]}_{m[1]}": format_rational(lam) for m, lam in lambdas}
            exact_sorted = sorted((abs(to_float(lam)) for _, lam in lambdas), reverse=True)
            if len(exact_sorted) == len(spectrum):
                gap = max(abs(a - b) for a, b in zip(exact_sorted, spectrum))
                doc["spectrumGap"] = repr(gap)
                if not policy.close(gap, 0.0):
                    failures.append({"kind": "spectrum_mismatch", "gap": repr(gap)})
    doc["failures"] = failures
    _emit(doc, config)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="krawtchouk2",
        description="Exact two-variable Krawtchouk polynomials: evaluate, verify, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "eval": "evaluate one polynomial value",
        "params": "construct and validate a parameter set",
        "gram": "export the (dual) Gram matrix",
        "norms": "verify diagonality and closed-form norms",
        "recurrence": "verify the five-term recurrence over the grid",
        "identity": "evaluate the weighted Euler operator residuals over the grid",
        "transform": "verify the transformation identities over the grid",
        "kernel": "build, verify and diagonalize a transition kernel",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--p", help="quadruple p1,p2,p3,p4 (rationals allowed)")
        for flag in ("u1", "v1", "u2", "v2", "eta1", "eta2"):
            p.add_argument(f"--{flag}", help=f"explicit {flag} (rational)")
        p.add_argument("--N", type=int, help="grid size")
        p.add_argument("--m", help="spectral label m1,m2")
        p.add_argument("--n", help="second spectral label n1,n2")
        p.add_argument("--x", help="state x1,x2")
        p.add_argument("--format", choices=("json", "csv", "table"), default="table")
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--seed", type=int, default=panels.DEFAULT_SEED)
        p.add_argument("--panel", type=int, help="run the seeded random panel of this size")
        if name == "gram":
            p.add_argument("--dual", action="store_true", help="dual pairing over spectral labels")
        if name == "transform":
            p.add_argument("--which", choices=("pfaff1", "pfaff2", "complement", "all"),
                           default="all")
        if name == "kernel":
            p.add_argument("--alpha", help="thinning probabilities alpha1,alpha2")
            p.add_argument("--beta", help="redraw probabilities beta1,beta2")
            p.add_argument("--mu1", help="leading slot eigenvalue for calibration")
    return parser


def run(argv: list[str] | None = None) -> int:
    ns = _parser().parse_args(argv)
    try:
        config = _build_config(ns)
        if ns.command == "eval":
            return _cmd_eval(config)
        if ns.command == "params":
            return _cmd_params(config)
        if ns.command == "gram":
            return _cmd_gram(config, ns.dual)
        if ns.command == "norms":
            return _cmd_norms(config)
        if ns.command == "recurrence":
            return _cmd_recurrence(config)
        if ns.command == "identity":
            return _cmd_identity(config)
        if ns.command == "transform":
            return _cmd_transform(config, ns.which)
        if ns.command == "kernel":
            return _cmd_kernel(config, ns)
        raise ParameterError(f"unknown command {ns.command!r}")
    except ExactMathError as exc:
        print(json.dumps({"error": {"code": exc.code, "message": str(exc)}},
                         sort_keys=True, separators=(",", ":")))
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
