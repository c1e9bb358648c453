"""Command-line front end.

JSON-first output (opt-in pretty tables with --pretty) so reports can feed
scripts and CI gates directly. Exit codes distinguish failure kinds:
0 success, 1 malformed input, 2 mathematical verdict (uncontrollable input
or a failed reproduction row), 3 size guard, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .commutant import commutant_dimension, extract_original_space_symmetry
from .distance import (certificate_from_json, certificate_to_json,
                       epsilon_best, epsilon_lower_svd, verify_certificate)
from .errors import (DimensionGuardError, InputError, NumericalError,
                     QdistError, UncontrollableSystemError)
from .lie_closure import lie_dimension
from .linalg import DEFAULT_TOL, ToleranceConfig, matrix_to_json
from .models import (ModelSpec, build_model, build_global_control_chain,
                     build_two_qubit_ising, delta_gamma, hopping_spectrum,
                     reference_bounds)
from .speed_limit import (pulse_from_json, t_star_lower,
                          verify_perturbation_inequality)
from .system import ControlSystem, system_from_json, system_to_json

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERDICT = 2
EXIT_GUARD = 3
EXIT_NUMERICAL = 4

_TOL_FIELDS = ("hermiticity_tol", "trace_tol", "rank_rel_tol", "commute_tol",
               "degeneracy_tol")


def _resolve_tolerances(args) -> ToleranceConfig:
    """defaults < --tol-config file < QDIST_TOL_RANK env < explicit flags."""
    values = DEFAULT_TOL.to_dict()
    config_path = getattr(args, "tol_config", None)
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict) or set(loaded) - set(_TOL_FIELDS):
            raise InputError(f"tolerance config may only set {_TOL_FIELDS}")
        values.update({k: float(v) for k, v in loaded.items()})
    env_rank = os.environ.get("QDIST_TOL_RANK")
    if env_rank is not None:
        values["rank_rel_tol"] = float(env_rank)
    for field in _TOL_FIELDS:
        flag = getattr(args, field, None)
        if flag is not None:
            values[field] = flag
    return ToleranceConfig(**values)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pretty", action="store_true",
                        help="human-readable table instead of JSON")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed recorded in report provenance")
    parser.add_argument("--tol-config", help="JSON file overriding tolerances")
    parser.add_argument("--tol-hermiticity", dest="hermiticity_tol", type=float)
    parser.add_argument("--tol-trace", dest="trace_tol", type=float)
    parser.add_argument("--tol-rank", dest="rank_rel_tol", type=float)
    parser.add_argument("--tol-commute", dest="commute_tol", type=float)
    parser.add_argument("--tol-degeneracy", dest="degeneracy_tol", type=float)


def _load_system(path: str, tol: ToleranceConfig) -> ControlSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read system file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path} at line {exc.lineno} "
                         f"column {exc.colno}: {exc.msg}") from exc
    return system_from_json(obj, tol=tol)


def _load_json(path: str, kind: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {kind} file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path} at line {exc.lineno} "
                         f"column {exc.colno}: {exc.msg}") from exc


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        for line in _pretty_lines(obj):
            print(line)
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))


def _pretty_lines(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for key, value in obj.items():
            if isinstance(value, (dict, list)) and value and not _is_scalar_list(value):
                lines.append(f"{prefix}{key}:")
                lines.extend(_pretty_lines(value, prefix + "  "))
            else:
                lines.append(f"{prefix}{key}: {_scalar(value)}")
    elif isinstance(obj, list):
        for item in obj:
            sub = _pretty_lines(item, prefix + "  ")
            if sub:
                lines.append(prefix + "- " + sub[0][len(prefix) + 2:])
                lines.extend(sub[1:])
    else:
        lines.append(f"{prefix}{_scalar(obj)}")
    return lines


def _is_scalar_list(value) -> bool:
    return isinstance(value, list) and all(
        not isinstance(x, (dict, list)) for x in value)


def _scalar(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    return str(value)


# ---------------------------------------------------------------- commands


_INT_PARAMS = {"n_qubits", "d", "n_modes", "n_photons"}
_FLOAT_PARAMS = {"delta", "cap_c"}


def _parse_model_param(raw: str) -> tuple[str, object]:
    if "=" not in raw:
        raise InputError(f"--param expects key=value, got {raw!r}")
    key, value = raw.split("=", 1)
    key = key.strip()
    if key in _INT_PARAMS:
        return key, int(value)
    if key in _FLOAT_PARAMS:
        return key, float(value)
    if key == "gammas":
        return key, [float(x) for x in value.split(",") if x]
    if key == "edges":
        edges = []
        for pair in value.split(","):
            if pair:
                i, j = pair.split("-")
                edges.append((int(i), int(j)))
        return key, edges
    raise InputError(f"unknown model parameter {key!r}")


def cmd_model(args) -> int:
    tol = _resolve_tolerances(args)
    params = dict(_parse_model_param(p) for p in args.param or [])
    spec = ModelSpec(args.name, params)
    system = build_model(spec, tol=tol)
    doc = system_to_json(system)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    output = doc
    if args.reference:
        output = {"system": doc, "reference": reference_bounds(spec)}
    if not args.out or args.reference:
        _emit(output, args.pretty)
    return EXIT_OK


def cmd_lie(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    result = lie_dimension(system.algebra_generators(), tol=tol,
                           require_traceless=False)
    d = system.dim
    controllable = result.dimension == d * d - 1
    _emit({
        "dimension": result.dimension,
        "max_dimension": d * d - 1,
        "controllable": controllable,
        "converged": result.converged,
        "depth": result.depth,
        "tolerances": tol.to_dict(),
    }, args.pretty)
    return EXIT_OK if controllable else EXIT_VERDICT


def cmd_commutant(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    result = commutant_dimension(system.algebra_generators(), tol=tol,
                                 force=args.force,
                                 want_symmetries=bool(args.emit_symmetries))
    d = system.dim
    _emit({
        "rank": result.rank,
        "expected_rank": d ** 4 - 2,
        "nullity": result.nullity,
        "controllable": result.controllable,
        "tolerances": tol.to_dict(),
    }, args.pretty)
    if args.emit_symmetries:
        with open(args.emit_symmetries, "w", encoding="utf-8") as fh:
            json.dump({"symmetries": [matrix_to_json(s)
                                      for s in result.symmetry_basis]},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK if result.controllable else EXIT_VERDICT


def _perturb_indices(system: ControlSystem, spec: str) -> list[int]:
    n = len(system.generators())
    if spec == "drift":
        if system.drift_index is None:
            raise InputError("system has no drift to perturb")
        return [system.drift_index]
    if spec == "all":
        return list(range(n))
    if spec.startswith("control:"):
        k = int(spec.split(":", 1)[1])
        offset = 1 if system.drift is not None else 0
        index = offset + k
        if not 0 <= k < n - offset:
            raise InputError(f"control index {k} out of range")
        return [index]
    raise InputError(f"--perturb must be drift, all, or control:k, got {spec!r}")


def cmd_distance(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    methods = tuple(args.methods.split(",")) if args.methods else \
        ("gap_merge", "min_cut", "block_search", "drift_removal")
    alias = {"gap": "gap_merge", "cut": "min_cut", "block": "block_search",
             "removal": "drift_removal"}
    methods = tuple(alias.get(m, m) for m in methods)
    estimate = epsilon_best(system, tol=tol, methods=methods)
    indices = _perturb_indices(system, args.perturb)
    lower = estimate.lower
    if indices != [system.drift_index]:
        lower = epsilon_lower_svd(system, indices, tol=tol)
    _emit({
        "upper": certificate_to_json(estimate.upper),
        "lower": lower,
        "perturbed_indices": indices,
        "tolerances": tol.to_dict(),
    }, args.pretty)
    return EXIT_OK


def cmd_qsl(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    if args.cert:
        cert = certificate_from_json(_load_json(args.cert, "certificate"), tol=tol)
        # never trust a serialized flag: the bound is only sound if the
        # perturbed system really is uncontrollable
        if not verify_certificate(system, cert, tol=tol):
            raise InputError("certificate failed verification against this "
                             "system; its perturbation does not break "
                             "controllability")
        cert = dataclasses.replace(cert, verified_uncontrollable=True)
    else:
        cert = epsilon_best(system, tol=tol).upper
    report = t_star_lower(system, cert, tol=tol)
    _emit(report.to_dict() | {"tolerances": tol.to_dict()}, args.pretty)
    return EXIT_OK


def cmd_verify_ineq(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    cert = certificate_from_json(_load_json(args.cert, "certificate"), tol=tol)
    pulse = pulse_from_json(_load_json(args.pulse, "pulse"))
    check = verify_perturbation_inequality(system, cert, pulse, tol=tol)
    _emit({"lhs": check.lhs, "rhs": check.rhs, "holds": check.holds,
           "tolerances": tol.to_dict()}, args.pretty)
    return EXIT_OK if check.holds else EXIT_VERDICT


def analyze_system(system: ControlSystem, tol: ToleranceConfig,
                   skip_commutant: bool = False, seed: int = 0) -> tuple[dict, int]:
    """Full pipeline report; returns (report dict, exit code)."""
    d = system.dim
    lie = lie_dimension(system.algebra_generators(), tol=tol,
                        require_traceless=False)
    lie_controllable = lie.dimension == d * d - 1
    report: dict = {
        "format": 1,
        "system": {
            "dim": d,
            "has_drift": system.drift is not None,
            "n_bounded": len(system.bounded),
            "n_unbounded": len(system.unbounded),
            "caps": [b.cap for b in system.bounded],
        },
        "lie": {
            "dimension": lie.dimension,
            "max_dimension": d * d - 1,
            "controllable": lie_controllable,
            "converged": lie.converged,
            "depth": lie.depth,
        },
        "commutant": None,
        "distance": None,
        "qsl": None,
        "provenance": {"version": __version__, "tolerances": tol.to_dict(),
                       "seed": seed},
    }
    if skip_commutant or d >= 7:
        report["commutant"] = {"skipped": "dimension guard" if d >= 7
                               else "--skip-commutant"}
    else:
        com = commutant_dimension(system.algebra_generators(), tol=tol,
                                  want_symmetries=False)
        report["commutant"] = {
            "rank": com.rank,
            "expected_rank": d ** 4 - 2,
            "nullity": com.nullity,
            "controllable": com.controllable,
        }
        if com.controllable != lie_controllable:
            raise NumericalError(
                f"lie ({lie_controllable}) and commutant ({com.controllable}) "
                "verdicts disagree")
    if not lie_controllable:
        report["note"] = "system uncontrollable: distance and qsl stages skipped"
        return report, EXIT_VERDICT
    try:
        estimate = epsilon_best(system, tol=tol)
    except InputError as exc:
        report["note"] = f"distance stage unavailable: {exc}"
        return report, EXIT_OK
    report["distance"] = {"upper": certificate_to_json(estimate.upper),
                          "lower": estimate.lower}
    report["qsl"] = t_star_lower(system, estimate.upper, tol=tol).to_dict()
    return report, EXIT_OK


def cmd_analyze(args) -> int:
    tol = _resolve_tolerances(args)
    system = _load_system(args.system, tol)
    report, code = analyze_system(system, tol, skip_commutant=args.skip_commutant,
                                  seed=args.seed)
    _emit(report, args.pretty)
    return code


# ------------------------------------------------------- paper reproduction


def reproduce_paper_rows(tol: ToleranceConfig = DEFAULT_TOL) -> list[dict]:
    """Fixed reproduction table: every worked example with PASS/FAIL."""
    rows: list[dict] = []

    def row(example, quantity, computed, expected, ok, detail=""):
        rows.append({"example": example, "quantity": quantity,
                     "computed": computed, "paper": expected,
                     "pass": bool(ok), "detail": detail})

    # two-qubit Ising: bound 1/(4 delta), exact value pi/(2 delta)
    for delta in (0.5, 1.0, 2.0):
        system = build_two_qubit_ising(delta, tol=tol)
        report = t_star_lower(system, epsilon_best(system, tol=tol).upper,
                              tol=tol, compute_lower=False)
        bound = 1.0 / (4.0 * delta)
        exact = math.pi / (2.0 * delta)
        ratio = exact / report.t_star_lower
        ok = (abs(report.t_star_lower - bound) <= 1e-12
              and abs(ratio - 2.0 * math.pi) <= 1e-12)
        row("two_qubit_ising", f"t_star_bound(delta={delta})",
            report.t_star_lower, bound, ok,
            detail=f"exact {exact:.6g}, ratio {ratio:.12g}")

    # hopping chain: spectrum formula, gap bound, closed-form time bound
    for d in (3, 10, 100):
        spec = ModelSpec("hopping_chain", {"d": d})
        ref = reference_bounds(spec)
        w = np.linalg.eigvalsh(np.diag(np.ones(d - 1), 1)
                               + np.diag(np.ones(d - 1), -1))
        spectrum_dev = float(np.max(np.abs(np.sort(w) - hopping_spectrum(d))))
        min_gap = float(np.min(np.diff(np.sort(w))))
        ok = spectrum_dev <= 1e-10 and min_gap <= ref["gap_bound"] + 1e-12
        row("hopping_chain", f"min_gap(d={d})", min_gap, ref["gap_bound"], ok,
            detail=f"gap <= bound; spectrum dev {spectrum_dev:.2e}; "
                   f"t_bound {ref['t_bound']:.6g}")

    # global-control chain: controllability verdicts plus the crowding bound
    uncontrolled = build_global_control_chain(2, [1.0, 1.0], tol=tol)
    res_equal = commutant_dimension(uncontrolled.algebra_generators(), tol=tol,
                                    want_symmetries=False)
    witness = extract_original_space_symmetry(uncontrolled.algebra_generators(),
                                              tol=tol)
    row("global_control_chain", "gamma=(1,1) uncontrollable",
        float(res_equal.nullity), 2.0,
        (not res_equal.controllable) and witness is not None,
        detail="nullity > 2 with extracted symmetry")
    controlled = build_global_control_chain(2, [1.0, 1.2], tol=tol)
    res_distinct = commutant_dimension(controlled.algebra_generators(), tol=tol,
                                       want_symmetries=False)
    dg = delta_gamma([1.0, 1.2])
    t_bound = math.sqrt(2.0) / (1.0 * dg)
    ok = res_distinct.controllable and abs(t_bound - math.sqrt(2.0) / 0.2) <= 1e-12
    row("global_control_chain", "gamma=(1,1.2) t_bound", t_bound,
        math.sqrt(2.0) / 0.2, ok, detail=f"controllable, delta_gamma {dg:.6g}")

    # cross-Kerr: coupling norm N^2/4 and bound 1/(c N^2)
    for n_photons in (2, 4, 6):
        for cap in (1.0, 0.5):
            spec = ModelSpec("cross_kerr", {"n_modes": 2, "n_photons": n_photons,
                                            "cap_c": cap})
            ref = reference_bounds(spec)
            computed_bound = 0.25 / (cap * ref["kerr_norm"])
            paper_bound = 1.0 / (cap * n_photons ** 2)
            ok = (abs(ref["kerr_norm"] - n_photons ** 2 / 4.0) <= 1e-12
                  and abs(computed_bound - paper_bound) <= 1e-12)
            row("cross_kerr", f"t_bound(N={n_photons}, c={cap})",
                computed_bound, paper_bound, ok,
                detail=f"||n1 n2|| = {ref['kerr_norm']:.6g}")
    return rows


def cmd_reproduce_paper(args) -> int:
    tol = _resolve_tolerances(args)
    rows = reproduce_paper_rows(tol)
    all_pass = all(r["pass"] for r in rows)
    if args.pretty:
        width = max(len(r["example"]) for r in rows)
        qwidth = max(len(r["quantity"]) for r in rows)
        for r in rows:
            status = "PASS" if r["pass"] else "FAIL"
            print(f"{r['example']:<{width}}  {r['quantity']:<{qwidth}}  "
                  f"computed {r['computed']:.12g}  paper {r['paper']:.12g}  "
                  f"{status}  {r['detail']}")
        print(f"overall: {'PASS' if all_pass else 'FAIL'}")
    else:
        print(json.dumps({"rows": rows, "all_pass": all_pass},
                         indent=2, sort_keys=True))
    return EXIT_OK if all_pass else EXIT_VERDICT


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdist",
        description="Controllability, distance to uncontrollability, and "
                    "quantum-speed-limit bounds for finite-dimensional "
                    "control systems.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("model", help="build a named example system")
    p.add_argument("--name", required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out", help="write system JSON to this path")
    p.add_argument("--reference", action="store_true",
                   help="include closed-form reference bounds")
    _add_common(p)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("lie", help="Lie-closure controllability test")
    p.add_argument("--system", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_lie)

    p = sub.add_parser("commutant", help="doubled-space commutant test")
    p.add_argument("--system", required=True)
    p.add_argument("--force", action="store_true",
                   help="run the dense SVD even for d >= 7")
    p.add_argument("--emit-symmetries", metavar="OUT_JSON",
                   help="write the symmetry basis to a file")
    _add_common(p)
    p.set_defaults(func=cmd_commutant)

    p = sub.add_parser("distance", help="distance-to-uncontrollability bounds")
    p.add_argument("--system", required=True)
    p.add_argument("--perturb", default="drift",
                   help="drift | control:k | all (lower-bound index set)")
    p.add_argument("--methods",
                   help="comma list from gap,cut,block,removal (default all)")
    _add_common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("qsl", help="quantum-speed-limit report")
    p.add_argument("--system", required=True)
    p.add_argument("--cert", help="certificate JSON (default: run estimators)")
    _add_common(p)
    p.set_defaults(func=cmd_qsl)

    p = sub.add_parser("analyze", help="full pipeline report")
    p.add_argument("--system", required=True)
    p.add_argument("--skip-commutant", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-ineq", help="check the propagation inequality")
    p.add_argument("--system", required=True)
    p.add_argument("--cert", required=True)
    p.add_argument("--pulse", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_verify_ineq)

    p = sub.add_parser("reproduce-paper",
                       help="reproduce all worked examples with PASS/FAIL")
    _add_common(p)
    p.set_defaults(func=cmd_reproduce_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UncontrollableSystemError as exc:
        print(f"verdict: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except DimensionGuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QdistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
