"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 invalid curve, 3 invalid divisor,
4 unsupported size.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import errors
from .config import DEFAULT
from .curve import validate_curve
from .curves import SHIPPED
from .divisors import (
    QuotientDivisor,
    degree,
    divisor_from_json,
    is_principal_X,
    is_principal_Y,
    pullback,
    pushforward,
)
from .jacobian import (
    MAX_GENUS_COMPONENTS,
    HarmonicFormY,
    abel_jacobi,
    eta_from_omega,
    fixed_component_representatives,
    form_involution_matrix,
    invariant_form_dimension,
    is_sigma1_fixed,
    omega_from_eta,
)
from .periods import sigma_invariance_residual
from .pipeline import analyze

COMMANDS = ("analyze", "periods", "aj", "principal", "fixed-points", "harmonic")
EXIT_OK, EXIT_INTERNAL, EXIT_CURVE, EXIT_DIVISOR, EXIT_SIZE = 0, 1, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kleinjac",
        description="Jacobians of imaginary hyperelliptic curves y^2 = p(x) and their Klein quotients.",
    )
    ap.add_argument(
        "--curve",
        required=True,
        help="comma-separated coefficients of p, lowest degree first (use --curve=-4,0,...), "
        "or one of: " + ", ".join(SHIPPED),
    )
    ap.add_argument("--command", choices=COMMANDS, default="analyze")
    ap.add_argument("--divisor", help="JSON divisor file (for aj and principal)")
    ap.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap.add_argument("--tol-quad", type=float, default=None, help=f"quadrature tolerance (default {DEFAULT.quad})")
    ap.add_argument("--tol-lattice", type=float, default=None, help=f"lattice tolerance (default {DEFAULT.lattice})")
    ap.add_argument("--seed", type=int, default=0, help="seed for routing jitter")
    return ap


def parse_curve_arg(text: str):
    text = SHIPPED.get(text, text)
    try:
        return validate_curve([t for t in text.replace(";", ",").split(",") if t.strip()])
    except errors.KleinJacError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise errors.CurveError(f"malformed coefficient list {text!r}: {exc}") from exc


def load_divisor(curve, path, tol):
    """Read a divisor file.

    A bare list of records is a divisor on X; ``{"space": "Y", "points": [...]}``
    is a divisor on the quotient, given by representatives.
    """
    if path is None:
        raise errors.DivisorError("this command needs --divisor")
    try:
        with open(path) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            records, space = data["points"], data.get("space", "X")
        else:
            records, space = data, "X"
        d = divisor_from_json(curve, records, tol)
    except (OSError, ValueError, KeyError, TypeError, IndexError) as exc:
        if isinstance(exc, errors.KleinJacError):
            raise
        raise errors.DivisorError(f"cannot read divisor file: {exc}") from exc
    if space == "Y":
        d = pushforward(curve, d)
    elif space != "X":
        raise errors.DivisorError(f"unknown divisor space {space!r}")
    return d


def _tolerance_report(tol) -> dict:
    return {"quad": tol.quad, "lattice": tol.lattice, "clearance": tol.clearance, "point_eq": tol.point_eq}


def cmd_analyze(curve, tol, seed) -> dict:
    an = analyze(curve, tol, seed)
    g = curve.genus
    s = an.action.matrix
    return {
        "curve": curve.to_json(),
        "homology": an.homology_json(),
        "adaptation_certificate": {
            "fixes_first_half": all(int(s[i, j]) == int(i == j) for i in range(2 * g) for j in range(g)),
            "change_determinant": int(round(np.linalg.det(np.array(an.change, dtype=float)))),
        },
        "tolerances": _tolerance_report(tol),
    }


def cmd_periods(curve, tol, seed) -> dict:
    an = analyze(curve, tol, seed)
    out = an.periods.to_json()
    out["sigma_invariance_residual"] = sigma_invariance_residual(curve, an.basis, an.periods, tol)
    out["lattice_conjugation_residual"] = an.lattice.conjugation_residual()
    out["tolerances"] = _tolerance_report(tol)
    return out


def cmd_aj(curve, tol, seed, divisor) -> dict:
    an = analyze(curve, tol, seed)
    if degree(divisor) != 0:
        raise errors.DegreeNonzero(f"divisor has degree {degree(divisor)}")
    d = pullback(curve, divisor) if isinstance(divisor, QuotientDivisor) else divisor
    z = abel_jacobi(curve, an.periods, d, None, tol)
    fixed, fres = is_sigma1_fixed(an.lattice, z, tol)
    return {
        "point": z.to_json(),
        "principal": bool(z.residual < tol.lattice),
        "sigma1_fixed": fixed,
        "sigma1_residual": fres,
        "tolerances": _tolerance_report(tol),
    }


def cmd_principal(curve, tol, seed, divisor) -> dict:
    an = analyze(curve, tol, seed)
    if isinstance(divisor, QuotientDivisor):
        ok, res, reason = is_principal_Y(curve, divisor, an.periods, None, tol)
        space = "Y"
    else:
        ok, res, reason = is_principal_X(curve, divisor, an.periods, None, tol)
        space = "X"
    if reason == "DegreeNonzero":
        raise errors.DegreeNonzero(f"divisor has degree {degree(divisor)}")
    return {"space": space, "principal": ok, "residual": res, "tolerances": _tolerance_report(tol)}


def cmd_fixed_points(curve, tol, seed) -> dict:
    if curve.genus > MAX_GENUS_COMPONENTS:
        raise errors.GenusTooLarge(f"component enumeration supports g <= {MAX_GENUS_COMPONENTS}")
    an = analyze(curve, tol, seed)
    reps = fixed_component_representatives(an.lattice, tol)
    out = []
    for z in reps:
        _, res = is_sigma1_fixed(an.lattice, z, tol)
        out.append({"value": z.to_json()["value"], "sigma1_residual": res})
    return {"components": len(reps), "representatives": out, "tolerances": _tolerance_report(tol)}


def cmd_harmonic(curve, tol, seed) -> dict:
    an = analyze(curve, tol, seed)
    g = curve.genus
    worst = 0.0
    for k in range(g):
        e = np.zeros(g)
        e[k] = 1.0
        back = eta_from_omega(omega_from_eta(HarmonicFormY(tuple(e))), tol)
        worst = max(worst, float(np.max(np.abs(np.array(back.coeffs) - e))))
    t = form_involution_matrix(curve, an.periods, tol)
    return {
        "invariant_real_dimension": invariant_form_dimension(curve, an.periods, tol),
        "genus": g,
        "round_trip_defect": worst,
        "involution_defect": float(np.max(np.abs(t - np.diag([1.0] * g + [-1.0] * g)))),
        "tolerances": _tolerance_report(tol),
    }


def flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    """Leaves of a JSON value as ``(dotted.key, value)`` pairs, in document order."""
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out += flatten(v, f"{prefix}.{i}" if prefix else str(i))
        return out
    return [(prefix, obj)]


def render(report: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    leaves = flatten(json.loads(json.dumps(report, sort_keys=True)))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k, v in leaves:
            w.writerow([k, json.dumps(v)])
        return buf.getvalue()
    width = max((len(k) for k, _ in leaves), default=0)
    lines = [f"kleinjac {command}"]
    lines += [f"  {k.ljust(width)}  {json.dumps(v)}" for k, v in leaves]
    return "\n".join(lines) + "\n"


def run(args, tol) -> dict:
    curve = parse_curve_arg(args.curve)
    if args.command == "analyze":
        return cmd_analyze(curve, tol, args.seed)
    if args.command == "periods":
        return cmd_periods(curve, tol, args.seed)
    if args.command == "fixed-points":
        return cmd_fixed_points(curve, tol, args.seed)
    if args.command == "harmonic":
        return cmd_harmonic(curve, tol, args.seed)
    divisor = load_divisor(curve, args.divisor, tol)
    if args.command == "aj":
        return cmd_aj(curve, tol, args.seed, divisor)
    return cmd_principal(curve, tol, args.seed, divisor)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not -(2**63) <= args.seed < 2**64:
        ap.error("seed must fit in 64 bits")
    try:
        tol = DEFAULT.with_overrides(quad=args.tol_quad, lattice=args.tol_lattice)
    except ValueError as exc:
        ap.error(str(exc))
    try:
        report = run(args, tol)
    except errors.CurveError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CURVE
    except errors.DivisorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIVISOR
    except errors.GenusTooLarge as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(render(report, args.format, args.command))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
