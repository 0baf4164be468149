"""Command line front end: ``torusrods {validate,farey,bounds,homeo,v8}``.

Every command builds a ``RunReport``.  With ``--json`` the report is printed
as one JSON document (errors included); otherwise the same facts are printed
as text.  Exit codes: 0 ok, 1 invalid input, 2 unsupported case, 3 internal
limit reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .config import dump_config, load_config
from .errors import (
    ConfigError,
    InvalidInputError,
    ResourceLimitError,
    TorusRodsError,
    UnsupportedCaseError,
)
from .farey import (
    farey_distance,
    farey_distance_oracle,
    farey_geodesic_path,
    oracle_max_cap,
    parse_slope,
)
from .homeo import homeo_decision
from .lattice import check_stratified, validate_stratified
from .unimodular import rank
from .volume import (
    drill_plan,
    flow_orbit_bounds,
    orthogonal_normalization,
    stratified_bounds,
    three_rod_orthogonal_bounds,
    v8_constant,
    v8_crosscheck,
)

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_LIMIT = 0, 1, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    result: dict | None = None
    diagnostics: list = field(default_factory=list)
    error: dict | None = None
    exit_code: int = EXIT_OK
    lines: list = field(default_factory=list)  # text rendering, not serialized

    def to_json(self):
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "diagnostics": self.diagnostics,
            "exit_code": self.exit_code,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


def _exit_code_for(exc) -> int:
    if isinstance(exc, UnsupportedCaseError):
        return EXIT_UNSUPPORTED
    if isinstance(exc, ResourceLimitError):
        return EXIT_LIMIT
    return EXIT_INVALID


# -- commands ---------------------------------------------------------------


def cmd_validate(args) -> RunReport:
    report = RunReport("validate", {"config": str(args.config)})
    rods, diagnostics = load_config(args.config)
    report.inputs["rods"] = dump_config(rods)["rods"]
    report.diagnostics.extend(diagnostics)
    checks = check_stratified(rods)
    valid = all(c.ok for c in checks)
    report.result = {"valid": valid, "n": len(rods), "checks": [c.to_json() for c in checks]}
    if valid:
        config = validate_stratified(rods)
        report.result["slopes"] = [str(s) for s in config.slopes]
        report.result["heights"] = [str(h) for h in config.heights]
        report.lines.append(f"valid stratified, n={len(rods)}")
        report.lines.append("slopes by height: " + ", ".join(
            f"{s} @ {h}" for s, h in zip(config.slopes, config.heights)))
    else:
        report.exit_code = EXIT_INVALID
        report.lines.append(f"invalid configuration, n={len(rods)}")
    for c in checks:
        mark = "ok  " if c.ok else "FAIL"
        report.lines.append(f"  [{mark}] {c.name}" + (f": {c.detail}" if c.detail and not c.ok else ""))
    return report


def cmd_farey(args) -> RunReport:
    x, y = parse_slope(args.x), parse_slope(args.y)
    report = RunReport("farey", {"x": str(x), "y": str(y)})
    d = farey_distance(x, y)
    report.result = {"distance": d}
    report.lines.append(f"d({x}, {y}) = {d}")
    if args.path:
        path = farey_geodesic_path(x, y)
        report.result["path"] = path.to_text()
        report.lines.append("path: " + ", ".join(path.to_text()))
    if args.oracle:
        od = farey_distance_oracle(x, y, cap=args.cap)
        report.result["oracle"] = {"distance": od, "agrees": od == d, "max_cap": oracle_max_cap()}
        report.lines.append(f"oracle (bounded BFS): {od} ({'agrees' if od == d else 'DISAGREES'})")
        if od != d:
            report.diagnostics.append("fast distance and oracle disagree")
            report.exit_code = EXIT_LIMIT
    return report


def _bounds_lines(bounds):
    label = "Farey distance d" if bounds.statement == "three-rod-orthogonal" else "Farey sum S"
    return [
        f"statement: {bounds.statement}",
        f"{label} = {bounds.farey_sum}",
        f"lower bound: {bounds.lower_coeff} * (1/K1)   (K1 is a non-explicit universal constant)",
        f"upper bound: {bounds.upper_octahedra} * v8 = {bounds.upper_numeric}"
        f"   ({bounds.digits} decimals)",
    ]


def _orthogonal_order(rods):
    """Reorder three rods so the last one is orthogonal to the plane of the
    other two (a vertical rod is preferred), or None if no rod qualifies."""
    if len(rods) != 3 or rank([r.direction for r in rods]) != 3:
        return None
    choices = sorted(range(3), key=lambda i: (not rods[i].is_vertical, i))
    for i in choices:
        ordered = [r for j, r in enumerate(rods) if j != i] + [rods[i]]
        if orthogonal_normalization([r.direction for r in ordered]) is not None:
            return ordered
    return None


def cmd_bounds(args) -> RunReport:
    report = RunReport("bounds", {"digits": args.digits})
    if args.flow:
        slopes = [parse_slope(t) for t in args.flow]
        report.inputs["flow"] = [str(s) for s in slopes]
        order, bounds = flow_orbit_bounds(slopes, digits=args.digits)
        report.result = bounds.to_json()
        report.result["ordering"] = [str(s) for s in order]
        report.lines.append("ordering: " + ", ".join(str(s) for s in order))
        report.lines.extend(_bounds_lines(bounds))
        report.diagnostics.append("upper bound uses the 2*v8 factor of the geodesic-flow statement")
        return report

    if args.config is None:
        raise InvalidInputError("bounds needs a configuration file or --flow slopes")
    rods, diagnostics = load_config(args.config)
    report.inputs["config"] = str(args.config)
    report.inputs["rods"] = dump_config(rods)["rods"]
    report.diagnostics.extend(diagnostics)
    if len(rods) < 3:
        raise UnsupportedCaseError(
            f"{len(rods)} rod(s): the stratified volume bounds need at least three rods"
        )
    stratified = None
    try:
        stratified = validate_stratified(rods)
    except ConfigError as exc:
        stratified_error = exc

    ordered = _orthogonal_order(rods)
    if ordered is None and stratified is None:
        raise stratified_error
    if ordered is not None:
        bounds, norm = three_rod_orthogonal_bounds(ordered, digits=args.digits)
        report.result = bounds.to_json()
        report.result["normalization"] = norm.to_json()
        report.lines.append("slopes after normalization: " + ", ".join(str(s) for s in norm.slopes))
        report.diagnostics.append("three rods with orthogonal third direction: using the 2*v8*d statement")
        if stratified is not None:
            report.result["stratified"] = stratified_bounds(stratified, digits=args.digits).to_json()
            report.diagnostics.append("configuration is also stratified; those bounds are under \"stratified\"")
    else:
        bounds = stratified_bounds(stratified, digits=args.digits)
        report.result = bounds.to_json()
        report.lines.append("slopes by height: " + ", ".join(str(s) for s in stratified.slopes))
    report.lines.extend(_bounds_lines(bounds))

    if args.drill:
        if stratified is None:
            report.diagnostics.append("drill plan skipped: configuration is not stratified")
        else:
            plan = drill_plan(stratified)
            report.result["drill_plan"] = plan.to_json()
            report.result["drill_octahedra"] = plan.octahedra
            report.lines.append(f"drill plan: {len(plan.aux_rods)} auxiliary rod(s), "
                                f"{plan.octahedra} octahedra")
            for seg in plan.segments:
                report.lines.append(f"  {seg.start}->{seg.end}: path " + ", ".join(seg.path.to_text()))
                for r in seg.aux_rods:
                    report.lines.append(f"    aux rod base {[str(x) for x in r.base]} direction {list(r.direction)}")
    return report


def cmd_homeo(args) -> RunReport:
    a, diag_a = load_config(args.config_a)
    b, diag_b = load_config(args.config_b)
    report = RunReport("homeo", {
        "config_a": str(args.config_a),
        "config_b": str(args.config_b),
        "rods_a": dump_config(a)["rods"],
        "rods_b": dump_config(b)["rods"],
        "permute": args.permute,
    })
    report.diagnostics.extend(diag_a + diag_b)
    bound = args.oracle_bound if (args.oracle or args.oracle_bound is not None) else None
    if bound is None and args.oracle:
        bound = 3
    result = homeo_decision(a, b, allow_permutation=args.permute, oracle_bound=bound)
    report.result = result.to_json()
    report.lines.append(("homeomorphic" if result.homeomorphic else "not homeomorphic") + f" (k={result.k})")
    if result.witness is not None:
        report.lines.append(f"matching: {list(result.matching)}")
        report.lines.append("witness (rows):")
        for row in result.witness.matrix.rows:
            report.lines.append("  " + " ".join(f"{x:>4}" for x in row))
        report.lines.append(f"signs: {list(result.witness.signs)}, det = {result.witness.matrix.det()}")
    if result.oracle is not None:
        o = result.oracle
        report.lines.append(
            f"brute force (entries <= {o['bound']}): "
            + ("witness found" if o["witness_found"] else "no witness in range")
            + ("" if o["agrees"] else "  DISAGREES")
        )
        if not o["agrees"]:
            report.exit_code = EXIT_LIMIT
    return report


def cmd_v8(args) -> RunReport:
    report = RunReport("v8", {"digits": args.digits})
    value = v8_constant(args.digits)
    diff = v8_crosscheck(args.digits)
    report.result = {
        "v8": str(value),
        "digits": args.digits,
        "crosscheck_abs_diff": f"{float(diff):.3e}",
        "methods": ["8*Lobachevsky(pi/4) via Clausen series", "4*Catalan via accelerated alternating series"],
    }
    report.lines.append(f"v8 = {value}   ({args.digits} decimals)")
    report.lines.append(f"|8 Lambda(pi/4) - 4 G| = {float(diff):.3e}")
    return report


# -- parser -----------------------------------------------------------------


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a machine readable JSON report")

    parser = argparse.ArgumentParser(
        prog="torusrods",
        description="Closed geodesics in the 3-torus: validation, Farey distances, volume bounds, homeomorphism tests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a stratified rod configuration")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("farey", parents=[common], help="Farey distance between two slopes p/q")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--path", action="store_true", help="also print a geodesic path")
    p.add_argument("--oracle", action="store_true", help="cross-check with the bounded BFS oracle")
    p.add_argument("--cap", type=_positive_int, default=None, help="initial oracle cap")
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("bounds", parents=[common], help="volume bounds for a configuration or slope family")
    p.add_argument("config", nargs="?")
    p.add_argument("--flow", nargs="+", metavar="SLOPE", help="geodesic-flow orbit slopes instead of a file")
    p.add_argument("--digits", type=_positive_int, default=12)
    p.add_argument("--drill", action="store_true", help="include the drilling plan")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("homeo", parents=[common], help="decide whether two rod complements are homeomorphic")
    p.add_argument("config_a")
    p.add_argument("config_b")
    p.add_argument("--permute", action="store_true", help="allow any matching of components")
    p.add_argument("--oracle", action="store_true", help="cross-check by brute force (default bound 3)")
    p.add_argument("--oracle-bound", type=_positive_int, default=None)
    p.set_defaults(func=cmd_homeo)

    p = sub.add_parser("v8", parents=[common], help="volume of the regular ideal octahedron")
    p.add_argument("--digits", type=_positive_int, default=12)
    p.set_defaults(func=cmd_v8)
    return parser


def run(argv=None) -> RunReport:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TorusRodsError as exc:
        report = RunReport(args.command)
        report.exit_code = _exit_code_for(exc)
        problems = getattr(exc, "problems", [str(exc)])
        report.error = {"type": type(exc).__name__, "message": str(exc), "problems": problems}
        report.lines.append(f"error: {exc}")
        report.lines.extend(f"  - {p}" for p in problems if p != str(exc))
        return report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    report = run(argv)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        stream = sys.stderr if report.error else sys.stdout
        for line in report.lines:
            print(line, file=stream)
        for d in report.diagnostics:
            print(f"note: {d}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
