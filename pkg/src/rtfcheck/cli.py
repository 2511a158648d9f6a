"""Command-line entry point: ``rtfcheck {verify-identity,curve-report,spectrum,census}``.

Output is TSV by default (``--format text`` gives a JSON object), written to
``--out`` or stdout.  Exit status: 0 when every asserted identity holds,
1 on an identity violation, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import curves, rtf, tensorrep
from .exactnum import format_rational
from .permchar import format_partition, hook_dimension, partitions

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID = 0, 1, 2

DEFAULT_CAPS = {
    "tensor": tensorrep.DEFAULT_TENSOR_CAP,
    "shape_degree": curves.DEFAULT_SHAPE_DEGREE_CAP,
    "census_q": 11,
}


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict
    fmt: str = "tsv"
    out: Path | None = None
    caps: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_CAPS))

    def validate(self) -> None:
        p, caps = self.params, self.caps
        for key in ("d_max", "r_max", "n", "q", "d"):
            if key in p and p[key] is not None and p[key] < 0:
                raise InvalidInput(f"--{key.replace('_', '-')} must be non-negative")
        if self.command == "verify-identity":
            if 2 * p["d_max"] > caps["tensor"]:
                raise InvalidInput(
                    f"cap exceeded: 2 * d_max = {2 * p['d_max']} > tensor cap {caps['tensor']}")
        elif self.command == "spectrum":
            if p["n"] < 1:
                raise InvalidInput("--n must be at least 1")
            if p["n"] > caps["tensor"]:
                raise InvalidInput(f"cap exceeded: n = {p['n']} > tensor cap {caps['tensor']}")
        elif self.command == "census":
            q = p["q"]
            if not curves.is_prime_power(q):
                raise InvalidInput(f"q = {q} is not a prime power")
            if q % 2 == 0:
                raise InvalidInput(f"q = {q}: the invariant map requires odd characteristic")
            if q > caps["census_q"]:
                raise InvalidInput(f"cap exceeded: q = {q} > census cap {caps['census_q']}")
        elif self.command == "curve-report":
            if 2 * p["d"] > caps["shape_degree"]:
                raise InvalidInput(
                    f"cap exceeded: degree 2d = {2 * p['d']} > shape-degree cap {caps['shape_degree']}")


def _tsv(header: list[str], rows: list[list[str]]) -> str:
    return "\n".join("\t".join(r) for r in [header, *rows]) + "\n"


def _flag(ok: bool) -> str:
    return "1" if ok else "0"


def _spectrum_str(spectrum: dict[int, int]) -> str:
    return ",".join(f"{e}:{m}" for e, m in sorted(spectrum.items()))


def cmd_verify_identity(cfg: RunConfig) -> tuple[int, str]:
    d_max, r_max, cap = cfg.params["d_max"], cfg.params["r_max"], cfg.caps["tensor"]
    rows = []
    for d in range(1, d_max + 1):
        n = 2 * d
        for ct in partitions(n):
            for r in range(r_max + 1):
                brute = tensorrep.brute_trace(n, r, ct, cap)
                structured = tensorrep.structured_trace(n, r, ct)
                psi = tensorrep.psi_trace(n, r, ct)
                rows.append({"d": d, "cycle_type": format_partition(ct), "r": r, "brute": brute,
                             "structured": structured, "psi_formula": psi,
                             "equal": brute == structured == psi})
    violations = [row for row in rows if not row["equal"]]
    for row in violations:
        print(f"violation: {row}", file=sys.stderr)
    if cfg.fmt == "text":
        body = json.dumps({"command": "verify-identity", "d_max": d_max, "r_max": r_max,
                           "rows": rows, "violations": len(violations)}, indent=2) + "\n"
    else:
        header = ["d", "cycle_type", "r", "brute", "structured", "psi_formula", "equal"]
        body = _tsv(header, [[str(x["d"]), x["cycle_type"], str(x["r"]), str(x["brute"]),
                              str(x["structured"]), str(x["psi_formula"]), _flag(x["equal"])]
                             for x in rows])
    return (EXIT_VIOLATION if violations else EXIT_OK), body


def cmd_spectrum(cfg: RunConfig) -> tuple[int, str]:
    n, cap = cfg.params["n"], cfg.caps["tensor"]
    rows = []
    for k in range((n + 1) // 2, n + 1):
        lam = (k, n - k) if n - k else (k,)
        dim = hook_dimension(lam)
        top = 2 * k - n
        claimed = {e: dim for e in range(-top, top + 1, 2)}
        poly = tensorrep.restricted_charpoly(n, k, cap)
        match = poly == tensorrep.expected_charpoly(n, k)
        try:
            computed = dict(tensorrep.isotypic_spectrum(n, k, cap))
        except ArithmeticError:
            computed = {}
            match = False
        rows.append({"n": n, "k": k, "partition": format_partition(lam), "dim_rho": dim,
                     "claimed": _spectrum_str(claimed), "computed": _spectrum_str(computed),
                     "match": match})
    bad = [row for row in rows if not row["match"]]
    for row in bad:
        print(f"spectrum mismatch: {row}", file=sys.stderr)
    if cfg.fmt == "text":
        body = json.dumps({"command": "spectrum", "n": n, "rows": rows}, indent=2) + "\n"
    else:
        header = ["n", "k", "partition", "dim_rho", "claimed", "computed", "match"]
        body = _tsv(header, [[str(x["n"]), str(x["k"]), x["partition"], str(x["dim_rho"]),
                              x["claimed"], x["computed"], _flag(x["match"])] for x in rows])
    return (EXIT_VIOLATION if bad else EXIT_OK), body


def cmd_census(cfg: RunConfig) -> tuple[int, str]:
    q = cfg.params["q"]
    model = rtf.QuadraticModel(q)
    model.check_structure()
    census = rtf.orbit_census(model)
    record = census.to_dict()
    ok = (census.constant_on_cosets
          and census.distinct_invariants == census.nondegenerate_cosets
          and census.trace_one_elements == q)
    if not ok:
        print(f"census assertion failed: {record}", file=sys.stderr)
    if cfg.fmt == "text":
        body = json.dumps({"command": "census", **record}, indent=2) + "\n"
    else:
        body = _tsv(["key", "value"], [[k, str(int(v) if isinstance(v, bool) else v)]
                                       for k, v in record.items()])
    return (EXIT_OK if ok else EXIT_VIOLATION), body


def cmd_curve_report(cfg: RunConfig) -> tuple[int, str]:
    d, r_max = cfg.params["d"], cfg.params["r_max"]
    try:
        cover = curves.load_curve_config(cfg.params["curve"])
    except OSError as exc:
        raise InvalidInput(f"cannot read curve config: {exc}") from None
    except curves.ConfigError as exc:
        raise InvalidInput(f"{cfg.params['curve']}: {exc}") from None
    degree = 2 * d
    try:
        counts = curves.cover_closed_points(cover, max(degree, 1))
    except curves.InvalidZeta as exc:
        raise InvalidInput(f"{cfg.params['curve']}: {exc}") from None
    shapes = curves.enumerate_shapes(counts, degree)
    reports = [(rtf.compare_orbit(shape, d, r_max, cfg.caps["tensor"], raise_on_violation=False), count)
               for shape, count in shapes]
    totals = []
    for r in range(r_max + 1):
        j_all = sum((c * rep.rows[r].j_r for rep, c in reports), Fraction(0))
        reduced = [(rep, c) for rep, c in reports if rep.shape.multiplicity_free]
        j_red = sum((c * rep.rows[r].j_r for rep, c in reduced), Fraction(0))
        i_red = sum((c * rep.rows[r].i_r_structured for rep, c in reduced), Fraction(0))
        totals.append({"r": r, "J_total": j_all, "J_reduced": j_red, "I_reduced": i_red,
                       "equal": j_red == i_red})
    ok = all(rep.all_equal for rep, _ in reports) and all(t["equal"] for t in totals)
    for rep, _ in reports:
        if not rep.all_equal:
            print(f"violation: {rep.to_dict()}", file=sys.stderr)
    if cfg.fmt == "text":
        payload = {
            "command": "curve-report",
            "curve": json.loads(curves.dump_curve_config(cover)),
            "d": d,
            "closed_points_Y": counts,
            "orbits": [{**rep.to_dict(), "count": c} for rep, c in reports],
            "totals": [{k: (format_rational(v) if isinstance(v, Fraction) else v) for k, v in t.items()}
                       for t in totals],
        }
        body = json.dumps(payload, indent=2) + "\n"
    else:
        orbit_rows = [row for rep, _ in reports for row in rep.tsv_rows()]
        body = _tsv(list(rtf.TSV_COLUMNS), orbit_rows)
        body += "\n" + _tsv(["shape", "count", "multiplicity_free"],
                            [[curves.format_shape(rep.shape), str(c), _flag(rep.shape.multiplicity_free)]
                             for rep, c in reports])
        body += "\n" + _tsv(["r", "J_total", "J_reduced", "I_reduced", "equal"],
                            [[str(t["r"]), format_rational(t["J_total"]), format_rational(t["J_reduced"]),
                              format_rational(t["I_reduced"]), _flag(t["equal"])] for t in totals])
    return (EXIT_OK if ok else EXIT_VIOLATION), body


COMMANDS: dict[str, Callable[[RunConfig], tuple[int, str]]] = {
    "verify-identity": cmd_verify_identity,
    "spectrum": cmd_spectrum,
    "census": cmd_census,
    "curve-report": cmd_curve_report,
}


def _parse_cap(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep:
        # a bare number overrides the tensor cap
        name, value = "tensor", text
    if name not in DEFAULT_CAPS:
        raise argparse.ArgumentTypeError(f"unknown cap {name!r}; choose from {sorted(DEFAULT_CAPS)}")
    try:
        return name, int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cap value must be an integer: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("tsv", "text"), default="tsv")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--cap-override", type=_parse_cap, action="append", default=[],
                        metavar="[NAME=]VALUE",
                        help="raise a size cap: tensor (default 8), shape_degree (12), census_q (11)")

    parser = argparse.ArgumentParser(prog="rtfcheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-identity", parents=[common],
                       help="brute vs structured vs psi-formula traces over all cycle types")
    p.add_argument("--d-max", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)

    p = sub.add_parser("curve-report", parents=[common],
                       help="orbit reports for every degree-2d divisor shape on a cover")
    p.add_argument("--curve", type=Path, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum of H on each isotypic component")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("census", parents=[common], help="double-coset census of the invariant map")
    p.add_argument("--q", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    params = {k: v for k, v in vars(args).items()
              if k not in ("command", "format", "out", "cap_override")}
    caps = dict(DEFAULT_CAPS)
    caps.update(dict(args.cap_override))
    cfg = RunConfig(args.command, params, args.format, args.out, caps)
    try:
        cfg.validate()
        status, body = COMMANDS[cfg.command](cfg)
    except (InvalidInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out is None:
        sys.stdout.write(body)
    else:
        cfg.out.write_text(body, encoding="utf-8")
    return status


if __name__ == "__main__":
    sys.exit(main())
