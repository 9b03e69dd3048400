"""Batch front end: ``equiloc JOB.toml [-o OUT.csv]``.

Exit codes: 0 success, 2 a check failed, 3 computation error, 4 parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

from . import _parallel
from .dhmeasure import (
    chamber_difference,
    dh_density_at,
    dh_measure,
    default_beta,
    nonabelian_reduced_integral,
    wall_jump,
)
from .errors import EquilocError, InvalidParameter, ParseError, ValidationFailed
from .exactalg import format_poly, format_rational, taylor_coefficient
from .geometry import phi_positivity, prequantum_bundle, validate
from .jobfile import JobSpec, integer, matrix, rational, read_job, vector
from .lie import build_root_system
from .localize import EquivariantClass, abbv_integrate, symplectic_volume
from .quantize import (
    blattner_sl2,
    e_beta_vanishing,
    k_multiplicities,
    qr_report_spinc_flag,
    qr_report_toric,
    rr_character,
)


class CheckFailed(Exception):
    """The command ran, but the identity it checks does not hold (exit 2)."""


def _weight_header(prefix: str, rank: int) -> list:
    return [f"{prefix}{i + 1}" for i in range(rank)]


def _q(x) -> str:
    return format_rational(x)


def _beta(job: JobSpec, space) -> tuple:
    if "beta" in job.params:
        return vector(job.params["beta"], "beta", integer)
    return default_beta(space)


def _require(job: JobSpec, key: str):
    if key not in job.params:
        raise InvalidParameter(f"command {job.command!r} needs parameter {key!r}")
    return job.params[key]


def cmd_validate(job, out):
    report = validate(job.space)
    out.writerow(["check", "passed", "detail"])
    for name, passed, detail in report.checks:
        out.writerow([name, str(passed).lower(), detail])
    if not report.ok:
        raise CheckFailed("validation failed")


def cmd_volume(job, out):
    out.writerow(["volume"])
    out.writerow([_q(symplectic_volume(job.space))])


def cmd_abbv(job, out):
    space = job.space
    kind = job.params.get("class", "one")
    d = integer(job.params.get("power", 1), "power")
    exponential = bool(job.params.get("exponential", False))
    if kind == "one":
        eta = EquivariantClass.constant(space, 1, exponential)
    elif kind == "moment":
        base = EquivariantClass.moment_pairing(space)
        eta = EquivariantClass({k: v ** d for k, v in base.values.items()}, exponential)
    else:
        raise InvalidParameter(f"class must be 'one' or 'moment', got {kind!r}")
    result = abbv_integrate(space, eta)
    if exponential:
        result = taylor_coefficient(result, integer(job.params.get("degree", 0), "degree"))
    out.writerow(["integral"])
    out.writerow([format_poly(result)])


def cmd_dh(job, out):
    measure = dh_measure(job.space, _beta(job, job.space))
    out.writerow(_weight_header("xi", measure.rank) + ["density"])
    for c in measure.chambers:
        out.writerow([_q(x) for x in c.sample] + [format_poly(c.density)])


def cmd_density(job, out):
    measure = dh_measure(job.space, _beta(job, job.space))
    points = matrix(_require(job, "points"), "points", rational)
    out.writerow(_weight_header("xi", measure.rank) + ["density"])
    for xi in points:
        out.writerow([_q(x) for x in xi] + [_q(dh_density_at(measure, xi))])


def cmd_jump(job, out):
    raw = _require(job, "wall")
    a = rational(raw[0] if isinstance(raw, list) else raw, "wall")
    direction = integer(job.params.get("direction", 1), "direction")
    residue = wall_jump(job.space, a, direction)
    convolution = chamber_difference(dh_measure(job.space, _beta(job, job.space)), a, direction)
    out.writerow(["wall", "direction", "residue", "chamber_difference", "agree"])
    agree = residue == convolution
    out.writerow([_q(a), direction, format_poly(residue), format_poly(convolution), str(agree).lower()])
    if not agree:
        raise CheckFailed("residue and chamber difference disagree")


def cmd_martin(job, out):
    beta = _beta(job, job.space) if "beta" in job.params else None
    out.writerow(["value"])
    out.writerow([_q(nonabelian_reduced_integral(job.space, beta))])


def cmd_quantize(job, out):
    k = integer(job.params.get("k", 1), "k")
    window = matrix(_require(job, "window"), "window")
    chi = rr_character(job.space, k, _beta(job, job.space), window)
    out.writerow(_weight_header("w", job.space.rank) + ["multiplicity"])
    for w, m in chi.items():
        out.writerow(list(w) + [m])


def cmd_multiplicities(job, out):
    k = integer(job.params.get("k", 1), "k")
    window = matrix(job.params["window"], "window") if "window" in job.params else None
    beta = _beta(job, job.space) if "beta" in job.params else None
    out.writerow(_weight_header("lambda", job.space.rank) + ["multiplicity"])
    for lam, m in k_multiplicities(job.space, k, window, beta):
        out.writerow(list(lam) + [m])


def cmd_qr_toric(job, out):
    if job.polytope is None:
        raise InvalidParameter("qr-toric needs a toric space")
    k = job.level * integer(job.params.get("k", 1), "k")
    beta = vector(job.params["beta"], "beta", integer) if "beta" in job.params else None
    report = qr_report_toric(job.polytope, k, beta)
    out.writerow(_weight_header("w", job.polytope.rank)
                 + ["from_character", "from_reduction", "agree"])
    for r in report.rows:
        out.writerow(list(r.weight) + [r.from_character, r.from_reduction, str(r.agree).lower()])
    if not report.all_agree:
        raise CheckFailed("[Q,R] mismatch")


def cmd_qr_spinc(job, out):
    rs = build_root_system(str(_require(job, "root_system")))
    upper = vector(_require(job, "upper"), "upper", integer)
    models = matrix(job.params["models"], "models") if "models" in job.params else None
    report = qr_report_spinc_flag(rs, upper, models)
    out.writerow(_weight_header("model", rs.rank) + _weight_header("mu", rs.rank)
                 + ["from_character", "from_reduction", "agree"])
    for r in report.rows:
        out.writerow(list(r.model) + list(r.weight)
                     + [r.from_character, r.from_reduction, str(r.agree).lower()])
    if not report.all_agree:
        raise CheckFailed("Spin-c model mismatch")


def cmd_blattner(job, out):
    lam = integer(_require(job, "lambda"), "lambda")
    size = integer(_require(job, "J"), "J")
    blattner, reduced = blattner_sl2(lam, size)
    (lo, hi), = blattner.window
    out.writerow(["mu", "blattner", "reduced", "agree"])
    agree = True
    for mu in range(lo, hi + 1):
        b, r = blattner[(mu,)], reduced[(mu,)]
        agree &= b == r
        out.writerow([mu, b, r, str(b == r).lower()])
    if not agree:
        raise CheckFailed("Blattner and reduced counts disagree")


def cmd_positivity(job, out):
    space = job.space
    k = integer(job.params.get("k", 1), "k")
    spec = job.params.get("bundle", "prequantum")
    if spec == "prequantum":
        bundle = prequantum_bundle(space, k)
    elif spec == "trivial":
        bundle = [(0,) * space.rank for _ in space.points]
    else:
        bundle = matrix(spec, "bundle", rational)
    row = [phi_positivity(space, bundle)]
    header = ["positivity"]
    if "beta" in job.params:
        header.append("e_beta_vanishing")
        row.append(str(e_beta_vanishing(space, bundle, _beta(job, space))).lower())
    out.writerow(header)
    out.writerow(row)


COMMANDS = {
    "validate": cmd_validate,
    "volume": cmd_volume,
    "abbv": cmd_abbv,
    "dh": cmd_dh,
    "density": cmd_density,
    "jump": cmd_jump,
    "martin": cmd_martin,
    "quantize": cmd_quantize,
    "multiplicities": cmd_multiplicities,
    "qr-toric": cmd_qr_toric,
    "qr-spinc": cmd_qr_spinc,
    "blattner": cmd_blattner,
    "positivity": cmd_positivity,
}


def run(job: JobSpec) -> tuple[int, str]:
    """Execute ``job``; returns (exit code, CSV text)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    try:
        COMMANDS[job.command](job, writer)
    except CheckFailed:
        return 2, buffer.getvalue()
    return 0, buffer.getvalue()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="equiloc", description=__doc__.splitlines()[0])
    parser.add_argument("job", help="job file (TOML)")
    parser.add_argument("-o", "--output", help="CSV output path (default: job's output key, else stdout)")
    parser.add_argument("--threads", type=int, help=f"worker threads (overrides {_parallel.ENV_VAR})")
    args = parser.parse_args(argv)
    if args.threads is not None:
        os.environ[_parallel.ENV_VAR] = str(args.threads)

    try:
        job = read_job(args.job)
        code, text = run(job)
    except ParseError as exc:
        print(f"ParseError: {exc}", file=sys.stderr)
        return 4
    except ValidationFailed as exc:
        print(f"ValidationFailed: {exc}", file=sys.stderr)
        return 2
    except EquilocError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    target = args.output or job.output
    if target:
        path = Path(target)
        if not path.is_absolute() and not args.output:
            path = Path(args.job).parent / path
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
