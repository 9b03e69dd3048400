"""Job files: a TOML document with a ``[space]`` table and a ``[command]`` table.

Rationals are written as integers or "p/q" strings.  Named helper spaces
live in sub-tables ``[space.NAME]`` and are referenced by name from
``product``, ``power``, ``restrict`` and ``dual`` spaces.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .errors import InvalidParameter, ParseError, UnsupportedType
from .exactalg import format_rational
from .geometry import (
    DelzantPolytope,
    FixedPointDatum,
    HamiltonianSpace,
    build_coadjoint,
    build_orbit,
    build_toric,
    dualize,
    polygon,
    power,
    product,
    restrict_subtorus,
    segment,
)
from .lie import build_root_system

SPACE_TYPES = ("toric", "coadjoint", "orbit", "product", "power", "restrict", "dual", "fixed_points")
COMMANDS = (
    "validate", "volume", "abbv", "dh", "density", "jump", "martin", "quantize",
    "multiplicities", "qr-toric", "qr-spinc", "blattner", "positivity",
)
SPACELESS = ("qr-spinc", "blattner")


@dataclass
class JobSpec:
    command: str
    params: dict
    space: HamiltonianSpace | None = None
    polytope: DelzantPolytope | None = None
    level: int = 1
    output: str | None = None


def rational(value, where: str = "value") -> Fraction:
    if isinstance(value, bool):
        raise InvalidParameter(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InvalidParameter(f"{where}: expected an integer or 'p/q', got {value!r}")


def integer(value, where: str = "value") -> int:
    q = rational(value, where)
    if q.denominator != 1:
        raise InvalidParameter(f"{where}: expected an integer, got {value!r}")
    return int(q)


def vector(value, where: str = "vector", convert=rational) -> tuple:
    if not isinstance(value, list):
        raise InvalidParameter(f"{where}: expected a bracketed list")
    return tuple(convert(x, where) for x in value)


def matrix(value, where: str = "matrix", convert=integer) -> tuple:
    if not isinstance(value, list):
        raise InvalidParameter(f"{where}: expected a list of rows")
    return tuple(vector(row, where, convert) for row in value)


def _polytope(table: dict) -> DelzantPolytope:
    verts = matrix(table.get("vertices"), "vertices", rational)
    if not verts:
        raise InvalidParameter("toric space needs vertices")
    if len(verts[0]) == 1:
        if len(verts) != 2:
            raise InvalidParameter("a rank-1 polytope has two vertices")
        return segment(verts[0][0], verts[1][0])
    return polygon(verts)


def _fixed_points(table: dict) -> HamiltonianSpace:
    rank = integer(table.get("rank"), "rank")
    points = []
    for i, entry in enumerate(table.get("points", [])):
        where = f"points[{i}]"
        moment = vector(entry["moment"], f"{where}.moment")
        weights = matrix(entry.get("weights", []), f"{where}.weights")
        bundle = vector(entry.get("bundle", entry["moment"]), f"{where}.bundle")
        points.append(FixedPointDatum(str(entry.get("label", f"p{i}")), moment, weights, bundle))
    half_dim = integer(table.get("half_dim", len(points[0].tangent_weights) if points else 0), "half_dim")
    ks = table.get("k_structure")
    return HamiltonianSpace(rank, half_dim, tuple(points), build_root_system(ks) if ks else None)


def build_space(table: dict, named: dict, seen: tuple = ()) -> tuple[HamiltonianSpace, DelzantPolytope | None, int]:
    """Returns the space plus, for toric spaces, its polytope and level."""
    kind = table.get("type")
    if kind not in SPACE_TYPES:
        raise UnsupportedType(f"space type {kind!r} (expected one of {', '.join(SPACE_TYPES)})")

    def ref(name):
        if not isinstance(name, str) or name not in named:
            raise InvalidParameter(f"unknown space reference {name!r}")
        if name in seen:
            raise InvalidParameter(f"cyclic space reference {name!r}")
        return build_space(named[name], named, seen + (name,))[0]

    if kind == "toric":
        poly = _polytope(table)
        k = integer(table.get("k", 1), "k")
        return build_toric(poly, k), poly, k
    if kind == "coadjoint":
        rs = build_root_system(str(table.get("root_system")))
        return build_coadjoint(rs, vector(table.get("lambda"), "lambda", integer)), None, 1
    if kind == "orbit":
        rs = build_root_system(str(table.get("root_system")))
        return build_orbit(rs, vector(table.get("lambda"), "lambda", integer)), None, 1
    if kind == "product":
        factors = [ref(n) for n in table.get("factors", [])]
        if not factors:
            raise InvalidParameter("product needs factors")
        result = factors[0]
        for f in factors[1:]:
            result = product(result, f)
        return result, None, 1
    if kind == "power":
        return power(ref(table.get("of")), integer(table.get("m"), "m")), None, 1
    if kind == "restrict":
        return restrict_subtorus(ref(table.get("of")), matrix(table.get("iota"), "iota")), None, 1
    if kind == "dual":
        return dualize(ref(table.get("of"))), None, 1
    return _fixed_points(table), None, 1


def parse_job(text: str) -> JobSpec:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(exc.msg if hasattr(exc, "msg") else str(exc),
                         getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None
    command = doc.get("command")
    if not isinstance(command, dict) or "name" not in command:
        raise ParseError("missing [command] table with a name", None, None)
    name = command["name"]
    if name not in COMMANDS:
        raise ParseError(f"unknown command {name!r}", None, None)
    params = {k: v for k, v in command.items() if k not in ("name", "output")}
    job = JobSpec(name, params, output=command.get("output"))
    table = doc.get("space")
    if table is None:
        if name not in SPACELESS:
            raise ParseError(f"command {name!r} needs a [space] table", None, None)
        return job
    named = {k: v for k, v in table.items() if isinstance(v, dict)}
    main = {k: v for k, v in table.items() if not isinstance(v, dict)}
    try:
        job.space, job.polytope, job.level = build_space(main, named)
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidParameter(f"malformed space description: {exc!r}") from None
    return job


def read_job(path) -> JobSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_job(fh.read())


# ---------------------------------------------------------------------------
# serialization


def _scalar(x) -> str:
    q = Fraction(x)
    return str(q.numerator) if q.denominator == 1 else f'"{format_rational(q)}"'


def _vec(v) -> str:
    return "[" + ", ".join(_scalar(x) for x in v) + "]"


def serialize_space(space: HamiltonianSpace, table: str = "space") -> str:
    """Explicit fixed-point form of ``space``; parse_job reads it back unchanged."""
    lines = [f"[{table}]", 'type = "fixed_points"', f"rank = {space.rank}", f"half_dim = {space.half_dim}"]
    if space.k_structure is not None:
        lines.append(f'k_structure = "{space.k_structure.label}"')
    for p in space.points:
        lines += [
            "",
            f"[[{table}.points]]",
            f'label = "{p.label}"',
            f"moment = {_vec(p.moment)}",
            "weights = [" + ", ".join(_vec(w) for w in p.tangent_weights) + "]",
            f"bundle = {_vec(p.bundle_weight)}",
        ]
    return "\n".join(lines) + "\n"


def parse_space(text: str) -> HamiltonianSpace:
    job = parse_job(text + '\n[command]\nname = "validate"\n')
    return job.space
