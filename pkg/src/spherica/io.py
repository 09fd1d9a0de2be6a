"""JSON serialization of systems, fans and reports.

Rationals are written as ``"a/b"`` strings (integers may be plain JSON
numbers); decimal numbers are rejected so that no value is ever rounded.
The emitter is canonical: loading and re-emitting a file written by
:func:`dumps_system` reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import qlinalg as ql
from .lattice import normal_form
from .polyhedra import ConeQ, Fan, cone_from_inequalities, cone_from_rays
from .roots import RootDatumError, build_root_datum
from .spherical import UNKNOWN, ColorRecord, PSphericalSystem, SphericalError, rebase_delta

FORMAT_VERSION = "1.0"
_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


class InputError(ValueError):
    """Malformed input; the message names the offending field."""


# --- scalar parsing -------------------------------------------------------------

def parse_rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"{where}: expected a rational, got a boolean")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise InputError(f"{where}: decimal number {x!r} rejected; write rationals as \"a/b\"")
    if isinstance(x, str) and _RATIONAL.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise InputError(f"{where}: zero denominator in {x!r}") from None
    raise InputError(f"{where}: {x!r} is not an exact rational")


def parse_int(x: Any, where: str) -> int:
    v = parse_rational(x, where)
    if v.denominator != 1:
        raise InputError(f"{where}: expected an integer, got {x!r}")
    return int(v)


def _int_vector(v: Any, where: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(v, list):
        raise InputError(f"{where}: expected a list of integers")
    out = tuple(parse_int(x, f"{where}[{k}]") for k, x in enumerate(v))
    if length is not None and len(out) != length:
        raise InputError(f"{where}: expected {length} entries, got {len(out)}")
    return out


def _list(d: dict, key: str, where: str, default=None) -> list:
    v = d.get(key, default)
    if v is None:
        raise InputError(f"{where}.{key}: missing")
    if not isinstance(v, list):
        raise InputError(f"{where}.{key}: expected a list")
    return v


def fmt_q(v) -> Any:
    return v if v == UNKNOWN else int(v)


# --- groups -----------------------------------------------------------------------

def root_datum_from_group(group: Any, where: str = "group"):
    try:
        if isinstance(group, str):
            return build_root_datum(group)
        if isinstance(group, dict):
            if "cartan" in group:
                C = [_int_vector(r, f"{where}.cartan[{i}]") for i, r in enumerate(_list(group, "cartan", where))]
                rd = build_root_datum(C)
            elif "type" in group:
                rd = root_datum_from_group(group["type"], f"{where}.type")
            else:
                raise InputError(f"{where}: needs 'cartan' or 'type'")
            if "levi" in group:
                levi = group["levi"]
                if not isinstance(levi, list):
                    raise InputError(f"{where}.levi: expected a list of root labels")
                rd = rd.restrict(levi)
            return rd
    except RootDatumError as e:
        raise InputError(f"{where}: {e}") from None
    raise InputError(f"{where}: expected a type string or an object with 'cartan' or 'type'")


# --- systems ----------------------------------------------------------------------

def system_from_dict(d: Any, base_dir: str | None = None) -> PSphericalSystem:
    if not isinstance(d, dict):
        raise InputError("top level: expected a JSON object")
    fv = d.get("format_version", FORMAT_VERSION)
    if str(fv).split(".")[0] != FORMAT_VERSION.split(".")[0]:
        raise InputError(f"format_version: unsupported version {fv!r}")
    if "group" not in d:
        raise InputError("group: missing")
    rd = root_datum_from_group(d["group"])
    p = parse_int(d.get("p"), "p") if "p" in d else None
    if p is None:
        raise InputError("p: missing")
    rows = [_int_vector(r, f"xi[{i}]", rd.rank) for i, r in enumerate(_list(d, "xi", "", []))]
    xi = normal_form(rows, rd.rank)
    independent = not rows or ql.rank(rows) == len(rows)
    sigma = []
    for i, s in enumerate(_list(d, "sigma", "", [])):
        if isinstance(s, str):
            try:
                sigma.append(rd.parse_root(s))
            except RootDatumError as e:
                raise InputError(f"sigma[{i}]: {e}") from None
        else:
            sigma.append(_int_vector(s, f"sigma[{i}]", rd.n))
    sp = _list(d, "sp", "", [])
    colors = []
    for i, c in enumerate(_list(d, "colors", "", [])):
        w = f"colors[{i}]"
        if not isinstance(c, dict):
            raise InputError(f"{w}: expected an object")
        for key in ("name", "type", "moved_by"):
            if key not in c:
                raise InputError(f"{w}.{key}: missing")
        try:
            moved = tuple(rd.resolve(a) for a in c["moved_by"])
        except (RootDatumError, TypeError) as e:
            raise InputError(f"{w}.moved_by: {e}") from None
        delta = c.get("delta")
        if delta is not None:
            if not isinstance(delta, list):
                raise InputError(f"{w}.delta: expected a list of rationals")
            vals = tuple(parse_rational(x, f"{w}.delta[{k}]") for k, x in enumerate(delta))
            if independent:
                if len(vals) != len(rows):
                    raise InputError(f"{w}.delta: {len(vals)} values for {len(rows)} rows of xi")
                vals = rebase_delta(xi, rows, vals)
            delta = vals
        qraw = c.get("q", {})
        if not isinstance(qraw, dict):
            raise InputError(f"{w}.q: expected an object mapping root labels to powers of p")
        q = {}
        for a, v in qraw.items():
            try:
                lab = rd.resolve(a)
            except RootDatumError as e:
                raise InputError(f"{w}.q: {e}") from None
            q[lab] = UNKNOWN if v == UNKNOWN else parse_int(v, f"{w}.q.{a}")
        exact = c.get("delta_scale", "1") != UNKNOWN
        try:
            colors.append(ColorRecord(str(c["name"]), str(c["type"]), moved, delta, q, exact))
        except SphericalError as e:
            raise InputError(f"{w}: {e}") from None
    rk = d.get("rk_xi_h")
    rk = None if rk is None else parse_int(rk, "rk_xi_h")
    fan = None
    if d.get("fan") is not None:
        r = xi.rank
        fan = tuple(tuple(_int_vector(v, f"fan[{i}][{k}]", r) for k, v in enumerate(_list({"c": cone}, "c", f"fan[{i}]")))
                    for i, cone in enumerate(_list(d, "fan", "")))
    cat = d.get("catalog_path")
    try:
        return PSphericalSystem(p=p, rd=rd, xi=xi, sigma=tuple(sigma), sp=tuple(sp), colors=tuple(colors),
                                rk_xi_h=rk, fan=fan, catalog_path=cat, group=d["group"],
                                meta=d.get("meta", {}), base_dir=base_dir)
    except (SphericalError, RootDatumError) as e:
        raise InputError(f"system: {e}") from None


def system_to_dict(sys: PSphericalSystem) -> dict:
    out: dict = {"format_version": FORMAT_VERSION}
    out["group"] = sys.group if sys.group is not None else sys.rd.name
    out["p"] = sys.p
    out["xi"] = [list(b) for b in sys.xi.basis]
    out["sigma"] = [list(s) for s in sys.sigma]
    out["sp"] = list(sys.sp)
    cols = []
    for D in sys.colors:
        c: dict = {"name": D.name, "type": D.ctype, "moved_by": list(D.moved_by),
                   "delta": None if D.delta is None else [ql.fmt(x) for x in D.delta],
                   "q": {a: fmt_q(D.q[a]) for a in D.moved_by}}
        if not D.delta_exact:
            c["delta_scale"] = UNKNOWN
        cols.append(c)
    out["colors"] = cols
    if sys.rk_xi_h is not None:
        out["rk_xi_h"] = sys.rk_xi_h
    if sys.fan is not None:
        out["fan"] = [[list(r) for r in cone] for cone in sys.fan]
    if sys.catalog_path is not None:
        out["catalog_path"] = sys.catalog_path
    if sys.meta:
        out["meta"] = _jsonable(sys.meta)
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return ql.fmt(x)
    return x


def _is_scalar(x) -> bool:
    return x is None or isinstance(x, (str, int, float, bool))


def emit(obj: Any, indent: int = 0) -> str:
    """Canonical JSON: two-space indentation, lists of scalars kept on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if _is_scalar(obj):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (list, tuple)):
        if all(_is_scalar(v) for v in obj):
            return json.dumps(list(obj), ensure_ascii=False)
        return "[\n" + ",\n".join(inner + emit(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        if all(_is_scalar(v) for v in obj.values()) and len(obj) <= 4:
            return json.dumps(obj, ensure_ascii=False, separators=(", ", ": "))
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {emit(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_system(sys: PSphericalSystem) -> str:
    return emit(system_to_dict(sys)) + "\n"


def _read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def loads_system(text: str, base_dir: str | None = None) -> PSphericalSystem:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    return system_from_dict(d, base_dir)


def load_system(path) -> PSphericalSystem:
    path = Path(path)
    return system_from_dict(_read_json(path), str(path.parent))


def relocate(sys: PSphericalSystem, out_path) -> PSphericalSystem:
    """Rewrite a relative ``catalog_path`` so it still resolves from ``out_path``'s directory."""
    cat = sys.catalog_path
    if not cat or os.path.isabs(cat) or sys.base_dir is None:
        return sys
    target = os.path.abspath(os.path.join(sys.base_dir, cat))
    out_dir = os.path.dirname(os.path.abspath(out_path))
    return sys.replace(catalog_path=os.path.relpath(target, out_dir), base_dir=out_dir)


def save_system(sys: PSphericalSystem, path) -> None:
    Path(path).write_text(dumps_system(relocate(sys, path)))


# --- cones and fans -------------------------------------------------------------------

def cone_to_dict(C: ConeQ) -> dict:
    return {"dim": C.ambient_dim, "rays": [list(r) for r in C.rays],
            "lineality": [list(r) for r in C.lineality],
            "facets": [list(f) for f in C.facets], "equations": [list(e) for e in C.equations]}


def cone_from_dict(d: Any, dim: int, where: str = "cone") -> ConeQ:
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object")
    vec = lambda key: [_int_vector(v, f"{where}.{key}[{i}]", dim) for i, v in enumerate(_list(d, key, where, []))]
    if "facets" in d or "equations" in d:
        return cone_from_inequalities(vec("facets"), dim, vec("equations"))
    if "rays" in d or "lineality" in d:
        return cone_from_rays(vec("rays"), dim, vec("lineality"))
    raise InputError(f"{where}: give facets/equations or rays/lineality")


def load_cone_context(path):
    """Root datum, lattice, p and the ``valuation_cone`` block of a file."""
    d = _read_json(path)
    if not isinstance(d, dict):
        raise InputError("top level: expected a JSON object")
    rd = root_datum_from_group(d.get("group"))
    p = parse_int(d.get("p"), "p")
    rows = [_int_vector(r, f"xi[{i}]", rd.rank) for i, r in enumerate(_list(d, "xi", "", []))]
    xi = normal_form(rows, rd.rank)
    if "valuation_cone" not in d:
        raise InputError("valuation_cone: missing (needed for --from-cone)")
    V = cone_from_dict(d["valuation_cone"], xi.rank, "valuation_cone")
    return d, rd, xi, p, V


def fan_from_dict(d: Any) -> tuple[Fan, tuple[Fraction, ...] | None]:
    if not isinstance(d, dict):
        raise InputError("top level: expected a JSON object")
    dim = parse_int(d.get("dim"), "dim")
    cones = [cone_from_dict(c if isinstance(c, dict) else {"rays": c}, dim, f"cones[{i}]")
             for i, c in enumerate(_list(d, "cones", "", []))]
    lam = d.get("lambda")
    if lam is not None:
        if not isinstance(lam, list) or len(lam) != dim:
            raise InputError(f"lambda: expected {dim} rationals")
        lam = tuple(parse_rational(x, f"lambda[{k}]") for k, x in enumerate(lam))
    return Fan.from_cones(cones, dim), lam


def load_fan(path) -> tuple[Fan, tuple[Fraction, ...] | None]:
    return fan_from_dict(_read_json(path))


def fan_to_dict(F: Fan, maximal_only: bool = True) -> dict:
    from .polyhedra import support
    cones = support(F) if maximal_only else list(F.cones)
    return {"format_version": FORMAT_VERSION, "dim": F.ambient_dim,
            "cones": [{"rays": [list(r) for r in C.rays], "lineality": [list(l) for l in C.lineality]}
                      if C.lineality else [list(r) for r in C.rays] for C in cones]}
