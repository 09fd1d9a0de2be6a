"""Command-line interface: ``spherica <verb> ...``.

Exit codes: 0 when nothing failed, 1 on a mathematical failure (a failed
axiom or check, a refused localization), 2 on an input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .axioms import CatalogError, load_catalog, validate
from .corpus import (EXAMPLES, INF, frobenius_diag, schalke_so4, sl3_unipotent, wenzel_flag)
from .io import (InputError, relocate, dumps_system, emit, fan_to_dict, load_cone_context, load_fan,
                 load_system, parse_rational, system_to_dict)
from .lattice import LatticeError
from .localization import (LocalizationError, is_simplicial, localize_at_S, localize_at_Sigma,
                           neighbor_sets, neighbor_test)
from .polyhedra import ConeError, validate_fan, localize_fan
from .roots import RootDatumError
from .spherical import SphericalError, recover_roots, valuation_cone

CATALOG_ENV = "SPHERICA_CATALOG"
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _split_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_vector(text: str, where: str):
    return tuple(parse_rational(t, f"{where}[{k}]") for k, t in enumerate(_split_list(text)))


# --- validate ---------------------------------------------------------------------

def _resolve_catalog(args, system):
    if args.catalog:
        return load_catalog(args.catalog)
    if system.catalog_path:
        return None  # validate() resolves it against the file location
    env = os.environ.get(CATALOG_ENV)
    return load_catalog(env) if env else None


def format_report(report) -> str:
    lines = [f"p = {report.p}, p2_mode = {'on' if report.p2_mode else 'off'}", "",
             f"{'axiom':<7}{'status':<14}message"]
    for a in report.axioms:
        lines.append(f"{a.id:<7}{a.status:<14}{a.message}")
    if report.checks:
        lines += ["", f"{'check':<24}{'status':<14}details"]
        for c in report.checks:
            bad = [f.message for f in c.findings if f.status == c.status] if c.status != "pass" else []
            lines.append(f"{c.name:<24}{c.status:<14}{'; '.join(bad) if bad else f'{len(c.findings)} finding(s)'}")
    if report.failures:
        lines += ["", "failures:"]
        for aid, f in report.failures:
            lines.append(f"  {aid}: {f.message}  witness={json.dumps(dict(f.witness), default=str)}")
    lines.append("")
    lines.append("result: " + ("ok" if report.ok else "FAIL"))
    return "\n".join(lines) + "\n"


def cmd_validate(args) -> int:
    system = load_system(args.path)
    cat = _resolve_catalog(args, system)
    report = validate(system, catalog=cat, p2_mode=args.p2_mode, structural=not args.no_structural)
    if args.json:
        _write(json.dumps(report.to_dict(), indent=2) + "\n", args.output)
    else:
        _write(format_report(report), args.output)
    return EXIT_OK if report.ok else EXIT_FAIL


# --- roots -------------------------------------------------------------------------

def cmd_roots(args) -> int:
    if args.direction == "to-cone":
        system = load_system(args.path)
        V = valuation_cone(system)
        if args.output or args.json:
            d = system_to_dict(relocate(system, args.output) if args.output else system)
            d["valuation_cone"] = {"facets": [list(f) for f in V.facets],
                                   "equations": [list(e) for e in V.equations]}
            _write(emit(d) + "\n", args.output)
            return EXIT_OK
        lines = [f"valuation cone in N_Q (dimension {V.ambient_dim}, coordinates dual to the basis of Xi)",
                 f"  {len(V.facets)} facet(s): u(v) >= 0 for u in"]
        lines += [f"    {list(f)}" for f in V.facets]
        if V.equations:
            lines.append("  equations: " + ", ".join(str(list(e)) for e in V.equations))
        lines.append("  rays: " + (", ".join(str(list(r)) for r in V.rays) or "none"))
        if V.lineality:
            lines.append("  lineality: " + ", ".join(str(list(r)) for r in V.lineality))
        _write("\n".join(lines) + "\n", None)
        return EXIT_OK
    d, rd, xi, p, V = load_cone_context(args.path)
    steps = recover_roots(V, rd, xi, p)
    sigma = [list(s.root) for s in steps]
    if args.output or args.json:
        d = dict(d)
        d["sigma"] = sigma
        d.pop("valuation_cone", None)
        _write(emit(d) + "\n", args.output)
        return EXIT_OK
    lines = [f"recovered {len(steps)} spherical root(s) (p = {p})"]
    for s in steps:
        lines.append(f"  ray {list(s.ray)} of -V^vee -> direction {rd.format_root(s.direction)}"
                     f" -> primitive in ZS cap Xi_p: {rd.format_root(s.root)}")
    _write("\n".join(lines) + "\n", None)
    return EXIT_OK


# --- localize ----------------------------------------------------------------------

def _parse_sigma_subset(text: str, system) -> list[tuple[int, ...]]:
    out = []
    for tok in _split_list(text):
        if tok[0] == "s" and tok[1:].isdigit():
            k = int(tok[1:])
            if not 1 <= k <= len(system.sigma):
                raise UsageError(f"{tok}: Sigma has {len(system.sigma)} elements")
            out.append(system.sigma[k - 1])
        else:
            try:
                out.append(system.rd.parse_root(tok))
            except RootDatumError as e:
                raise UsageError(f"--at-sigma: {e}") from None
    return out


def cmd_localize(args) -> int:
    system = load_system(args.path)
    if (args.at_s is None) == (args.at_sigma is None):
        raise UsageError("give exactly one of --at-s and --at-sigma")
    if args.at_s is not None:
        fan = None
        if args.fan:
            fan, _ = load_fan(args.fan)
        lam = _parse_vector(args.lam, "--lambda") if args.lam else None
        try:
            res = localize_at_S(system, _split_list(args.at_s), mode=args.mode, fan=fan, lam=lam)
        except RootDatumError as e:
            raise UsageError(f"--at-s: {e}") from None
    else:
        sub = _parse_sigma_subset(args.at_sigma, system)
        res = localize_at_Sigma(system, sub)
    _write(dumps_system(relocate(res.sys, args.output) if args.output else res.sys), args.output)
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for what, why in res.dropped:
        print(f"dropped {what}: {why}", file=sys.stderr)
    return EXIT_OK


# --- neighbors ----------------------------------------------------------------------

def cmd_neighbors(args) -> int:
    system = load_system(args.path)
    fmt = system.fmt_root
    sets = neighbor_sets(system)
    simplicial = is_simplicial(system)
    n = len(system.sigma)
    pairs = [(a, b) for a, b in combinations(system.sigma, 2)]
    good = [pr for pr in pairs if neighbor_test(pr, system).is_neighbor_set]
    bad = [pr for pr in pairs if pr not in good]
    maximal = [s for s in sets if len(s) < n and not any(len(t) < n and set(s) < set(t) for t in sets)]
    simple_mult = lambda s: sum(1 for c in s if c) == 1
    simple_ok = all(pr in good for pr in pairs if simple_mult(pr[0]) and simple_mult(pr[1]))
    if args.json:
        d = {"simplicial": simplicial,
             "neighbor_sets": [[fmt(s) for s in t] for t in sets],
             "maximal_proper": [[fmt(s) for s in t] for t in maximal],
             "neighbor_pairs": [[fmt(a), fmt(b)] for a, b in good],
             "non_neighbor_pairs": [[fmt(a), fmt(b)] for a, b in bad],
             "simple_multiples_are_neighbors": simple_ok}
        _write(json.dumps(d, indent=2) + "\n", args.output)
        return EXIT_OK
    lines = [f"Sigma = {{{', '.join(fmt(s) for s in system.sigma)}}}"]
    if simplicial:
        lines.append("simplicial: all subsets are sets of neighbors")
    by_size: dict[int, list] = {}
    for t in sets:
        by_size.setdefault(len(t), []).append(t)
    for k in sorted(by_size):
        lines.append(f"{k} root(s):")
        for t in by_size[k]:
            lines.append("  {" + ", ".join(fmt(s) for s in t) + "}")
    lines.append("maximal proper: " + ("; ".join("{" + ", ".join(fmt(s) for s in t) + "}" for t in maximal)
                                       or "none"))
    lines.append("neighbor pairs: " + ("; ".join(f"{fmt(a)} | {fmt(b)}" for a, b in good) or "none"))
    lines.append("non-neighbor pairs: " + ("; ".join(f"{fmt(a)} | {fmt(b)}" for a, b in bad) or "none"))
    lines.append("multiples of simple roots are pairwise neighbors: " + ("yes" if simple_ok else "NO"))
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK if simple_ok else EXIT_FAIL


# --- example ------------------------------------------------------------------------

def cmd_example(args) -> int:
    name = args.name
    if name == "wenzel-flag":
        if args.f is None:
            raise UsageError("wenzel-flag needs --f, e.g. --f inf,2")
        p = args.p if args.p is not None else 5
        system = wenzel_flag(args.group or "A2", args.f, p)
    elif name == "frobenius-diag":
        p = args.p if args.p is not None else 3
        system = frobenius_diag(args.q if args.q is not None else p, p)
    elif name == "sl3-unipotent":
        p = args.p if args.p is not None else 3
        system = sl3_unipotent(args.q if args.q is not None else p, p)
    elif name == "schalke-so4":
        if args.p not in (None, 2):
            raise UsageError("schalke-so4 is a p = 2 configuration")
        system = schalke_so4()
    else:
        raise UsageError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    if args.catalog_path:
        system = system.replace(catalog_path=args.catalog_path)
    _write(dumps_system(system), args.output)
    return EXIT_OK


# --- fan-localize ------------------------------------------------------------------------

def cmd_fan_localize(args) -> int:
    fan, lam = load_fan(args.path)
    if args.lam:
        lam = _parse_vector(args.lam, "--lambda")
    if lam is None:
        raise UsageError("give lambda with --lambda or in the fan file")
    rep = validate_fan(fan)
    if not rep.valid:
        for v in rep.violations:
            print(f"fan violation ({v.kind}): {v.message}", file=sys.stderr)
        return EXIT_FAIL
    loc = localize_fan(fan, lam)
    if args.json or args.output:
        d = fan_to_dict(loc.fan)
        d["v_lambda"] = [list(v) for v in loc.v_lambda]
        d["c_lambda"] = {"rays": [list(r) for r in loc.c_lambda.rays],
                         "lineality": [list(r) for r in loc.c_lambda.lineality]}
        d["quotient_basis"] = [list(w) for w in loc.quotient_basis]
        _write(emit(d) + "\n", args.output)
        return EXIT_OK
    lines = [f"C(lambda): {loc.c_lambda.describe()}",
             "V(lambda): " + (", ".join(str(list(v)) for v in loc.v_lambda) or "0"),
             "quotient coordinates: " + (", ".join(str(list(w)) for w in loc.quotient_basis) or "none"),
             f"localized fan in Q^{loc.fan.ambient_dim}: {len(loc.fan.cones)} cone(s)"]
    lines += [f"  {C.describe()}" for C in loc.fan.cones]
    _write("\n".join(lines) + "\n", None)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spherica", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    v = sub.add_parser("validate", help="check the axioms and structural relations of a system file")
    v.add_argument("path")
    v.add_argument("--p2-mode", choices=["auto", "on", "off"], default="auto")
    v.add_argument("--catalog", help=f"spherical-root catalog (default: catalog_path, then ${CATALOG_ENV})")
    v.add_argument("--json", action="store_true", help="emit the machine-readable report")
    v.add_argument("--no-structural", action="store_true", help="only evaluate A1-A8")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("roots", help="convert between spherical roots and the valuation cone")
    r.add_argument("path")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-cone", dest="direction", action="store_const", const="to-cone")
    g.add_argument("--from-cone", dest="direction", action="store_const", const="from-cone")
    r.add_argument("--json", action="store_true", help="write a system file with the result")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_roots)

    lo = sub.add_parser("localize", help="localize at a subset of S or at a set of neighbors")
    lo.add_argument("path")
    lo.add_argument("--at-s", help="comma-separated simple roots, e.g. a1,a2")
    lo.add_argument("--at-sigma", help="comma-separated spherical roots (a1+a2) or indices (s1,s3)")
    lo.add_argument("--mode", choices=["minimal", "fan"], default="minimal")
    lo.add_argument("--fan", help="fan file for --mode fan (default: the fan stored in the system)")
    lo.add_argument("--lambda", dest="lam", help="adapted coweight in ambient coordinates")
    lo.add_argument("-o", "--output")
    lo.set_defaults(func=cmd_localize)

    ne = sub.add_parser("neighbors", help="list the sets of neighbors in Sigma")
    ne.add_argument("path")
    ne.add_argument("--json", action="store_true")
    ne.add_argument("-o", "--output")
    ne.set_defaults(func=cmd_neighbors)

    ex = sub.add_parser("example", help="emit a worked example as a system file")
    ex.add_argument("name", choices=EXAMPLES)
    ex.add_argument("-p", type=int, help="characteristic exponent")
    ex.add_argument("--q", type=int, help="power of p (frobenius-diag, sl3-unipotent)")
    ex.add_argument("--f", help=f"comma-separated f values, {INF} for infinity (wenzel-flag)")
    ex.add_argument("--group", help="Cartan type for wenzel-flag (default A2)")
    ex.add_argument("--catalog-path", help="catalog path to record in the file")
    ex.add_argument("-o", "--output")
    ex.set_defaults(func=cmd_example)

    fl = sub.add_parser("fan-localize", help="localize a fan at lambda")
    fl.add_argument("path")
    fl.add_argument("--lambda", dest="lam", help="comma-separated rationals")
    fl.add_argument("--json", action="store_true")
    fl.add_argument("-o", "--output")
    fl.set_defaults(func=cmd_fan_localize)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, UsageError, CatalogError, RootDatumError, LatticeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SphericalError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT if args.verb == "example" else EXIT_FAIL
    except (LocalizationError, ConeError) as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
