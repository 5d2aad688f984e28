"""Command line front end: ``jaclat info|dim|hp|singular|qexp|verify``."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from .dimension import as_weight, dim_jacobi, hp_polynomial
from .expr import ExprSyntaxError, UnknownLattice, evaluate
from .lattice import LatticeError
from .qseries import (CATALOG, ModuleMismatch, NotIsometric, NotLInvariant, named_form,
                      theta_series)
from .theta_rep import singular_basis, singular_dimension

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_VERIFY = 0, 1, 2, 3
PREC_ENV = "JACLAT_PREC"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)


def _lattice(text: str):
    return evaluate(text)


def _character(h: int) -> int:
    return int(h) % 24


def cmd_info(args) -> int:
    L = _lattice(args.expr)
    inf = L.info
    shadow = [{"rep": [str(x) for x in c.rep], "beta_mod1": str(c.beta_mod1),
               "order2": c.order2} for c in L.shadow]
    payload = {"lattice": L.name, "gram": [list(r) for r in L.gram], "rank": L.rank,
               "det": inf.det, "even": inf.even, "level": inf.level, "n2": inf.n2,
               "elementary_divisors": list(inf.elementary_divisors), "shadow": shadow}
    lines = [f"lattice  {L.name}", f"gram     {[list(r) for r in L.gram]}",
             f"rank {L.rank}  det {inf.det}  {'even' if inf.even else 'odd'}  "
             f"level {inf.level}  n2 {inf.n2}",
             f"elementary divisors {list(inf.elementary_divisors)}",
             f"shadow cosets ({len(L.shadow)}):"]
    for c in L.shadow:
        rep = "(" + ", ".join(str(x) for x in c.rep) + ")"
        lines.append(f"  {rep:24s} beta = {c.beta_mod1} mod 1{'  [2r in L]' if c.order2 else ''}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_dim(args) -> int:
    L = _lattice(args.expr)
    k = as_weight(args.k)
    res = dim_jacobi(L, k, _character(args.h), resolve=not args.formula_only)
    payload = {"lattice": L.name, "k": str(k), "h": _character(args.h), **res.to_json()}
    text = f"dim J_{{{k},{L.name}}}(eps^{_character(args.h)}) = {res.value}  [{res.exactness}, {res.method}]"
    if res.exactness == "Unknown":
        text += f"  bounds [{res.lower}, {res.upper}]"
    _emit(args, payload, text)
    return EXIT_OK


def _overrides(text: str | None, h: int) -> dict:
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"override {part!r} is not of the form k=v")
        k, v = part.split("=", 1)
        try:
            out[(as_weight(k), h)] = int(v)
        except ValueError as exc:
            raise UsageError(f"bad override {part!r}: {exc}") from exc
    return out


def cmd_hp(args) -> int:
    L = _lattice(args.expr)
    h = _character(args.h)
    res = hp_polynomial(L, h, args.parity, overrides=_overrides(args.override, h))
    payload = {"lattice": L.name, **res.to_json()}
    payload["dims"] = {str(k): d.to_json() for k, d in sorted(res.dims.items())}
    _emit(args, payload, f"{L.name}, h = {h}, {args.parity}: {res}")
    return EXIT_OK


def _fmt_cyclo(c) -> str:
    if c.is_rational():
        return str(c.to_rational())
    z = c.to_complex()
    return f"{z.real:.6g}{z.imag:+.6g}i"


def cmd_singular(args) -> int:
    L = _lattice(args.expr)
    hs = range(24) if args.all or args.h is None else [_character(args.h)]
    rows = []
    for h in hs:
        d = singular_dimension(L, h)
        row: dict = {"h": h, "dim": d}
        if args.basis and d:
            row["basis"] = [[c.to_json() for c in v] for v in singular_basis(L, h)]
            row["basis_text"] = [[_fmt_cyclo(c) for c in v] for v in singular_basis(L, h)]
        rows.append(row)
    lines = [f"singular weight {Fraction(L.rank, 2)} for {L.name}:"]
    for row in rows:
        if args.all and not row["dim"] and len(rows) > 1:
            continue
        lines.append(f"  h = {row['h']:2d}: dim {row['dim']}")
        for v in row.get("basis_text", []):
            lines.append("    lambda = (" + ", ".join(v) + ")")
    if len(lines) == 1:
        lines.append("  none")
    payload = {"lattice": L.name, "weight": str(Fraction(L.rank, 2)),
               "rows": [{k: v for k, v in r.items() if k != "basis_text"} for r in rows]}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _default_prec() -> Fraction:
    env = os.environ.get(PREC_ENV)
    try:
        return Fraction(env) if env else Fraction(10)
    except ValueError as exc:
        raise UsageError(f"{PREC_ENV}={env!r} is not a number") from exc


def cmd_qexp(args) -> int:
    N = Fraction(args.prec) if args.prec is not None else _default_prec()
    if args.name.startswith("theta:"):
        # theta:<lattice expr>  with --lam giving coset values
        L = _lattice(args.name[len("theta:"):])
        if not args.lam:
            raise UsageError("theta:<expr> needs --lam with one value per shadow coset")
        lam = [Fraction(x) for x in args.lam.split(",")]
        phi = theta_series(L, lam, N)
        label = args.name
    else:
        if args.name not in CATALOG:
            raise UsageError(f"unknown form {args.name!r}; known: {', '.join(CATALOG)}")
        phi = named_form(args.name, N)
        label = args.name
    if args.json:
        print(json.dumps(phi.to_json(), sort_keys=True))
        return EXIT_OK
    lines = [f"{label}: index {phi.index.name or [list(r) for r in phi.index.gram]}, "
             f"k = {phi.k}, h = {phi.h}, d = {phi.denom}, N = {phi.prec}, "
             f"{len(phi.coeffs)} terms",
             "  n        r (= d*r)          c(n, r)"]
    for n, r in phi.keys():
        lines.append(f"  {str(n):8s} {str(list(r)):18s} {phi.coeffs[(n, r)]}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import verify
    if args.golden_dir:
        os.environ[verify.GOLDEN_ENV] = args.golden_dir
    try:
        results = verify.run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"suite": args.suite, "passed": ok,
                          "criteria": [r.to_json() for r in results]}, indent=1, sort_keys=True))
    else:
        for r in results:
            print(r.line())
        print(f"suite {args.suite}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jaclat", description="Jacobi forms of lattice index: dimensions, "
                "singular forms and q-expansions.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name: str, help_: str):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    sp = add("info", "lattice invariants and shadow cosets")
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_info)

    sp = add("dim", "dimension of J_{k,L}(eps^h)")
    sp.add_argument("expr")
    sp.add_argument("--k", required=True, help="weight, e.g. 4, 7/2 or 3.5")
    sp.add_argument("--h", required=True, type=int, help="character exponent mod 24")
    sp.add_argument("--formula-only", action="store_true",
                    help="report the raw formula value inside the small-weight window")
    sp.set_defaults(func=cmd_dim)

    sp = add("hp", "Hilbert-Poincare numerator over (1-t^4)(1-t^6)")
    sp.add_argument("expr")
    sp.add_argument("--h", required=True, type=int)
    sp.add_argument("--parity", required=True, choices=("even", "odd"))
    sp.add_argument("--override", help="known dimensions k=v,... for the given h")
    sp.set_defaults(func=cmd_hp)

    sp = add("singular", "singular weight forms")
    sp.add_argument("expr")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--h", type=int)
    g.add_argument("--all", action="store_true")
    sp.add_argument("--basis", action="store_true", help="also print coset-function bases")
    sp.set_defaults(func=cmd_singular)

    sp = add("qexp", "q-expansion of a catalog form or theta:<expr>")
    sp.add_argument("name", help=f"one of {', '.join(CATALOG)} or theta:<expr>")
    sp.add_argument("--prec", help=f"precision N (default ${PREC_ENV} or 10)")
    sp.add_argument("--lam", help="coset values for theta:<expr>, comma separated")
    sp.set_defaults(func=cmd_qexp)

    sp = add("verify", "run acceptance suites")
    sp.add_argument("--suite", default="all",
                    choices=("tables", "identities", "representation", "all"))
    sp.add_argument("--golden-dir", help="directory with golden files")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ExprSyntaxError, UnknownLattice) as exc:
        print(f"jaclat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, NotIsometric, NotLInvariant, ModuleMismatch, ArithmeticError,
            ValueError) as exc:
        print(f"jaclat: math error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
