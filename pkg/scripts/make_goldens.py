"""Regenerate golden files from closed forms and brute-force box sums.

The q-expansion goldens deliberately avoid the package's enumeration code:
theta and theta_tilde come from their character formulas, the A2 forms from
a box scan of dual(A2) in coordinates.
"""

from __future__ import annotations

import itertools
import json
import sys
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "jaclat" / "golden"
N = 10


def dump(name: str, gram, k, h, d, coeffs: dict) -> None:
    entries = []
    for (n, r), c in sorted(coeffs.items()):
        if c:
            m = 24 * n
            assert m.denominator == 1
            c = Fraction(c)
            entries.append([int(m), list(r), c.numerator, c.denominator])
    obj = {"gram": gram, "k": str(k), "h": h, "d": d, "entries": entries, "N": N}
    (OUT / name).write_text(json.dumps(obj, indent=0) + "\n")


def chi4(r: int) -> int:
    return {1: 1, 3: -1}.get(r % 4, 0)


def chi12(r: int) -> int:
    return {1: 1, 11: 1, 5: -1, 7: -1}.get(r % 12, 0)


def theta() -> None:
    # theta = sum_r (-4/r) q^(r^2/8) zeta^(r/2); index Z, r-coordinate r/2, d = 2
    co = {}
    for r in range(-20, 21):
        n = Fraction(r * r, 8)
        if n <= N and chi4(r):
            co[(n, (r,))] = chi4(r)
    dump("qexp_theta_N10.json", [[1]], Fraction(1, 2), 3, 2, co)


def theta_tilde() -> None:
    # sum_r (12/r) q^(r^2/24) zeta^(r/2); index Z(3): coordinate x with 3x = r/2, d = 6
    co = {}
    for r in range(-40, 41):
        n = Fraction(r * r, 24)
        if n <= N and chi12(r):
            co[(n, (r,))] = chi12(r)
    dump("qexp_theta_tilde_N10.json", [[3]], Fraction(1, 2), 1, 6, co)


G = ((2, 1), (1, 2))


def beta(v) -> Fraction:
    return Fraction(sum(v[i] * G[i][j] * v[j] for i in range(2) for j in range(2)), 2)


def dual_a2(bound):
    # dual(A2) = Z(1/3, 1/3) + A2, coordinates in (1/3)Z with a = b mod 1
    R = 12
    for a, b in itertools.product(range(-3 * R, 3 * R + 1), repeat=2):
        if (a - b) % 3:
            continue
        v = (Fraction(a, 3), Fraction(b, 3))
        if beta(v) <= bound:
            yield (a, b), v


def legendre3(a: int) -> int:
    return {0: 0, 1: 1, 2: -1}[a % 3]


def distjac_a2() -> None:
    co = {}
    for (a, b), v in dual_a2(N):
        co[(beta(v), (a, b))] = legendre3(a)
    dump("qexp_distjac_A2_N10.json", [list(r) for r in G], 1, 8, 3, co)


def eis2_a2() -> None:
    pts = list(dual_a2(N))
    co: dict = {}
    for (sa, sb), s in pts:
        in_s = sa % 3 == 0
        for (ra, rb), r in pts:
            n = beta(s) + beta(r)
            if n > N:
                continue
            in_r = ra % 3 == 0
            lam = int(in_s and not in_r) - int(in_r and not in_s)
            if lam:
                key = (n, (ra, rb))
                co[key] = co.get(key, 0) + lam
    dump("qexp_eis2_A2_8_N10.json", [list(r) for r in G], 2, 8, 3, co)


def rep_matrices() -> None:
    sys.path.insert(0, str(OUT.parents[1]))
    from jaclat.expr import evaluate
    from jaclat.theta_rep import rep_matrices as rm
    for name in ("A2", "Z(3)"):
        L = evaluate(name)
        (OUT / f"rep_{name.replace('(', '').replace(')', '')}.json").write_text(
            json.dumps(rm(L).to_json(), indent=0) + "\n")


if __name__ == "__main__":
    theta()
    theta_tilde()
    distjac_a2()
    eis2_a2()
    rep_matrices()
