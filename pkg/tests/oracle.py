"""Independent cross-check machinery for the torsion computations.

Everything here works on plain dictionaries {sorted index tuple: Fraction}
over an orthonormal 7-frame with plain-Fraction Gaussian elimination, kept
deliberately separate from the package data structures.  The main entry
point solves the connection equations directly: it finds the unique totally
skew torsion 3-form T such that the metric connection with torsion T (i.e.
Levi-Civita plus half the torsion) annihilates the defining 3-form, with
the Levi-Civita part obtained from the Koszul formula for the flat metric
and the brackets recovered from the coframe derivatives.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

N = 7
Key = Tuple[int, ...]
OForm = Dict[Key, Fraction]


def sort_sign(indices) -> Tuple[int, Key]:
    idx = list(indices)
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


def clean(form: OForm) -> OForm:
    return {k: v for k, v in form.items() if v}


def add(a: OForm, b: OForm) -> OForm:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return clean(out)


def scale(a: OForm, c: Fraction) -> OForm:
    return clean({k: v * c for k, v in a.items()})


def wedge(a: OForm, b: OForm) -> OForm:
    out: OForm = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            if set(ka) & set(kb):
                continue
            s, key = sort_sign(ka + kb)
            out[key] = out.get(key, Fraction(0)) + s * va * vb
    return clean(out)


def hodge7(a: OForm) -> OForm:
    full = tuple(range(1, N + 1))
    out: OForm = {}
    for k, v in a.items():
        comp = tuple(i for i in full if i not in k)
        s, _ = sort_sign(k + comp)
        out[comp] = out.get(comp, Fraction(0)) + s * v
    return clean(out)


def d_of(table: Dict[int, OForm], a: OForm) -> OForm:
    out: OForm = {}
    for k, v in a.items():
        for pos, idx in enumerate(k):
            di = table.get(idx)
            if not di:
                continue
            rest = tuple(x for x in k if x != idx)
            term = wedge(di, {rest: Fraction(1)})
            sgn = -1 if pos % 2 else 1
            for kk, vv in term.items():
                out[kk] = out.get(kk, Fraction(0)) + sgn * v * vv
    return clean(out)


def _brackets(table: Dict[int, OForm]):
    """[e_a, e_b] components from d e^i(X, Y) = -e^i([X, Y])."""
    pairs: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, form in table.items():
        for (a, b), c in form.items():
            pairs.setdefault((a, b), {})[i] = pairs.get((a, b), {}).get(i, Fraction(0)) - c

    def bracket(a: int, b: int) -> Dict[int, Fraction]:
        if a == b:
            return {}
        s = 1
        if a > b:
            a, b = b, a
            s = -1
        return {i: s * v for i, v in pairs.get((a, b), {}).items()}

    return bracket


def solve_linear(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    m = [row + [b] for row, b in zip(rows, rhs) if any(row) or b]
    if not m:
        return [Fraction(0)] * (len(rows[0]) if rows else 0)
    ncols = len(m[0]) - 1
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if not any(m[i][:ncols]) and m[i][ncols]:
            return None
    x = [Fraction(0)] * ncols
    for row_idx, c in enumerate(pivots):
        x[c] = m[row_idx][ncols]
    return x


def characteristic_torsion(table: Dict[int, OForm], phi: OForm) -> Optional[OForm]:
    """The unique skew torsion of a connection preserving phi, or None.

    Connection coefficients: Koszul for the flat metric on the coframe,
    plus half the unknown torsion; the annihilation of phi is linear in
    the torsion components.
    """
    bracket = _brackets(table)

    def br(a: int, b: int, c: int) -> Fraction:
        return bracket(a, b).get(c, Fraction(0))

    gamma = {}
    half = Fraction(1, 2)
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            for c in range(1, N + 1):
                gamma[(a, b, c)] = half * (br(a, b, c) - br(b, c, a) + br(c, a, b))

    triples = list(combinations(range(1, N + 1), 3))
    tpos = {t: i for i, t in enumerate(triples)}

    def phic(a, b, c) -> Fraction:
        s, k = sort_sign((a, b, c))
        if s == 0:
            return Fraction(0)
        return s * phi.get(k, Fraction(0))

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for a in range(1, N + 1):
        for (b, c, d) in triples:
            row = [Fraction(0)] * len(triples)
            const = Fraction(0)
            for x in range(1, N + 1):
                # nabla_a acting on each slot of phi
                const += gamma[(a, b, x)] * phic(x, c, d)
                const += gamma[(a, c, x)] * phic(b, x, d)
                const += gamma[(a, d, x)] * phic(b, c, x)
                for (i, j, k), weight in (((a, b, x), phic(x, c, d)),
                                          ((a, c, x), phic(b, x, d)),
                                          ((a, d, x), phic(b, c, x))):
                    if weight == 0:
                        continue
                    s, key = sort_sign((i, j, k))
                    if s == 0:
                        continue
                    row[tpos[key]] += half * s * weight
            rows.append(row)
            rhs.append(-const)
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    return clean({t: sol[i] for t, i in tpos.items()})
