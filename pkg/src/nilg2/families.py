"""The classified families of half-integrable torsion structures.

Three parameterized nilpotent families carry the standard structure in
their presentation coframe and satisfy the torsion equations identically:

* case1:  (0, lam*35, k*15, -lam*15 + k*25, 0, lam*13),   lam, k nonzero;
* case2:  (0, lam*35, 0, -lam*15, (z+a1)*13, a1*14 + z*23 + lam*13),
          lam nonzero and z + a1 nonzero (else the first Betti number jumps);
* case3:  (0, lam*35, 0, -lam*15, 0, a1*(14 - 23) + lam*13),  lam nonzero.

For the middle family the d e^5 coefficient is forced: with
d e^6 = a1*14 + z*23 + lam*13 the closure constraint pins
d e^5 = (z + a1) e^{13} (any other multiple leaves d psi+ proportional to
e^{1234} and nonzero), and that is the table instantiated here.

Each classified algebra from the matching list is reached from a family by
an explicit, frozen basis-change witness which ``verify_theorem`` replays.
The sign dichotomy among the 14+-25 twins is decided by sign(a1*z); the
14-35 twin admits no realization (the two twins are distinguished by the
count of real zero lines of the cubic u -> [u,[u,.]], which every family
instance gets wrong for 14-35), so its row fails with that analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exterior import Form, FrameContext
from .liealg import (
    BasisChange,
    LieAlgebra,
    NAMED_ALGEBRAS,
    change_basis,
    fingerprint,
    is_isomorphic_via,
    parse_salamon,
)
from .scalars import ParameterContext, Scalar, embed as embed_scalar
from .su3 import SU3Structure, standard_structure

__all__ = [
    "FamilySpec",
    "FAMILIES",
    "case2_gauge_rotation",
    "DegenerateParameterError",
    "TheoremRow",
    "TheoremTable",
    "TheoremWitnessError",
    "instantiate",
    "verify_theorem",
    "diagonal_solve",
    "DiagonalSolveError",
    "contraction_limit",
    "ContractionError",
    "family_context",
]


class DegenerateParameterError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    table: str
    parameters: Tuple[str, ...]
    nonzero: Tuple[str, ...]          # scalar expressions that must not vanish
    essential_parameters: int


FAMILIES: Dict[str, FamilySpec] = {
    "case1": FamilySpec(
        name="case1",
        table="0,lam*35,k*15,-lam*15+k*25,0,lam*13",
        parameters=("lam", "k"),
        nonzero=("lam", "k"),
        essential_parameters=1,
    ),
    "case2": FamilySpec(
        name="case2",
        table="0,lam*35,0,-lam*15,(z+a1)*13,a1*14+z*23+lam*13",
        parameters=("lam", "z", "a1"),
        nonzero=("lam", "z+a1"),
        essential_parameters=2,
    ),
    "case3": FamilySpec(
        name="case3",
        table="0,lam*35,0,-lam*15,0,a1*14-a1*23+lam*13",
        parameters=("lam", "a1"),
        nonzero=("lam",),
        essential_parameters=1,
    ),
}

_FAMILY_PARAMS = ("a1", "k", "lam", "t", "z")


def family_context() -> ParameterContext:
    return ParameterContext(_FAMILY_PARAMS)


def instantiate(
    name: str,
    bindings: Optional[Mapping[str, Fraction]] = None,
    params: Optional[ParameterContext] = None,
) -> Tuple[LieAlgebra, SU3Structure]:
    """A family algebra with its standard adapted structure.

    Symbolic in the family parameters when no bindings are given; bindings
    must respect the nondegeneracy constraints.
    """
    try:
        spec = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}") from None
    ctx = params or family_context()
    algebra = parse_salamon(spec.table, ctx)
    if bindings is not None:
        bindings = {k: Fraction(v) for k, v in bindings.items()}
        missing = [p for p in spec.parameters if p not in bindings]
        if missing:
            raise DegenerateParameterError(f"missing bindings for {missing}")
        for expr in spec.nonzero:
            if ctx.parse(expr).evaluate(bindings) == 0:
                raise DegenerateParameterError(f"degenerate parameter: {expr} = 0")
        table = tuple(f.evaluate(bindings) for f in algebra.d_table)
        algebra = LieAlgebra(table[0].ctx, table)
    structure = standard_structure(algebra)
    return algebra, structure


def case2_gauge_rotation(params: ParameterContext, c, s) -> BasisChange:
    """The structure-preserving rotation used to gauge-fix the middle family.

    Rotates the two complex lines spanned by (e1, e2) and (e3, e4) by a
    common angle with cosine ``c`` and sine ``s`` (a rational point on the
    circle, e.g. 3/5 and 4/5); this preserves the standard structure forms
    and mixes the diagonal 2-form coefficients of d e^6 by the double
    angle, which is how a nonzero anti-diagonal term is eliminated.  Exact
    arithmetic only reaches rational circle points, so full gauge fixing of
    arbitrary inputs is left to the caller's choice of point.
    """
    c = params.scalar(c) if not isinstance(c, Scalar) else c
    s = params.scalar(s) if not isinstance(s, Scalar) else s
    if c * c + s * s != params.one:
        raise ValueError("gauge rotation needs c^2 + s^2 = 1")
    zero, one = params.zero, params.one
    return BasisChange(params, [
        [c, zero, s, zero, zero, zero],
        [zero, c, zero, s, zero, zero],
        [-s, zero, c, zero, zero, zero],
        [zero, -s, zero, c, zero, zero],
        [zero, zero, zero, zero, one, zero],
        [zero, zero, zero, zero, zero, one],
    ])


# ---------------------------------------------------------------------------
# diagonal normalization
# ---------------------------------------------------------------------------


class DiagonalSolveError(ValueError):
    pass


def _nth_root_fraction(value: Fraction, n: int) -> Optional[Fraction]:
    if n == 1:
        return value
    if value < 0 and n % 2 == 0:
        return None

    def iroot(x: int) -> Optional[int]:
        if x < 0:
            r = iroot(-x)
            return None if (r is None or n % 2 == 0) else -r
        lo, hi = 0, max(1, x)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid ** n
            if p == x:
                return mid
            if p < x:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _scalar_power(value: Scalar, q: Fraction) -> Optional[Scalar]:
    """value**q when it exists in the field (rational values only for roots)."""
    if q.denominator == 1:
        return value ** q.numerator
    if not value.is_rational:
        return None
    root = _nth_root_fraction(value.as_fraction(), q.denominator)
    if root is None:
        return None
    return value.ctx.scalar(root) ** q.numerator


def diagonal_solve(g: LieAlgebra, target: LieAlgebra) -> BasisChange:
    """A diagonal basis change with change_basis(g, B) = target, if one exists.

    Both tables must have the same monomial shape.  Each matching monomial
    yields a multiplicative constraint d_i / (d_a d_b) = ratio; constraints
    are propagated (solving for one unknown at a time, extracting rational
    roots with a sign branch where an even power appears), stalled unknowns
    default to 1, and every completed assignment is verified exactly.
    """
    if g.ctx != target.ctx:
        raise DiagonalSolveError("context mismatch")
    n = g.ctx.dim
    pctx = g.ctx.params
    constraints: List[Tuple[Dict[int, int], Scalar]] = []
    for i in range(1, n + 1):
        src, dst = g.d_table[i - 1], target.d_table[i - 1]
        if set(src.comps) != set(dst.comps):
            raise DiagonalSolveError(
                f"no diagonal witness: entry {i} has mismatched shape"
            )
        for mask, coeff in src.comps.items():
            ratio = dst.comps[mask] / coeff
            exps: Dict[int, int] = {i - 1: 1}
            bit, idx = 1, 1
            while bit <= mask:
                if mask & bit:
                    exps[idx - 1] = exps.get(idx - 1, 0) - 1
                bit <<= 1
                idx += 1
            exps = {v: e for v, e in exps.items() if e}
            constraints.append((exps, ratio))

    matrix = [[exps.get(j, 0) for j in range(n)] for exps, _ in constraints]
    values = [r for _, r in constraints]
    diag, U, V = _smith_normal_form(matrix, n)
    m = len(matrix)

    def power_product(scalars: Sequence[Scalar], exponents: Sequence[int]) -> Scalar:
        out = pctx.one
        for sc, e in zip(scalars, exponents):
            if e:
                out = out * sc ** e
        return out

    transformed = [power_product(values, U[i]) for i in range(m)]
    rank_d = sum(1 for i in range(min(m, n)) if diag[i])
    for i in range(rank_d, m):
        if transformed[i] != pctx.one:
            raise DiagonalSolveError("no diagonal witness: inconsistent system")
    y_options: List[List[Scalar]] = [[]]
    for i in range(n):
        if i < rank_d and diag[i]:
            root = _scalar_power(transformed[i], Fraction(1, diag[i]))
            if root is None:
                raise DiagonalSolveError("no diagonal witness: irrational scaling")
            choices = [root, -root] if diag[i] % 2 == 0 else [root]
        else:
            choices = [pctx.one]
        y_options = [prefix + [c] for prefix in y_options for c in choices]
    for y in y_options:
        assign = [power_product(y, [V[j][i] for i in range(n)]) for j in range(n)]
        if any(x.is_zero for x in assign):
            continue
        candidate = BasisChange.diagonal(pctx, assign)
        if change_basis(g, candidate).d_table == target.d_table:
            return candidate
    raise DiagonalSolveError("no diagonal witness: inconsistent system")


def _smith_normal_form(matrix: List[List[int]], ncols: int):
    """Smith normal form with transform tracking: U @ M @ V = diag.

    Returns (diagonal entries, U, V) over the integers; standard pivot
    reduction, adequate for the tiny systems arising here.
    """
    M = [list(row) for row in matrix]
    m = len(M)
    n = ncols
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, q):      # row_i -= q * row_j
        M[i] = [a - q * b for a, b in zip(M[i], M[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):      # col_i -= q * col_j
        for row in M:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] and (best is None or abs(M[i][j]) < best):
                    best = abs(M[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    row_op(i, t, q)
                    if M[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    col_op(j, t, q)
                    if M[t][j]:
                        swap_cols(t, j)
                        done = False
        if M[t][t] < 0:
            M[t] = [-a for a in M[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    diag = [M[i][i] if i < n else 0 for i in range(min(m, n))]
    diag += [0] * max(0, n - len(diag))
    return diag, U, V


# ---------------------------------------------------------------------------
# contraction limits
# ---------------------------------------------------------------------------


class ContractionError(ValueError):
    pass


def _t_valuation(poly, names) -> Optional[int]:
    """Minimal t-exponent among terms (None for the zero polynomial)."""
    if not poly:
        return None
    t_index = names.index("t")
    return min(mono[t_index] for mono in poly.monoms())


def _t_degree(poly, names) -> Optional[int]:
    if not poly:
        return None
    t_index = names.index("t")
    return max(mono[t_index] for mono in poly.monoms())


def _poly_slice(ctx: ParameterContext, poly, names, exponent: int) -> Scalar:
    """Sum of terms with exact t-exponent, with t struck out."""
    t_index = names.index("t")
    total = ctx.zero
    for mono, coeff in poly.terms():
        if mono[t_index] != exponent:
            continue
        term = ctx.scalar(Fraction(int(coeff.numerator), int(coeff.denominator)))
        for name, exp in zip(names, mono):
            if exp and name != "t":
                term = term * ctx.param(name) ** exp
        total = total + term
    return total


def _limit(scalar: Scalar, direction: str) -> Scalar:
    """lim of a rational function of t as t -> 0 or t -> infinity."""
    ctx = scalar.ctx
    if scalar.is_rational:
        return scalar
    names = ctx.names
    num, den = scalar.raw.numer, scalar.raw.denom
    if not num:
        return ctx.zero
    if direction == "to-zero":
        v_num = _t_valuation(num, names)
        v_den = _t_valuation(den, names)
        if v_num < v_den:
            raise ContractionError(
                f"contraction undefined in this direction: {scalar} diverges at t -> 0"
            )
        if v_num > v_den:
            return ctx.zero
        return _poly_slice(ctx, num, names, v_num) / _poly_slice(ctx, den, names, v_den)
    if direction == "to-infinity":
        d_num = _t_degree(num, names)
        d_den = _t_degree(den, names)
        if d_num > d_den:
            raise ContractionError(
                f"contraction undefined in this direction: {scalar} diverges at t -> infinity"
            )
        if d_num < d_den:
            return ctx.zero
        return _poly_slice(ctx, num, names, d_num) / _poly_slice(ctx, den, names, d_den)
    raise ValueError("direction must be 'to-zero' or 'to-infinity'")


def contraction_limit(
    g: LieAlgebra,
    exponents: Sequence[int],
    direction: str,
) -> LieAlgebra:
    """Termwise limit of the rescaled coframe t^{e_i} e^i; always a Lie algebra.

    Divergent coefficients raise :class:`ContractionError` naming the term.
    """
    if len(exponents) != g.ctx.dim:
        raise ValueError("one exponent per coframe axis required")
    ctx_t = ParameterContext(tuple(sorted(set(g.ctx.params.names) | {"t"})))
    frame_t = FrameContext(g.ctx.dim, ctx_t)
    t = ctx_t.param("t")
    lifted = LieAlgebra(
        frame_t, tuple(f.embed(ctx_t) for f in g.d_table), require_nilpotent=False
    )
    scaling = BasisChange.diagonal(ctx_t, [t ** e for e in exponents])
    rescaled = change_basis(lifted, scaling)
    new_table = []
    for i, f in enumerate(rescaled.d_table, start=1):
        comps = {}
        for mask, coeff in f.comps.items():
            try:
                value = _limit(coeff, direction)
            except ContractionError as exc:
                raise ContractionError(f"d e^{i}: {exc}") from None
            comps[mask] = value
        new_table.append(Form(frame_t, comps))
    limited = LieAlgebra(frame_t, tuple(new_table))
    # restrict back to the original context (t no longer occurs)
    out_table = []
    for f in limited.d_table:
        out_table.append(
            Form(g.ctx, {m: embed_scalar_down(c, g.ctx.params) for m, c in f.comps.items()})
        )
    return LieAlgebra(g.ctx, tuple(out_table))


def embed_scalar_down(s: Scalar, target: ParameterContext) -> Scalar:
    missing = s.params() - set(target.names)
    if missing:
        raise ContractionError(f"limit still depends on {sorted(missing)}")
    return embed_scalar(s, target) if s.ctx is not target else s


# ---------------------------------------------------------------------------
# theorem replay
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremRow:
    entry: str
    family: str
    binding: Optional[Dict[str, Fraction]]
    witness: Optional[BasisChange]
    witness_ok: bool
    fingerprint_ok: bool
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.witness_ok and self.fingerprint_ok


@dataclass(frozen=True)
class TheoremTable:
    rows: Tuple[TheoremRow, ...]

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)


class TheoremWitnessError(ValueError):
    def __init__(self, table: TheoremTable):
        failing = [row.entry for row in table.rows if not row.passed]
        super().__init__(f"witness failure for entries: {', '.join(failing)}")
        self.table = table


def _witness_entries(name: str):
    """Frozen witness matrices: new coframe rows as {column: scalar text}."""
    table = {
        "case1_to_entry_14": [
            {5: "1"},
            {1: "1"},
            {3: "-1/k"},
            {2: "1/(k*lam)"},
            {6: "-1/(k*lam)"},
            {4: "-1/(k^2*lam)", 3: "-1/k^3"},
        ],
        "case2_to_entry_14p25": [
            {1: "1"},
            {3: "1"},
            {5: "1/2"},
            {4: "-1/2"},
            {2: "1/2"},
            {6: "-1/2", 5: "1/4"},
        ],
        "case2_to_entry_14m25": [
            {1: "1"},
            {3: "2"},
            {5: "-2/3"},
            {4: "2/3"},
            {2: "-4/3"},
            {6: "2/3", 5: "2/9"},
        ],
        "case3_to_entry_14p35": [
            {1: "1"},
            {5: "-a1*lam"},
            {3: "1"},
            {4: "a1", 3: "lam"},
            {2: "a1"},
            {6: "1"},
        ],
        "case3_to_entry_121323": [
            {3: "1"},
            {5: "1"},
            {1: "1"},
            {2: "1/lam"},
            {6: "-1/lam"},
            {4: "1/lam"},
        ],
    }
    return table[name]


def _witness(ctx: ParameterContext, name: str) -> BasisChange:
    rows = []
    for spec in _witness_entries(name):
        row = ["0"] * 6
        for idx, text in spec.items():
            row[idx - 1] = text
        rows.append([ctx.parse(cell) for cell in row])
    return BasisChange(ctx, rows)


def _bound_case2(ctx: ParameterContext, lam, z, a1) -> LieAlgebra:
    """A case2 instance expressed inside the symbolic context (exact literals)."""
    return parse_salamon(
        f"0,({lam})*35,0,({-lam})*15,({z + a1})*13,({a1})*14+({z})*23+({lam})*13",
        ctx,
    )


def verify_theorem(params: Optional[ParameterContext] = None) -> TheoremTable:
    """Replay the classification witnesses, one row per listed algebra.

    Raises :class:`TheoremWitnessError` carrying the full table if any row
    fails; the table is available on the exception for reporting.
    """
    ctx = params or family_context()
    rows: List[TheoremRow] = []

    def witness_row(entry_key: str, family: str, witness_name: str,
                    source: LieAlgebra, sample_binding: Dict[str, Fraction],
                    note: str):
        target = parse_salamon(NAMED_ALGEBRAS[entry_key], ctx)
        witness = _witness(ctx, witness_name)
        ok = is_isomorphic_via(source, witness, target)
        bound_algebra, _ = instantiate(family, sample_binding, params=ctx)
        fp_ok = fingerprint(bound_algebra) == fingerprint(target)
        rows.append(
            TheoremRow(
                entry=NAMED_ALGEBRAS[entry_key],
                family=family,
                binding=dict(sample_binding),
                witness=witness,
                witness_ok=ok,
                fingerprint_ok=fp_ok,
                note=note,
            )
        )

    case1_sym, _ = instantiate("case1", params=ctx)
    case2_sym, _ = instantiate("case2", params=ctx)
    case3_sym, _ = instantiate("case3", params=ctx)
    case3_a1_zero = parse_salamon("0,lam*35,0,-lam*15,0,lam*13", ctx)

    witness_row(
        "entry_14", "case1", "case1_to_entry_14", case1_sym,
        {"lam": Fraction(1), "k": Fraction(1)},
        "witness verified identically in lam, k",
    )
    witness_row(
        "entry_14p25", "case2", "case2_to_entry_14p25",
        _bound_case2(ctx, 1, 1, 1),
        {"lam": Fraction(1), "z": Fraction(1), "a1": Fraction(1)},
        "realized exactly when a1*z > 0",
    )
    witness_row(
        "entry_14m25", "case2", "case2_to_entry_14m25",
        _bound_case2(ctx, 1, -4, 1),
        {"lam": Fraction(1), "z": Fraction(-4), "a1": Fraction(1)},
        "realized exactly when a1*z < 0",
    )
    witness_row(
        "entry_14p35", "case3", "case3_to_entry_14p35", case3_sym,
        {"lam": Fraction(1), "a1": Fraction(1)},
        "witness valid for every nonzero a1, either sign",
    )

    # The 14-35 twin: no family instance is isomorphic to it.  The cubic
    # u -> [u,[u,.]] has three real projective zero lines on every case3
    # instance and on the 14+35 entry, but only one on 14-35; the count is a
    # basis-change invariant, so no witness exists.  The row is recorded as
    # failing with that analysis.
    target_m35 = parse_salamon(NAMED_ALGEBRAS["entry_14m35"], ctx)
    rows.append(
        TheoremRow(
            entry=NAMED_ALGEBRAS["entry_14m35"],
            family="case3",
            binding=None,
            witness=None,
            witness_ok=False,
            fingerprint_ok=fingerprint(
                instantiate("case3", {"lam": Fraction(1), "a1": Fraction(1)})[0]
            ) == fingerprint(target_m35),
            note=(
                "unrealizable: the real zero-line count of the double-bracket "
                "cubic is 3 on every case3 instance but 1 on this algebra"
            ),
        )
    )

    witness_row(
        "entry_121323", "case3", "case3_to_entry_121323", case3_a1_zero,
        {"lam": Fraction(1), "a1": Fraction(0)},
        "case3 at a1 = 0; witness valid for every nonzero lam",
    )
    # reorder rows to the listing order
    order = {
        NAMED_ALGEBRAS[k]: i
        for i, k in enumerate(
            ["entry_14", "entry_14m25", "entry_14p25",
             "entry_14p35", "entry_14m35", "entry_121323"]
        )
    }
    rows.sort(key=lambda row: order[row.entry])
    table = TheoremTable(rows=tuple(rows))
    if not table.passed:
        raise TheoremWitnessError(table)
    return table
