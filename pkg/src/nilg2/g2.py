"""The product G2-structure on (nilmanifold) x S^1 and its skew torsion.

With base forms (omega, psi+, psi-) and the closed circle coordinate dt as
the seventh coframe element, phi = omega ^ dt + psi+ and
*phi = psi- ^ dt + (1/2) omega ^ omega (verified at build time; this pins
the orientation convention).

The torsion 3-form of the unique metric connection preserving phi with
totally skew torsion is computed two ways and cross-checked:

* route A:  T = (1/6) <dphi, *phi> phi - *dphi + *(theta ^ phi), with the
  Lee form theta solved exactly from d*phi = theta ^ *phi;
* route B, from the six-dimensional torsion components:
  T = *6 d omega - *6 (beta ^ omega) + 2 W1p psi+ + lambda psi-
      - [*6 (W2p ^ omega)] ^ dt.

Route A is validated in the test suite against an independent oracle that
solves the connection equations directly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import linalg
from .exterior import (
    Form,
    FrameContext,
    hodge,
    inner,
    interior,
    type_decompose,
)
from .liealg import LieAlgebra
from .scalars import Scalar
from .su3 import SU3Structure, is_half_integrable, laplacian, torsion_classes

__all__ = [
    "G2Structure",
    "TorsionReport",
    "G2Error",
    "build_product",
    "extract_theta",
    "torsion",
    "dT_tests",
    "strong_eigen_check",
]


class G2Error(ValueError):
    def __init__(self, message: str, residual: Optional[Form] = None):
        super().__init__(message if residual is None else f"{message}; residual {residual}")
        self.residual = residual


def lift(a: Form, ctx7: FrameContext) -> Form:
    """A 6-dimensional form viewed on the product."""
    return Form(ctx7, dict(a.comps))


def drop_dt(a: Form, ctx6: FrameContext) -> Tuple[Form, Form]:
    """Split a product form as pure + (rest ^ dt); both returned on the base."""
    dt_bit = 1 << 6
    pure: Dict[int, Scalar] = {}
    rest: Dict[int, Scalar] = {}
    for m, c in a.comps.items():
        if m & dt_bit:
            rest[m & ~dt_bit] = c
        else:
            pure[m] = c
    return Form(ctx6, pure), Form(ctx6, rest)


@dataclass(frozen=True)
class G2Structure:
    base: SU3Structure
    product: LieAlgebra           # seven-dimensional, d(dt) = 0
    phi: Form
    star_phi: Form
    dt: Form

    @property
    def ctx(self) -> FrameContext:
        return self.phi.ctx

    def d(self, a: Form) -> Form:
        return self.product.d(a)


@dataclass(frozen=True)
class TorsionReport:
    T: Form
    star_T: Form
    dT: Form
    d_star_T: Form
    inner_dphi_starphi: Scalar
    theta: Form
    lam: Scalar
    beta: Form
    is_strong: Optional[bool] = None
    dT_type_22: Optional[bool] = None
    dT_in_R_plus_S2: Optional[bool] = None


def build_product(s: SU3Structure) -> G2Structure:
    ctx6 = s.omega.ctx
    ctx7 = FrameContext(7, ctx6.params)
    d_table = [lift(f, ctx7) for f in s.adapted.d_table] + [ctx7.zero_form()]
    # nilpotency is inherited from the (already verified) base algebra
    product = LieAlgebra(ctx7, d_table, require_nilpotent=False)
    dt = ctx7.basis(7)
    phi = lift(s.omega, ctx7).wedge(dt) + lift(s.psi_plus, ctx7)
    om7 = lift(s.omega, ctx7)
    expected = lift(s.psi_minus, ctx7).wedge(dt) + om7.wedge(om7).scale(Fraction(1, 2))
    star_phi = hodge(phi)
    if star_phi != expected:
        raise G2Error("orientation convention broken: *phi mismatch", star_phi - expected)
    return G2Structure(base=s, product=product, phi=phi, star_phi=star_phi, dt=dt)


def extract_theta(g: G2Structure) -> Form:
    """The unique 1-form with d*phi = theta ^ *phi, solved exactly.

    Raises G2Error with the residual 5-form when no solution exists
    (the structure is then not of skew-torsion type); asserts d theta = 0
    on success.
    """
    ctx = g.ctx
    pctx = ctx.params
    target = g.d(g.star_phi)
    columns = [ctx.basis(i).wedge(g.star_phi) for i in range(1, 8)]
    masks = sorted(
        set().union(*[set(c.comps) for c in columns], set(target.comps))
    )
    rows = [[col.comps.get(m, pctx.zero) for col in columns] for m in masks]
    rhs = [target.comps.get(m, pctx.zero) for m in masks]
    sol = linalg.solve(rows, rhs, pctx)
    if sol is None:
        # best-effort witness for the error report
        red, pivots = linalg.rref([r + [b] for r, b in zip(rows, rhs)], pctx)
        attempt = [pctx.zero] * 7
        for r, pc in enumerate(pivots):
            if pc < 7:
                attempt[pc] = red[r][7]
        theta_try = Form(ctx, {1 << i: attempt[i] for i in range(7)})
        residual = target - theta_try.wedge(g.star_phi)
        raise G2Error("not a G2T-structure", residual)
    theta = Form(ctx, {1 << i: sol[i] for i in range(7)})
    if not g.d(theta).is_zero:
        raise G2Error("extracted Lee form is not closed (convention bug)", g.d(theta))
    return theta


def torsion(g: G2Structure) -> TorsionReport:
    """The skew torsion 3-form, its star and exterior derivatives.

    Both computation routes must agree exactly; a mismatch raises with the
    difference form.
    """
    ctx7 = g.ctx
    ctx6 = g.base.omega.ctx
    pctx = ctx7.params
    theta = extract_theta(g)
    lam = theta.coefficient(7)
    beta6 = Form(ctx6, {m: c for m, c in theta.comps.items() if not m & (1 << 6)})

    dphi = g.d(g.phi)
    pairing = inner(dphi, g.star_phi)
    T = (
        g.phi.scale(pairing * Fraction(1, 6))
        - hodge(dphi)
        + hodge(theta.wedge(g.phi))
    )

    classes = torsion_classes(g.base)
    if classes.beta != beta6:
        raise G2Error("Lee form mismatch between theta and the base torsion classes")
    if pairing != classes.W1p * 12:
        raise G2Error("<dphi, *phi> != 12 W1+ (convention bug)")
    s = g.base
    route_b_pure = (
        hodge(s.d(s.omega))
        - hodge(classes.beta.wedge(s.omega))
        + s.psi_plus.scale(classes.W1p * 2)
        + s.psi_minus.scale(lam)
    )
    route_b = lift(route_b_pure, ctx7) - lift(
        hodge(classes.W2p.wedge(s.omega)), ctx7
    ).wedge(g.dt)
    if T != route_b:
        raise G2Error("torsion route disagreement", T - route_b)

    star_T = hodge(T)
    dT = g.d(T)
    d_star_T = g.d(star_T)
    return TorsionReport(
        T=T,
        star_T=star_T,
        dT=dT,
        d_star_T=d_star_T,
        inner_dphi_starphi=pairing,
        theta=theta,
        lam=lam,
        beta=beta6,
    )


def _v7_projector_forms(g: G2Structure):
    """The seven forms e^i ^ phi; verified independent with diagonal Gram."""
    ctx = g.ctx
    pctx = ctx.params
    forms = [ctx.basis(i).wedge(g.phi) for i in range(1, 8)]
    gram_diag = None
    for i, fi in enumerate(forms):
        for j in range(i, len(forms)):
            val = inner(fi, forms[j])
            if i == j:
                if gram_diag is None:
                    gram_diag = val
                elif val != gram_diag:
                    raise G2Error("V7 projector Gram is not a multiple of identity")
            elif not val.is_zero:
                raise G2Error("V7 projector forms are not orthogonal")
    if gram_diag is None or gram_diag.is_zero:
        raise G2Error("V7 projector forms are degenerate")
    return forms


def dT_tests(g: G2Structure, report: TorsionReport) -> TorsionReport:
    """Fill the representation-theoretic flags of the report."""
    ctx6 = g.base.omega.ctx
    pure, rest = drop_dt(report.dT, ctx6)

    # (2,2)-ness: the derivative must live on the base and be pure type (2,2)
    if not rest.is_zero:
        type22 = False
    elif pure.is_zero:
        type22 = True
    else:
        parts = type_decompose(pure, g.base.J)
        type22 = set(parts) == {(2, 2)}

    # V7-component: <dT, e^i ^ phi> = 0 for all i
    projector = _v7_projector_forms(g)
    in_r_s2 = all(inner(report.dT, p).is_zero for p in projector)

    # sanity identity behind the statement: (X _| *phi) ^ omega^2 = 0
    om7 = lift(g.base.omega, g.ctx)
    om7_sq = om7.wedge(om7)
    for i in range(1, 8):
        contracted = interior(g.ctx.basis(i), g.star_phi)
        if not contracted.wedge(om7_sq).is_zero:
            raise G2Error("(X _| *phi) ^ omega^2 != 0 (convention bug)")

    return dataclasses.replace(
        report,
        is_strong=report.dT.is_zero,
        dT_type_22=type22,
        dT_in_R_plus_S2=in_r_s2,
    )


def strong_eigen_check(g: G2Structure) -> Optional[Scalar]:
    """Laplace eigenvalue of omega when omega is an exact eigenform.

    For a closed torsion form the declared eigenvalue lambda^2/2 is asserted
    and returned; otherwise the eigenvalue is returned only when Delta omega
    is exactly proportional to omega, else None.
    """
    if not is_half_integrable(g.base):
        raise G2Error("strong_eigen_check requires a half-integrable base")
    report = torsion(g)
    delta_omega = laplacian(g.base, g.base.omega)
    lam = report.lam
    if report.dT.is_zero:
        expected = lam * lam * Fraction(1, 2)
        if delta_omega != g.base.omega.scale(expected):
            raise G2Error(
                "closed torsion but Delta omega != (lambda^2/2) omega",
                delta_omega - g.base.omega.scale(expected),
            )
        return expected
    if delta_omega.is_zero:
        return g.ctx.params.zero
    # proportionality test against omega
    coeff = delta_omega.coefficient(1, 2)
    if delta_omega == g.base.omega.scale(coeff):
        return coeff
    return None
