"""SU(3)-structures on six-dimensional nilpotent Lie algebras.

A structure is an algebra together with an orthogonal, orientation-preserving
coframe adaptation in which the defining forms take the standard shape
omega = e12 + e34 + e56, psi_plus + i psi_minus = (e1+ie2)(e3+ie4)(e5+ie6).
All geometric operations run in the adapted coframe, where the declared
metric is the flat one.

Intrinsic torsion conventions pinned here (see the class relations below):

* dpsi+ = beta ^ psi+ + W2p ^ omega + W1p omega^2 and
  dpsi- = beta ^ psi- + W2m ^ omega + W1m omega^2 share the same 1-form
  slot coefficient: the Lambda^{3,1}+Lambda^{1,3} parts of dPsi are locked
  together (dPsi has no (1,3) component), so both extractions must agree;
  this common 1-form is the Lee form beta.
* W4 = (1/4) omega _| d omega and W5 = (1/4) psi+ _| dpsi+ with the
  metric-adjoint contraction; with these normalizations the torsion
  equations imply W4 = beta/4, W5 = -beta/2, i.e. W5 = -2 W4 and
  beta = -2 W5.
* lambda is read off as 2 W1m when not supplied externally.

The displayed expansion of d omega used throughout is
d omega = (1/2) beta ^ omega + Omega + nu_plus psi+ + nu_minus psi- with
Omega the primitive (2,1)+(1,2) part, nu_plus = -(3/4) lambda and
nu_minus = (3/2) W1p.  (A common alternative display drops the Omega
symbol; the primitive part is what is meant.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .exterior import (
    ComplexStructure,
    ExteriorError,
    Form,
    hodge,
    interior,
    j_apply,
    lefschetz_coefficients,
    standard_su3_forms,
)
from .liealg import BasisChange, LieAlgebra, change_basis
from .scalars import Scalar

__all__ = [
    "SU3Structure",
    "TorsionClasses",
    "StructureError",
    "build_structure",
    "standard_structure",
    "torsion_classes",
    "is_half_integrable",
    "g2t_residual",
    "skt_check",
    "codifferential",
    "laplacian",
]


class StructureError(ValueError):
    pass


@dataclass(frozen=True)
class SU3Structure:
    """An algebra with an adapted orthonormal coframe carrying the standard forms."""

    algebra: LieAlgebra
    adaptation: BasisChange
    adapted: LieAlgebra
    omega: Form
    psi_plus: Form
    psi_minus: Form
    J: ComplexStructure

    def d(self, a: Form) -> Form:
        return self.adapted.d(a)


def build_structure(g: LieAlgebra, adaptation: BasisChange) -> SU3Structure:
    """Adapt the algebra; the adaptation must be orthogonal and orientation-preserving.

    The compatibility anchor is checked in the presentation coframe: the
    pulled-back volume identity psi+ ^ psi- = 4 e^{123456} must hold with the
    positive orientation (a sign flip of a single coframe axis reverses it and
    is rejected, with the residual reported).
    """
    if g.ctx.dim != 6:
        raise StructureError("SU(3)-structures require a 6-dimensional algebra")
    if adaptation.dim != 6:
        raise StructureError("adaptation must be a 6x6 basis change")
    if not adaptation.is_orthogonal():
        raise StructureError("adaptation is not orthogonal under the declared metric")
    ctx = g.ctx
    omega, psi_plus, psi_minus = standard_su3_forms(ctx)
    # forms as seen in the presentation coframe
    om_pres = adaptation.pull_standard(omega)
    psip_pres = adaptation.pull_standard(psi_plus)
    psim_pres = adaptation.pull_standard(psi_minus)
    volume = ctx.volume().scale(4)
    residual = psip_pres.wedge(psim_pres) - volume
    if not residual.is_zero:
        raise StructureError(
            f"compatibility failure: psi+ ^ psi- - (2/3) omega^3 residual {residual}"
        )
    compat = psip_pres.wedge(psim_pres) - om_pres.wedge(om_pres).wedge(om_pres).scale(
        Fraction(2, 3)
    )
    if not compat.is_zero:
        raise StructureError(f"compatibility failure: residual {compat}")
    adapted = change_basis(g, adaptation)
    return SU3Structure(
        algebra=g,
        adaptation=adaptation,
        adapted=adapted,
        omega=omega,
        psi_plus=psi_plus,
        psi_minus=psi_minus,
        J=ComplexStructure(ctx),
    )


def standard_structure(g: LieAlgebra) -> SU3Structure:
    """The structure whose adapted coframe is the presentation coframe itself."""
    return build_structure(g, BasisChange.identity(g.ctx.params, 6))


# ---------------------------------------------------------------------------
# intrinsic torsion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorsionClasses:
    W1p: Scalar
    W1m: Scalar
    W2p: Form
    W2m: Form
    Omega: Form            # the primitive (2,1)+(1,2) component of d omega
    W4: Form
    W5: Form
    beta: Form             # Lee form; equals the common psi-slot 1-form
    vartheta: Form         # six-dimensional Lee form -J d* omega
    lam: Scalar            # 2 W1m

    @property
    def nu_plus(self) -> Scalar:
        return -self.lam * Fraction(3, 4)

    @property
    def nu_minus(self) -> Scalar:
        return self.W1p * Fraction(3, 2)


def torsion_classes(s: SU3Structure) -> TorsionClasses:
    ctx = s.omega.ctx
    pctx = ctx.params
    om, psip, psim = s.omega, s.psi_plus, s.psi_minus
    d_om = s.d(om)
    d_psip = s.d(psip)
    d_psim = s.d(psim)
    om3 = om.wedge(om).wedge(om)

    # W1 via dpsi ^ omega = W1 omega^3 (coefficient of the volume over 6)
    vol_mask = ctx.full_mask
    W1p = d_psip.wedge(om).comps.get(vol_mask, pctx.zero) / 6
    W1m = d_psim.wedge(om).comps.get(vol_mask, pctx.zero) / 6

    try:
        c_plus, gamma_plus, W2p = lefschetz_coefficients(d_psip, om, psip, psim, slot="plus")
        c_minus, gamma_minus, W2m = lefschetz_coefficients(d_psim, om, psip, psim, slot="minus")
    except ExteriorError as exc:
        raise StructureError(f"dpsi outside SU(3) module: {exc}") from None
    if c_plus != W1p or c_minus != W1m:
        raise StructureError("inconsistent W1 extraction (convention bug)")
    if gamma_plus != gamma_minus:
        raise StructureError(
            "psi-slot 1-forms of dpsi+ and dpsi- disagree (convention bug)"
        )
    beta = gamma_plus

    quarter = pctx.scalar(Fraction(1, 4))
    W4 = interior(om, d_om).scale(quarter)
    W5 = interior(psip, d_psip).scale(quarter)
    if W5 != beta.scale(Fraction(-1, 2)):
        raise StructureError("W5 does not match the Lee form channel (convention bug)")

    lam = W1m * 2
    nu_plus = -lam * Fraction(3, 4)
    nu_minus = W1p * Fraction(3, 2)
    Omega = (
        d_om
        - beta.wedge(om).scale(Fraction(1, 2))
        - psip.scale(nu_plus)
        - psim.scale(nu_minus)
    )
    if not Omega.wedge(om).is_zero:
        raise StructureError("W3 component is not primitive (convention bug)")

    vartheta = -j_apply(s.J, codifferential(s, om))
    return TorsionClasses(
        W1p=W1p,
        W1m=W1m,
        W2p=W2p,
        W2m=W2m,
        Omega=Omega,
        W4=W4,
        W5=W5,
        beta=beta,
        vartheta=vartheta,
        lam=lam,
    )


def is_half_integrable(s: SU3Structure) -> bool:
    """True iff dpsi+ = 0 and d(omega^2) = 0, exactly."""
    if not s.d(s.psi_plus).is_zero:
        return False
    return s.d(s.omega.wedge(s.omega)).is_zero


def g2t_residual(s: SU3Structure, lam: Scalar, beta: Form) -> Tuple[Form, Form]:
    """Residuals of dpsi- = beta^psi- + (lam/2) omega^2 and om^dom = (1/2) beta^om^2."""
    om2 = s.omega.wedge(s.omega)
    first = s.d(s.psi_minus) - beta.wedge(s.psi_minus) - om2.scale(lam * Fraction(1, 2))
    second = s.omega.wedge(s.d(s.omega)) - beta.wedge(om2).scale(Fraction(1, 2))
    return first, second


def skt_check(s: SU3Structure) -> Form:
    """d(J d omega); vanishes exactly when the structure is strong KT."""
    return s.d(j_apply(s.J, s.d(s.omega)))


def codifferential(s: SU3Structure, a: Form) -> Form:
    """d* = -*d* (uniform sign in six dimensions)."""
    return -hodge(s.d(hodge(a)))


def laplacian(s: SU3Structure, a: Form) -> Form:
    """Hodge Laplacian d d* + d* d on a homogeneous invariant form."""
    a.homogeneous_grade()
    return s.d(codifferential(s, a)) + codifferential(s, s.d(a))


# ---------------------------------------------------------------------------
# structure description files
# ---------------------------------------------------------------------------


def load_structure_file(path, params) -> Tuple[SU3Structure, dict]:
    """Read a structure description: [algebra], optional [adaptation], [params].

    Returns the structure and the parameter bindings (name -> Fraction).
    """
    from .liealg import parse_salamon

    sections: dict = {}
    current: Optional[str] = None
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                current = line[1:-1].strip().lower()
                sections[current] = []
                continue
            if current is None:
                raise StructureError(f"content before any section header: {line!r}")
            sections[current].append(line)
    if "algebra" not in sections or not sections["algebra"]:
        raise StructureError("missing [algebra] section")
    algebra = parse_salamon(" ".join(sections["algebra"]), params, dim=6)
    if "adaptation" in sections and sections["adaptation"]:
        rows = []
        for line in sections["adaptation"]:
            parts = [p for chunk in line.split(",") for p in chunk.split()]
            rows.append([params.parse(p) for p in parts])
        if len(rows) != 6 or any(len(r) != 6 for r in rows):
            raise StructureError("[adaptation] must contain a 6x6 matrix")
        adaptation = BasisChange(params, rows)
    else:
        adaptation = BasisChange.identity(params, 6)
    bindings = {}
    for line in sections.get("params", []):
        if "=" not in line:
            raise StructureError(f"bad [params] line: {line!r}")
        name, value = line.split("=", 1)
        bindings[name.strip()] = params.parse(value.strip())
    frac_bindings = {}
    for name, scalar in bindings.items():
        frac_bindings[name] = scalar.as_fraction()
    return build_structure(algebra, adaptation), frac_bindings
