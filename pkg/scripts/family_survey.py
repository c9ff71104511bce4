#!/usr/bin/env python3
"""Survey the classified families symbolically: torsion data per family.

Run from the repository root:  python scripts/family_survey.py
"""

from nilg2.exterior import form_str
from nilg2.families import FAMILIES, family_context, instantiate
from nilg2.g2 import build_product, dT_tests, strong_eigen_check, torsion
from nilg2.liealg import BasisChange, parse_salamon, salamon_str
from nilg2.su3 import build_structure, is_half_integrable, laplacian, torsion_classes


def survey_family(name: str) -> None:
    algebra, structure = instantiate(name)
    print(f"== {name}: ({salamon_str(algebra)})")
    classes = torsion_classes(structure)
    print(f"   half-integrable: {is_half_integrable(structure)}")
    print(f"   W1- = {classes.W1m}   (lam = {classes.lam})")
    product = build_product(structure)
    report = dT_tests(product, torsion(product))
    print(f"   theta = {form_str(report.theta)}")
    print(f"   T     = {form_str(report.T)}")
    print(f"   dT    = {form_str(report.dT)}")
    print(f"   d*T   = {form_str(report.d_star_T)}")
    print(f"   type(2,2): {report.dT_type_22}   V7-free: {report.dT_in_R_plus_S2}"
          f"   strong: {report.is_strong}")
    eigen = strong_eigen_check(product)
    delta = laplacian(structure, structure.omega)
    print(f"   Delta omega = {form_str(delta)}"
          + (f"   (eigenvalue {eigen})" if eigen is not None else ""))
    print()


def survey_heisenberg_example() -> None:
    ctx = family_context()
    algebra = parse_salamon("0,0,0,0,13+42,14+23", ctx)
    adaptation = BasisChange.diagonal(ctx, [1, -1, 1, -1, 1, 1])
    structure = build_structure(algebra, adaptation)
    product = build_product(structure)
    report = dT_tests(product, torsion(product))
    print("== complex Heisenberg nilmanifold (cocalibrated, not half-integrable)")
    print(f"   d psi+ = {form_str(structure.d(structure.psi_plus))}")
    print(f"   d omega = {form_str(structure.d(structure.omega))}")
    print(f"   <dphi, *phi> = {report.inner_dphi_starphi}")
    print(f"   T  = {form_str(report.T)}")
    print(f"   dT = {form_str(report.dT)}")
    print()


if __name__ == "__main__":
    survey_heisenberg_example()
    for name in sorted(FAMILIES):
        survey_family(name)
