import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from nilg2.exterior import ComplexStructure, FrameContext, standard_su3_forms
from nilg2.families import family_context
from nilg2.liealg import BasisChange, parse_salamon
from nilg2.su3 import build_structure

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def pctx():
    return family_context()


@pytest.fixture(scope="session")
def frame6(pctx):
    return FrameContext(6, pctx)


@pytest.fixture(scope="session")
def frame7(pctx):
    return FrameContext(7, pctx)


@pytest.fixture(scope="session")
def std_forms(frame6):
    return standard_su3_forms(frame6)


@pytest.fixture(scope="session")
def J(frame6):
    return ComplexStructure(frame6)


@pytest.fixture(scope="session")
def iwasawa(pctx):
    return parse_salamon("0,0,0,0,13+42,14+23", pctx)


@pytest.fixture(scope="session")
def iwasawa_structure(pctx, iwasawa):
    adaptation = BasisChange.diagonal(pctx, [1, -1, 1, -1, 1, 1])
    return build_structure(iwasawa, adaptation)


def form_to_oracle(form, bindings=None):
    """Package form -> oracle dict, optionally binding parameters."""
    out = {}
    for indices, coeff in form.terms():
        value = coeff.evaluate(bindings or {})
        if value:
            out[indices] = value
    return out


def table_to_oracle(algebra, bindings=None):
    table = {}
    for i, f in enumerate(algebra.d_table, start=1):
        converted = form_to_oracle(f, bindings)
        if converted:
            table[i] = converted
    return table
