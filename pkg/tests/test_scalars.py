from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nilg2.scalars import (
    ParameterContext,
    ScalarError,
    ScalarSyntaxError,
    embed,
    evaluate,
    normalize,
)


@pytest.fixture(scope="module")
def ctx():
    return ParameterContext(("a1", "k", "lam", "z"))


def test_ring_commutativity_cancel(ctx):
    lam, k = ctx.param("lam"), ctx.param("k")
    assert (lam * k - k * lam).is_zero
    assert (lam ** 2 / 2) / (lam / 2) == lam
    assert (2 * k ** 2 * lam) / k == 2 * k * lam


def test_normalize_idempotent(ctx):
    s = ctx.parse("(lam^2 - k^2)/(lam + k)")
    assert s == ctx.parse("lam - k")
    assert normalize(s) == s
    assert normalize(normalize(s)) == normalize(s)


def test_monic_denominator(ctx):
    s = ctx.parse("lam/(2*z + 2*a1)")
    num, den = s.monic_parts()
    assert den == ctx.parse("z + a1")
    assert num == ctx.parse("lam/2")
    assert num / den == s


def test_evaluate_examples(ctx):
    assert evaluate(ctx.parse("lam^2/2"), {"lam": 2}) == Fraction(2)
    assert evaluate(ctx.parse("3/2*lam^2"), {"lam": 1}) == Fraction(3, 2)
    assert evaluate(ctx.parse("a1^2 + 2*z^2"), {"a1": 1, "z": 2}) == 9


def test_evaluate_errors(ctx):
    with pytest.raises(ScalarError):
        ctx.parse("lam + k").evaluate({"lam": 1})
    with pytest.raises(ScalarError):
        ctx.parse("1/(lam - 1)").evaluate({"lam": 1})


def test_division_by_zero(ctx):
    with pytest.raises(ScalarError, match="division by zero scalar"):
        ctx.one / ctx.zero
    with pytest.raises(ScalarError, match="division by zero scalar"):
        ctx.param("lam") / (ctx.param("k") - ctx.param("k"))


def test_unicode_aliases(ctx):
    assert ctx.parse("λ^2") == ctx.parse("lam^2")
    assert ctx.parse("a₁") == ctx.param("a1")


def test_reserved_names_rejected():
    with pytest.raises(ValueError):
        ParameterContext(("e12",))
    with pytest.raises(ValueError):
        ParameterContext(("dt",))
    with pytest.raises(ValueError):
        ParameterContext(("17",))


def test_parse_errors_carry_positions(ctx):
    with pytest.raises(ScalarSyntaxError) as err:
        ctx.parse("lam + ?")
    assert err.value.position == 6
    with pytest.raises(ScalarSyntaxError):
        ctx.parse("lam + unknown_par")
    with pytest.raises(ScalarSyntaxError):
        ctx.parse("(lam + 1")


def test_str_roundtrip(ctx):
    for text in ("lam", "-3/4", "lam^2/2 + k/3", "(3*lam^2 - 1)/(z + a1)",
                 "1/(k^2*lam)", "0", "a1*k*z"):
        s = ctx.parse(text)
        assert ctx.parse(str(s)) == s


def test_embed(ctx):
    small = ParameterContext(("lam",))
    big = ParameterContext(("lam", "t"))
    s = small.parse("3/2*lam^2 - 1/2")
    moved = embed(s, big)
    assert moved.evaluate({"lam": 2}) == s.evaluate({"lam": 2})
    with pytest.raises(ScalarError):
        embed(big.parse("t"), small)


small_fracs = st.fractions(
    min_value=Fraction(-8), max_value=Fraction(8), max_denominator=6
)


def _scalars(ctx):
    names = st.sampled_from(["lam", "k", "z", "a1"])

    def build(draw_result):
        coeff, name, exponent = draw_result
        base = ctx.scalar(coeff)
        if name is not None:
            base = base * ctx.param(name) ** exponent
        return base

    atoms = st.tuples(
        small_fracs, st.one_of(st.none(), names), st.integers(0, 2)
    ).map(build)
    return st.lists(atoms, min_size=1, max_size=3).map(
        lambda parts: sum(parts[1:], parts[0])
    )


@given(data=st.data())
def test_field_axioms(ctx, data):
    sc = _scalars(ctx)
    a, b, c = data.draw(sc), data.draw(sc), data.draw(sc)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == ctx.zero
    if not a.is_zero:
        assert a * (ctx.one / a) == ctx.one


@given(data=st.data())
def test_evaluate_is_ring_homomorphism(ctx, data):
    sc = _scalars(ctx)
    a, b = data.draw(sc), data.draw(sc)
    binding = {
        name: data.draw(small_fracs) for name in ("lam", "k", "z", "a1")
    }
    assert (a * b).evaluate(binding) == a.evaluate(binding) * b.evaluate(binding)
    assert (a + b).evaluate(binding) == a.evaluate(binding) + b.evaluate(binding)
