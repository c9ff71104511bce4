"""Exterior algebra over an orthonormal coframe in dimension 6 or 7.

Forms are sparse maps from index subsets (stored as bitmasks, index ``i`` at
bit ``i-1``) to scalars.  The positively oriented volume form is
``e^{1...n}``; in dimension 7 the seventh coframe element is ``dt`` and all
product formulas in this package write it as the last factor.

Conventions fixed here (and pinned by tests):

* Hodge star: ``*e^I = sign(I, I^c) e^{I^c}`` with the permutation-parity
  sign of the concatenation ``(I, I^c)`` relative to ``(1..n)``; this gives
  ``a ^ *b = <a,b> vol`` on orthonormal monomials.
* Inner product: ``<e^I, e^J> = delta_IJ``, bilinear.
* Almost complex structure on 1-forms: ``J e^{2m-1} = -e^{2m}``,
  ``J e^{2m} = e^{2m-1}``; its factor-wise extension sends the standard
  ``psi_plus`` to ``psi_minus``.
* Contraction is metric-adjoint: ``<x _| a, b> = <a, x ^ b>``.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .scalars import (
    ParameterContext,
    Scalar,
    _fold_unicode,
)

__all__ = [
    "FrameContext",
    "Form",
    "ComplexStructure",
    "ExteriorError",
    "wedge",
    "hodge",
    "inner",
    "interior",
    "j_apply",
    "type_decompose",
    "lefschetz_coefficients",
    "parse_form",
    "standard_su3_forms",
]


class ExteriorError(ValueError):
    """Contract violations: context mismatch, grade errors, module errors."""


def _bits(mask: int) -> List[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _mask(indices: Iterable[int]) -> Tuple[int, int]:
    """(sign, bitmask) of a possibly unsorted index word; sign 0 on repeats."""
    sign = 1
    mask = 0
    seen: List[int] = []
    for idx in indices:
        bit = 1 << (idx - 1)
        if mask & bit:
            return 0, 0
        # count already-placed indices greater than idx
        higher = mask >> idx
        sign *= -1 if bin(higher).count("1") % 2 else 1
        mask |= bit
        seen.append(idx)
    return sign, mask


def _merge_sign(a: int, b: int) -> int:
    """Parity sign of sorting the concatenation (bits of a, bits of b)."""
    inversions = 0
    bb = b
    while bb:
        low = bb & -bb
        pos = low.bit_length()  # index value
        inversions += bin(a >> pos).count("1")
        bb ^= low
    return -1 if inversions % 2 else 1


class FrameContext:
    """An orthonormal coframe e^1..e^n, n in {6, 7}; for n = 7, e^7 = dt."""

    __slots__ = ("dim", "params", "full_mask")

    def __init__(self, dim: int, params: ParameterContext):
        if dim not in (6, 7):
            raise ExteriorError(f"frame dimension must be 6 or 7, got {dim}")
        self.dim = dim
        self.params = params
        self.full_mask = (1 << dim) - 1

    def __eq__(self, other):
        return (
            isinstance(other, FrameContext)
            and self.dim == other.dim
            and self.params is other.params
        )

    def __hash__(self):
        return hash((self.dim, self.params.names))

    def __repr__(self):
        return f"FrameContext(dim={self.dim})"

    def zero_form(self) -> "Form":
        return Form(self, {})

    def basis(self, *indices: int) -> "Form":
        for idx in indices:
            if not 1 <= idx <= self.dim:
                raise ExteriorError(f"index {idx} out of range for dim {self.dim}")
        sign, mask = _mask(indices)
        if sign == 0:
            return self.zero_form()
        coeff = self.params.one if sign == 1 else -self.params.one
        return Form(self, {mask: coeff})

    def volume(self) -> "Form":
        return Form(self, {self.full_mask: self.params.one})


class Form:
    """A sparse exterior form; mixed grades are allowed."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: FrameContext, comps: Mapping[int, Scalar]):
        self.ctx = ctx
        self.comps = {m: c for m, c in comps.items() if not c.is_zero}

    # -- basic structure ----------------------------------------------------

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({bin(m).count("1") for m in self.comps}))

    @property
    def is_zero(self) -> bool:
        return not self.comps

    def homogeneous_grade(self) -> Optional[int]:
        """The grade if homogeneous (None for the zero form); error if mixed."""
        gs = self.grades()
        if len(gs) > 1:
            raise ExteriorError(f"mixed-grade form (grades {gs})")
        return gs[0] if gs else None

    def coefficient(self, *indices: int) -> Scalar:
        sign, mask = _mask(indices)
        if sign == 0:
            return self.ctx.params.zero
        c = self.comps.get(mask)
        if c is None:
            return self.ctx.params.zero
        return c if sign == 1 else -c

    def items(self):
        """Deterministic iteration: ascending bitmask."""
        return [(m, self.comps[m]) for m in sorted(self.comps)]

    def terms(self) -> List[Tuple[Tuple[int, ...], Scalar]]:
        return [(tuple(_bits(m)), c) for m, c in self.items()]

    # -- ring operations ----------------------------------------------------

    def _require_same(self, other: "Form"):
        if self.ctx != other.ctx:
            raise ExteriorError("frame context mismatch")

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        self._require_same(other)
        comps = dict(self.comps)
        for m, c in other.comps.items():
            prev = comps.get(m)
            comps[m] = c if prev is None else prev + c
        return Form(self.ctx, comps)

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.ctx, {m: -c for m, c in self.comps.items()})

    def scale(self, factor) -> "Form":
        factor = self.ctx.params.scalar(factor) if not isinstance(factor, Scalar) else factor
        return Form(self.ctx, {m: c * factor for m, c in self.comps.items()})

    def __mul__(self, factor):
        if isinstance(factor, (int, Fraction, Scalar)):
            return self.scale(factor)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash((self.ctx, tuple(sorted((m, c) for m, c in self.comps.items()))))

    def wedge(self, other: "Form") -> "Form":
        self._require_same(other)
        comps: Dict[int, Scalar] = {}
        for ma, ca in self.comps.items():
            for mb, cb in other.comps.items():
                if ma & mb:
                    continue
                sign = _merge_sign(ma, mb)
                m = ma | mb
                term = ca * cb
                if sign < 0:
                    term = -term
                prev = comps.get(m)
                comps[m] = term if prev is None else prev + term
        return Form(self.ctx, comps)

    def evaluate(self, bindings) -> "Form":
        """Bind parameters, producing a form over the empty parameter context."""
        target = ParameterContext(())
        out: Dict[int, Scalar] = {}
        for m, c in self.comps.items():
            out[m] = target.scalar(c.evaluate(bindings))
        return Form(FrameContext(self.ctx.dim, target), out)

    def embed(self, target_params: ParameterContext) -> "Form":
        """Re-express coefficients in a larger parameter context."""
        from .scalars import embed as embed_scalar

        ctx = FrameContext(self.ctx.dim, target_params)
        return Form(ctx, {m: embed_scalar(c, target_params) for m, c in self.comps.items()})

    def __str__(self):
        return form_str(self)

    def __repr__(self):
        return f"Form({form_str(self)})"


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------


def wedge(a: Form, b: Form) -> Form:
    return a.wedge(b)


def hodge(a: Form) -> Form:
    """Hodge star; requires a homogeneous form."""
    a.homogeneous_grade()
    full = a.ctx.full_mask
    comps: Dict[int, Scalar] = {}
    for m, c in a.comps.items():
        comp = full & ~m
        sign = _merge_sign(m, comp)
        comps[comp] = c if sign == 1 else -c
    return Form(a.ctx, comps)


def inner(a: Form, b: Form) -> Scalar:
    """<a, b> with orthonormal monomials; grades pair off diagonally."""
    if a.ctx != b.ctx:
        raise ExteriorError("frame context mismatch")
    total = a.ctx.params.zero
    small, large = (a, b) if len(a.comps) <= len(b.comps) else (b, a)
    for m, c in small.comps.items():
        other = large.comps.get(m)
        if other is not None:
            total = total + c * other
    return total


def interior(x: Form, a: Form) -> Form:
    """Metric contraction x _| a defined by <x _| a, d> = <a, x ^ d>."""
    if x.ctx != a.ctx:
        raise ExteriorError("frame context mismatch")
    gx, ga = x.homogeneous_grade(), a.homogeneous_grade()
    if gx is None or ga is None:
        return a.ctx.zero_form()
    if ga < gx:
        raise ExteriorError("cannot contract: form degree lower than contractor")
    comps: Dict[int, Scalar] = {}
    for mx, cx in x.comps.items():
        for ma, ca in a.comps.items():
            if mx & ma != mx:
                continue
            rest = ma & ~mx
            sign = _merge_sign(mx, rest)
            term = cx * ca
            if sign < 0:
                term = -term
            prev = comps.get(rest)
            comps[rest] = term if prev is None else prev + term
    return Form(a.ctx, comps)


class ComplexStructure:
    """The standard orthogonal almost complex structure on a 6d frame.

    Acts on the coframe by J e^{2m-1} = -e^{2m}, J e^{2m} = e^{2m-1}; the
    grade-k extension applies J to every slot.
    """

    __slots__ = ("ctx",)

    def __init__(self, ctx: FrameContext):
        if ctx.dim != 6:
            raise ExteriorError("complex structure requires a 6-dimensional frame")
        self.ctx = ctx

    def on_index(self, idx: int) -> Tuple[int, int]:
        """(sign, image index) of J e^idx."""
        if idx % 2 == 1:
            return -1, idx + 1
        return 1, idx - 1

    def __call__(self, a: Form) -> Form:
        return j_apply(self, a)

    def __eq__(self, other):
        return isinstance(other, ComplexStructure) and self.ctx == other.ctx

    def __hash__(self):
        return hash(("J", self.ctx))


def j_apply(J: ComplexStructure, a: Form) -> Form:
    if a.ctx != J.ctx:
        raise ExteriorError("frame context mismatch")
    comps: Dict[int, Scalar] = {}
    for m, c in a.comps.items():
        sign = 1
        images = []
        for idx in _bits(m):
            s, im = J.on_index(idx)
            sign *= s
            images.append(im)
        psign, pmask = _mask(images)
        if psign == 0:
            continue
        total = sign * psign
        term = c if total == 1 else -c
        prev = comps.get(pmask)
        comps[pmask] = term if prev is None else prev + term
    return Form(a.ctx, comps)


# ---------------------------------------------------------------------------
# type decomposition
# ---------------------------------------------------------------------------


def _complex_expand(a: Form):
    """Rewrite in the basis alpha^m = e^{2m-1} + i e^{2m} and conjugates.

    Returns a dict keyed by (alpha mask, bar mask) over {1,2,3} (bit m-1 for
    line m), values (re, im) scalar pairs.  Factor order is all alphas
    ascending, then all bars ascending.
    """
    ctx = a.ctx
    zero = ctx.params.zero
    half = ctx.params.scalar(Fraction(1, 2))

    out: Dict[Tuple[int, int], Tuple[Scalar, Scalar]] = {}

    for m, c in a.comps.items():
        # words: list of (alpha_mask, bar_mask, (re, im))
        words = [(0, 0, (c, zero))]
        for idx in _bits(m):
            line = (idx + 1) // 2
            bit = 1 << (line - 1)
            new_words = []
            if idx % 2 == 1:
                # e^{2m-1} = (alpha + bar)/2
                options = [("a", (half, zero)), ("b", (half, zero))]
            else:
                # e^{2m} = -i/2 alpha + i/2 bar
                options = [("a", (zero, -half)), ("b", (zero, half))]
            for amask, bmask, (re, im) in words:
                for which, (fr, fi) in options:
                    if which == "a":
                        if amask & bit:
                            continue
                        # append alpha^line: move left past all bars and greater alphas
                        swaps = bin(bmask).count("1") + bin(amask >> line).count("1")
                        namask, nbmask = amask | bit, bmask
                    else:
                        if bmask & bit:
                            continue
                        swaps = bin(bmask >> line).count("1")
                        namask, nbmask = amask, bmask | bit
                    sgn = -1 if swaps % 2 else 1
                    nre = re * fr - im * fi
                    nim = re * fi + im * fr
                    if sgn < 0:
                        nre, nim = -nre, -nim
                    new_words.append((namask, nbmask, (nre, nim)))
            words = new_words
        for amask, bmask, (re, im) in words:
            pre, pim = out.get((amask, bmask), (zero, zero))
            out[(amask, bmask)] = (pre + re, pim + im)
    return {k: v for k, v in out.items() if not (v[0].is_zero and v[1].is_zero)}


def _complex_contract(ctx: FrameContext, bucket) -> Tuple[Form, Form]:
    """Expand alpha-basis words back to the real coframe; (real, imag) forms."""
    zero = ctx.params.zero
    one = ctx.params.one
    re_comps: Dict[int, Scalar] = {}
    im_comps: Dict[int, Scalar] = {}
    for (amask, bmask), (cre, cim) in bucket.items():
        words = [(0, (cre, cim))]
        factors = [("a", line + 1) for line in range(3) if amask & (1 << line)]
        factors += [("b", line + 1) for line in range(3) if bmask & (1 << line)]
        for which, line in factors:
            odd_idx, even_idx = 2 * line - 1, 2 * line
            sign_i = one if which == "a" else -one
            new_words = []
            for mask, (re, im) in words:
                for idx, (fr, fi) in ((odd_idx, (one, zero)), (even_idx, (zero, sign_i))):
                    bit = 1 << (idx - 1)
                    if mask & bit:
                        continue
                    swaps = bin(mask >> idx).count("1")
                    sgn = -1 if swaps % 2 else 1
                    nre = re * fr - im * fi
                    nim = re * fi + im * fr
                    if sgn < 0:
                        nre, nim = -nre, -nim
                    new_words.append((mask | bit, (nre, nim)))
            words = new_words
        for mask, (re, im) in words:
            if not re.is_zero:
                re_comps[mask] = re_comps.get(mask, zero) + re
            if not im.is_zero:
                im_comps[mask] = im_comps.get(mask, zero) + im
    return Form(ctx, re_comps), Form(ctx, im_comps)


def type_decompose(a: Form, J: ComplexStructure) -> Dict[Tuple[int, int], Form]:
    """Split a real homogeneous form by complex type.

    Returns real forms keyed by (p, q) with p >= q; the key (p, q) with
    p > q carries the combined (p,q)+(q,p) real part.  The values sum to
    the input.
    """
    if a.ctx != J.ctx:
        raise ExteriorError("frame context mismatch")
    grade = a.homogeneous_grade()
    if grade is None:
        return {}
    expanded = _complex_expand(a)
    buckets: Dict[Tuple[int, int], Dict] = {}
    for (amask, bmask), coeff in expanded.items():
        p, q = bin(amask).count("1"), bin(bmask).count("1")
        key = (p, q) if p >= q else (q, p)
        if (p, q) != key:
            continue  # the conjugate bucket carries the same real content
        buckets.setdefault(key, {})[(amask, bmask)] = coeff
    out: Dict[Tuple[int, int], Form] = {}
    for (p, q), bucket in sorted(buckets.items()):
        re, im = _complex_contract(a.ctx, bucket)
        if p == q:
            if not im.is_zero:
                raise ExteriorError("diagonal type component of a real form must be real")
            part = re
        else:
            part = re.scale(2)
        if not part.is_zero:
            out[(p, q)] = part
    total = a.ctx.zero_form()
    for part in out.values():
        total = total + part
    if total != a:
        raise ExteriorError("type decomposition failed to reassemble the input")
    return out


# ---------------------------------------------------------------------------
# Lefschetz-style decomposition of a 4-form
# ---------------------------------------------------------------------------


def _basis_masks(dim: int, grade: int) -> List[int]:
    from itertools import combinations

    return [sum(1 << (i - 1) for i in combo) for combo in combinations(range(1, dim + 1), grade)]


def _form_vector(a: Form, masks: Sequence[int]) -> List[Scalar]:
    zero = a.ctx.params.zero
    return [a.comps.get(m, zero) for m in masks]


def primitive_11_basis(omega: Form, psi_plus: Form, psi_minus: Form) -> List[Form]:
    """Basis of primitive J-invariant 2-forms: x^psi+ = x^psi- = x^omega^2 = 0."""
    ctx = omega.ctx
    pctx = ctx.params
    two_masks = _basis_masks(ctx.dim, 2)
    omega2 = omega.wedge(omega)
    rows: List[List[Scalar]] = []
    constraints = []
    for target in (psi_plus, psi_minus, omega2):
        masks_out = _basis_masks(ctx.dim, 2 + target.homogeneous_grade())
        constraints.append((target, masks_out))
    for target, masks_out in constraints:
        for mo in masks_out:
            row = []
            for mb in two_masks:
                prod = Form(ctx, {mb: pctx.one}).wedge(target)
                row.append(prod.comps.get(mo, pctx.zero))
            rows.append(row)
    # transpose: we built constraint rows indexed by output mask; columns are x-coords
    basis_vecs = linalg.kernel(rows, pctx)
    return [Form(ctx, dict(zip(two_masks, vec))) for vec in basis_vecs]


@functools.lru_cache(maxsize=32)
def _lefschetz_solver(omega: Form, psi_plus: Form, psi_minus: Form, slot: str):
    """Cached inverse of the (constant per structure) decomposition matrix."""
    ctx = omega.ctx
    pctx = ctx.params
    psi = psi_plus if slot == "plus" else psi_minus
    omega2 = omega.wedge(omega)
    w2_basis = tuple(primitive_11_basis(omega, psi_plus, psi_minus))
    columns: List[Form] = [omega2]
    columns += [ctx.basis(i).wedge(psi) for i in range(1, 7)]
    columns += [w.wedge(omega) for w in w2_basis]
    masks4 = _basis_masks(6, 4)
    matrix_rows = [[col.comps.get(m, pctx.zero) for col in columns] for m in masks4]
    inverse = linalg.invert(matrix_rows, pctx)
    return inverse, w2_basis, tuple(masks4), psi, omega2


def lefschetz_coefficients(
    a: Form,
    omega: Form,
    psi_plus: Form,
    psi_minus: Form,
    slot: str = "plus",
) -> Tuple[Scalar, Form, Form]:
    """Solve a = gamma ^ psi_slot + W2 ^ omega + c0 omega^2 in Lambda^4.

    ``slot`` selects whether the 1-form coefficient multiplies psi_plus or
    psi_minus.  W2 is primitive of type (1,1).  Raises ExteriorError with
    the residual if the (always square, normally invertible) system is
    singular for the given structure forms.
    """
    ctx = a.ctx
    pctx = ctx.params
    if ctx.dim != 6:
        raise ExteriorError("lefschetz decomposition requires a 6-dimensional frame")
    if a.homogeneous_grade() not in (None, 4):
        raise ExteriorError("lefschetz decomposition expects a 4-form")
    inverse, w2_basis, masks4, psi, omega2 = _lefschetz_solver(
        omega, psi_plus, psi_minus, slot
    )
    if inverse is None:
        raise ExteriorError("form outside expected module")
    rhs = _form_vector(a, masks4)
    sol = [
        sum((row[j] * rhs[j] for j in range(15)), pctx.zero)
        for row in inverse
    ]
    c0 = sol[0]
    gamma = Form(ctx, {1 << i: sol[1 + i] for i in range(6)})
    w2 = ctx.zero_form()
    for coeff, basis_form in zip(sol[7:], w2_basis):
        w2 = w2 + basis_form.scale(coeff)
    # exactness check (guards against inputs outside the module span)
    recon = gamma.wedge(psi) + w2.wedge(omega) + omega2.scale(c0)
    if recon != a:
        raise ExteriorError("form outside expected module")
    return c0, gamma, w2


# ---------------------------------------------------------------------------
# standard model forms
# ---------------------------------------------------------------------------


def standard_su3_forms(ctx: FrameContext) -> Tuple[Form, Form, Form]:
    """(omega, psi_plus, psi_minus) of the standard model in this frame.

    omega = e12 + e34 + e56 and psi_plus + i psi_minus is the product of the
    complex 1-forms (e1 + i e2)(e3 + i e4)(e5 + i e6).
    """
    om = ctx.basis(1, 2) + ctx.basis(3, 4) + ctx.basis(5, 6)
    psip = (
        ctx.basis(1, 3, 5)
        - ctx.basis(1, 4, 6)
        - ctx.basis(2, 3, 6)
        - ctx.basis(2, 4, 5)
    )
    psim = (
        ctx.basis(1, 3, 6)
        + ctx.basis(1, 4, 5)
        + ctx.basis(2, 3, 5)
        - ctx.basis(2, 4, 6)
    )
    return om, psip, psim


# ---------------------------------------------------------------------------
# form literal syntax
# ---------------------------------------------------------------------------

_TERM_SPLIT = re.compile(r"(?<![\^*/+\-(])\s*([+-])")


def form_str(a: Form) -> str:
    """Render in the form-literal syntax, e.g. ``12 + 34 - 3/2*56``."""
    if not a.comps:
        return "0"
    pieces = []
    ordered = sorted(a.comps.items(), key=lambda mc: (bin(mc[0]).count("1"), _bits(mc[0])))
    for mask, coeff in ordered:
        idx = "".join(str(i) for i in _bits(mask)) or "1"
        text = str(coeff)
        if text == "1":
            body = idx if mask else "1"
        elif text == "-1":
            body = f"-{idx}" if mask else "-1"
        else:
            negated = False
            if text.startswith("-") and " + " not in text and " - " not in text:
                negated = True
                text = text[1:]
            if " + " in text or " - " in text:
                text = f"({text})"
            body = f"{text}*{idx}" if mask else text
            if negated:
                body = f"-{body}"
        pieces.append(body)
    out = pieces[0]
    for body in pieces[1:]:
        if body.startswith("-"):
            out += f" - {body[1:]}"
        else:
            out += f" + {body}"
    return out


class FormSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_form(ctx: FrameContext, text: str) -> Form:
    """Parse the form-literal syntax.

    Terms are separated by top-level + or -; each term is an optional scalar
    expression followed by '*' and an index word.  Index words are digit
    strings (optionally prefixed with 'e') or 'dt' (dimension 7 only).
    The bare term '0' denotes the zero form; '1' with no '*' a 0-form.
    """
    raw = _fold_unicode(text)
    total = ctx.zero_form()
    pos = 0
    length = len(raw)
    sign = 1
    depth = 0
    term_start = 0
    terms: List[Tuple[int, str]] = []

    # split on top-level +/- (respecting parentheses)
    current_sign = 1
    buff_start = None
    i = 0
    while i < length:
        ch = raw[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormSyntaxError("unbalanced ')'", i)
        elif ch in "+-" and depth == 0:
            prev = raw[:i].rstrip()
            if prev and prev[-1] not in "+-*/^(":
                terms.append((current_sign, raw[term_start:i]))
                current_sign = 1 if ch == "+" else -1
                term_start = i + 1
                i += 1
                continue
            if not prev and buff_start is None:
                current_sign = current_sign * (1 if ch == "+" else -1)
                term_start = i + 1
                i += 1
                continue
        i += 1
    if depth != 0:
        raise FormSyntaxError("unbalanced '('", length)
    terms.append((current_sign, raw[term_start:]))

    for tsign, chunk in terms:
        chunk = chunk.strip()
        if not chunk:
            raise FormSyntaxError("empty term", 0)
        total = total + _parse_term(ctx, chunk, tsign)
    return total


_INDEX_WORD = re.compile(r"^(?:e)?(\d+)$|^dt$")


def _parse_term(ctx: FrameContext, chunk: str, sign: int) -> Form:
    star = _split_top_level_star(chunk)
    if star is None:
        coeff_text, index_text = None, chunk
    else:
        coeff_text, index_text = chunk[: star], chunk[star + 1 :]
    index_text = index_text.strip()
    m = _INDEX_WORD.match(index_text)
    if not m:
        # no index word: whole chunk is a scalar (grade-0 term)
        value = ctx.params.parse(chunk)
        if sign < 0:
            value = -value
        if value.is_zero:
            return ctx.zero_form()
        return Form(ctx, {0: value})
    if index_text == "dt":
        indices: Tuple[int, ...] = (7,)
    else:
        digits = m.group(1)
        if digits == "0" and coeff_text is None:
            return ctx.zero_form()
        indices = tuple(int(d) for d in digits)
        if any(d == 0 for d in indices):
            raise FormSyntaxError(f"index 0 in term {chunk!r}", 0)
    for idx in indices:
        if idx > ctx.dim:
            raise FormSyntaxError(
                f"index {idx} out of range for dimension {ctx.dim}", 0
            )
    base = ctx.basis(*indices)
    if coeff_text is not None:
        coeff = ctx.params.parse(coeff_text)
        base = base.scale(coeff)
    if sign < 0:
        base = -base
    return base


def _split_top_level_star(chunk: str) -> Optional[int]:
    """Position of the last top-level '*' whose right side is an index word."""
    depth = 0
    for i in range(len(chunk) - 1, -1, -1):
        ch = chunk[i]
        if ch == ")":
            depth += 1
        elif ch == "(":
            depth -= 1
        elif ch == "*" and depth == 0:
            rhs = chunk[i + 1 :].strip()
            if _INDEX_WORD.match(rhs):
                return i
            return None
    return None
