"""Zhu bimodule reduction and the bimodule vanishing test for fusion bounds.

For a Verma module M(c, h) the Zhu bimodule A(M(c, h)) is the polynomial
ring in two commuting variables x, y, with the highest weight vector
representing 1 and the vacuum-module class acting by multiplication by x on
the left and y on the right.  The class of a PBW monomial is computed by
stripping its leftmost mode with the reduction rule

    [L_{-n} u] = (-1)^n (n*y - x + wt(u)) [u],      wt(u) = h + grade(u),

extended linearly.  The image of a grade-n singular vector is a polynomial
with leading part (x - y)^n; requiring those images to vanish at weights of
a candidate target module is an upper-bound test for fusion rules (a map
from intertwining operators into bimodule homomorphisms is injective when
the target is irreducible).

The module also provides the quadratic degeneracy factors Q and their full
product P^2 in a formal half power of xi, together with the equivalent
explicit product over shifted weights; the two are compared point by point
by :func:`equivalence_check`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from .exact import BivariatePolynomial, SqrtLaurent, rat
from .verma import (
    C1qIrreducible,
    HighestWeightParams,
    InvalidLabel,
    MinimalIrreducible,
    ModuleLabel,
    VermaVector,
    apply_mode,
    label_weight,
    maximal_submodule_generators,
    weight_c1q,
)


@dataclass(frozen=True)
class ZhuClass:
    """Image of a module vector in A(M(c, h)) = Q[x, y]."""

    poly: BivariatePolynomial
    source_params: HighestWeightParams


@dataclass(frozen=True)
class QFactorSpec:
    """Index data (alpha, beta, k, l) for one quadratic degeneracy factor."""

    alpha: int
    beta: int
    k: int
    l: int

    def __post_init__(self):
        if self.alpha < 1 or self.beta < 1:
            raise ValueError("alpha, beta must be positive")
        if not (0 <= self.k < self.alpha and 0 <= self.l < self.beta):
            raise ValueError("need 0 <= k < alpha and 0 <= l < beta")


@lru_cache(maxsize=None)
def _zhu_monomial_poly(h: Fraction, parts: Tuple[int, ...]) -> BivariatePolynomial:
    x = BivariatePolynomial.x()
    y = BivariatePolynomial.y()
    poly = BivariatePolynomial.const(1)
    remaining = sum(parts)
    for p in parts:
        remaining -= p
        factor = p * y - x + BivariatePolynomial.const(h + remaining)
        if p % 2:
            factor = -factor
        poly = poly * factor
    return poly


def zhu_reduce(v: VermaVector) -> ZhuClass:
    """Class of ``v`` in A(M(c, h)), by iterated leftmost-mode stripping."""
    poly = BivariatePolynomial.zero()
    for part, coeff in v.items():
        poly = poly + coeff * _zhu_monomial_poly(v.params.h, part.parts)
    return ZhuClass(poly, v.params)


def left_right_omega(v: VermaVector) -> Tuple[VermaVector, VermaVector]:
    """Bimodule actions of the conformal vector before reduction.

    Returns ``((L_{-2} + 2 L_{-1} + L_0) v, (L_{-2} + L_{-1}) v)``; after
    :func:`zhu_reduce` these must equal x and y times the class of ``v``.
    """
    if not v.is_homogeneous:
        raise ValueError("v must be homogeneous")
    l2 = apply_mode(-2, v)
    l1 = apply_mode(-1, v)
    l0 = apply_mode(0, v)
    return (l2 + 2 * l1 + l0, l2 + l1)


def singular_image(label: ModuleLabel) -> List[ZhuClass]:
    """Zhu classes of the maximal-submodule generators of the label's Verma cover."""
    return [zhu_reduce(vec) for _, vec in maximal_submodule_generators(label)]


def fz_upper_bound(w1: ModuleLabel, w2: ModuleLabel, w3: ModuleLabel) -> int:
    """Bimodule upper bound for the fusion rule of (w1, w2) -> w3: 0 or 1.

    Returns 1 iff every singular image of w1 vanishes at (x, y) = (h3, h2)
    and every singular image of w2 vanishes at (h3, h1), the symmetrized
    form of the vanishing test.  Exact for minimal models.
    """
    for w in (w1, w2):
        if not isinstance(w, (C1qIrreducible, MinimalIrreducible)):
            raise InvalidLabel(f"slot-1/2 label must be irreducible with known generators: {w!r}")
    h1, h2, h3 = label_weight(w1), label_weight(w2), label_weight(w3)
    for cls in singular_image(w1):
        if cls.poly.evaluate(h3, h2) != 0:
            return 0
    for cls in singular_image(w2):
        if cls.poly.evaluate(h3, h1) != 0:
            return 0
    return 1


# ---------------------------------------------------------------------------
# degeneracy-product criterion


def q_factor(spec: QFactorSpec) -> SqrtLaurent:
    """The quadratic factor Q_{k,l}^{alpha,beta}(a, b; xi).

    Built as the product of two brackets plus a squared linear combination
    times ``a``; every bracket pairs two half powers, so the result is
    polynomial in xi itself.
    """
    a = SqrtLaurent.var_a()
    b = SqrtLaurent.var_b()
    sq = SqrtLaurent.xi_half_power(1)
    isq = SqrtLaurent.xi_half_power(-1)

    def lin(u: int, v: int) -> SqrtLaurent:
        return u * sq - v * isq

    al, be, k, l = spec.alpha, spec.beta, spec.k, spec.l
    bracket1 = (b - a) - lin(k, l) * lin(al - k, be - l)
    bracket2 = (b - a) - lin(k + 1, l + 1) * lin(al - k - 1, be - l - 1)
    braced = lin(al - 2 * k - 1, be - l - 1)
    return bracket1 * bracket2 + braced * braced * a


@lru_cache(maxsize=None)
def _p_squared_poly(alpha: int, beta: int) -> SqrtLaurent:
    product = SqrtLaurent.const(1)
    for k in range(alpha):
        for l in range(beta):
            product = product * q_factor(QFactorSpec(alpha, beta, k, l))
    return product


def p_squared(alpha: int, beta: int, a0, b0, xi0) -> Fraction:
    """The full degeneracy product P^2 specialized at rational (a0, b0, xi0).

    The symbolic product over all (k, l) is formed first and is polynomial
    in xi, so specialization never needs a square root.
    """
    xi0 = rat(xi0)
    if xi0 == 0:
        raise ValueError("xi must be nonzero")
    return _p_squared_poly(alpha, beta).specialize(a0, b0, xi0)


def product_condition(q: int, i1: int, s1: int, i2: int, s2: int, h3) -> bool:
    """Whether some shifted weight h_{i1+i2-2k-1, s1+s2-2l-1} equals h3.

    The double product over 0 <= k < i1, 0 <= l < s1 vanishes iff one factor
    does; indices are allowed to leave the canonical box and the weight
    formula is evaluated as written.
    """
    h3 = rat(h3)
    for k in range(i1):
        for l in range(s1):
            if h3 == weight_c1q(q, i1 + i2 - 2 * k - 1, s1 + s2 - 2 * l - 1):
                return True
    return False


def equivalence_check(q: int, i1: int, s1: int, i2: int, s2: int, h3) -> bool:
    """Agreement of the P^2 vanishing route with the explicit weight product."""
    h3 = rat(h3)
    a0 = -weight_c1q(q, i2, s2)
    b0 = -h3 + weight_c1q(q, i1, s1)
    via_p = p_squared(i1, s1, a0, b0, q) == 0
    return via_p == product_condition(q, i1, s1, i2, s2, h3)


def equivalence_sweep(q_max: int, index_max: int, i3_max: int = 7):
    """Exhaustive equivalence check on the grid q <= q_max, indices <= index_max.

    The third-slot weight h3 ranges over weight_c1q(q, i, s) for i <= i3_max,
    s <= q.  Returns (total, failures) with one entry per failing tuple.
    """
    failures = []
    total = 0
    for q in range(1, q_max + 1):
        h3_grid = sorted(
            {weight_c1q(q, i, s) for i in range(1, i3_max + 1) for s in range(1, q + 1)}
        )
        smax = min(index_max, q)
        for i1 in range(1, index_max + 1):
            for s1 in range(1, smax + 1):
                for i2 in range(1, index_max + 1):
                    for s2 in range(1, smax + 1):
                        for h3 in h3_grid:
                            total += 1
                            if not equivalence_check(q, i1, s1, i2, s2, h3):
                                failures.append(
                                    {"q": q, "w1": (i1, s1), "w2": (i2, s2), "h3": str(h3)}
                                )
    return total, failures
