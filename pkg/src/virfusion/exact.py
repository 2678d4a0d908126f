"""Exact arithmetic building blocks.

Everything in this package is computed over the rationals, with no floating
point anywhere.  Scalars are ``fractions.Fraction`` (always reduced, positive
denominator), serialized as ``"p/q"`` or ``"n"`` with the sign on the
numerator.  On top of that this module provides

* integer partitions in a fixed canonical order (they index the PBW basis
  monomials of Verma module weight spaces),
* sparse exact polynomials in two commuting variables ``x``, ``y``,
* Laurent polynomials in a formal square root of a parameter ``xi``, with
  polynomial coefficients in two symbols ``a``, ``b``.

The square-root device never extracts an actual root: clients work with
quantities that are polynomial in ``xi`` after multiplying paired factors,
and specialization raises :class:`OddHalfPower` if a bare half power
survives at a point where ``xi`` is not a rational square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Tuple

Rational = Fraction


class OddHalfPower(ArithmeticError):
    """A bare half power of xi survived specialization at a non-square."""


def rat(value) -> Fraction:
    """Coerce ints, strings like ``"-1/8"``, or Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point input is not allowed; pass a string or Fraction")
    return Fraction(value)


def rational_sqrt(value) -> Optional[Fraction]:
    """Exact square root of a rational, or None if it is not a rational square."""
    x = rat(value)
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Partition:
    """A partition of a non-negative integer: non-increasing positive parts."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be non-increasing: {parts}")

    @property
    def n(self) -> int:
        """The number being partitioned (sum of parts)."""
        return sum(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"


EMPTY_PARTITION = Partition(())


@lru_cache(maxsize=None)
def _partition_tuples(n: int, max_part: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partition_tuples(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> Tuple[Partition, ...]:
    """All partitions of ``n`` in reverse-lexicographic order on parts.

    The order is canonical throughout the package: (n) first, (1^n) last.
    Deterministic, so linear solvers built over this index set are stable.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return tuple(Partition(t) for t in _partition_tuples(n, n))


def _normalized_terms(terms: Mapping) -> dict:
    out = {}
    for key, coeff in terms.items():
        c = rat(coeff)
        if c:
            out[key] = c
    return out


class BivariatePolynomial:
    """Sparse exact polynomial in two commuting variables ``x`` and ``y``.

    Terms map exponent pairs ``(i, j)`` to nonzero rational coefficients;
    zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Tuple[int, int], Fraction] = ()):
        self._terms = _normalized_terms(dict(terms))

    @classmethod
    def zero(cls) -> "BivariatePolynomial":
        return cls({})

    @classmethod
    def const(cls, c) -> "BivariatePolynomial":
        return cls({(0, 0): rat(c)})

    @classmethod
    def x(cls) -> "BivariatePolynomial":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def y(cls) -> "BivariatePolynomial":
        return cls({(0, 1): Fraction(1)})

    def terms(self) -> Tuple[Tuple[Tuple[int, int], Fraction], ...]:
        """Term list sorted by exponent pair, for deterministic output."""
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Max of i+j over stored terms; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def homogeneous_component(self, degree: int) -> "BivariatePolynomial":
        return BivariatePolynomial(
            {k: c for k, c in self._terms.items() if k[0] + k[1] == degree}
        )

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def evaluate(self, x0, y0) -> Fraction:
        """Exact value at the rational point (x0, y0)."""
        x0, y0 = rat(x0), rat(y0)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x0**i * y0**j
        return total

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return BivariatePolynomial(out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = rat(other)
            return BivariatePolynomial({k: c * c0 for k, c in self._terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not supported")
        result = BivariatePolynomial.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    @staticmethod
    def _coerce(other) -> "BivariatePolynomial":
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return BivariatePolynomial.const(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BivariatePolynomial.const(other)
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for (i, j), c in self.terms():
            mono = "".join(
                [f"x^{i}" if i > 1 else "x" if i == 1 else "",
                 f"y^{j}" if j > 1 else "y" if j == 1 else ""]
            )
            bits.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(bits)


def bivariate_evaluate(f: BivariatePolynomial, x0, y0) -> Fraction:
    """Exact value of ``f`` at the rational point ``(x0, y0)``."""
    return f.evaluate(x0, y0)


class SqrtLaurent:
    """Polynomial in symbols ``a``, ``b`` with Laurent coefficients in ``xi^(1/2)``.

    Terms map ``(deg_a, deg_b, half_exponent)`` to rational coefficients,
    where ``half_exponent`` counts units of ``xi^(1/2)`` and may be negative.
    Multiplication adds exponents.  Specialization substitutes rational
    values for ``a``, ``b``, ``xi``; a term with odd ``half_exponent`` is
    only evaluable when ``xi`` is the square of a rational (positive root
    taken), otherwise :class:`OddHalfPower` is raised.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Tuple[int, int, int], Fraction] = ()):
        self._terms = _normalized_terms(dict(terms))

    @classmethod
    def zero(cls) -> "SqrtLaurent":
        return cls({})

    @classmethod
    def const(cls, c) -> "SqrtLaurent":
        return cls({(0, 0, 0): rat(c)})

    @classmethod
    def var_a(cls) -> "SqrtLaurent":
        return cls({(1, 0, 0): Fraction(1)})

    @classmethod
    def var_b(cls) -> "SqrtLaurent":
        return cls({(0, 1, 0): Fraction(1)})

    @classmethod
    def xi_half_power(cls, half_exponent: int) -> "SqrtLaurent":
        """The monomial xi^(half_exponent/2)."""
        return cls({(0, 0, int(half_exponent)): Fraction(1)})

    def terms(self) -> Tuple[Tuple[Tuple[int, int, int], Fraction], ...]:
        return tuple(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def is_xi_integral(self) -> bool:
        """True when every term carries an even power of xi^(1/2)."""
        return all(k % 2 == 0 for (_, _, k) in self._terms)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return SqrtLaurent(out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return SqrtLaurent({k: -c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c0 = rat(other)
            return SqrtLaurent({k: c * c0 for k, c in self._terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for (i1, j1, k1), c1 in self._terms.items():
            for (i2, j2, k2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2, k1 + k2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return SqrtLaurent(out)

    __rmul__ = __mul__

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return self._coerce(other) - self

    @staticmethod
    def _coerce(other) -> "SqrtLaurent":
        if isinstance(other, SqrtLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return SqrtLaurent.const(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SqrtLaurent.const(other)
        if not isinstance(other, SqrtLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def specialize(self, a0, b0, xi0) -> Fraction:
        """Exact value at ``a=a0, b=b0, xi=xi0``.

        Raises OddHalfPower when an odd half power survives and ``xi0`` is
        not a rational square; xi0 must be nonzero (negative exponents).
        """
        a0, b0, xi0 = rat(a0), rat(b0), rat(xi0)
        if xi0 == 0:
            raise ZeroDivisionError("xi must be nonzero")
        root = None
        if not self.is_xi_integral():
            root = rational_sqrt(xi0)
            if root is None:
                raise OddHalfPower(
                    f"odd half power of xi survives and {xi0} is not a rational square"
                )
        total = Fraction(0)
        for (i, j, k), c in self._terms.items():
            if k % 2 == 0:
                xi_val = xi0 ** (k // 2)
            else:
                xi_val = root**k
            total += c * a0**i * b0**j * xi_val
        return total

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for (i, j, k), c in self.terms():
            mono = "".join(
                [f"a^{i}" if i > 1 else "a" if i == 1 else "",
                 f"b^{j}" if j > 1 else "b" if j == 1 else "",
                 f"xi^({k}/2)" if k else ""]
            )
            bits.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(bits)


def sqrt_laurent_specialize(g: SqrtLaurent, a0, b0, xi0) -> Fraction:
    """Exact specialization of ``g`` at rational ``(a0, b0, xi0)``."""
    return g.specialize(a0, b0, xi0)
