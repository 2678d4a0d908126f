"""Virasoro algebra action on Verma modules.

The Virasoro algebra has basis ``{L_n : n in Z}`` and a central element ``C``
with bracket ``[L_m, L_n] = (m-n) L_{m+n} + ((m^3-m)/12) delta_{m+n,0} C``.
The Verma module ``M(c, h)`` is generated by a highest weight vector ``v``
with ``L_0 v = h v``, ``C v = c v`` and ``L_n v = 0`` for ``n > 0``.  Its
weight space at grade ``n`` has the PBW basis

    ``L_{-n}^{r_n} ... L_{-2}^{r_2} L_{-1}^{r_1} v``

indexed by partitions ``(1^{r_1} 2^{r_2} ... n^{r_n})`` of ``n``, with the
most negative mode leftmost.  :class:`VermaVector` stores finite rational
combinations of these monomials; :func:`apply_mode` straightens ``L_n``
applied to such a vector back into the basis.

Weight parametrizations:

* ``c_{p,q} = 13 - 6(q/p + p/q)`` and
  ``h_{p,q;r,s} = ((sp - rq)^2 - (p-q)^2) / (4pq)`` for the (p, q) family,
* the one-parameter form ``c(t) = 13 - 6t - 6/t`` with
  ``h_{a,b}(t) = (a^2-1)t/4 - (ab-1)/2 + (b^2-1)/(4t)``, where the Verma
  module ``M(c(t), h_{a,b}(t))`` has a singular vector at grade ``a*b``,
* the ``p = 1`` family ``h_{i,s} = ((iq - s)^2 - (q-1)^2) / (4q)``.

:func:`singular_vector` solves exactly for the grade-``n`` vector killed by
``L_1`` and ``L_2`` (these generate all positive modes under brackets),
normalized so the coefficient of ``L_{-1}^n`` is 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from .exact import EMPTY_PARTITION, Partition, enumerate_partitions, rat, rational_sqrt


class InvalidLabel(ValueError):
    """A module label violates its declared index ranges."""


class NonUniqueSolution(RuntimeError):
    """The singular-vector system has an affine solution set of dim >= 1."""


class SolverFailure(RuntimeError):
    """A singular vector guaranteed by the label's parametrization was not found."""


# ---------------------------------------------------------------------------
# parametrizations


def central_charge_pq(p: int, q: int) -> Fraction:
    """c_{p,q} = 13 - 6(q/p + p/q).  Accepts p = 1 for the c_{1,q} family."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    return 13 - 6 * (Fraction(q, p) + Fraction(p, q))


@dataclass(frozen=True)
class TParam:
    """Nonzero rational parameter for the one-parameter Kac curve."""

    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", rat(self.t))
        if self.t == 0:
            raise ValueError("t must be nonzero")


def central_charge_t(t) -> Fraction:
    """c(t) = 13 - 6t - 6/t."""
    tv = t.t if isinstance(t, TParam) else rat(t)
    if tv == 0:
        raise ValueError("t must be nonzero")
    return 13 - 6 * tv - 6 / tv


def kac_weight_pq(p: int, q: int, r: int, s: int) -> Fraction:
    """h_{p,q;r,s} = ((sp - rq)^2 - (p-q)^2) / (4pq).

    Evaluated as written for any integer r, s; callers enforce Kac-box
    constraints where they apply.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    return Fraction((s * p - r * q) ** 2 - (p - q) ** 2, 4 * p * q)


def weight_c1q(q: int, i: int, s: int) -> Fraction:
    """h_{i,s} = ((iq - s)^2 - (q-1)^2) / (4q), the p = 1 weight family.

    Evaluated as written for any integer i, s (indices outside the
    canonical box occur in product formulas and canonicalization).
    """
    if q < 1:
        raise ValueError("q must be positive")
    return Fraction((i * q - s) ** 2 - (q - 1) ** 2, 4 * q)


def weight_alpha_beta_t(alpha: int, beta: int, t) -> Fraction:
    """h_{alpha,beta}(t) = (alpha^2-1)t/4 - (alpha*beta-1)/2 + (beta^2-1)/(4t)."""
    tv = t.t if isinstance(t, TParam) else rat(t)
    if tv == 0:
        raise ValueError("t must be nonzero")
    return (
        Fraction(alpha * alpha - 1, 4) * tv
        - Fraction(alpha * beta - 1, 2)
        + Fraction(beta * beta - 1, 4) / tv
    )


# ---------------------------------------------------------------------------
# module labels


@dataclass(frozen=True)
class HighestWeightParams:
    """Central charge and highest weight of a Verma module."""

    c: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))
        object.__setattr__(self, "h", rat(self.h))


@dataclass(frozen=True)
class MinimalIrreducible:
    """Irreducible module L(c_{p,q}, h_{p,q;r,s}) of a minimal model.

    Requires coprime p, q > 1 and Kac-box indices 0 < r < p, 0 < s < q.
    """

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        import math

        if self.p <= 1 or self.q <= 1 or math.gcd(self.p, self.q) != 1:
            raise InvalidLabel(f"(p, q) = ({self.p}, {self.q}) must be coprime and > 1")
        if not (0 < self.r < self.p and 0 < self.s < self.q):
            raise InvalidLabel(
                f"(r, s) = ({self.r}, {self.s}) outside the Kac box of ({self.p}, {self.q})"
            )

    @property
    def central_charge(self) -> Fraction:
        return central_charge_pq(self.p, self.q)

    @property
    def weight(self) -> Fraction:
        return kac_weight_pq(self.p, self.q, self.r, self.s)

    @property
    def params(self) -> HighestWeightParams:
        return HighestWeightParams(self.central_charge, self.weight)


@dataclass(frozen=True)
class C1qIrreducible:
    """Irreducible module L(c_{1,q}, h_{i,s}) with i > 0 and 0 < s <= q."""

    q: int
    i: int
    s: int

    def __post_init__(self):
        if self.q < 1:
            raise InvalidLabel(f"q = {self.q} must be positive")
        if self.i <= 0 or not (0 < self.s <= self.q):
            raise InvalidLabel(
                f"(i, s) = ({self.i}, {self.s}) outside the canonical box for q = {self.q}"
            )

    @property
    def central_charge(self) -> Fraction:
        return central_charge_pq(1, self.q)

    @property
    def weight(self) -> Fraction:
        return weight_c1q(self.q, self.i, self.s)

    @property
    def params(self) -> HighestWeightParams:
        return HighestWeightParams(self.central_charge, self.weight)


@dataclass(frozen=True)
class GenericVerma:
    """Verma module M(c, h) at an arbitrary rational point."""

    c: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))
        object.__setattr__(self, "h", rat(self.h))

    @property
    def central_charge(self) -> Fraction:
        return self.c

    @property
    def weight(self) -> Fraction:
        return self.h

    @property
    def params(self) -> HighestWeightParams:
        return HighestWeightParams(self.c, self.h)


ModuleLabel = Union[MinimalIrreducible, C1qIrreducible, GenericVerma]


def label_weight(label: ModuleLabel) -> Fraction:
    return label.weight


# ---------------------------------------------------------------------------
# Verma module vectors


class VermaVector:
    """Finite rational combination of PBW basis monomials of M(c, h).

    The coefficient map is keyed by :class:`Partition`; the partition
    ``(n_1 >= n_2 >= ...)`` stands for ``L_{-n_1} L_{-n_2} ... v``.  Vectors
    are immutable; all arithmetic returns new instances.  Inhomogeneous
    combinations (mixed grades) are permitted.
    """

    __slots__ = ("params", "_coeffs")

    def __init__(self, params: HighestWeightParams, coeffs: Dict[Partition, Fraction] = ()):
        self.params = params
        cleaned = {}
        for part, coeff in dict(coeffs).items():
            c = rat(coeff)
            if c:
                cleaned[part] = c
        self._coeffs = cleaned

    @classmethod
    def zero(cls, params: HighestWeightParams) -> "VermaVector":
        return cls(params, {})

    @classmethod
    def highest_weight(cls, params: HighestWeightParams) -> "VermaVector":
        return cls(params, {EMPTY_PARTITION: Fraction(1)})

    @classmethod
    def monomial(cls, params: HighestWeightParams, partition: Partition, coeff=1) -> "VermaVector":
        return cls(params, {partition: rat(coeff)})

    def items(self) -> Tuple[Tuple[Partition, Fraction], ...]:
        """Terms sorted by grade then canonical partition order."""
        def sort_key(item):
            part = item[0]
            order = {p: i for i, p in enumerate(enumerate_partitions(part.n))}
            return (part.n, order[part])

        return tuple(sorted(self._coeffs.items(), key=sort_key))

    def coefficient(self, partition: Partition) -> Fraction:
        return self._coeffs.get(partition, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def grades(self) -> Tuple[int, ...]:
        return tuple(sorted({p.n for p in self._coeffs}))

    @property
    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def grade(self) -> int:
        """Grade of a homogeneous vector (0 for the zero vector)."""
        gs = self.grades()
        if not gs:
            return 0
        if len(gs) > 1:
            raise ValueError(f"vector is not homogeneous; grades {gs}")
        return gs[0]

    def _check_same_module(self, other: "VermaVector"):
        if self.params != other.params:
            raise ValueError(f"mixing modules {self.params} and {other.params}")

    def __add__(self, other: "VermaVector") -> "VermaVector":
        self._check_same_module(other)
        out = dict(self._coeffs)
        for part, c in other._coeffs.items():
            out[part] = out.get(part, Fraction(0)) + c
        return VermaVector(self.params, out)

    def __sub__(self, other: "VermaVector") -> "VermaVector":
        return self + (-other)

    def __neg__(self) -> "VermaVector":
        return VermaVector(self.params, {p: -c for p, c in self._coeffs.items()})

    def __mul__(self, scalar) -> "VermaVector":
        s = rat(scalar)
        return VermaVector(self.params, {p: c * s for p, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, VermaVector):
            return NotImplemented
        return self.params == other.params and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.params, frozenset(self._coeffs.items())))

    def __repr__(self) -> str:
        if not self._coeffs:
            return "0"
        bits = []
        for part, coeff in self.items():
            word = " ".join(f"L({-p})" for p in part.parts) or "v"
            bits.append(f"({coeff})*{word}" + (" v" if part.parts else ""))
        return " + ".join(bits)

    def to_json_dict(self) -> dict:
        return {
            "c": str(self.params.c),
            "h": str(self.params.h),
            "terms": [
                {"partition": list(part.parts), "coeff": str(coeff)}
                for part, coeff in self.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "VermaVector":
        params = HighestWeightParams(rat(data["c"]), rat(data["h"]))
        coeffs = {
            Partition(tuple(term["partition"])): rat(term["coeff"])
            for term in data["terms"]
        }
        return cls(params, coeffs)


# ---------------------------------------------------------------------------
# straightening


@lru_cache(maxsize=None)
def _apply_mode_monomial(
    c: Fraction, h: Fraction, mode: int, parts: Tuple[int, ...]
) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    """L_mode applied to the PBW monomial for ``parts``, in the PBW basis.

    Words are tuples of modes acting left to right on the highest weight
    vector; normal form is non-decreasing negative modes.  The worklist
    rewrites the first out-of-order adjacent pair via the bracket, which
    strictly decreases (length, inversion count) lexicographically.
    """
    out: Dict[Tuple[int, ...], Fraction] = {}
    work: List[Tuple[Fraction, Tuple[int, ...]]] = [
        (Fraction(1), (mode,) + tuple(-p for p in parts))
    ]
    while work:
        coeff, word = work.pop()
        for idx in range(len(word) - 1):
            m1, m2 = word[idx], word[idx + 1]
            if m1 > m2:
                work.append((coeff, word[:idx] + (m2, m1) + word[idx + 2:]))
                work.append((coeff * (m1 - m2), word[:idx] + (m1 + m2,) + word[idx + 2:]))
                if m1 + m2 == 0:
                    central = Fraction(m1**3 - m1, 12) * c
                    if central:
                        work.append((coeff * central, word[:idx] + word[idx + 2:]))
                break
        else:
            # sorted word; resolve trailing L_0 / positive modes against v
            killed = False
            while word and word[-1] >= 0:
                if word[-1] > 0:
                    killed = True
                    break
                coeff *= h
                word = word[:-1]
            if not killed and coeff:
                key = tuple(-m for m in word)
                out[key] = out.get(key, Fraction(0)) + coeff
    return tuple((k, v) for k, v in sorted(out.items()) if v)


def apply_mode(n: int, v: VermaVector) -> VermaVector:
    """The vector ``L_n . v`` expressed in the PBW basis."""
    params = v.params
    out: Dict[Partition, Fraction] = {}
    for part, coeff in v._coeffs.items():
        for key, a in _apply_mode_monomial(params.c, params.h, n, part.parts):
            p = Partition(key)
            out[p] = out.get(p, Fraction(0)) + coeff * a
    return VermaVector(params, out)


def apply_word(modes, v: VermaVector) -> VermaVector:
    """Apply ``L_{m_1} L_{m_2} ... L_{m_k}`` (leftmost acts last) to ``v``."""
    for m in reversed(tuple(modes)):
        v = apply_mode(m, v)
    return v


# ---------------------------------------------------------------------------
# singular vectors


def _solve_exact(matrix: List[List[Fraction]], rhs: List[Fraction]):
    """Gauss-Jordan over the rationals.

    Returns ("inconsistent", None), ("many", None) for an affine solution
    set of dimension >= 1, or ("unique", solution).
    """
    ncols = len(matrix[0]) if matrix else 0
    rows = [list(row) + [b] for row, b in zip(matrix, rhs)]
    pivot_of_col: Dict[int, int] = {}
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        pivot_of_col[col] = rank
        rank += 1
    for r in range(rank, len(rows)):
        if rows[r][ncols] != 0:
            return ("inconsistent", None)
    if rank < ncols:
        return ("many", None)
    solution = [Fraction(0)] * ncols
    for col, r in pivot_of_col.items():
        solution[col] = rows[r][ncols]
    return ("unique", solution)


@lru_cache(maxsize=None)
def _singular_vector_cached(c: Fraction, h: Fraction, n: int):
    basis = enumerate_partitions(n)
    ncols = len(basis)
    # constraint rows appear lazily: one per PBW monomial hit by L_1 or L_2
    row_index: Dict[Tuple[int, Tuple[int, ...]], int] = {}
    matrix: List[List[Fraction]] = []
    for col, part in enumerate(basis):
        for k in (1, 2):
            for key, a in _apply_mode_monomial(c, h, k, part.parts):
                rk = (k, key)
                if rk not in row_index:
                    row_index[rk] = len(matrix)
                    matrix.append([Fraction(0)] * ncols)
                matrix[row_index[rk]][col] += a
    # normalize the coefficient of (1^n), the last basis element, to 1
    reduced = [row[:-1] for row in matrix]
    rhs = [-row[-1] for row in matrix]
    if ncols == 1:
        if any(b != 0 for b in rhs):
            return None
        return VermaVector.monomial(HighestWeightParams(c, h), basis[0], 1)
    status, solution = _solve_exact(reduced, rhs)
    if status == "inconsistent":
        return None
    if status == "many":
        raise NonUniqueSolution(
            f"singular system at (c, h, n) = ({c}, {h}, {n}) is underdetermined"
        )
    coeffs = {part: val for part, val in zip(basis[:-1], solution)}
    coeffs[basis[-1]] = Fraction(1)
    return VermaVector(HighestWeightParams(c, h), coeffs)


def singular_vector(params: HighestWeightParams, n: int) -> Optional[VermaVector]:
    """The grade-n singular vector of M(c, h) with unit L_{-1}^n coefficient.

    Solves the exact linear system for annihilation by L_1 and L_2 over the
    p(n)-dimensional weight space (L_1 and L_2 generate all positive modes).
    Returns None when no such normalized vector exists; raises
    :class:`NonUniqueSolution` if the affine solution set has dim >= 1.
    """
    if n < 1:
        raise ValueError("grade must be positive")
    return _singular_vector_cached(params.c, params.h, n)


def maximal_submodule_generators(label: ModuleLabel) -> List[Tuple[int, VermaVector]]:
    """Singular generators of the maximal proper submodule of M(c, h).

    For a minimal-model label the generators sit at grades ``r*s`` and
    ``(p-r)*(q-s)``; for a c_{1,q} label there is a single generator at
    grade ``i*s``.
    """
    if isinstance(label, MinimalIrreducible):
        grades = [label.r * label.s, (label.p - label.r) * (label.q - label.s)]
    elif isinstance(label, C1qIrreducible):
        grades = [label.i * label.s]
    else:
        raise InvalidLabel(f"no singular-generator data for label {label!r}")
    params = label.params
    out = []
    for grade in grades:
        vec = singular_vector(params, grade)
        if vec is None:
            raise SolverFailure(
                f"expected singular vector at grade {grade} of {params} not found"
            )
        out.append((grade, vec))
    return out


def is_irreducible_verma_c1q(q: int, h) -> bool:
    """Whether M(c_{1,q}, h) is irreducible.

    Reducible exactly when ``4qh + (q-1)^2 = (iq - s)^2`` for some i > 0,
    ``0 < s <= q``; those values ``iq - s`` sweep all non-negative integers,
    so the test is an exact integer-square check.
    """
    if q < 1:
        raise ValueError("q must be positive")
    disc = 4 * q * rat(h) + (q - 1) ** 2
    if disc < 0 or disc.denominator != 1:
        return True
    import math

    m = math.isqrt(disc.numerator)
    return m * m != disc.numerator


def canonicalize_label_c1q(q: int, i: int, s: int) -> Optional[C1qIrreducible]:
    """The canonical (i', s') with |i'q - s'| = |iq - s|, preserving the weight.

    Within the canonical ranges i' > 0, 0 < s' <= q the quantity i'q - s'
    sweeps every non-negative integer exactly once, so the representative
    exists and is unique for all integer inputs.
    """
    if q < 1:
        raise ValueError("q must be positive")
    m = abs(i * q - s)
    i_prime = m // q + 1
    s_prime = i_prime * q - m
    return C1qIrreducible(q, i_prime, s_prime)
