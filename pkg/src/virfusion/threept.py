"""Three-point matrix elements with one descendant insertion, and limit tables.

For primaries of weights h1, h2 and a dual primary of weight h3, the matrix
element of an intertwining map normalizes to x^mu with mu = h3 - h1 - h2.
Inserting a grade-n descendant in one slot multiplies this by a rational
coefficient and shifts the exponent; :class:`ThreePointCoefficient` records
``(coeff, shift)`` for the value ``coeff * x^(mu - shift)``.

Reduction rules (all sums truncate because the dual primary kills every
``L_{-m}`` with m > 0 on the left, and the ket primary is killed by positive
modes):

* slot 1, peeling the leftmost mode of a PBW word over the slot-1 primary:
  ``L_{-1}`` acts as d/dx, and for n >= 1 the iterate expansion of the
  conformal-vector modes collapses to

      coeff *= (-1)^(n+1) * (mu - s + (1-n) h2),   shift s -> s + n,

  where s is the grade already absorbed (n = 1 reproduces the derivative);
* slot 2: ``<v', Y(u1, x) L_{-m} w> = -sum_i C(1-m, i) x^(1-m-i)
  <v', Y(L_{i-1} u1, x) w>``, moving modes onto slot 1 where the words are
  re-straightened;
* slot 3 (contragredient insertion): ``<L_{-n} w', z> = <w', L_n z>`` and the
  commutator ``[L_n, Y(u1, x)] = sum_i C(n+1, i) x^(n+1-i) Y(L_{i-1} u1, x)``.

Because every homogeneous insertion yields a single monomial, intermediate
slot-2/3 states can be merged grade by grade; the x-offsets telescope and
depend only on the grade of the surviving slot-1 word.  For each word the
final evaluation is precomputed once as a polynomial in (mu, h2) and reused
across weight choices.

The limit laboratory tabulates, for the family c_k = c_{k, kq-1}, exact
central charges, weights, minimal-model fusion answers and slot-1 null
coefficients, and checks their convergence to the c_{1,q} data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import BivariatePolynomial, rat
from .verma import (
    C1qIrreducible,
    HighestWeightParams,
    SolverFailure,
    VermaVector,
    apply_mode,
    central_charge_pq,
    kac_weight_pq,
    maximal_submodule_generators,
    singular_vector,
    weight_c1q,
)


class LabelOutOfBox(ValueError):
    """A requested minimal-model row cannot host the given labels."""


class NotStabilized(RuntimeError):
    """fusion_allowed alternates in the top half of the sampled k-range."""


@dataclass(frozen=True)
class ThreePointDatum:
    """Central charge and the three primary weights of a matrix element."""

    c: Fraction
    h1: Fraction
    h2: Fraction
    h3: Fraction

    def __post_init__(self):
        for name in ("c", "h1", "h2", "h3"):
            object.__setattr__(self, name, rat(getattr(self, name)))


@dataclass(frozen=True)
class ThreePointCoefficient:
    """The monomial value coeff * x^(h3 - h1 - h2 - shift)."""

    coeff: Fraction
    shift: int


def _binom(n: int, i: int) -> Fraction:
    """Binomial coefficient with arbitrary integer upper index."""
    num = 1
    for j in range(i):
        num *= n - j
    return Fraction(num, math.factorial(i))


# In the polynomials below x stands for mu = h3 - h1 - h2 and y for h2.


@lru_cache(maxsize=None)
def _word_poly_slot1(parts: Tuple[int, ...]) -> BivariatePolynomial:
    mu = BivariatePolynomial.x()
    h2 = BivariatePolynomial.y()
    poly = BivariatePolynomial.const(1)
    shift = 0
    for p in reversed(parts):
        factor = mu - BivariatePolynomial.const(shift) + (1 - p) * h2
        if p % 2 == 0:
            factor = -factor
        poly = poly * factor
        shift += p
    return poly


def _vector_slot1_poly(vec: VermaVector) -> BivariatePolynomial:
    poly = BivariatePolynomial.zero()
    for part, coeff in vec.items():
        poly = poly + coeff * _word_poly_slot1(part.parts)
    return poly


@lru_cache(maxsize=None)
def _slot2_poly(c: Fraction, h1: Fraction, parts: Tuple[int, ...]) -> BivariatePolynomial:
    """Slot-2 insertion of one PBW word, as a polynomial in (mu, h2)."""
    params = HighestWeightParams(c, h1)
    state = VermaVector.highest_weight(params)
    for m in parts:
        gmax = max(state.grades(), default=0)
        new = VermaVector.zero(params)
        for i in range(gmax + 2):
            b = -_binom(1 - m, i)
            if b:
                new = new + b * apply_mode(i - 1, state)
        state = new
        if state.is_zero():
            break
    return _vector_slot1_poly(state)


@lru_cache(maxsize=None)
def _slot3_poly(c: Fraction, h1: Fraction, parts: Tuple[int, ...]) -> BivariatePolynomial:
    """Contragredient slot-3 insertion of one PBW word, in (mu, h2)."""
    params = HighestWeightParams(c, h1)
    state = VermaVector.highest_weight(params)
    for n in parts:
        new = VermaVector.zero(params)
        for i in range(n + 2):
            b = _binom(n + 1, i)
            if b:
                new = new + b * apply_mode(i - 1, state)
        state = new
        if state.is_zero():
            break
    return _vector_slot1_poly(state)


def evaluate_descendant(d: ThreePointDatum, slot: int, v: VermaVector) -> ThreePointCoefficient:
    """Exact monomial value with the descendant ``v`` inserted in ``slot``.

    The other two slots carry primaries (slot 3 the dual primary, paired to
    1 against the slot-3 highest weight vector); the all-primary element is
    normalized to x^(h3 - h1 - h2).  ``v`` must be homogeneous and live over
    the indicated slot's (c, h).
    """
    if slot not in (1, 2, 3):
        raise ValueError("slot must be 1, 2 or 3")
    slot_h = (d.h1, d.h2, d.h3)[slot - 1]
    if v.params.c != d.c or v.params.h != slot_h:
        raise ValueError(
            f"vector lives over (c, h) = ({v.params.c}, {v.params.h}), "
            f"slot {slot} expects ({d.c}, {slot_h})"
        )
    if v.is_zero():
        return ThreePointCoefficient(Fraction(0), 0)
    grade = v.grade()
    mu = d.h3 - d.h1 - d.h2
    total = Fraction(0)
    for part, coeff in v.items():
        if slot == 1:
            poly = _word_poly_slot1(part.parts)
        elif slot == 2:
            poly = _slot2_poly(d.c, d.h1, part.parts)
        else:
            poly = _slot3_poly(d.c, d.h1, part.parts)
        total += coeff * poly.evaluate(mu, d.h2)
    return ThreePointCoefficient(total, grade if slot != 3 else -grade)


def _as_c1q(q: int, label) -> C1qIrreducible:
    if isinstance(label, C1qIrreducible):
        if label.q != q:
            raise ValueError(f"label {label} does not live in the q = {q} family")
        return label
    i, s = label
    return C1qIrreducible(q, i, s)


def null_decoupling(q: int, w1, w2, w3) -> bool:
    """Whether every singular generator decouples from the three-point element.

    Tests the slot-1 generator (grade i1*s1), the slot-2 generator (grade
    i2*s2) and the contragredient slot-3 insertion of the generator of
    M(c, h3) (grade i3*s3).  True means this test detects no obstruction to
    an intertwining operator at the level of irreducible quotients.
    """
    labels = [_as_c1q(q, w) for w in (w1, w2, w3)]
    c = central_charge_pq(1, q)
    h = [lab.weight for lab in labels]
    datum = ThreePointDatum(c, h[0], h[1], h[2])
    for slot, lab in zip((1, 2, 3), labels):
        (_, gen), = maximal_submodule_generators(lab)
        if evaluate_descendant(datum, slot, gen).coeff != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# the minimal-model limit laboratory


@dataclass(frozen=True)
class LimitRow:
    """One minimal-model row (p, q) = (k, kq-1) of a limit table."""

    k: int
    c_k: Fraction
    h1k: Fraction
    h2k: Fraction
    h3k: Fraction
    fusion_allowed: bool
    slot1_null_coeff: Fraction


def _slot1_coeff_at(params: HighestWeightParams, grade: int, datum: ThreePointDatum) -> Fraction:
    vec = singular_vector(params, grade)
    if vec is None:
        raise SolverFailure(f"no singular vector at grade {grade} of {params}")
    return evaluate_descendant(datum, 1, vec).coeff


def limit_sequence(
    q: int, labels: Sequence[Tuple[int, int]], k_min: int, k_max: int
) -> List[LimitRow]:
    """Exact limit-table rows for k in [k_min, k_max].

    Per row: c_k = c_{k, kq-1}, the three weights h_n^k of the labels read
    in the (k, kq-1) Kac table, the minimal-model fusion answer, and the
    slot-1 null coefficient of the grade i1*s1 singular vector.
    """
    from .fusion import fusion_minimal

    (i1, s1), (i2, s2), (i3, s3) = [tuple(lab) for lab in labels]
    if k_min > k_max:
        raise ValueError("k_min must not exceed k_max")
    rows = []
    for k in range(k_min, k_max + 1):
        qk = k * q - 1
        if k < 2 or qk < 2:
            raise LabelOutOfBox(f"(k, kq-1) = ({k}, {qk}) is not a minimal model")
        for i_n, s_n in ((i1, s1), (i2, s2), (i3, s3)):
            if i_n >= k or s_n >= qk:
                raise LabelOutOfBox(
                    f"label ({i_n}, {s_n}) outside the Kac box of ({k}, {qk})"
                )
        c_k = central_charge_pq(k, qk)
        h1k = kac_weight_pq(k, qk, i1, s1)
        h2k = kac_weight_pq(k, qk, i2, s2)
        h3k = kac_weight_pq(k, qk, i3, s3)
        allowed = bool(fusion_minimal(k, qk, (i1, s1), (i2, s2), (i3, s3)))
        datum = ThreePointDatum(c_k, h1k, h2k, h3k)
        coeff = _slot1_coeff_at(HighestWeightParams(c_k, h1k), i1 * s1, datum)
        rows.append(LimitRow(k, c_k, h1k, h2k, h3k, allowed, coeff))
    return rows


def _poly_in_k_str(poly: BivariatePolynomial) -> str:
    bits = []
    for (i, j), coeff in sorted(poly.terms(), reverse=True):
        if j:
            raise AssertionError("closed forms are univariate in k")
        if i == 0:
            bits.append(f"{coeff}")
        elif i == 1:
            bits.append(f"{coeff}*k")
        else:
            bits.append(f"{coeff}*k^{i}")
    return " + ".join(bits) if bits else "0"


def _c_diff_closed_form(q: int) -> Tuple[BivariatePolynomial, BivariatePolynomial]:
    """Numerator and denominator in k of c_{k,kq-1} - c_{1,q}."""
    k = BivariatePolynomial.x()
    pk = k
    pq = q * k - BivariatePolynomial.const(1)
    c_inf = central_charge_pq(1, q)
    num = 13 * pk * pq - 6 * pq * pq - 6 * pk * pk - c_inf * pk * pq
    den = pk * pq
    return num, den


def _h_diff_closed_form(
    q: int, i: int, s: int
) -> Tuple[BivariatePolynomial, BivariatePolynomial]:
    """Numerator and denominator in k of h^k_{i,s} - h_{i,s}."""
    k = BivariatePolynomial.x()
    pk = k
    pq = q * k - BivariatePolynomial.const(1)
    h_inf = weight_c1q(q, i, s)
    lhs = (i * pq - s * pk) ** 2 - (pq - pk) ** 2
    num = lhs - 4 * h_inf * pk * pq
    den = 4 * pk * pq
    return num, den


def _degree_in_k(poly: BivariatePolynomial) -> int:
    return poly.total_degree()


def _strictly_decreasing(values: Sequence[Fraction]) -> bool:
    """Strict decrease, except that a tail already pinned at zero may stay there."""
    return all(
        values[i] > values[i + 1] or values[i] == values[i + 1] == 0
        for i in range(len(values) - 1)
    )


def _non_increasing(values: Sequence[Fraction]) -> bool:
    return all(values[i] >= values[i + 1] for i in range(len(values) - 1))


@dataclass
class LimitReport:
    """Exact convergence report for a limit table."""

    q: int
    labels: Tuple[Tuple[int, int], ...]
    c_limit: Fraction
    h_limits: Tuple[Fraction, Fraction, Fraction]
    c_diffs: List[Fraction]
    h_diffs: List[List[Fraction]]
    c_strictly_decreasing: bool
    h_strictly_decreasing: Tuple[bool, bool, bool]
    c_closed_form: str
    h_closed_forms: Tuple[str, str, str]
    closed_forms_match_rows: bool
    closed_form_limits_zero: bool
    fusion_values: List[bool]
    fusion_stable_value: bool
    fusion_matches_oracle: bool
    slot1_limit_value: Fraction
    slot1_diffs: List[Fraction]
    slot1_monotone: bool
    ok: bool
    notes: List[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "labels": [list(lab) for lab in self.labels],
            "c_limit": str(self.c_limit),
            "h_limits": [str(h) for h in self.h_limits],
            "c_diffs": [str(d) for d in self.c_diffs],
            "h_diffs": [[str(d) for d in col] for col in self.h_diffs],
            "c_strictly_decreasing": self.c_strictly_decreasing,
            "h_strictly_decreasing": list(self.h_strictly_decreasing),
            "c_closed_form": self.c_closed_form,
            "h_closed_forms": list(self.h_closed_forms),
            "closed_forms_match_rows": self.closed_forms_match_rows,
            "closed_form_limits_zero": self.closed_form_limits_zero,
            "fusion_values": list(self.fusion_values),
            "fusion_stable_value": self.fusion_stable_value,
            "fusion_matches_oracle": self.fusion_matches_oracle,
            "slot1_limit_value": str(self.slot1_limit_value),
            "slot1_diffs": [str(d) for d in self.slot1_diffs],
            "slot1_monotone": self.slot1_monotone,
            "ok": self.ok,
            "notes": list(self.notes),
        }


def limit_check(rows: Sequence[LimitRow], q: int, labels: Sequence[Tuple[int, int]]) -> LimitReport:
    """Verify convergence of a limit table to its c_{1,q} data, exactly.

    Checks per-row rational differences of c_k and each h_n^k against the
    limits (strict |.| decrease), matches them against closed-form rational
    functions of k whose limits vanish by degree count, requires the fusion
    answers to stabilize to the c_{1,q} oracle value, and tracks the slot-1
    null coefficients against the value at the limit point.
    """
    from .fusion import fusion_c1q

    if not rows:
        raise ValueError("rows must be nonempty")
    labels = [tuple(lab) for lab in labels]
    (i1, s1), (i2, s2), (i3, s3) = labels
    c_limit = central_charge_pq(1, q)
    h_limits = (weight_c1q(q, i1, s1), weight_c1q(q, i2, s2), weight_c1q(q, i3, s3))

    c_diffs = [row.c_k - c_limit for row in rows]
    h_cols = (
        [row.h1k - h_limits[0] for row in rows],
        [row.h2k - h_limits[1] for row in rows],
        [row.h3k - h_limits[2] for row in rows],
    )

    c_num, c_den = _c_diff_closed_form(q)
    h_forms = [_h_diff_closed_form(q, i, s) for (i, s) in labels]
    match = True
    for row, diff in zip(rows, c_diffs):
        if c_num.evaluate(row.k, 0) != diff * c_den.evaluate(row.k, 0):
            match = False
    for (num, den), col in zip(h_forms, h_cols):
        for row, diff in zip(rows, col):
            if num.evaluate(row.k, 0) != diff * den.evaluate(row.k, 0):
                match = False
    limits_zero = _degree_in_k(c_num) < _degree_in_k(c_den) and all(
        _degree_in_k(num) < _degree_in_k(den) for num, den in h_forms
    )

    fusion_values = [row.fusion_allowed for row in rows]
    top = fusion_values[len(fusion_values) // 2 :]
    if any(v != top[0] for v in top):
        raise NotStabilized(f"fusion_allowed alternates in the top half: {fusion_values}")
    stable = top[0]
    oracle = bool(fusion_c1q(q, (i1, s1), (i2, s2), (i3, s3)).value)

    datum_inf = ThreePointDatum(c_limit, *h_limits)
    slot1_inf = _slot1_coeff_at(HighestWeightParams(c_limit, h_limits[0]), i1 * s1, datum_inf)
    slot1_diffs = [abs(row.slot1_null_coeff - slot1_inf) for row in rows]

    report = LimitReport(
        q=q,
        labels=tuple(labels),
        c_limit=c_limit,
        h_limits=h_limits,
        c_diffs=c_diffs,
        h_diffs=[list(col) for col in h_cols],
        c_strictly_decreasing=_strictly_decreasing([abs(d) for d in c_diffs]),
        h_strictly_decreasing=tuple(
            _strictly_decreasing([abs(d) for d in col]) for col in h_cols
        ),
        c_closed_form=f"({_poly_in_k_str(c_num)}) / ({_poly_in_k_str(c_den)})",
        h_closed_forms=tuple(
            f"({_poly_in_k_str(num)}) / ({_poly_in_k_str(den)})" for num, den in h_forms
        ),
        closed_forms_match_rows=match,
        closed_form_limits_zero=limits_zero,
        fusion_values=fusion_values,
        fusion_stable_value=stable,
        fusion_matches_oracle=stable == oracle,
        slot1_limit_value=slot1_inf,
        slot1_diffs=slot1_diffs,
        slot1_monotone=_non_increasing(slot1_diffs),
        ok=False,
        notes=[],
    )
    report.ok = (
        report.c_strictly_decreasing
        and all(report.h_strictly_decreasing)
        and report.closed_forms_match_rows
        and report.closed_form_limits_zero
        and report.fusion_matches_oracle
        and report.slot1_monotone
    )
    return report
