"""Density bounds and the recursive size-threshold calculator.

Two ingredients:

* closed-form edge-density bounds for planar families (girth form
  (g/(g-2))(n-2); the C4-free form (15/7)n - 30/7), plus the minimum
  degree caps they imply;

* Q(m, delta, t): a lower bound on the largest size threshold such that
  every family graph of order m*t with maximum degree <= delta and at
  most that many edges is equitably m-colorable.  Computed bottom-up
  from small-m base values through per-r rows that bound the size of an
  edge-minimal non-colorable graph.  All arithmetic is exact integers;
  strict ">" bounds are stored as ">= bound+1".

`validate_tables` recomputes every published corollary branch and the
closure arguments and reports match/mismatch per claim, including the
known wording discrepancies that only the tabulated reading resolves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .graph import FamilySpec

__all__ = [
    "TRIANGLE_FREE",
    "C4_FREE",
    "FamilyDensity",
    "BoundTable",
    "density_bound",
    "family_density",
    "delta_cap",
    "base_q",
    "row_bound",
    "q_lower_bound",
    "r1_t_threshold",
    "build_bound_table",
    "validate_tables",
    "TableClaim",
]

# bound-table family kinds
TRIANGLE_FREE = "triangle-free"
C4_FREE = "c4-free"

_BASE_MAX = {TRIANGLE_FREE: 3, C4_FREE: 4}
_RMAX = {TRIANGLE_FREE: 3, C4_FREE: 4}  # delta cap of the family bounds r = |R|
_PAPER_DELTA_MIN = {TRIANGLE_FREE: 5, C4_FREE: 8}


# -- density bounds ----------------------------------------------------------


@dataclass(frozen=True)
class FamilyDensity:
    """Edge-density formula for a family plus its minimum-degree cap."""

    family: FamilySpec
    slope: Fraction
    intercept: Fraction
    min_valid_n: int
    delta_cap: int

    def bound(self, n: int) -> int:
        if n < 3:
            raise ValueError("density bounds are stated for n >= 3")
        if n < self.min_valid_n:
            # below the formula's validity order only the trivial cap holds
            return n * (n - 1) // 2
        return math.floor(self.slope * n + self.intercept)


def family_density(f: FamilySpec) -> Optional[FamilyDensity]:
    """The sharpest known density formula for the family, or None."""
    f = f.normalize()
    if not f.require_planar:
        return None
    candidates: list[tuple[Fraction, Fraction, int]] = []
    g = f.effective_min_girth()
    slope = Fraction(g, g - 2)
    # (g/(g-2))(n-2); valid once trees obey it, i.e. n >= ceil((g+2)/2)
    candidates.append((slope, -2 * slope, math.ceil(Fraction(g + 2, 2))))
    if 4 in f.forbidden_cycle_lengths and 3 not in f.forbidden_cycle_lengths:
        candidates.append((Fraction(15, 7), Fraction(-30, 7), 4))
    slope, intercept, min_valid = min(candidates, key=lambda c: (c[0], c[1]))
    two_slope = 2 * slope
    cap = int(two_slope) - 1 if two_slope.denominator == 1 else math.floor(two_slope)
    return FamilyDensity(f, slope, intercept, min_valid, cap)


def density_bound(f: FamilySpec, n: int) -> Optional[int]:
    """Max edge count for family members of order n; None if no formula known."""
    fd = family_density(f)
    return None if fd is None else fd.bound(n)


def delta_cap(f: FamilySpec) -> Optional[int]:
    fd = family_density(f)
    return None if fd is None else fd.delta_cap


def _cap(kind: str, m: int, t: int) -> int:
    if kind == TRIANGLE_FREE:
        return 2 * m * t - 4
    if kind == C4_FREE:
        return math.floor(Fraction(15 * m * t - 30, 7))
    raise ValueError(f"unknown bound family {kind!r}")


# -- base values and rows ----------------------------------------------------


def base_q(m: int, t: int, kind: str) -> int:
    """Small-m base thresholds (m <= 3 triangle-free, m <= 4 C4-free)."""
    if t < 3:
        raise ValueError("t must be at least 3")
    if kind == TRIANGLE_FREE:
        if m == 1:
            return 0
        if m == 2:
            return 3
        if m == 3:
            return 2 * t
    elif kind == C4_FREE:
        if m == 1:
            return 0
        if m == 2:
            return 2
        if m == 3:
            return 6
        if m == 4:
            return 3 * t
    else:
        raise ValueError(f"unknown bound family {kind!r}")
    raise ValueError(f"no base value for m={m} in family {kind}")


def _condition_i(m: int, r: int, delta: int, t: int, kind: str) -> bool:
    """(m-r)t + 1 > (t-1)(c+delta)/2 with c = 1 (triangle-free) or 2 (C4-free)."""
    c = 1 if kind == TRIANGLE_FREE else 2
    return 2 * ((m - r) * t + 1) > (t - 1) * (c + delta)


def row_bound(
    m: int, r: int, delta: int, t: int, q: dict[int, int], kind: str
) -> int:
    """Guaranteed size lower bound (non-strict) for an edge-minimal
    non-m-colorable family graph whose reachable-class set has size r.

    The published tables list these values minus one (they state strict
    ">" bounds).
    """
    if not 1 <= r <= _RMAX[kind]:
        raise ValueError(f"r must be in 1..{_RMAX[kind]} for {kind}")
    if r not in q or (m - r) not in q:
        raise ValueError(f"bound table missing entries for r={r} or m-r={m - r}")
    lower = r * (m - r) * t + q[r] + q[m - r] - delta + 4
    if _condition_i(m, r, delta, t, kind):
        return lower
    threshold = (r + 1) * (m - r) * t - t + 2 + q[r]
    return min(lower, threshold + 1)


def r1_t_threshold(m: int, delta: int) -> Optional[int]:
    """Smallest t with (t-1)*delta - 1 >= (m-1)*t, or None if never.

    An r=1 counterexample needs the degree budget of the single reachable
    class to cover at least (m-1)t edges into the rest, which fails below
    this order multiplier.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    coeff = delta - m + 1
    if coeff <= 0:
        return None
    return -(-(delta + 1) // coeff)  # ceil


@dataclass(frozen=True)
class RowProvenance:
    r: int
    rule: str  # "unconditional" | "conditional" | "r1-impossible"
    value: Optional[int]  # strict: counterexample needs e > value; None if no such r


@dataclass(frozen=True)
class QProvenance:
    m: int
    delta: int
    t: int
    kind: str
    source: str  # "base" | "rows"
    rows: tuple[RowProvenance, ...]
    unclipped: Optional[int]  # min over rows (strict bound), before the cap
    cap: int
    clipped: bool
    extrapolated: bool
    winning_r: Optional[int]
    strengthened_r1: bool


def q_lower_bound(
    m: int,
    delta: int,
    t: int,
    kind: str,
    strengthen_r1: bool = False,
    _memo: Optional[dict] = None,
) -> tuple[int, QProvenance]:
    """Lower bound on the colorability size threshold, with provenance.

    Recursion over per-r rows, memoized bottom-up from the base values and
    clipped at the family density cap.  `strengthen_r1` additionally rules
    out r=1 below `r1_t_threshold`; the published branch values are
    reproduced with it off.
    """
    if t < 3:
        raise ValueError("t must be at least 3")
    if m < 1:
        raise ValueError("m must be at least 1")
    memo = _memo if _memo is not None else {}
    key = (m, delta, t, kind, strengthen_r1)
    if key in memo:
        return memo[key]
    cap = _cap(kind, m, t)
    extrapolated = delta < _PAPER_DELTA_MIN[kind]
    if m <= _BASE_MAX[kind]:
        value = base_q(m, t, kind)
        prov = QProvenance(
            m, delta, t, kind, "base", (), None, cap, False, extrapolated, None, strengthen_r1
        )
        memo[key] = (value, prov)
        return memo[key]

    q_values: dict[int, int] = {}
    for mm in range(1, m):
        q_values[mm], _ = q_lower_bound(mm, delta, t, kind, strengthen_r1, memo)

    rows: list[RowProvenance] = []
    strict_values: list[tuple[int, int]] = []
    threshold = r1_t_threshold(m, delta)
    for r in range(1, min(_RMAX[kind], m - 1) + 1):
        if strengthen_r1 and r == 1 and (threshold is None or t < threshold):
            rows.append(RowProvenance(1, "r1-impossible", None))
            continue
        value = row_bound(m, r, delta, t, q_values, kind) - 1
        rule = "unconditional" if _condition_i(m, r, delta, t, kind) else "conditional"
        rows.append(RowProvenance(r, rule, value))
        strict_values.append((value, r))

    unclipped = min(strict_values)[0] if strict_values else None
    winning_r = min(strict_values)[1] if strict_values else None
    value = cap if unclipped is None else min(cap, unclipped)
    prov = QProvenance(
        m,
        delta,
        t,
        kind,
        "rows",
        tuple(rows),
        unclipped,
        cap,
        unclipped is None or unclipped > cap,
        extrapolated,
        winning_r,
        strengthen_r1,
    )
    memo[key] = (value, prov)
    return memo[key]


@dataclass(frozen=True)
class BoundTable:
    """Q values for m = 1..max_m at fixed (delta, t), with per-row provenance."""

    kind: str
    delta: int
    t: int
    q: dict[int, int]
    provenance: dict[int, QProvenance]


def build_bound_table(
    kind: str, delta: int, t: int, max_m: int, strengthen_r1: bool = False
) -> BoundTable:
    memo: dict = {}
    q: dict[int, int] = {}
    prov: dict[int, QProvenance] = {}
    for m in range(1, max_m + 1):
        q[m], prov[m] = q_lower_bound(m, delta, t, kind, strengthen_r1, memo)
    return BoundTable(kind, delta, t, q, prov)


# -- published-claim validation ----------------------------------------------


@dataclass(frozen=True)
class TableClaim:
    claim_id: str
    description: str
    status: str  # "match" | "annotated-match" | "mismatch"
    details: tuple[str, ...] = ()


def _branch(t: int, first: Callable[[int], int], second: Callable[[int], int], switch: int) -> int:
    return first(t) if t < switch else second(t)


_COROLLARY_CLAIMS = [
    # (id, kind, m, delta, first branch, second branch, switch t)
    ("q-4-6", TRIANGLE_FREE, 4, 6, lambda t: 5 * t - 3, lambda t: 4 * t + 3, 6),
    ("q-4-7", TRIANGLE_FREE, 4, 7, lambda t: 5 * t - 4, lambda t: 4 * t + 2, 6),
    ("q-5-6", TRIANGLE_FREE, 5, 6, lambda t: 9 * t - 6, lambda t: 8 * t, 6),
    ("q-5-7", TRIANGLE_FREE, 5, 7, lambda t: 9 * t - 8, lambda t: 8 * t - 2, 6),
    ("p-5-8", C4_FREE, 5, 8, lambda t: 7 * t - 5, lambda t: 6 * t + 3, 8),
    ("p-6-8", C4_FREE, 6, 8, lambda t: 12 * t - 10, lambda t: 9 * t + 7, 6),
    ("p-7-8", C4_FREE, 7, 8, lambda t: 18 * t - 15, lambda t: 15 * t + 1, 6),
]

_T_RANGE = range(3, 13)


def _published_value(kind: str, m: int, delta: int, t: int) -> Optional[int]:
    """Counterexample size bound before density clipping (what the branch
    formulas state)."""
    _, prov = q_lower_bound(m, delta, t, kind)
    return prov.unclipped


def _lemma_reading_q5(delta: int, t: int) -> int:
    """Third min-term read literally as 7t+2 (instead of q3 + 7t + 2)."""
    q3 = base_q(3, t, TRIANGLE_FREE)
    q4, _ = q_lower_bound(4, delta, t, TRIANGLE_FREE)
    return min(q3 + 6 * t + 6 - delta, q4 + 4 * t + 3 - delta, 7 * t + 2)


def _lemma_reading_p5(delta: int, t: int) -> int:
    """Stated min without the r=1 row term p4 + 4t + 3 - delta."""
    p4 = base_q(4, t, C4_FREE)
    return min(p4 + 16 * t + 3 - delta, 6 * t + 11 - delta, 7 * t + 2)


def _closure_claim(
    claim_id: str,
    description: str,
    kind: str,
    m: int,
    delta: int,
    note: Optional[str] = None,
) -> TableClaim:
    """Check that every per-r row exceeds the density cap (no counterexample),
    i.e. the threshold equals the cap for all tested t."""
    details = []
    ok = True
    for t in _T_RANGE:
        cap = _cap(kind, m, t)
        value, prov = q_lower_bound(m, delta, t, kind, strengthen_r1=True)
        row_text = ", ".join(
            f"r={row.r}:{'none' if row.value is None else row.value}"
            for row in prov.rows
        )
        closed = prov.unclipped is None or prov.unclipped >= cap
        if not closed:
            ok = False
        details.append(
            f"t={t}: cap={cap} rows[{row_text}] -> {'closed' if closed else 'OPEN'}"
        )
    status = "match" if ok else "mismatch"
    if ok and note:
        status = "annotated-match"
        details.append(note)
    return TableClaim(claim_id, description, status, tuple(details))


def validate_tables() -> list[TableClaim]:
    """Recompute every published branch and closure; mismatches are entries,
    not faults."""
    claims: list[TableClaim] = []

    for claim_id, kind, m, delta, first, second, switch in _COROLLARY_CLAIMS:
        details = []
        ok = True
        for t in _T_RANGE:
            expected = _branch(t, first, second, switch)
            computed = _published_value(kind, m, delta, t)
            if computed != expected:
                ok = False
            details.append(f"t={t}: expected={expected} computed={computed}")
        if claim_id == "p-7-8" and ok:
            # counterexample bound exceeds the density cap floor((15mt-30)/7)
            # from t=4 on; the established table value is the cap 15t-5
            # (one below the 15t-4 sometimes quoted)
            claims.append(
                TableClaim(
                    claim_id,
                    f"{kind} m={m} delta<={delta} branch values",
                    "annotated-match",
                    tuple(
                        details
                        + [
                            "threshold clips at the density cap 15t-5 for t>=4; "
                            "the rounded-up 15t-4 reading is rejected (cap is a floor)"
                        ]
                    ),
                )
            )
            continue
        claims.append(
            TableClaim(
                claim_id,
                f"{kind} m={m} delta<={delta} branch values",
                "match" if ok else "mismatch",
                tuple(details),
            )
        )

    # wording discrepancies: the stated min-expressions disagree with the
    # tabulated rows; only the table reading reproduces the branch values
    details = []
    diverged = None
    for t in _T_RANGE:
        table = _published_value(TRIANGLE_FREE, 5, 6, t)
        literal = _lemma_reading_q5(6, t)
        if literal != table and diverged is None:
            diverged = t
        details.append(f"t={t}: table={table} literal={literal}")
    details.append(
        "literal third term 7t+2 diverges"
        + (f" from t={diverged}" if diverged else " never")
        + "; tabulated reading q3+7t+2 matches the published branches"
    )
    claims.append(
        TableClaim(
            "q-5-third-term-reading",
            "five-class recursion: bare 7t+2 vs tabulated q3+7t+2",
            "annotated-match",
            tuple(details),
        )
    )

    details = []
    diverged = None
    for t in _T_RANGE:
        table = _published_value(C4_FREE, 5, 8, t)
        literal = _lemma_reading_p5(8, t)
        if literal != table and diverged is None:
            diverged = t
        details.append(f"t={t}: table={table} literal={literal}")
    details.append(
        "stated min omits the r=1 row p4+4t+3-delta"
        + (f"; diverges from t={diverged}" if diverged else "")
        + "; with it the 7t-5 branch appears"
    )
    claims.append(
        TableClaim(
            "p-5-missing-r1-reading",
            "five-class threshold: stated min vs tabulated rows",
            "annotated-match",
            tuple(details),
        )
    )

    # closure arguments: per-r bounds exceed the density cap, so the
    # threshold reaches the cap itself
    claims.append(
        _closure_claim(
            "q-6-closure",
            "triangle-free m=6 delta<=7 closes at cap 12t-4",
            TRIANGLE_FREE,
            6,
            7,
        )
    )
    claims.append(
        _closure_claim(
            "q-7-closure",
            "triangle-free m=7 delta<=7 closes at cap 14t-4",
            TRIANGLE_FREE,
            7,
            7,
        )
    )
    claims.append(
        _closure_claim(
            "p-7-closure",
            "C4-free m=7 delta<=8 closes at cap 15t-5",
            C4_FREE,
            7,
            8,
            note=(
                "closing step cites 15t-4 for the established m=7 value; the "
                "cap floor is 15t-5 and the closure still holds with it"
            ),
        )
    )
    claims.append(
        _closure_claim(
            "p-8-closure",
            "C4-free m=8 delta<=8 closes at cap floor((120t-30)/7)",
            C4_FREE,
            8,
            8,
        )
    )
    return claims
