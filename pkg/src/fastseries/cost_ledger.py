"""Deterministic accounting of DFT events and scalar work, with stage reports.

Unit convention: relative to a block size ``k``, a DFT event of order ``q*k``
costs ``q`` units, so one unit is one order-k transform.  Multiplication in
the transform model costs six units of the doubled length, so totals can also
be read in multiplication units by dividing by six.  High-level stage budgets
are quoted per ``m/k``, i.e. in units of a hypothetical order-m transform.

A ledger is an explicitly passed recording context; nothing here is global.
Recording is meant to happen on a single thread per ledger, and merging of
sub-ledgers is associative and order-independent at the aggregate level.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction

# Stage constants the algorithms are expected to approach for large m/k.
EXPECTED_STAGE_UNITS: dict[str, float] = {
    "exp.stage1": 13.0,
    "exp.log": 6.0,
    "exp.final": 4.0,
    "pow.s.first": 10.5,
    "pow.s.second": 10.0,
    "pow.f": 10.0,
    "pow.log": 6.0,
    "pow.final": 4.0,
}

# Stages excluded from main-term budget checks (baseline prefix computations).
BOOTSTRAP_PREFIX = "bootstrap."

# Label used for the boundary inverse inside the block middle product.  It is
# tagged separately because an order-2k inverse would suffice there; reports
# show both readings.
BOUNDARY_INVERSE_LABEL = "u-boundary"


@dataclass(frozen=True)
class DftEvent:
    order: int
    stage: str
    label: str


@dataclass
class StageBudget:
    """Measured units for one stage next to the constant it should approach."""

    stage: str
    expected: float | None
    units: Fraction
    per_mk: float
    events: int


class CostLedger:
    """Append-only record of DFT events plus coarse scalar-operation counters."""

    def __init__(self):
        self.events: list[DftEvent] = []
        self.scalar: dict[str, int] = {}
        self._stage_stack: list[str] = []
        self._touched: list[str] = []

    # -- recording ---------------------------------------------------------

    @property
    def current_stage(self) -> str:
        return self._stage_stack[-1] if self._stage_stack else ""

    @contextlib.contextmanager
    def stage(self, tag: str):
        """Scope all events recorded inside to the given stage tag."""
        self._stage_stack.append(tag)
        if tag not in self._touched:
            self._touched.append(tag)
        try:
            yield self
        finally:
            self._stage_stack.pop()

    def touch_stage(self, tag: str):
        """Register a stage that ran even if it records no DFT events."""
        if tag not in self._touched:
            self._touched.append(tag)

    def record_dft(self, order: int, stage: str | None = None, label: str | None = None):
        tag = stage if stage is not None else self.current_stage
        self.events.append(DftEvent(int(order), tag, label or ""))

    def add_scalar(self, kind: str, count: int):
        self.scalar[kind] = self.scalar.get(kind, 0) + int(count)

    def merge(self, other: "CostLedger") -> "CostLedger":
        out = CostLedger()
        out.events = self.events + other.events
        out.scalar = dict(self.scalar)
        for kind, cnt in other.scalar.items():
            out.scalar[kind] = out.scalar.get(kind, 0) + cnt
        out._touched = list(self._touched)
        for tag in other._touched:
            if tag not in out._touched:
                out._touched.append(tag)
        return out

    # -- aggregation ---------------------------------------------------------

    def units_for(self, k: int, stage: str | None = None, label: str | None = None) -> Fraction:
        """Total units relative to block size k over matching events."""
        total = Fraction(0)
        for ev in self.events:
            if stage is not None and ev.stage != stage:
                continue
            if label is not None and ev.label != label:
                continue
            total += Fraction(ev.order, k)
        return total

    def units_by_stage(self, k: int) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for ev in self.events:
            out[ev.stage] = out.get(ev.stage, Fraction(0)) + Fraction(ev.order, k)
        for tag in self._touched:
            out.setdefault(tag, Fraction(0))
        return out

    def units_total(self, k: int, include_bootstrap: bool = True) -> Fraction:
        total = Fraction(0)
        for ev in self.events:
            if not include_bootstrap and ev.stage.startswith(BOOTSTRAP_PREFIX):
                continue
            total += Fraction(ev.order, k)
        return total

    def event_count(self, stage: str | None = None, label: str | None = None) -> int:
        n = 0
        for ev in self.events:
            if stage is not None and ev.stage != stage:
                continue
            if label is not None and ev.label != label:
                continue
            n += 1
        return n


def stage_table(ledger: CostLedger, plan) -> list[StageBudget]:
    """Per-stage measured units normalized by m/k, next to the expected constants."""
    mk = Fraction(plan.m, plan.k)
    rows = []
    for tag in sorted(ledger.units_by_stage(plan.k)):
        units = ledger.units_for(plan.k, stage=tag)
        rows.append(
            StageBudget(
                stage=tag,
                expected=EXPECTED_STAGE_UNITS.get(tag),
                units=units,
                per_mk=float(units / mk),
                events=ledger.event_count(stage=tag),
            )
        )
    return rows


def report(ledger: CostLedger, plan) -> list[StageBudget]:
    """The stage budget table; see report_text/report_kv for rendered forms."""
    return stage_table(ledger, plan)


def main_term_units(ledger: CostLedger, k: int) -> Fraction:
    """Units excluding bootstrap stages (the baseline prefix work)."""
    return ledger.units_total(k, include_bootstrap=False)


def _fmt(x) -> str:
    return format(float(x), ".6g")


def report_text(ledger: CostLedger, plan) -> str:
    """Human-readable budget table: one stage per line."""
    mk = Fraction(plan.m, plan.k)
    lines = [
        f"plan k={plan.k} n={plan.n} m={plan.m} target={plan.target} m/k={_fmt(mk)}",
        f"{'stage':<16} {'expected':>9} {'per-mk':>9} {'units':>9} {'events':>7}",
    ]
    for row in stage_table(ledger, plan):
        exp = _fmt(row.expected) if row.expected is not None else "-"
        lines.append(
            f"{row.stage:<16} {exp:>9} {_fmt(row.per_mk):>9} {_fmt(row.units):>9} {row.events:>7}"
        )
    main = main_term_units(ledger, plan.k)
    lines.append(f"total (main term) units={_fmt(main)} per-mk={_fmt(main / mk)}")
    bnd = ledger.units_for(plan.k, label=BOUNDARY_INVERSE_LABEL)
    if bnd:
        lines.append(
            f"boundary inverses counted at 3 units = {_fmt(bnd)}; at 2k they would be {_fmt(bnd * Fraction(2, 3))}"
        )
    for kind in sorted(ledger.scalar):
        lines.append(f"scalar {kind}={ledger.scalar[kind]}")
    return "\n".join(lines) + "\n"


def report_kv(ledger: CostLedger, plan) -> str:
    """Machine-readable key=value form of the same report."""
    mk = Fraction(plan.m, plan.k)
    lines = [
        f"plan.k={plan.k}",
        f"plan.n={plan.n}",
        f"plan.m={plan.m}",
        f"plan.target={plan.target}",
        f"plan.mk={_fmt(mk)}",
    ]
    for row in stage_table(ledger, plan):
        tag = row.stage
        if row.expected is not None:
            lines.append(f"stage.{tag}.expected={_fmt(row.expected)}")
        lines.append(f"stage.{tag}.units={_fmt(row.units)}")
        lines.append(f"stage.{tag}.per_mk={_fmt(row.per_mk)}")
        lines.append(f"stage.{tag}.events={row.events}")
    main = main_term_units(ledger, plan.k)
    lines.append(f"total.main.units={_fmt(main)}")
    lines.append(f"total.main.per_mk={_fmt(main / mk)}")
    bnd = ledger.units_for(plan.k, label=BOUNDARY_INVERSE_LABEL)
    lines.append(f"note.boundary_inverse.units={_fmt(bnd)}")
    lines.append(f"note.boundary_inverse.units_if_2k={_fmt(bnd * Fraction(2, 3))}")
    for kind in sorted(ledger.scalar):
        lines.append(f"scalar.{kind}={ledger.scalar[kind]}")
    return "\n".join(lines) + "\n"
