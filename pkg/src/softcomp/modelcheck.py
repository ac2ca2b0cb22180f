"""Deciding whether every behaviour of an SCA satisfies a formula."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import buchi, logic
from .buchi import Budget
from .errors import CapacityError, DomainError, SoftCompError
from .lasso import Lasso
from .logic import Formula, Not


@dataclass
class Verdict:
    holds: bool
    counterexample: Optional[Lasso] = None
    sizes: list = field(default_factory=list)
    elapsed: float = 0.0

    def __bool__(self):
        return self.holds


class VerificationFailure(SoftCompError):
    """A counterexample did not survive re-verification (an internal bug)."""


def _check_alphabet(sca, phi):
    unknown = sorted(logic.atoms(phi) - set(sca.cas.actions))
    if unknown:
        raise DomainError(f"formula mentions actions outside the CAS: {', '.join(unknown)}")


def check(sca, phi: Formula, budget: Optional[Budget] = None, dump_dir=None) -> Verdict:
    """Decide ``sca |= phi``.

    Builds the automaton of the negated formula, intersects it with the
    behaviour automaton and searches for an accepted lasso.  Any lasso found
    is checked again against the automaton (directly, not via the product)
    and against the formula before it is returned.
    """
    _check_alphabet(sca, phi)
    budget = budget if budget is not None else Budget()
    start = time.perf_counter()
    system = budget.record("system", buchi.sca_to_ba(sca))
    negated = logic.Compiler(sca.cas, budget).compile(Not(phi))
    product = buchi.intersect(system, negated, budget)
    if dump_dir is not None:
        _dump(dump_dir, {"system": system, "negation": negated, "product": product})
    witness = buchi.emptiness(product)
    if witness is not None:
        if not sca.accepts(witness):
            raise VerificationFailure(f"{witness} is not a behaviour of {sca.name}")
        violates = buchi.member(negated, witness)
        if violates and not logic.uses_composition(phi):
            violates = not logic.satisfies_direct(witness, phi)
        if not violates:
            raise VerificationFailure(f"{witness} does not violate {phi}")
    return Verdict(witness is None, witness, list(budget.sizes), time.perf_counter() - start)


def check_interface(sca, phi: Formula, budget: Optional[Budget] = None, dump_dir=None) -> Verdict:
    """Every stream composable with a behaviour of ``sca`` satisfies ``phi``."""
    return check(sca, Not(logic.Composable(Not(phi))), budget, dump_dir)


def _dump(directory, automata):
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    for name, ba in automata.items():
        (path / f"{name}.hoa").write_text(buchi.to_hoa(ba, name))


def verdict_report(verdict, sca, phi: Formula) -> dict:
    """Machine-readable summary of a check; ``verdict`` may also be a CapacityError."""
    sr = sca.semiring
    report = {
        "sca": sca.name,
        "formula": str(phi),
        "threshold": sr.to_json(sca.threshold),
        "thresholds": {name: sr.to_json(t) for name, t in sca.factors},
    }
    if isinstance(verdict, CapacityError):
        report.update(verdict="aborted", stage=verdict.stage, limit=verdict.limit,
                      counterexample=None)
        return report
    report.update(
        verdict="holds" if verdict.holds else "fails",
        counterexample=verdict.counterexample.to_json() if verdict.counterexample else None,
        sizes=[{"stage": stage, "states": n} for stage, n in verdict.sizes],
        seconds=round(verdict.elapsed, 6),
    )
    return report
