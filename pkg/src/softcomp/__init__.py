"""Soft Component Automata: preference-labelled components, their composition,
model checking against an LTL dialect with captures/composable connectives,
and threshold diagnostics."""

from .buchi import Ba, Budget
from .cas import Cas, ValidationReport, Violation, identity_cas, with_halt
from .diagnostics import (DiagnosticTrace, SuspectResult, diagnostic_preference, excludes_at,
                          find_suspect, innocence, is_suspect, suspects, threshold_bound_holds)
from .errors import (CapacityError, CasAxiomError, CompositionError, DanglingReferenceError,
                     DomainError, FormulaSyntaxError, IncomposableError, PreconditionError,
                     SchemaError, SoftCompError, UnderspecifiedError, UnsupportedConnectiveError)
from .lasso import Lasso
from .logic import compile_formula, parse, satisfies, satisfies_direct
from .modelcheck import Verdict, check, check_interface, verdict_report
from .sca import Sca, Transition, compose, compose_all, halt_augment
from .semiring import WEIGHTED, ProductSemiring, Semiring, WeightedSemiring
from .system import SystemFile, load, load_fixture

__all__ = [name for name in dir() if not name.startswith("_")]
