"""Constraint semirings (c-semirings) used as preference algebras.

A semiring exposes a finite ``big_sum`` (the lattice join), a product
``times`` used to combine preferences of composed actions, and the
constants ``zero`` (least preferred) and ``one`` (most preferred).  The
order ``leq`` is derived from the sum: ``e <= e'`` iff ``e + e' == e'``.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable

from .errors import DomainError

INF = math.inf


class Semiring(ABC):
    zero: Any
    one: Any

    @abstractmethod
    def contains(self, e) -> bool:
        """Carrier membership."""

    @abstractmethod
    def _join(self, a, b):
        """Binary sum on already-validated elements."""

    @abstractmethod
    def _times(self, a, b):
        pass

    @abstractmethod
    def _meet(self, a, b):
        pass

    @abstractmethod
    def coerce(self, value):
        """Convert a user or JSON value into a carrier element."""

    @abstractmethod
    def to_json(self, e):
        pass

    @abstractmethod
    def describe(self):
        """JSON description of this semiring, as found in system files."""

    def check(self, e):
        if not self.contains(e):
            raise DomainError(f"{e!r} is not an element of the {self} carrier")
        return e

    def big_sum(self, elements: Iterable) -> Any:
        total = self.zero
        for e in elements:
            total = self._join(total, self.check(e))
        return total

    def plus(self, a, b):
        return self._join(self.check(a), self.check(b))

    def times(self, a, b):
        return self._times(self.check(a), self.check(b))

    def product(self, elements: Iterable) -> Any:
        """Fold ``times`` over ``elements``; the empty product is ``one``."""
        return reduce(self.times, elements, self.one)

    def leq(self, a, b) -> bool:
        return self.plus(a, b) == b

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def glb(self, elements: Iterable) -> Any:
        items = [self.check(e) for e in elements]
        if not items:
            raise DomainError("greatest lower bound of an empty set is not supported")
        return reduce(self._meet, items)

    def from_json(self, value):
        return self.coerce(value)

    def element(self, value):
        """Accept either a carrier element or anything ``coerce`` understands."""
        return value if self.contains(value) else self.check(self.coerce(value))


def _weight(value):
    if isinstance(value, bool):
        raise DomainError(f"{value!r} is not a weight")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "+inf"):
            return INF
        try:
            value = Fraction(Decimal(text))
        except Exception as exc:
            raise DomainError(f"cannot read weight {value!r}") from exc
    if isinstance(value, float):
        if math.isnan(value):
            raise DomainError("NaN is not a weight")
        if math.isinf(value):
            if value < 0:
                raise DomainError("-inf is not a weight")
            return INF
        value = Fraction(value)
    elif isinstance(value, (int, Decimal)):
        value = Fraction(value)
    if not isinstance(value, Fraction):
        raise DomainError(f"{value!r} is not a weight")
    if value < 0:
        raise DomainError(f"negative weight {value}")
    return value


@dataclass(frozen=True)
class WeightedSemiring(Semiring):
    """Nonnegative extended reals with infimum as sum and addition as product.

    Finite values are exact: ``Fraction`` objects (plain nonnegative ints are
    accepted too), infinity is ``math.inf``.  Lower weight means higher preference, so the derived
    order is the reverse of the numeric one.
    """

    @property
    def zero(self):
        return INF

    @property
    def one(self):
        return Fraction(0)

    def contains(self, e) -> bool:
        if e == INF and isinstance(e, float):
            return True
        if isinstance(e, bool):
            return False
        return isinstance(e, (Fraction, int)) and e >= 0

    def _join(self, a, b):
        return a if a <= b else b

    def _times(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def _meet(self, a, b):
        return a if a >= b else b

    def coerce(self, value):
        return _weight(value)

    def to_json(self, e):
        e = self.check(e)
        if e == INF:
            return "inf"
        if e.denominator == 1:
            return int(e)
        as_float = float(e)
        if Fraction(as_float) == e:
            return as_float
        return str(e)

    def describe(self):
        return "weighted"

    def __str__(self):
        return "weighted"


@dataclass(frozen=True)
class ProductSemiring(Semiring):
    """Componentwise pairing of two semirings; elements are 2-tuples."""

    left: Semiring
    right: Semiring

    @property
    def zero(self):
        return (self.left.zero, self.right.zero)

    @property
    def one(self):
        return (self.left.one, self.right.one)

    def contains(self, e) -> bool:
        return (isinstance(e, tuple) and len(e) == 2
                and self.left.contains(e[0]) and self.right.contains(e[1]))

    def _join(self, a, b):
        return (self.left._join(a[0], b[0]), self.right._join(a[1], b[1]))

    def _times(self, a, b):
        return (self.left._times(a[0], b[0]), self.right._times(a[1], b[1]))

    def _meet(self, a, b):
        return (self.left._meet(a[0], b[0]), self.right._meet(a[1], b[1]))

    def coerce(self, value):
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise DomainError(f"{value!r} is not a pair")
        return (self.left.coerce(value[0]), self.right.coerce(value[1]))

    def to_json(self, e):
        e = self.check(e)
        return [self.left.to_json(e[0]), self.right.to_json(e[1])]

    def describe(self):
        return {"product": [self.left.describe(), self.right.describe()]}

    def __str__(self):
        return f"({self.left} x {self.right})"


WEIGHTED = WeightedSemiring()


def semiring_from_spec(spec) -> Semiring:
    """Build a semiring from its system-file description."""
    if spec == "weighted":
        return WEIGHTED
    if isinstance(spec, dict) and set(spec) == {"product"}:
        parts = spec["product"]
        if not isinstance(parts, list) or len(parts) != 2:
            raise DomainError("a product semiring needs exactly two components")
        return ProductSemiring(semiring_from_spec(parts[0]), semiring_from_spec(parts[1]))
    raise DomainError(f"unknown semiring description {spec!r}")
