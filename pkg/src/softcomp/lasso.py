"""Eventually periodic streams ``prefix . cycle^omega`` in canonical form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator


def _primitive_root(word: tuple) -> tuple:
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True, init=False)
class Lasso:
    """An eventually periodic stream.

    Instances are always canonical: the prefix is as short as possible and
    the cycle is primitive, so two lassos are equal exactly when they
    denote the same stream.
    """

    prefix: tuple
    cycle: tuple

    def __init__(self, prefix=(), cycle=()):
        prefix = list(prefix)
        cycle = tuple(cycle)
        if not cycle:
            raise ValueError("lasso cycle must be nonempty")
        cycle = _primitive_root(cycle)
        # fold the prefix back into the loop while its tail agrees with it
        while prefix and prefix[-1] == cycle[-1]:
            prefix.pop()
            cycle = cycle[-1:] + cycle[:-1]
        object.__setattr__(self, "prefix", tuple(prefix))
        object.__setattr__(self, "cycle", cycle)

    def __len__(self):
        """Number of distinct positions (prefix plus one turn of the cycle)."""
        return len(self.prefix) + len(self.cycle)

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError(n)
        p = len(self.prefix)
        if n < p:
            return self.prefix[n]
        return self.cycle[(n - p) % len(self.cycle)]

    def successor(self, pos: int) -> int:
        """Next position in the lasso graph over ``range(len(self))``."""
        pos += 1
        return pos if pos < len(self) else len(self.prefix)

    def position(self, n: int) -> int:
        """Lasso-graph position of stream index ``n``."""
        p = len(self.prefix)
        if n < p:
            return n
        return p + (n - p) % len(self.cycle)

    def shift(self, k: int) -> "Lasso":
        """The ``k``-th derivative: the stream with its first ``k`` letters dropped."""
        p = len(self.prefix)
        if k <= p:
            return Lasso(self.prefix[k:], self.cycle)
        r = (k - p) % len(self.cycle)
        return Lasso((), self.cycle[r:] + self.cycle[:r])

    def take(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def letters(self) -> Iterator:
        """Letters at the positions of the lasso graph."""
        yield from self.prefix
        yield from self.cycle

    def map(self, f) -> "Lasso":
        return Lasso(tuple(map(f, self.prefix)), tuple(map(f, self.cycle)))

    def to_json(self) -> dict:
        return {"prefix": list(self.prefix), "cycle": list(self.cycle)}

    @classmethod
    def from_json(cls, data) -> "Lasso":
        return cls(tuple(data.get("prefix", ())), tuple(data["cycle"]))

    def __str__(self):
        head = "<" + ", ".join(map(str, self.prefix)) + ">" if self.prefix else ""
        return head + "<" + ", ".join(map(str, self.cycle)) + ">^w"
