"""Experiment layout, event coordinate system and exact scalars.

Every module in the package shares the conventions defined here: event
coordinates are indexed by the canonical event order of a configuration,
and all polyhedral data is exact (arbitrary-precision rationals).
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

#: Exact scalar used throughout the polyhedral kernel.  ``fractions.Fraction``
#: already guarantees the invariants we need: positive denominator, fully
#: reduced, zero stored as 0/1.
Rational = Fraction

#: Anything accepted where an exact number is expected.
NumberLike = Union[int, Fraction]


class CorrPolyError(Exception):
    """Base class for errors raised by this package."""


class ParseError(CorrPolyError):
    """Malformed textual input (files, inequalities, angle expressions)."""


class CapacityError(CorrPolyError):
    """A configurable size guard was exceeded (vertex or ray cap)."""


@dataclass(frozen=True)
class Configuration:
    """Measurement layout: one entry per particle giving its setting count.

    Uniform layouts (n particles, m settings each) are the common case but
    per-particle setting counts may differ.
    """

    settings: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.settings) < 1:
            raise ValueError("configuration needs at least one particle")
        if any(m < 1 for m in self.settings):
            raise ValueError("every particle needs at least one setting")
        if len(self.settings) > len(string.ascii_lowercase):
            raise ValueError("at most 26 particles supported (letter labels)")

    @classmethod
    def uniform(cls, particles: int, measurements: int) -> "Configuration":
        return cls((measurements,) * particles)

    @property
    def particles(self) -> int:
        return len(self.settings)

    @property
    def propositions(self) -> int:
        """Number of elementary propositions (one per particle/setting pair)."""
        return sum(self.settings)

    def proposition_pairs(self) -> list[tuple[int, int]]:
        """(particle, setting) pairs in particle-major order."""
        return [(p, s) for p, m in enumerate(self.settings) for s in range(m)]

    def __str__(self) -> str:
        return ",".join(str(m) for m in self.settings)


@dataclass(frozen=True)
class EventLabel:
    """A single or joint detection event.

    ``particles`` lists the supporting particles in ascending order and
    ``choices`` the chosen setting for each of them.  Within one particle
    only a single setting can take part in an event.
    """

    particles: tuple[int, ...]
    choices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.particles:
            raise ValueError("event support must be non-empty")
        if len(self.particles) != len(self.choices):
            raise ValueError("one setting choice per supported particle")
        if list(self.particles) != sorted(set(self.particles)):
            raise ValueError("support must be strictly ascending particles")

    @property
    def arity(self) -> int:
        return len(self.particles)

    def label(self) -> str:
        """Render as concatenated letter+setting tokens, e.g. ``a1b2c1``."""
        return "".join(
            f"{string.ascii_lowercase[p]}{s + 1}"
            for p, s in zip(self.particles, self.choices)
        )

    def sort_key(self) -> tuple:
        return (len(self.particles), self.particles, self.choices)

    def __str__(self) -> str:
        return self.label()


def enumerate_events(config: Configuration) -> list[EventLabel]:
    """Canonical ordered event list of a configuration.

    Order: support cardinality ascending, then support lexicographically,
    then setting choices lexicographically.  All coefficient vectors and
    file columns in this package use this order.
    """
    events: list[EventLabel] = []
    n = config.particles
    for k in range(1, n + 1):
        for support in itertools.combinations(range(n), k):
            ranges = [range(config.settings[p]) for p in support]
            for choices in itertools.product(*ranges):
                events.append(EventLabel(support, choices))
    return events


def event_count(config: Configuration) -> int:
    """Closed form for ``len(enumerate_events(config))``."""
    total = 1
    for m in config.settings:
        total *= m + 1
    return total - 1


def label_index(config: Configuration) -> dict[str, int]:
    """Map from rendered event label to canonical coordinate index."""
    return {ev.label(): i for i, ev in enumerate(enumerate_events(config))}


@dataclass(frozen=True)
class ProbabilityVector:
    """One probability per event, in canonical event order."""

    values: tuple
    config: Configuration = field(repr=False)

    def __post_init__(self) -> None:
        expected = event_count(self.config)
        if len(self.values) != expected:
            raise ValueError(
                f"expected {expected} probabilities, got {len(self.values)}"
            )
        for v in self.values:
            if not 0 <= v <= 1:
                raise ValueError(f"probability {v!r} outside [0, 1]")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def as_rational(value: NumberLike) -> Fraction:
    """Coerce an exact number-like value to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact number, got {type(value).__name__}")


def rational_vector(values: Iterable[NumberLike]) -> tuple[Fraction, ...]:
    return tuple(as_rational(v) for v in values)


def parse_number(token: str, max_denominator: int = 10**9) -> NumberLike:
    """Parse an exact numeric token: integer, ``p/q`` or decimal.

    Decimal tokens (cdd's ``real`` number type) are snapped to the nearest
    rational with denominator at most ``max_denominator``.
    """
    token = token.strip()
    try:
        if "/" in token:
            value = Fraction(token)
        elif "." in token or "e" in token or "E" in token:
            value = Fraction(token).limit_denominator(max_denominator)
        else:
            return int(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad numeric token {token!r}") from exc
    return value if value.denominator != 1 else int(value)


def format_number(value: NumberLike) -> str:
    """Render an exact number as cdd writes it: bare integer or ``p/q``."""
    f = as_rational(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"
