"""Truth-table vertex generation (V-representation of correlation polytopes)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    CapacityError,
    Configuration,
    NumberLike,
    enumerate_events,
    event_count,
)

#: Refuse to materialize truth tables larger than this unless overridden.
DEFAULT_VERTEX_CAP = 2**24


@dataclass(frozen=True)
class VRepresentation:
    """Generator description of a polyhedron: points plus ray directions.

    Truth-table output consists of 0/1 vertex rows only.  General instances
    (read from files or produced by vertex enumeration) may carry rays; a
    representation without any generators denotes the empty polyhedron.
    """

    dimension: int
    vertices: tuple[tuple[NumberLike, ...], ...]
    rays: tuple[tuple[NumberLike, ...], ...] = ()
    config: Configuration | None = None

    def __post_init__(self) -> None:
        for row in self.vertices + self.rays:
            if len(row) != self.dimension:
                raise ValueError(
                    f"generator of length {len(row)} in dimension {self.dimension}"
                )

    @property
    def is_empty(self) -> bool:
        return not self.vertices and not self.rays


def vertex_for_assignment(
    config: Configuration, outcomes: Sequence[int]
) -> tuple[int, ...]:
    """Vertex row for one 0/1 outcome assignment to all elementary propositions.

    ``outcomes`` holds one bit per (particle, setting) pair in particle-major
    order.  Single-event coordinates copy their bit; every joint coordinate is
    the product (logical AND) of its constituents' bits.
    """
    props = config.proposition_pairs()
    if len(outcomes) != len(props):
        raise ValueError(f"expected {len(props)} outcome bits, got {len(outcomes)}")
    for bit in outcomes:
        if bit not in (0, 1):
            raise ValueError(f"outcome bits must be 0 or 1, got {bit!r}")
    by_prop = {prop: bit for prop, bit in zip(props, outcomes)}
    coords = []
    for ev in enumerate_events(config):
        value = 1
        for p, s in zip(ev.particles, ev.choices):
            value &= by_prop[(p, s)]
        coords.append(value)
    return tuple(coords)


def truth_table(
    config: Configuration, max_rows: int = DEFAULT_VERTEX_CAP
) -> VRepresentation:
    """All vertices of the correlation polytope of ``config``.

    Rows enumerate every 0/1 assignment to the elementary propositions with
    the first particle's first setting as the fastest-varying bit, so the
    row order reproduces the standard truth-table listings.
    """
    props = config.proposition_pairs()
    k = len(props)
    total = 1 << k
    if total > max_rows:
        raise CapacityError(
            f"truth table would have {total} rows, exceeding the cap of "
            f"{max_rows}; raise the cap to proceed"
        )
    events = enumerate_events(config)
    # Positions of each event's constituent propositions, resolved once.
    prop_pos = {prop: i for i, prop in enumerate(props)}
    event_bits = [
        [prop_pos[(p, s)] for p, s in zip(ev.particles, ev.choices)]
        for ev in events
    ]
    rows = []
    for index in range(total):
        bits = [(index >> i) & 1 for i in range(k)]
        rows.append(tuple(min(bits[i] for i in members) for members in event_bits))
    return VRepresentation(
        dimension=event_count(config),
        vertices=tuple(rows),
        config=config,
    )
