"""Exact polyhedral kernel: double description conversions and queries.

Polytopes move between their two dual encodings here.  ``hull`` turns a
generator description into the minimal set of facet inequalities and
``enumerate_vertices`` goes the other way.  All computation is exact; a
constraint row ``(b, a1, ..., ad)`` always means ``b + a.x >= 0``.

The incremental kernel maintains a cone as a lineality basis plus the
extreme rays of its pointed part.  Inserting a constraint either consumes
one lineality dimension or splits the ray set by sign, combining adjacent
positive/negative pairs into new rays on the constraint hyperplane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import CapacityError, Configuration, NumberLike
from .linalg import (
    IntVec,
    clear_to_int,
    dot,
    integer_rank,
    primitive,
    reduce_mod_rowspace,
    rref,
)
from .vertices import VRepresentation

#: Abort when an intermediate ray set grows beyond this (overridable).
DEFAULT_RAY_CAP = 5_000_000

ProgressFn = Callable[[int, int, int], None]


@dataclass(frozen=True)
class HRepresentation:
    """Constraint description: rows ``b + a.x >= 0``, some marked equalities.

    ``linearity`` holds the (0-based) indices of rows to be read as
    equalities; they encode the affine hull when the polyhedron is not
    full-dimensional.
    """

    dimension: int
    rows: tuple[tuple[NumberLike, ...], ...]
    linearity: frozenset[int] = frozenset()
    config: Configuration | None = None

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != self.dimension + 1:
                raise ValueError(
                    f"constraint of length {len(row)} in dimension {self.dimension}"
                )
            if not any(row):
                raise ValueError("all-zero constraint row")
        for i in self.linearity:
            if not 0 <= i < len(self.rows):
                raise ValueError(f"linearity index {i} out of range")

    @property
    def inequality_indices(self) -> list[int]:
        return [i for i in range(len(self.rows)) if i not in self.linearity]


@dataclass(frozen=True)
class FacetReport:
    valid: bool
    tight_count: int
    is_facet: bool


class DDPair:
    """Mutable double description state over an ambient cone dimension.

    Invariant: the represented cone is ``span(lineality) + cone(rays)``
    where ``rays`` are exactly the extreme rays modulo the lineality space
    of the cone cut out by the processed rows, and ``active[i]`` is the
    bit set of processed rows tight at ``rays[i]``.
    """

    __slots__ = ("dimension", "rows", "rays", "active", "lineality", "debug")

    def __init__(self, dimension: int, debug: bool = False):
        if dimension < 1:
            raise ValueError("cone dimension must be positive")
        self.dimension = dimension
        self.rows: list[IntVec] = []
        self.rays: list[IntVec] = []
        self.active: list[int] = []
        self.lineality: list[IntVec] = [
            tuple(1 if j == i else 0 for j in range(dimension))
            for i in range(dimension)
        ]
        self.debug = debug

    def copy(self) -> "DDPair":
        dup = DDPair.__new__(DDPair)
        dup.dimension = self.dimension
        dup.rows = list(self.rows)
        dup.rays = list(self.rays)
        dup.active = list(self.active)
        dup.lineality = list(self.lineality)
        dup.debug = self.debug
        return dup

    def generators(self) -> list[IntVec]:
        """All generators: lineality directions (both signs) plus rays."""
        out = []
        for l in self.lineality:
            out.append(l)
            out.append(tuple(-x for x in l))
        out.extend(self.rays)
        return out

    def insert(self, row: Sequence[NumberLike], equality: bool = False,
               ray_cap: int | None = DEFAULT_RAY_CAP) -> None:
        if all(isinstance(x, int) for x in row):
            row = primitive(row)
        else:
            row = clear_to_int(row)
        if len(row) != self.dimension:
            raise ValueError("constraint dimension mismatch")
        if not any(row):
            return  # 0 >= 0 constrains nothing

        lin_prods = [dot(row, l) for l in self.lineality]
        hit = next((i for i, p in enumerate(lin_prods) if p), None)
        if hit is not None:
            self._consume_lineality(row, hit, lin_prods, equality)
            return

        k = len(self.rows)
        bit = 1 << k
        rays = self.rays
        active = self.active
        vals = [dot(row, r) for r in rays]
        pos_i = [i for i, v in enumerate(vals) if v > 0]
        neg_i = [i for i, v in enumerate(vals) if v < 0]

        if not neg_i and not (equality and pos_i):
            # Implied constraint: only tightness bookkeeping changes.
            for i, v in enumerate(vals):
                if v == 0:
                    active[i] |= bit
            self.rows.append(row)
            return

        new_rays: list[IntVec] = []
        new_active: list[int] = []
        if pos_i and neg_i:
            self._combine_pairs(row, vals, pos_i, neg_i, bit, new_rays, new_active)

        keep = []
        for i, v in enumerate(vals):
            if v == 0:
                keep.append(i)
            elif v > 0 and not equality:
                keep.append(i)
        self.rays = [rays[i] for i in keep]
        self.active = [active[i] | bit if vals[i] == 0 else active[i] for i in keep]
        self.rays.extend(new_rays)
        self.active.extend(new_active)
        self.rows.append(row)
        if ray_cap is not None and len(self.rays) > ray_cap:
            raise CapacityError(
                f"intermediate ray count {len(self.rays)} exceeds cap {ray_cap}"
            )

    def _consume_lineality(self, row: IntVec, hit: int,
                           lin_prods: list[int], equality: bool) -> None:
        # The constraint sees the lineality space: one basis direction moves
        # to the pointed part (or disappears for an equality) and everything
        # else is projected onto the constraint hyperplane along it.
        l0 = self.lineality[hit]
        s = lin_prods[hit]
        if s < 0:
            l0 = tuple(-x for x in l0)
            s = -s
        new_lin = []
        for i, l in enumerate(self.lineality):
            if i == hit:
                continue
            p = lin_prods[i]
            new_lin.append(primitive(s * a - p * b for a, b in zip(l, l0)) if p else l)
        self.lineality = new_lin

        k = len(self.rows)
        bit = 1 << k
        projected = []
        for r in self.rays:
            v = dot(row, r)
            projected.append(primitive(s * a - v * b for a, b in zip(r, l0)) if v else r)
        self.rays = projected
        self.active = [a | bit for a in self.active]
        if not equality:
            self.rays.append(l0)
            self.active.append(bit - 1)  # tight on every previous row, not this one
        self.rows.append(row)

    def _combine_pairs(self, row: IntVec, vals: list[int],
                       pos_i: list[int], neg_i: list[int], bit: int,
                       new_rays: list[IntVec], new_active: list[int]) -> None:
        rays = self.rays
        active = self.active
        need = self.dimension - len(self.lineality) - 2
        if need < 0:
            need = 0
        counts = [a.bit_count() for a in active]
        scan = sorted(range(len(rays)), key=lambda j: -counts[j])
        for ip in pos_i:
            ap = active[ip]
            vp = vals[ip]
            rp = rays[ip]
            for im in neg_i:
                common = ap & active[im]
                c_count = common.bit_count()
                if c_count < need:
                    continue
                adjacent = True
                for j in scan:
                    if counts[j] < c_count:
                        break  # sorted descending: no superset further on
                    if j == ip or j == im:
                        continue
                    if active[j] & common == common:
                        adjacent = False
                        break
                if self.debug:
                    self._check_adjacency(common, adjacent)
                if adjacent:
                    vm = vals[im]
                    rm = rays[im]
                    new_rays.append(
                        primitive(vp * a - vm * b for a, b in zip(rm, rp))
                    )
                    new_active.append(common | bit)

    def _check_adjacency(self, common: int, combinatorial: bool) -> None:
        tight = [self.rows[i] for i in _iter_bits(common)]
        algebraic = integer_rank(tight) == self.dimension - len(self.lineality) - 2
        if algebraic != combinatorial:
            raise AssertionError(
                "combinatorial and algebraic adjacency tests disagree"
            )


def _iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def dd_insert(state: DDPair, row: Sequence[int], equality: bool = False) -> DDPair:
    """Pure kernel step: return a new state with one constraint inserted."""
    out = state.copy()
    out.insert(row, equality=equality)
    return out


def _order_rows(rows: Iterable[IntVec], order: str) -> list[IntVec]:
    rows = list(dict.fromkeys(rows))
    if order == "given":
        return rows
    if order == "lexmin":
        return sorted(rows)
    if order.startswith("random:"):
        try:
            seed = int(order.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad insertion order {order!r}") from None
        rng = random.Random(seed)
        rng.shuffle(rows)
        return rows
    raise ValueError(f"unknown insertion order {order!r}")


def hull(vrep: VRepresentation, order: str = "lexmin", *,
         ray_cap: int | None = DEFAULT_RAY_CAP,
         progress: ProgressFn | None = None,
         debug: bool = False) -> HRepresentation:
    """Minimal constraint description of ``conv(vertices) + cone(rays)``.

    Every returned non-linearity row is a facet; linearity rows appear
    exactly when the polytope is not full-dimensional and encode its affine
    hull.  Output rows are canonically normalized and sorted, so the result
    does not depend on the insertion order.
    """
    if not vrep.vertices:
        raise ValueError("hull requires at least one vertex")
    vertex_rows = [clear_to_int((1,) + tuple(v)) for v in vrep.vertices]
    ray_rows = [clear_to_int((0,) + tuple(r)) for r in vrep.rays]
    gens = _order_rows(vertex_rows + ray_rows, order)

    pair = DDPair(vrep.dimension + 1, debug=debug)
    for i, g in enumerate(gens):
        pair.insert(g, ray_cap=ray_cap)
        if progress is not None:
            progress(i + 1, len(gens), len(pair.rays))

    lin_reduced, lin_pivots = rref(pair.lineality)
    lin_rows = sorted(clear_to_int(r) for r in lin_reduced)

    facets = []
    for ray in pair.rays:
        if lin_rows:
            ray = reduce_mod_rowspace(ray, lin_reduced, lin_pivots)
        # A ray tight on no input point is the homogenization facet
        # ("1 >= 0" on the affine hull); it is not a facet of the polytope.
        if all(dot(ray, g) != 0 for g in vertex_rows):
            continue
        facets.append(tuple(ray))
    facets.sort()

    return HRepresentation(
        dimension=vrep.dimension,
        rows=tuple(lin_rows) + tuple(facets),
        linearity=frozenset(range(len(lin_rows))),
        config=vrep.config,
    )


def enumerate_vertices(hrep: HRepresentation, order: str = "lexmin", *,
                       ray_cap: int | None = DEFAULT_RAY_CAP,
                       progress: ProgressFn | None = None,
                       debug: bool = False) -> VRepresentation:
    """All vertices and extreme rays of a constraint-described polyhedron.

    The system is homogenized, run through the kernel and de-homogenized:
    rays with positive leading coordinate scale to points, the rest stay
    directions.  An infeasible system yields the empty representation
    (no generators), not an error.
    """
    d = hrep.dimension
    eq_rows = []
    ineq_rows = []
    for i, row in enumerate(hrep.rows):
        target = eq_rows if i in hrep.linearity else ineq_rows
        target.append(clear_to_int(row))
    hom = (1,) + (0,) * d

    pair = DDPair(d + 1, debug=debug)
    steps = [(r, True) for r in _order_rows(eq_rows, order)]
    steps.append((hom, False))
    steps.extend((r, False) for r in _order_rows(ineq_rows, order))
    for i, (row, is_eq) in enumerate(steps):
        pair.insert(row, equality=is_eq, ray_cap=ray_cap)
        if progress is not None:
            progress(i + 1, len(steps), len(pair.rays))

    points = []
    directions = []
    for r in pair.rays:
        if r[0] > 0:
            points.append(tuple(_tidy(Fraction(x, r[0])) for x in r[1:]))
        else:
            directions.append(primitive(r[1:]))
    if not points:
        return VRepresentation(dimension=d, vertices=(), rays=(), config=hrep.config)

    lin_reduced, _ = rref(pair.lineality)
    for l in lin_reduced:
        line = clear_to_int(l)[1:]
        directions.append(line)
        directions.append(tuple(-x for x in line))

    return VRepresentation(
        dimension=d,
        vertices=tuple(sorted(set(points))),
        rays=tuple(sorted(set(directions))),
        config=hrep.config,
    )


def _tidy(f: Fraction) -> NumberLike:
    return int(f) if f.denominator == 1 else f


def contains(hrep: HRepresentation, point: Sequence[NumberLike]) -> bool:
    """Exact membership test: every row satisfied, equalities exactly."""
    if len(point) != hrep.dimension:
        raise ValueError(
            f"point of length {len(point)} in dimension {hrep.dimension}"
        )
    for i, row in enumerate(hrep.rows):
        value = row[0] + sum(a * x for a, x in zip(row[1:], point))
        if i in hrep.linearity:
            if value != 0:
                return False
        elif value < 0:
            return False
    return True


def verify_facet(row: Sequence[NumberLike], vrep: VRepresentation) -> FacetReport:
    """Check one constraint row against a generator set.

    ``valid`` means every generator satisfies the row; ``is_facet``
    additionally requires the tight generators to span a flat of dimension
    one less than the ambient space (exact rank computation).
    """
    if len(row) != vrep.dimension + 1:
        raise ValueError(
            f"constraint of length {len(row)} in dimension {vrep.dimension}"
        )
    r = clear_to_int(row)
    valid = True
    tight = []
    gens = [(1,) + tuple(v) for v in vrep.vertices]
    gens += [(0,) + tuple(ray) for ray in vrep.rays]
    for g in gens:
        g = clear_to_int(g)
        value = dot(r, g)
        if value < 0:
            valid = False
        elif value == 0:
            tight.append(g)
    is_facet = valid and integer_rank(tight) == vrep.dimension
    return FacetReport(valid=valid, tight_count=len(tight), is_facet=is_facet)
