"""Namings of concrete metric spaces over the oracle universe.

A naming is a (partial) surjection from a set of oracles onto the points
of a space; a metric naming additionally carries the exact point-level
metric and a name-level distance stream agreeing with it at every
precision.  Rather than arbitrary metric spaces, a small registry of
concrete compact spaces is provided: Cantor space, finite discrete
spaces, and their products.  Each registry space has canonical names, so
points are represented by canonical finite descriptions and every
name-level computation has an exact oracle to be tested against.

All registry names are everywhere positive, which is what lets the added
point of the one-point extension be the constant zero function, detected
by inspecting index 0 alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from . import k2, reals
from .k2 import (FinPartialFn, Oracle, TableOracle, SpecError, cons,
                 pair_names, project_names, star, star_name)
from .reals import SignedDigitReal, first_diff_real, from_rational, max_star

STAR_POINT = "*"

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CantorPoint:
    """A {0,1}-sequence given as a finite word plus a constant tail bit."""

    word: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.word) or self.tail not in (0, 1):
            raise ValueError("Cantor point bits must be 0 or 1")

    def value_at(self, i: int) -> int:
        return self.word[i] if i < len(self.word) else self.tail


Point = Union[CantorPoint, int, tuple]


# ---------------------------------------------------------------------------
# Space registry
# ---------------------------------------------------------------------------


class Space:
    """Shared interface of registry space descriptors."""

    kind: str
    space_id: str

    def contains_name(self, f: Oracle, horizon: int) -> bool:
        raise NotImplementedError

    def point_of(self, f: Oracle) -> Point:
        raise NotImplementedError

    def canonical_name(self, p: Point) -> Oracle:
        raise NotImplementedError

    def name_value_of_point(self, p: Point, i: int) -> int:
        raise NotImplementedError

    def dist(self, p: Point, q: Point) -> Fraction:
        raise NotImplementedError

    def dist_hat(self, f: Oracle, g: Oracle) -> SignedDigitReal:
        raise NotImplementedError

    def cells(self, depth: int) -> Iterable:
        """Finite partition descriptors at the given resolution."""
        raise NotImplementedError

    def cell_point(self, cell) -> Point:
        raise NotImplementedError

    def cell_value_at(self, cell, i: int) -> Optional[int]:
        """Name value at index i forced by the cell, None when unconstrained."""
        raise NotImplementedError

    def sample_point(self, rng) -> Point:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class CantorSpace(Space):
    """Cantor space 2^N; names take values in {1, 2}, decode by subtracting 1."""

    kind = "cantor"

    def __init__(self, recode_swap: bool = False):
        self.recode_swap = recode_swap
        self.space_id = "cantor-swapped" if recode_swap else "cantor"

    def _decode(self, v: int) -> int:
        if v not in (1, 2):
            raise ValueError(f"not a Cantor name value: {v}")
        return (2 - v) if self.recode_swap else (v - 1)

    def _encode(self, b: int) -> int:
        return (2 - b) if self.recode_swap else (b + 1)

    def contains_name(self, f: Oracle, horizon: int) -> bool:
        return all(f(k) in (1, 2) for k in range(horizon))

    def point_of(self, f: Oracle) -> CantorPoint:
        if not isinstance(f, TableOracle):
            raise ValueError("point decoding needs a finitely-described name")
        end = f.support_end
        word = tuple(self._decode(f(i)) for i in range(end))
        return CantorPoint(word, self._decode(f.tail_value))

    def canonical_name(self, p: CantorPoint) -> TableOracle:
        table = {i: self._encode(b) for i, b in enumerate(p.word)}
        return TableOracle(table, self._encode(p.tail), label="cantor-name")

    def name_value_of_point(self, p: CantorPoint, i: int) -> int:
        return self._encode(p.value_at(i))

    def dist(self, p: CantorPoint, q: CantorPoint) -> Fraction:
        scan = max(len(p.word), len(q.word))
        for i in range(scan):
            if p.value_at(i) != q.value_at(i):
                return Fraction(1, 2 ** i)
        if p.tail != q.tail:
            return Fraction(1, 2 ** scan)
        return ZERO

    def dist_hat(self, f: Oracle, g: Oracle) -> SignedDigitReal:
        return first_diff_real(lambda n: f(n) != g(n),
                               label=f"d({f.label},{g.label})")

    def cells(self, depth: int):
        return itertools.product((0, 1), repeat=depth)

    def cell_point(self, cell) -> CantorPoint:
        return CantorPoint(tuple(cell), 0)

    def cell_value_at(self, cell, i: int) -> Optional[int]:
        return self._encode(cell[i]) if i < len(cell) else None

    def sample_point(self, rng) -> CantorPoint:
        word = tuple(rng.randrange(2) for _ in range(rng.randrange(0, 7)))
        return CantorPoint(word, rng.randrange(2))

    def to_json(self) -> dict:
        return {"kind": "cantor"}


class FiniteSpace(Space):
    """The discrete space on points 1..N; names are the positive constants."""

    kind = "finite"

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("finite spaces need at least one point")
        self.n = n
        self.space_id = f"finite({n})"

    def contains_name(self, f: Oracle, horizon: int) -> bool:
        c = f(0)
        if not (1 <= c <= self.n):
            return False
        return all(f(k) == c for k in range(1, horizon))

    def point_of(self, f: Oracle) -> int:
        c = f(0)
        if not (1 <= c <= self.n):
            raise ValueError(f"not a point of {self.space_id}: {c}")
        return c

    def canonical_name(self, p: int) -> TableOracle:
        return k2.constant(p, label=f"fin:{p}")

    def name_value_of_point(self, p: int, i: int) -> int:
        return p

    def dist(self, p: int, q: int) -> Fraction:
        return ZERO if p == q else ONE

    def dist_hat(self, f: Oracle, g: Oracle) -> SignedDigitReal:
        return reals.from_estimates(
            lambda k: ZERO if f(0) == g(0) else ONE,
            label=f"d({f.label},{g.label})")

    def cells(self, depth: int):
        return range(1, self.n + 1)

    def cell_point(self, cell) -> int:
        return cell

    def cell_value_at(self, cell, i: int) -> Optional[int]:
        return cell

    def sample_point(self, rng) -> int:
        return rng.randrange(1, self.n + 1)

    def to_json(self) -> dict:
        return {"kind": "finite", "n": self.n}


class ProductSpace(Space):
    """Product of two registry spaces under the max metric; names interleave."""

    kind = "product"

    def __init__(self, left: Space, right: Space):
        self.left = left
        self.right = right
        self.space_id = f"({left.space_id} x {right.space_id})"

    def contains_name(self, f: Oracle, horizon: int) -> bool:
        fl, fr = project_names(f)
        h = (horizon + 1) // 2
        return self.left.contains_name(fl, h) and self.right.contains_name(fr, h)

    def point_of(self, f: Oracle) -> tuple:
        fl, fr = project_names(f)
        return (self.left.point_of(fl), self.right.point_of(fr))

    def canonical_name(self, p: tuple) -> Oracle:
        return pair_names(self.left.canonical_name(p[0]),
                          self.right.canonical_name(p[1]))

    def name_value_of_point(self, p: tuple, i: int) -> int:
        if i % 2 == 0:
            return self.left.name_value_of_point(p[0], i // 2)
        return self.right.name_value_of_point(p[1], i // 2)

    def dist(self, p: tuple, q: tuple) -> Fraction:
        return max(self.left.dist(p[0], q[0]), self.right.dist(p[1], q[1]))

    def dist_hat(self, f: Oracle, g: Oracle) -> SignedDigitReal:
        fl, fr = project_names(f)
        gl, gr = project_names(g)
        return max_star(self.left.dist_hat(fl, gl), self.right.dist_hat(fr, gr))

    def cells(self, depth: int):
        return itertools.product(self.left.cells(depth), self.right.cells(depth))

    def cell_point(self, cell) -> tuple:
        return (self.left.cell_point(cell[0]), self.right.cell_point(cell[1]))

    def cell_value_at(self, cell, i: int) -> Optional[int]:
        if i % 2 == 0:
            return self.left.cell_value_at(cell[0], i // 2)
        return self.right.cell_value_at(cell[1], i // 2)

    def sample_point(self, rng) -> tuple:
        return (self.left.sample_point(rng), self.right.sample_point(rng))

    def to_json(self) -> dict:
        return {"kind": "product", "left": self.left.to_json(),
                "right": self.right.to_json()}


def parse_space_spec(spec) -> Space:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("space spec must be an object with a kind")
    kind = spec["kind"]
    if kind == "cantor":
        return CantorSpace(recode_swap=bool(spec.get("swapped", False)))
    if kind == "finite":
        return FiniteSpace(int(spec.get("n", 0)))
    if kind == "product":
        return ProductSpace(parse_space_spec(spec["left"]),
                            parse_space_spec(spec["right"]))
    raise SpecError(f"unknown space kind: {kind!r}")


# ---------------------------------------------------------------------------
# Namings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Naming:
    """A named set: horizon-bounded domain test plus the point decoding."""

    space_id: str
    contains: Callable[[Oracle, int], bool]
    point_of: Callable[[Oracle], object]


@dataclass(frozen=True)
class MetricNaming:
    """A named metric space: naming, exact metric, name-level distance stream."""

    naming: Naming
    dist: Callable[[Point, Point], Fraction]
    dist_hat: Callable[[Oracle, Oracle], SignedDigitReal]
    space: Space
    names_positive: bool = True


def nat_naming() -> Naming:
    """Names of naturals: value at index 0, zero tail required."""
    def contains(f: Oracle, horizon: int) -> bool:
        return all(f(k) == 0 for k in range(1, max(horizon, 1)))

    return Naming("nat", contains, lambda f: f(0))


def metric_naming(space: Space) -> MetricNaming:
    return MetricNaming(
        naming=Naming(space.space_id, space.contains_name, space.point_of),
        dist=space.dist,
        dist_hat=space.dist_hat,
        space=space,
    )


def cantor_space(recode_swap: bool = False) -> MetricNaming:
    return metric_naming(CantorSpace(recode_swap=recode_swap))


def finite_space(n: int) -> MetricNaming:
    return metric_naming(FiniteSpace(n))


def product_metric_naming(mx: MetricNaming, my: MetricNaming) -> MetricNaming:
    return metric_naming(ProductSpace(mx.space, my.space))


# ---------------------------------------------------------------------------
# One-point extension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointedSpace:
    """A registry metric naming extended with the added point.

    The added point's name is the constant zero function; every real name
    is positive at index 0, so membership of the added point is decided by
    one query.  Distance from any real point to the added point is 1.
    """

    base: MetricNaming
    star: TableOracle

    @property
    def space(self) -> Space:
        return self.base.space

    def is_star(self, f: Oracle) -> bool:
        return f(0) == 0

    def dist(self, p, q) -> Fraction:
        p_star, q_star = p == STAR_POINT, q == STAR_POINT
        if p_star and q_star:
            return ZERO
        if p_star or q_star:
            return ONE
        return self.base.dist(p, q)

    def dist_hat(self, f: Oracle, g: Oracle) -> SignedDigitReal:
        f_star, g_star = self.is_star(f), self.is_star(g)
        if f_star and g_star:
            return from_rational(ZERO)
        if f_star or g_star:
            return from_rational(ONE)
        return self.base.dist_hat(f, g)

    def point_of(self, f: Oracle):
        return STAR_POINT if self.is_star(f) else self.base.naming.point_of(f)


def star_extension(m: MetricNaming) -> PointedSpace:
    if not m.names_positive:
        raise ValueError(
            f"naming {m.naming.space_id} admits a name vanishing at 0; "
            "it cannot host the added point")
    return PointedSpace(base=m, star=star_name())


# ---------------------------------------------------------------------------
# Sequences of names
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NameSequence:
    """A sequence of names given by a finite prefix plus a tail rule.

    tail "star": the added point from the prefix end on (eventually-star).
    tail "repeat": the last prefix entry repeats (never settles).
    """

    prefix: tuple[Oracle, ...]
    tail: str = "star"

    def __post_init__(self):
        if self.tail not in ("star", "repeat"):
            raise ValueError(f"unknown sequence tail: {self.tail!r}")
        if self.tail == "repeat" and not self.prefix:
            raise ValueError("repeat tail needs a nonempty prefix")

    @property
    def horizon(self) -> int:
        return len(self.prefix)

    def entry(self, i: int) -> Oracle:
        if i < len(self.prefix):
            return self.prefix[i]
        if self.tail == "star":
            return star_name()
        return self.prefix[-1]

    @property
    def eventually_star(self) -> bool:
        return self.tail == "star"

    def star_onset(self, pointed: PointedSpace) -> int:
        """The exact settling index: least m with entry(i) the added point
        for all i >= m, within the declared horizon."""
        if not self.eventually_star:
            raise ValueError("sequence never settles on the added point")
        onset = 0
        for i, f in enumerate(self.prefix):
            if not pointed.is_star(f):
                onset = i + 1
        return onset


def parse_name_sequence(spec) -> NameSequence:
    if spec == "all-star":
        return NameSequence((), "star")
    if not isinstance(spec, dict):
        raise SpecError("sequence spec must be an object or 'all-star'")
    names = tuple(k2.parse_oracle_spec(s) for s in spec.get("names", []))
    return NameSequence(names, spec.get("tail", "star"))


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    ok: bool
    checked: int
    inconclusive: bool = False
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "checked": self.checked,
               "inconclusive": self.inconclusive}
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


def verify_reduction(h: Oracle, src: MetricNaming | Naming, dst: MetricNaming | Naming,
                     samples: Sequence[Oracle], fuel: int,
                     horizon: int = 16) -> ReductionReport:
    """Check that h translates src-names to dst-names of the same point.

    For each sample name f the translate h applied to f is evaluated up to
    the horizon under the given fuel; the first counterexample is reported,
    fuel exhaustion makes the report inconclusive rather than a failure.
    """
    src_n = src.naming if isinstance(src, MetricNaming) else src
    dst_n = dst.naming if isinstance(dst, MetricNaming) else dst
    dst_space = dst.space if isinstance(dst, MetricNaming) else None

    for si, f in enumerate(samples):
        values = []
        for kk in range(horizon):
            r = star(h, cons(kk, f), fuel)
            if not r.is_value:
                return ReductionReport(False, si, inconclusive=True)
            values.append(r.value)
        translated = k2.from_values(values, tail_value=values[-1] if values else 0)
        if not dst_n.contains(translated, horizon):
            return ReductionReport(False, si, counterexample={
                "sample": si, "reason": "translate leaves the target domain",
                "values": values})
        expected_point = src_n.point_of(f)
        if dst_space is not None:
            want = [dst_space.name_value_of_point(expected_point, kk)
                    for kk in range(horizon)]
        else:
            got_point = dst_n.point_of(translated)
            want = None
            if got_point != expected_point:
                return ReductionReport(False, si, counterexample={
                    "sample": si, "reason": "wrong point",
                    "got": got_point, "want": expected_point})
        if want is not None and values != want:
            bad = next(kk for kk in range(horizon) if values[kk] != want[kk])
            return ReductionReport(False, si, counterexample={
                "sample": si, "reason": "wrong point", "index": bad,
                "got": values[bad], "want": want[bad]})
    return ReductionReport(True, len(samples))
