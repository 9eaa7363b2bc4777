"""Baire-space oracles and the partial application operators.

The universe is the set of total functions from naturals to naturals,
presented as queryable deterministic oracles.  On top of that sit the
sequence codec, finite partial functions, prefix extraction, cons, and
the fuel-bounded star / bullet application operators that make the
space a partial applicative structure.

Partiality is finitized: a search that the classical definition leaves
undefined is an ``Exhausted`` result here, never nontermination.  All
arithmetic is exact (arbitrary-precision ints); sequence codes grow
roughly quadratically per appended element, so prefix scans must stay
shallow (depth ~20 is the practical ceiling).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence


class HorizonError(Exception):
    """An oracle was queried beyond its configured horizon."""


class FuelExhausted(Exception):
    """A search ran out of fuel where a plain result type is not available."""

    def __init__(self, spent: int, where: str = ""):
        self.spent = spent
        self.where = where
        super().__init__(f"fuel exhausted after {spent} steps {where}".strip())


class SpecError(ValueError):
    """A malformed input document (oracle spec, sequence spec, ...)."""


# ---------------------------------------------------------------------------
# Sequence codec
#
# code(<>) = 0 and code(s + [a]) = pair(code(s), a) + 1 with the Cantor
# pairing pair(x, y) = (x+y)(x+y+1)/2 + y.  Every natural decodes, and the
# code strictly dominates every value that occurs in the sequence.
# ---------------------------------------------------------------------------


def cantor_pair(x: int, y: int) -> int:
    return (x + y) * (x + y + 1) // 2 + y


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def encode_seq(values: Iterable[int]) -> int:
    code = 0
    for a in values:
        if a < 0:
            raise ValueError("sequence entries must be naturals")
        code = cantor_pair(code, a) + 1
    return code


def decode_seq(code: int) -> tuple[int, ...]:
    if code < 0:
        raise ValueError("codes are naturals")
    out: list[int] = []
    while code > 0:
        code, a = cantor_unpair(code - 1)
        out.append(a)
    out.reverse()
    return tuple(out)


def seq_length(code: int) -> int:
    n = 0
    while code > 0:
        code, _ = cantor_unpair(code - 1)
        n += 1
    return n


def encode_pair(n: int, m: int) -> int:
    """Code of the two-element sequence (n, m)."""
    return encode_seq((n, m))


def decode_pair(code: int) -> Optional[tuple[int, int]]:
    """Decode a code as a two-element sequence, or None if it has another length."""
    s = decode_seq(code)
    if len(s) != 2:
        return None
    return s[0], s[1]


# ---------------------------------------------------------------------------
# Finite partial functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinPartialFn:
    """A finite partial function from naturals to naturals.

    ``entries`` is kept sorted by index; the subfunction order ``extends``
    is containment of graphs.  A finite sequence is the special case whose
    domain is an initial segment.
    """

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        idxs = [k for k, _ in self.entries]
        if any(k < 0 for k in idxs) or any(v < 0 for _, v in self.entries):
            raise ValueError("finite partial functions map naturals to naturals")
        if len(set(idxs)) != len(idxs):
            raise ValueError("duplicate indices")
        if list(idxs) != sorted(idxs):
            object.__setattr__(self, "entries", tuple(sorted(self.entries)))

    @classmethod
    def from_dict(cls, d: Mapping[int, int]) -> "FinPartialFn":
        return cls(tuple(sorted(d.items())))

    @classmethod
    def from_seq(cls, values: Sequence[int]) -> "FinPartialFn":
        return cls(tuple(enumerate(values)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.entries)

    def get(self, k: int) -> Optional[int]:
        for i, v in self.entries:
            if i == k:
                return v
        return None

    def is_subfunction_of(self, other: "FinPartialFn") -> bool:
        theirs = other.as_dict()
        return all(theirs.get(k) == v for k, v in self.entries)

    def agrees_with_oracle(self, f: "Oracle") -> bool:
        return all(f(k) == v for k, v in self.entries)

    @property
    def initial_run(self) -> int:
        """Largest L with [0, L) contained in the domain."""
        run = 0
        for k, _ in self.entries:
            if k == run:
                run += 1
            elif k > run:
                break
        return run

    @property
    def is_sequence(self) -> bool:
        return self.initial_run == len(self.entries)

    def to_seq(self) -> tuple[int, ...]:
        if not self.is_sequence:
            raise ValueError("domain is not an initial segment")
        return tuple(v for _, v in self.entries)

    def prefix_code(self, length: int) -> int:
        """Code of the length-``length`` initial restriction (must exist)."""
        if length > self.initial_run:
            raise ValueError("not defined on that initial segment")
        vals = self.to_seq() if self.is_sequence else tuple(
            v for k, v in self.entries if k < length
        )
        return encode_seq(vals[:length])

    # Pairing of partial functions by even/odd interleaving.  The pair of
    # two finite sequences is a finite partial function, possibly with a
    # gap when the lengths differ.

    @classmethod
    def interleave(cls, left: "FinPartialFn", right: "FinPartialFn") -> "FinPartialFn":
        d = {2 * k: v for k, v in left.entries}
        d.update({2 * k + 1: v for k, v in right.entries})
        return cls.from_dict(d)

    def split(self) -> tuple["FinPartialFn", "FinPartialFn"]:
        left = {k // 2: v for k, v in self.entries if k % 2 == 0}
        right = {k // 2: v for k, v in self.entries if k % 2 == 1}
        return FinPartialFn.from_dict(left), FinPartialFn.from_dict(right)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


class Oracle:
    """A deterministic total function from naturals to naturals.

    Queries are memoized, so repeated queries are consistent and cheap even
    when the underlying rule is expensive.  An optional horizon turns
    queries past it into HorizonError; by default oracles are total.
    """

    def __init__(self, fn: Callable[[int], int], label: str = "oracle",
                 horizon: Optional[int] = None):
        self._fn = fn
        self._memo: dict[int, int] = {}
        self.label = label
        self.horizon = horizon

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("oracle indices are naturals")
        if self.horizon is not None and k >= self.horizon:
            raise HorizonError(f"{self.label} queried at {k} >= horizon {self.horizon}")
        v = self._memo.get(k)
        if v is None:
            v = self._fn(k)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{self.label} returned a non-natural at {k}: {v!r}")
            self._memo[k] = v
        return v

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class TableOracle(Oracle):
    """Finite table plus a constant tail; the finitely-described oracle kind.

    The description (``table``, ``tail_value``) is exposed so that exact
    point-level computations (metrics, projections) can use it.
    """

    def __init__(self, table: Mapping[int, int], tail_value: int, label: str = "table"):
        self.table = dict(table)
        self.tail_value = tail_value
        if any(k < 0 or v < 0 for k, v in self.table.items()) or tail_value < 0:
            raise ValueError("table oracles map naturals to naturals")
        super().__init__(lambda k: self.table.get(k, self.tail_value), label=label)

    @property
    def support_end(self) -> int:
        return max(self.table) + 1 if self.table else 0


class PairOracle(Oracle):
    """Even/odd interleaving of two oracles, kept structural for projection."""

    def __init__(self, left: Oracle, right: Oracle, label: str = "pair"):
        self.left = left
        self.right = right
        super().__init__(
            lambda k: left(k // 2) if k % 2 == 0 else right(k // 2), label=label
        )


def constant(v: int, label: Optional[str] = None) -> TableOracle:
    return TableOracle({}, v, label=label or f"const:{v}")


def identity_oracle() -> Oracle:
    return Oracle(lambda k: k, label="identity")


def star_name() -> TableOracle:
    """The distinguished added-point name: the constant zero function."""
    return constant(0, label="star")


def from_values(values: Sequence[int], tail_value: int = 0,
                label: str = "vals") -> TableOracle:
    return TableOracle({i: v for i, v in enumerate(values)}, tail_value, label=label)


def pair_names(f: Oracle, g: Oracle) -> Oracle:
    """Interleave two oracles: result(2n) = f(n), result(2n+1) = g(n)."""
    if isinstance(f, TableOracle) and isinstance(g, TableOracle) \
            and f.tail_value == g.tail_value:
        table = {2 * k: v for k, v in f.table.items()}
        table.update({2 * k + 1: v for k, v in g.table.items()})
        return TableOracle(table, f.tail_value, label=f"<{f.label},{g.label}>")
    return PairOracle(f, g, label=f"<{f.label},{g.label}>")


def project_names(h: Oracle) -> tuple[Oracle, Oracle]:
    """Invert pair_names: the even part and the odd part."""
    if isinstance(h, PairOracle):
        return h.left, h.right
    if isinstance(h, TableOracle):
        left = {k // 2: v for k, v in h.table.items() if k % 2 == 0}
        right = {k // 2: v for k, v in h.table.items() if k % 2 == 1}
        return (TableOracle(left, h.tail_value, label=f"{h.label}.L"),
                TableOracle(right, h.tail_value, label=f"{h.label}.R"))
    return (Oracle(lambda k: h(2 * k), label=f"{h.label}.L"),
            Oracle(lambda k: h(2 * k + 1), label=f"{h.label}.R"))


# ---------------------------------------------------------------------------
# Usage tracking
# ---------------------------------------------------------------------------


@dataclass
class UsageMeter:
    """Per-oracle maximum queried index (0 before any query) plus a count."""

    count: int = 0
    _max: int = -1

    def note(self, k: int) -> None:
        self.count += 1
        if k > self._max:
            self._max = k

    @property
    def max_index(self) -> int:
        return self._max if self._max >= 0 else 0

    @property
    def touched(self) -> bool:
        return self.count > 0

    @property
    def segment_length(self) -> int:
        """Length of the observed initial segment: max index + 1, 0 if untouched."""
        return self._max + 1 if self._max >= 0 else 0


class TrackedOracle(Oracle):
    def __init__(self, inner: Oracle, meter: UsageMeter):
        self.inner = inner
        self.meter = meter
        super().__init__(inner, label=f"tracked({inner.label})")

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("oracle indices are naturals")
        self.meter.note(k)
        return self.inner(k)


def with_usage_tracking(f: Oracle) -> tuple[Oracle, UsageMeter]:
    meter = UsageMeter()
    return TrackedOracle(f, meter), meter


class RecordingOracle(Oracle):
    """Tracking plus a transcript of (index, value) reads in query order."""

    def __init__(self, inner: Oracle):
        self.inner = inner
        self.meter = UsageMeter()
        self.transcript: list[tuple[int, int]] = []
        super().__init__(inner, label=f"recorded({inner.label})")

    def __call__(self, k: int) -> int:
        self.meter.note(k)
        v = self.inner(k)
        self.transcript.append((k, v))
        return v


# ---------------------------------------------------------------------------
# Application operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialResult:
    """Outcome of a fuel-bounded search: a value or exhaustion.

    ``fired_at`` records the scan index that produced a star value, when
    one applies.  Exhausted results never carry a value.
    """

    value: Optional[int]
    spent: int
    fired_at: Optional[int] = None

    @classmethod
    def of(cls, value: int, spent: int, fired_at: Optional[int] = None) -> "PartialResult":
        return cls(value=value, spent=spent, fired_at=fired_at)

    @classmethod
    def exhausted(cls, spent: int) -> "PartialResult":
        return cls(value=None, spent=spent)

    @property
    def is_value(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        if self.is_value:
            return {"kind": "value", "value": self.value, "fired_at": self.fired_at,
                    "spent": self.spent}
        return {"kind": "exhausted", "spent": self.spent}


def bar(f: Oracle, n: int) -> int:
    """Code of the length-n prefix of f; bar(f, 0) = 0."""
    code = 0
    for k in range(n):
        code = cantor_pair(code, f(k)) + 1
    return code


def cons(n: int, g: Oracle) -> Oracle:
    """Prepend a value: result(0) = n, result(k+1) = g(k)."""
    # the head can be an enormous sequence code; keep it out of the label
    return Oracle(lambda k: n if k == 0 else g(k - 1), label=f"cons(.,{g.label})")


def star(f: Oracle, g: Oracle, fuel: int) -> PartialResult:
    """Apply a function name to an argument: f(prefix-code of g) - 1 at the
    least prefix length where f answers positively, scanning lengths < fuel."""
    if fuel < 0:
        raise ValueError("fuel must be a natural")
    code = 0
    for n in range(fuel):
        v = f(code)
        if v > 0:
            return PartialResult.of(v - 1, spent=n + 1, fired_at=n)
        code = cantor_pair(code, g(n)) + 1
    return PartialResult.exhausted(fuel)


class FueledOracle:
    """Lazy oracle whose every query carries its own fuel budget.

    ``query(k, fuel)`` is a PartialResult; totality is the caller's
    contract, not checked here.  ``freeze(fuel)`` adapts it to the plain
    Oracle interface, raising FuelExhausted on a failed query.
    """

    def __init__(self, query: Callable[[int, int], PartialResult], label: str = "fueled"):
        self._query = query
        self.label = label
        self._memo: dict[int, PartialResult] = {}

    def query(self, k: int, fuel: int) -> PartialResult:
        cached = self._memo.get(k)
        if cached is not None and cached.is_value:
            return cached
        r = self._query(k, fuel)
        if r.is_value:
            self._memo[k] = r
        return r

    def freeze(self, fuel: int) -> Oracle:
        def fn(k: int) -> int:
            r = self.query(k, fuel)
            if not r.is_value:
                raise FuelExhausted(r.spent, where=f"in {self.label}")
            return r.value
        return Oracle(fn, label=f"{self.label}@{fuel}")


def bullet(f: Oracle, g: Oracle) -> FueledOracle:
    """Partial application f applied to g index by index:
    query(k, fuel) = star(f, cons(k, g), fuel)."""
    return FueledOracle(lambda k, fuel: star(f, cons(k, g), fuel),
                        label=f"({f.label} . {g.label})")


# ---------------------------------------------------------------------------
# Oracle spec documents
#
# JSON form: {"table": [[i, v], ...],
#             "tail": {"kind": "constant", "value": v}
#                   | {"kind": "registry", "name": "...", "params": {...}}}
# plus the CLI shorthands "const:N", "identity" and "star".
# ---------------------------------------------------------------------------


def _registry_identity(params: dict) -> Callable[[int], int]:
    return lambda k: k


def _registry_eval_arg(params: dict) -> Callable[[int], int]:
    # Name of the identity operation on oracles: once the argument prefix
    # (k, f(0), ..., f(k)) is long enough, answer f(k) + 1.
    def fn(code: int) -> int:
        s = decode_seq(code)
        if len(s) >= 1 and len(s) >= s[0] + 2:
            return s[s[0] + 1] + 1
        return 0
    return fn


def _registry_eval_arg_swap12(params: dict) -> Callable[[int], int]:
    # Digitwise recoding 1 <-> 2 of the argument oracle, other values fixed.
    def fn(code: int) -> int:
        s = decode_seq(code)
        if len(s) >= 1 and len(s) >= s[0] + 2:
            v = s[s[0] + 1]
            return ({1: 2, 2: 1}.get(v, v)) + 1
        return 0
    return fn


def _registry_depth_answer(params: dict) -> Callable[[int], int]:
    # Answer the fixed pair (n, m) on every sequence of length >= depth.
    depth = int(params.get("depth", 0))
    n = int(params.get("n", 0))
    m = int(params.get("m", 0))
    answer = encode_pair(n, m) + 1

    def fn(code: int) -> int:
        return answer if seq_length(code) >= depth else 0
    return fn


ORACLE_REGISTRY: dict[str, Callable[[dict], Callable[[int], int]]] = {
    "identity": _registry_identity,
    "eval_arg": _registry_eval_arg,
    "eval_arg_swap12": _registry_eval_arg_swap12,
    "depth_answer": _registry_depth_answer,
}


def parse_oracle_spec(spec) -> Oracle:
    if isinstance(spec, str):
        if spec.startswith("const:"):
            return constant(int(spec.split(":", 1)[1]))
        if spec == "identity":
            return identity_oracle()
        if spec == "star":
            return star_name()
        raise SpecError(f"unknown oracle shorthand: {spec!r}")
    if not isinstance(spec, dict):
        raise SpecError("oracle spec must be a string shorthand or an object")
    table_pairs = spec.get("table", [])
    try:
        table = {int(i): int(v) for i, v in table_pairs}
    except (TypeError, ValueError) as e:
        raise SpecError(f"bad oracle table: {e}")
    tail = spec.get("tail", {"kind": "constant", "value": 0})
    kind = tail.get("kind")
    if kind == "constant":
        return TableOracle(table, int(tail.get("value", 0)), label="spec")
    if kind == "registry":
        name = tail.get("name")
        if name not in ORACLE_REGISTRY:
            raise SpecError(f"unknown registry formula: {name!r}")
        base = ORACLE_REGISTRY[name](tail.get("params", {}))
        return Oracle(lambda k: table[k] if k in table else base(k),
                      label=f"spec:{name}")
    raise SpecError(f"unknown tail kind: {kind!r}")


def oracle_spec_json(f: Oracle) -> dict:
    """Serialize a finitely-described oracle (best effort for others)."""
    if isinstance(f, TableOracle):
        return {"table": sorted([k, v] for k, v in f.table.items()),
                "tail": {"kind": "constant", "value": f.tail_value}}
    raise SpecError(f"oracle {f.label} has no finite description")
