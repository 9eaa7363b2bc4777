"""Compactness bases and realizers of the anti-Specker property.

A compactness base is an enumerable family of finite covering
descriptors: each member Theta is a finite set of atoms (sigma, n), an
atom denoting the open set of points within 2^-n of some name extending
sigma.  Bases are the effective witnesses of compactness here, and they
convert both ways:

* from a base one builds a realizer that, fed an eventually-star
  sequence of names and an avoidance name, searches the base for a
  member certified by the avoidance name's answers and then returns the
  exact settling index of the sequence;

* from a realizer one probes with the all-star sequence against
  finitely-determined avoidance names and harvests covering members
  from the answered prefixes.

Products are handled by combining bases atom by atom, which is what
makes the product of two realized-compact spaces realized-compact, and
realizers transport across namings along a pair of identity trackings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from . import k2
from .k2 import (FinPartialFn, Oracle, PartialResult, RecordingOracle,
                 SpecError, TableOracle, decode_pair, decode_seq, encode_pair,
                 encode_seq, seq_length, star, cons)
from .naming import (MetricNaming, NameSequence, PointedSpace, ProductSpace,
                     Space, metric_naming, star_extension)


class InsufficientDepth(Exception):
    """A covering check met a cell it can neither include nor exclude."""


# ---------------------------------------------------------------------------
# Atoms and coverings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverAtom:
    """(sigma, n): points within 2^-n of some name extending sigma."""

    sigma: FinPartialFn
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("radius exponent must be a natural")

    def to_json(self) -> dict:
        return {"sigma": [list(e) for e in self.sigma.entries], "n": self.n}


@dataclass(frozen=True)
class Theta:
    """A finite, nonempty set of cover atoms."""

    atoms: tuple[CoverAtom, ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("a covering descriptor needs at least one atom")
        object.__setattr__(self, "atoms", tuple(sorted(
            self.atoms, key=lambda a: (a.n, a.sigma.entries))))

    def to_json(self) -> list:
        return [a.to_json() for a in self.atoms]


def parse_theta(spec) -> Theta:
    try:
        atoms = tuple(
            CoverAtom(FinPartialFn(tuple((int(i), int(v)) for i, v in a["sigma"])),
                      int(a["n"]))
            for a in spec)
    except (KeyError, TypeError, ValueError) as e:
        raise SpecError(f"bad covering descriptor: {e}")
    return Theta(atoms)


def product_atom(ax: CoverAtom, ay: CoverAtom) -> CoverAtom:
    """Interleave the constraints and keep the finer-of-the-two radius."""
    return CoverAtom(FinPartialFn.interleave(ax.sigma, ay.sigma), min(ax.n, ay.n))


# ---------------------------------------------------------------------------
# Membership and covering decisions (registry spaces)
# ---------------------------------------------------------------------------


def _atom_possibly_inhabited(space: Space, atom: CoverAtom) -> bool:
    """Whether some name of the space extends sigma (registry check)."""
    kind = space.kind
    if kind == "cantor":
        return all(v in (1, 2) for _, v in atom.sigma.entries)
    if kind == "finite":
        vals = {v for _, v in atom.sigma.entries}
        if not vals:
            return True
        return len(vals) == 1 and 1 <= next(iter(vals)) <= space.n
    if kind == "product":
        sl, sr = atom.sigma.split()
        return (_atom_possibly_inhabited(space.left, CoverAtom(sl, atom.n))
                and _atom_possibly_inhabited(space.right, CoverAtom(sr, atom.n)))
    raise ValueError(f"not a registry space: {kind}")


def _constrained_indices(space: Space, atom: CoverAtom) -> list[int]:
    """Name indices whose values the atom membership actually constrains."""
    kind = space.kind
    if kind == "cantor":
        return [i for i, _ in atom.sigma.entries if i <= atom.n]
    if kind == "finite":
        return [i for i, _ in atom.sigma.entries]
    if kind == "product":
        sl, sr = atom.sigma.split()
        out = [2 * i for i in _constrained_indices(space.left, CoverAtom(sl, atom.n))]
        out += [2 * i + 1 for i in _constrained_indices(space.right, CoverAtom(sr, atom.n))]
        return out
    raise ValueError(f"not a registry space: {kind}")


def point_in_atom(space: Space, point, atom: CoverAtom) -> bool:
    """Exact membership of a registry point in the atom's open set."""
    if not _atom_possibly_inhabited(space, atom):
        return False
    sigma = atom.sigma.as_dict()
    for i in _constrained_indices(space, atom):
        if space.name_value_of_point(point, i) != sigma[i]:
            return False
    return True


def _cell_in_atom(space: Space, cell, atom: CoverAtom) -> Optional[bool]:
    """Three-valued membership of a whole cell; None = undecided at depth."""
    if not _atom_possibly_inhabited(space, atom):
        return False
    sigma = atom.sigma.as_dict()
    unknown = False
    for i in _constrained_indices(space, atom):
        forced = space.cell_value_at(cell, i)
        if forced is None:
            unknown = True
        elif forced != sigma[i]:
            return False
    return None if unknown else True


@dataclass(frozen=True)
class CoversReport:
    covered: bool
    depth: int
    witness_cell: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"covered": self.covered, "depth": self.depth}
        if self.witness_cell is not None:
            out["witness"] = repr(self.witness_cell)
        return out


def default_cover_depth(theta: Theta) -> int:
    return max(a.n for a in theta.atoms) + 1


def covers(theta: Theta, space: MetricNaming | Space,
           depth: Optional[int] = None) -> CoversReport:
    """Decide whether the atoms of theta cover the whole registry space.

    Exhausts the space at the given resolution; sound and complete once
    depth exceeds every atom's radius exponent (the default).  A cell that
    is neither inside some atom nor excluded from all raises
    InsufficientDepth.
    """
    sp = space.space if isinstance(space, MetricNaming) else space
    if depth is None:
        depth = default_cover_depth(theta)
    for cell in sp.cells(depth):
        hit = False
        undecided = False
        for atom in theta.atoms:
            r = _cell_in_atom(sp, cell, atom)
            if r is True:
                hit = True
                break
            if r is None:
                undecided = True
        if not hit:
            if undecided:
                raise InsufficientDepth(
                    f"cell {cell!r} undecided at depth {depth}")
            return CoversReport(False, depth, witness_cell=cell)
    return CoversReport(True, depth)


# ---------------------------------------------------------------------------
# Base coverings and the subcover relation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BaseCovering:
    """An enumerated sequence of (tau, m) pairs; finite lists repeat."""

    entries: tuple[tuple[FinPartialFn, int], ...]

    def entry(self, i: int) -> tuple[FinPartialFn, int]:
        return self.entries[i % len(self.entries)]


@dataclass(frozen=True)
class SubcoverReport:
    ok: bool
    at_horizon: bool = False
    missing_atom: Optional[CoverAtom] = None


def subcovers(theta: Theta, covering: BaseCovering, horizon: int) -> SubcoverReport:
    """Whether each atom of theta refines some enumerated entry: an entry
    (tau, m) with tau a subfunction of the atom's sigma and m <= n."""
    scan = min(horizon + 1, len(covering.entries))
    for atom in theta.atoms:
        found = False
        for i in range(scan):
            tau, m = covering.entry(i)
            if m <= atom.n and tau.is_subfunction_of(atom.sigma):
                found = True
                break
        if not found:
            return SubcoverReport(False,
                                  at_horizon=len(covering.entries) > horizon + 1,
                                  missing_atom=atom)
    return SubcoverReport(True)


# ---------------------------------------------------------------------------
# Avoidance names
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AvoidanceName:
    """An oracle over sequence codes answering 0 (undetermined) or v+1,
    where v decodes as the pair (n, m): every name extending the answered
    sequence stays at distance >= 2^-n from the sequence entries past m."""

    h: Oracle
    description: str = "avoidance"


def make_avoidance_name(seq: NameSequence, pointed: PointedSpace,
                        radius_exp: int = 0, answer_depth: int = 0) -> AvoidanceName:
    """Avoidance name for an eventually-star sequence.

    Answers (radius_exp, onset) on every sequence of length >= answer_depth,
    where onset is the settling index; correct because the distance from a
    real point to the added point is 1 >= 2^-radius_exp.  Larger
    answer_depth makes the name answer only at deliberately deep prefixes.
    """
    if not seq.eventually_star:
        raise ValueError("sequence is not eventually star; supply a witness table")
    onset = seq.star_onset(pointed)
    answer = encode_pair(radius_exp, onset) + 1
    h = Oracle(lambda c: answer if seq_length(c) >= answer_depth else 0,
               label=f"avoid(d={answer_depth},n={radius_exp},m={onset})")
    return AvoidanceName(h, description=h.label)


def make_witnessed_avoidance_name(seq: NameSequence, pointed: PointedSpace,
                                  witness: dict[FinPartialFn, tuple[int, int]],
                                  horizon: Optional[int] = None) -> AvoidanceName:
    """Avoidance name from an explicit per-prefix separation table.

    Each table entry sigma -> (n, m) is verified against the registry
    metric: every sequence entry from m on (to the horizon) either is the
    added point or lies at distance >= 2^-n from every point named by an
    extension of sigma.
    """
    space = pointed.space
    scan = seq.horizon if horizon is None else horizon
    if seq.tail == "repeat":
        scan = max(scan, seq.horizon)
    for sigma, (n, m) in witness.items():
        if not sigma.is_sequence:
            raise ValueError("witness keys must be finite sequences")
        for i in range(m, scan):
            f_i = seq.entry(i)
            if pointed.is_star(f_i):
                continue
            p_i = space.point_of(f_i)
            if _cylinder_clearance(space, sigma, p_i) < Fraction(1, 2 ** n):
                raise ValueError(
                    f"witness ({sigma.entries}, ({n},{m})) fails at entry {i}")
    table = {sigma.prefix_code(sigma.initial_run): encode_pair(n, m) + 1
             for sigma, (n, m) in witness.items()}
    h = Oracle(lambda c: table.get(c, 0), label="avoid(witnessed)")
    return AvoidanceName(h, description="witnessed")


def _cylinder_clearance(space: Space, sigma: FinPartialFn, point) -> Fraction:
    """Least distance from the point to any point named by an extension of
    sigma (registry spaces; 2 when sigma has no extension in the space)."""
    if not _atom_possibly_inhabited(space, CoverAtom(sigma, 0)):
        return Fraction(2)
    kind = space.kind
    if kind == "cantor":
        for i in itertools.count():
            v = sigma.get(i)
            if v is None:
                # free position: an extension can copy the point from here on
                tail_done = all(j < i for j, _ in sigma.entries)
                if tail_done:
                    return Fraction(0)
                continue
            if v != space.name_value_of_point(point, i):
                return Fraction(1, 2 ** i)
        raise AssertionError("unreachable")
    if kind == "finite":
        vals = {v for _, v in sigma.entries}
        if not vals:
            return Fraction(0)
        return space.dist(next(iter(vals)), point)
    if kind == "product":
        sl, sr = sigma.split()
        return max(_cylinder_clearance(space.left, sl, point[0]),
                   _cylinder_clearance(space.right, sr, point[1]))
    raise ValueError(f"not a registry space: {kind}")


# ---------------------------------------------------------------------------
# Compactness bases
# ---------------------------------------------------------------------------


class CompactnessBase:
    """An enumerable family of covering descriptors for a registry space."""

    space: MetricNaming

    def enumerate_theta(self, i: int) -> Theta:
        raise NotImplementedError

    def iter_atoms(self, i: int) -> Iterable[CoverAtom]:
        """Stream member i's atoms without materializing the member; the
        canonical Cantor member k holds 2^k atoms, so searches that abandon
        a member early must not pay for the whole of it."""
        return iter(self.enumerate_theta(i).atoms)

    def to_json(self) -> dict:
        raise NotImplementedError


class BuiltinBase(CompactnessBase):
    """The canonical base of a registry space.

    Cantor: member k is every total {1,2}-valued sigma on [0, k) at radius
    exponent k.  Finite space: member k is one point-identifying atom per
    point, the constant sequence of length k+1 at exponent k.  Products
    combine the factor bases.
    """

    def __init__(self, space: MetricNaming):
        self.space = space
        kind = space.space.kind
        if kind == "product":
            left = metric_naming(space.space.left)
            right = metric_naming(space.space.right)
            self._delegate = ProductBase(BuiltinBase(left), BuiltinBase(right))
        elif kind not in ("cantor", "finite"):
            raise ValueError(f"no builtin base for {kind}")
        else:
            self._delegate = None

    def iter_atoms(self, i: int):
        if self._delegate is not None:
            yield from self._delegate.iter_atoms(i)
            return
        sp = self.space.space
        if sp.kind == "cantor":
            for word in itertools.product((1, 2), repeat=i):
                yield CoverAtom(FinPartialFn.from_seq(word), i)
        else:
            for c in range(1, sp.n + 1):
                yield CoverAtom(FinPartialFn.from_seq((c,) * (i + 1)), i)

    def enumerate_theta(self, i: int) -> Theta:
        if self._delegate is not None:
            return self._delegate.enumerate_theta(i)
        return Theta(tuple(self.iter_atoms(i)))

    def to_json(self) -> dict:
        return {"kind": "builtin", "space": self.space.space.to_json()}


def builtin_base(space: MetricNaming) -> CompactnessBase:
    return BuiltinBase(space)


class ProductBase(CompactnessBase):
    """Members combining a left member with one right member per left atom.

    Enumeration is fair but front-loads the members every search here can
    actually use: at each index total the combinations assigning the same
    right member to every left atom come first, and genuinely per-atom
    assignments are enumerated only up to a small total (their count grows
    like total^atoms and would starve any bounded search).
    """

    MIXED_TOTAL_CAP = 8
    MIXED_ATOM_CAP = 4

    def __init__(self, bx: CompactnessBase, by: CompactnessBase):
        self.bx = bx
        self.by = by
        self.space = metric_naming(ProductSpace(bx.space.space, by.space.space))
        # members are cached as (left index, right index | per-atom tuple)
        self._specs: list[tuple[int, object]] = []
        self._gen = self._generate_specs()

    def _generate_specs(self):
        for total in itertools.count():
            for a in range(total + 1):
                yield (a, total - a)
            if total <= self.MIXED_TOTAL_CAP:
                for a in range(total + 1):
                    kx = sum(1 for _ in self.bx.iter_atoms(a))
                    if kx > self.MIXED_ATOM_CAP:
                        continue
                    for combo in _compositions(total - a, kx):
                        if len(set(combo)) > 1:
                            yield (a, combo)

    def _spec(self, i: int) -> tuple[int, object]:
        while len(self._specs) <= i:
            self._specs.append(next(self._gen))
        return self._specs[i]

    def iter_atoms(self, i: int):
        a, rights = self._spec(i)
        for j, atom_x in enumerate(self.bx.iter_atoms(a)):
            b = rights if isinstance(rights, int) else rights[j]
            for atom_y in self.by.iter_atoms(b):
                yield product_atom(atom_x, atom_y)

    def enumerate_theta(self, i: int) -> Theta:
        return Theta(tuple(self.iter_atoms(i)))

    def to_json(self) -> dict:
        return {"kind": "product", "left": self.bx.to_json(),
                "right": self.by.to_json()}


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` naturals summing to ``total``, lexicographic."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def product_base(bx: CompactnessBase, by: CompactnessBase) -> CompactnessBase:
    return ProductBase(bx, by)


class ProbedBase(CompactnessBase):
    """A finite base prefix harvested from a realizer; cycles when indexed
    past the end.  ``exhausted`` records that the probe budget cut the
    enumeration off."""

    def __init__(self, space: MetricNaming, members: Sequence[Theta],
                 exhausted: bool, evals_spent: int):
        self.space = space
        self.members = tuple(members)
        self.exhausted = exhausted
        self.evals_spent = evals_spent

    def enumerate_theta(self, i: int) -> Theta:
        if not self.members:
            raise SpecError("probe harvested no covering members")
        return self.members[i % len(self.members)]

    def to_json(self) -> dict:
        return {"kind": "probed", "members": [t.to_json() for t in self.members],
                "exhausted": self.exhausted, "evals_spent": self.evals_spent}


# ---------------------------------------------------------------------------
# Realizers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalOutcome:
    """Result of one realizer evaluation, with its certificate when any."""

    result: PartialResult
    certificate: Optional[Theta] = None
    bound: Optional[int] = None
    member_index: Optional[int] = None
    malformed: tuple = ()
    stage: Optional[str] = None

    def to_json(self) -> dict:
        out = {"value": self.result.value if self.result.is_value else "exhausted",
               "spent": self.result.spent}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.bound is not None:
            out["bound"] = self.bound
        if self.malformed:
            out["malformed"] = list(self.malformed)
        if self.stage:
            out["stage"] = self.stage
        return out


@dataclass(frozen=True)
class AntiSpeckerRealizer:
    """Evaluates (sequence of names, avoidance name, fuel) to the settling
    index of the sequence.  Provenance records how it was built."""

    evaluate: Callable[[NameSequence, AvoidanceName, int], EvalOutcome]
    provenance: str
    pointed: PointedSpace


def _exact_settling_value(seq: NameSequence, pointed: PointedSpace,
                          bound: int) -> int:
    value = 0
    for i in range(min(bound, seq.horizon)):
        if not pointed.is_star(seq.entry(i)):
            value = i + 1
    return value


def direct_scan_realizer(pointed: PointedSpace) -> AntiSpeckerRealizer:
    """The independent oracle: scan the declared prefix for the last real
    entry.  Ignores the avoidance name entirely."""

    def evaluate(seq: NameSequence, h: AvoidanceName, fuel: int) -> EvalOutcome:
        if not seq.eventually_star:
            return EvalOutcome(PartialResult.exhausted(0), stage="not-eventually-star")
        onset = seq.star_onset(pointed)
        return EvalOutcome(PartialResult.of(onset, spent=0))

    return AntiSpeckerRealizer(evaluate, "direct_scan", pointed)


def realizer_from_base(base: CompactnessBase,
                       pointed: Optional[PointedSpace] = None,
                       max_prefix_len: int = 16) -> AntiSpeckerRealizer:
    """Search the base for a member whose every atom the avoidance name
    certifies, then return the exact settling index.

    An atom (sigma, n) is certified by an answer (n', m) with n' <= n on
    some finite-sequence restriction of sigma; prefixes are scanned short
    to long and the first usable answer wins.  The returned bound is the
    maximum of the certified m's; the final value is recomputed exactly by
    scanning the sequence below the bound, so it does not depend on which
    member certified.  Fuel counts avoidance-name queries; prefixes longer
    than ``max_prefix_len`` are never queried, since their codes grow
    doubly exponentially with length.
    """
    if pointed is None:
        pointed = star_extension(base.space)

    def evaluate(seq: NameSequence, h: AvoidanceName, fuel: int) -> EvalOutcome:
        oracle = h.h if isinstance(h, AvoidanceName) else h
        spent = 0
        malformed: list[tuple[int, int]] = []
        for member_index in itertools.count():
            bounds: list[int] = []
            certified_atoms: list[CoverAtom] = []
            certified = True
            try:
                atom_stream = base.iter_atoms(member_index)
            except SpecError:
                return EvalOutcome(PartialResult.exhausted(spent), stage="empty-base",
                                   malformed=tuple(malformed))
            for atom in atom_stream:
                found = None
                for length in range(min(atom.sigma.initial_run, max_prefix_len) + 1):
                    if spent >= fuel:
                        return EvalOutcome(PartialResult.exhausted(spent),
                                           malformed=tuple(malformed))
                    code = atom.sigma.prefix_code(length)
                    spent += 1
                    v = oracle(code)
                    if v > 0:
                        nm = decode_pair(v - 1)
                        if nm is None:
                            malformed.append((code, v))
                            continue
                        n_ans, m_ans = nm
                        if n_ans <= atom.n:
                            found = m_ans
                            break
                if found is None:
                    certified = False
                    break
                bounds.append(found)
                certified_atoms.append(atom)
            if not certified_atoms:
                # an empty member certifies nothing; burn a step and move on
                spent += 1
                if spent >= fuel:
                    return EvalOutcome(PartialResult.exhausted(spent),
                                       malformed=tuple(malformed))
                continue
            if certified:
                bound = max(bounds) if bounds else 0
                value = _exact_settling_value(seq, pointed, bound)
                return EvalOutcome(PartialResult.of(value, spent=spent),
                                   certificate=Theta(tuple(certified_atoms)),
                                   bound=bound,
                                   member_index=member_index,
                                   malformed=tuple(malformed))

    return AntiSpeckerRealizer(evaluate, "from_base", pointed)


# ---------------------------------------------------------------------------
# Probing a realizer back into a base
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeConfig:
    budget: int = 400           # realizer evaluations
    eval_fuel: int = 600        # avoidance-name queries per evaluation
    blind_size_cap: int = 8     # total code size of blindly enumerated tables
    depth_cap: int = 4          # structured candidates answer at length >= D
    radius_grid: tuple[int, ...] = (0, 1, 2)
    onset_grid: tuple[int, ...] = (0, 3)


def _blind_candidates(size_cap: int):
    """Finite partial functions by total code size, then lexicographically.

    The size of a table is the sum of position + value + 1 over its
    entries, so every size class is finite and every finite table shows up
    exactly once.
    """
    def tables_of(size: int, min_pos: int):
        if size == 0:
            yield ()
            return
        for pos in range(min_pos, size):
            for val in range(size - pos):
                head = ((pos, val),)
                remaining = size - (pos + val + 1)
                for rest in tables_of(remaining, pos + 1):
                    yield head + rest

    for size in range(size_cap + 1):
        for entries in sorted(tables_of(size, 0)):
            yield FinPartialFn(entries)


def base_from_realizer(m: AntiSpeckerRealizer, pointed: PointedSpace,
                       probe_budget: int = 400,
                       config: Optional[ProbeConfig] = None) -> ProbedBase:
    """Harvest covering members by probing the realizer on the all-star
    sequence against finitely-determined avoidance names.

    Two probe phases share the budget.  Phase one enumerates finite answer
    tables by total code size and accepts an evaluation only when every
    query stayed inside the table ("determined by the table").  Phase two
    probes with uniform candidates that answer a fixed (n, m) pair on every
    sequence of the same length or longer, then freezes the queried
    restriction as the determining table; this is how deep members are
    reached at all, since blind enumeration cannot.  Every member is
    emitted only after passing the covering check; the budget cutting the
    enumeration off is recorded on the returned base.
    """
    cfg = config if config is not None else ProbeConfig(budget=probe_budget)
    all_star = NameSequence((), "star")
    space = pointed.base
    emissions: list[Theta] = []
    seen: set = set()
    evals = 0

    def harvest(answered: dict[int, int]) -> Optional[Theta]:
        """Atoms at the prefix-minimal answered sequences."""
        answered_seqs = {code: decode_seq(code) for code, v in answered.items() if v > 0}
        atoms = []
        for code, s in answered_seqs.items():
            if any(other != s and s[:len(other)] == other
                   for other in answered_seqs.values()):
                continue
            nm = decode_pair(answered[code] - 1)
            if nm is None:
                continue
            atoms.append(CoverAtom(FinPartialFn.from_seq(s), nm[0]))
        if not atoms:
            return None
        return Theta(tuple(atoms))

    def consider(theta: Optional[Theta]) -> None:
        if theta is None or theta in seen:
            return
        try:
            if covers(theta, space).covered:
                seen.add(theta)
                emissions.append(theta)
        except InsufficientDepth:
            pass

    # Phase one: blind table enumeration.
    for table in _blind_candidates(cfg.blind_size_cap):
        if evals >= cfg.budget:
            break
        h_tau = RecordingOracle(Oracle(
            lambda c, d=table.as_dict(): d.get(c, 0), label="probe-table"))
        out = m.evaluate(all_star, AvoidanceName(h_tau, "probe"), cfg.eval_fuel)
        evals += 1
        if not out.result.is_value:
            continue
        dom = set(table.domain)
        if any(code not in dom for code, _ in h_tau.transcript):
            continue
        consider(harvest(table.as_dict()))

    # Phase two: uniform depth candidates, frozen to the queried restriction.
    for depth in range(cfg.depth_cap + 1):
        for n_ans in cfg.radius_grid:
            for m_ans in cfg.onset_grid:
                if evals >= cfg.budget:
                    break
                answer = encode_pair(n_ans, m_ans) + 1
                h_probe = RecordingOracle(Oracle(
                    lambda c, d=depth, a=answer: a if seq_length(c) >= d else 0,
                    label=f"probe-depth-{depth}"))
                out = m.evaluate(all_star, AvoidanceName(h_probe, "probe"),
                                 cfg.eval_fuel)
                evals += 1
                if not out.result.is_value:
                    continue
                frozen = {code: v for code, v in h_probe.transcript}
                consider(harvest(frozen))

    return ProbedBase(space, emissions, exhausted=True, evals_spent=evals)


# ---------------------------------------------------------------------------
# Products and transport
# ---------------------------------------------------------------------------


def product_anti_specker(mx: AntiSpeckerRealizer, my: AntiSpeckerRealizer,
                         product_pointed: PointedSpace,
                         probe_budget: int = 400,
                         config: Optional[ProbeConfig] = None) -> AntiSpeckerRealizer:
    """Realize the product: probe both factors back to bases, combine the
    bases, and rebuild a realizer over the product naming."""
    bx = base_from_realizer(mx, mx.pointed, probe_budget, config)
    if not bx.members:
        raise SpecError("left factor probe harvested nothing")
    by = base_from_realizer(my, my.pointed, probe_budget, config)
    if not by.members:
        raise SpecError("right factor probe harvested nothing")
    combined = product_base(bx, by)
    inner = realizer_from_base(combined, product_pointed)

    def evaluate(seq: NameSequence, h: AvoidanceName, fuel: int) -> EvalOutcome:
        out = inner.evaluate(seq, h, fuel)
        if not out.result.is_value and out.stage is None:
            return EvalOutcome(out.result, malformed=out.malformed,
                               stage="product-eval")
        return out

    return AntiSpeckerRealizer(evaluate, "product", product_pointed)


def _translate_name(psi: Oracle, g: Oracle, pointed_src: PointedSpace,
                    fuel: int) -> Oracle:
    """Apply a tracking name to a single sequence entry, star-aware: the
    added point translates to the added point without consulting psi."""
    if g(0) == 0:
        return k2.star_name()
    return k2.bullet(psi, g).freeze(fuel)


def _translate_avoidance(phi: Oracle, h: Oracle, fuel: int) -> Oracle:
    """Precompose an avoidance name with a tracking: on a source prefix,
    translate as much of the image prefix as the tracking determines, then
    take the first answer the original name gives on its restrictions."""
    def fn(code: int) -> int:
        s = decode_seq(code)
        image: list[int] = []
        f_tau = k2.from_values(list(s), tail_value=0)
        for idx in range(len(s)):
            # prefix length n of (idx, f) reads f at 0..n-2, so the value is
            # determined by s only when the scan fired at n <= len(s) + 1
            r = star(phi, cons(idx, f_tau), min(fuel, len(s) + 2))
            if not r.is_value or (r.fired_at is not None and r.fired_at > len(s) + 1):
                break
            image.append(r.value)
        for length in range(len(image), -1, -1):
            v = h(encode_seq(image[:length]))
            if v > 0:
                return v
        return 0
    return Oracle(fn, label="transported-avoidance")


def transport_realizer(m: AntiSpeckerRealizer, phi: Oracle, psi: Oracle,
                       target: PointedSpace, fuel: int = 64) -> AntiSpeckerRealizer:
    """Transport a realizer across namings of the same space along identity
    trackings: phi from the realizer's naming into the target one, psi the
    other way.  Sequences translate through psi, avoidance names precompose
    with phi."""

    def evaluate(seq: NameSequence, h: AvoidanceName, eval_fuel: int) -> EvalOutcome:
        oracle = h.h if isinstance(h, AvoidanceName) else h
        try:
            translated = NameSequence(
                tuple(_translate_name(psi, g, target, fuel) for g in seq.prefix),
                seq.tail)
        except k2.FuelExhausted as e:
            return EvalOutcome(PartialResult.exhausted(e.spent),
                               stage="transport-translate")
        h_new = AvoidanceName(_translate_avoidance(phi, oracle, fuel), "transported")
        try:
            out = m.evaluate(translated, h_new, eval_fuel)
        except k2.FuelExhausted as e:
            return EvalOutcome(PartialResult.exhausted(e.spent),
                               stage="transport-translate")
        if not out.result.is_value and out.stage is None:
            return EvalOutcome(out.result, malformed=out.malformed,
                               stage="transport-eval")
        return out

    return AntiSpeckerRealizer(evaluate, "transported", target)
