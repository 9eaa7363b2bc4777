"""The acceptance scorecard: one check per shipped guarantee.

Every check draws its inputs from a fixed seed and verifies the package
against an independently coded oracle (brute-force scans, exhaustive
enumeration, exact rational arithmetic), printing one pass or fail line
through the selftest command.  Tolerances are exact equality unless the
contract itself is approximation-indexed, in which case the stated 2^-k
bound is checked with exact rationals.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import antispecker as aspk
from . import bdn, cauchy, k2, naming, reals


@dataclass
class CriterionResult:
    name: str
    ok: bool
    detail: str
    seconds: float
    limit: float

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3), "limit": self.limit}


def _fail(msgs: list, text: str) -> None:
    msgs.append(text)


# ---------------------------------------------------------------------------
# 1. application operators: locality, fuel monotonicity, codec
# ---------------------------------------------------------------------------


def _random_table_oracle(rng: random.Random, size: int = 8, cap: int = 8) -> k2.TableOracle:
    table = {i: rng.randrange(cap) for i in range(rng.randrange(size + 1))}
    return k2.TableOracle(table, rng.randrange(cap), label="rand")


def _random_answering_oracle(rng: random.Random) -> k2.Oracle:
    a = rng.randrange(1, 1000)
    b = rng.randrange(1000)
    m = rng.randrange(5, 30)
    thresh = rng.randrange(1, m)
    return k2.Oracle(lambda c: (a * (c % 100003) + b) % m
                     if (a * (c % 100003) + b) % m < thresh else 0,
                     label="rand-answer")


def criterion_locality_fuel() -> CriterionResult:
    start = time.time()
    rng = random.Random(101)
    msgs: list[str] = []
    values = 0
    for trial in range(200):
        f = _random_answering_oracle(rng)
        g = _random_table_oracle(rng)
        fuel = rng.randrange(2, 12)
        r = k2.star(f, g, fuel)
        r2 = k2.star(f, g, fuel + 7)
        if r.is_value:
            values += 1
            if r2.value != r.value:
                _fail(msgs, f"trial {trial}: fuel monotonicity broke")
            # change g strictly past the firing index: same value, same index
            table = {i: g(i) for i in range(r.fired_at)}
            table.update({r.fired_at + d: g(r.fired_at + d) + 1 for d in range(4)})
            g_alt = k2.TableOracle(table, g.tail_value + 1, label="alt")
            r3 = k2.star(f, g_alt, fuel)
            if not (r3.is_value and r3.value == r.value
                    and r3.fired_at == r.fired_at):
                _fail(msgs, f"trial {trial}: determination locality broke")
        elif r2.is_value and r2.fired_at < fuel:
            _fail(msgs, f"trial {trial}: exhausted at {fuel} yet fired at {r2.fired_at}")
    for code in range(10 ** 4):
        if k2.encode_seq(k2.decode_seq(code)) != code:
            _fail(msgs, f"codec round trip failed at {code}")
            break
    for _ in range(200):
        s = [rng.randrange(50) for _ in range(rng.randrange(6))]
        if list(k2.decode_seq(k2.encode_seq(s))) != s:
            _fail(msgs, f"codec round trip failed on {s}")
            break
    detail = msgs[0] if msgs else f"200 pairs ({values} valued), codes < 10^4"
    return CriterionResult("1-star-locality-fuel-codec", not msgs, detail,
                           time.time() - start, 5.0)


# ---------------------------------------------------------------------------
# 2. signed-digit contract
# ---------------------------------------------------------------------------


def criterion_signed_digit() -> CriterionResult:
    start = time.time()
    rng = random.Random(202)
    msgs: list[str] = []
    for trial in range(100):
        q = Fraction(rng.randrange(-2000, 2001), rng.randrange(1, 64))
        x = reals.from_rational(q)
        for prec in range(31):
            if abs(x.approx(prec) - q) > Fraction(1, 2 ** prec):
                _fail(msgs, f"approx bound failed for {q} at {prec}")
                break
    for trial in range(100):
        p = Fraction(rng.randrange(-400, 401), rng.randrange(1, 48))
        q = Fraction(rng.randrange(-400, 401), rng.randrange(1, 48))
        m = reals.max_star(reals.from_rational(p), reals.from_rational(q))
        if abs(m.approx(20) - max(p, q)) > Fraction(1, 2 ** 20):
            _fail(msgs, f"max lifting off at ({p}, {q})")
    detail = msgs[0] if msgs else "100 rationals to 2^-30; max lifting at 2^-20"
    return CriterionResult("2-signed-digit-contract", not msgs, detail,
                           time.time() - start, 5.0)


# ---------------------------------------------------------------------------
# 3. metric coherence
# ---------------------------------------------------------------------------


def criterion_metric_coherence() -> CriterionResult:
    start = time.time()
    rng = random.Random(303)
    msgs: list[str] = []
    spaces = [naming.cantor_space(), naming.finite_space(5),
              naming.product_metric_naming(naming.cantor_space(),
                                           naming.cantor_space())]
    eps = Fraction(1, 2 ** 20)
    for m in spaces:
        sp = m.space
        for _ in range(100):
            p, q = sp.sample_point(rng), sp.sample_point(rng)
            exact = m.dist(p, q)
            stream = m.dist_hat(sp.canonical_name(p), sp.canonical_name(q))
            if abs(stream.approx(20) - exact) > eps:
                _fail(msgs, f"{sp.space_id}: stream disagrees on {p!r},{q!r}")
                break
        for _ in range(100):
            p, q, r = (sp.sample_point(rng) for _ in range(3))
            dpq, dqp = m.dist(p, q), m.dist(q, p)
            if dpq != dqp or m.dist(p, p) != 0 or dpq > 1 \
                    or m.dist(p, r) > dpq + m.dist(q, r):
                _fail(msgs, f"{sp.space_id}: metric axiom failed")
                break
    detail = msgs[0] if msgs else "3 spaces, 100 pairs at 2^-20, 100 exact triples"
    return CriterionResult("3-metric-coherence", not msgs, detail,
                           time.time() - start, 10.0)


# ---------------------------------------------------------------------------
# 4 & 6. settling-index exactness and the base round trip
# ---------------------------------------------------------------------------


def _random_star_sequence(rng: random.Random, pointed: naming.PointedSpace
                          ) -> naming.NameSequence:
    sp = pointed.space
    length = rng.randrange(0, 12)
    prefix = []
    for _ in range(length):
        if rng.random() < 0.3:
            prefix.append(k2.star_name())
        else:
            prefix.append(sp.canonical_name(sp.sample_point(rng)))
    return naming.NameSequence(tuple(prefix), "star")


_SUITE_SHAPES = ((0, 0), (1, 0), (2, 1), (3, 0), (0, 2))


def build_exactness_suite(rng: random.Random):
    """The shared suite: 25 sequences per space, 5 avoidance names each,
    depths up to 3 (including the deliberately deep answerers)."""
    suite = []
    for m in (naming.cantor_space(), naming.finite_space(3)):
        pointed = naming.star_extension(m)
        cases = []
        for _ in range(25):
            seq = _random_star_sequence(rng, pointed)
            names = [aspk.make_avoidance_name(seq, pointed, radius_exp=r,
                                              answer_depth=d)
                     for d, r in _SUITE_SHAPES]
            cases.append((seq, names))
        suite.append((m, pointed, cases))
    return suite


def _suite_agreement(realizers: dict, suite, fuel: int) -> Optional[str]:
    for m, pointed, cases in suite:
        realizer = realizers[m.space.space_id]
        oracle = aspk.direct_scan_realizer(pointed)
        for ci, (seq, names) in enumerate(cases):
            want = oracle.evaluate(seq, names[0], fuel).result.value
            for ni, h in enumerate(names):
                got = realizer.evaluate(seq, h, fuel)
                if not got.result.is_value or got.result.value != want:
                    return (f"{m.space.space_id} case {ci} name {ni}: "
                            f"{got.result.to_json()} != {want}")
    return None


def criterion_settling_exactness() -> CriterionResult:
    start = time.time()
    rng = random.Random(404)
    suite = build_exactness_suite(rng)
    realizers = {m.space.space_id:
                 aspk.realizer_from_base(aspk.builtin_base(m), pointed)
                 for m, pointed, _ in suite}
    bad = _suite_agreement(realizers, suite, fuel=4000)
    detail = bad or "50 sequences x 5 names, exact, both spaces"
    return CriterionResult("4-settling-exactness", bad is None, detail,
                           time.time() - start, 30.0)


def criterion_base_round_trip() -> CriterionResult:
    start = time.time()
    rng = random.Random(404)  # same suite as criterion 4
    suite = build_exactness_suite(rng)
    msgs: list[str] = []

    rederived = {}
    for m, pointed, _ in suite:
        direct = aspk.realizer_from_base(aspk.builtin_base(m), pointed)
        probed = aspk.base_from_realizer(direct, pointed, probe_budget=400)
        if not probed.members:
            _fail(msgs, f"{m.space.space_id}: probe harvested nothing")
            continue
        for theta in probed.members:
            if not aspk.covers(theta, m).covered:
                _fail(msgs, f"{m.space.space_id}: non-covering member emitted")
        rederived[m.space.space_id] = aspk.realizer_from_base(probed, pointed)

    fin2 = naming.finite_space(2)
    pointed2 = naming.star_extension(fin2)
    probed2 = aspk.base_from_realizer(
        aspk.realizer_from_base(aspk.builtin_base(fin2), pointed2),
        pointed2, probe_budget=400)
    if not probed2.members or not all(
            aspk.covers(t, fin2).covered for t in probed2.members):
        _fail(msgs, "finite(2) probe produced no verified covering")

    if not msgs:
        bad = _suite_agreement(rederived, suite, fuel=6000)
        if bad:
            _fail(msgs, f"re-derived disagreement: {bad}")
    detail = msgs[0] if msgs else (
        "harvests verified; re-derived realizers value-equal on the full suite")
    return CriterionResult("6-base-round-trip", not msgs, detail,
                           time.time() - start, 120.0)


# ---------------------------------------------------------------------------
# 5. product realizer
# ---------------------------------------------------------------------------


def criterion_product() -> CriterionResult:
    start = time.time()
    rng = random.Random(505)
    msgs: list[str] = []
    mc = naming.cantor_space()
    mf = naming.finite_space(2)
    prod = naming.product_metric_naming(mc, mf)
    pointed_prod = naming.star_extension(prod)
    realizer = aspk.product_anti_specker(
        aspk.realizer_from_base(aspk.builtin_base(mc), naming.star_extension(mc)),
        aspk.realizer_from_base(aspk.builtin_base(mf), naming.star_extension(mf)),
        pointed_prod, probe_budget=400)
    oracle = aspk.direct_scan_realizer(pointed_prod)

    shapes = ((0, 0), (2, 0), (3, 1))
    for ci in range(25):
        seq = _random_star_sequence(rng, pointed_prod)
        d, r = shapes[ci % len(shapes)]
        h = aspk.make_avoidance_name(seq, pointed_prod, radius_exp=r, answer_depth=d)
        want = oracle.evaluate(seq, h, 10).result.value
        got = realizer.evaluate(seq, h, 60000)
        if not got.result.is_value or got.result.value != want:
            _fail(msgs, f"case {ci} (depth {d}): {got.result.to_json()} != {want}")
            break

    pb = aspk.product_base(aspk.builtin_base(mc), aspk.builtin_base(mf))
    for i in range(12):
        if not aspk.covers(pb.enumerate_theta(i), prod).covered:
            _fail(msgs, f"product member {i} fails the covering check")
            break
    detail = msgs[0] if msgs else "25 product sequences exact; 12 members cover"
    return CriterionResult("5-product-realizer", not msgs, detail,
                           time.time() - start, 60.0)


# ---------------------------------------------------------------------------
# 7. protected splitting invariants
# ---------------------------------------------------------------------------


def _split_inputs() -> list[tuple[cauchy.RationalSeq, cauchy.RationalSeq, str]]:
    mk = cauchy.RationalSeq.make
    dyadic = cauchy.dyadic_targets()
    return [
        (mk([1]), mk([], "constant", 1), "hand-trace-ones"),
        (mk([1]), mk([]), "hand-trace-zero"),
        (mk([1]), dyadic, "unit-vs-dyadic"),
        (mk([1, 0, Fraction(1, 16)]), dyadic, "two-blocks-dyadic"),
        (mk([Fraction(1, 3), 0, 0, Fraction(1, 32)]), dyadic, "thirds"),
        (mk([0, 1, 0, Fraction(1, 16)]), mk([], "constant", 2), "shifted"),
        (mk([2, Fraction(1, 32)]), dyadic, "big-then-small"),
        (mk([Fraction(1, 2), Fraction(1, 16), Fraction(1, 64)]),
         mk([], "constant", 10), "far-targets"),
        (mk([0, 0, 5]), dyadic, "late-start"),
        (mk([Fraction(3, 2), 0, 0, 0, Fraction(1, 64)]),
         mk([], "geometric", 1, Fraction(1, 3)), "thirds-targets"),
    ]


def criterion_split_invariants() -> CriterionResult:
    start = time.time()
    msgs: list[str] = []
    for x, b, label in _split_inputs():
        try:
            ledger = cauchy.protected_split(x, b, stages=11)
        except (cauchy.ClearanceViolation, cauchy.StageBudgetExceeded) as e:
            _fail(msgs, f"{label}: {e}")
            continue
        for rec in ledger.stages:
            if sum(abs(v) for v in rec.y) != rec.x:
                _fail(msgs, f"{label}: block mass broken at stage {rec.stage}")
            if rec.k % 2 != 1:
                _fail(msgs, f"{label}: even block size at stage {rec.stage}")
            if rec.positive and rec.t is not None and rec.k > 1:
                if not (Fraction(rec.x) / rec.k < rec.t / 2):
                    _fail(msgs, f"{label}: block size too coarse at {rec.stage}")
                if Fraction(rec.x) / (rec.k - 2) < rec.t / 2:
                    _fail(msgs, f"{label}: block size not minimal at {rec.stage}")
            if rec.positive and rec.t is None and rec.k != 1:
                _fail(msgs, f"{label}: unprotected stage must keep one piece")
        report = cauchy.verify_clearances(
            ledger, Fraction(0) if x.support_end <= 11 else None)
        if not report.ok:
            _fail(msgs, f"{label}: clearance recomputation failed")
        # immutability: a second run must reproduce the protections exactly
        again = cauchy.protected_split(x, b, stages=11)
        if again.protections != ledger.protections:
            _fail(msgs, f"{label}: protections not reproducible")
        seen: set = set()
        for rec in ledger.stages:
            for key in rec.case2 + rec.case3:
                if key in seen:
                    _fail(msgs, f"{label}: protection reassigned")
                seen.add(key)
    # the two hand traces, frozen
    t1 = cauchy.protected_split(cauchy.RationalSeq.make([1]),
                                cauchy.RationalSeq.make([], "constant", 1), 1)
    f5 = Fraction(1, 5)
    if not (t1.stages[0].k == 5 and t1.stages[0].y == (f5, -f5, f5, -f5, f5)
            and t1.stages[0].t == Fraction(1, 2)
            and t1.protections == {(0, 0): Fraction(1, 2)}):
        _fail(msgs, "hand trace against constant targets is off")
    t2 = cauchy.protected_split(cauchy.RationalSeq.make([1]),
                                cauchy.RationalSeq.make([]), 1)
    if not (t2.stages[0].k == 1 and t2.stages[0].y == (Fraction(1),)
            and t2.stages[0].t is None
            and t2.protections == {(0, 0): Fraction(1, 2)}):
        _fail(msgs, "hand trace against zero targets is off")
    detail = msgs[0] if msgs else "10 inputs through stage 10, all invariants exact"
    return CriterionResult("7-split-invariants", not msgs, detail,
                           time.time() - start, 120.0)


# ---------------------------------------------------------------------------
# 8. settling index of rearranged series
# ---------------------------------------------------------------------------


def _brute_settling(z: cauchy.SplitSeries, p: cauchy.PermutationSpec, n: int) -> int:
    """Exhaustive window scan over the finite support (independent oracle)."""
    bound = Fraction(1, 2 ** n)
    scan = z.built_end + p.support_end + 4
    worst = -1
    for i in range(scan + 1):
        acc = Fraction(0)
        for j in range(i, scan + 1):
            acc += z.value_at(p(j))
            if abs(acc) >= bound:
                worst = max(worst, i)
                break
    return worst + 1


def _random_increasing_seq(rng: random.Random) -> Optional[cauchy.RationalSeq]:
    first = rng.choice([Fraction(1, 2), Fraction(1), Fraction(5, 4)])
    second = rng.choice([Fraction(1, 8), Fraction(1, 16), Fraction(1, 32),
                         Fraction(3, 32), Fraction(0)])
    gap = rng.randrange(0, 3)
    deltas = [first] + [Fraction(0)] * gap + [second]
    acc = Fraction(0)
    prefix = []
    for d in deltas:
        acc += d
        prefix.append(acc)
    return cauchy.RationalSeq.make(prefix, "constant", acc)


def _random_permutation(rng: random.Random, size: int) -> cauchy.PermutationSpec:
    idxs = list(range(size))
    rng.shuffle(idxs)
    return cauchy.PermutationSpec.from_mapping(
        {i: v for i, v in enumerate(idxs)})


def criterion_settling_index() -> CriterionResult:
    start = time.time()
    rng = random.Random(808)
    msgs: list[str] = []

    # the frozen constant-sequence example
    a_const = cauchy.RationalSeq.make([1], "constant", 1)
    series = cauchy.split_series_for(a_const)
    f = cauchy.exact_modulus(a_const, 8)
    got = cauchy.settling_index(series, cauchy.PermutationSpec.identity(), 3, f)
    brute = _brute_settling(series, cauchy.PermutationSpec.identity(), 3)
    if got != 5 or brute != 5:
        _fail(msgs, f"constant example: settled at {got} (brute {brute}), want 5")
    verdict = cauchy.classify_windows(series, cauchy.PermutationSpec.identity(),
                                      4, 3, f)
    if not (isinstance(verdict, cauchy.WindowWitness)
            and (verdict.i, verdict.j) == (4, 4)):
        _fail(msgs, f"window witness at 4 expected, got {verdict}")

    accepted = 0
    attempts = 0
    while accepted < 10 and attempts < 200:
        attempts += 1
        a = _random_increasing_seq(rng)
        try:
            series = cauchy.split_series_for(a)
        except (cauchy.StageBudgetExceeded, cauchy.ClearanceViolation):
            continue
        if len(series.ledger.flat) > 20:
            continue
        accepted += 1
        f = cauchy.exact_modulus(a, len(a.prefix) + 4)
        perms = [cauchy.PermutationSpec.identity(),
                 cauchy.PermutationSpec.from_mapping(
                     {series.built_end + 1: series.built_end + 3,
                      series.built_end + 3: series.built_end + 1})]
        perms += [_random_permutation(rng, rng.randrange(2, series.built_end + 4))
                  for _ in range(3)]
        for pi, p in enumerate(perms):
            for n in (2, 3, 4):
                want = _brute_settling(series, p, n)
                got = cauchy.settling_index(series, p, n, f)
                if got != want:
                    _fail(msgs, f"input {accepted} perm {pi} n={n}: "
                                f"{got} != brute {want}")
    if accepted < 10:
        _fail(msgs, f"only {accepted} inputs accepted")
    detail = msgs[0] if msgs else \
        "frozen example = 5; 10 inputs x 5 permutations x 3 exponents exact"
    return CriterionResult("8-settling-index", not msgs, detail,
                           time.time() - start, 60.0)


# ---------------------------------------------------------------------------
# 9. modulus transfer
# ---------------------------------------------------------------------------


def criterion_modulus_transfer() -> CriterionResult:
    start = time.time()
    rng = random.Random(909)
    msgs: list[str] = []
    cases = [cauchy.RationalSeq.make([1], "constant", 1),
             cauchy.RationalSeq.make([Fraction(1, 2), Fraction(3, 4)],
                                     "constant", Fraction(3, 4))]
    while len(cases) < 10:
        a = _random_increasing_seq(rng)
        try:
            cauchy.split_series_for(a)
        except (cauchy.StageBudgetExceeded, cauchy.ClearanceViolation):
            continue
        cases.append(a)
    for idx, a in enumerate(cases):
        series = cauchy.split_series_for(a)
        g = cauchy.abs_sum_modulus(series.ledger)
        fg = cauchy.modulus_from_abs_sums(series.ledger, g)
        report = cauchy.is_modulus(fg, a, horizon=40)
        if not report.ok:
            _fail(msgs, f"case {idx}: transfer fails at {report.counterexample}")
    detail = msgs[0] if msgs else "10 transfers pass the horizon-40 check"
    return CriterionResult("9-modulus-transfer", not msgs, detail,
                           time.time() - start, 10.0)


# ---------------------------------------------------------------------------
# 10. window-diameter settling index
# ---------------------------------------------------------------------------


def _brute_pc_index(x: cauchy.RationalSeq, f: cauchy.Modulus, g, n: int) -> int:
    bound = Fraction(1, 2 ** n)
    cap = f(n + 1)
    worst = -1
    for m in range(cap + 1):
        if cauchy.diam_window(x, m, g(m)) >= bound:
            worst = m
    return worst + 1


def criterion_pc_index() -> CriterionResult:
    start = time.time()
    rng = random.Random(1010)
    msgs: list[str] = []
    for trial in range(50):
        if trial % 2 == 0:
            prefix = [Fraction(rng.randrange(-8, 9), rng.randrange(1, 6))
                      for _ in range(rng.randrange(1, 10))]
            x = cauchy.RationalSeq.make(prefix, "constant", prefix[-1])
            f = cauchy.exact_modulus(x, len(prefix) + 4)
        else:
            c = Fraction(rng.randrange(1, 6), rng.randrange(1, 4))
            r = Fraction(1, rng.randrange(2, 5))
            x = cauchy.RationalSeq.make([], "geometric", c, r)

            def modulus_fn(n: int, c=c, r=r) -> int:
                m = 0
                while c * r ** m >= Fraction(1, 2 ** n):
                    m += 1
                return m
            f = cauchy.Modulus(modulus_fn)
        jitter = {i: i + rng.randrange(0, 4) for i in range(40)}
        g = k2.Oracle(lambda m, j=jitter: j.get(m, m), label="g")
        n = rng.randrange(0, 7)
        want = _brute_pc_index(x, f, g, n)
        got = cauchy.partially_cauchy_index(x, f, g, n)
        if got != want:
            _fail(msgs, f"trial {trial}: {got} != brute {want}")
            break
        if cauchy.partially_cauchy_index(x, f, k2.identity_oracle(), n) != 0:
            _fail(msgs, f"trial {trial}: identity windows must settle at 0")
            break
    detail = msgs[0] if msgs else "50 instances exact; identity always 0"
    return CriterionResult("10-pc-index", not msgs, detail,
                           time.time() - start, 10.0)


# ---------------------------------------------------------------------------
# 11. bound extraction and the adversary
# ---------------------------------------------------------------------------


def _strategy_candidates() -> list[k2.Oracle]:
    def parrot(code: int) -> int:
        s = k2.decode_seq(code)
        return s[0] + 2 if len(s) >= 1 else 0

    def g_reader(code: int) -> int:
        s = k2.decode_seq(code)
        if len(s) >= 1:
            gvals = k2.decode_seq(s[0])
            if len(gvals) >= 2:
                return max(gvals) + 2
        return 1 if len(s) >= 8 else 0

    def h_prober(code: int) -> int:
        s = k2.decode_seq(code)
        return s[1] + 2 if len(s) >= 2 else 0

    def mixer(code: int) -> int:
        s = k2.decode_seq(code)
        if len(s) >= 4:
            return (s[1] + s[2]) % 5 + 2
        return 0

    return [k2.constant(3, label="alpha-const"),
            k2.Oracle(parrot, label="alpha-parrot"),
            k2.Oracle(g_reader, label="alpha-g-reader"),
            k2.Oracle(h_prober, label="alpha-h-prober"),
            k2.Oracle(mixer, label="alpha-mixer")]


def criterion_bdn() -> CriterionResult:
    start = time.time()
    rng = random.Random(1111)
    msgs: list[str] = []
    for trial in range(20):
        bound = rng.randrange(1, 12)
        table = {i: rng.randrange(bound) for i in range(rng.randrange(0, 10))}
        g = k2.TableOracle(table, rng.randrange(bound), label="g")
        h = bdn.make_valid_realizer(g, bound, answer_len=rng.randrange(0, 4))
        n0 = bdn.extract_bound(g, h, fuel=50)
        if not all(g(m) < n0 for m in range(1001)):
            _fail(msgs, f"trial {trial}: extracted {n0} is not a strict bound")
            break

    reports = []
    for alpha in _strategy_candidates():
        report = bdn.adversary_refute(alpha, fuel=20000)
        reports.append(report)
        if report.verdict != "refuted":
            _fail(msgs, f"{alpha.label}: verdict {report.verdict} ({report.reason})")

    full = next((r for r in reports if r.a is not None), None)
    if full is None:
        _fail(msgs, "no candidate reached the rebuilt pair")
    else:
        k, a = full.k, full.a
        h1, g1 = bdn.adversary_pair(k, a)
        samples = [_random_table_oracle(rng, size=10, cap=a + 40)
                   for _ in range(40)]
        samples += [k2.TableOracle({kk: a + rng.randrange(0, 9)
                                    for kk in range(k + 2, min(a, k + 8))},
                                   0, label="spiky") for _ in range(10)]
        if not bdn.check_domination_hypothesis(h1, g1, samples, fuel=200):
            _fail(msgs, "rebuilt pair violates the domination hypothesis")
        f1 = bdn.functional_of_pair(k, a)
        for f in samples[:20]:
            r = k2.star(h1, f, 200)
            if not r.is_value or r.value != f1(f):
                _fail(msgs, "the rebuilt name disagrees with its functional")
                break
    detail = msgs[0] if msgs else \
        "20 extractions bounded; 5 candidates refuted; hypothesis holds on 50 samples"
    return CriterionResult("11-bdn", not msgs, detail, time.time() - start, 30.0)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


CRITERIA: list[tuple[str, Callable[[], CriterionResult]]] = [
    ("1-star-locality-fuel-codec", criterion_locality_fuel),
    ("2-signed-digit-contract", criterion_signed_digit),
    ("3-metric-coherence", criterion_metric_coherence),
    ("4-settling-exactness", criterion_settling_exactness),
    ("5-product-realizer", criterion_product),
    ("6-base-round-trip", criterion_base_round_trip),
    ("7-split-invariants", criterion_split_invariants),
    ("8-settling-index", criterion_settling_index),
    ("9-modulus-transfer", criterion_modulus_transfer),
    ("10-pc-index", criterion_pc_index),
    ("11-bdn", criterion_bdn),
]


def run_all(only: Optional[str] = None) -> list[CriterionResult]:
    results = []
    for name, fn in CRITERIA:
        if only and only not in name:
            continue
        results.append(fn())
    return results
