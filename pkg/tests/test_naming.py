import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from baire import k2, naming
from baire.k2 import FinPartialFn, constant, from_values, pair_names, project_names
from baire.naming import (CantorPoint, NameSequence, cantor_space, finite_space,
                          nat_naming, product_metric_naming, star_extension,
                          verify_reduction)


# --- naturals -------------------------------------------------------------

def test_nat_naming_reads_head():
    nat = nat_naming()
    f = from_values([5], tail_value=0)
    assert nat.contains(f, 16)
    assert nat.point_of(f) == 5


def test_nat_naming_rejects_noisy_tail():
    nat = nat_naming()
    assert not nat.contains(from_values([5, 1], tail_value=0), 16)


def test_nat_naming_zero():
    nat = nat_naming()
    assert nat.point_of(constant(0)) == 0


# --- registry spaces -------------------------------------------------------

def test_cantor_first_difference_metric():
    m = cantor_space()
    f = from_values([1, 2], tail_value=2)
    g = constant(1)
    assert m.dist(m.naming.point_of(f), m.naming.point_of(g)) == Fraction(1, 2)


def test_cantor_equal_names_have_zero_distance_stream():
    m = cantor_space()
    f = from_values([2, 1], tail_value=1)
    g = from_values([2, 1], tail_value=1)
    d = m.dist_hat(f, g)
    for k in (1, 5, 20):
        assert d.approx(k) == 0


def test_finite_discrete_metric():
    m = finite_space(3)
    assert m.dist(1, 3) == 1
    assert m.dist(2, 2) == 0


def test_finite_space_domain():
    m = finite_space(3)
    assert m.naming.contains(constant(2), 16)
    assert not m.naming.contains(constant(4), 16)
    assert not m.naming.contains(from_values([1, 2], tail_value=1), 16)


def test_finite_space_needs_a_point():
    with pytest.raises(ValueError):
        finite_space(0)


# --- pairing ---------------------------------------------------------------

def test_pair_interleaves():
    p = pair_names(constant(1), constant(2))
    assert [p(i) for i in range(6)] == [1, 2, 1, 2, 1, 2]


@given(st.integers(min_value=0, max_value=10 ** 6))
def test_pair_project_round_trip(seed):
    rng = random.Random(seed)
    f = k2.TableOracle({i: rng.randrange(9) for i in range(5)}, rng.randrange(9))
    g = k2.TableOracle({i: rng.randrange(9) for i in range(7)}, rng.randrange(9))
    left, right = project_names(pair_names(f, g))
    for i in range(21):
        assert left(i) == f(i) and right(i) == g(i)


def test_pairing_partial_functions():
    sigma = FinPartialFn.from_seq([7])
    tau = FinPartialFn.from_seq([8, 9])
    assert FinPartialFn.interleave(sigma, tau).as_dict() == {0: 7, 1: 8, 3: 9}


# --- metric naming coherence ------------------------------------------------

SPACES = [cantor_space(), finite_space(5),
          product_metric_naming(cantor_space(), cantor_space())]


@pytest.mark.parametrize("m", SPACES, ids=lambda m: m.space.space_id)
def test_stream_matches_exact_metric(m):
    rng = random.Random(7)
    sp = m.space
    for _ in range(25):
        p, q = sp.sample_point(rng), sp.sample_point(rng)
        exact = m.dist(p, q)
        stream = m.dist_hat(sp.canonical_name(p), sp.canonical_name(q))
        assert abs(stream.approx(20) - exact) <= Fraction(1, 2 ** 20)


@pytest.mark.parametrize("m", SPACES, ids=lambda m: m.space.space_id)
def test_metric_axioms(m):
    rng = random.Random(8)
    sp = m.space
    for _ in range(40):
        p, q, r = (sp.sample_point(rng) for _ in range(3))
        assert m.dist(p, q) == m.dist(q, p)
        assert m.dist(p, p) == 0
        assert 0 <= m.dist(p, q) <= 1
        assert m.dist(p, r) <= m.dist(p, q) + m.dist(q, r)


def test_product_metric_is_max():
    mc = cantor_space()
    prod = product_metric_naming(mc, mc)
    a = CantorPoint((0, 0), 0)
    b = CantorPoint((0, 1), 0)   # distance 1/2
    c = CantorPoint((0, 0, 1), 0)  # distance 1/4 from a
    assert prod.dist((a, a), (b, c)) == Fraction(1, 2)
    assert prod.dist((a, a), (a, a)) == 0


def test_product_stream_on_random_pairs():
    rng = random.Random(9)
    prod = product_metric_naming(cantor_space(), cantor_space())
    sp = prod.space
    for _ in range(50):
        p, q = sp.sample_point(rng), sp.sample_point(rng)
        exact = prod.dist(p, q)
        d = prod.dist_hat(sp.canonical_name(p), sp.canonical_name(q))
        assert abs(d.approx(10) - exact) <= Fraction(1, 2 ** 10)


# --- one-point extension ----------------------------------------------------

def test_star_distance_is_one():
    pointed = star_extension(cantor_space())
    name = from_values([1, 2], tail_value=1)
    assert pointed.dist_hat(name, pointed.star).approx(6) == 1
    assert pointed.dist(naming.STAR_POINT, pointed.base.naming.point_of(name)) == 1


def test_star_detection_reads_one_query():
    pointed = star_extension(finite_space(2))
    meter_star, m1 = k2.with_usage_tracking(k2.star_name())
    assert pointed.is_star(meter_star) and m1.max_index == 0 and m1.count == 1
    meter_real, m2 = k2.with_usage_tracking(constant(1))
    assert not pointed.is_star(meter_real) and m2.count == 1


def test_star_extension_rejects_vanishing_names():
    m = cantor_space()
    bad = naming.MetricNaming(m.naming, m.dist, m.dist_hat, m.space,
                              names_positive=False)
    with pytest.raises(ValueError):
        star_extension(bad)


# --- sequences ---------------------------------------------------------------

def test_sequence_onset():
    pointed = star_extension(cantor_space())
    f = constant(1)
    seq = NameSequence((f, k2.star_name(), f), "star")
    assert seq.star_onset(pointed) == 3
    assert NameSequence((), "star").star_onset(pointed) == 0


def test_repeat_tail_never_settles():
    seq = NameSequence((constant(1),), "repeat")
    assert not seq.eventually_star
    assert seq.entry(100)(0) == 1


def test_sequence_spec_parsing():
    seq = naming.parse_name_sequence("all-star")
    assert seq.eventually_star and seq.horizon == 0
    seq = naming.parse_name_sequence({"names": ["const:1", "star"], "tail": "star"})
    assert seq.horizon == 2 and seq.entry(0)(0) == 1


# --- reductions --------------------------------------------------------------

def _eval_arg_name():
    return k2.parse_oracle_spec({"tail": {"kind": "registry", "name": "eval_arg"}})


def _swap_name():
    return k2.parse_oracle_spec({"tail": {"kind": "registry",
                                          "name": "eval_arg_swap12"}})


def test_identity_reduction_succeeds():
    m = cantor_space()
    samples = [constant(1), from_values([2, 1], tail_value=2)]
    report = verify_reduction(_eval_arg_name(), m, m, samples, fuel=24, horizon=8)
    assert report.ok, report


def test_wrong_point_reduction_caught():
    m = finite_space(3)
    # translate everything to the constant-2 name, whatever the input
    h = k2.Oracle(lambda c: 3 if k2.seq_length(c) >= 1 else 0)
    report = verify_reduction(h, m, m, [constant(1)], fuel=24, horizon=6)
    assert not report.ok and report.counterexample["reason"] == "wrong point"


def test_digit_swap_reduction():
    rng = random.Random(11)
    std, swapped = cantor_space(), cantor_space(recode_swap=True)
    samples = [std.space.canonical_name(std.space.sample_point(rng))
               for _ in range(20)]
    report = verify_reduction(_swap_name(), std, swapped, samples,
                              fuel=24, horizon=8)
    assert report.ok, report


def test_exhausted_reduction_is_inconclusive():
    m = cantor_space()
    report = verify_reduction(constant(0), m, m, [constant(1)], fuel=5)
    assert not report.ok and report.inconclusive


# --- space specs --------------------------------------------------------------

def test_space_spec_round_trip():
    spec = {"kind": "product", "left": {"kind": "cantor"},
            "right": {"kind": "finite", "n": 2}}
    sp = naming.parse_space_spec(spec)
    assert sp.space_id == "(cantor x finite(2))"
    assert sp.to_json() == spec
    with pytest.raises(k2.SpecError):
        naming.parse_space_spec({"kind": "torus"})
