import itertools
import random
import threading

import pytest

from loceret import codeops
from loceret.galois import CountingField, Field
from loceret.localrepair import (AlphaNotInSetError, HelpersNotEdrError,
                                 NotEnoughCoordinatesError, PlanCache,
                                 WrongLengthError, detect,
                                 mult_count, plan_linear, plan_lrcrs, plan_rs,
                                 recover, recovery_weight, repair,
                                 truncate_detection)
from loceret.rscodes import encode, lrcrs_make, rs_make

F13 = Field(13)


def example_code():
    return lrcrs_make(F13, [0, 0, 0, 0, 1], [2, 2])


def plan_dot(field, xs, ys):
    acc = 0
    for x, y in zip(xs, ys):
        acc = field.add(acc, field.mul(x, y))
    return acc


# ---------------------------------------------------------------------------
# recovery weights
# ---------------------------------------------------------------------------

def test_recovery_weights_on_the_example_fibre():
    support = (1, 5, 8, 12)
    assert recovery_weight(F13, support, 1) == 3
    assert recovery_weight(F13, support, 5) == 2
    assert recovery_weight(F13, support, 8) == 11
    assert recovery_weight(F13, support, 12) == 10


def test_recovery_weight_equals_direct_complement_product():
    rng = random.Random(71)
    for field in (F13, Field(2, 3)):
        for _ in range(10):
            size = rng.randrange(2, min(6, field.q) + 1)
            support = rng.sample(range(field.q), size)
            alpha = rng.choice(support)
            direct = 1
            for gamma in field.elements():
                if gamma not in support:
                    direct = field.mul(direct, field.sub(alpha, gamma))
            assert recovery_weight(field, support, alpha) == direct


def test_recovery_weight_of_the_whole_field_is_one():
    for field in (F13, Field(2, 3)):
        support = list(field.elements())
        for alpha in support:
            assert recovery_weight(field, support, alpha) == 1


def test_recovery_weight_requires_membership():
    with pytest.raises(AlphaNotInSetError):
        recovery_weight(F13, (1, 5, 8), 2)


# ---------------------------------------------------------------------------
# plan construction
# ---------------------------------------------------------------------------

def test_rs_plan_reproduces_the_worked_example_pair():
    spec = rs_make(F13, [1, 5, 8, 12], 2)
    plan = plan_rs(spec, 0, 1)
    assert plan.helpers == (1, 2, 3)
    assert plan.weights == (3, 2, 11, 10)
    assert plan.check_rows == ((8, 12, 6),)


def test_plan_without_detection_has_no_check_rows():
    spec = rs_make(F13, list(range(8)), 3)
    plan = plan_rs(spec, 2, 0)
    assert plan.check_rows == ()
    assert len(plan.helpers) == 3
    message = [4, 9, 1]
    word = encode(spec, message).symbols
    assert recover(plan, [word[c] for c in plan.helpers]) == word[2]


def test_detection_rows_span_the_shortened_dual():
    spec = rs_make(F13, list(range(8)), 3)
    plan = plan_rs(spec, 0, 2)
    assert len(plan.check_rows) == 2
    dual_code = codeops.dual(spec.code)
    expected = codeops.shorten(dual_code, plan.helpers)
    got = codeops.code_from_rows(F13, plan.check_rows, len(plan.helpers))
    assert got == expected


def test_rs_plan_validation():
    spec = rs_make(F13, list(range(4)), 3)
    with pytest.raises(NotEnoughCoordinatesError):
        plan_rs(spec, 0, 1)                      # needs k + t + 1 = 5 points
    spec8 = rs_make(F13, list(range(8)), 3)
    with pytest.raises(HelpersNotEdrError):
        plan_rs(spec8, 0, 1, helpers=[1, 2])     # k - 1 helpers cannot work
    with pytest.raises(HelpersNotEdrError):
        plan_rs(spec8, 0, 1, helpers=[1, 2, 3, 4, 5])
    plan = plan_rs(spec8, 0, 1, helpers=[2, 4, 5, 7])
    assert plan.helpers == (2, 4, 5, 7)


def test_fibre_plans_for_every_coordinate_lie_in_the_dual():
    spec = example_code()
    code = spec.code
    for target in range(12):
        plan = plan_lrcrs(spec, target)
        assert all(w != 0 for w in plan.weights)
        assert all(z != 0 for row in plan.check_rows for z in row)
        extended_w = [0] * 12
        for coord, w in zip(plan.barred, plan.weights):
            extended_w[coord] = w
        for row in code.gen:
            assert plan_dot(F13, extended_w, row) == 0
        for zrow in plan.check_rows:
            extended_z = [0] * 12
            for coord, z in zip(plan.helpers, zrow):
                extended_z[coord] = z
            for row in code.gen:
                assert plan_dot(F13, extended_z, row) == 0


def test_every_constructed_plan_uses_an_error_detecting_set():
    spec8 = rs_make(F13, list(range(8)), 3)
    for t in (0, 1, 2):
        for target in range(8):
            plan = plan_rs(spec8, target, t)
            assert codeops.is_edr_set(spec8.code, target, plan.helpers, t)
    fibre_spec = example_code()
    for target in range(12):
        plan = plan_lrcrs(fibre_spec, target)
        assert codeops.is_edr_set(fibre_spec.code, target, plan.helpers, 1)


def test_generic_plan_matches_fibre_plan_semantics():
    spec = example_code()
    plan = plan_linear(spec.code, 0, 1)
    assert plan.helpers == (1, 2, 3)
    word = encode(spec, [1, 0, 0, 0, 1, 0]).symbols
    values = [word[c] for c in plan.helpers]
    assert not detect(plan, values)
    assert recover(plan, values) == word[0]
    corrupted = list(values)
    corrupted[1] = F13.add(corrupted[1], 5)
    assert detect(plan, corrupted)


def test_generic_plan_agrees_with_the_fibre_plan():
    # the generic planner may pick a different dual word (possibly with zero
    # entries), so recovery formulas agree on codeword restrictions while
    # detection verdicts agree everywhere (the detection span is the same)
    spec = example_code()
    fibre_plan = plan_lrcrs(spec, 0)
    generic = plan_linear(spec.code, 0, 1, helpers=[1, 2, 3])
    assert generic.helpers == fibre_plan.helpers
    for values in itertools.product(range(13), repeat=3):
        assert detect(generic, values) == detect(fibre_plan, values)
    local = rs_make(F13, spec.fibres[0][1], 2)
    for msg in itertools.product(range(13), repeat=2):
        word = encode(local, list(msg)).symbols
        assert recover(generic, word[1:]) == word[0]
        assert recover(fibre_plan, word[1:]) == word[0]


def test_generic_plan_refuses_unrecoverable_coordinates():
    identity = codeops.code_from_rows(F13, [[1, 0], [0, 1]])
    with pytest.raises(HelpersNotEdrError):
        plan_linear(identity, 0, 0)
    spec = rs_make(F13, list(range(8)), 3)
    with pytest.raises(HelpersNotEdrError):
        plan_linear(spec.code, 0, 1, helpers=[1, 2, 3])


# ---------------------------------------------------------------------------
# detect / recover / repair on the worked example
# ---------------------------------------------------------------------------

def test_detect_on_the_worked_example_values():
    plan = plan_lrcrs(example_code(), 0)
    assert not detect(plan, (6, 9, 0))
    assert detect(plan, (7, 9, 0))
    assert not detect(plan, (0, 0, 0))


def test_recover_on_the_worked_example_values():
    plan = plan_lrcrs(example_code(), 0)
    assert recover(plan, (6, 9, 0)) == 2
    assert recover(plan, (0, 0, 0)) == 0


def test_recover_matches_the_dual_word_formula():
    spec = example_code()
    rng = random.Random(73)
    for _ in range(30):
        target = rng.randrange(12)
        plan = plan_lrcrs(spec, target)
        values = [rng.randrange(13) for _ in plan.helpers]
        w_i = plan.weights[plan.target_pos]
        helper_w = [w for idx, w in enumerate(plan.weights)
                    if idx != plan.target_pos]
        formula = F13.mul(F13.neg(F13.inv(w_i)), plan_dot(F13, helper_w, values))
        assert recover(plan, values) == formula


def test_repair_outcomes():
    plan = plan_lrcrs(example_code(), 0)
    assert repair(plan, (6, 9, 0)).value == 2
    assert repair(plan, (7, 9, 0)).detected
    assert repair(plan, (0, 0, 0)).value == 0


def test_repair_roundtrip_over_seeded_messages():
    spec = example_code()
    plans = [plan_lrcrs(spec, i) for i in range(12)]
    rng = random.Random(79)
    for _ in range(100):
        message = [rng.randrange(13) for _ in range(6)]
        word = encode(spec, message).symbols
        for target in range(12):
            plan = plans[target]
            outcome = repair(plan, [word[c] for c in plan.helpers])
            assert outcome.value == word[target]


def test_soundness_exhaustive_over_all_fibre_restrictions():
    # every restriction of a codeword to a fibre is a short RS codeword;
    # enumerate them all and check clean verdicts plus exact recovery
    spec = example_code()
    for block in range(spec.u):
        coords = spec.fibre_coords(block * (spec.r + 1))
        members = spec.fibres[block][1]
        local = rs_make(F13, members, spec.r - 1)
        plans = {target: plan_lrcrs(spec, target) for target in coords}
        for msg in itertools.product(range(13), repeat=spec.r - 1):
            restriction = encode(local, list(msg)).symbols
            by_coord = dict(zip(coords, restriction))
            for target in coords:
                plan = plans[target]
                values = [by_coord[c] for c in plan.helpers]
                assert not detect(plan, values)
                assert recover(plan, values) == by_coord[target]


def test_single_error_always_detected_and_naive_always_wrong():
    spec = example_code()
    rng = random.Random(83)
    plans = [plan_lrcrs(spec, i) for i in range(12)]
    for _ in range(10):
        message = [rng.randrange(13) for _ in range(6)]
        word = encode(spec, message).symbols
        for target in range(12):
            plan = plans[target]
            clean = [word[c] for c in plan.helpers]
            for pos in range(3):
                for err in range(1, 13):
                    values = list(clean)
                    values[pos] = F13.add(values[pos], err)
                    assert detect(plan, values)
                    assert recover(plan, values) != word[target]


def test_wrong_helper_count_rejected():
    plan = plan_lrcrs(example_code(), 0)
    with pytest.raises(WrongLengthError):
        detect(plan, (1, 2))
    with pytest.raises(WrongLengthError):
        recover(plan, (1, 2, 3, 4))


def test_truncate_detection():
    plan = plan_lrcrs(example_code(), 0)
    bare = truncate_detection(plan, 0)
    assert bare.check_rows == () and bare.t == 0
    assert recover(bare, (6, 9, 0)) == 2
    with pytest.raises(ValueError):
        truncate_detection(plan, 2)


# ---------------------------------------------------------------------------
# operation counting
# ---------------------------------------------------------------------------

def test_recovery_weight_costs_exactly_r_multiplications():
    counting = CountingField(F13)
    support = (1, 5, 8, 12)
    for alpha in support:
        counting.reset()
        recovery_weight(counting, support, alpha)
        assert counting.mul_count == 3
        assert counting.inv_count == 1
        assert counting.neg_count == 1


def test_repair_cost_from_a_stored_plan():
    spec = example_code()
    tally = mult_count(spec, 0, t=1, helper_values=(6, 9, 0))
    r = tally["helpers"]
    assert r == 3
    assert tally["repair"]["mul"] == (1 + 1) * r        # t rows + recovery row
    assert tally["repair"]["inv"] == 0
    assert tally["repair"]["mul"] + tally["repair"]["inv"] <= 2 * r + 1 + 2
    assert tally["outcome"].value == 2
    build = tally["plan_build"]
    assert build["mul"] <= r * (r + 1 + 2)
    assert build["inv"] == r + 2


def test_plain_recovery_costs_r_multiplications():
    spec = rs_make(F13, list(range(8)), 3)
    tally = mult_count(spec, 0, t=0, helper_values=(1, 2, 3))
    assert tally["repair"]["mul"] == tally["helpers"]
    assert tally["repair"]["inv"] == 0


# ---------------------------------------------------------------------------
# plan cache
# ---------------------------------------------------------------------------

def test_plan_cache_returns_identical_plans():
    spec = example_code()
    cache = PlanCache()
    built = []

    def build():
        plan = plan_lrcrs(spec, 0)
        built.append(plan)
        return plan

    first = cache.get_or_build(("digest", 0, 1), build)
    second = cache.get_or_build(("digest", 0, 1), build)
    assert first is second
    assert len(built) == 1
    assert len(cache) == 1


def test_plan_cache_concurrent_reads():
    spec = example_code()
    cache = PlanCache()
    results = []

    def worker(target):
        plan = cache.get_or_build(
            ("digest", target, 1), lambda: plan_lrcrs(spec, target))
        results.append((target, plan.target))

    threads = [threading.Thread(target=worker, args=(i % 12,)) for i in range(48)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(target == planned for target, planned in results)
    assert len(cache) == 12
