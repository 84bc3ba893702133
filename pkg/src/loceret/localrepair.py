"""Local erasure repair with helper-error detection.

A recovery plan for a target coordinate packages precomputed dual codewords:
a recovery word w supported on the helpers plus the target (all entries
nonzero for the RS constructions), and t detection rows supported on the
helpers alone.  Repair first checks every detection row against the helper
symbols; a nonzero inner product proves corruption, otherwise the erased
symbol is a fixed linear combination of the helpers.  With at most t
corrupted helpers the verdict is guaranteed: either corruption is flagged or
the returned value is correct.  No polynomial interpolation is involved.

The dual words come from the polynomial that vanishes on the complement of
the chosen point set: its value at a member point costs r multiplications and
one inversion via the product of all nonzero field elements being -1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

from . import codeops
from .galois import CountingField
from .rscodes import LrcRsSpec, RsSpec


class AlphaNotInSetError(ValueError):
    """Evaluation point must belong to the support set."""


class NotEnoughCoordinatesError(ValueError):
    """Code too short for a helper set of the required size."""


class HelpersNotEdrError(ValueError):
    """Proposed helper set cannot detect the requested number of errors."""


class WrongLengthError(ValueError):
    """Helper symbol vector has the wrong length."""


@dataclass(frozen=True)
class RecoveryPlan:
    """Everything needed to repair one coordinate from fixed helpers.

    weights holds the recovery word over barred (helpers plus target, sorted);
    check_rows are the detection rows aligned with helpers; recovery_row is
    the precomputed combination -w_target^(-1) * w_helpers, so one inner
    product of length r recovers the erased symbol.
    """
    field: object
    target: int
    helpers: tuple[int, ...]
    barred: tuple[int, ...]
    target_pos: int
    weights: tuple[int, ...]
    check_rows: tuple[tuple[int, ...], ...]
    recovery_row: tuple[int, ...]
    t: int


@dataclass(frozen=True)
class RepairOutcome:
    """Either a recovered symbol or a detection verdict, never both."""
    value: int | None

    @property
    def detected(self) -> bool:
        return self.value is None


def recovery_weight(field, support_points, alpha: int) -> int:
    """Entry at alpha of the dual word living on the given point set.

    Computed as minus the inverse of the product of the differences to the
    other support points: exactly len(support) - 1 multiplications, one
    inversion and one negation.  Equals the direct product of (alpha - g)
    over every field element g outside the support.
    """
    acc = 1
    seen = False
    for gamma in support_points:
        if gamma == alpha:
            seen = True
            continue
        acc = field.mul(acc, field.sub(alpha, gamma))
    if not seen:
        raise AlphaNotInSetError(f"{alpha} is not in the support set")
    return field.neg(field.inv(acc))


def _dot(field, xs, ys):
    acc = 0
    for x, y in zip(xs, ys):
        acc = field.add(acc, field.mul(x, y))
    return acc


def _build_plan(field, barred_coords, barred_points, target, t) -> RecoveryPlan:
    """Assemble the plan from the coordinate/point layout of the barred set."""
    order = sorted(range(len(barred_coords)), key=lambda idx: barred_coords[idx])
    coords = tuple(barred_coords[idx] for idx in order)
    pts = tuple(barred_points[idx] for idx in order)
    target_pos = coords.index(target)
    alpha_t = pts[target_pos]

    weights = tuple(recovery_weight(field, pts, a) for a in pts)
    helper_pts = tuple(a for a in pts if a != alpha_t)
    helper_w = tuple(w for idx, w in enumerate(weights) if idx != target_pos)

    check_rows = []
    if t > 0:
        row = tuple(field.mul(field.sub(a, alpha_t), w)
                    for a, w in zip(helper_pts, helper_w))
        check_rows.append(row)
        for _ in range(1, t):
            row = tuple(field.mul(a, z) for a, z in zip(helper_pts, row))
            check_rows.append(row)

    scale = field.neg(field.inv(weights[target_pos]))
    recovery_row = tuple(field.mul(scale, w) for w in helper_w)

    helpers = tuple(c for c in coords if c != target)
    return RecoveryPlan(field=field, target=target, helpers=helpers,
                        barred=coords, target_pos=target_pos, weights=weights,
                        check_rows=tuple(check_rows),
                        recovery_row=recovery_row, t=t)


def _rs_plan_inputs(spec: RsSpec, target, t, helpers):
    n = len(spec.points)
    if not isinstance(target, int) or not 0 <= target < n:
        raise codeops.IndexOutOfRangeError(f"target {target!r} outside [0, {n})")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    need = spec.k + t
    if helpers is None:
        if n < need + 1:
            raise NotEnoughCoordinatesError(
                f"need {need + 1} coordinates for t = {t}, code has {n}")
        chosen = []
        for c in range(n):
            if c != target:
                chosen.append(c)
            if len(chosen) == need:
                break
        helpers = tuple(chosen)
    else:
        helpers = codeops._coords(n, helpers)
        if target in helpers:
            raise ValueError(f"target {target} must not be among the helpers")
        if len(helpers) != need:
            raise HelpersNotEdrError(
                f"detecting t = {t} errors takes exactly k + t = {need} helpers, "
                f"got {len(helpers)}")
        if not codeops.is_edr_set(spec.code, target, helpers, t):
            raise HelpersNotEdrError(
                f"{list(helpers)} is not a {t}-error-detecting recovery set "
                f"for coordinate {target}")
    barred = tuple(sorted(helpers + (target,)))
    return barred, tuple(spec.points[c] for c in barred)


def plan_rs(spec: RsSpec, target: int, t: int,
            helpers=None) -> RecoveryPlan:
    """Plan for an RS code: default helpers are the k + t lowest coordinates
    other than the target, which always form a t-edr set."""
    barred, pts = _rs_plan_inputs(spec, target, t, helpers)
    return _build_plan(spec.field, barred, pts, target, t)


def plan_lrcrs(spec: LrcRsSpec, target: int) -> RecoveryPlan:
    """Plan for a piecewise-RS code: the helpers are the target's fibre mates
    and one helper error is detectable (the fibre restriction has distance 3)."""
    barred = spec.fibre_coords(target)
    pts = tuple(spec.points[c] for c in barred)
    return _build_plan(spec.field, barred, pts, target, 1)


def plan_linear(code: codeops.LinearCode, target: int, t: int,
                helpers=None) -> RecoveryPlan:
    """Plan for an arbitrary linear code via words of the dual.

    The detection rows are a basis of the dual words supported on the
    helpers; the recovery word is any dual word on helpers + target that is
    nonzero at the target.  Entries of the recovery word may be zero off the
    target here, unlike in the RS constructions.
    """
    field = code.field
    if helpers is None:
        size, helpers = codeops._min_edr_for_coord(
            code, target, t, "exhaustive", codeops.DEFAULT_ENUM_CAP)
        if helpers is None:
            raise HelpersNotEdrError(
                f"coordinate {target} admits no {t}-error-detecting recovery set")
    else:
        helpers = codeops._coords(code.n, helpers)
        if not codeops.is_edr_set(code, target, helpers, t):
            raise HelpersNotEdrError(
                f"{list(helpers)} is not a {t}-error-detecting recovery set "
                f"for coordinate {target}")
    barred = tuple(sorted(helpers + (target,)))
    target_pos = barred.index(target)

    dual = codeops.dual(code)
    on_barred = codeops.shorten(dual, barred)
    weights = None
    for row in on_barred.gen:
        if row[target_pos] != 0:
            weights = row
            break
    if weights is None:
        raise AssertionError("an error-detecting recovery set must recover")
    check_rows = codeops.shorten(dual, helpers).gen if helpers else ()

    scale = field.neg(field.inv(weights[target_pos]))
    helper_w = tuple(w for idx, w in enumerate(weights) if idx != target_pos)
    recovery_row = tuple(field.mul(scale, w) for w in helper_w)
    return RecoveryPlan(field=field, target=target, helpers=helpers,
                        barred=barred, target_pos=target_pos, weights=weights,
                        check_rows=tuple(check_rows),
                        recovery_row=recovery_row, t=t)


def truncate_detection(plan: RecoveryPlan, t: int) -> RecoveryPlan:
    """Keep only the first t detection rows (t below the plan's capacity)."""
    if t > plan.t:
        raise ValueError(f"plan detects at most {plan.t} errors, asked for {t}")
    return replace(plan, check_rows=plan.check_rows[:t], t=t)


def detect(plan: RecoveryPlan, helper_values) -> bool:
    """True when the helper symbols are provably corrupted (some detection
    row has a nonzero inner product with them)."""
    if len(helper_values) != len(plan.helpers):
        raise WrongLengthError(
            f"expected {len(plan.helpers)} helper symbols, got {len(helper_values)}")
    field = plan.field
    for row in plan.check_rows:
        if _dot(field, row, helper_values) != 0:
            return True
    return False


def recover(plan: RecoveryPlan, helper_values) -> int:
    """The erased symbol as a fixed linear combination of the helper symbols.

    Correct whenever the helpers are clean; performs no error checking (see
    repair for the safe path) and no interpolation.
    """
    if len(helper_values) != len(plan.helpers):
        raise WrongLengthError(
            f"expected {len(plan.helpers)} helper symbols, got {len(helper_values)}")
    return _dot(plan.field, plan.recovery_row, helper_values)


def repair(plan: RecoveryPlan, helper_values) -> RepairOutcome:
    """Detect first, recover only on a clean verdict.

    With at most t corrupted helpers the outcome is guaranteed sound: either
    corruption is flagged or the recovered value is the true symbol.
    """
    if detect(plan, helper_values):
        return RepairOutcome(value=None)
    return RepairOutcome(value=recover(plan, helper_values))


def mult_count(spec, target: int, t: int = 1, helpers=None,
               helper_values=None) -> dict:
    """Instrumented operation tally for plan construction and (optionally)
    one repair from the stored plan.

    Plan construction costs at most r*(r + t + 2) multiplications and r + 2
    inversions for r helpers; repair costs exactly (t + 1)*r multiplications
    and no inversions, since the inverse is folded into the stored rows.
    """
    counting = CountingField(spec.field)
    if isinstance(spec, LrcRsSpec):
        if t != 1:
            raise ValueError("fibre plans detect exactly one error")
        barred = spec.fibre_coords(target)
        pts = tuple(spec.points[c] for c in barred)
    else:
        barred, pts = _rs_plan_inputs(spec, target, t, helpers)
    plan = _build_plan(counting, barred, pts, target, t)
    tally = {"plan_build": counting.counts(), "helpers": len(plan.helpers),
             "t": t, "repair": None}
    if helper_values is not None:
        counting.reset()
        outcome = repair(plan, helper_values)
        tally["repair"] = counting.counts()
        tally["outcome"] = outcome
    return tally


class PlanCache:
    """Memo for recovery plans, safe for concurrent reads with single-writer
    insertion.  Keys should include the code-descriptor digest so that plans
    never leak across codes; cached and freshly built plans are identical."""

    def __init__(self):
        self._plans: dict = {}
        self._lock = threading.Lock()

    def get_or_build(self, key, build):
        try:
            return self._plans[key]
        except KeyError:
            pass
        plan = build()
        with self._lock:
            return self._plans.setdefault(key, plan)

    def __len__(self):
        return len(self._plans)
