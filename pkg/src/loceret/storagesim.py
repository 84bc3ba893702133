"""Seeded fault-injection simulator for an erasure-coded storage cluster.

One codeword symbol lives on each node.  A trial erases one target node and
silently corrupts helper symbols per the configured channel, then runs two
repair arms against the ground truth: naive recovery (the fixed linear
combination, no checking) and repair with detection.  Randomness is
counter-based, every draw is a pure hash of (seed, trial, draw index), so
reports are bit-identical regardless of how trials are scheduled.

Also hosts the byte ingestion pipeline: a byte stream is cut into m-bit
symbols of GF(2^m) and grouped into k-symbol messages, with reversible
0x80-then-zeros padding.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

from . import descriptor, localrepair

_COUNT_CELLS = ("clean_correct", "naive_wrong", "naive_right_under_error",
                "detected", "missed_wrong", "missed_right")
CSV_CELLS = ("clean_correct", "naive_wrong", "detected",
             "missed_wrong", "missed_right")

_CHUNK_TRIALS = 4096
_SCALE = 1 << 64


class UnsupportedFieldError(ValueError):
    """Byte ingestion needs characteristic 2."""


class PlanUnavailableError(ValueError):
    """The code has no usable recovery plan for some coordinate."""


@dataclass(frozen=True)
class Bernoulli:
    """Each helper symbol is independently corrupted with probability epsilon."""
    epsilon: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    def to_dict(self):
        return {"kind": "bernoulli", "epsilon": self.epsilon}


@dataclass(frozen=True)
class ExactErrors:
    """Exactly this many helper symbols are corrupted, positions uniform."""
    errors: int

    def __post_init__(self):
        if self.errors < 0:
            raise ValueError(f"error count must be nonnegative, got {self.errors}")

    def to_dict(self):
        return {"kind": "exact", "errors": self.errors}


def channel_from_dict(obj: dict):
    kind = obj.get("kind")
    if kind == "bernoulli":
        return Bernoulli(float(obj["epsilon"]))
    if kind == "exact":
        return ExactErrors(int(obj["errors"]))
    raise ValueError(f"unknown channel kind {kind!r}")


@dataclass(frozen=True)
class ClusterConfig:
    code: dict                      # code descriptor (see descriptor module)
    t: int
    channel: object                 # Bernoulli or ExactErrors
    trials: int
    seed: int
    target_policy: str = "round-robin"
    error_value_model: str = "uniform-nonzero"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if self.t < 0:
            raise ValueError(f"t must be nonnegative, got {self.t}")
        if self.target_policy not in ("round-robin", "uniform-random"):
            raise ValueError(f"unknown target policy {self.target_policy!r}")
        if self.error_value_model != "uniform-nonzero":
            raise ValueError(
                f"unsupported error value model {self.error_value_model!r}")

    def to_dict(self):
        return {"code_digest": descriptor.descriptor_digest(self.code),
                "t": self.t, "channel": self.channel.to_dict(),
                "trials": self.trials, "seed": self.seed,
                "target_policy": self.target_policy,
                "error_value_model": self.error_value_model}


def config_from_dict(obj: dict) -> ClusterConfig:
    return ClusterConfig(
        code=obj["code"], t=int(obj.get("t", 1)),
        channel=channel_from_dict(obj["channel"]),
        trials=int(obj["trials"]), seed=int(obj["seed"]),
        target_policy=obj.get("target_policy", "round-robin"),
        error_value_model=obj.get("error_value_model", "uniform-nonzero"))


# ---------------------------------------------------------------------------
# Counter-based randomness: draw(seed, trial, index) is a pure function, so
# any partitioning of the trial range reproduces the exact same stream.
# ---------------------------------------------------------------------------

def _draw(seed: int, trial: int, index: int) -> int:
    data = struct.pack("<QQQ", seed & (_SCALE - 1), trial, index)
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def _uniform(seed: int, trial: int, index: int, bound: int) -> int:
    # 64-bit draw reduced by modulus; the bias is below 2^-43 for the field
    # sizes in scope, far under Monte Carlo resolution.
    return _draw(seed, trial, index) % bound


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    phat = successes / n
    denom = 1.0 + z * z / n
    centre = phat + z * z / (2 * n)
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n))
    low = 0.0 if successes == 0 else max(0.0, (centre - half) / denom)
    high = 1.0 if successes == n else min(1.0, (centre + half) / denom)
    return (low, high)


@dataclass
class SimReport:
    """Outcome tallies of one simulation run; to_json() is byte-stable."""
    trials: int
    seed: int
    config: dict
    counts: dict
    corrupted_trials: int

    @property
    def rates(self) -> dict:
        out = {}
        for cell in _COUNT_CELLS:
            lo, hi = wilson_interval(self.counts[cell], self.trials)
            out[cell] = {"rate": self.counts[cell] / self.trials,
                         "ci_low": lo, "ci_high": hi}
        return out

    def to_dict(self) -> dict:
        return {"schema_version": 1, "trials": self.trials, "seed": self.seed,
                "config": self.config, "counts": dict(self.counts),
                "corrupted_trials": self.corrupted_trials,
                "rates": self.rates}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


class TrialRecord(NamedTuple):
    trial: int
    target: int
    corrupted: tuple[int, ...]     # helper positions that were corrupted
    truth: int
    naive_value: int
    outcome: localrepair.RepairOutcome


# ---------------------------------------------------------------------------
# Simulation core
# ---------------------------------------------------------------------------

_plan_cache = localrepair.PlanCache()


def _plan_for(bundle: descriptor.CodeBundle, coord: int, t: int):
    if bundle.kind == "rs":
        return localrepair.plan_rs(bundle.spec, coord, t)
    if bundle.kind == "lrcrs":
        plan = localrepair.plan_lrcrs(bundle.spec, coord)
        if t == plan.t:
            return plan
        return localrepair.truncate_detection(plan, t)
    return localrepair.plan_linear(bundle.code, coord, t)


def build_plans(bundle: descriptor.CodeBundle, t: int) -> list:
    """One plan per coordinate, memoized on (digest, coordinate, t)."""
    plans = []
    for coord in range(bundle.code.n):
        key = (bundle.digest, coord, t)
        try:
            plans.append(_plan_cache.get_or_build(
                key, lambda c=coord: _plan_for(bundle, c, t)))
        except ValueError as exc:
            raise PlanUnavailableError(
                f"no detection-capacity-{t} plan for coordinate {coord}: {exc}"
            ) from None
    return plans


class _SimContext:
    """Precomputed per-run state: plans and restricted encoding columns."""

    def __init__(self, config: ClusterConfig):
        self.config = config
        self.bundle = descriptor.build_code(config.code)
        self.field = self.bundle.field
        self.q = self.field.q
        spec = self.bundle.spec
        self.eval_rows = spec.eval_rows if spec is not None else self.bundle.code.gen
        self.k = len(self.eval_rows)
        if self.k == 0:
            raise PlanUnavailableError("cannot simulate the zero code")
        self.n = self.bundle.code.n
        self.plans = build_plans(self.bundle, config.t)
        # columns[c][b]: value of basis row b at coordinate c
        self.columns = [tuple(row[c] for row in self.eval_rows)
                        for c in range(self.n)]

    def symbol_at(self, message, coord: int) -> int:
        field = self.field
        acc = 0
        for m, g in zip(message, self.columns[coord]):
            if m:
                acc = field.add(acc, field.mul(m, g))
        return acc


def iterate_trials(context: _SimContext, start: int, stop: int):
    """Yield one TrialRecord per trial index in [start, stop)."""
    cfg = context.config
    seed = cfg.seed
    field = context.field
    q = context.q
    k = context.k
    n = context.n
    uniform_target = cfg.target_policy == "uniform-random"
    bernoulli = isinstance(cfg.channel, Bernoulli)
    if bernoulli:
        threshold = int(cfg.channel.epsilon * _SCALE)
    else:
        exact = cfg.channel.errors

    for trial in range(start, stop):
        message = [_uniform(seed, trial, j, q) for j in range(k)]
        if uniform_target:
            target = _uniform(seed, trial, k, n)
        else:
            target = trial % n
        plan = context.plans[target]
        r = len(plan.helpers)
        truth = context.symbol_at(message, target)
        values = [context.symbol_at(message, c) for c in plan.helpers]

        if bernoulli:
            corrupted = tuple(j for j in range(r)
                              if _draw(seed, trial, k + 1 + j) < threshold)
        else:
            if exact > r:
                raise ValueError(
                    f"channel injects {exact} errors but only {r} helpers exist")
            keys = sorted((_draw(seed, trial, k + 1 + j), j) for j in range(r))
            corrupted = tuple(sorted(j for _, j in keys[:exact]))
        for j in corrupted:
            err = 1 + _uniform(seed, trial, k + 1 + r + j, q - 1)
            values[j] = field.add(values[j], err)

        naive_value = localrepair.recover(plan, values)
        outcome = localrepair.repair(plan, values)
        yield TrialRecord(trial, target, corrupted, truth, naive_value, outcome)


def trial_records(config: ClusterConfig, start: int = 0, stop: int | None = None):
    """Trial-level view of a campaign, for paired-policy comparisons and
    diagnostics; run_sim tallies exactly these records."""
    context = _SimContext(config)
    yield from iterate_trials(context, start, config.trials if stop is None else stop)


def _tally_range(context: _SimContext, start: int, stop: int) -> dict:
    counts = dict.fromkeys(_COUNT_CELLS, 0)
    counts["corrupted_trials"] = 0
    for rec in iterate_trials(context, start, stop):
        if not rec.corrupted:
            if rec.naive_value != rec.truth or rec.outcome.value != rec.truth:
                raise RuntimeError(
                    f"repair returned a wrong value on a clean trial {rec.trial}; "
                    "this indicates a bug, not a channel effect")
            counts["clean_correct"] += 1
            continue
        counts["corrupted_trials"] += 1
        if rec.naive_value == rec.truth:
            counts["naive_right_under_error"] += 1
        else:
            counts["naive_wrong"] += 1
        if rec.outcome.detected:
            counts["detected"] += 1
        elif rec.outcome.value == rec.truth:
            counts["missed_right"] += 1
        else:
            counts["missed_wrong"] += 1
    return counts


def run_sim(config: ClusterConfig, workers: int = 1) -> SimReport:
    """Run the campaign; identical (config, seed) gives a bit-identical report
    for any worker count, because trial outcomes are pure in the trial index
    and the tallies merge by commutative addition."""
    context = _SimContext(config)
    n_trials = config.trials
    chunks = [(s, min(s + _CHUNK_TRIALS, n_trials))
              for s in range(0, n_trials, _CHUNK_TRIALS)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(
                lambda span: _tally_range(context, *span), chunks))
    else:
        partials = [_tally_range(context, *span) for span in chunks]
    counts = dict.fromkeys(_COUNT_CELLS, 0)
    corrupted = 0
    for part in partials:
        corrupted += part["corrupted_trials"]
        for cell in _COUNT_CELLS:
            counts[cell] += part[cell]
    return SimReport(trials=n_trials, seed=config.seed,
                     config=config.to_dict(), counts=counts,
                     corrupted_trials=corrupted)


def compare_policies(config: ClusterConfig, policies=None, sweep=None,
                     workers: int = 1) -> list[dict]:
    """One run per (policy, channel point), all with the same seed so aligned
    draw streams see identical fault patterns.

    policies: list of {"name": str, ...config overrides...}; sweep: list of
    channel objects or dicts replacing the base channel per point.
    """
    if not policies:
        policies = [{"name": "default"}]
    channels = [config.channel]
    if sweep:
        channels = [ch if isinstance(ch, (Bernoulli, ExactErrors))
                    else channel_from_dict(ch) for ch in sweep]
    rows = []
    for policy in policies:
        overrides = {key: val for key, val in policy.items() if key != "name"}
        name = policy.get("name", "default")
        for channel in channels:
            cfg = ClusterConfig(
                code=config.code, t=overrides.get("t", config.t),
                channel=channel, trials=overrides.get("trials", config.trials),
                seed=config.seed,
                target_policy=overrides.get("target_policy", config.target_policy))
            report = run_sim(cfg, workers=workers)
            rows.append({"policy": name, "channel": channel.to_dict(),
                         "report": report})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    """Fixed-header CSV of a policy/channel sweep, one row per cell."""
    header = ["policy", "epsilon_or_e", "trials"]
    header += list(CSV_CELLS)
    header += [f"rate_{c}" for c in CSV_CELLS]
    header += [f"ci_low_{c}" for c in CSV_CELLS]
    header += [f"ci_high_{c}" for c in CSV_CELLS]
    lines = [",".join(header)]
    for row in rows:
        report = row["report"]
        channel = row["channel"]
        point = channel["epsilon"] if channel["kind"] == "bernoulli" else channel["errors"]
        rates = report.rates
        cells = [row["policy"], repr(point), str(report.trials)]
        cells += [str(report.counts[c]) for c in CSV_CELLS]
        cells += [repr(rates[c]["rate"]) for c in CSV_CELLS]
        cells += [repr(rates[c]["ci_low"]) for c in CSV_CELLS]
        cells += [repr(rates[c]["ci_high"]) for c in CSV_CELLS]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Byte ingestion
# ---------------------------------------------------------------------------

def _block_bytes(m: int, k: int) -> int:
    return math.lcm(m * k, 8) // 8


def ingest(data: bytes, field, k: int) -> list[list[int]]:
    """Cut a byte stream into k-symbol messages of m-bit symbols (big-endian
    within each symbol).  A 0x80 byte plus zeros pads to a whole number of
    messages; the marker is always appended so emit() can always strip it.
    """
    if field.p != 2:
        raise UnsupportedFieldError(
            f"byte ingestion needs characteristic 2, got {field!r}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    m = field.m
    block = _block_bytes(m, k)
    padded = bytearray(data)
    padded.append(0x80)
    while len(padded) % block:
        padded.append(0x00)

    symbols = []
    acc = 0
    bits = 0
    for byte in padded:
        acc = (acc << 8) | byte
        bits += 8
        while bits >= m:
            bits -= m
            symbols.append((acc >> bits) & ((1 << m) - 1))
            acc &= (1 << bits) - 1
    return [symbols[i:i + k] for i in range(0, len(symbols), k)]


def emit(messages, field) -> bytes:
    """Inverse of ingest: renders symbols back to bytes and strips the pad."""
    if field.p != 2:
        raise UnsupportedFieldError(
            f"byte ingestion needs characteristic 2, got {field!r}")
    m = field.m
    acc = 0
    bits = 0
    out = bytearray()
    for message in messages:
        for sym in message:
            acc = (acc << m) | field._check(sym)
            bits += m
            while bits >= 8:
                bits -= 8
                out.append((acc >> bits) & 0xFF)
                acc &= (1 << bits) - 1
    if bits:
        raise ValueError("symbol stream does not fill whole bytes")
    while out and out[-1] == 0x00:
        out.pop()
    if not out or out[-1] != 0x80:
        raise ValueError("padding marker missing; not an ingest() output")
    out.pop()
    return bytes(out)
