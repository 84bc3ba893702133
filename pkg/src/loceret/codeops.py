"""Generic linear-code calculus over explicit generator matrices.

Codes are held in reduced row echelon form, which makes equality of row
spaces a tuple comparison.  Minimum distance and generalized Hamming weights
are certified exhaustively (with configurable enumeration caps); recovery-set
and error-detecting-set checks reduce to column-rank computations, so they
stay cheap even where codeword enumeration would not.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_ENUM_CAP = 1 << 26
DEFAULT_EXHAUSTIVE_N = 20

_CHUNK = 1 << 16


class InconsistentLengthError(ValueError):
    """Generator rows of unequal length."""


class EmptySetError(ValueError):
    """Coordinate set must be nonempty."""


class TooLargeToEnumerateError(ValueError):
    """Search space exceeds the configured cap."""


class ZeroCodeError(ValueError):
    """Operation undefined for the zero code."""


class BadRankError(ValueError):
    """Requested subcode dimension out of range."""


class IndexOutOfRangeError(ValueError):
    """Coordinate outside [0, n)."""


def _coords(n: int, seq, allow_empty: bool = True) -> tuple[int, ...]:
    """Validate and canonicalize a coordinate set: sorted, unique, in range."""
    out = sorted(seq)
    if not allow_empty and not out:
        raise EmptySetError("coordinate set must be nonempty")
    for c in out:
        if not isinstance(c, int) or not 0 <= c < n:
            raise IndexOutOfRangeError(f"coordinate {c!r} outside [0, {n})")
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValueError(f"duplicate coordinate {a}")
    return tuple(out)


def rref(field, rows) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form over the field; returns (rows, pivot columns).

    Zero rows are dropped, so the result is a canonical basis of the row
    space (empty for the zero space).
    """
    mat = [list(r) for r in rows]
    if not mat:
        return (), ()
    n = len(mat[0])
    pivots = []
    rank = 0
    for col in range(n):
        piv = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = field.inv(mat[rank][col])
        if inv != 1:
            mat[rank] = [field.mul(inv, x) for x in mat[rank]]
        prow = mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                row = mat[r]
                mat[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(row, prow)]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    return tuple(tuple(r) for r in mat[:rank]), tuple(pivots)


class LinearCode:
    """A length-n, dimension-k code held as a reduced-row-echelon generator.

    Two instances with the same row space over the same field compare equal.
    Instances are immutable; construct through code_from_rows.
    """

    __slots__ = ("field", "n", "k", "gen", "pivots")

    def __init__(self, field, n, gen, pivots):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "gen", gen)
        object.__setattr__(self, "pivots", pivots)
        object.__setattr__(self, "k", len(gen))

    def __setattr__(self, name, value):
        raise AttributeError("LinearCode is immutable")

    def __eq__(self, other):
        return (isinstance(other, LinearCode)
                and self.field == other.field
                and self.n == other.n
                and self.gen == other.gen)

    def __hash__(self):
        return hash((self.field, self.n, self.gen))

    def __repr__(self):
        return f"LinearCode[{self.n},{self.k}] over {self.field!r}"


def code_from_rows(field, rows, n: int | None = None) -> LinearCode:
    """Canonical code spanned by the given rows; k = rank of the rows.

    The zero code (no rows, or all-zero rows) is allowed but then n must be
    supplied or deducible.
    """
    rows = [tuple(r) for r in rows]
    if rows:
        length = len(rows[0])
        for r in rows:
            if len(r) != length:
                raise InconsistentLengthError(
                    f"row lengths differ: {len(r)} vs {length}")
        if n is not None and n != length:
            raise InconsistentLengthError(f"n = {n} but rows have length {length}")
        n = length
        for r in rows:
            for x in r:
                field._check(x)
    elif n is None:
        raise InconsistentLengthError("empty code needs an explicit length")
    gen, pivots = rref(field, rows)
    return LinearCode(field, n, gen, pivots)


def puncture(code: LinearCode, coords) -> LinearCode:
    """Restriction of every codeword to the given coordinates."""
    S = _coords(code.n, coords, allow_empty=False)
    rows = [tuple(row[c] for c in S) for row in code.gen]
    return code_from_rows(code.field, rows, len(S))


def _nullspace(field, mat, width):
    """Basis of {x : mat @ x = 0} for a matrix given as rows of length width."""
    red, pivots = rref(field, mat)
    pivot_set = set(pivots)
    basis = []
    for j in range(width):
        if j in pivot_set:
            continue
        v = [0] * width
        v[j] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][j])
        basis.append(tuple(v))
    return basis


def shorten(code: LinearCode, coords) -> LinearCode:
    """Restrictions of the codewords whose support lies inside the set."""
    S = _coords(code.n, coords, allow_empty=False)
    field = code.field
    outside = [c for c in range(code.n) if c not in set(S)]
    if not outside:
        return code_from_rows(field, code.gen, code.n)
    if code.k == 0:
        return code_from_rows(field, [], len(S))
    # messages y with y . G zero outside S: left kernel of the outside columns
    mt = [tuple(code.gen[r][c] for r in range(code.k)) for c in outside]
    kernel = _nullspace(field, mt, code.k)
    rows = []
    for y in kernel:
        word = []
        for c in S:
            acc = 0
            for r in range(code.k):
                if y[r] != 0:
                    acc = field.add(acc, field.mul(y[r], code.gen[r][c]))
            word.append(acc)
        rows.append(tuple(word))
    return code_from_rows(field, rows, len(S))


def dual(code: LinearCode) -> LinearCode:
    """The [n, n-k] code orthogonal to every codeword."""
    field = code.field
    n = code.n
    pivot_set = set(code.pivots)
    rows = []
    for j in range(n):
        if j in pivot_set:
            continue
        v = [0] * n
        v[j] = 1
        for r, pc in enumerate(code.pivots):
            v[pc] = field.neg(code.gen[r][j])
        rows.append(tuple(v))
    return code_from_rows(field, rows, n)


# ---------------------------------------------------------------------------
# Exhaustive weight computations
# ---------------------------------------------------------------------------

def min_distance(code: LinearCode, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Minimum Hamming weight over all nonzero codewords, by enumeration.

    Messages are scanned in canonical field order, one representative per
    projective class (weights are scale invariant), which saves a factor
    q - 1 without changing the result.
    """
    if code.k == 0:
        raise ZeroCodeError("the zero code has no nonzero codeword")
    q = code.field.q
    if q ** code.k > cap:
        raise TooLargeToEnumerateError(
            f"q^k = {q ** code.k} exceeds the enumeration cap {cap}")
    if code.field.m == 1:
        return _min_distance_prime(code)
    return _min_distance_generic(code)


def _min_distance_prime(code: LinearCode) -> int:
    p = code.field.p
    G = np.array(code.gen, dtype=np.int64)
    k, n = G.shape
    best = n
    for lead in range(k):
        rest = k - lead - 1
        lead_row = G[lead]
        tail = G[lead + 1:]
        total = p ** rest
        for start in range(0, total, _CHUNK):
            stop = min(start + _CHUNK, total)
            idx = np.arange(start, stop, dtype=np.int64)
            if rest:
                suffix = np.empty((stop - start, rest), dtype=np.int64)
                for j in range(rest):
                    suffix[:, j] = (idx // (p ** j)) % p
                words = (suffix @ tail + lead_row) % p
            else:
                words = lead_row[None, :] % p
            w = np.count_nonzero(words, axis=1).min()
            best = min(best, int(w))
            if best == 1:
                return 1
    return best


def _min_distance_generic(code: LinearCode) -> int:
    field = code.field
    q = field.q
    k, n = code.k, code.n
    best = n
    for lead in range(k):
        rest = k - lead - 1
        for suffix in itertools.product(range(q), repeat=rest):
            word = list(code.gen[lead])
            for j, s in enumerate(suffix):
                if s == 0:
                    continue
                row = code.gen[lead + 1 + j]
                word = [field.add(x, field.mul(s, y)) for x, y in zip(word, row)]
            w = sum(1 for x in word if x != 0)
            if w < best:
                best = w
                if best == 1:
                    return 1
    return best


def _rank_cols(code: LinearCode, coords) -> int:
    """Rank of the generator restricted to the given columns (dim of C[S])."""
    if not coords or code.k == 0:
        return 0
    field = code.field
    mat = [[row[c] for c in coords] for row in code.gen]
    n_rows, n_cols = len(mat), len(mat[0])
    if field.m == 1:
        p = field.p
        rank = 0
        for c in range(n_cols):
            piv = None
            for r in range(rank, n_rows):
                if mat[r][c]:
                    piv = r
                    break
            if piv is None:
                continue
            mat[rank], mat[piv] = mat[piv], mat[rank]
            prow = mat[rank]
            inv = pow(prow[c], p - 2, p)
            for r in range(rank + 1, n_rows):
                f = mat[r][c]
                if f:
                    g = (f * inv) % p
                    row = mat[r]
                    for j in range(c, n_cols):
                        row[j] = (row[j] - g * prow[j]) % p
            rank += 1
            if rank == n_rows:
                break
        return rank
    rank = 0
    for c in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if mat[r][c]:
                piv = r
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = field.inv(prow[c])
        for r in range(rank + 1, n_rows):
            f = mat[r][c]
            if f:
                g = field.mul(f, inv)
                row = mat[r]
                for j in range(c, n_cols):
                    row[j] = field.sub(row[j], field.mul(g, prow[j]))
        rank += 1
        if rank == n_rows:
            break
    return rank


def ghw(code: LinearCode, s: int, cap: int = DEFAULT_ENUM_CAP) -> int:
    """s-th generalized Hamming weight: the minimum support size over all
    s-dimensional subcodes.

    A support set S carries an s-dimensional subcode exactly when the words
    vanishing outside S form a space of dimension at least s, which is
    k - rank(columns outside S).  Supports are scanned exhaustively by
    cardinality, so the result is certified rather than bounded.
    """
    if code.k == 0:
        raise ZeroCodeError("the zero code has no subcodes")
    if not isinstance(s, int) or not 1 <= s <= code.k:
        raise BadRankError(f"s must lie in [1, {code.k}], got {s}")
    n = code.n
    if 2 ** n > cap:
        raise TooLargeToEnumerateError(f"2^{n} supports exceed the cap {cap}")
    all_coords = range(n)
    for size in range(s, n + 1):
        for S in itertools.combinations(all_coords, size):
            inside = set(S)
            outside = [c for c in all_coords if c not in inside]
            if code.k - _rank_cols(code, outside) >= s:
                return size
    raise AssertionError("full support always carries the code itself")


# ---------------------------------------------------------------------------
# Recovery sets, error-detecting recovery sets, locality
# ---------------------------------------------------------------------------

def is_recovery_set(code: LinearCode, i: int, helpers) -> bool:
    """True when column i lies in the span of the helper columns.

    The empty set recovers i exactly when column i is zero.
    """
    if not isinstance(i, int) or not 0 <= i < code.n:
        raise IndexOutOfRangeError(f"coordinate {i!r} outside [0, {code.n})")
    R = _coords(code.n, helpers)
    if i in R:
        raise ValueError(f"target {i} must not be among the helpers")
    return _rank_cols(code, R) == _rank_cols(code, R + (i,))


def is_edr_set(code: LinearCode, i: int, helpers, t: int,
               cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True when the punctured code on helpers + {i} has distance > t + 1.

    Equivalent formulation used here: no nonzero codeword of the punctured
    code is supported on t + 1 or fewer of its coordinates, checked by rank
    over every small support.  This stays polynomial in the set size where
    codeword enumeration would blow up.
    """
    if not isinstance(i, int) or not 0 <= i < code.n:
        raise IndexOutOfRangeError(f"coordinate {i!r} outside [0, {code.n})")
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    R = _coords(code.n, helpers)
    if i in R:
        raise ValueError(f"target {i} must not be among the helpers")
    barred = tuple(sorted(R + (i,)))
    full = _rank_cols(code, barred)
    if full == 0:
        return True
    w = min(t + 1, len(barred))
    if math.comb(len(barred), w) > cap:
        raise TooLargeToEnumerateError(
            f"C({len(barred)},{w}) supports exceed the cap {cap}")
    for T in itertools.combinations(barred, w):
        dropped = set(T)
        kept = tuple(c for c in barred if c not in dropped)
        if _rank_cols(code, kept) < full:
            return False
    return True


@dataclass(frozen=True)
class CoordLocality:
    coord: int
    locality: int | None         # None when no t-edr set exists
    witness: tuple[int, ...] | None


@dataclass(frozen=True)
class BoundStatus:
    name: str
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs

    @property
    def slack(self) -> int:
        return self.lhs - self.rhs

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "holds": self.holds, "slack": self.slack,
                "equality": self.equality}


@dataclass
class LocalityReport:
    """Per-coordinate minimal error-detecting recovery sets and their maximum."""
    t: int
    per_coord: list[CoordLocality]
    mode: str                     # "exhaustive" or "greedy" (upper bounds only)
    bound_status: dict | None = None

    @property
    def r_t(self) -> int | None:
        vals = [c.locality for c in self.per_coord]
        if any(v is None for v in vals):
            return None
        return max(vals) if vals else None

    @property
    def not_t_lredc(self) -> tuple[int, ...]:
        """Coordinates admitting no t-edr set (empty when the code is t-LREDC)."""
        return tuple(c.coord for c in self.per_coord if c.locality is None)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "mode": self.mode,
            "per_coordinate": [
                {"coordinate": c.coord, "locality": c.locality,
                 "witness": list(c.witness) if c.witness is not None else None}
                for c in self.per_coord],
            "locality": self.r_t,
            "not_t_lredc": list(self.not_t_lredc),
        }


def _min_edr_for_coord(code, i, t, mode, cap):
    others = [j for j in range(code.n) if j != i]
    for size in range(0, code.n):
        if mode == "greedy":
            candidates = [tuple(others[:size])]
        else:
            candidates = itertools.combinations(others, size)
        for R in candidates:
            if is_edr_set(code, i, R, t, cap=cap):
                return size, tuple(R)
    return None, None


def t_locality(code: LinearCode, t: int, mode: str = "exhaustive",
               cap: int = DEFAULT_ENUM_CAP,
               max_exhaustive_n: int = DEFAULT_EXHAUSTIVE_N) -> LocalityReport:
    """Minimum t-edr set size per coordinate and the maximum over them.

    Exhaustive mode scans candidate sets by cardinality then lexicographically
    and keeps the first witness, so results are deterministic and minimal.
    Greedy mode tests only the lowest-index candidate per size and yields
    upper bounds, flagged through the report's mode field.
    """
    if mode not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" and code.n > max_exhaustive_n:
        raise TooLargeToEnumerateError(
            f"n = {code.n} exceeds the exhaustive-search limit {max_exhaustive_n}")
    per = []
    for i in range(code.n):
        size, witness = _min_edr_for_coord(code, i, t, mode, cap)
        if witness is not None:
            _assert_witness_consistency(code, i, witness, t, cap)
        per.append(CoordLocality(i, size, witness))
    return LocalityReport(t=t, per_coord=per, mode=mode)


def _assert_witness_consistency(code, i, R, t, cap):
    """Internal consistency checks every witness must satisfy; a failure here
    means a bug upstream, not bad input."""
    barred = tuple(sorted(R + (i,)))
    # rotating the target into the helper set preserves the property
    for j in R:
        rotated = tuple(c for c in barred if c != j)
        if not is_edr_set(code, j, rotated, t, cap=cap):
            raise AssertionError(
                f"witness {R} for coordinate {i} fails rotation at {j}")
    if _rank_cols(code, barred) > len(R) - t:
        raise AssertionError(
            f"witness {R} for coordinate {i} violates the dimension cap")


# ---------------------------------------------------------------------------
# Parameter bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    statuses: dict
    t_optimal: bool

    def to_dict(self) -> dict:
        return {"t_optimal": self.t_optimal,
                "statuses": {k: v.to_dict() for k, v in self.statuses.items()}}


def check_bounds(n: int, k: int, d: int, t: int, r_t: int,
                 dual_ghw: int | None = None) -> BoundsReport:
    """Evaluate the locality bounds on verified code parameters.

    Violations are reported, never raised: the bounds are theorems, so a
    violation is a finding that falsifies an upstream computation and must
    surface in reports and tests.
    """
    if r_t <= t:
        raise ValueError(f"r_t = {r_t} must exceed t = {t}")
    statuses = {}
    rhs = k + d + math.ceil(k / (r_t - t)) * (t + 1)
    singleton = BoundStatus(
        name="n+t+2 >= k+d+ceil(k/(r_t-t))*(t+1)", lhs=n + t + 2, rhs=rhs)
    statuses["locality_singleton"] = singleton
    if t == 0:
        statuses["classic_lrc_singleton"] = BoundStatus(
            name="n+2 >= k+d+ceil(k/r_0)", lhs=n + 2,
            rhs=k + d + math.ceil(k / r_t))
    if dual_ghw is not None:
        statuses["dual_weight_hierarchy"] = BoundStatus(
            name="r_t >= d_{t+1}(dual)-1", lhs=r_t, rhs=dual_ghw - 1)
    return BoundsReport(statuses=statuses, t_optimal=singleton.equality)
