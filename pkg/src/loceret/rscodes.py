"""Constructive evaluation codes: Reed-Solomon and piecewise-RS codes built
on the plane curve y = p(x).

An RS code evaluates the polynomials of degree below k at a fixed point set.
The piecewise construction groups the field along the fibres of the map
a -> p(a): only full fibres (all deg(p) preimages present) are kept, and the
evaluated function space is spanned by the monomials x^i y^j with j bounded
per i.  Restricted to any one fibre, y is constant, so every codeword looks
like a short RS codeword there; that is what makes cheap local repair with
error detection possible.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import codeops
from .galois import poly_eval


class DuplicatePointsError(ValueError):
    """Evaluation points must be pairwise distinct."""


class BadDimensionError(ValueError):
    """Dimension outside [1, number of points]."""


class NoFullFibresError(ValueError):
    """No value of p(x) has deg(p) distinct preimages."""


class DegreeOverflowError(ValueError):
    """Evaluated functions reach degree n or more, voiding the distance bound."""


class BadLVectorError(ValueError):
    """Exponent-bound vector has the wrong length or negative entries."""


class BadMessageLengthError(ValueError):
    """Message length differs from the code dimension."""


class DuplicatePositionsError(ValueError):
    """Interpolation positions must be distinct."""


class WrongCountError(ValueError):
    """Interpolation needs exactly k positions."""


@dataclass(frozen=True)
class RsSpec:
    """A Reed-Solomon code: evaluations of 1, x, ..., x^(k-1) at the points."""
    field: object
    points: tuple[int, ...]
    k: int
    eval_rows: tuple[tuple[int, ...], ...]
    code: codeops.LinearCode

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class LrcRsSpec:
    """A piecewise-RS code on the curve y = p(x), kept fibre by fibre.

    points concatenates the full fibres, fibres sorted by their y value and
    members sorted by x, so coordinate c belongs to fibre c // (r + 1).
    """
    field: object
    p_poly: tuple[int, ...]
    l: tuple[int, ...]
    r: int
    fibres: tuple[tuple[int, tuple[int, ...]], ...]   # (beta, members)
    points: tuple[int, ...]
    n: int
    k: int
    delta: int
    basis: tuple[tuple[int, int], ...]                # (i, j) exponent pairs
    eval_rows: tuple[tuple[int, ...], ...]
    code: codeops.LinearCode

    @property
    def u(self) -> int:
        return len(self.fibres)

    @property
    def goppa_lower_bound(self) -> int:
        return self.n - self.delta

    def fibre_coords(self, coord: int) -> tuple[int, ...]:
        """Coordinates sharing the fibre of the given coordinate."""
        if not 0 <= coord < self.n:
            raise codeops.IndexOutOfRangeError(
                f"coordinate {coord} outside [0, {self.n})")
        block = coord // (self.r + 1)
        start = block * (self.r + 1)
        return tuple(range(start, start + self.r + 1))


@dataclass(frozen=True)
class Codeword:
    """A length-n symbol vector aligned with a spec's point order; erased
    positions are tracked by index and carry no symbol value."""
    symbols: tuple[int, ...]
    erased: frozenset[int] = frozenset()


def rs_make(field, points, k: int) -> RsSpec:
    """Build RS(points, k): generator rows are the monomials up to x^(k-1)."""
    pts = tuple(field._check(x) for x in points)
    if len(set(pts)) != len(pts):
        raise DuplicatePointsError("evaluation points must be distinct")
    if not isinstance(k, int) or not 1 <= k <= len(pts):
        raise BadDimensionError(f"k must lie in [1, {len(pts)}], got {k}")
    rows = []
    current = [1] * len(pts)
    for _ in range(k):
        rows.append(tuple(current))
        current = [field.mul(c, a) for c, a in zip(current, pts)]
    code = codeops.code_from_rows(field, rows)
    if code.k != k:
        raise AssertionError("distinct points must give independent monomials")
    return RsSpec(field=field, points=pts, k=k,
                  eval_rows=tuple(rows), code=code)


def lrcrs_make(field, p_poly, l) -> LrcRsSpec:
    """Build the piecewise-RS code for the curve y = p(x) and exponent bounds l.

    deg(p) = r + 1 fixes the fibre size; l = (l_0, ..., l_{r-2}) bounds the
    y-exponent attached to each x^i.  The code keeps only full fibres.
    """
    p_coeffs = tuple(field._check(c) for c in p_poly)
    while p_coeffs and p_coeffs[-1] == 0:
        p_coeffs = p_coeffs[:-1]
    deg = len(p_coeffs) - 1
    if deg < 2:
        raise ValueError(f"p(x) must have degree at least 2, got degree {deg}")
    r = deg - 1
    l = tuple(l)
    if len(l) != r - 1 or any((not isinstance(v, int)) or v < 0 for v in l):
        raise BadLVectorError(
            f"need {r - 1} nonnegative exponent bounds for degree {deg}, got {list(l)}")

    by_beta: dict[int, list[int]] = {}
    for a in field.elements():
        by_beta.setdefault(poly_eval(field, p_coeffs, a), []).append(a)
    fibres = tuple(sorted(
        (beta, tuple(sorted(members)))
        for beta, members in by_beta.items() if len(members) == r + 1))
    if not fibres:
        raise NoFullFibresError(
            f"no value of p(x) has {r + 1} distinct preimages in {field!r}")

    points = tuple(a for _, members in fibres for a in members)
    n = len(points)
    k = sum(v + 1 for v in l)
    delta = max(((r + 1) * l[i] + i for i in range(r - 1)), default=0)
    if delta >= n:
        raise DegreeOverflowError(
            f"max evaluated degree {delta} must stay below n = {n}")

    basis = tuple((i, j) for i in range(r - 1) for j in range(l[i] + 1))
    betas = tuple(beta for beta, members in fibres for _ in members)
    rows = []
    for i, j in basis:
        row = tuple(field.mul(field.pow(a, i), field.pow(b, j))
                    for a, b in zip(points, betas))
        rows.append(row)
    code = codeops.code_from_rows(field, rows, n)
    if code.k != k:
        raise AssertionError("evaluation map must be injective on the basis")
    return LrcRsSpec(field=field, p_poly=p_coeffs, l=l, r=r, fibres=fibres,
                     points=points, n=n, k=k, delta=delta, basis=basis,
                     eval_rows=tuple(rows), code=code)


def suggest_p_poly(field, r: int) -> tuple[int, ...]:
    """The monomial x^(r+1), which has (q-1)/(r+1) full fibres whenever
    r + 1 divides q - 1."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    if (field.q - 1) % (r + 1) != 0:
        raise ValueError(
            f"{r + 1} does not divide q - 1 = {field.q - 1}; "
            f"x^{r + 1} has no full fibres over {field!r}")
    return tuple([0] * (r + 1) + [1])


def encode(spec, message) -> Codeword:
    """Evaluate the message's basis combination at every point of the spec."""
    field = spec.field
    if len(message) != spec.k:
        raise BadMessageLengthError(
            f"message must have {spec.k} symbols, got {len(message)}")
    msg = [field._check(x) for x in message]
    n = len(spec.points)
    out = [0] * n
    for coeff, row in zip(msg, spec.eval_rows):
        if coeff == 0:
            continue
        out = [field.add(o, field.mul(coeff, v)) for o, v in zip(out, row)]
    return Codeword(symbols=tuple(out))


def interpolate(spec: RsSpec, positions, values) -> list[int]:
    """Recover the message through the unique degree < k polynomial passing
    through the k given (point, value) pairs (Lagrange, in coefficient form)."""
    field = spec.field
    positions = list(positions)
    if len(positions) != spec.k:
        raise WrongCountError(f"need exactly {spec.k} positions, got {len(positions)}")
    if len(set(positions)) != len(positions):
        raise DuplicatePositionsError("interpolation positions must be distinct")
    for pos in positions:
        if not isinstance(pos, int) or not 0 <= pos < len(spec.points):
            raise codeops.IndexOutOfRangeError(
                f"position {pos!r} outside [0, {len(spec.points)})")
    values = [field._check(v) for v in values]
    if len(values) != len(positions):
        raise WrongCountError("one value per position required")

    xs = [spec.points[pos] for pos in positions]
    coeffs = [0] * spec.k
    for idx, (xi, yi) in enumerate(zip(xs, values)):
        # basis polynomial with value 1 at xi and 0 at the other nodes
        num = [1]
        denom = 1
        for jdx, xj in enumerate(xs):
            if jdx == idx:
                continue
            new = [0] * (len(num) + 1)
            for deg, c in enumerate(num):
                new[deg] = field.sub(new[deg], field.mul(c, xj))
                new[deg + 1] = field.add(new[deg + 1], c)
            num = new
            denom = field.mul(denom, field.sub(xi, xj))
        scale = field.mul(yi, field.inv(denom))
        for deg, c in enumerate(num):
            coeffs[deg] = field.add(coeffs[deg], field.mul(scale, c))
    return coeffs


# ---------------------------------------------------------------------------
# Codeword files: whitespace-separated canonical integers, "?" per erasure,
# one codeword per line.
# ---------------------------------------------------------------------------

def parse_codeword_line(field, line: str) -> Codeword:
    symbols = []
    erased = set()
    for idx, tok in enumerate(line.split()):
        if tok == "?":
            symbols.append(0)
            erased.add(idx)
        else:
            try:
                symbols.append(field.normalize(int(tok, 10)))
            except ValueError as exc:
                raise ValueError(f"token {idx}: {exc}") from None
    return Codeword(symbols=tuple(symbols), erased=frozenset(erased))


def format_codeword(word: Codeword) -> str:
    return " ".join("?" if idx in word.erased else str(sym)
                    for idx, sym in enumerate(word.symbols))
