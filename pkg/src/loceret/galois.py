"""Exact arithmetic in small finite fields GF(p^m).

Field elements are canonical integers in [0, q) with q = p^m.  For extension
fields the base-p digits of an encoding are the coefficients of the residue
polynomial (digit j = coefficient of x^j), so 0 encodes the additive identity
and 1 the multiplicative identity in every field.  Extension fields with at
most 2**16 elements precompute log/antilog tables for O(1) products; prime
fields use plain modular arithmetic.
"""

from __future__ import annotations

DEFAULT_MAX_ORDER = 1 << 20
TABLE_LIMIT = 1 << 16

NEG_INF = float("-inf")


class NotPrimeError(ValueError):
    """Field characteristic is not prime."""


class NotIrreducibleError(ValueError):
    """Supplied modulus polynomial factors over GF(p)."""


class FieldTooLargeError(ValueError):
    """p^m exceeds the configured order cap."""


class DivisionByZeroError(ZeroDivisionError):
    """Inverse or quotient of the zero element."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test, fine at desk scale."""
    if not isinstance(n, int):
        return False
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over GF(p) as coefficient tuples (lowest degree first), used for
# modulus validation and raw extension-field products.
# ---------------------------------------------------------------------------

def _ptrim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, b, p):
    """Remainder of a by b over GF(p); b need not be monic."""
    a = list(a)
    _ptrim(a)
    db = len(b) - 1
    lead_inv = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        f = (a[-1] * lead_inv) % p
        for j in range(db + 1):
            a[shift + j] = (a[shift + j] - f * b[j]) % p
        _ptrim(a)
    return a


def _digits(value: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(value % p)
        value //= p
    return out


def _undigits(digits, p: int) -> int:
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def is_irreducible(p: int, coeffs) -> bool:
    """Exhaustive divisor search: no monic factor of degree 1..deg/2."""
    coeffs = list(coeffs)
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] % p == 0:
        return False
    for d in range(1, m // 2 + 1):
        for low in range(p ** d):
            cand = _digits(low, p, d) + [1]
            if not _pmod(coeffs, cand, p):
                return False
    return True


def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over GF(p), by counting the
    non-leading coefficients upward as a base-p integer."""
    if m == 1:
        return (0, 1)
    for low in range(p ** m):
        cand = _digits(low, p, m) + [1]
        if is_irreducible(p, cand):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class Field:
    """Finite field GF(p^m) with canonical integer element encoding.

    Immutable after construction; every operation is a pure function of its
    inputs, so instances are safe to share between threads.
    """

    def __init__(self, p: int, m: int = 1, modulus=None,
                 max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise NotPrimeError(f"p = {p} is not prime")
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"extension degree must be a positive integer, got {m}")
        q = p ** m
        if q > max_order:
            raise FieldTooLargeError(f"p^m = {q} exceeds the cap {max_order}")
        self.p = p
        self.m = m
        self.q = q
        if m == 1:
            if modulus is not None:
                raise ValueError("modulus only applies to extension fields (m > 1)")
            self.modulus = None
        else:
            if modulus is None:
                modulus = find_irreducible(p, m)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise NotIrreducibleError(
                    f"modulus must be monic of degree {m}, got {list(modulus)}")
            if not is_irreducible(p, modulus):
                raise NotIrreducibleError(f"modulus {list(modulus)} is reducible over GF({p})")
            self.modulus = modulus
        self._mod_int = _undigits(self.modulus, 2) if (m > 1 and p == 2) else None
        self._exp = self._log = None
        if m > 1 and q <= TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        """Table-free product, used to build the tables and for large fields."""
        if self.m == 1:
            return (a * b) % self.p
        if self.p == 2:
            acc = 0
            mod = self._mod_int
            top = 1 << self.m
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= mod
            return acc
        da = _digits(a, self.p, self.m)
        db = _digits(b, self.p, self.m)
        prod = _pmul(da, db, self.p)
        return _undigits(_pmod(prod, list(self.modulus), self.p), self.p)

    def _raw_pow(self, a: int, e: int) -> int:
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self._raw_mul(acc, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return acc

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        factors = _prime_factors(n)
        for g in range(2, self.q):
            if all(self._raw_pow(g, n // f) != 1 for f in factors):
                return g
        raise AssertionError("multiplicative group has a generator")  # unreachable

    def _build_tables(self):
        n = self.q - 1
        g = self._find_generator()
        exp = [0] * n
        log = [0] * self.q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._raw_mul(x, g)
        self._exp = exp
        self._log = log

    # -- element validation --------------------------------------------------

    def _check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise ValueError(f"{a!r} is not a canonical element of {self!r}")
        return a

    def normalize(self, v: int) -> int:
        """Map a (possibly negative) integer onto its canonical encoding."""
        if not isinstance(v, int):
            raise ValueError(f"field elements are integers, got {v!r}")
        if self.m == 1:
            return v % self.p
        if 0 <= v < self.q:
            return v
        if -self.q < v < 0:
            return self.neg(-v)
        raise ValueError(f"{v} is outside the value range of {self!r}")

    # -- arithmetic -----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        p = self.p
        out, mult = 0, 1
        for _ in range(self.m):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        self._check(a)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        out, mult = 0, 1
        for _ in range(self.m):
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.m == 1:
            return (a * b) % self.p
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DivisionByZeroError(f"0 has no inverse in {self!r}")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]
        return self._raw_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """Square-and-multiply exponentiation; pow(a, 0) = 1."""
        self._check(a)
        if not isinstance(e, int):
            raise ValueError(f"exponent must be an integer, got {e!r}")
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    # -- iteration and evaluation ----------------------------------------------

    def elements(self) -> range:
        """All elements in canonical order."""
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    def poly_eval(self, coeffs, x: int) -> int:
        return poly_eval(self, coeffs, x)

    # -- identity -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"


class CountingField:
    """Wraps a Field, forwarding arithmetic while tallying operation counts.

    Useful for verifying the advertised costs of repair-plan construction and
    use.  Duck-type compatible with Field for the operations it forwards.
    """

    def __init__(self, field: Field):
        self.field = field
        self.p = field.p
        self.m = field.m
        self.q = field.q
        self.modulus = field.modulus
        self.reset()

    def reset(self):
        self.mul_count = 0
        self.inv_count = 0
        self.add_count = 0
        self.neg_count = 0
        self.pow_count = 0

    def counts(self) -> dict:
        return {"mul": self.mul_count, "inv": self.inv_count,
                "add": self.add_count, "neg": self.neg_count,
                "pow": self.pow_count}

    def add(self, a, b):
        self.add_count += 1
        return self.field.add(a, b)

    def sub(self, a, b):
        self.add_count += 1
        return self.field.sub(a, b)

    def neg(self, a):
        self.neg_count += 1
        return self.field.neg(a)

    def mul(self, a, b):
        self.mul_count += 1
        return self.field.mul(a, b)

    def inv(self, a):
        self.inv_count += 1
        return self.field.inv(a)

    def div(self, a, b):
        self.mul_count += 1
        self.inv_count += 1
        return self.field.div(a, b)

    def pow(self, a, e):
        self.pow_count += 1
        return self.field.pow(a, e)

    def normalize(self, v):
        return self.field.normalize(v)

    def elements(self):
        return self.field.elements()

    def nonzero_elements(self):
        return self.field.nonzero_elements()

    def poly_eval(self, coeffs, x):
        return poly_eval(self, coeffs, x)

    def __repr__(self):
        return f"Counting({self.field!r})"


# ---------------------------------------------------------------------------
# Polynomials over a field, as coefficient sequences (lowest degree first,
# no trailing zeros; the zero polynomial is the empty tuple with degree -inf).
# ---------------------------------------------------------------------------

def poly_trim(coeffs) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(coeffs):
    c = poly_trim(coeffs)
    return len(c) - 1 if c else NEG_INF


def poly_add(field, f, g) -> tuple[int, ...]:
    out = []
    for i in range(max(len(f), len(g))):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(field.add(a, b))
    return poly_trim(out)


def poly_scale(field, c, f) -> tuple[int, ...]:
    return poly_trim([field.mul(c, a) for a in f])


def poly_mul(field, f, g) -> tuple[int, ...]:
    f, g = poly_trim(f), poly_trim(g)
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = field.add(out[i + j], field.mul(a, b))
    return poly_trim(out)


def poly_eval(field, coeffs, x: int) -> int:
    """Horner evaluation of a coefficient sequence at x."""
    acc = 0
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc
