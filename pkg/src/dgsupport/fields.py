"""Exact arithmetic in prime fields GF(p) and small extensions GF(p^e).

Elements of GF(p^e) are encoded as integers in [0, p^e): the integer
a0 + a1*p + ... + a_{e-1}*p^{e-1} stands for the residue class
a0 + a1*t + ... + a_{e-1}*t^{e-1} of a fixed irreducible polynomial in t.
The irreducible polynomials are a fixed published (Conway) table, so the
encoding, and therefore every result downstream, is reproducible.  Integers
below p encode the prime subfield, which makes the embedding
GF(p) -> GF(p^e) the identity on codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError

# Conway polynomials, monic, coefficients listed constant-first and
# excluding the leading 1.  Primitivity (t generates the unit group) is
# asserted by the test suite, not assumed here.
IRREDUCIBLES: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A finite field GF(p^e) named by its prime and extension degree."""

    p: int
    e: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InputError(f"modulus {self.p} is not prime")
        if self.e < 1:
            raise InputError(f"extension degree must be >= 1, got {self.e}")
        if self.e > 1 and (self.p, self.e) not in IRREDUCIBLES:
            raise InputError(
                f"no irreducible polynomial tabulated for GF({self.p}^{self.e}); "
                f"supported extensions: {sorted(IRREDUCIBLES)}"
            )

    @property
    def q(self) -> int:
        return self.p**self.e

    def __str__(self) -> str:
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"


class Field:
    """Arithmetic engine for one FieldSpec.

    Scalar operations take and return encoded integers.  Array operations
    take numpy int64 arrays of encoded values and are fully vectorized:
    componentwise mod-p arithmetic for prime fields, table gathers for
    extensions (q <= 343, so the q x q tables are tiny).
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.q = spec.q
        if self.e > 1:
            self._build_tables()

    # -- extension-field internals ------------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.p
        return [(a // p**i) % p for i in range(self.e)]

    def _undigits(self, ds: list[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(ds))

    def _poly_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = IRREDUCIBLES[(p, e)]
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                # t^e = -(red polynomial), folded down term by term
                for i, r in enumerate(red):
                    prod[k - e + i] = (prod[k - e + i] - c * r) % p
        return self._undigits(prod[: e])

    def _build_tables(self) -> None:
        q = self.q
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            da = self._digits(a)
            for b in range(a, q):
                db = self._digits(b)
                s = self._undigits([(x + y) % self.p for x, y in zip(da, db)])
                add[a, b] = add[b, a] = s
                m = self._poly_mul(a, b)
                mul[a, b] = mul[b, a] = m
        self._add = add
        self._mul = mul
        self._neg = np.argmax(add == 0, axis=1).astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = np.argmax(mul[1:] == 1, axis=1)
        self._inv = inv

    # -- scalar ops -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return int(self._add[a, b])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        return int(self._mul[a, b])

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return int(self._neg[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.e == 1:
            return pow(a, -1, self.p)
        return int(self._inv[a])

    def power(self, a: int, n: int) -> int:
        if n < 0:
            return self.power(self.inv(a), -n)
        out = 1
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def embed(self, n: int) -> int:
        """Image of an ordinary integer in the prime subfield."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    # -- array ops (encoded int64 arrays) --------------------------------

    def arr_add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a + b) % self.p
        return self._add[a, b]

    def arr_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a - b) % self.p
        return self._add[a, self._neg[b]]

    def arr_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (a * b) % self.p
        return self._mul[a, b]

    def arr_neg(self, a: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return (-a) % self.p
        return self._neg[a]


@lru_cache(maxsize=None)
def field_for(spec: FieldSpec) -> Field:
    return Field(spec)
