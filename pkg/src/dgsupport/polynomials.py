"""Sparse multivariate polynomials over a finite field, with graded generators.

A ring context fixes the generator names and their integer degrees; a
polynomial is a map from exponent vectors to nonzero encoded scalars.
Exponent vectors are fixed-length tuples compared lexicographically, and
every ordering downstream derives from that, so output is reproducible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce

from .errors import InputError, ParseError, UnsupportedGradingError
from .fields import Field, FieldSpec, field_for

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*^]))")


@dataclass(frozen=True)
class PolynomialRing:
    """k[g_1, ..., g_r] with a declared integer degree per generator."""

    field: FieldSpec
    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.degrees):
            raise InputError("generator names and degrees differ in length")
        if len(self.names) == 0:
            raise InputError("need at least one generator")
        if len(set(self.names)) != len(self.names):
            raise InputError(f"duplicate generator names in {self.names}")

    @property
    def r(self) -> int:
        return len(self.names)

    @property
    def k(self) -> Field:
        return field_for(self.field)

    def monomial_degree(self, exponents: tuple[int, ...]) -> int:
        return sum(a * d for a, d in zip(exponents, self.degrees))

    def is_dg_admissible(self) -> bool:
        """Generators all of even degree, or characteristic 2."""
        return self.field.p == 2 or all(d % 2 == 0 for d in self.degrees)

    def __str__(self) -> str:
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"{self.field}[{gens}]"


def graded_ring(
    p: int,
    r: int,
    degrees: int | tuple[int, ...] = 2,
    names: tuple[str, ...] | None = None,
    prefix: str = "x",
    e: int = 1,
) -> PolynomialRing:
    if isinstance(degrees, int):
        degrees = (degrees,) * r
    if names is None:
        names = tuple(f"{prefix}{i + 1}" for i in range(r))
    return PolynomialRing(FieldSpec(p, e), tuple(names), tuple(degrees))


class Polynomial:
    """Immutable sparse polynomial over its ring's field."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolynomialRing, terms: dict[tuple[int, ...], int]):
        self.ring = ring
        self.terms = {ex: c for ex, c in terms.items() if c != 0}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring: PolynomialRing) -> "Polynomial":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: PolynomialRing, c: int) -> "Polynomial":
        c = ring.k.embed(c)
        return cls(ring, {(0,) * ring.r: c} if c else {})

    @classmethod
    def one(cls, ring: PolynomialRing) -> "Polynomial":
        return cls(ring, {(0,) * ring.r: 1})

    @classmethod
    def gen(cls, ring: PolynomialRing, i: int) -> "Polynomial":
        ex = tuple(1 if j == i else 0 for j in range(ring.r))
        return cls(ring, {ex: 1})

    @classmethod
    def monomial(cls, ring: PolynomialRing, exponents: tuple[int, ...], c: int = 1) -> "Polynomial":
        if len(exponents) != ring.r or any(a < 0 for a in exponents):
            raise InputError(f"bad exponent vector {exponents}")
        return cls(ring, {tuple(exponents): ring.k.embed(c)})

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._same_ring(other)
        k = self.ring.k
        out = dict(self.terms)
        for ex, c in other.terms.items():
            out[ex] = k.add(out.get(ex, 0), c)
        return Polynomial(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        k = self.ring.k
        return Polynomial(self.ring, {ex: k.neg(c) for ex, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._same_ring(other)
        k = self.ring.k
        out: dict[tuple[int, ...], int] = {}
        for ex1, c1 in self.terms.items():
            for ex2, c2 in other.terms.items():
                ex = tuple(a + b for a, b in zip(ex1, ex2))
                out[ex] = k.add(out.get(ex, 0), k.mul(c1, c2))
        return Polynomial(self.ring, out)

    def scale(self, c: int) -> "Polynomial":
        k = self.ring.k
        if c == 0:
            return Polynomial.zero(self.ring)
        return Polynomial(self.ring, {ex: k.mul(co, c) for ex, co in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def _same_ring(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise InputError("polynomials from different rings")

    # -- structure ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.ring.r, 0)

    def homogeneous_degree(self) -> int | None:
        """Degree if homogeneous, None for the zero polynomial.

        Raises InputError when terms of different degrees are present.
        """
        degs = {self.ring.monomial_degree(ex) for ex in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise InputError(f"not homogeneous: term degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        try:
            self.homogeneous_degree()
            return True
        except InputError:
            return False

    def evaluate(self, point: tuple[int, ...], field: Field | None = None) -> int:
        """Value at a point with coordinates encoded in ``field``.

        The default field is the ring's own.  Coefficients embed through the
        prime subfield, so evaluation over an extension of a prime base
        field needs no translation.
        """
        if len(point) != self.ring.r:
            raise InputError(
                f"point has {len(point)} coordinates, ring has {self.ring.r} generators"
            )
        k = field if field is not None else self.ring.k
        total = 0
        for ex, c in self.terms.items():
            v = c
            for coord, a in zip(point, ex):
                if a:
                    v = k.mul(v, k.power(coord, a))
            total = k.add(total, v)
        return total

    # -- text form --------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for ex in sorted(self.terms, reverse=True):
            c = self.terms[ex]
            factors = [
                self.ring.names[i] + (f"^{a}" if a > 1 else "")
                for i, a in enumerate(ex)
                if a > 0
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"<{self} over {self.ring}>"

    @classmethod
    def parse(cls, text: str, ring: PolynomialRing) -> "Polynomial":
        return _parse(text, ring)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r} in {text!r}")
            break
        pos = m.end()
        for kind in ("int", "name", "op"):
            if m.group(kind) is not None:
                tokens.append((kind, m.group(kind)))
                break
    return tokens


def _parse(text: str, ring: PolynomialRing) -> Polynomial:
    """Parse sums of terms like ``3*x1^2*x2 + x3 - 1``; whitespace-free syntax."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial string")
    name_index = {n: i for i, n in enumerate(ring.names)}
    k = ring.k
    result = Polynomial.zero(ring)
    i = 0
    n = len(tokens)
    while i < n:
        sign = 1
        while i < n and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= n:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = k.embed(sign)
        exps = [0] * ring.r
        expect_factor = True
        while i < n:
            kind, val = tokens[i]
            if kind == "op" and val in "+-":
                break
            if kind == "op" and val == "*":
                if expect_factor:
                    raise ParseError(f"misplaced '*' in {text!r}")
                expect_factor = True
                i += 1
                continue
            if not expect_factor:
                raise ParseError(f"missing '*' before {val!r} in {text!r}")
            if kind == "int":
                coeff = k.mul(coeff, k.embed(int(val)))
                i += 1
            elif kind == "name":
                if val not in name_index:
                    raise ParseError(f"unknown generator {val!r} (ring has {ring.names})")
                power = 1
                i += 1
                if i < n and tokens[i] == ("op", "^"):
                    i += 1
                    if i >= n or tokens[i][0] != "int":
                        raise ParseError(f"'^' needs an integer exponent in {text!r}")
                    power = int(tokens[i][1])
                    i += 1
                exps[name_index[val]] += power
            else:
                raise ParseError(f"unexpected {val!r} in {text!r}")
            expect_factor = False
        if expect_factor:
            raise ParseError(f"empty term in {text!r}")
        result = result + Polynomial(ring, {tuple(exps): coeff})
    return result


def parse_matrix(rows: list[list[str]], ring: PolynomialRing) -> tuple[tuple[Polynomial, ...], ...]:
    return tuple(tuple(Polynomial.parse(s, ring) for s in row) for row in rows)


def monomial_basis(d: int, ring: PolynomialRing) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree exactly d, lexicographically ordered."""
    degs = ring.degrees
    if all(g > 0 for g in degs):
        target = d
    elif all(g < 0 for g in degs):
        degs = tuple(-g for g in degs)
        target = -d
    else:
        raise UnsupportedGradingError(
            f"generator degrees {ring.degrees} are mixed-sign or zero; "
            "degreewise enumeration needs a definite grading"
        )
    if target < 0:
        return []
    out: list[tuple[int, ...]] = []

    def rec(i: int, remaining: int, prefix: tuple[int, ...]) -> None:
        if i == len(degs) - 1:
            if remaining % degs[i] == 0:
                out.append(prefix + (remaining // degs[i],))
            return
        for a in range(remaining // degs[i], -1, -1):
            rec(i + 1, remaining - a * degs[i], prefix + (a,))

    rec(0, target, ())
    # recursion above emits descending first coordinate; lex order wants that
    # for tuples compared left to right, largest first is reverse-lex; re-sort
    out.sort()
    return out


def product(polys: list[Polynomial], ring: PolynomialRing) -> Polynomial:
    return reduce(lambda a, b: a * b, polys, Polynomial.one(ring))
