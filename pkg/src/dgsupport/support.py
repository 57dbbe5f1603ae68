"""Support varieties of perfect DG modules by fiberwise evaluation.

A closed point a of the affine cone over GF(q^e) stands for the homogeneous
prime of polynomials vanishing at it; the distinguished origin stands for
the irrelevant maximal ideal and is carried as a flag, not a point.  A point
lies in the support exactly when the complex obtained by evaluating the
differential at the point has nonzero homology.

Evaluation at a nonzero point is base change to a graded field whose
invertible elements sit in degrees divisible by g = gcd of the generator
degrees, so the evaluated complex is g-periodic and its homology is computed
on the folded Z/g-graded complex.  Evaluation at the origin keeps the
honest Z-grading on the finite complex spanned by the module generators;
nonvanishing there is equivalent to H(M) != 0 for finite free M.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd

import numpy as np

from .dgmodules import FreeDGModule, cone, mult_morphism, unit_module
from .errors import BudgetError, InputError, PreconditionError, UnsupportedGradingError
from .fields import Field, FieldSpec, field_for
from .linalg import rank
from .polynomials import Polynomial

DEFAULT_POINT_BUDGET = 10**6


@dataclass(frozen=True)
class VarietySet:
    """A finite conical set of closed points with fiber-homology dimensions.

    ``points`` are tuples of encoded elements of GF(p^e), lexicographically
    sorted; ``point_dims[i]`` is the tuple of folded fiber homology
    dimensions at ``points[i]`` (one entry per residue class mod ``fold``).
    ``origin_dims`` lists (degree, dim) pairs of the nonzero homology of the
    fiber at the irrelevant maximal ideal.
    """

    field: FieldSpec
    fold: int
    points: tuple[tuple[int, ...], ...]
    point_dims: tuple[tuple[int, ...], ...]
    contains_origin: bool
    origin_dims: tuple[tuple[int, int], ...]

    def point_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.points)

    def is_empty(self) -> bool:
        return not self.points and not self.contains_origin

    def to_text(self) -> str:
        lines = [
            f"field p={self.field.p} e={self.field.e} q={self.field.q}",
            f"fold {self.fold}",
            f"origin {'present' if self.contains_origin else 'absent'}",
        ]
        if self.origin_dims:
            cells = " ".join(f"{n}:{d}" for n, d in self.origin_dims)
            lines.append(f"origin_dims {cells}")
        lines.append(f"points {len(self.points)}")
        for pt, dims in zip(self.points, self.point_dims):
            coord = ",".join(str(c) for c in pt)
            dd = ",".join(str(d) for d in dims)
            lines.append(f"({coord}) [{dd}]")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "field": {"p": self.field.p, "e": self.field.e},
            "fold": self.fold,
            "contains_origin": self.contains_origin,
            "origin_dims": [list(x) for x in self.origin_dims],
            "points": [list(p) for p in self.points],
            "point_dims": [list(d) for d in self.point_dims],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _enumeration_field(m: FreeDGModule, e: int) -> Field:
    base = m.ring.field
    if e < 1:
        raise InputError("extension degree must be >= 1")
    if base.e > 1 and e > 1:
        raise UnsupportedGradingError(
            "point enumeration over an extension of a non-prime base field "
            "is not supported; use a prime base field"
        )
    return field_for(FieldSpec(base.p, base.e * e))


def _fold_modulus(m: FreeDGModule) -> int:
    degs = m.ring.degrees
    if any(d <= 0 for d in degs):
        raise UnsupportedGradingError(
            f"fiber evaluation needs positive generator degrees, got {degs}"
        )
    g = 0
    for d in degs:
        g = gcd(g, d)
    return g


def _evaluated_differential(m: FreeDGModule, alpha: tuple[int, ...], field: Field) -> np.ndarray:
    n = m.n_gens
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            entry = m.differential[i][j]
            if not entry.is_zero():
                a[i, j] = entry.evaluate(alpha, field)
    return a


def fiber_homology(
    m: FreeDGModule, alpha: tuple[int, ...], e: int = 1
) -> tuple[int, ...]:
    """Folded homology dimensions of the fiber of M at a nonzero point.

    Returns one dimension per residue class 0..g-1 where g is the gcd of the
    ring's generator degrees.  Every homogeneous polynomial has degree
    divisible by g, so the evaluated differential automatically maps class c
    to class c+1; the folded complex is cyclic of length g.
    """
    if len(alpha) != m.ring.r:
        raise InputError(f"point has {len(alpha)} coordinates, expected {m.ring.r}")
    if all(c == 0 for c in alpha):
        raise PreconditionError(
            "the origin is not a point of the punctured cone; its fiber is the "
            "generator complex handled by the origin path of support_points"
        )
    field = _enumeration_field(m, e)
    g = _fold_modulus(m)
    a = _evaluated_differential(m, alpha, field)
    classes = [dg % g for dg in m.gen_degrees]
    idx = [[i for i, c in enumerate(classes) if c == cls] for cls in range(g)]
    ranks = []
    for cls in range(g):
        rows = idx[(cls + 1) % g]
        cols = idx[cls]
        block = a[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
        ranks.append(rank(block, field))
    return tuple(
        len(idx[cls]) - ranks[cls] - ranks[(cls - 1) % g] for cls in range(g)
    )


def origin_fiber_dims(m: FreeDGModule) -> tuple[tuple[int, int], ...]:
    """Nonzero homology of the fiber at the origin, as (degree, dim) pairs.

    The fiber at the irrelevant maximal ideal is the finite complex spanned
    by the generators with the constant terms of the differential; it is
    nonzero exactly when H(M) != 0.
    """
    field = m.ring.k
    zero = (0,) * m.ring.r
    n = m.n_gens
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            a[i, j] = m.differential[i][j].terms.get(zero, 0)
    degrees = sorted(set(m.gen_degrees))
    idx = {d: [i for i, dg in enumerate(m.gen_degrees) if dg == d] for d in degrees}
    ranks: dict[int, int] = {}
    for d in degrees:
        rows = idx.get(d + 1, [])
        cols = idx[d]
        block = a[np.ix_(rows, cols)] if rows and cols else np.zeros((len(rows), len(cols)), dtype=np.int64)
        ranks[d] = rank(block, field)
    out = []
    for d in degrees:
        dim = len(idx[d]) - ranks.get(d, 0) - ranks.get(d - 1, 0)
        if dim:
            out.append((d, dim))
    return tuple(out)


def _iter_points(q: int, r: int):
    return itertools.product(range(q), repeat=r)


def support_points(
    m: FreeDGModule,
    e: int = 1,
    budget: int = DEFAULT_POINT_BUDGET,
    workers: int = 1,
) -> VarietySet:
    """All points of GF(q^e)^r with nonzero fiber homology, plus origin flag.

    The fiber complexes at two points on one punctured line are conjugate,
    so dimensions are computed once per projective representative and shared
    along the line.  Results are independent of the worker count.
    """
    rep = m.validate()
    if not rep:
        raise PreconditionError(f"support of an invalid module: {rep.message()}")
    field = _enumeration_field(m, e)
    g = _fold_modulus(m)
    r = m.ring.r
    total = field.q**r
    if total > budget:
        raise BudgetError(
            f"enumerating {total} points of GF({field.q})^{r} exceeds budget {budget}"
        )
    def rep_of(alpha: tuple[int, ...]) -> tuple[int, ...]:
        first = next(c for c in alpha if c != 0)
        if first == 1:
            return alpha
        inv = field.inv(first)
        return tuple(field.mul(inv, c) for c in alpha)

    all_points = [a for a in _iter_points(field.q, r) if any(a)]
    reps = sorted({rep_of(a) for a in all_points})
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            dims_list = list(pool.map(lambda rp: fiber_homology(m, rp, e), reps))
    else:
        dims_list = [fiber_homology(m, rp, e) for rp in reps]
    cache = dict(zip(reps, dims_list))
    hits = [(a, cache[rep_of(a)]) for a in all_points if any(cache[rep_of(a)])]
    hits.sort(key=lambda t: t[0])
    odims = origin_fiber_dims(m)
    return VarietySet(
        field=field.spec,
        fold=g,
        points=tuple(a for a, _ in hits),
        point_dims=tuple(d for _, d in hits),
        contains_origin=bool(odims),
        origin_dims=odims,
    )


@dataclass(frozen=True)
class ContainmentVerdict:
    contained: bool
    witness: tuple[int, ...] | None
    e: int

    def __str__(self) -> str:
        if self.contained:
            return f"contained (checked at extension level e={self.e})"
        return f"not contained; witness point {self.witness} at e={self.e}"


def support_contains(
    m: FreeDGModule,
    n: FreeDGModule,
    e: int = 1,
    budget: int = DEFAULT_POINT_BUDGET,
    workers: int = 1,
) -> ContainmentVerdict:
    """Is supp(M) a subset of supp(N) at extension level e?

    The witness on failure is the lexicographically first offending point;
    the origin reports as the zero tuple.
    """
    if m.ring != n.ring:
        raise InputError("support comparison needs modules over one ring")
    sm = support_points(m, e, budget, workers)
    sn = support_points(n, e, budget, workers)
    if sm.contains_origin and not sn.contains_origin:
        return ContainmentVerdict(False, (0,) * m.ring.r, e)
    missing = sorted(sm.point_set() - sn.point_set())
    if missing:
        return ContainmentVerdict(False, missing[0], e)
    return ContainmentVerdict(True, None, e)


def check_ideal(gens: list[Polynomial]) -> None:
    for i, g in enumerate(gens):
        if not g.is_homogeneous():
            raise InputError(f"ideal generator {i} ({g}) is not homogeneous")


def realize(gens: list[Polynomial], ring) -> FreeDGModule:
    """Perfect DG module with support the vanishing locus of the ideal.

    Built as the iterated mapping cone on the generators in input order:
    start from the ring and cone off multiplication by each generator.
    """
    check_ideal(gens)
    k = unit_module(ring)
    for g in gens:
        k = cone(mult_morphism(g, k))
    return k


def vanishing_locus(
    gens: list[Polynomial],
    ring,
    e: int = 1,
    budget: int = DEFAULT_POINT_BUDGET,
) -> tuple[frozenset[tuple[int, ...]], bool]:
    """Common zeros of the generators by direct evaluation; the elementary oracle.

    Returns (nonzero points, origin membership).
    """
    check_ideal(gens)
    base = ring.field
    if base.e > 1 and e > 1:
        raise UnsupportedGradingError("locus enumeration over an extension needs a prime base field")
    field = field_for(FieldSpec(base.p, base.e * e))
    r = ring.r
    total = field.q**r
    if total > budget:
        raise BudgetError(f"enumerating {total} points exceeds budget {budget}")
    pts = []
    for alpha in _iter_points(field.q, r):
        if not any(alpha):
            continue
        if all(g.evaluate(alpha, field) == 0 for g in gens):
            pts.append(alpha)
    origin = all(g.constant_term() == 0 for g in gens)
    return frozenset(pts), origin
