"""Tensor-nilpotence search with explicit homotopy witnesses.

Given a morphism f out of the unit module whose fibers vanish on the
support of G, search for the least n with G (x) f^{(x)n} = 0 in the derived
category.  Vanishing of a morphism between finite free DG modules is
null-homotopy, which is the statement that the corresponding degree-0 cycle
in the Hom complex is a boundary; the boundary preimage is returned as the
witness, and re-checking d(witness) = cycle is a purely symbolic identity
any third party can replay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dgmodules import (
    DGMorphism,
    FreeDGModule,
    apply_differential,
    hom_adjoint,
    is_homologous_zero,
    is_unit_like,
    tensor_morphism,
    tensor_power,
)
from .errors import BudgetError, PreconditionError
from .fields import FieldSpec, field_for
from .linalg import solve
from .polynomials import Polynomial
from .support import VarietySet, support_points


@dataclass
class NilpotenceReport:
    """Outcome of a tensor-nilpotence search.

    ``n_found`` is the least exponent with vanishing, or None when the
    search exhausted ``n_max`` (exhaustion is inconclusive, never a
    counterexample: no effective bound on n is available).  The witness is
    a polynomial vector in the Hom complex recorded alongside the tested
    cycle so the boundary identity can be re-verified independently.
    """

    n_found: int | None
    n_max: int
    hypothesis_points: tuple[tuple[int, ...], ...]
    hypothesis_origin_checked: bool
    ranks: tuple[int, ...]
    witness_module: FreeDGModule | None
    witness: tuple[Polynomial, ...] | None
    cycle: tuple[Polynomial, ...] | None

    @property
    def exhausted(self) -> bool:
        return self.n_found is None

    def verify_witness(self) -> bool:
        if self.n_found is None:
            return False
        return apply_differential(self.witness_module, self.witness) == self.cycle


def _fiber_class_is_zero(f: DGMorphism, alpha: tuple[int, ...], e: int) -> bool:
    """Does the evaluated cycle f(1) die in the fiber homology at alpha?"""
    x = f.target
    base = x.ring.field
    field = field_for(FieldSpec(base.p, base.e * e))
    n = x.n_gens
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            entry = x.differential[i][j]
            if not entry.is_zero():
                a[i, j] = entry.evaluate(alpha, field)
    vec = np.array(
        [f.matrix[i][0].evaluate(alpha, field) for i in range(n)], dtype=np.int64
    )
    if not vec.any():
        return True
    return solve(a, vec, field) is not None


def fiberwise_vanishing(
    f: DGMorphism, variety: VarietySet
) -> tuple[bool, tuple[int, ...] | None]:
    """Check k(p) (x) f = 0 at every point of the variety (origin included).

    The origin is tested through the constant-term fiber; a nonzero class
    there or at any listed point is returned as the failing witness (the
    origin reports as the zero tuple).
    """
    if not is_unit_like(f.source):
        raise PreconditionError(
            "fiberwise check needs a morphism out of the unit module; "
            "apply hom_adjoint first"
        )
    rep = f.validate()
    if not rep:
        raise PreconditionError(f"invalid morphism: {rep.message()}")
    r = f.ring.r
    e = variety.field.e // f.ring.field.e
    if variety.contains_origin:
        zero = (0,) * r
        if not _fiber_class_is_zero(f, zero, 1):
            return False, zero
    for alpha in variety.points:
        if not _fiber_class_is_zero(f, alpha, e):
            return False, alpha
    return True, None


def nilpotence_search(
    f: DGMorphism,
    g_module: FreeDGModule,
    n_max: int = 5,
    e: int = 1,
    rank_abort: int = 4096,
    budget: int = 10**6,
    workers: int = 1,
    override_hypothesis: bool = False,
    progress=None,
) -> NilpotenceReport:
    """Find the least n <= n_max with G (x) f^{(x)n} = 0, certified.

    The fiberwise-vanishing hypothesis is checked on the support of G and
    the search refuses to run when it fails (pass ``override_hypothesis``
    to probe anyway).  Each step tests whether the adjoint cycle of
    G (x) f^{(x)n} bounds in the Hom complex; the first witness is returned.
    """
    if not is_unit_like(f.source):
        raise PreconditionError(
            "nilpotence search needs a morphism out of the unit module; "
            "apply hom_adjoint first"
        )
    supp = support_points(g_module, e, budget, workers)
    checked_points = supp.points
    if not override_hypothesis:
        ok, witness = fiberwise_vanishing(f, supp)
        if not ok:
            raise PreconditionError(
                f"fiberwise-vanishing hypothesis fails at point {witness}; "
                "the search requires k(p) (x) f = 0 on the support of G"
            )
    identity = DGMorphism(
        g_module,
        g_module,
        tuple(
            tuple(
                Polynomial.one(f.ring) if i == j else Polynomial.zero(f.ring)
                for j in range(g_module.n_gens)
            )
            for i in range(g_module.n_gens)
        ),
    )
    ranks: list[int] = []
    for n in range(1, n_max + 1):
        fn = tensor_power(f, n)
        total_rank = g_module.n_gens * fn.target.n_gens
        ranks.append(total_rank)
        if progress is not None:
            progress(n, total_rank)
        if total_rank > rank_abort:
            raise BudgetError(
                f"rank of G (x) X^(x){n} is {total_rank} > abort threshold {rank_abort}"
            )
        gfn = tensor_morphism(identity, fn)
        # re-base the source G (x) unit to G itself: same generators/degrees
        rebased = DGMorphism(g_module, gfn.target, gfn.matrix)
        adj = hom_adjoint(rebased)
        hom = adj.target
        cycle = tuple(adj.matrix[i][0] for i in range(hom.n_gens))
        bounds, witness = is_homologous_zero(hom, cycle, 0)
        if bounds:
            return NilpotenceReport(
                n_found=n,
                n_max=n_max,
                hypothesis_points=checked_points,
                hypothesis_origin_checked=supp.contains_origin,
                ranks=tuple(ranks),
                witness_module=hom,
                witness=witness,
                cycle=cycle,
            )
    return NilpotenceReport(
        n_found=None,
        n_max=n_max,
        hypothesis_points=checked_points,
        hypothesis_origin_checked=supp.contains_origin,
        ranks=tuple(ranks),
        witness_module=None,
        witness=None,
        cycle=None,
    )
