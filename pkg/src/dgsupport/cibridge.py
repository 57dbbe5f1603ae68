"""Artinian complete intersections and the reduction to graded polynomial rings.

The chain of constructions: an artinian monomial complete intersection
R = k[z_1..z_r]/(z_1^{e_1}..z_r^{e_r}); its Koszul complex K (an exterior
algebra over R on classes y_i of degree -1 with d(y_i) = z_i); the functor
t(M) = K (x)_R M; degree-(-1) cycles w_j = sum_{h<=i} c_{hi,j} z_h y_i
built from the structure constants of the presentation f_j = sum c z_h z_i,
whose left multiplications make t(M) a module over an exterior algebra;
and a twisted-tensor functor to free DG modules over S = k[x_1..x_r] with
deg x_i = 2, whose support is the variety of the input complex.

An independent oracle computes Ext_R(k, -) through a truncated minimal free
resolution of k with pure scalar linear algebra, and degree-2 chain
endomorphisms lifted from the presentation give the action of the central
polynomial subalgebra k[th_1..th_r] on Ext, hence truncated annihilators.

Everything here is exact arithmetic over GF(p).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

import numpy as np

from .dgmodules import FreeDGModule, homology_dims as dg_homology_dims
from .errors import InputError, InternalCheckError, PreconditionError
from .fields import Field, FieldSpec, field_for
from .linalg import (
    matmul,
    nullspace,
    quotient_representatives,
    coords_in_quotient,
    rank,
    rank_in_quotient,
    vstack,
)
from .polynomials import Polynomial, PolynomialRing, graded_ring
from .support import VarietySet, support_points

DEFAULT_EXT_BOUND = 12


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------


class CIPresentation:
    """R = k[z_1..z_r]/(z_1^{e_1},..,z_r^{e_r}) with a quadric presentation.

    The monomial k-basis is the box of exponents below the e_i, ordered
    lexicographically.  The structure constants c_{hi,j} (h <= i, all
    1-based in text form, 0-based here) present the relations as
    f_j = sum c_{hi,j} z_h z_i; the default choice is c_{jj,j} = z_j^{e_j-2}
    and zero otherwise, which presents f_j = z_j^{e_j}.  A custom table is
    accepted when each presented f_j still reduces to zero in R.
    """

    def __init__(
        self,
        p: int,
        exponents: tuple[int, ...],
        constants: dict[tuple[int, int, int], Polynomial] | None = None,
    ):
        self.fieldspec = FieldSpec(p)
        self.p = p
        self.exponents = tuple(int(e) for e in exponents)
        self.r = len(self.exponents)
        if self.r < 1:
            raise InputError("need at least one variable")
        for e in self.exponents:
            if e < 2:
                raise InputError(
                    f"exponent {e} < 2: the relation would not lie in the "
                    "square of the maximal ideal"
                )
        self.zring = PolynomialRing(
            self.fieldspec, tuple(f"z{i+1}" for i in range(self.r)), (0,) * self.r
        )
        self.basis: list[tuple[int, ...]] = sorted(
            itertools.product(*(range(e) for e in self.exponents))
        )
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.k: Field = field_for(self.fieldspec)
        self._reg_stack = self._build_regular_representation()
        self.constants = self._normalize_constants(constants)
        self._verify()

    # -- construction helpers -------------------------------------------

    def _build_regular_representation(self) -> np.ndarray:
        """reg[a][:, b] = basis vector of (basis a) * (basis b), stacked."""
        d = self.dim
        reg = np.zeros((d, d, d), dtype=np.int64)
        for a, ea in enumerate(self.basis):
            for b, eb in enumerate(self.basis):
                prod = tuple(x + y for x, y in zip(ea, eb))
                if all(v < e for v, e in zip(prod, self.exponents)):
                    reg[a, self.index[prod], b] = 1
        return reg

    def _default_constant(self, h: int, i: int, j: int) -> Polynomial:
        if h == i == j:
            ex = tuple(self.exponents[j] - 2 if t == j else 0 for t in range(self.r))
            return Polynomial.monomial(self.zring, ex)
        return Polynomial.zero(self.zring)

    def _normalize_constants(self, constants) -> dict[tuple[int, int, int], Polynomial]:
        table = {
            (h, i, j): self._default_constant(h, i, j)
            for h in range(self.r)
            for i in range(h, self.r)
            for j in range(self.r)
        }
        if constants:
            for (h, i, j), poly in constants.items():
                if not (0 <= h <= i < self.r and 0 <= j < self.r):
                    raise InputError(f"constant index ({h},{i},{j}) out of range (need h <= i)")
                if poly.ring != self.zring:
                    raise InputError("structure constants must live in the z-ring")
                table[(h, i, j)] = poly
        return table

    def presented_relation(self, j: int) -> Polynomial:
        """f_j = sum_{h<=i} c_{hi,j} z_h z_i as a polynomial."""
        acc = Polynomial.zero(self.zring)
        for h in range(self.r):
            for i in range(h, self.r):
                c = self.constants[(h, i, j)]
                if not c.is_zero():
                    acc = acc + c * Polynomial.gen(self.zring, h) * Polynomial.gen(self.zring, i)
        return acc

    def cbar(self, h: int, i: int, j: int) -> int:
        """Residue of c_{hi,j} modulo the maximal ideal."""
        return self.constants[(h, i, j)].constant_term()

    def basis_product(self, a: int, b: int) -> int | None:
        """Index of (basis a)*(basis b), or None when the product is zero."""
        prod = tuple(x + y for x, y in zip(self.basis[a], self.basis[b]))
        if all(v < e for v, e in zip(prod, self.exponents)):
            return self.index[prod]
        return None

    def _verify(self) -> None:
        # commutativity on all basis pairs; associativity on
        # (generator, basis, basis) triples, which generate all products
        d = self.dim
        mi = self.basis_product
        for a in range(d):
            for b in range(a + 1, d):
                if mi(a, b) != mi(b, a):
                    raise InputError("multiplication table fails commutativity")
        gen_indices = [
            self.index[tuple(1 if t == g else 0 for t in range(self.r))]
            for g in range(self.r)
        ]
        for g in gen_indices:
            for a in range(d):
                ga = mi(g, a)
                for b in range(d):
                    left = None if ga is None else mi(ga, b)
                    ab = mi(a, b)
                    right = None if ab is None else mi(g, ab)
                    if left != right:
                        raise InputError("multiplication table fails associativity")
        for j in range(self.r):
            if self.reduce(self.presented_relation(j)).any():
                raise InputError(
                    f"structure constants inconsistent: presented relation f_{j+1} "
                    "does not vanish in R"
                )

    # -- element and action arithmetic ------------------------------------

    def reduce(self, poly: Polynomial) -> np.ndarray:
        """Image of a polynomial in R as a coefficient vector over the basis."""
        if poly.ring != self.zring:
            raise InputError("polynomial not over the z-ring")
        v = np.zeros(self.dim, dtype=np.int64)
        for ex, c in poly.terms.items():
            if all(a < e for a, e in zip(ex, self.exponents)):
                v[self.index[ex]] = self.k.add(int(v[self.index[ex]]), c)
        return v

    def element_matrix(self, vec: np.ndarray) -> np.ndarray:
        """Multiplication-by-element matrix in the regular representation."""
        return np.tensordot(vec, self._reg_stack, axes=(0, 0)) % self.p

    def gen_matrix(self, i: int) -> np.ndarray:
        return self.element_matrix(self.reduce(Polynomial.gen(self.zring, i)))

    def radical_filtration_length(self) -> int:
        """Smallest n with rad^n = 0; finite because R is artinian."""
        radgens = [self.gen_matrix(i) for i in range(self.r)]
        cur = np.eye(self.dim, dtype=np.int64)
        spans = [cur]
        n = 0
        while True:
            imgs = [matmul(g, spans[-1], self.k) for g in radgens]
            stacked = vstack([m.T for m in imgs], self.dim)
            if rank(stacked, self.k) == 0:
                return n + 1
            basis = quotient_representatives(stacked, np.zeros((0, self.dim), dtype=np.int64), self.k)
            spans.append(basis.T)
            n += 1
            if n > self.dim + 1:
                raise InternalCheckError("radical filtration did not terminate")

    def __repr__(self) -> str:
        es = ",".join(str(e) for e in self.exponents)
        return f"<CI GF({self.p})[z]/(z^({es})) dim {self.dim}>"


def build_ci(
    p: int,
    exponents,
    constants: dict[tuple[int, int, int], str] | None = None,
) -> CIPresentation:
    """Build and verify a presentation; constants given as polynomial strings."""
    pre = CIPresentation(p, tuple(exponents))
    if constants:
        parsed = {
            key: Polynomial.parse(text, pre.zring) for key, text in constants.items()
        }
        pre = CIPresentation(p, tuple(exponents), parsed)
    return pre


# ---------------------------------------------------------------------------
# complexes over R
# ---------------------------------------------------------------------------


class FiniteComplexOverR:
    """Bounded complex of finite-dimensional k-spaces with commuting z-actions.

    ``diff[n]`` maps degree n to degree n+1; ``z_ops[i][n]`` is the action of
    z_i on the degree-n piece.  Missing matrices are zero.
    """

    def __init__(self, R: CIPresentation, dims: dict[int, int], diff, z_ops):
        self.R = R
        self.dims = {int(n): int(d) for n, d in dims.items() if d}
        self.diff = {int(n): np.array(m, dtype=np.int64) % R.p for n, m in diff.items()}
        self.z_ops = {
            (int(i), int(n)): np.array(m, dtype=np.int64) % R.p
            for (i, n), m in z_ops.items()
        }

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def min_degree(self) -> int:
        return min(self.dims) if self.dims else 0

    def max_degree(self) -> int:
        return max(self.dims) if self.dims else 0

    def d(self, n: int) -> np.ndarray:
        m = self.diff.get(n)
        if m is None:
            return np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)
        return m

    def z(self, i: int, n: int) -> np.ndarray:
        m = self.z_ops.get((i, n))
        if m is None:
            return np.zeros((self.dim(n), self.dim(n)), dtype=np.int64)
        return m

    def act(self, poly: Polynomial, n: int) -> np.ndarray:
        """Action of a polynomial in the z's on the degree-n piece."""
        k = self.R.k
        size = self.dim(n)
        out = np.zeros((size, size), dtype=np.int64)
        for ex, c in poly.terms.items():
            m = np.eye(size, dtype=np.int64) * c % self.R.p
            for i, a in enumerate(ex):
                for _ in range(a):
                    m = matmul(self.z(i, n), m, k)
            out = k.arr_add(out, m)
        return out

    def validate(self) -> list[str]:
        problems = []
        k = self.R.k
        for n in self.degrees():
            dn = self.d(n)
            if dn.shape != (self.dim(n + 1), self.dim(n)):
                problems.append(f"differential at degree {n} has shape {dn.shape}")
                continue
            if self.dim(n + 2) and matmul(self.d(n + 1), dn, k).any():
                problems.append(f"d^2 != 0 out of degree {n}")
            for i in range(self.R.r):
                zi = self.z(i, n)
                if zi.shape != (self.dim(n), self.dim(n)):
                    problems.append(f"z{i+1} action at degree {n} has shape {zi.shape}")
                    continue
                ei = self.R.exponents[i]
                power = np.eye(self.dim(n), dtype=np.int64)
                for _ in range(ei):
                    power = matmul(zi, power, k)
                if power.any():
                    problems.append(f"z{i+1}^{ei} does not act as zero at degree {n}")
                for j in range(i + 1, self.R.r):
                    zj = self.z(j, n)
                    if not np.array_equal(matmul(zi, zj, k), matmul(zj, zi, k)):
                        problems.append(f"z{i+1} and z{j+1} do not commute at degree {n}")
                if self.dim(n + 1) and not np.array_equal(
                    matmul(dn, zi, k), matmul(self.z(i, n + 1), dn, k)
                ):
                    problems.append(f"z{i+1} does not commute with d at degree {n}")
            for j in range(self.R.r):
                rel = self.R.presented_relation(j)
                if self.act(rel, n).any():
                    problems.append(f"presented relation f_{j+1} acts nonzero at degree {n}")
        return problems

    def homology_dims(self, lo: int, hi: int) -> dict[int, int]:
        k = self.R.k
        ranks = {n: rank(self.d(n), k) for n in range(lo - 1, hi + 1)}
        return {n: self.dim(n) - ranks[n] - ranks[n - 1] for n in range(lo, hi + 1)}

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in self.dims.items())


def trivial_module(R: CIPresentation) -> FiniteComplexOverR:
    """k with every z_i acting as zero, concentrated in degree 0."""
    return FiniteComplexOverR(R, {0: 1}, {}, {})


def free_module(R: CIPresentation, copies: int = 1) -> FiniteComplexOverR:
    """R^copies in degree 0 with the regular representation."""
    d = R.dim
    z_ops = {}
    for i in range(R.r):
        blk = np.kron(np.eye(copies, dtype=np.int64), R.gen_matrix(i))
        if blk.any():
            z_ops[(i, 0)] = blk
    return FiniteComplexOverR(R, {0: copies * d}, {}, z_ops)


def shift_complex(M: FiniteComplexOverR, s: int) -> FiniteComplexOverR:
    """Same convention as for DG modules: shifted^n = M^{n+s}."""
    dims = {n - s: d for n, d in M.dims.items()}
    sign = 1 if s % 2 == 0 else M.R.p - 1
    diff = {n - s: (m * sign) % M.R.p for n, m in M.diff.items()}
    z_ops = {(i, n - s): m for (i, n), m in M.z_ops.items()}
    return FiniteComplexOverR(M.R, dims, diff, z_ops)


def sum_complex(M: FiniteComplexOverR, N: FiniteComplexOverR) -> FiniteComplexOverR:
    if M.R is not N.R:
        raise InputError("direct sum over different rings")
    dims = {}
    for n in set(M.dims) | set(N.dims):
        dims[n] = M.dim(n) + N.dim(n)
    diff = {}
    z_ops = {}
    for n in dims:
        if M.dim(n + 1) + N.dim(n + 1):
            top = np.zeros((M.dim(n + 1) + N.dim(n + 1), dims[n]), dtype=np.int64)
            top[: M.dim(n + 1), : M.dim(n)] = M.d(n)
            top[M.dim(n + 1) :, M.dim(n) :] = N.d(n)
            if top.any():
                diff[n] = top
        for i in range(M.R.r):
            blk = np.zeros((dims[n], dims[n]), dtype=np.int64)
            blk[: M.dim(n), : M.dim(n)] = M.z(i, n)
            blk[M.dim(n) :, M.dim(n) :] = N.z(i, n)
            if blk.any():
                z_ops[(i, n)] = blk
    return FiniteComplexOverR(M.R, dims, diff, z_ops)


def monomial_quotient(R: CIPresentation, mono_gens: list[tuple[int, ...]]) -> FiniteComplexOverR:
    """R / (monomial ideal) as a module in degree 0.

    ``mono_gens`` lists exponent vectors of the ideal generators; the basis
    is the set of box monomials divisible by none of them.
    """
    keep = [
        b
        for b in R.basis
        if not any(all(x >= y for x, y in zip(b, g)) for g in mono_gens)
    ]
    index = {b: i for i, b in enumerate(keep)}
    dims = {0: len(keep)}
    z_ops = {}
    for i in range(R.r):
        m = np.zeros((len(keep), len(keep)), dtype=np.int64)
        for c, b in enumerate(keep):
            prod = tuple(x + (1 if t == i else 0) for t, x in enumerate(b))
            if prod in index:
                m[index[prod], c] = 1
        if m.any():
            z_ops[(i, 0)] = m
    return FiniteComplexOverR(R, dims, {}, z_ops)


def syzygy_module(R: CIPresentation) -> FiniteComplexOverR:
    """The maximal ideal of R as a module in degree 0."""
    keep = [b for b in R.basis if any(b)]
    index = {b: i for i, b in enumerate(keep)}
    dims = {0: len(keep)}
    z_ops = {}
    for i in range(R.r):
        m = np.zeros((len(keep), len(keep)), dtype=np.int64)
        for c, b in enumerate(keep):
            prod = tuple(x + (1 if t == i else 0) for t, x in enumerate(b))
            if all(v < e for v, e in zip(prod, R.exponents)):
                m[index[prod], c] = 1
        if m.any():
            z_ops[(i, 0)] = m
    return FiniteComplexOverR(R, dims, {}, z_ops)


def two_term_complex(
    R: CIPresentation, entries: list[list[Polynomial]], lo_degree: int = -1
) -> FiniteComplexOverR:
    """Complex R^cols -> R^rows of free modules in degrees lo, lo+1.

    ``entries[s][t]`` is the (row s, column t) matrix entry in the z-ring;
    d^2 = 0 holds for free since there are only two terms.
    """
    rows = len(entries)
    cols = len(entries[0]) if rows else 0
    d = R.dim
    dims = {lo_degree: cols * d, lo_degree + 1: rows * d}
    dmat = np.zeros((rows * d, cols * d), dtype=np.int64)
    for s in range(rows):
        for t in range(cols):
            dmat[s * d : (s + 1) * d, t * d : (t + 1) * d] = R.element_matrix(
                R.reduce(entries[s][t])
            )
    z_ops = {}
    for i in range(R.r):
        zi = R.gen_matrix(i)
        for n, copies in ((lo_degree, cols), (lo_degree + 1, rows)):
            blk = np.kron(np.eye(copies, dtype=np.int64), zi)
            if blk.any():
                z_ops[(i, n)] = blk
    diff = {lo_degree: dmat} if dmat.any() else {}
    return FiniteComplexOverR(R, dims, diff, z_ops)


# ---------------------------------------------------------------------------
# Koszul complex and the functor t
# ---------------------------------------------------------------------------


def _subsets(r: int) -> list[tuple[int, ...]]:
    """All subsets of {0..r-1} as sorted tuples, ordered by (size, lex)."""
    out = []
    for size in range(r + 1):
        out.extend(itertools.combinations(range(r), size))
    return out


class KoszulModule(FiniteComplexOverR):
    """A DG module over the Koszul complex: z-actions plus y-multiplications.

    The degree-n basis is indexed by pairs (T, m): T a subset of the y's
    (contributing degree -|T|) and m a basis element of the input in degree
    n + |T|.  ``y_ops[i][n]`` is left multiplication by y_i, degree -1.
    """

    def __init__(self, R, dims, diff, z_ops, y_ops, basis_index):
        super().__init__(R, dims, diff, z_ops)
        self.y_ops = {
            (int(i), int(n)): np.array(m, dtype=np.int64) % R.p
            for (i, n), m in y_ops.items()
        }
        self.basis_index = basis_index

    def y(self, i: int, n: int) -> np.ndarray:
        m = self.y_ops.get((i, n))
        if m is None:
            return np.zeros((self.dim(n - 1), self.dim(n)), dtype=np.int64)
        return m


def t_functor(M: FiniteComplexOverR) -> KoszulModule:
    """K (x)_R M with the diagonal grading and Koszul-sign differential.

    d(y_T (x) m) = sum_j (-1)^{j-1} y_{T\\t_j} (x) z_{t_j} m
                   + (-1)^{|T|} y_T (x) d_M(m).
    """
    R = M.R
    p = R.p
    r = R.r
    subsets = _subsets(r)
    if not M.dims:
        return KoszulModule(R, {}, {}, {}, {}, {})
    lo = M.min_degree() - r
    hi = M.max_degree()
    basis: dict[int, list[tuple[tuple[int, ...], int]]] = {}
    for n in range(lo, hi + 1):
        items = []
        for T in subsets:
            mdeg = n + len(T)
            for m_idx in range(M.dim(mdeg)):
                items.append((T, m_idx))
        if items:
            basis[n] = items
    index = {
        n: {key: t for t, key in enumerate(items)} for n, items in basis.items()
    }
    dims = {n: len(items) for n, items in basis.items()}
    diff = {}
    z_ops = {}
    y_ops = {}
    for n, items in basis.items():
        up = index.get(n + 1, {})
        down = index.get(n - 1, {})
        dmat = np.zeros((len(up), len(items)), dtype=np.int64)
        ymats = [np.zeros((len(down), len(items)), dtype=np.int64) for _ in range(r)]
        zmats = [np.zeros((len(items), len(items)), dtype=np.int64) for _ in range(r)]
        for col, (T, m_idx) in enumerate(items):
            mdeg = n + len(T)
            # z-part of the differential: drop one y, hit m with its z
            for j, t in enumerate(sorted(T)):
                zt = M.z(t, mdeg)
                sign = 1 if j % 2 == 0 else p - 1
                rest = tuple(x for x in T if x != t)
                for row_m in np.nonzero(zt[:, m_idx])[0]:
                    key = (rest, int(row_m))
                    dmat[up[key], col] = (
                        dmat[up[key], col] + sign * int(zt[row_m, m_idx])
                    ) % p
            # inner differential with the Koszul sign
            dm = M.d(mdeg)
            sign = 1 if len(T) % 2 == 0 else p - 1
            for row_m in np.nonzero(dm[:, m_idx])[0]:
                key = (T, int(row_m))
                dmat[up[key], col] = (
                    dmat[up[key], col] + sign * int(dm[row_m, m_idx])
                ) % p
            # module structure
            for i in range(r):
                zi = M.z(i, mdeg)
                for row_m in np.nonzero(zi[:, m_idx])[0]:
                    key = (T, int(row_m))
                    zmats[i][index[n][key], col] = zi[row_m, m_idx]
                if i not in T:
                    crossings = sum(1 for t in T if t < i)
                    sign_y = 1 if crossings % 2 == 0 else p - 1
                    key = (tuple(sorted(T + (i,))), m_idx)
                    ymats[i][down[key], col] = sign_y
        if dmat.any():
            diff[n] = dmat
        for i in range(r):
            if zmats[i].any():
                z_ops[(i, n)] = zmats[i]
            if ymats[i].any():
                y_ops[(i, n)] = ymats[i]
    return KoszulModule(R, dims, diff, z_ops, y_ops, index)


def koszul(R: CIPresentation) -> KoszulModule:
    """The Koszul complex K = R (x) Lambda(y_1..y_r), y_i of degree -1."""
    return t_functor(free_module(R))


def lambda_cycles(R: CIPresentation) -> list[dict[tuple[int, ...], np.ndarray]]:
    """The degree-(-1) elements w_j = sum_{h<=i} c_{hi,j} z_h y_i of K.

    Each is returned as {singleton subset (i,): coefficient vector over the
    R-basis}; ``lambda_to_k_vectors`` places them in the Koszul basis and
    checks they are cycles.
    """
    out = []
    for j in range(R.r):
        elem: dict[tuple[int, ...], np.ndarray] = {}
        for i in range(R.r):
            acc = np.zeros(R.dim, dtype=np.int64)
            for h in range(0, i + 1):
                c = R.constants[(h, i, j)]
                if not c.is_zero():
                    coeff = R.reduce(c * Polynomial.gen(R.zring, h))
                    acc = R.k.arr_add(acc, coeff)
            if acc.any():
                elem[(i,)] = acc
        out.append(elem)
    return out


def lambda_to_k_vectors(R: CIPresentation, K: KoszulModule | None = None) -> tuple[KoszulModule, np.ndarray]:
    """Coordinate vectors of the w_j in K^{-1}; verifies each is a cycle."""
    if K is None:
        K = koszul(R)
    idx = K.basis_index[-1]
    vecs = np.zeros((R.r, K.dim(-1)), dtype=np.int64)
    for j, elem in enumerate(lambda_cycles(R)):
        for (i,), coeffs in elem.items():
            for b in np.nonzero(coeffs)[0]:
                vecs[j, idx[((i,), int(b))]] = coeffs[b]
        boundary = matmul(K.d(-1), vecs[j][:, None], R.k)
        if boundary.any():
            raise InputError(
                f"structure-constant inconsistency: w_{j+1} is not a cycle in K"
            )
    return K, vecs


def w_operator(TM: KoszulModule, j: int, n: int) -> np.ndarray:
    """Left multiplication by w_j on the degree-n piece of a Koszul module."""
    R = TM.R
    out = np.zeros((TM.dim(n - 1), TM.dim(n)), dtype=np.int64)
    for i in range(R.r):
        acc = Polynomial.zero(R.zring)
        for h in range(0, i + 1):
            c = R.constants[(h, i, j)]
            if not c.is_zero():
                acc = acc + c * Polynomial.gen(R.zring, h)
        if acc.is_zero():
            continue
        # scalar part acts on the (n-1)-piece after the y-multiplication
        out = R.k.arr_add(out, matmul(TM.act(acc, n - 1), TM.y(i, n), R.k))
    return out


# ---------------------------------------------------------------------------
# exterior-operator modules and the twisted tensor functor
# ---------------------------------------------------------------------------


class LambdaModule:
    """Finite complex with anticommuting square-zero operators xi_1..xi_r.

    The xi_j lower the (upper) degree by 1 and anticommute with the
    differential; these are exactly the identities that make the twisted
    tensor differential square to zero.
    """

    def __init__(self, p: int, r: int, dims: dict[int, int], diff, xi_ops):
        self.p = p
        self.r = r
        self.k = field_for(FieldSpec(p))
        self.dims = {int(n): int(d) for n, d in dims.items() if d}
        self.diff = {int(n): np.array(m, dtype=np.int64) % p for n, m in diff.items()}
        self.xi_ops = {
            (int(j), int(n)): np.array(m, dtype=np.int64) % p
            for (j, n), m in xi_ops.items()
        }

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def d(self, n: int) -> np.ndarray:
        m = self.diff.get(n)
        if m is None:
            return np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)
        return m

    def xi(self, j: int, n: int) -> np.ndarray:
        m = self.xi_ops.get((j, n))
        if m is None:
            return np.zeros((self.dim(n - 1), self.dim(n)), dtype=np.int64)
        return m

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def validate(self) -> list[str]:
        problems = []
        k = self.k
        for n in self.degrees():
            if self.dim(n + 2) and matmul(self.d(n + 1), self.d(n), k).any():
                problems.append(f"d^2 != 0 out of degree {n}")
            for h in range(self.r):
                anti = k.arr_add(
                    matmul(self.d(n - 1), self.xi(h, n), k),
                    matmul(self.xi(h, n + 1), self.d(n), k),
                )
                if anti.any():
                    problems.append(f"xi_{h+1} does not anticommute with d at degree {n}")
                for i in range(h, self.r):
                    comp = k.arr_add(
                        matmul(self.xi(h, n - 1), self.xi(i, n), k),
                        matmul(self.xi(i, n - 1), self.xi(h, n), k),
                    )
                    if h == i:
                        comp = matmul(self.xi(h, n - 1), self.xi(h, n), k)
                    if comp.any():
                        what = "square" if h == i else "anticommutator"
                        problems.append(
                            f"exterior relation fails: {what} of xi_{h+1}, xi_{i+1} "
                            f"nonzero at degree {n}"
                        )
        return problems


def restrict_i(TM: KoszulModule, check: bool = True) -> LambdaModule:
    """Equip a Koszul module with the exterior operators xi_j = w_j * (-)."""
    R = TM.R
    xi_ops = {}
    for j in range(R.r):
        for n in TM.degrees():
            m = w_operator(TM, j, n)
            if m.any():
                xi_ops[(j, n)] = m
    N = LambdaModule(R.p, R.r, dict(TM.dims), dict(TM.diff), xi_ops)
    if check:
        problems = N.validate()
        if problems:
            raise InternalCheckError(
                "w-multiplications violate the exterior-module identities: "
                + problems[0]
            )
    return N


def bgg_h(N: LambdaModule) -> FreeDGModule:
    """Twisted tensor functor: the free DG module over S = k[x_1..x_r], deg 2.

    One generator per basis element of N in the same degree; differential
    1 (x) d_N + sum_j x_j (x) xi_j.  d^2 = 0 is exactly the package of
    exterior identities on the xi's, so this construction doubles as their
    machine check; an invalid N is reported with the offending relation.
    """
    ring = graded_ring(N.p, N.r, 2)
    gens = []
    offsets = {}
    pos = 0
    for n in N.degrees():
        offsets[n] = pos
        for i in range(N.dim(n)):
            gens.append((f"b{n}_{i}", n))
            pos += 1
    size = pos
    zero = Polynomial.zero(ring)
    rows = [[zero] * size for _ in range(size)]
    for n in N.degrees():
        dn = N.d(n)
        for col in range(N.dim(n)):
            for row in np.nonzero(dn[:, col])[0]:
                rows[offsets[n + 1] + int(row)][offsets[n] + col] = Polynomial.constant(
                    ring, int(dn[row, col])
                )
        for j in range(N.r):
            xj = N.xi(j, n)
            for col in range(N.dim(n)):
                for row in np.nonzero(xj[:, col])[0]:
                    tgt = rows[offsets[n - 1] + int(row)][offsets[n] + col]
                    rows[offsets[n - 1] + int(row)][offsets[n] + col] = tgt + Polynomial.gen(
                        ring, j
                    ).scale(int(xj[row, col]))
    module = FreeDGModule(ring, tuple(gens), tuple(tuple(r) for r in rows))
    report = module.validate()
    if not report:
        raise InputError(
            "input violates the exterior-module relations; twisted differential "
            "fails: " + report.problems[0]
        )
    return module


def v_r_pipeline(
    M: FiniteComplexOverR,
    e: int = 1,
    budget: int = 10**6,
    workers: int = 1,
) -> VarietySet:
    """Support variety of a complex over R, computed through the full bridge.

    The coordinates of the returned points are the x-coordinates of the
    twisted tensor model, identified with the degree-2 central generators
    th_1..th_r acting on Ext_R(k, -).
    """
    problems = M.validate()
    if problems:
        raise PreconditionError(f"invalid complex over R: {problems[0]}")
    return support_points(bridge_module(M), e, budget, workers)


@dataclass
class QuasiIsoReport:
    ok: bool
    koszul_dims: dict[int, int]
    expected: dict[int, int]
    degree_one_classes_span: bool

    def message(self) -> str:
        if self.ok:
            return "ok"
        return (
            f"H(K) dims {self.koszul_dims} vs exterior dims {self.expected}; "
            f"w-classes span H^-1: {self.degree_one_classes_span}"
        )


def check_quasi_iso(R: CIPresentation, window: tuple[int, int] | None = None) -> QuasiIsoReport:
    """Compare H(K) with the exterior algebra and check the w_j hit H^{-1}.

    The w-classes generate an exterior subalgebra of H(K); agreement of the
    dimensions binom(r, n) in every degree is the quasi-isomorphism at the
    level of graded dimensions.
    """
    from math import comb

    K, vecs = lambda_to_k_vectors(R)
    lo, hi = window if window else (-R.r - 1, 1)
    dims = K.homology_dims(lo, hi)
    expected = {n: comb(R.r, -n) if -R.r <= n <= 0 else 0 for n in range(lo, hi + 1)}
    boundaries = K.d(-2).T
    spanned = rank_in_quotient(vecs, boundaries, R.k) == comb(R.r, 1)
    ok = dims == expected and spanned
    return QuasiIsoReport(ok, dims, expected, spanned)


def bridge_module(M: FiniteComplexOverR) -> FreeDGModule:
    """The composite functor to free DG modules over S, degree-aligned.

    The twisted tensor model of the bridge computes Ext shifted by the rank
    r (the Koszul self-duality twist); the final shift undoes it so that
    dim H^n agrees with dim Ext_R^n(k, -) on the nose.  Supports are
    shift-invariant, so this is a normalization, not a change of variety.
    """
    from .dgmodules import shift as dg_shift

    return dg_shift(bgg_h(restrict_i(t_functor(M))), -M.R.r)


# ---------------------------------------------------------------------------
# minimal resolutions and the Ext oracle
# ---------------------------------------------------------------------------


class MinimalResolution:
    """Truncated minimal free resolution of k over R.

    ``ranks[n]`` is the rank of P_n; ``maps[n]`` (n >= 1) holds the matrix of
    P_n -> P_{n-1} as an array of shape (ranks[n-1], ranks[n], dim R):
    entry (s, t) is the coefficient vector of an element of the radical.
    Extended lazily and cached on the presentation.
    """

    def __init__(self, R: CIPresentation):
        self.R = R
        self.ranks = [1]
        self.maps: list[np.ndarray] = []
        self._kernel: np.ndarray | None = None  # rows: kernel basis of the last map
        # concurrent jobs share one cached resolution per ring; extension is
        # serialized, finished prefixes are append-only and safe to read
        self._lock = threading.Lock()
        self._init_first_kernel()

    def _init_first_kernel(self) -> None:
        # kernel of the augmentation R -> k is spanned by non-unit monomials
        unit = self.R.index[(0,) * self.R.r]
        rows = [e for i, e in enumerate(np.eye(self.R.dim, dtype=np.int64)) if i != unit]
        self._kernel = np.stack(rows) if rows else np.zeros((0, self.R.dim), dtype=np.int64)

    def _z_block(self, i: int, copies: int) -> np.ndarray:
        return np.kron(np.eye(copies, dtype=np.int64), self.R.gen_matrix(i))

    def extend_to(self, length: int) -> None:
        """Ensure P_n and its map are available for n <= length."""
        with self._lock:
            self._extend_locked(length)

    def _extend_locked(self, length: int) -> None:
        k = self.R.k
        d = self.R.dim
        while len(self.maps) < length:
            n = len(self.maps)  # building P_{n+1}
            z = self._kernel
            copies = self.ranks[n]
            # minimal generators: a basis of the kernel modulo radical * kernel
            rad_rows = []
            for i in range(self.R.r):
                blk = self._z_block(i, copies)
                rad_rows.append(matmul(z, blk.T, k))
            mz = vstack(rad_rows, copies * d)
            gens = quotient_representatives(z, mz, k)
            b_next = gens.shape[0]
            mat = np.zeros((copies, b_next, d), dtype=np.int64)
            unit = self.R.index[(0,) * self.R.r]
            for t in range(b_next):
                vec = gens[t].reshape(copies, d)
                if vec[:, unit].any():
                    raise InternalCheckError(
                        "resolution lost minimality: generator with a unit component"
                    )
                mat[:, t, :] = vec
            self.maps.append(mat)
            self.ranks.append(b_next)
            # scalar matrix of the new map, then its kernel
            phi = self.scalar_map(n + 1)
            self._kernel = nullspace(phi, k).T

    def scalar_map(self, n: int) -> np.ndarray:
        """The k-linear matrix of P_n -> P_{n-1} on underlying spaces."""
        if n < 1 or n > len(self.maps):
            raise InputError(f"map {n} not built")
        mat = self.maps[n - 1]
        b_prev, b_n, d = mat.shape
        phi = np.zeros((b_prev * d, b_n * d), dtype=np.int64)
        for s in range(b_prev):
            for t in range(b_n):
                if mat[s, t].any():
                    phi[s * d : (s + 1) * d, t * d : (t + 1) * d] = self.R.element_matrix(
                        mat[s, t]
                    )
        return phi

    def rank_of(self, n: int) -> int:
        self.extend_to(n)
        return self.ranks[n]


def minimal_resolution(R: CIPresentation) -> MinimalResolution:
    res = getattr(R, "_resolution", None)
    if res is None:
        res = MinimalResolution(R)
        R._resolution = res
    return res


class HomTotalComplex:
    """Total complex computing Ext_R(k, M) for a bounded complex M.

    A basis element of total degree n is (i, s, v): resolution level i,
    slot s < rank P_i, and a degree-(n-i) basis vector v of M.  The
    differential is D(phi) = d_M o phi - (-1)^n phi o del.
    """

    def __init__(self, R: CIPresentation, M: FiniteComplexOverR, n_max: int):
        self.R = R
        self.M = M
        self.n_max = n_max
        self.res = minimal_resolution(R)
        a = M.min_degree() if M.dims else 0
        self.i_max = max(n_max - a + 1, 0)
        self.res.extend_to(self.i_max + 2)
        self._piece_cache: dict[int, list[tuple[int, int, int]]] = {}
        self._act_cache: dict[tuple[int, int], np.ndarray] = {}

    def piece(self, n: int) -> list[tuple[int, int, int]]:
        if n not in self._piece_cache:
            items = []
            for i in range(0, self.i_max + 2):
                mdeg = n - i
                if self.M.dim(mdeg):
                    for s in range(self.res.ranks[i]):
                        for v in range(self.M.dim(mdeg)):
                            items.append((i, s, v))
            self._piece_cache[n] = items
        return self._piece_cache[n]

    def _entry_action(self, i: int, s: int, t: int, mdeg: int) -> np.ndarray:
        """Action on M^mdeg of the (s,t) entry of P_{i+1} -> P_i."""
        vec = self.res.maps[i][s, t]
        key = None
        out = np.zeros((self.M.dim(mdeg), self.M.dim(mdeg)), dtype=np.int64)
        for b in np.nonzero(vec)[0]:
            mono = self.R.basis[int(b)]
            cache_key = (mono, mdeg)
            m = self._act_cache.get(cache_key)
            if m is None:
                m = self.M.act(Polynomial.monomial(self.R.zring, mono), mdeg)
                self._act_cache[cache_key] = m
            out = self.R.k.arr_add(out, (m * int(vec[b])) % self.R.p)
        return out

    def differential(self, n: int) -> np.ndarray:
        src = self.piece(n)
        tgt = self.piece(n + 1)
        index = {key: t for t, key in enumerate(tgt)}
        mat = np.zeros((len(tgt), len(src)), dtype=np.int64)
        p = self.R.p
        sign = 1 if n % 2 == 1 else p - 1  # -(-1)^n
        for col, (i, s, v) in enumerate(src):
            mdeg = n - i
            dm = self.M.d(mdeg)
            for row_v in np.nonzero(dm[:, v])[0]:
                key = (i, s, int(row_v))
                mat[index[key], col] = (mat[index[key], col] + int(dm[row_v, v])) % p
            if i + 1 <= self.i_max + 1 and i < len(self.res.maps):
                b_next = self.res.ranks[i + 1]
                for t in range(b_next):
                    act = self._entry_action(i, s, t, mdeg)
                    for row_v in np.nonzero(act[:, v])[0]:
                        key = (i + 1, t, int(row_v))
                        mat[index[key], col] = (
                            mat[index[key], col] + sign * int(act[row_v, v])
                        ) % p
        return mat


def ext_dims(
    R: CIPresentation,
    M: FiniteComplexOverR,
    n_max: int,
    n_lo: int | None = None,
    bound: int = DEFAULT_EXT_BOUND,
) -> dict[int, int]:
    """dim Ext_R^n(k, M) for n_lo <= n <= n_max by the resolution oracle."""
    if n_max - (M.min_degree() if M.dims else 0) > bound:
        raise PreconditionError(
            f"requested Ext range needs resolution length "
            f"{n_max - (M.min_degree() if M.dims else 0)} > bound {bound}"
        )
    if n_lo is None:
        n_lo = M.min_degree() if M.dims else 0
    hom = HomTotalComplex(R, M, n_max)
    k = R.k
    ranks = {n: rank(hom.differential(n), k) for n in range(n_lo - 1, n_max + 1)}
    return {
        n: len(hom.piece(n)) - ranks[n] - ranks[n - 1] for n in range(n_lo, n_max + 1)
    }


def ext_oracle(R: CIPresentation, M: FiniteComplexOverR, n_max: int, bound: int = DEFAULT_EXT_BOUND) -> list[int]:
    """dims of Ext_R^n(k, M) for 0 <= n <= n_max (modules sit in degree 0)."""
    dims = ext_dims(R, M, n_max, n_lo=0, bound=bound)
    return [dims[n] for n in range(0, n_max + 1)]


@dataclass
class AdjunctionReport:
    ok: bool
    lo: int
    hi: int
    bridge_dims: dict[int, int]
    ext_dims: dict[int, int]

    def message(self) -> str:
        if self.ok:
            return "ok"
        bad = [
            n for n in self.bridge_dims
            if self.bridge_dims[n] != self.ext_dims.get(n, 0)
        ]
        return f"dimension mismatch at degrees {bad}: bridge={self.bridge_dims} ext={self.ext_dims}"


def adjunction_check(
    M: FiniteComplexOverR, n_max: int, bound: int = DEFAULT_EXT_BOUND
) -> AdjunctionReport:
    """Compare H^n of the bridge module with Ext_R^n(k, M) over a full window.

    Equality degree by degree is the graded content of the bridge being an
    adjunction; a mismatch indicates a pipeline bug, never a property of M.
    """
    R = M.R
    lo = (M.min_degree() if M.dims else 0) - 1
    bridge = bridge_module(M)
    table = dg_homology_dims(bridge, lo, n_max)
    bdims = {n: table.dim(n) for n in range(lo, n_max + 1)}
    edims = ext_dims(R, M, n_max, n_lo=lo, bound=bound)
    return AdjunctionReport(bdims == edims, lo, n_max, bdims, edims)


# ---------------------------------------------------------------------------
# theta operators and truncated annihilators
# ---------------------------------------------------------------------------


def theta_chain_maps(R: CIPresentation, length: int) -> list[list[np.ndarray]]:
    """Degree-2 chain endomorphisms of the resolution, one per relation.

    Lift the resolution maps to the polynomial ring, where the square of the
    lifted differential lands in the ideal of the relations; dividing by
    z_j^{e_j} yields Theta_j with del o Theta_j = Theta_j o del.  Returns
    thetas[j][i] : P_{i+2} -> P_i as arrays (ranks[i], ranks[i+2], dim R).
    """
    res = minimal_resolution(R)
    res.extend_to(length + 2)
    zring_lift = PolynomialRing(
        R.fieldspec, tuple(f"z{i+1}" for i in range(R.r)), (1,) * R.r
    )

    def lift_entry(vec: np.ndarray) -> Polynomial:
        terms = {}
        for b in np.nonzero(vec)[0]:
            terms[R.basis[int(b)]] = int(vec[b])
        return Polynomial(zring_lift, terms)

    def reduce_entry(poly: Polynomial) -> np.ndarray:
        v = np.zeros(R.dim, dtype=np.int64)
        for ex, c in poly.terms.items():
            if all(a < e for a, e in zip(ex, R.exponents)):
                v[R.index[ex]] = R.k.add(int(v[R.index[ex]]), c)
        return v

    thetas: list[list[np.ndarray]] = [[] for _ in range(R.r)]
    for i in range(length + 1):
        a = res.maps[i]      # P_{i+1} -> P_i
        b = res.maps[i + 1]  # P_{i+2} -> P_{i+1}
        rows, mid, _ = a.shape
        cols = b.shape[1]
        quotients = [
            [[Polynomial.zero(zring_lift) for _ in range(cols)] for _ in range(rows)]
            for _ in range(R.r)
        ]
        for s in range(rows):
            for t in range(cols):
                acc = Polynomial.zero(zring_lift)
                for m in range(mid):
                    if a[s, m].any() and b[m, t].any():
                        acc = acc + lift_entry(a[s, m]) * lift_entry(b[m, t])
                # divide each monomial by the first relation that divides it
                for ex, c in acc.terms.items():
                    j = next(
                        (jj for jj in range(R.r) if ex[jj] >= R.exponents[jj]), None
                    )
                    if j is None:
                        raise InternalCheckError(
                            "lifted square has a monomial outside the relation ideal"
                        )
                    rem = tuple(
                        x - (R.exponents[j] if t2 == j else 0) for t2, x in enumerate(ex)
                    )
                    quotients[j][s][t] = quotients[j][s][t] + Polynomial(
                        zring_lift, {rem: c}
                    )
        for j in range(R.r):
            th = np.zeros((rows, cols, R.dim), dtype=np.int64)
            for s in range(rows):
                for t in range(cols):
                    th[s, t] = reduce_entry(quotients[j][s][t])
            thetas[j].append(th)
    # chain-map property in R: del_{i+1} o Theta^{(i+1)} = Theta^{(i)} o del_{i+3}
    return thetas


class ExtThetaAction:
    """Ext_R(k, M) with the action matrices of the theta operators."""

    def __init__(self, R: CIPresentation, M: FiniteComplexOverR, n_max: int, bound: int = DEFAULT_EXT_BOUND):
        self.R = R
        self.M = M
        self.n_max = n_max
        lo = (M.min_degree() if M.dims else 0)
        self.lo = lo
        if n_max - lo > bound:
            raise PreconditionError(
                f"requested range needs resolution length {n_max - lo} > bound {bound}"
            )
        self.hom = HomTotalComplex(R, M, n_max + 2)
        self.thetas = theta_chain_maps(R, self.hom.i_max + 1)
        k = R.k
        self.reps: dict[int, np.ndarray] = {}
        self.bnds: dict[int, np.ndarray] = {}
        for n in range(lo, n_max + 3):
            z = nullspace(self.hom.differential(n), k).T
            b = self.hom.differential(n - 1).T
            self.reps[n] = quotient_representatives(z, b, k)
            self.bnds[n] = b

    def ext_dim(self, n: int) -> int:
        return self.reps[n].shape[0] if n in self.reps else 0

    def _theta_piece_matrix(self, j: int, n: int) -> np.ndarray:
        """phi -> phi o Theta_j as a map of total-degree pieces n -> n+2."""
        src = self.hom.piece(n)
        tgt = self.hom.piece(n + 2)
        index = {key: t for t, key in enumerate(tgt)}
        out = np.zeros((len(tgt), len(src)), dtype=np.int64)
        for col, (i, s, v) in enumerate(src):
            if i >= len(self.thetas[j]):
                continue
            mdeg = n - i
            th = self.thetas[j][i]  # (ranks[i], ranks[i+2], dim)
            for t in range(th.shape[1]):
                vec = th[s, t]
                if not vec.any():
                    continue
                act = np.zeros((self.M.dim(mdeg), self.M.dim(mdeg)), dtype=np.int64)
                for bidx in np.nonzero(vec)[0]:
                    mono = self.R.basis[int(bidx)]
                    m = self.M.act(Polynomial.monomial(self.R.zring, mono), mdeg)
                    act = self.R.k.arr_add(act, (m * int(vec[bidx])) % self.R.p)
                for row_v in np.nonzero(act[:, v])[0]:
                    key = (i + 2, t, int(row_v))
                    out[index[key], col] = (
                        out[index[key], col] + int(act[row_v, v])
                    ) % self.R.p
        return out

    def theta_ext_matrix(self, j: int, n: int) -> np.ndarray:
        """Matrix of theta_j : Ext^n -> Ext^{n+2} in the canonical class bases."""
        k = self.R.k
        reps = self.reps.get(n)
        if reps is None or reps.shape[0] == 0:
            return np.zeros((self.ext_dim(n + 2), 0), dtype=np.int64)
        phi = self._theta_piece_matrix(j, n)
        out = np.zeros((self.ext_dim(n + 2), reps.shape[0]), dtype=np.int64)
        for c in range(reps.shape[0]):
            img = matmul(phi, reps[c][:, None], k).reshape(-1)
            coords = coords_in_quotient(img, self.reps[n + 2], self.bnds[n + 2], k)
            if coords is None:
                raise InternalCheckError("theta image of a class is not a cycle class")
            out[:, c] = coords
        return out


@dataclass
class AnnihilatorReport:
    """Truncated annihilator of Ext_R(k, M) over k[th_1..th_r].

    ``polys`` is a basis (by ascending degree) of the homogeneous
    polynomials of degree <= d_max annihilating Ext^n for all n in the
    verified window; truncation parameters are carried alongside because the
    stabilization degree is not known a priori.
    """

    polys: list[Polynomial]
    d_max: int
    n_max: int
    theta_ring: PolynomialRing

    def poly_strings(self) -> list[str]:
        return [str(p) for p in self.polys]


def theta_ring(p: int, r: int) -> PolynomialRing:
    return graded_ring(p, r, 2, prefix="th")


def ann_theta(
    R: CIPresentation,
    M: FiniteComplexOverR,
    d_max: int = 4,
    n_max: int = DEFAULT_EXT_BOUND,
    bound: int = DEFAULT_EXT_BOUND,
) -> AnnihilatorReport:
    """Homogeneous polynomials in the thetas annihilating truncated Ext.

    For each monomial degree d <= d_max, solves the linear conditions that a
    combination of degree-d theta-monomials kills every Ext^n class whose
    image degree n + 2d still lies inside the computed window.
    """
    act = ExtThetaAction(R, M, n_max, bound)
    k = R.k
    tring = theta_ring(R.p, R.r)
    lo = act.lo
    single = {
        (j, n): act.theta_ext_matrix(j, n)
        for j in range(R.r)
        for n in range(lo, n_max + 1)
    }

    def monomial_matrix(ex: tuple[int, ...], n: int) -> np.ndarray:
        """Action of theta^ex on Ext^n, composing one generator at a time."""
        cur = np.eye(act.ext_dim(n), dtype=np.int64)
        deg = n
        for j in range(R.r):
            for _ in range(ex[j]):
                cur = matmul(single[(j, deg)], cur, k)
                deg += 2
        return cur

    polys: list[Polynomial] = []
    for d in range(1, d_max + 1):
        monos = sorted(
            ex for ex in itertools.product(range(d + 1), repeat=R.r) if sum(ex) == d
        )
        rows = []
        for n in range(lo, n_max + 1 - 2 * d):
            dim_src = act.ext_dim(n)
            dim_tgt = act.ext_dim(n + 2 * d)
            if dim_src == 0:
                continue
            blocks = [monomial_matrix(ex, n).reshape(-1) for ex in monos]
            rows.append(np.stack(blocks, axis=1) if dim_tgt else np.zeros((0, len(monos)), dtype=np.int64))
        if rows:
            system = vstack(rows, len(monos))
        else:
            system = np.zeros((0, len(monos)), dtype=np.int64)
        kernel = nullspace(system, k)
        for col in range(kernel.shape[1]):
            vec = kernel[:, col]
            terms = {monos[t]: int(vec[t]) for t in range(len(monos)) if vec[t]}
            polys.append(Polynomial(tring, terms))
    return AnnihilatorReport(polys, d_max, n_max, tring)
