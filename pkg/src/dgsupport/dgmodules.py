"""Finite free DG modules over a graded polynomial ring with zero differential.

Conventions (fixed once, used everywhere):

* gradings are upper and the differential raises total degree by 1;
* the degree of ``poly * gen`` is ``deg(poly) + deg(gen)``;
* differential matrices act on column vectors: entry (i, j) is the
  coefficient of generator i in d(generator j), homogeneous of degree
  ``deg(gen_j) - deg(gen_i) + 1``;
* morphism matrices likewise: entry (i, j) is homogeneous of degree
  ``deg(src_j) - deg(tgt_i)``;
* ``shift(M, s)`` has components ``shift(M, s)^n = M^{n+s}``, so generator
  degrees drop by s and the differential picks up (-1)^s.  In particular
  multiplication by a homogeneous s of degree d is the degree-0 morphism
  ``shift(M, -d) -> M``;
* tensor differentials follow the Koszul rule
  ``d(m@n) = d(m)@n + (-1)^{deg m} m@d(n)``.

The ring is required to be concentrated in even degrees or to have p = 2;
that hypothesis is what makes scalar multiplication strictly commute with
the differential, and several constructions below silently rely on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, PreconditionError, UnsupportedGradingError
from .linalg import (
    coords_in_quotient,
    matmul,
    nullspace as _nullspace,
    quotient_representatives,
    rank as _rank,
    solve as _solve,
)
from .polynomials import Polynomial, PolynomialRing, monomial_basis

Matrix = tuple[tuple[Polynomial, ...], ...]


@dataclass
class ValidationReport:
    ok: bool
    problems: list[str]

    def __bool__(self) -> bool:
        return self.ok

    def message(self) -> str:
        return "ok" if self.ok else "; ".join(self.problems)


def _as_matrix(rows, n_rows: int, n_cols: int, ring: PolynomialRing) -> Matrix:
    rows = tuple(tuple(row) for row in rows)
    if len(rows) != n_rows or any(len(r) != n_cols for r in rows):
        raise InputError(f"matrix must be {n_rows} x {n_cols}")
    for row in rows:
        for p in row:
            if not isinstance(p, Polynomial) or p.ring != ring:
                raise InputError("matrix entries must be polynomials over the module ring")
    return rows


class FreeDGModule:
    """A finite free DG module: named generators with degrees, polynomial differential."""

    __slots__ = ("ring", "generators", "differential")

    def __init__(self, ring: PolynomialRing, generators, differential):
        self.ring = ring
        self.generators = tuple((str(n), int(d)) for n, d in generators)
        n = len(self.generators)
        self.differential = _as_matrix(differential, n, n, ring)

    @property
    def n_gens(self) -> int:
        return len(self.generators)

    @property
    def gen_degrees(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.generators)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FreeDGModule)
            and self.ring == other.ring
            and self.generators == other.generators
            and self.differential == other.differential
        )

    def __repr__(self) -> str:
        gens = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"<FreeDGModule rank {self.n_gens} [{gens}] over {self.ring}>"

    def validate(self) -> ValidationReport:
        problems: list[str] = []
        if not self.ring.is_dg_admissible():
            problems.append(
                f"ring degrees {self.ring.degrees} are not all even and p != 2"
            )
        degs = self.gen_degrees
        for j in range(self.n_gens):
            for i in range(self.n_gens):
                entry = self.differential[i][j]
                if entry.is_zero():
                    continue
                want = degs[j] - degs[i] + 1
                try:
                    have = entry.homogeneous_degree()
                except InputError:
                    problems.append(f"differential entry ({i},{j}) is inhomogeneous")
                    continue
                if have != want:
                    problems.append(
                        f"differential entry ({i},{j}) has degree {have}, "
                        f"needs {want} (gen degrees {degs[j]} -> {degs[i]}, step +1)"
                    )
        if not problems:
            sq = matrix_product(self.differential, self.differential, self.ring)
            for i in range(self.n_gens):
                for j in range(self.n_gens):
                    if not sq[i][j].is_zero():
                        problems.append(
                            f"d^2 entry ({i},{j}) = {sq[i][j]} is not zero"
                        )
                        return ValidationReport(False, problems)
        return ValidationReport(not problems, problems)


class DGMorphism:
    """Degree-0 chain map between free DG modules over one ring."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FreeDGModule, target: FreeDGModule, matrix):
        if source.ring != target.ring:
            raise InputError("morphism endpoints live over different rings")
        self.source = source
        self.target = target
        self.matrix = _as_matrix(matrix, target.n_gens, source.n_gens, source.ring)

    @property
    def ring(self) -> PolynomialRing:
        return self.source.ring

    def validate(self) -> ValidationReport:
        problems: list[str] = []
        sdeg = self.source.gen_degrees
        tdeg = self.target.gen_degrees
        for j in range(self.source.n_gens):
            for i in range(self.target.n_gens):
                entry = self.matrix[i][j]
                if entry.is_zero():
                    continue
                want = sdeg[j] - tdeg[i]
                try:
                    have = entry.homogeneous_degree()
                except InputError:
                    problems.append(f"morphism entry ({i},{j}) is inhomogeneous")
                    continue
                if have != want:
                    problems.append(
                        f"morphism entry ({i},{j}) has degree {have}, needs {want}"
                    )
        if not problems:
            lhs = matrix_product(self.target.differential, self.matrix, self.ring)
            rhs = matrix_product(self.matrix, self.source.differential, self.ring)
            for i in range(self.target.n_gens):
                for j in range(self.source.n_gens):
                    if lhs[i][j] != rhs[i][j]:
                        problems.append(
                            f"does not commute with differentials at entry ({i},{j})"
                        )
                        return ValidationReport(False, problems)
        return ValidationReport(not problems, problems)


# -- matrix-of-polynomial helpers ------------------------------------------


def matrix_product(a: Matrix, b: Matrix, ring: PolynomialRing) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise InputError("polynomial matrix shape mismatch")
    rows = len(a)
    inner = len(b)
    cols = len(b[0]) if b else 0
    zero = Polynomial.zero(ring)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = zero
            for k in range(inner):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def zero_matrix(rows: int, cols: int, ring: PolynomialRing) -> Matrix:
    z = Polynomial.zero(ring)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def _dedupe(names: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for nm in names:
        if nm in seen:
            seen[nm] += 1
            out.append(f"{nm}_{seen[nm]}")
        else:
            seen[nm] = 0
            out.append(nm)
    return out


# -- constructors ------------------------------------------------------------


def unit_module(ring: PolynomialRing) -> FreeDGModule:
    """The ring itself: one generator in degree 0, zero differential."""
    return FreeDGModule(ring, (("1", 0),), zero_matrix(1, 1, ring))


def zero_module(ring: PolynomialRing) -> FreeDGModule:
    return FreeDGModule(ring, (), ())


def shift(m: FreeDGModule, s: int) -> FreeDGModule:
    if s == 0:
        return m
    gens = tuple((n, d - s) for n, d in m.generators)
    if s % 2 == 0:
        diff = m.differential
    else:
        diff = tuple(tuple(-p for p in row) for row in m.differential)
    return FreeDGModule(m.ring, gens, diff)


def cone(f: DGMorphism) -> FreeDGModule:
    rep = f.validate()
    if not rep:
        raise PreconditionError(f"cone of an invalid morphism: {rep.message()}")
    msrc = shift(f.source, 1)
    tgt = f.target
    names = _dedupe([n + "'" for n, _ in msrc.generators] + [n for n, _ in tgt.generators])
    degs = list(msrc.gen_degrees) + list(tgt.gen_degrees)
    a = msrc.n_gens
    b = tgt.n_gens
    ring = f.ring
    rows = []
    for i in range(a + b):
        row = []
        for j in range(a + b):
            if i < a and j < a:
                row.append(msrc.differential[i][j])
            elif i >= a and j < a:
                row.append(f.matrix[i - a][j])
            elif i >= a and j >= a:
                row.append(tgt.differential[i - a][j - a])
            else:
                row.append(Polynomial.zero(ring))
        rows.append(tuple(row))
    return FreeDGModule(ring, tuple(zip(names, degs)), tuple(rows))


def direct_sum(m: FreeDGModule, n: FreeDGModule) -> FreeDGModule:
    if m.ring != n.ring:
        raise InputError("direct sum over different rings")
    names = _dedupe([nm for nm, _ in m.generators] + [nm for nm, _ in n.generators])
    degs = list(m.gen_degrees) + list(n.gen_degrees)
    a, b = m.n_gens, n.n_gens
    ring = m.ring
    z = Polynomial.zero(ring)
    rows = []
    for i in range(a + b):
        row = []
        for j in range(a + b):
            if i < a and j < a:
                row.append(m.differential[i][j])
            elif i >= a and j >= a:
                row.append(n.differential[i - a][j - a])
            else:
                row.append(z)
        rows.append(tuple(row))
    return FreeDGModule(ring, tuple(zip(names, degs)), tuple(rows))


def tensor(m: FreeDGModule, n: FreeDGModule) -> FreeDGModule:
    """Tensor product over the ring, Koszul sign on the second factor."""
    if m.ring != n.ring:
        raise InputError("tensor over different rings")
    ring = m.ring
    a, b = m.n_gens, n.n_gens
    gens = []
    for i in range(a):
        for j in range(b):
            gens.append(
                (f"{m.generators[i][0]}*{n.generators[j][0]}",
                 m.generators[i][1] + n.generators[j][1])
            )
    gens = list(zip(_dedupe([g[0] for g in gens]), [g[1] for g in gens]))
    z = Polynomial.zero(ring)
    size = a * b
    rows = [[z] * size for _ in range(size)]
    for ip in range(a):
        for jp in range(b):
            col = ip * b + jp
            sign = 1 if m.generators[ip][1] % 2 == 0 else -1
            for i in range(a):
                entry = m.differential[i][ip]
                if not entry.is_zero():
                    rows[i * b + jp][col] = rows[i * b + jp][col] + entry
            for j in range(b):
                entry = n.differential[j][jp]
                if not entry.is_zero():
                    e = entry if sign == 1 else -entry
                    rows[ip * b + j][col] = rows[ip * b + j][col] + e
    return FreeDGModule(ring, tuple(gens), tuple(tuple(r) for r in rows))


def tensor_morphism(f: DGMorphism, g: DGMorphism) -> DGMorphism:
    """f (x) g on the tensor products (no signs: both maps have degree 0)."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    bs, bt = g.source.n_gens, g.target.n_gens
    z = Polynomial.zero(f.ring)
    rows = [[z] * src.n_gens for _ in range(tgt.n_gens)]
    for i in range(f.target.n_gens):
        for ip in range(f.source.n_gens):
            fe = f.matrix[i][ip]
            if fe.is_zero():
                continue
            for j in range(bt):
                for jp in range(bs):
                    ge = g.matrix[j][jp]
                    if not ge.is_zero():
                        rows[i * bt + j][ip * bs + jp] = fe * ge
    return DGMorphism(src, tgt, tuple(tuple(r) for r in rows))


def is_unit_like(m: FreeDGModule) -> bool:
    return (
        m.n_gens == 1
        and m.generators[0][1] == 0
        and m.differential[0][0].is_zero()
    )


def tensor_power(f: DGMorphism, n: int) -> DGMorphism:
    """f^{(x)n} for f out of the rank-one free module in degree 0.

    For a general perfect source apply ``hom_adjoint`` first.
    """
    if n < 1:
        raise InputError("tensor_power needs n >= 1")
    if not is_unit_like(f.source):
        raise PreconditionError(
            "tensor_power needs a morphism out of the unit module; "
            "use hom_adjoint to transform a general source first"
        )
    if n == 1:
        return f
    col = [f.matrix[i][0] for i in range(f.target.n_gens)]
    target = f.target
    cur = col
    for _ in range(n - 1):
        target_next = tensor(target, f.target)
        cur = [ci * cj for ci in cur for cj in col]
        target = target_next
    return DGMorphism(f.source, target, tuple((c,) for c in cur))


def mult_morphism(s: Polynomial, m: FreeDGModule) -> DGMorphism:
    """Multiplication by a homogeneous s as the degree-0 map shift(M,-|s|) -> M."""
    d = s.homogeneous_degree()
    if d is None:
        d = 0
    src = shift(m, -d)
    z = Polynomial.zero(m.ring)
    mat = tuple(
        tuple(s if i == j else z for j in range(m.n_gens)) for i in range(m.n_gens)
    )
    return DGMorphism(src, m, mat)


def hom_complex(f_mod: FreeDGModule, x_mod: FreeDGModule) -> FreeDGModule:
    """Hom(F, X) as a free DG module; generator (i, j) is the map f_j -> x_i.

    Differential: D(phi) = d_X o phi - (-1)^{deg phi} phi o d_F.  For F finite
    free this is also X (x) dual(F); taking X = the unit module gives duals.
    """
    if f_mod.ring != x_mod.ring:
        raise InputError("hom over different rings")
    ring = f_mod.ring
    nf, nx = f_mod.n_gens, x_mod.n_gens
    gens = []
    degree_of = {}
    for i in range(nx):
        for j in range(nf):
            d = x_mod.generators[i][1] - f_mod.generators[j][1]
            gens.append((f"{x_mod.generators[i][0]}/{f_mod.generators[j][0]}", d))
            degree_of[(i, j)] = d
    gens = list(zip(_dedupe([g[0] for g in gens]), [g[1] for g in gens]))
    size = nx * nf
    z = Polynomial.zero(ring)
    rows = [[z] * size for _ in range(size)]
    for i in range(nx):
        for j in range(nf):
            colidx = i * nf + j
            sign = 1 if degree_of[(i, j)] % 2 == 0 else -1
            for k in range(nx):
                entry = x_mod.differential[k][i]
                if not entry.is_zero():
                    rows[k * nf + j][colidx] = rows[k * nf + j][colidx] + entry
            for ell in range(nf):
                entry = f_mod.differential[j][ell]
                if not entry.is_zero():
                    e = -entry if sign == 1 else entry
                    rows[i * nf + ell][colidx] = rows[i * nf + ell][colidx] + e
    return FreeDGModule(ring, tuple(gens), tuple(tuple(r) for r in rows))


def dual(m: FreeDGModule) -> FreeDGModule:
    return hom_complex(m, unit_module(m.ring))


def hom_adjoint(f: DGMorphism) -> DGMorphism:
    """The adjoint unit -> Hom(F, X) of f: F -> X, sending 1 to f.

    This is the reduction-to-free-source transformation; the image of 1 is a
    degree-0 cycle exactly because f is a chain map.
    """
    rep = f.validate()
    if not rep:
        raise PreconditionError(f"adjoint of an invalid morphism: {rep.message()}")
    h = hom_complex(f.source, f.target)
    nf = f.source.n_gens
    col = []
    for i in range(f.target.n_gens):
        for j in range(nf):
            col.append(f.matrix[i][j])
    return DGMorphism(unit_module(f.ring), h, tuple((c,) for c in col))


# -- graded pieces, homology, boundary solving ------------------------------


def piece_basis(m: FreeDGModule, n: int) -> list[tuple[int, tuple[int, ...]]]:
    """k-basis of the degree-n component: (generator index, monomial exponent)."""
    if any(d <= 0 for d in m.ring.degrees):
        raise UnsupportedGradingError(
            "graded components are finite only for positive generator degrees"
        )
    out = []
    for g, (_, dg) in enumerate(m.generators):
        for ex in monomial_basis(n - dg, m.ring):
            out.append((g, ex))
    return out


def piece_matrix(
    m: FreeDGModule,
    n: int,
    basis_n: list | None = None,
    basis_next: list | None = None,
) -> np.ndarray:
    """Matrix of d: M^n -> M^{n+1} in the piece bases."""
    if basis_n is None:
        basis_n = piece_basis(m, n)
    if basis_next is None:
        basis_next = piece_basis(m, n + 1)
    index = {key: t for t, key in enumerate(basis_next)}
    mat = np.zeros((len(basis_next), len(basis_n)), dtype=np.int64)
    for cidx, (g, ex) in enumerate(basis_n):
        for i in range(m.n_gens):
            entry = m.differential[i][g]
            for mono, c in entry.terms.items():
                tgt = tuple(a + b for a, b in zip(mono, ex))
                mat[index[(i, tgt)], cidx] = c
    return mat


@dataclass(frozen=True)
class HomologyTable:
    lo: int
    hi: int
    dims: tuple[int, ...]

    def dim(self, n: int) -> int:
        if not (self.lo <= n <= self.hi):
            raise InputError(f"degree {n} outside computed window [{self.lo},{self.hi}]")
        return self.dims[n - self.lo]

    def total(self) -> int:
        return sum(self.dims)

    def __str__(self) -> str:
        cells = " ".join(f"{n}:{d}" for n, d in zip(range(self.lo, self.hi + 1), self.dims))
        return f"H[{self.lo}..{self.hi}] {cells}"


def homology_dims(m: FreeDGModule, lo: int, hi: int) -> HomologyTable:
    """dim_k H^n(M) for lo <= n <= hi, by exact rank computation per degree."""
    if lo > hi:
        raise InputError("empty degree window")
    field = m.ring.k
    bases = {n: piece_basis(m, n) for n in range(lo - 1, hi + 2)}
    ranks = {}
    for n in range(lo - 1, hi + 1):
        ranks[n] = _rank(piece_matrix(m, n, bases[n], bases[n + 1]), field)
    dims = tuple(
        len(bases[n]) - ranks[n] - ranks[n - 1] for n in range(lo, hi + 1)
    )
    return HomologyTable(lo, hi, dims)


def element_vector(
    m: FreeDGModule, c: tuple[Polynomial, ...], basis: list
) -> np.ndarray:
    index = {key: t for t, key in enumerate(basis)}
    v = np.zeros(len(basis), dtype=np.int64)
    for g, poly in enumerate(c):
        for mono, coeff in poly.terms.items():
            key = (g, mono)
            if key not in index:
                raise PreconditionError(
                    f"component {poly} of generator {g} does not lie in the stated degree"
                )
            v[index[key]] = coeff
    return v


def apply_differential(m: FreeDGModule, c: tuple[Polynomial, ...]) -> tuple[Polynomial, ...]:
    out = []
    for i in range(m.n_gens):
        acc = Polynomial.zero(m.ring)
        for j in range(m.n_gens):
            if not m.differential[i][j].is_zero() and not c[j].is_zero():
                acc = acc + m.differential[i][j] * c[j]
        out.append(acc)
    return tuple(out)


def is_homologous_zero(
    m: FreeDGModule, c: tuple[Polynomial, ...], n: int
) -> tuple[bool, tuple[Polynomial, ...] | None]:
    """Is the degree-n cycle c a boundary?  Returns (answer, witness).

    The witness x satisfies d(x) = c; callers can re-check that identity
    symbolically with ``apply_differential``.  Precondition failures (wrong
    degree, not a cycle) raise.
    """
    if len(c) != m.n_gens:
        raise InputError("cycle vector length must match the generator count")
    for g, poly in enumerate(c):
        if poly.is_zero():
            continue
        want = n - m.generators[g][1]
        have = poly.homogeneous_degree()
        if have != want:
            raise PreconditionError(
                f"component {g} has degree {have}, expected {want} for total degree {n}"
            )
    dc = apply_differential(m, c)
    if any(not p.is_zero() for p in dc):
        bad = next(i for i, p in enumerate(dc) if not p.is_zero())
        raise PreconditionError(f"input is not a cycle: d(c) has component {dc[bad]} at {bad}")
    basis_n = piece_basis(m, n)
    basis_prev = piece_basis(m, n - 1)
    target = element_vector(m, c, basis_n)
    if not target.any():
        return True, tuple(Polynomial.zero(m.ring) for _ in range(m.n_gens))
    mat = piece_matrix(m, n - 1, basis_prev, basis_n)
    sol = _solve(mat, target, m.ring.k)
    if sol is None:
        return False, None
    witness = [Polynomial.zero(m.ring) for _ in range(m.n_gens)]
    for idx, (g, ex) in enumerate(basis_prev):
        if sol[idx]:
            witness[g] = witness[g] + Polynomial.monomial(m.ring, ex, int(sol[idx]))
    return True, tuple(witness)


def homology_class_data(m: FreeDGModule, n: int):
    """(cycle rows, boundary rows, basis) for H^n computations on classes."""
    basis_n = piece_basis(m, n)
    basis_prev = piece_basis(m, n - 1)
    basis_next = piece_basis(m, n + 1)
    z = _nullspace(piece_matrix(m, n, basis_n, basis_next), m.ring.k).T
    b = piece_matrix(m, n - 1, basis_prev, basis_n).T
    return z, b, basis_n


def morphism_piece_matrix(f: DGMorphism, n: int) -> np.ndarray:
    """Matrix of f on the degree-n components."""
    src_basis = piece_basis(f.source, n)
    tgt_basis = piece_basis(f.target, n)
    index = {key: t for t, key in enumerate(tgt_basis)}
    mat = np.zeros((len(tgt_basis), len(src_basis)), dtype=np.int64)
    for cidx, (g, ex) in enumerate(src_basis):
        for i in range(f.target.n_gens):
            entry = f.matrix[i][g]
            for mono, c in entry.terms.items():
                tgt = tuple(a + b for a, b in zip(mono, ex))
                mat[index[(i, tgt)], cidx] = c
    return mat


def homology_class_map(f: DGMorphism, n: int) -> np.ndarray:
    """Matrix of H^n(f) in the canonical quotient bases (rows act on classes)."""
    field = f.ring.k
    z_s, b_s, _ = homology_class_data(f.source, n)
    z_t, b_t, _ = homology_class_data(f.target, n)
    reps_s = quotient_representatives(z_s, b_s, field)
    reps_t = quotient_representatives(z_t, b_t, field)
    phi = morphism_piece_matrix(f, n)
    out = np.zeros((reps_t.shape[0], reps_s.shape[0]), dtype=np.int64)
    for k in range(reps_s.shape[0]):
        img = matmul(phi, reps_s[k][:, None], field).reshape(-1)
        coords = coords_in_quotient(img, reps_t, b_t, field)
        if coords is None:
            raise PreconditionError("image of a cycle is not a cycle; morphism invalid")
        out[:, k] = coords
    return out
