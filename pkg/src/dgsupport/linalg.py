"""Dense exact linear algebra over finite fields.

Matrices are numpy int64 arrays of encoded field elements (see fields.py).
Everything is plain Gauss-Jordan with the first nonzero pivot, so results
are deterministic and bit-reproducible.  Matrices at desk scale stay small
(a few thousand columns at most); no sparse formats.
"""

from __future__ import annotations

import numpy as np

from .fields import Field


def as_matrix(rows, field: Field | None = None) -> np.ndarray:
    """Coerce nested lists / arrays to an int64 matrix of encoded elements.

    When ``field`` is given, plain integers are reduced into the prime
    subfield; already-encoded values must be passed without a field.
    """
    a = np.array(rows, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    if field is not None:
        a = a % field.p
    return a


def rref(mat: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = mat.astype(np.int64, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        piv = int(a[r, c])
        if piv != 1:
            a[r] = field.arr_mul(a[r], np.int64(field.inv(piv)))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = field.arr_sub(a[hit], field.arr_mul(col[hit, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat: np.ndarray, field: Field) -> int:
    if mat.size == 0:
        return 0
    return len(rref(mat, field)[1])


def nullspace(mat: np.ndarray, field: Field) -> np.ndarray:
    """Basis of the right kernel, one vector per column.

    The basis is in the canonical echelon form: free columns in ascending
    order, each basis vector has a 1 at its free column.
    """
    rows, cols = mat.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0 or not mat.any():
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(mat, field)
    free = [c for c in range(cols) if c not in set(pivots)]
    out = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        out[fc, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = field.neg(int(r[i, fc]))
    return out


def nullity(mat: np.ndarray, field: Field) -> int:
    return mat.shape[1] - rank(mat, field)


def solve(mat: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray | None:
    """One solution of mat @ x = b (free variables set to 0), or None."""
    rows, cols = mat.shape
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if b.shape[0] != rows:
        raise ValueError("right-hand side length mismatch")
    if cols == 0:
        return None if b.any() else np.zeros(0, dtype=np.int64)
    aug = np.concatenate([mat, b[:, None]], axis=1)
    r, pivots = rref(aug, field)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols]
    return x


def matmul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    """Exact matrix product over the field."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    if field.e == 1:
        # products of residues fit comfortably in int64
        return (a @ b) % field.p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.arr_add(out, field.arr_mul(a[:, k][:, None], b[k, :][None, :]))
    return out


def vstack(blocks: list[np.ndarray], cols: int) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return np.zeros((0, cols), dtype=np.int64)
    return np.concatenate(blocks, axis=0)


def rank_in_quotient(vecs: np.ndarray, sub: np.ndarray, field: Field) -> int:
    """dim of the image of row-span(vecs) in the quotient by row-span(sub)."""
    cols = vecs.shape[1] if vecs.size else sub.shape[1]
    return rank(vstack([vecs, sub], cols), field) - rank(sub, field)


class _EchelonState:
    """Incremental row-echelon accumulator for span-membership tests."""

    def __init__(self, field: Field):
        self.field = field
        self.rows: list[np.ndarray] = []
        self.pivots: dict[int, int] = {}

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = v.astype(np.int64, copy=True)
        while True:
            nz = np.nonzero(v)[0]
            if nz.size == 0:
                return v
            c = int(nz[0])
            holder = self.pivots.get(c)
            if holder is None:
                return v
            w = self.rows[holder]
            factor = self.field.mul(int(v[c]), self.field.inv(int(w[c])))
            v = self.field.arr_sub(v, self.field.arr_mul(np.int64(factor), w))

    def insert(self, v: np.ndarray) -> bool:
        """Add a row; True when it enlarged the span."""
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        self.pivots[int(nz[0])] = len(self.rows)
        self.rows.append(v)
        return True


def quotient_representatives(z: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    """Rows of ``z`` forming a basis of row-span(z) modulo row-span(b).

    Requires row-span(b) <= row-span(z).  Deterministic: rows of z are
    scanned in order and kept when they enlarge the span.
    """
    state = _EchelonState(field)
    for row in b:
        state.insert(row)
    reps: list[np.ndarray] = []
    for row in z:
        if state.insert(row):
            reps.append(row)
    if reps:
        return np.stack(reps)
    return np.zeros((0, z.shape[1]), dtype=np.int64)


def coords_in_quotient(
    v: np.ndarray, reps: np.ndarray, b: np.ndarray, field: Field
) -> np.ndarray | None:
    """Coordinates of the class of ``v`` in the basis ``reps`` of span/span(b)."""
    n = v.shape[0]
    cols = [reps.T] if reps.shape[0] else []
    if b.shape[0]:
        cols.append(b.T)
    if not cols:
        return np.zeros(0, dtype=np.int64) if not v.any() else None
    system = np.concatenate(cols, axis=1) if len(cols) > 1 else cols[0]
    sol = solve(system, v.reshape(n), field)
    if sol is None:
        return None
    return sol[: reps.shape[0]]
