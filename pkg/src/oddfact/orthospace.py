"""Vectors, matrices and odd-dimensional orthogonal spaces.

The standard space of rank m has basis e_1, f_1, ..., e_m, f_m, d with
beta(e_i, f_i) = 1 on the hyperbolic pairs, beta(d, d) = 1 and all other
basis pairings zero.  Vectors are numpy arrays of field element codes and
act as row vectors; matrices act on the right, so products compose left to
right.

Type labels (plus/minus) are always computed by witt_type, never inferred
from a scalar's square class, so the beta(d,d)=1 convention can never flip
a label silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import gf
from .gf import Field, FieldElement, FieldMismatch, is_square


class DimensionMismatch(ValueError):
    pass


class SingularVector(ValueError):
    pass


class NoMinusVector(RuntimeError):
    pass


class NotInvertible(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices over a field, stored as int16 code arrays
# ---------------------------------------------------------------------------


class Mat:
    """Matrix of field-element codes.  Row vectors act on the left: x @ M."""

    __slots__ = ("field", "a")

    def __init__(self, field, a, copy=True):
        self.field = field
        if copy:
            arr = np.array(a, dtype=np.int16)
        else:
            arr = np.asarray(a, dtype=np.int16)
        if arr.ndim != 2:
            raise ValueError("Mat is two-dimensional")
        self.a = arr
        if self.a.flags.writeable:
            self.a.flags.writeable = False

    # -- constructors

    @staticmethod
    def identity(field, n):
        return Mat(field, np.eye(n, dtype=np.int16), copy=False)

    @staticmethod
    def zeros(field, rows, cols):
        return Mat(field, np.zeros((rows, cols), dtype=np.int16), copy=False)

    @staticmethod
    def from_rows(field, rows):
        """Rows of FieldElements or ints (ints are embedded via the prime subfield)."""
        codes = [[field.element(x).code for x in row] for row in rows]
        return Mat(field, codes)

    # -- shape and access

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def entry(self, i, j):
        return self.field.from_code(int(self.a[i, j]))

    def row(self, i):
        return self.a[i].copy()

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.a.shape == other.a.shape and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.field.q, self.a.shape, self.a.tobytes()))

    def key(self):
        return self.a.tobytes()

    def __repr__(self):
        return f"Mat({self.field!r}, {self.a.tolist()})"

    # -- arithmetic

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if other.field != self.field:
                raise FieldMismatch("matrices over different fields")
            return Mat(self.field, mat_mul(self.field, self.a, other.a), copy=False)
        return NotImplemented

    def __add__(self, other):
        F = self.field
        if F.f == 1:
            return Mat(F, (self.a + other.a) % F.p, copy=False)
        return Mat(F, F.add_table[self.a, other.a], copy=False)

    def __sub__(self, other):
        F = self.field
        if F.f == 1:
            return Mat(F, (self.a - other.a) % F.p, copy=False)
        return Mat(F, F.add_table[self.a, F.neg_table[other.a]], copy=False)

    def scale(self, c):
        c = self.field.element(c).code
        F = self.field
        if F.f == 1:
            return Mat(F, (self.a * c) % F.p, copy=False)
        return Mat(F, F.mul_table[self.a, c], copy=False)

    def transpose(self):
        return Mat(self.field, self.a.T)

    def __pow__(self, n):
        if self.rows != self.cols:
            raise DimensionMismatch("powers need a square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        acc = Mat.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                acc = acc @ base
            base = base @ base
            n >>= 1
        return acc

    # -- gaussian elimination family

    def rref(self):
        """Reduced row echelon form; returns (Mat, pivot column tuple)."""
        R, piv = _rref_codes(self.field, self.a)
        return Mat(self.field, R, copy=False), piv

    def rank(self):
        return len(self.rref()[1])

    def det(self):
        F = self.field
        n = self.rows
        if n != self.cols:
            raise DimensionMismatch("determinant needs a square matrix")
        a = self.a.astype(np.int64).copy()
        det = F.one.code
        sign_flips = 0
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if a[r, col] != 0:
                    pivot = r
                    break
            if pivot is None:
                return F.zero
            if pivot != col:
                a[[col, pivot]] = a[[pivot, col]]
                sign_flips ^= 1
            pv = int(a[col, col])
            det = F.c_mul(det, pv)
            inv = F.c_inv(pv)
            for r in range(col + 1, n):
                if a[r, col] == 0:
                    continue
                factor = F.c_mul(int(a[r, col]), inv)
                a[r] = _row_sub(F, a[r], a[col], factor)
        if sign_flips:
            det = F.c_mul(det, F.c_neg(F.one.code))
        return F.from_code(det)

    def inverse(self):
        F = self.field
        n = self.rows
        if n != self.cols:
            raise DimensionMismatch("inverse needs a square matrix")
        aug = np.concatenate([self.a.astype(np.int64),
                              np.eye(n, dtype=np.int64)], axis=1)
        R, piv = _rref_codes(F, aug)
        if list(piv) != list(range(n)):
            raise NotInvertible("matrix is singular")
        return Mat(F, R[:, n:], copy=False)

    def null_rows(self):
        """Basis (as RREF Mat) of {x : M x^T = 0}, x a row vector."""
        F = self.field
        R, piv = _rref_codes(F, self.a)
        n = self.cols
        free = [j for j in range(n) if j not in piv]
        if not free:
            return Mat.zeros(F, 0, n)
        rows = []
        for j in free:
            x = np.zeros(n, dtype=np.int16)
            x[j] = F.one.code
            for r, pc in enumerate(piv):
                x[pc] = F.c_neg(int(R[r, j]))
            rows.append(x)
        ker = Mat(F, np.array(rows, dtype=np.int16), copy=False)
        return ker.rref()[0]


def _row_sub(field, row, pivot_row, factor):
    # row - factor*pivot_row on int64 code arrays
    F = field
    if F.f == 1:
        return (row - factor * pivot_row) % F.p
    scaled = F.mul_table[pivot_row.astype(np.int16), factor]
    return F.add_table[row.astype(np.int16), F.neg_table[scaled]].astype(np.int64)


def _rref_codes(field, a):
    F = field
    a = a.astype(np.int64).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = None
        for i in range(r, rows):
            if a[i, c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        inv = F.c_inv(int(a[r, c]))
        if F.f == 1:
            a[r] = (a[r] * inv) % F.p
        else:
            a[r] = F.mul_table[a[r].astype(np.int16), inv]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = _row_sub(F, a[i], a[r], int(a[i, c]))
        pivots.append(c)
        r += 1
    return a.astype(np.int16), tuple(pivots)


def mat_mul(field, A, B):
    """Code-level matrix product (also used by the engine on raw arrays)."""
    F = field
    if F.f == 1:
        return (A.astype(np.int64) @ B.astype(np.int64) % F.p).astype(np.int16)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int16)
    mul, add = F.mul_table, F.add_table
    for k in range(A.shape[1]):
        term = mul[A[:, k][:, None], B[k, :][None, :]]
        out = add[out, term]
    return out


def vec_mat(field, v, M):
    F = field
    if F.f == 1:
        return (v.astype(np.int64) @ M.astype(np.int64) % F.p).astype(np.int16)
    out = np.zeros(M.shape[1], dtype=np.int16)
    mul, add = F.mul_table, F.add_table
    for k in range(len(v)):
        out = add[out, mul[int(v[k]), M[k, :]]]
    return out


def vector(field, entries):
    return np.array([field.element(x).code for x in entries], dtype=np.int16)


# ---------------------------------------------------------------------------
# bilinear form helpers on raw (field, gram) pairs
# ---------------------------------------------------------------------------


def form_value(field, gram, u, w):
    """beta(u, w) = u . gram . w^T as a FieldElement."""
    if len(u) != gram.rows or len(w) != gram.cols:
        raise DimensionMismatch("vector length does not match the form")
    gw = vec_mat(field, w, gram.a.T)
    F = field
    if F.f == 1:
        return F.from_code(int(u.astype(np.int64) @ gw.astype(np.int64) % F.p))
    acc = 0
    for a, b in zip(u, gw):
        acc = F.c_add(acc, F.c_mul(int(a), int(b)))
    return F.from_code(acc)


def is_isometry(field, gram, g):
    return (g @ gram @ g.transpose()) == gram


def orthogonal_basis(field, gram):
    """Rows of an orthogonal basis (every vector anisotropic) for a
    nondegenerate symmetric gram; diagonalization by anisotropic peeling."""
    F = field
    n = gram.rows
    working = Mat.identity(F, n)  # rows span the current complement
    out = []
    while working.rows:
        rows = working.a
        u = None
        for i in range(rows.shape[0]):
            if form_value(F, gram, rows[i], rows[i]).code != 0:
                u = rows[i].copy()
                break
        if u is None:
            # all basis vectors singular: some e_i + e_j is anisotropic
            for i in range(rows.shape[0]):
                for j in range(i + 1, rows.shape[0]):
                    cand = F.add_table[rows[i], rows[j]] if F.f > 1 else \
                        ((rows[i] + rows[j]) % F.p).astype(np.int16)
                    if form_value(F, gram, cand, cand).code != 0:
                        u = cand
                        break
                if u is not None:
                    break
        if u is None:
            raise ValueError("form is degenerate on the remaining space")
        out.append(u)
        # project the working span onto u-perp
        projected = []
        qu = form_value(F, gram, u, u)
        for i in range(rows.shape[0]):
            c = form_value(F, gram, rows[i], u) / qu
            sub = vec_mat(F, np.array([c.code], dtype=np.int16), u[None, :])
            if F.f == 1:
                r = (rows[i] - sub[0]) % F.p
            else:
                r = F.add_table[rows[i], F.neg_table[sub[0]]]
            projected.append(r)
        reduced = Mat(F, np.array(projected, dtype=np.int16)).rref()[0]
        keep = [i for i in range(reduced.rows) if reduced.a[i].any()]
        working = Mat(F, reduced.a[keep]) if keep else Mat.zeros(F, 0, n)
    return Mat(F, np.array(out, dtype=np.int16), copy=False)


# ---------------------------------------------------------------------------
# the standard odd-dimensional space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrthSpace:
    m: int
    field: Field
    gram: Mat
    labels: tuple

    @property
    def dim(self):
        return 2 * self.m + 1

    def e(self, i):
        """Basis vector e_i, 1-indexed."""
        v = np.zeros(self.dim, dtype=np.int16)
        v[2 * (i - 1)] = 1
        return v

    def f(self, i):
        v = np.zeros(self.dim, dtype=np.int16)
        v[2 * (i - 1) + 1] = 1
        return v

    @property
    def d(self):
        v = np.zeros(self.dim, dtype=np.int16)
        v[self.dim - 1] = 1
        return v

    def vector(self, entries):
        return vector(self.field, entries)

    def __repr__(self):
        return f"OrthSpace(m={self.m}, {self.field!r})"

    def __hash__(self):
        return hash((self.m, self.field))

    def __eq__(self, other):
        return isinstance(other, OrthSpace) and self.m == other.m \
            and self.field == other.field and self.gram == other.gram


def standard_space(m, field):
    if m < 2:
        raise ValueError("standard space needs m >= 2")
    n = 2 * m + 1
    g = np.zeros((n, n), dtype=np.int16)
    one = field.one.code
    for i in range(m):
        g[2 * i, 2 * i + 1] = one
        g[2 * i + 1, 2 * i] = one
    g[n - 1, n - 1] = one
    labels = tuple(x for i in range(1, m + 1) for x in (f"e{i}", f"f{i}")) + ("d",)
    return OrthSpace(m, field, Mat(field, g, copy=False), labels)


def beta(space, u, w):
    return form_value(space.field, space.gram, u, w)


def qvalue(space, u):
    return form_value(space.field, space.gram, u, u)


def reflection(space, u):
    """Matrix of x -> x - (2 beta(x,u)/beta(u,u)) u."""
    return reflection_in(space.field, space.gram, u)


def reflection_in(field, gram, u):
    F = field
    qu = form_value(F, gram, u, u)
    if qu.code == 0:
        raise SingularVector("cannot reflect in a singular vector")
    n = gram.rows
    gu = vec_mat(F, u, gram.a.T)  # column of beta(x, u) coefficients
    coef = (F.element(2) / qu).code
    outer = np.zeros((n, n), dtype=np.int16)
    for i in range(n):
        ci = F.c_mul(int(gu[i]), coef)
        if F.f == 1:
            outer[i] = (int(ci) * u) % F.p
        else:
            outer[i] = F.mul_table[ci, u]
    return Mat(F, np.eye(n, dtype=np.int16), copy=False) - Mat(F, outer, copy=False)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


class Subspace:
    """Row span in an OrthSpace; the RREF basis is the canonical form."""

    __slots__ = ("ambient", "basis")

    def __init__(self, ambient, rows):
        self.ambient = ambient
        if isinstance(rows, Mat):
            mat = rows
        else:
            mat = Mat(ambient.field, np.array(rows, dtype=np.int16))
        R, piv = mat.rref()
        self.basis = Mat(ambient.field, R.a[: len(piv)], copy=False)

    @property
    def dim(self):
        return self.basis.rows

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient!r})"

    def induced_gram(self):
        B = self.basis
        return B @ self.ambient.gram @ B.transpose()

    def contains(self, v):
        aug = np.vstack([self.basis.a, v])
        return Mat(self.ambient.field, aug).rank() == self.dim


def span(space, *vectors):
    return Subspace(space, np.array(list(vectors), dtype=np.int16))


def perp(S):
    """All x with beta(x, s) = 0 for the basis rows s."""
    M = S.basis @ S.ambient.gram  # x in perp iff M x^T = 0
    return Subspace(S.ambient, M.null_rows())


class WittKind(Enum):
    PLUS = "plus"
    MINUS = "minus"
    ODD_DIM = "odd_dim"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class WittType:
    kind: WittKind
    radical_dim: int = 0
    witt_index: int = 0

    @property
    def is_plus(self):
        return self.kind is WittKind.PLUS

    @property
    def is_minus(self):
        return self.kind is WittKind.MINUS


def _iter_span_vectors(field, rows, batch=4096):
    """All nonzero vectors of the row span, in ascending coefficient code
    order; yields batches as (coeff_count x dim) arrays."""
    F = field
    k = rows.shape[0]
    total = F.q ** k
    start = 1
    while start < total:
        stop = min(total, start + batch)
        codes = np.arange(start, stop, dtype=np.int64)
        digits = np.zeros((len(codes), k), dtype=np.int16)
        tmp = codes.copy()
        for i in range(k):
            digits[:, i] = tmp % F.q
            tmp //= F.q
        vecs = mat_mul(F, digits, rows)
        yield vecs
        start = stop


def find_singular_vector(field, gram, rows):
    """First nonzero vector v in the row span with beta(v,v)=0, scanning in
    coefficient code order; None if the span is anisotropic."""
    F = field
    G = gram.a
    for vecs in _iter_span_vectors(F, rows):
        if F.f == 1:
            q = np.einsum("ij,jk,ik->i", vecs.astype(np.int64), G.astype(np.int64),
                          vecs.astype(np.int64)) % F.p
            hits = np.nonzero((q == 0) & vecs.any(axis=1))[0]
            if len(hits):
                return vecs[hits[0]].copy()
        else:
            for v in vecs:
                if not v.any():
                    continue
                if form_value(F, gram, v, v).code == 0:
                    return v.copy()
    return None


def witt_type(S):
    """Radical check, then Witt index by hyperbolic-pair peeling with an
    exhaustive (early-exit) singular vector search."""
    space = S.ambient
    F = space.field
    gram = space.gram
    n0 = S.dim
    rad = S.dim - S.induced_gram().rank()
    if rad:
        return WittType(WittKind.DEGENERATE, radical_dim=rad)
    rows = S.basis.a.copy()
    witt = 0
    while rows.shape[0]:
        u = find_singular_vector(F, gram, rows)
        if u is None:
            break
        # pick w in the span with beta(u, w) != 0
        w = None
        for i in range(rows.shape[0]):
            if form_value(F, gram, u, rows[i]).code != 0:
                w = rows[i].copy()
                break
        assert w is not None, "nondegenerate space: u-perp cannot contain the span"
        c = form_value(F, gram, u, w).inverse()
        w = vec_mat(F, np.array([c.code], dtype=np.int16), w[None, :])[0]
        # make w singular: w -> w - (Q(w)/2) u
        qw = form_value(F, gram, w, w)
        adj = (qw / F.element(2)).code
        if F.f == 1:
            w = (w - adj * u) % F.p
        else:
            w = F.add_table[w, F.neg_table[F.mul_table[adj, u]]]
        witt += 1
        # restrict to the perp of <u, w> inside the span
        pair = Mat(F, np.array([u, w], dtype=np.int16))
        M = pair @ space.gram  # x must satisfy M x^T = 0
        sol = M.null_rows()
        rows = _row_space_intersection(F, rows, sol.a)
    if n0 % 2 == 1:
        return WittType(WittKind.ODD_DIM, witt_index=witt)
    if witt == n0 // 2:
        return WittType(WittKind.PLUS, witt_index=witt)
    assert witt == n0 // 2 - 1, "even nondegenerate space has index n/2 or n/2-1"
    return WittType(WittKind.MINUS, witt_index=witt)


def _row_space_intersection(field, A, B):
    """Basis rows of rowspace(A) meet rowspace(B) (Zassenhaus)."""
    F = field
    n = A.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int16)
    top = np.concatenate([A, A], axis=1)
    bot = np.concatenate([B, np.zeros_like(B)], axis=1)
    M = Mat(F, np.vstack([top, bot]))
    R, piv = M.rref()
    rows = []
    for i in range(R.rows):
        left = R.a[i, :n]
        right = R.a[i, n:]
        if not left.any() and right.any():
            rows.append(right)
    if not rows:
        return np.zeros((0, n), dtype=np.int16)
    return Mat(F, np.array(rows, dtype=np.int16)).rref()[0].a.copy()


def choose_lambda(space):
    """Least lam (scanning 1, the canonical nonsquare, then the remaining
    nonzero codes) making perp(<e_1 + lam f_1>) minus type."""
    F = space.field
    ns = gf.nonsquare(F)
    order = [F.one, ns] + [F.from_code(c) for c in range(1, F.q)
                           if F.from_code(c) not in (F.one, ns)]
    e1 = space.e(1)
    f1 = space.f(1)
    for lam in order:
        v = _add_scaled(F, e1, f1, lam.code)
        wt = witt_type(perp(span(space, v)))
        if wt.is_minus:
            return lam
    raise NoMinusVector("no lambda gives a minus-type perp; gram is corrupt")


def minus_vector(space):
    """e_1 + lam f_1 with lam = choose_lambda(space)."""
    lam = choose_lambda(space)
    return _add_scaled(space.field, space.e(1), space.f(1), lam.code)


def _add_scaled(field, u, w, code):
    if field.f == 1:
        return ((u + code * w) % field.p).astype(np.int16)
    return field.add_table[u, field.mul_table[code, w]]


# ---------------------------------------------------------------------------
# reflection decomposition and the spinor norm
# ---------------------------------------------------------------------------


class IsomClass(Enum):
    IN_OMEGA = "inOmega"
    SO_NOT_OMEGA = "inSOnotOmega"
    O_NOT_SO = "inOnotSO"
    NOT_ISOMETRY = "notIsometry"


class NotIsometry(ValueError):
    pass


def reflection_decomposition(space, g):
    """Reflection vectors u_1..u_t with g = r_{u_1} ... r_{u_t} exactly
    (constructive Cartan-Dieudonne peeling along an orthogonal basis)."""
    return _reflection_decomposition_in(space.field, space.gram, g)


_ORTHO_CACHE = {}


def _ortho_basis_cached(field, gram):
    key = (field.p, field.f, field.modulus, gram.key())
    got = _ORTHO_CACHE.get(key)
    if got is None:
        got = orthogonal_basis(field, gram)
        _ORTHO_CACHE[key] = got
    return got


def _reflection_decomposition_in(field, gram, g):
    F = field
    if not is_isometry(F, gram, g):
        raise NotIsometry("matrix does not preserve the form")
    basis = _ortho_basis_cached(F, gram)
    h = g
    refs = []
    for idx in range(basis.rows):
        b = basis.a[idx]
        x = vec_mat(F, b, h.a)
        if np.array_equal(x, b):
            continue
        if F.f == 1:
            u = (x - b) % F.p
        else:
            u = F.add_table[x, F.neg_table[b]]
        if form_value(F, gram, u, u).code != 0:
            h = h @ reflection_in(F, gram, u)
            refs.append(u)
        else:
            if F.f == 1:
                w = (x + b) % F.p
            else:
                w = F.add_table[x, b]
            h = h @ reflection_in(F, gram, w) @ reflection_in(F, gram, b)
            refs.extend([w, b.copy()])
    assert h == Mat.identity(F, gram.rows), "peeling must terminate at the identity"
    refs.reverse()
    return refs


def in_omega(space, g):
    """Classify an arbitrary square matrix against O/SO/Omega of the space."""
    return in_omega_in(space.field, space.gram, g)


def in_omega_in(field, gram, g):
    F = field
    if g.rows != gram.rows or g.cols != gram.cols:
        return IsomClass.NOT_ISOMETRY
    if not is_isometry(F, gram, g):
        return IsomClass.NOT_ISOMETRY
    refs = _reflection_decomposition_in(F, gram, g)
    if len(refs) % 2 == 1:
        return IsomClass.O_NOT_SO
    norm = F.one
    for u in refs:
        norm = norm * form_value(F, gram, u, u)
    if is_square(norm):
        return IsomClass.IN_OMEGA
    return IsomClass.SO_NOT_OMEGA
