"""Matrix models of the four families over the Gaussian rationals.

Each family is realized inside a finite-dimensional matrix superalgebra
(sl(p|q) or an orthosymplectic algebra) carrying an order-2 or order-4
twisting automorphism built from signed anti-transpose block maps.  The
loop algebra is never materialized: eigencomponents of the twist are stored
with their exponent class modulo the order, and delta levels are generated
arithmetically from the class.  All arithmetic is exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .lattice import RootVec, del_vec, eps_vec, zero_vec
from .rootsys import AlgebraType, Family, Window
from .shadow import CheckItem, CheckReport


class ShapeError(ValueError):
    """A block map was applied to a block of the wrong shape."""


class SizeCapError(ValueError):
    """The requested model exceeds the configured size cap."""


class NoSuchRootError(ValueError):
    """No root vector exists at the requested weight and level."""


class GaussianRational:
    """Exact complex number a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re: object = 0, im: object = 0):
        self.re = Q(re)
        self.im = Q(im)

    @staticmethod
    def coerce(value: object) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(value)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Q, GaussianRational)):
            other = GaussianRational.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def __repr__(self) -> str:
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{self.im:+}i)"


GQ = GaussianRational
GQ_ZERO = GQ(0)
GQ_ONE = GQ(1)
GQ_I = GQ(0, 1)

Matrix = tuple[tuple[GQ, ...], ...]


def mat_build(rows: int, cols: int, fill: Callable[[int, int], GQ]) -> Matrix:
    return tuple(tuple(fill(r, c) for c in range(cols)) for r in range(rows))


def mat_zero(rows: int, cols: int) -> Matrix:
    return mat_build(rows, cols, lambda r, c: GQ_ZERO)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c: object) -> Matrix:
    cc = GQ.coerce(c)
    return tuple(tuple(x * cc for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols_b = len(b[0])
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for c in range(cols_b):
            col = bt[c]
            acc = GQ_ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def _sgn(i: int) -> int:
    return 1 if i > 0 else 0


def _sigma_factor(variant: int, r: int, s: int, k: int, l: int) -> GQ:
    """Sign/phase factor of the signed anti-transpose maps (1-based r, s)."""
    if variant == 1:
        return GQ_ONE
    if variant == 2:
        out = GQ((-1) ** (_sgn(r - (l + 1)) + (l + 1) * (1 if r == l + 1 else 0)))
        return out * (GQ_I if r == l + 1 else GQ_ONE)
    if variant == 3:
        out = GQ((-1) ** (_sgn(s - (l + 1)) + (l + 1) * (1 if s == l + 1 else 0)))
        return out * (-GQ_I if s == l + 1 else GQ_ONE)
    if variant == 4:
        sign = (-1) ** (_sgn(s - (l + 1)) + _sgn(r - (l + 1)))
        sign *= (-1) ** ((l + 1) * ((1 if r == l + 1 else 0) + (1 if s == l + 1 else 0)))
        out = GQ(sign)
        if r == l + 1:
            out = out * GQ_I
        if s == l + 1:
            out = out * (-GQ_I)
        return out
    if variant == 5:
        return GQ((-1) ** _sgn(k + 1 - r))
    if variant == 6:
        return GQ((-1) ** _sgn(k + 1 - s))
    if variant == 7:
        return GQ((-1) ** (_sgn(k + 1 - r) + _sgn(k + 1 - s)))
    raise ValueError(f"unknown variant {variant}")


_VARIANT_SHAPES = {
    2: lambda m, n, k, l: n == 2 * l + 1,
    3: lambda m, n, k, l: m == 2 * l + 1,
    4: lambda m, n, k, l: m == n == 2 * l + 1,
    5: lambda m, n, k, l: n == 2 * k,
    6: lambda m, n, k, l: m == 2 * k,
    7: lambda m, n, k, l: m == n == 2 * k,
}


def signed_antitranspose(block: Matrix, variant: int, k: int = 0, l: int = 0) -> Matrix:
    """Signed anti-transpose of an m x n block; output is n x m.

    Entry (r, s) of the image is (-1)^(r+s) * factor(r, s) * block(m+1-s, n+1-r)
    in 1-based indices; variants 2-7 differ only in the factor and constrain
    the input shape.
    """
    m = len(block)
    n = len(block[0])
    check = _VARIANT_SHAPES.get(variant)
    if check is not None and not check(m, n, k, l):
        raise ShapeError(f"variant {variant} rejects shape {(m, n)} with k={k}, l={l}")

    def fill(r0: int, c0: int) -> GQ:
        r, s = r0 + 1, c0 + 1
        sign = GQ((-1) ** (r + s))
        return sign * _sigma_factor(variant, r, s, k, l) * block[m - s][n - r]

    return mat_build(n, m, fill)


PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_MIXED = "inhomogeneous"


@dataclass(frozen=True)
class GradedMatrix:
    """Square matrix with a (p|q) block grading."""

    p: int
    q: int
    rows: Matrix

    def __post_init__(self) -> None:
        n = self.p + self.q
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError("matrix does not match the block sizes")

    @staticmethod
    def zero(p: int, q: int) -> "GradedMatrix":
        return GradedMatrix(p, q, mat_zero(p + q, p + q))

    @staticmethod
    def unit(p: int, q: int, r: int, c: int, value: object = 1) -> "GradedMatrix":
        val = GQ.coerce(value)
        return GradedMatrix(
            p, q, mat_build(p + q, p + q, lambda i, j: val if (i, j) == (r, c) else GQ_ZERO)
        )

    def _same_shape(self, other: "GradedMatrix") -> None:
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("block size mismatch")

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        self._same_shape(other)
        return GradedMatrix(self.p, self.q, mat_add(self.rows, other.rows))

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return self + other.scale(-1)

    def __neg__(self) -> "GradedMatrix":
        return self.scale(-1)

    def scale(self, c: object) -> "GradedMatrix":
        return GradedMatrix(self.p, self.q, mat_scale(self.rows, c))

    def matmul(self, other: "GradedMatrix") -> "GradedMatrix":
        self._same_shape(other)
        return GradedMatrix(self.p, self.q, mat_mul(self.rows, other.rows))

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def _block_nonzero(self) -> tuple[bool, bool]:
        diag = off = False
        for r in range(self.p + self.q):
            for c in range(self.p + self.q):
                if self.rows[r][c]:
                    if (r < self.p) == (c < self.p):
                        diag = True
                    else:
                        off = True
        return diag, off

    @property
    def parity(self) -> str:
        diag, off = self._block_nonzero()
        if diag and off:
            return PARITY_MIXED
        if off:
            return PARITY_ODD
        return PARITY_EVEN

    def even_part(self) -> "GradedMatrix":
        return GradedMatrix(self.p, self.q, mat_build(
            self.p + self.q, self.p + self.q,
            lambda r, c: self.rows[r][c] if (r < self.p) == (c < self.p) else GQ_ZERO))

    def odd_part(self) -> "GradedMatrix":
        return GradedMatrix(self.p, self.q, mat_build(
            self.p + self.q, self.p + self.q,
            lambda r, c: self.rows[r][c] if (r < self.p) != (c < self.p) else GQ_ZERO))

    def block(self, which: str) -> Matrix:
        p, q = self.p, self.q
        if which == "A":
            return tuple(row[:p] for row in self.rows[:p])
        if which == "B":
            return tuple(row[p:] for row in self.rows[:p])
        if which == "C":
            return tuple(row[:p] for row in self.rows[p:])
        if which == "D":
            return tuple(row[p:] for row in self.rows[p:])
        raise ValueError(which)

    @staticmethod
    def from_blocks(p: int, q: int, a: Matrix, b: Matrix, c: Matrix, d: Matrix,
                    ) -> "GradedMatrix":
        rows = [tuple(a[r]) + tuple(b[r]) for r in range(p)]
        rows += [tuple(c[r]) + tuple(d[r]) for r in range(q)]
        return GradedMatrix(p, q, tuple(rows))

    def trace(self) -> GQ:
        return sum((self.rows[i][i] for i in range(self.p + self.q)), GQ_ZERO)

    def supertrace(self) -> GQ:
        top = sum((self.rows[i][i] for i in range(self.p)), GQ_ZERO)
        bottom = sum((self.rows[i][i] for i in range(self.p, self.p + self.q)), GQ_ZERO)
        return top - bottom

    def entries(self) -> tuple[GQ, ...]:
        return tuple(x for row in self.rows for x in row)


def super_bracket(x: GradedMatrix, y: GradedMatrix) -> GradedMatrix:
    """Super-commutator, extended bilinearly to inhomogeneous arguments."""
    total = GradedMatrix.zero(x.p, x.q)
    for xp in (x.even_part(), x.odd_part()):
        if xp.is_zero():
            continue
        for yp in (y.even_part(), y.odd_part()):
            if yp.is_zero():
                continue
            sign = -1 if (xp.parity == PARITY_ODD and yp.parity == PARITY_ODD) else 1
            total = total + xp.matmul(yp) - yp.matmul(xp).scale(sign)
    return total


# -- the four matrix models ----------------------------------------------------


@dataclass(frozen=True)
class BasisElement:
    name: str
    matrix: GradedMatrix
    parity: str
    weight: RootVec  # finite part only (level slot unused)


@dataclass(frozen=True)
class MatrixModel:
    """Finite model algebra with its twist and weight data."""

    type: AlgebraType
    p: int
    q: int
    order: int
    basis: tuple[BasisElement, ...]
    cartan_pairs: tuple[GradedMatrix, ...]  # fixed-Cartan basis dual to eps/del coords
    identity_line: Optional[GradedMatrix]  # present exactly when p == q

    @property
    def dim(self) -> int:
        return len(self.basis)

    def zeta(self) -> GQ:
        return GQ_I if self.order == 4 else GQ(-1)

    def twist(self, x: GradedMatrix) -> GradedMatrix:
        return _twist(self.type, x)

    def contains(self, x: GradedMatrix) -> bool:
        return _model_contains(self.type, x)

    def random_element(self, rng: random.Random, parity: str) -> GradedMatrix:
        out = GradedMatrix.zero(self.p, self.q)
        for elem in self.basis:
            if elem.parity != parity:
                continue
            c = rng.randint(-3, 3)
            if c:
                out = out + elem.matrix.scale(c)
        return out


def _twist(T: AlgebraType, x: GradedMatrix) -> GradedMatrix:
    k, l = T.k, T.l
    fam = T.family
    if fam is Family.D_TW2:
        h = _d_conjugator(k, l)
        return h.matmul(x).matmul(h)
    a, b, c, d = (x.block(w) for w in "ABCD")
    if fam is Family.A2K_2LM1_TW2:
        na = mat_scale(signed_antitranspose(a, 1), -1)
        nb = signed_antitranspose(c, 1)
        nc = mat_scale(signed_antitranspose(b, 1), -1)
        nd = mat_scale(signed_antitranspose(d, 1), -1)
    elif fam is Family.A2KM1_2LM1_TW2:
        na = mat_scale(signed_antitranspose(a, 7, k=k), -1)
        nb = signed_antitranspose(c, 5, k=k)
        nc = mat_scale(signed_antitranspose(b, 6, k=k), -1)
        nd = mat_scale(signed_antitranspose(d, 1), -1)
    elif fam is Family.A2K_2L_TW4:
        na = mat_scale(signed_antitranspose(a, 1), -1)
        nb = signed_antitranspose(c, 3, l=l)
        nc = mat_scale(signed_antitranspose(b, 2, l=l), -1)
        nd = mat_scale(signed_antitranspose(d, 4, l=l), -1)
    else:  # pragma: no cover
        raise ValueError(fam)
    return GradedMatrix.from_blocks(x.p, x.q, na, nb, nc, nd)


@lru_cache(maxsize=None)
def _d_conjugator(k: int, l: int) -> GradedMatrix:
    p, q = 2 * k + 2, 2 * l
    g = [[GQ_ZERO] * (p + q) for _ in range(p + q)]
    for i in range(p):
        g[i][i] = GQ_ONE
    # swap the (k+1)-st unbarred and barred even coordinates
    g[k][k] = GQ_ZERO
    g[2 * k + 1][2 * k + 1] = GQ_ZERO
    g[k][2 * k + 1] = GQ_ONE
    g[2 * k + 1][k] = GQ_ONE
    for j in range(q):
        g[p + j][p + j] = GQ_ONE
    return GradedMatrix(p, q, tuple(tuple(row) for row in g))


def _model_sizes(T: AlgebraType) -> tuple[int, int]:
    k, l = T.k, T.l
    fam = T.family
    if fam is Family.A2K_2LM1_TW2:
        return 2 * k + 1, 2 * l
    if fam is Family.A2KM1_2LM1_TW2:
        return 2 * k, 2 * l
    if fam is Family.A2K_2L_TW4:
        return 2 * k + 1, 2 * l + 1
    return 2 * k + 2, 2 * l


def _sl_index_weight(T: AlgebraType, idx: int) -> RootVec:
    """Restricted weight of the idx-th coordinate line (0-based), A-families."""
    k, l = T.k, T.l
    p, q = _model_sizes(T)
    if idx < p:
        a = idx + 1
        mirror = p + 1 - a
        if a <= k:
            return eps_vec(a, k, l)
        if mirror <= k:
            return eps_vec(mirror, k, l, -1)
        return zero_vec(k, l)
    t = idx - p + 1
    mirror = q + 1 - t
    if t <= l:
        return del_vec(t, k, l)
    if mirror <= l:
        return del_vec(mirror, k, l, -1)
    return zero_vec(k, l)


def _d_index_weight(T: AlgebraType, idx: int) -> RootVec:
    k, l = T.k, T.l
    p = 2 * k + 2
    if idx < p:
        a = idx + 1
        if a <= k:
            return eps_vec(a, k, l)
        if k + 2 <= a <= 2 * k + 1:
            return eps_vec(a - (k + 1), k, l, -1)
        return zero_vec(k, l)  # the two swapped coordinates
    t = idx - p + 1
    if t <= l:
        return del_vec(t, k, l)
    return del_vec(t - l, k, l, -1)


def _index_weight(T: AlgebraType, idx: int) -> RootVec:
    if T.family is Family.D_TW2:
        return _d_index_weight(T, idx)
    return _sl_index_weight(T, idx)


def _sl_basis(T: AlgebraType) -> Iterator[BasisElement]:
    p, q = _model_sizes(T)
    n = p + q
    for r in range(n):
        for c in range(n):
            if r == c:
                continue
            par = PARITY_EVEN if (r < p) == (c < p) else PARITY_ODD
            weight = _index_weight(T, r) - _index_weight(T, c)
            yield BasisElement(f"E{r + 1},{c + 1}", GradedMatrix.unit(p, q, r, c), par, weight)
    zero_w = zero_vec(T.k, T.l)
    for i in range(p - 1):
        mat = GradedMatrix.unit(p, q, i, i) - GradedMatrix.unit(p, q, i + 1, i + 1)
        yield BasisElement(f"h{i + 1}", mat, PARITY_EVEN, zero_w)
    for j in range(q - 1):
        mat = GradedMatrix.unit(p, q, p + j, p + j) - GradedMatrix.unit(p, q, p + j + 1, p + j + 1)
        yield BasisElement(f"d{j + 1}", mat, PARITY_EVEN, zero_w)
    # supertraceless diagonal complement: proportional to the identity when
    # p == q, and to the central element diag(I_p/p, I_q/q) otherwise
    rows = mat_build(n, n, lambda r, c: GQ(Q(1, p) if r == c and r < p else
                                           Q(1, q) if r == c else 0))
    yield BasisElement("iota", GradedMatrix(p, q, rows), PARITY_EVEN, zero_w)


def _osp_basis(T: AlgebraType) -> Iterator[BasisElement]:
    k, l = T.k, T.l
    p, q = 2 * k + 2, 2 * l
    kk = k + 1
    o = p
    zero_w = zero_vec(k, l)

    def unit(r: int, c: int) -> GradedMatrix:
        return GradedMatrix.unit(p, q, r, c)

    def w(idx: int) -> RootVec:
        return _d_index_weight(T, idx)

    for i in range(kk):
        for j in range(kk):
            mat = unit(i, j) - unit(kk + j, kk + i)
            yield BasisElement(f"x{i + 1},{j + 1}", mat, PARITY_EVEN, w(i) - w(j))
    for i, j in itertools.combinations(range(kk), 2):
        mat = unit(i, kk + j) - unit(j, kk + i)
        yield BasisElement(f"y{i + 1},{j + 1}", mat, PARITY_EVEN, w(i) + w(j))
        mat = unit(kk + i, j) - unit(kk + j, i)
        yield BasisElement(f"z{i + 1},{j + 1}", mat, PARITY_EVEN, -w(i) - w(j))
    for a in range(l):
        for b in range(l):
            mat = unit(o + a, o + b) - unit(o + l + b, o + l + a)
            yield BasisElement(f"r{a + 1},{b + 1}", mat, PARITY_EVEN, w(o + a) - w(o + b))
    for a in range(l):
        for b in range(a, l):
            mat = unit(o + a, o + l + b) + (unit(o + b, o + l + a) if a != b
                                            else GradedMatrix.zero(p, q))
            yield BasisElement(f"s{a + 1},{b + 1}", mat, PARITY_EVEN, w(o + a) + w(o + b))
            mat = unit(o + l + a, o + b) + (unit(o + l + b, o + a) if a != b
                                            else GradedMatrix.zero(p, q))
            yield BasisElement(f"u{a + 1},{b + 1}", mat, PARITY_EVEN, -w(o + a) - w(o + b))
    for i in range(kk):
        for a in range(l):
            mat = unit(i, o + a) + unit(o + l + a, kk + i)
            yield BasisElement(f"m{i + 1},{a + 1}", mat, PARITY_ODD, w(i) + w(o + l + a))
            mat = unit(i, o + l + a) - unit(o + a, kk + i)
            yield BasisElement(f"n{i + 1},{a + 1}", mat, PARITY_ODD, w(i) + w(o + a))
            mat = unit(kk + i, o + a) + unit(o + l + a, i)
            yield BasisElement(f"p{i + 1},{a + 1}", mat, PARITY_ODD, -w(i) - w(o + a))
            mat = unit(kk + i, o + l + a) - unit(o + a, i)
            yield BasisElement(f"q{i + 1},{a + 1}", mat, PARITY_ODD, -w(i) + w(o + a))


def _model_contains(T: AlgebraType, x: GradedMatrix) -> bool:
    """Membership of a graded matrix in the model algebra."""
    if T.family is not Family.D_TW2:
        return x.supertrace() == GQ_ZERO
    k, l = T.k, T.l
    kk = k + 1
    a, b, c, d = (x.block(w) for w in "ABCD")

    def sub(mat: Matrix, r0: int, c0: int, rows: int, cols: int) -> Matrix:
        return tuple(tuple(mat[r0 + r][c0 + c] for c in range(cols)) for r in range(rows))

    def tr(mat: Matrix) -> Matrix:
        return tuple(zip(*mat))

    def neg(mat: Matrix) -> Matrix:
        return mat_scale(mat, -1)

    xx = sub(a, 0, 0, kk, kk)
    yy = sub(a, 0, kk, kk, kk)
    zz = sub(a, kk, 0, kk, kk)
    if sub(a, kk, kk, kk, kk) != neg(tr(xx)):
        return False
    if yy != neg(tr(yy)) or zz != neg(tr(zz)):
        return False
    rr = sub(d, 0, 0, l, l)
    ss = sub(d, 0, l, l, l)
    uu = sub(d, l, 0, l, l)
    if sub(d, l, l, l, l) != neg(tr(rr)):
        return False
    if ss != tr(ss) or uu != tr(uu):
        return False
    mm = sub(b, 0, 0, kk, l)
    nn = sub(b, 0, l, kk, l)
    pp = sub(b, kk, 0, kk, l)
    qq = sub(b, kk, l, kk, l)
    return (sub(c, 0, 0, l, kk) == neg(tr(qq)) and sub(c, 0, kk, l, kk) == neg(tr(nn))
            and sub(c, l, 0, l, kk) == tr(pp) and sub(c, l, kk, l, kk) == tr(mm))


DEFAULT_RANK_CAP = 4


@lru_cache(maxsize=None)
def matrix_model(T: AlgebraType, rank_cap: int = DEFAULT_RANK_CAP) -> MatrixModel:
    """Build the finite matrix model for a type (sizes capped by k + l)."""
    if T.k + T.l > rank_cap:
        raise SizeCapError(f"(k, l) = {(T.k, T.l)} exceeds the cap k + l <= {rank_cap}")
    p, q = _model_sizes(T)
    fam = T.family
    if fam is Family.D_TW2:
        basis = tuple(_osp_basis(T))
        identity = None
    else:
        basis = tuple(_sl_basis(T))
        identity = basis[-1].matrix if p == q else None
    order = 4 if fam is Family.A2K_2L_TW4 else 2
    cartan = _cartan_pairs(T, p, q)
    return MatrixModel(T, p, q, order, basis, cartan, identity)


def _cartan_pairs(T: AlgebraType, p: int, q: int) -> tuple[GradedMatrix, ...]:
    """Fixed-Cartan basis paired with the eps/del coordinates.

    The matrix in slot i satisfies weight(x)(slot i) = eps_i coefficient of
    the restricted weight of x, and similarly for the del slots.
    """
    k, l = T.k, T.l
    out = []
    if T.family is Family.D_TW2:
        for i in range(k):
            out.append(GradedMatrix.unit(p, q, i, i) - GradedMatrix.unit(p, q, k + 1 + i, k + 1 + i))
        for j in range(l):
            out.append(GradedMatrix.unit(p, q, p + j, p + j)
                       - GradedMatrix.unit(p, q, p + l + j, p + l + j))
        return tuple(out)
    for i in range(k):
        mirror = p - 1 - i
        out.append(GradedMatrix.unit(p, q, i, i) - GradedMatrix.unit(p, q, mirror, mirror))
    for j in range(l):
        mirror = q - 1 - j
        out.append(GradedMatrix.unit(p, q, p + j, p + j)
                   - GradedMatrix.unit(p, q, p + mirror, p + mirror))
    return tuple(out)


# -- eigencomponents of the twist ----------------------------------------------


@dataclass(frozen=True)
class EigenComponent:
    """One (exponent class, parity, weight) slice of the model algebra."""

    k_mod_n: int
    parity: str
    weight: RootVec  # finite part; admissible levels are k_mod_n modulo the order
    basis: tuple[GradedMatrix, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.basis)


def _gq_nullspace(rows: list[list[GQ]]) -> list[list[GQ]]:
    """Basis of the right nullspace of a matrix over the Gaussian rationals."""
    if not rows:
        return []
    ncols = len(rows[0])
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = GQ_ONE / mat[rank][col]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                fac = mat[r][col]
                mat[r] = [a - fac * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        vec = [GQ_ZERO] * ncols
        vec[fc] = GQ_ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        out.append(vec)
    return out


def _coords_in(span: Sequence[GradedMatrix], target: GradedMatrix) -> Optional[list[GQ]]:
    """Coordinates of target in the span, or None when it lies outside."""
    cols = [m.entries() for m in span]
    rhs = target.entries()
    rows = [[cols[c][r] for c in range(len(span))] + [rhs[r]] for r in range(len(rhs))]
    n = len(span)
    rank = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = GQ_ONE / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                fac = rows[r][col]
                rows[r] = [a - fac * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    if rank < n:
        raise ValueError("span is linearly dependent")
    for r in range(rank, len(rows)):
        if rows[r][n]:
            return None
    sol = [GQ_ZERO] * n
    for r, col in enumerate(pivots):
        sol[col] = rows[r][n]
    return sol


@lru_cache(maxsize=None)
def eigen_decompose(T: AlgebraType) -> tuple[EigenComponent, ...]:
    """Exact eigencomponent decomposition of the model under its twist.

    Basis elements are grouped by restricted weight and parity (the twist
    preserves both), and each group is split into exact eigenspaces of the
    twist for the powers of the primitive root of unity.
    """
    model = matrix_model(T)
    groups: dict[tuple[RootVec, str], list[GradedMatrix]] = {}
    for elem in model.basis:
        groups.setdefault((elem.weight, elem.parity), []).append(elem.matrix)
    zeta = model.zeta()
    out: list[EigenComponent] = []
    for (weight, par), mats in sorted(groups.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])):
        images = [model.twist(m) for m in mats]
        coord_rows = []
        for img in images:
            coords = _coords_in(mats, img)
            if coords is None:
                raise RuntimeError("twist does not preserve a weight/parity group")
            coord_rows.append(coords)
        # columns of M give twist coordinates: twist(m_j) = sum_i M[i][j] m_i
        m_mat = [[coord_rows[j][i] for j in range(len(mats))] for i in range(len(mats))]
        power = GQ_ONE
        for c in range(model.order):
            shifted = [[m_mat[r][col] - (power if r == col else GQ_ZERO)
                        for col in range(len(mats))] for r in range(len(mats))]
            for null_vec in _gq_nullspace(shifted):
                combo = GradedMatrix.zero(model.p, model.q)
                for coeff, mat in zip(null_vec, mats):
                    if coeff:
                        combo = combo + mat.scale(coeff)
                out.append(EigenComponent(c, par, weight, (combo,)))
            power = power * zeta
    # merge single vectors into per-(class, parity, weight) components
    merged: dict[tuple[int, str, RootVec], list[GradedMatrix]] = {}
    for comp in out:
        merged.setdefault((comp.k_mod_n, comp.parity, comp.weight), []).extend(comp.basis)
    final = [EigenComponent(c, par, w, tuple(mats))
             for (c, par, w), mats in sorted(
                 merged.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2].sort_key()))]
    return tuple(final)


@dataclass(frozen=True)
class WeightRecord:
    vec: RootVec
    parity: str
    multiplicity: int


def cartan_weights(T: AlgebraType, window: Window) -> tuple[WeightRecord, ...]:
    """All (weight, level) pairs of the loop model within the window.

    The delta coordinate of a weight runs over the exponent class of its
    eigencomponent modulo the twist order.
    """
    model = matrix_model(T)
    records: dict[tuple[RootVec, str], int] = {}
    for comp in eigen_decompose(T):
        for d in window.levels():
            if d % model.order == comp.k_mod_n:
                vec = RootVec(d, comp.weight.e, comp.weight.f)
                key = (vec, comp.parity)
                records[key] = records.get(key, 0) + comp.multiplicity
    out = [WeightRecord(vec, par, mult) for (vec, par), mult in records.items()]
    out.sort(key=lambda rec: (rec.vec.sort_key(), rec.parity))
    return tuple(out)


# -- verification utilities ----------------------------------------------------


def verify_automorphism(T: AlgebraType, trials: int = 200, seed: int = 0) -> CheckReport:
    """Exact bracket-automorphism, order and Cartan-fixing checks for the twist."""
    model = matrix_model(T)
    rng = random.Random(seed)
    bracket_bad: list[str] = []
    for trial in range(trials):
        x = model.random_element(rng, rng.choice((PARITY_EVEN, PARITY_ODD)))
        y = model.random_element(rng, rng.choice((PARITY_EVEN, PARITY_ODD)))
        lhs = model.twist(super_bracket(x, y))
        rhs = super_bracket(model.twist(x), model.twist(y))
        if not (lhs - rhs).is_zero():
            bracket_bad.append(f"trial {trial}")
    order_ok = True
    half_moves = False
    for elem in model.basis:
        cur = elem.matrix
        for _ in range(model.order):
            cur = model.twist(cur)
        if not (cur - elem.matrix).is_zero():
            order_ok = False
        half = elem.matrix
        for _ in range(model.order // 2):
            half = model.twist(half)
        if not (half - elem.matrix).is_zero():
            half_moves = True
    cartan_bad = [str(idx) for idx, h in enumerate(model.cartan_pairs)
                  if not (model.twist(h) - h).is_zero()]
    return CheckReport((
        CheckItem("bracket-automorphism", not bracket_bad, tuple(bracket_bad[:5])),
        CheckItem("twist-order", order_ok and half_moves,
                  () if order_ok and half_moves else ("order mismatch",)),
        CheckItem("fixed-cartan", not cartan_bad, tuple(cartan_bad[:5])),
    ))


def _b_table(n_max: int) -> dict[tuple[int, int], int]:
    table: dict[tuple[int, int], int] = {(0, 0): 1}
    for n in range(1, n_max + 1):
        table[(n, 0)] = 1
        table[(n, 2 * n)] = 1
        for i in range(1, n):
            table[(n, 2 * i)] = table[(n - 1, 2 * i)] + table[(n - 1, 2 * i - 2)]
    return table


def expansion_coefficients(n: int) -> tuple[int, ...]:
    """Row n of the even-power expansion coefficients (b_0, b_2, ..., b_2n)."""
    table = _b_table(n)
    return tuple(table[(n, 2 * i)] for i in range(n + 1))


def verify_nilpot_identity(x: GradedMatrix, y: GradedMatrix, n_max: int) -> CheckReport:
    """Check the odd-element reordering expansions and the even binomial law.

    x must be homogeneous and y odd homogeneous; products are taken in the
    matrix algebra itself, acting as its own representation.
    """
    if x.parity == PARITY_MIXED or y.parity != PARITY_ODD:
        raise ValueError("need homogeneous x and odd homogeneous y")
    table = _b_table(n_max)
    x_sign = -1 if x.parity == PARITY_ODD else 1

    identity = GradedMatrix(x.p, x.q, mat_build(
        x.p + x.q, x.p + x.q, lambda r, c: GQ_ONE if r == c else GQ_ZERO))
    y_pows = [identity]
    for _ in range(2 * n_max + 1):
        y_pows.append(y_pows[-1].matmul(y))
    ad_iter = [x]
    for _ in range(2 * n_max + 1):
        ad_iter.append(super_bracket(y, ad_iter[-1]))

    items: list[CheckItem] = []
    for n in range(1, n_max + 1):
        lhs = y_pows[2 * n].matmul(x)
        rhs = GradedMatrix.zero(x.p, x.q)
        for i in range(n + 1):
            rhs = rhs + ad_iter[2 * i].matmul(y_pows[2 * n - 2 * i]).scale(table[(n, 2 * i)])
        items.append(CheckItem(f"even-power-{n}", (lhs - rhs).is_zero()))

        lhs = y_pows[2 * n + 1].matmul(x)
        rhs = GradedMatrix.zero(x.p, x.q)
        for i in range(n + 1):
            term = ad_iter[2 * i].matmul(y_pows[2 * n + 1 - 2 * i]).scale(x_sign)
            term = term + ad_iter[2 * i + 1].matmul(y_pows[2 * n - 2 * i])
            rhs = rhs + term.scale(table[(n, 2 * i)])
        items.append(CheckItem(f"odd-power-{n}", (lhs - rhs).is_zero()))

    return CheckReport(tuple(items))


def verify_even_binomial(x: GradedMatrix, y: GradedMatrix, n_max: int) -> CheckReport:
    """Binomial reordering law for even y (plain commutators)."""
    if y.parity != PARITY_EVEN or x.parity == PARITY_MIXED:
        raise ValueError("need homogeneous x and even homogeneous y")
    from math import comb

    identity = GradedMatrix(x.p, x.q, mat_build(
        x.p + x.q, x.p + x.q, lambda r, c: GQ_ONE if r == c else GQ_ZERO))
    y_pows = [identity]
    for _ in range(n_max):
        y_pows.append(y_pows[-1].matmul(y))
    items = []
    for n in range(1, n_max + 1):
        lhs = y_pows[n].matmul(x)
        rhs = GradedMatrix.zero(x.p, x.q)
        cur = x
        for i in range(n + 1):
            rhs = rhs + cur.matmul(y_pows[n - i]).scale(comb(n, i))
            cur = super_bracket(y, cur)
        items.append(CheckItem(f"binomial-{n}", (lhs - rhs).is_zero()))
    return CheckReport(tuple(items))


def ladder_scalar(m: int, nu_h: Q) -> Q:
    """Scalar by which x^m y^m acts on a top vector killed by x (odd pair)."""
    if m < 1:
        raise ValueError("m must be positive")
    nu_h = Q(nu_h)
    n, odd = divmod(m, 2)
    out = Q(1)
    for i in range(n):
        out *= -2 * (n - i)
    start = 0 if odd else 1
    for i in range(start, n + 1):
        out *= nu_h - 2 * (n - i)
    return out


# -- loop elements (for adjoint checks and sl2 triples) -------------------------


@dataclass(frozen=True)
class LoopElement:
    """Finite sum of matrix coefficients with formal loop exponents."""

    model: MatrixModel
    terms: tuple[tuple[int, GradedMatrix], ...]  # (exponent, coefficient)

    @staticmethod
    def single(model: MatrixModel, exponent: int, mat: GradedMatrix) -> "LoopElement":
        return LoopElement(model, ((exponent, mat),))

    def is_zero(self) -> bool:
        return all(mat.is_zero() for _, mat in self.terms)

    def scale(self, c: object) -> "LoopElement":
        return LoopElement(self.model, tuple((e, m.scale(c)) for e, m in self.terms))

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        merged: dict[int, GradedMatrix] = {e: m for e, m in self.terms}
        for e, m in other.terms:
            merged[e] = merged.get(e, GradedMatrix.zero(self.model.p, self.model.q)) - m
        return LoopElement(self.model, tuple(sorted(merged.items())))

    def bracket(self, other: "LoopElement") -> "LoopElement":
        merged: dict[int, GradedMatrix] = {}
        for e1, m1 in self.terms:
            for e2, m2 in other.terms:
                val = super_bracket(m1, m2)
                key = e1 + e2
                merged[key] = merged.get(key, GradedMatrix.zero(self.model.p, self.model.q)) + val
        return LoopElement(self.model, tuple(sorted(merged.items())))


def _component(T: AlgebraType, weight: RootVec, par: str, cls: int) -> Optional[EigenComponent]:
    model = matrix_model(T)
    for comp in eigen_decompose(T):
        if comp.weight == weight and comp.parity == par and comp.k_mod_n == cls % model.order:
            return comp
    return None


def sl2_triple(T: AlgebraType, alpha: RootVec, level: int,
               ) -> tuple[LoopElement, LoopElement, LoopElement]:
    """An sl2 triple (e, f, h) realizing a real even root at a loop level."""
    model = matrix_model(T)
    finite = alpha.finite_part()
    plus = _component(T, finite, PARITY_EVEN, level)
    minus = _component(T, -finite, PARITY_EVEN, -level)
    if plus is None or minus is None or not plus.basis or not minus.basis:
        raise NoSuchRootError(f"no even root vectors for {alpha} at level {level}")
    e = LoopElement.single(model, level, plus.basis[0])
    f = LoopElement.single(model, -level, minus.basis[0])
    h = e.bracket(f)
    he = h.bracket(e)
    coeff = _loop_ratio(he, e)
    if coeff is None or coeff == GQ_ZERO:
        raise NoSuchRootError(f"degenerate pairing for {alpha} at level {level}")
    f = f.scale(GQ(2) / coeff)
    h = e.bracket(f)
    return e, f, h


def _loop_ratio(num: LoopElement, den: LoopElement) -> Optional[GQ]:
    """The scalar c with num = c * den, if one exists."""
    ratio: Optional[GQ] = None
    dmap = {e: m for e, m in den.terms}
    for e, m in num.terms:
        base = dmap.get(e)
        for r in range(m.p + m.q):
            for c in range(m.p + m.q):
                val = m.rows[r][c]
                ref = base.rows[r][c] if base is not None else GQ_ZERO
                if not ref:
                    if val:
                        return None
                    continue
                cur = val / ref
                if ratio is None:
                    ratio = cur
                elif cur != ratio:
                    return None
    for e, m in den.terms:
        if e not in {ee for ee, _ in num.terms} and not m.is_zero():
            if ratio not in (None, GQ_ZERO):
                return None
    return GQ_ZERO if ratio is None else ratio


def verify_ladder_adjoint(T: AlgebraType, m_max: int = 3) -> CheckReport:
    """Adjoint-representation check of the ladder scalar on an odd real pair.

    Locates an odd pair (x, y) with h = [x, y] normalized so the pair's root
    takes value 2 on h, takes w = [x, x] (killed by x, of weight value 4),
    and verifies x^m y^m w = ladder_scalar(m, 4) * w for m <= m_max.
    """
    model = matrix_model(T)
    quintuple = _find_odd_real_pair(T)
    if quintuple is None:
        return CheckReport((CheckItem("odd-real-pair", False, ("none found",)),))
    x, y, h = quintuple
    w = x.bracket(x)
    items = [CheckItem("squared-raise-nonzero", not w.is_zero())]
    items.append(CheckItem("top-vector", x.bracket(w).is_zero()))
    hw = h.bracket(w)
    items.append(CheckItem("weight-value-4", _loop_ratio(hw, w) == GQ(4)))
    for m in range(1, m_max + 1):
        cur = w
        for _ in range(m):
            cur = y.bracket(cur)
        for _ in range(m):
            cur = x.bracket(cur)
        expected = ladder_scalar(m, Q(4))
        items.append(CheckItem(f"ladder-{m}", _loop_ratio(cur, w) == GQ(expected)))
    return CheckReport(tuple(items))


def _find_odd_real_pair(T: AlgebraType,
                        ) -> Optional[tuple[LoopElement, LoopElement, LoopElement]]:
    """An odd pair (x, y, h=[x,y]) with [x,x] nonzero and root value 2 on h."""
    model = matrix_model(T)
    for comp in eigen_decompose(T):
        if comp.parity != PARITY_ODD or comp.weight.is_zero():
            continue
        u = comp.basis[0]
        if super_bracket(u, u).is_zero():
            continue
        minus = _component(T, -comp.weight, PARITY_ODD, -comp.k_mod_n)
        if minus is None or not minus.basis:
            continue
        x = LoopElement.single(model, comp.k_mod_n, u)
        y = LoopElement.single(model, -comp.k_mod_n, minus.basis[0])
        h = x.bracket(y)
        hx = h.bracket(x)
        coeff = _loop_ratio(hx, x)
        if coeff is None or coeff == GQ_ZERO:
            continue
        y = y.scale(GQ(2) / coeff)
        h = x.bracket(y)
        return x, y, h
    return None
