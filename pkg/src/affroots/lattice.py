"""Weight-lattice arithmetic: vectors, the bilinear form, classification, reflections.

Every quantity is exact.  Lattice vectors have integer coordinates in the
basis (delta; eps_1..eps_k; del_1..del_l) and functionals take rational
values; no floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from .rootsys import RootSystemView


class AmbientMismatchError(ValueError):
    """Two vectors (or a functional and a vector) live in different ambients."""


class NotARootError(ValueError):
    """A vector that was required to be a root (or zero) is neither."""


class IsotropicReflectionError(ValueError):
    """Reflection through an isotropic (self-orthogonal) vector is undefined."""


@dataclass(frozen=True)
class RootVec:
    """Integer vector d*delta + sum(e_i eps_i) + sum(f_j del_j)."""

    d: int
    e: tuple[int, ...]
    f: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.e)

    @property
    def l(self) -> int:
        return len(self.f)

    @property
    def ambient(self) -> tuple[int, int]:
        return (len(self.e), len(self.f))

    def is_zero(self) -> bool:
        return self.d == 0 and not any(self.e) and not any(self.f)

    def is_delta_multiple(self) -> bool:
        """True when the eps/del part vanishes (includes the zero vector)."""
        return not any(self.e) and not any(self.f)

    def finite_part(self) -> RootVec:
        return RootVec(0, self.e, self.f)

    def __add__(self, other: RootVec) -> RootVec:
        _check_ambient(self, other)
        return RootVec(
            self.d + other.d,
            tuple(a + b for a, b in zip(self.e, other.e)),
            tuple(a + b for a, b in zip(self.f, other.f)),
        )

    def __sub__(self, other: RootVec) -> RootVec:
        return self + (-other)

    def __neg__(self) -> RootVec:
        return RootVec(-self.d, tuple(-a for a in self.e), tuple(-a for a in self.f))

    def __mul__(self, c: int) -> RootVec:
        if not isinstance(c, int):
            return NotImplemented
        return RootVec(c * self.d, tuple(c * a for a in self.e), tuple(c * a for a in self.f))

    __rmul__ = __mul__

    def sort_key(self) -> tuple:
        return (self.d, self.e, self.f)

    def coords(self) -> tuple[int, ...]:
        return (self.d, *self.e, *self.f)

    def __repr__(self) -> str:  # pragma: no cover
        return f"RootVec({self.d}, {self.e}, {self.f})"

    def __str__(self) -> str:
        terms = []
        if self.d:
            terms.append(f"{self.d:+d}d")
        for i, c in enumerate(self.e):
            if c:
                terms.append(f"{c:+d}e{i + 1}")
        for j, c in enumerate(self.f):
            if c:
                terms.append(f"{c:+d}f{j + 1}")
        if not terms:
            return "0"
        joined = "".join(terms)
        return joined[1:] if joined.startswith("+") else joined


def zero_vec(k: int, l: int) -> RootVec:
    return RootVec(0, (0,) * k, (0,) * l)


def delta_vec(k: int, l: int, d: int = 1) -> RootVec:
    return RootVec(d, (0,) * k, (0,) * l)


def eps_vec(i: int, k: int, l: int, c: int = 1) -> RootVec:
    """c * eps_i (1-based index)."""
    e = [0] * k
    e[i - 1] = c
    return RootVec(0, tuple(e), (0,) * l)


def del_vec(j: int, k: int, l: int, c: int = 1) -> RootVec:
    """c * del_j (1-based index)."""
    f = [0] * l
    f[j - 1] = c
    return RootVec(0, (0,) * k, tuple(f))


def _check_ambient(x: RootVec, y: RootVec) -> None:
    if x.ambient != y.ambient:
        raise AmbientMismatchError(f"ambient mismatch: {x.ambient} vs {y.ambient}")


def bilinear(x: RootVec, y: RootVec) -> int:
    """Symmetric bilinear form: eps_i orthonormal, del_j anti-normal, delta isotropic.

    Normalization: (eps_i, eps_j) = delta_ij, (del_p, del_q) = -delta_pq,
    (eps_i, del_p) = 0 and (delta, anything) = 0.  Exact integer output.
    """
    _check_ambient(x, y)
    acc = 0
    for a, b in zip(x.e, y.e):
        acc += a * b
    for a, b in zip(x.f, y.f):
        acc -= a * b
    return acc


class RootClass:
    """Classification tags for lattice vectors relative to a root system."""

    ZERO = "zero"
    REAL = "re"
    IMAGINARY = "im"
    NONSINGULAR = "ns"


def classify(x: RootVec, roots: "RootSystemView") -> str:
    """Classify x as zero/real/imaginary/nonsingular within the given root system.

    Real means (x, x) != 0; imaginary means orthogonal to a spanning set of
    the system; nonsingular is the remaining case.  Zero is reported as its
    own tag.  Raises NotARootError when x is neither a root nor zero.
    """
    if x.is_zero():
        return RootClass.ZERO
    if not roots.contains_vec(x):
        raise NotARootError(f"{x} is not a root of {roots.type}")
    if bilinear(x, x) != 0:
        return RootClass.REAL
    if all(bilinear(x, s) == 0 for s in roots.spanning_set()):
        return RootClass.IMAGINARY
    return RootClass.NONSINGULAR


def reflect(lam: RootVec, alpha: RootVec) -> RootVec:
    """Reflect lam through the hyperplane orthogonal to a non-isotropic alpha."""
    nn = bilinear(alpha, alpha)
    if nn == 0:
        raise IsotropicReflectionError(f"cannot reflect through isotropic {alpha}")
    num = 2 * bilinear(lam, alpha)
    if num % nn != 0:
        raise ValueError(f"non-integral reflection coefficient for {lam} through {alpha}")
    return lam - (num // nn) * alpha


@dataclass(frozen=True)
class RationalFunctional:
    """Rational-valued linear functional z_d*delta^* + sum z_e[i]*eps_i^* + sum z_f[j]*del_j^*."""

    z_d: Q
    z_e: tuple[Q, ...]
    z_f: tuple[Q, ...]

    @property
    def ambient(self) -> tuple[int, int]:
        return (len(self.z_e), len(self.z_f))

    @staticmethod
    def from_values(d: object, e: Sequence[object], f: Sequence[object]) -> RationalFunctional:
        return RationalFunctional(Q(d), tuple(Q(v) for v in e), tuple(Q(v) for v in f))

    @staticmethod
    def zero(k: int, l: int) -> RationalFunctional:
        return RationalFunctional(Q(0), (Q(0),) * k, (Q(0),) * l)

    def __call__(self, x: RootVec) -> Q:
        return evaluate(self, x)

    def __neg__(self) -> RationalFunctional:
        return RationalFunctional(-self.z_d, tuple(-v for v in self.z_e), tuple(-v for v in self.z_f))


def evaluate(zeta: RationalFunctional, x: RootVec) -> Q:
    """Evaluate the functional on a lattice vector (exact rational)."""
    if zeta.ambient != x.ambient:
        raise AmbientMismatchError(f"ambient mismatch: {zeta.ambient} vs {x.ambient}")
    acc = zeta.z_d * x.d
    for z, c in zip(zeta.z_e, x.e):
        acc += z * c
    for z, c in zip(zeta.z_f, x.f):
        acc += z * c
    return acc


def span_rank(vectors: Iterable[RootVec]) -> int:
    """Rank of the span of the given vectors, by exact elimination."""
    rows: list[list[Q]] = []
    for v in vectors:
        rows.append([Q(c) for c in v.coords()])
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank
