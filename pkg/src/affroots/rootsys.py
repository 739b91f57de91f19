"""Root systems of the four twisted affine families, as exact congruence predicates.

Membership of a lattice vector is decided by its eps/del support pattern
together with a congruence on the delta coefficient; enumeration iterates
support patterns rather than a dense lattice box.  The same data drives the
even/odd split, the quotient modulo delta, the two even affine subsystems
and their distinguished bases.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Iterator, Optional

from .lattice import (
    RootClass,
    RootVec,
    bilinear,
    del_vec,
    delta_vec,
    eps_vec,
    zero_vec,
)


class NotADirectionError(ValueError):
    """A vector used as a quotient direction has an unrecognized shape."""


class Family(enum.Enum):
    """The four families, named by their ASCII command-line identifiers."""

    A2K_2LM1_TW2 = "A-2k-2l-1-tw2"
    A2KM1_2LM1_TW2 = "A-2k-1-2l-1-tw2"
    A2K_2L_TW4 = "A-2k-2l-tw4"
    D_TW2 = "D-tw2"


FAMILY_BY_CLI_NAME = {fam.value: fam for fam in Family}


@dataclass(frozen=True)
class AlgebraType:
    family: Family
    k: int
    l: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive")
        if self.family is Family.A2KM1_2LM1_TW2 and self.k == 1 and self.l == 1:
            raise ValueError(f"{self.family.value} requires (k, l) != (1, 1)")

    @property
    def cli_name(self) -> str:
        return self.family.value

    def zero(self) -> RootVec:
        return zero_vec(self.k, self.l)

    def delta(self, d: int = 1) -> RootVec:
        return delta_vec(self.k, self.l, d)

    def eps(self, i: int, c: int = 1) -> RootVec:
        return eps_vec(i, self.k, self.l, c)

    def dl(self, j: int, c: int = 1) -> RootVec:
        return del_vec(j, self.k, self.l, c)


@dataclass(frozen=True)
class Window:
    """Bound on the absolute delta coefficient of enumerated roots."""

    N: int

    def __post_init__(self) -> None:
        if self.N < 0:
            raise ValueError("window bound must be nonnegative")

    def levels(self) -> range:
        return range(-self.N, self.N + 1)


# Support-pattern tags.  A vector is a root only if its eps/del support
# matches one of these shapes; the delta coefficient is then constrained by
# a congruence that depends on the family.
ZERO = "zero"
EPS = "eps"
TWO_EPS = "2eps"
EPS_EPS = "eps_eps"
DEL = "del"
TWO_DEL = "2del"
DEL_DEL = "del_del"
EPS_DEL = "eps_del"

_REAL_TAGS = (EPS, TWO_EPS, EPS_EPS, DEL, TWO_DEL, DEL_DEL)
_DIRECTION_TAGS = (EPS, EPS_EPS, TWO_EPS, DEL, DEL_DEL, TWO_DEL, EPS_DEL)

Cell = Optional[tuple[int, int]]  # (modulus, residue) or None when absent

# Admissible delta congruence per support pattern, full root system.
_R_CELLS: dict[Family, dict[str, Cell]] = {
    Family.A2K_2LM1_TW2: {
        ZERO: (1, 0), EPS: (1, 0), DEL: (1, 0), EPS_EPS: (1, 0), DEL_DEL: (1, 0),
        EPS_DEL: (1, 0), TWO_EPS: (2, 1), TWO_DEL: (2, 0),
    },
    Family.A2KM1_2LM1_TW2: {
        ZERO: (1, 0), EPS: None, DEL: None, EPS_EPS: (1, 0), DEL_DEL: (1, 0),
        EPS_DEL: (1, 0), TWO_EPS: (2, 1), TWO_DEL: (2, 0),
    },
    Family.A2K_2L_TW4: {
        ZERO: (1, 0), EPS: (1, 0), DEL: (1, 0), EPS_EPS: (2, 0), DEL_DEL: (2, 0),
        EPS_DEL: (2, 0), TWO_EPS: (4, 2), TWO_DEL: (4, 0),
    },
    Family.D_TW2: {
        ZERO: (1, 0), EPS: (1, 0), DEL: (1, 0), EPS_EPS: (2, 0), DEL_DEL: (2, 0),
        EPS_DEL: (2, 0), TWO_EPS: None, TWO_DEL: (2, 0),
    },
}

# Admissible delta congruence per support pattern, even part only.
_R0_CELLS: dict[Family, dict[str, Cell]] = {
    Family.A2K_2LM1_TW2: {
        ZERO: (1, 0), EPS: (1, 0), DEL: None, EPS_EPS: (1, 0), DEL_DEL: (1, 0),
        EPS_DEL: None, TWO_EPS: (2, 1), TWO_DEL: (2, 0),
    },
    Family.A2KM1_2LM1_TW2: {
        ZERO: (1, 0), EPS: None, DEL: None, EPS_EPS: (1, 0), DEL_DEL: (1, 0),
        EPS_DEL: None, TWO_EPS: (2, 1), TWO_DEL: (2, 0),
    },
    Family.A2K_2L_TW4: {
        ZERO: (2, 0), EPS: (2, 0), DEL: (2, 1), EPS_EPS: (2, 0), DEL_DEL: (2, 0),
        EPS_DEL: None, TWO_EPS: (4, 2), TWO_DEL: (4, 0),
    },
    Family.D_TW2: {
        ZERO: (1, 0), EPS: (1, 0), DEL: None, EPS_EPS: (2, 0), DEL_DEL: (2, 0),
        EPS_DEL: None, TWO_EPS: None, TWO_DEL: (2, 0),
    },
}

# Real directions of the two even affine subsystems, with their level
# congruences inside the subsystem.
_SUB_CELLS: dict[Family, dict[int, dict[str, tuple[int, int]]]] = {
    Family.A2K_2LM1_TW2: {
        1: {EPS: (1, 0), EPS_EPS: (1, 0), TWO_EPS: (2, 1)},
        2: {DEL_DEL: (1, 0), TWO_DEL: (2, 0)},
    },
    Family.A2KM1_2LM1_TW2: {
        1: {EPS_EPS: (1, 0), TWO_EPS: (2, 1)},
        2: {DEL_DEL: (1, 0), TWO_DEL: (2, 0)},
    },
    Family.A2K_2L_TW4: {
        1: {EPS: (2, 0), EPS_EPS: (2, 0), TWO_EPS: (4, 2)},
        2: {DEL: (2, 1), DEL_DEL: (2, 0), TWO_DEL: (4, 0)},
    },
    Family.D_TW2: {
        1: {EPS: (1, 0), EPS_EPS: (2, 0)},
        2: {DEL_DEL: (2, 0), TWO_DEL: (2, 0)},
    },
}


def subsystem_period(T: AlgebraType, i: int) -> int:
    """Generator s_i of the imaginary level group of even subsystem i.

    The generic value degrades for rank-one sides: when the side's finite
    block is sl(2) the twisting automorphism acts trivially on it (or fixes
    only its Cartan), so the odd loop levels carry no zero-weight vectors
    and the imaginary group halves to 2Z.
    """
    fam = T.family
    if fam is Family.A2K_2L_TW4:
        return 2
    if fam is Family.D_TW2:
        return 1 if i == 1 else 2
    if i == 1:
        if fam is Family.A2KM1_2LM1_TW2 and T.k == 1:
            return 2
        return 1
    return 1 if T.l >= 2 else 2


def support_pattern(x: RootVec) -> Optional[str]:
    """Tag of the eps/del support shape, or None for non-root shapes."""
    e_nz = [abs(c) for c in x.e if c]
    f_nz = [abs(c) for c in x.f if c]
    if not e_nz and not f_nz:
        return ZERO
    if e_nz == [1] and not f_nz:
        return EPS
    if e_nz == [2] and not f_nz:
        return TWO_EPS
    if e_nz == [1, 1] and not f_nz:
        return EPS_EPS
    if f_nz == [1] and not e_nz:
        return DEL
    if f_nz == [2] and not e_nz:
        return TWO_DEL
    if f_nz == [1, 1] and not e_nz:
        return DEL_DEL
    if e_nz == [1] and f_nz == [1]:
        return EPS_DEL
    return None


def _cell_match(cell: Cell, d: int) -> bool:
    if cell is None:
        return False
    r, k0 = cell
    return d % r == k0


def contains(T: AlgebraType, x: RootVec) -> bool:
    """Membership of x in the full root system of type T."""
    if x.ambient != (T.k, T.l):
        raise ValueError(f"ambient mismatch: {x.ambient} vs {(T.k, T.l)}")
    tag = support_pattern(x)
    if tag is None:
        return False
    return _cell_match(_R_CELLS[T.family][tag], x.d)


def contains_even(T: AlgebraType, x: RootVec) -> bool:
    """Membership of x in the even part of the root system."""
    tag = support_pattern(x)
    if tag is None:
        return False
    return _cell_match(_R0_CELLS[T.family][tag], x.d)


PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_IM = "im"


def parity(T: AlgebraType, x: RootVec) -> str:
    """Even/odd parity of a root; delta multiples report the neutral tag 'im'.

    The even rows pin the split for every non-imaginary root.  Which integer
    multiples of delta carry odd root vectors is not recoverable from the
    root sets alone, so imaginary roots are never assigned even or odd.
    """
    if not contains(T, x):
        raise ValueError(f"{x} is not a root of {T.family.value}")
    if x.is_delta_multiple():
        return PARITY_IM
    return PARITY_EVEN if contains_even(T, x) else PARITY_ODD


def root_class_of(T: AlgebraType, x: RootVec) -> str:
    """Zero/real/imaginary/nonsingular tag, from the support pattern."""
    tag = support_pattern(x)
    if tag == ZERO:
        return RootClass.ZERO if x.d == 0 else RootClass.IMAGINARY
    if tag == EPS_DEL:
        return RootClass.NONSINGULAR
    return RootClass.REAL


@dataclass(frozen=True)
class RootEntry:
    vec: RootVec
    cls: str
    parity: str


def _pattern_vectors(T: AlgebraType, tag: str) -> Iterator[RootVec]:
    """All lattice vectors with the given support shape and zero level."""
    k, l = T.k, T.l
    if tag == ZERO:
        yield zero_vec(k, l)
    elif tag == EPS:
        for i in range(1, k + 1):
            for s in (1, -1):
                yield eps_vec(i, k, l, s)
    elif tag == TWO_EPS:
        for i in range(1, k + 1):
            for s in (2, -2):
                yield eps_vec(i, k, l, s)
    elif tag == EPS_EPS:
        for i, r in itertools.combinations(range(1, k + 1), 2):
            for si in (1, -1):
                for sr in (1, -1):
                    yield eps_vec(i, k, l, si) + eps_vec(r, k, l, sr)
    elif tag == DEL:
        for j in range(1, l + 1):
            for s in (1, -1):
                yield del_vec(j, k, l, s)
    elif tag == TWO_DEL:
        for j in range(1, l + 1):
            for s in (2, -2):
                yield del_vec(j, k, l, s)
    elif tag == DEL_DEL:
        for j, s_ in itertools.combinations(range(1, l + 1), 2):
            for sj in (1, -1):
                for ss in (1, -1):
                    yield del_vec(j, k, l, sj) + del_vec(s_, k, l, ss)
    elif tag == EPS_DEL:
        for i in range(1, k + 1):
            for j in range(1, l + 1):
                for si in (1, -1):
                    for sj in (1, -1):
                        yield eps_vec(i, k, l, si) + del_vec(j, k, l, sj)
    else:  # pragma: no cover
        raise ValueError(tag)


@dataclass(frozen=True)
class RootSystemView:
    """Finite truncation of a root system: all roots with |level| <= N."""

    type: AlgebraType
    window: Window
    entries: tuple[RootEntry, ...]

    def __iter__(self) -> Iterator[RootEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def _vec_set(self) -> frozenset[RootVec]:
        return _view_vec_set(self)

    def contains_vec(self, x: RootVec) -> bool:
        return x in self._vec_set

    def vectors(self) -> Iterator[RootVec]:
        return (entry.vec for entry in self.entries)

    def real_vectors(self) -> Iterator[RootVec]:
        return (entry.vec for entry in self.entries if entry.cls == RootClass.REAL)

    def nonsingular_vectors(self) -> Iterator[RootVec]:
        return (entry.vec for entry in self.entries if entry.cls == RootClass.NONSINGULAR)

    def spanning_set(self) -> tuple[RootVec, ...]:
        return _view_spanning_set(self)


@lru_cache(maxsize=None)
def _view_vec_set(view: RootSystemView) -> frozenset[RootVec]:
    return frozenset(entry.vec for entry in view.entries)


@lru_cache(maxsize=None)
def _view_spanning_set(view: RootSystemView) -> tuple[RootVec, ...]:
    from .lattice import span_rank

    chosen: list[RootVec] = []
    rank = 0
    full = 1 + view.type.k + view.type.l
    for entry in view.entries:
        if entry.vec.is_zero():
            continue
        cand = chosen + [entry.vec]
        new_rank = span_rank(cand)
        if new_rank > rank:
            chosen = cand
            rank = new_rank
            if rank == full:
                break
    return tuple(chosen)


@lru_cache(maxsize=None)
def enumerate_roots(T: AlgebraType, window: Window) -> RootSystemView:
    """All roots with |delta coefficient| <= N, in lexicographic (d, e, f) order."""
    cells = _R_CELLS[T.family]
    entries: list[RootEntry] = []
    for tag in (ZERO, *_REAL_TAGS, EPS_DEL):
        cell = cells[tag]
        if cell is None:
            continue
        r, k0 = cell
        for base in _pattern_vectors(T, tag):
            for d in window.levels():
                if d % r != k0:
                    continue
                vec = RootVec(d, base.e, base.f)
                entries.append(RootEntry(vec, root_class_of(T, vec), parity(T, vec)))
    entries.sort(key=lambda entry: entry.vec.sort_key())
    return RootSystemView(T, window, tuple(entries))


@dataclass(frozen=True)
class Progression:
    """The level set (r*Z + k0)*delta, or the empty set."""

    r: int
    k0: int
    empty: bool = False

    def __post_init__(self) -> None:
        if not self.empty and not (self.r >= 1 and 0 <= self.k0 < self.r):
            raise ValueError("need 0 <= k0 < r")

    @staticmethod
    def none() -> Progression:
        return Progression(1, 0, empty=True)

    def member(self, m: int) -> bool:
        return (not self.empty) and m % self.r == self.k0

    def __str__(self) -> str:
        if self.empty:
            return "empty"
        if self.r == 1:
            return "Z"
        return f"{self.r}Z+{self.k0}" if self.k0 else f"{self.r}Z"


_SCAN = 8  # internal scan radius used to certify progressions


def _fit_progression(members: list[int], universe: Iterable[int]) -> Progression:
    if not members:
        return Progression.none()
    if len(members) == 1:
        raise ValueError("cannot certify a progression from a single member")
    r = 0
    for m in members[1:]:
        r = gcd(r, m - members[0])
    k0 = members[0] % r
    prog = Progression(r, k0)
    member_set = set(members)
    for m in universe:
        if prog.member(m) != (m in member_set):
            raise ValueError("level set is not an arithmetic progression")
    return prog


def extension_sets(T: AlgebraType, adot: RootVec) -> tuple[Progression, Progression]:
    """Level sets along delta of a quotient direction, in R and in the even part.

    The input must be a level-zero vector of one of the direction shapes;
    both outputs are certified exact progressions (possibly empty).
    """
    if adot.d != 0:
        raise NotADirectionError(f"direction must have zero delta coefficient: {adot}")
    tag = support_pattern(adot)
    if tag is None or tag == ZERO:
        raise NotADirectionError(f"not a direction class: {adot}")
    scan = range(-_SCAN, _SCAN + 1)
    in_r = [m for m in scan if contains(T, adot + T.delta(m))]
    in_r0 = [m for m in scan if contains_even(T, adot + T.delta(m))]
    s_prog = _fit_progression(in_r, scan)
    t_prog = _fit_progression(in_r0, scan)
    for prog in (s_prog, t_prog):
        if not prog.empty and prog.r not in (1, 2, 4):
            raise ValueError(f"unexpected progression modulus {prog.r}")
    return s_prog, t_prog


# -- quotient modulo delta ---------------------------------------------------

LENGTH_LABELS = ("sh", "lg", "ex")


@dataclass(frozen=True)
class DotQuotient:
    """The finite quotient of the root system modulo delta."""

    type: AlgebraType
    re1: tuple[RootVec, ...]  # real directions supported on eps coordinates
    re2: tuple[RootVec, ...]  # real directions supported on del coordinates
    ns: tuple[RootVec, ...]  # nonsingular directions
    length_by_side: tuple[dict[str, tuple[RootVec, ...]], ...]
    length_global: dict[str, tuple[RootVec, ...]]

    @property
    def re(self) -> tuple[RootVec, ...]:
        return tuple(sorted(self.re1 + self.re2, key=RootVec.sort_key))

    @property
    def nonzero(self) -> tuple[RootVec, ...]:
        return tuple(sorted(self.re1 + self.re2 + self.ns, key=RootVec.sort_key))

    def all_directions(self) -> tuple[RootVec, ...]:
        return (self.type.zero(),) + self.nonzero


def _length_classes(vectors: Iterable[RootVec]) -> dict[str, tuple[RootVec, ...]]:
    groups: dict[int, list[RootVec]] = {}
    for v in vectors:
        groups.setdefault(abs(bilinear(v, v)), []).append(v)
    classes: dict[str, tuple[RootVec, ...]] = {}
    for label, norm in zip(LENGTH_LABELS, sorted(groups)):
        classes[label] = tuple(sorted(groups[norm], key=RootVec.sort_key))
    if len(groups) > len(LENGTH_LABELS):  # pragma: no cover
        raise ValueError("more than three root lengths")
    return classes


@lru_cache(maxsize=None)
def dot_quotient(T: AlgebraType) -> DotQuotient:
    """Direction classes modulo delta, split into the two real sides."""
    re1: list[RootVec] = []
    re2: list[RootVec] = []
    ns: list[RootVec] = []
    for tag in _DIRECTION_TAGS:
        if _R_CELLS[T.family][tag] is None:
            continue
        for v in _pattern_vectors(T, tag):
            if tag == EPS_DEL:
                ns.append(v)
            elif tag in (EPS, TWO_EPS, EPS_EPS):
                re1.append(v)
            else:
                re2.append(v)
    re1.sort(key=RootVec.sort_key)
    re2.sort(key=RootVec.sort_key)
    ns.sort(key=RootVec.sort_key)
    return DotQuotient(
        T,
        tuple(re1),
        tuple(re2),
        tuple(ns),
        (_length_classes(re1), _length_classes(re2)),
        _length_classes(re1 + re2),
    )


# -- even affine subsystems --------------------------------------------------


def subsystem_directions(T: AlgebraType, i: int) -> tuple[tuple[RootVec, Progression], ...]:
    """Real directions of even subsystem i with their level progressions."""
    if i not in (1, 2):
        raise ValueError("subsystem index must be 1 or 2")
    out = []
    for tag, (r, k0) in _SUB_CELLS[T.family][i].items():
        for v in _pattern_vectors(T, tag):
            out.append((v, Progression(r, k0)))
    out.sort(key=lambda pair: pair[0].sort_key())
    return tuple(out)


def subsystem_contains(T: AlgebraType, i: int, x: RootVec) -> bool:
    """Membership of x in even subsystem i (real or imaginary levels)."""
    tag = support_pattern(x)
    if tag is None:
        return False
    if tag == ZERO:
        return x.d % subsystem_period(T, i) == 0
    cell = _SUB_CELLS[T.family][i].get(tag)
    return cell is not None and _cell_match(cell, x.d)


@lru_cache(maxsize=None)
def subsystem(T: AlgebraType, i: int, window: Window) -> RootSystemView:
    """Window view of even subsystem i (a subset of the even part plus Z*delta)."""
    entries: list[RootEntry] = []
    s = subsystem_period(T, i)
    for d in window.levels():
        if d % s == 0:
            vec = T.delta(d)
            entries.append(RootEntry(vec, root_class_of(T, vec), PARITY_IM))
    for v, prog in subsystem_directions(T, i):
        for d in window.levels():
            if prog.member(d):
                vec = RootVec(d, v.e, v.f)
                entries.append(RootEntry(vec, RootClass.REAL, parity(T, vec)))
    entries.sort(key=lambda entry: entry.vec.sort_key())
    return RootSystemView(T, window, tuple(entries))


@dataclass(frozen=True)
class AffineBaseData:
    """Distinguished base of an even affine subsystem.

    affine_base = finite_base + (period*delta - highest,); highest is a
    positive integer combination of finite_base.
    """

    subsystem: int
    period: int
    finite_base: tuple[RootVec, ...]
    highest: RootVec
    affine_base: tuple[RootVec, ...]

    @property
    def affine_root(self) -> RootVec:
        return self.affine_base[-1]

    @property
    def rank(self) -> int:
        return len(self.affine_base)


def _sub_rank(T: AlgebraType, i: int) -> int:
    return (T.k if i == 1 else T.l) + 1


def _lex_positive(v: RootVec) -> bool:
    for c in (*v.e, *v.f):
        if c:
            return c > 0
    return False


def _sub_positive(v: RootVec) -> bool:
    return v.d > 0 or (v.d == 0 and _lex_positive(v))


def _solve_in_base(base: list[RootVec], target: RootVec, coords: list[int]) -> Optional[list[Q]]:
    """Coordinates of target in the given vectors, restricted to coord slots."""
    n = len(base)
    rows = [[Q(base[c].coords()[r]) for c in range(n)] + [Q(target.coords()[r])] for r in coords]
    # forward elimination with partial pivoting by exact nonzero test
    rank = 0
    pivots = []
    for col in range(n):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                fac = rows[r][col]
                rows[r] = [a - fac * b for a, b in zip(rows[r], rows[rank])]
        pivots.append(col)
        rank += 1
    if rank < n:
        return None
    for r in range(rank, len(rows)):
        if rows[r][n] != 0:
            return None
    sol = [Q(0)] * n
    for r, col in enumerate(pivots):
        sol[col] = rows[r][n]
    return sol


def _coord_slots(T: AlgebraType, i: int) -> list[int]:
    if i == 1:
        return [0] + list(range(1, 1 + T.k))
    return [0] + list(range(1 + T.k, 1 + T.k + T.l))


@lru_cache(maxsize=None)
def base_and_theta(T: AlgebraType, i: int) -> AffineBaseData:
    """Distinguished base, highest root and imaginary period of subsystem i.

    Simple roots are the indecomposable positive roots for the level-then-
    lexicographic order; the affine member is the unique simple root of
    delta-mark one whose complement carries the highest root.  The result is
    certified on a window: every subsystem root must have uniform-sign
    integer coordinates in the base.
    """
    s = subsystem_period(T, i)
    check_window = Window(max(4 * s, 8))
    view = subsystem(T, i, check_window)
    positives = [v for v in view.vectors() if _sub_positive(v)]
    pos_set = set(positives)

    low = [v for v in positives if 0 <= v.d <= s and not v.is_delta_multiple()]
    simples = []
    for alpha in low:
        decomposable = any(alpha - beta in pos_set for beta in positives
                           if beta != alpha and beta.d <= alpha.d)
        if not decomposable:
            simples.append(alpha)
    rank = _sub_rank(T, i)
    if len(simples) != rank:
        raise RuntimeError(f"expected {rank} simple roots, found {len(simples)} for {T} #{i}")

    coords = _coord_slots(T, i)
    # certify the base: uniform-sign integer coordinates for every window root
    for v in view.vectors():
        if v.is_zero():
            continue
        sol = _solve_in_base(simples, v, coords)
        if sol is None or any(c.denominator != 1 for c in sol):
            raise RuntimeError(f"{v} has non-integral coordinates in candidate base")
        signs = {1 if c > 0 else -1 for c in sol if c != 0}
        if len(signs) > 1:
            raise RuntimeError(f"{v} has mixed-sign coordinates in candidate base")

    marks = _solve_in_base(simples, T.delta(s), coords)
    assert marks is not None and all(c.denominator == 1 and c >= 1 for c in marks)

    def _affine_sort(idx: int) -> tuple:
        v = simples[idx]
        return (-v.d, v.sort_key())

    affine_idx = None
    theta = None
    for idx in sorted(range(rank), key=_affine_sort):
        if marks[idx] != 1:
            continue
        cand = T.delta(s) - simples[idx]
        rest = [simples[j] for j in range(rank) if j != idx]
        sol = _solve_in_base(rest, cand, coords)
        if sol is not None and all(c.denominator == 1 and c >= 1 for c in sol):
            affine_idx = idx
            theta = cand
            break
    if affine_idx is None or theta is None:
        raise RuntimeError(f"no affine base member found for {T} #{i}")

    finite = [simples[j] for j in range(rank) if j != affine_idx]
    finite.sort(key=lambda v: (v.d, tuple(-c for c in v.e), tuple(-c for c in v.f)))
    affine_root = simples[affine_idx]
    return AffineBaseData(i, s, tuple(finite), theta, tuple(finite) + (affine_root,))


def min_period(T: AlgebraType) -> int:
    """Least r such that shifting by r*delta preserves both parity parts."""
    moduli = [cell[0] for table in (_R_CELLS, _R0_CELLS)
              for cell in table[T.family].values() if cell is not None]
    return lcm(*moduli)
