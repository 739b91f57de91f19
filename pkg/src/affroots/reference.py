"""Independent reference enumeration of the four root systems.

This module deliberately re-derives root membership by a different route
than `rootsys`: for each family it builds the literal set of roots at a
given delta level, row by row, as unions of sign families.  The verification
suite and the acceptance tests compare `rootsys` against these sets; the two
implementations must never share code paths.
"""

from __future__ import annotations

from typing import Iterator

from .lattice import RootVec, del_vec, eps_vec, zero_vec
from .rootsys import AlgebraType, Family, Progression


def _pm_eps(T: AlgebraType) -> Iterator[RootVec]:
    for i in range(1, T.k + 1):
        yield eps_vec(i, T.k, T.l)
        yield eps_vec(i, T.k, T.l, -1)


def _pm_two_eps(T: AlgebraType) -> Iterator[RootVec]:
    for i in range(1, T.k + 1):
        yield eps_vec(i, T.k, T.l, 2)
        yield eps_vec(i, T.k, T.l, -2)


def _pm_eps_pm_eps(T: AlgebraType) -> Iterator[RootVec]:
    for i in range(1, T.k + 1):
        for r in range(1, T.k + 1):
            if i == r:
                continue
            for si in (1, -1):
                for sr in (1, -1):
                    yield eps_vec(i, T.k, T.l, si) + eps_vec(r, T.k, T.l, sr)


def _pm_del(T: AlgebraType) -> Iterator[RootVec]:
    for j in range(1, T.l + 1):
        yield del_vec(j, T.k, T.l)
        yield del_vec(j, T.k, T.l, -1)


def _pm_two_del(T: AlgebraType) -> Iterator[RootVec]:
    for j in range(1, T.l + 1):
        yield del_vec(j, T.k, T.l, 2)
        yield del_vec(j, T.k, T.l, -2)


def _pm_del_pm_del(T: AlgebraType) -> Iterator[RootVec]:
    for j in range(1, T.l + 1):
        for s in range(1, T.l + 1):
            if j == s:
                continue
            for sj in (1, -1):
                for ss in (1, -1):
                    yield del_vec(j, T.k, T.l, sj) + del_vec(s, T.k, T.l, ss)


def _pm_eps_pm_del(T: AlgebraType) -> Iterator[RootVec]:
    for i in range(1, T.k + 1):
        for j in range(1, T.l + 1):
            for si in (1, -1):
                for sj in (1, -1):
                    yield eps_vec(i, T.k, T.l, si) + del_vec(j, T.k, T.l, sj)


def _at_level(vecs: Iterator[RootVec], d: int) -> set[RootVec]:
    return {RootVec(d, v.e, v.f) for v in vecs}


def roots_at_level(T: AlgebraType, d: int) -> set[RootVec]:
    """Literal set of roots with delta coefficient d."""
    out: set[RootVec] = {zero_vec(T.k, T.l) + RootVec(d, (0,) * T.k, (0,) * T.l)}
    fam = T.family
    if fam is Family.A2K_2LM1_TW2:
        out |= _at_level(_pm_eps(T), d)
        out |= _at_level(_pm_del(T), d)
        out |= _at_level(_pm_eps_pm_eps(T), d)
        out |= _at_level(_pm_del_pm_del(T), d)
        out |= _at_level(_pm_eps_pm_del(T), d)
        if d % 2 == 1:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.A2KM1_2LM1_TW2:
        out |= _at_level(_pm_eps_pm_eps(T), d)
        out |= _at_level(_pm_del_pm_del(T), d)
        out |= _at_level(_pm_eps_pm_del(T), d)
        if d % 2 == 1:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.A2K_2L_TW4:
        out |= _at_level(_pm_eps(T), d)
        out |= _at_level(_pm_del(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_eps_pm_eps(T), d)
            out |= _at_level(_pm_del_pm_del(T), d)
            out |= _at_level(_pm_eps_pm_del(T), d)
        if d % 4 == 2:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 4 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.D_TW2:
        out |= _at_level(_pm_eps(T), d)
        out |= _at_level(_pm_del(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
            out |= _at_level(_pm_eps_pm_eps(T), d)
            out |= _at_level(_pm_del_pm_del(T), d)
            out |= _at_level(_pm_eps_pm_del(T), d)
    else:  # pragma: no cover
        raise ValueError(fam)
    return out


def even_roots_at_level(T: AlgebraType, d: int) -> set[RootVec]:
    """Literal set of even-part roots with delta coefficient d."""
    out: set[RootVec] = set()
    fam = T.family
    dlt = RootVec(d, (0,) * T.k, (0,) * T.l)
    if fam is Family.A2K_2LM1_TW2:
        out.add(dlt)
        out |= _at_level(_pm_eps(T), d)
        out |= _at_level(_pm_eps_pm_eps(T), d)
        out |= _at_level(_pm_del_pm_del(T), d)
        if d % 2 == 1:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.A2KM1_2LM1_TW2:
        out.add(dlt)
        out |= _at_level(_pm_eps_pm_eps(T), d)
        out |= _at_level(_pm_del_pm_del(T), d)
        if d % 2 == 1:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.A2K_2L_TW4:
        if d % 2 == 0:
            out.add(dlt)
            out |= _at_level(_pm_eps(T), d)
            out |= _at_level(_pm_eps_pm_eps(T), d)
            out |= _at_level(_pm_del_pm_del(T), d)
        if d % 2 == 1:
            out |= _at_level(_pm_del(T), d)
        if d % 4 == 2:
            out |= _at_level(_pm_two_eps(T), d)
        if d % 4 == 0:
            out |= _at_level(_pm_two_del(T), d)
    elif fam is Family.D_TW2:
        out.add(dlt)
        out |= _at_level(_pm_eps(T), d)
        if d % 2 == 0:
            out |= _at_level(_pm_two_del(T), d)
            out |= _at_level(_pm_eps_pm_eps(T), d)
            out |= _at_level(_pm_del_pm_del(T), d)
    else:  # pragma: no cover
        raise ValueError(fam)
    return out


def _p(text: str) -> Progression:
    table = {
        "Z": Progression(1, 0),
        "2Z": Progression(2, 0),
        "2Z+1": Progression(2, 1),
        "4Z": Progression(4, 0),
        "4Z+2": Progression(4, 2),
        "-": Progression.none(),
    }
    return table[text]


# Expected level sets per direction class: (in R, in even part), indexed by
# family in the order of the published table columns.
_COLS = (Family.A2K_2LM1_TW2, Family.A2KM1_2LM1_TW2, Family.A2K_2L_TW4, Family.D_TW2)

_EXTENSION_ROWS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "eps": (("Z", "-", "Z", "Z"), ("Z", "-", "2Z", "Z")),
    "eps_eps": (("Z", "Z", "2Z", "2Z"), ("Z", "Z", "2Z", "2Z")),
    "2eps": (("2Z+1", "2Z+1", "4Z+2", "-"), ("2Z+1", "2Z+1", "4Z+2", "-")),
    "del": (("Z", "-", "Z", "Z"), ("-", "-", "2Z+1", "-")),
    "del_del": (("Z", "Z", "2Z", "2Z"), ("Z", "Z", "2Z", "2Z")),
    "2del": (("2Z", "2Z", "4Z", "2Z"), ("2Z", "2Z", "4Z", "2Z")),
    "eps_del": (("Z", "Z", "2Z", "2Z"), ("-", "-", "-", "-")),
}


def expected_extension(fam: Family, row: str) -> tuple[Progression, Progression]:
    """Expected (full, even) level progressions for a direction class."""
    col = _COLS.index(fam)
    s_row, t_row = _EXTENSION_ROWS[row]
    return _p(s_row[col]), _p(t_row[col])


def direction_representative(T: AlgebraType, row: str) -> RootVec | None:
    """A representative direction vector for a table row, or None if vacuous."""
    k, l = T.k, T.l
    if row == "eps":
        return eps_vec(1, k, l)
    if row == "2eps":
        return eps_vec(1, k, l, 2)
    if row == "eps_eps":
        return eps_vec(1, k, l) + eps_vec(2, k, l) if k >= 2 else None
    if row == "del":
        return del_vec(1, k, l)
    if row == "2del":
        return del_vec(1, k, l, 2)
    if row == "del_del":
        return del_vec(1, k, l) + del_vec(2, k, l, -1) if l >= 2 else None
    if row == "eps_del":
        return eps_vec(1, k, l) + del_vec(1, k, l)
    raise ValueError(row)


def direction_rows() -> tuple[str, ...]:
    return tuple(_EXTENSION_ROWS)
