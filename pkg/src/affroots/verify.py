"""Exhaustive window checks for the root-system layer.

Every check returns a CheckReport whose failures carry explicit witnesses.
The table checks compare the congruence predicates against the independent
literal enumeration in `reference`; the remaining checks are structural
identities scanned over a window.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional

from . import reference
from .lattice import RootClass, RootVec, bilinear, classify, reflect, span_rank
from .rootsys import (
    AlgebraType,
    Family,
    Window,
    base_and_theta,
    contains,
    contains_even,
    dot_quotient,
    enumerate_roots,
    extension_sets,
    min_period,
    parity,
    subsystem,
    subsystem_contains,
    subsystem_period,
)
from .shadow import CheckItem, CheckReport


def small_grid(max_rank: int = 2) -> tuple[AlgebraType, ...]:
    """The default verification grid of types and ranks."""
    out = []
    for fam in Family:
        for k in range(1, max_rank + 1):
            for l in range(1, max_rank + 1):
                if fam is Family.A2KM1_2LM1_TW2 and (k, l) == (1, 1):
                    continue
                out.append(AlgebraType(fam, k, l))
    return tuple(out)


def check_table_oracle(T: AlgebraType, window: Window, corrupt: bool = False) -> CheckReport:
    """Enumerated roots and parities against the literal table transcription."""
    view = enumerate_roots(T, window)
    mine = {e.vec for e in view}
    mine_even = {e.vec for e in view if e.parity == "even"}
    if corrupt:
        victim = next(iter(sorted((v for v in mine if not v.is_zero()), key=RootVec.sort_key)))
        mine = mine - {victim}
    ref: set[RootVec] = set()
    ref_even: set[RootVec] = set()
    for d in window.levels():
        ref |= reference.roots_at_level(T, d)
        ref_even |= {v for v in reference.even_roots_at_level(T, d)
                     if not v.is_delta_multiple()}
    diff = sorted(mine ^ ref, key=RootVec.sort_key)
    even_diff = sorted(mine_even ^ ref_even, key=RootVec.sort_key)
    return CheckReport((
        CheckItem("root-sets", not diff, tuple(str(v) for v in diff[:5])),
        CheckItem("even-sets", not even_diff, tuple(str(v) for v in even_diff[:5])),
    ))


def check_table4(T: AlgebraType) -> CheckReport:
    """Every level-progression cell for every direction class."""
    bad = []
    for row in reference.direction_rows():
        rep = reference.direction_representative(T, row)
        if rep is None:
            continue
        expected = reference.expected_extension(T.family, row)
        got = extension_sets(T, rep)
        if got != expected:
            bad.append(f"{row}: got ({got[0]}, {got[1]}) want ({expected[0]}, {expected[1]})")
        got_neg = extension_sets(T, -rep)
        if got_neg != expected:
            bad.append(f"-{row}: got ({got_neg[0]}, {got_neg[1]})")
    return CheckReport((CheckItem("extension-cells", not bad, tuple(bad[:5])),))


def check_partition(T: AlgebraType, window: Window) -> CheckReport:
    """Class partition, negation closure, and the bilinear-form classifier."""
    view = enumerate_roots(T, window)
    vec_set = {e.vec for e in view}
    neg_bad = [str(e.vec) for e in view if -e.vec not in vec_set]
    class_bad = []
    for e in view:
        expected = classify(e.vec, view)
        if expected != e.cls:
            class_bad.append(f"{e.vec}: {e.cls} vs bilinear {expected}")
    im_bad = [str(e.vec) for e in view
              if (e.cls in (RootClass.IMAGINARY, RootClass.ZERO)) != e.vec.is_delta_multiple()]
    par_bad = [str(e.vec) for e in view
               if (e.parity == "im") != e.vec.is_delta_multiple()]
    return CheckReport((
        CheckItem("negation-closed", not neg_bad, tuple(neg_bad[:5])),
        CheckItem("bilinear-classifier", not class_bad, tuple(class_bad[:5])),
        CheckItem("imaginary-axis", not im_bad, tuple(im_bad[:5])),
        CheckItem("imaginary-parity", not par_bad, tuple(par_bad[:5])),
    ))


def check_ns_sums(T: AlgebraType, window: Window) -> CheckReport:
    """Sums of two nonsingular roots never land on a nonsingular root."""
    view = enumerate_roots(T, window)
    ns = sorted(view.nonsingular_vectors(), key=RootVec.sort_key)
    bad = []
    for a in ns:
        for b in ns:
            total = a + b
            if contains(T, total) and not total.is_zero():
                if bilinear(total, total) == 0 and not total.is_delta_multiple():
                    bad.append(f"{a} + {b} -> {total}")
    return CheckReport((CheckItem("nonsingular-sums", not bad, tuple(bad[:5])),))


def check_ns_plus_real(T: AlgebraType, window: Window) -> CheckReport:
    """Nonsingular plus real stays nonsingular (one family only)."""
    if T.family is not Family.A2KM1_2LM1_TW2:
        return CheckReport((CheckItem("nonsingular-real-sums", True),))
    view = enumerate_roots(T, window)
    ns = list(view.nonsingular_vectors())
    re = list(view.real_vectors())
    bad = []
    for a in ns:
        for b in re:
            total = a + b
            if contains(T, total) and not (bilinear(total, total) == 0
                                           and not total.is_delta_multiple()):
                bad.append(f"{a} + {b} -> {total}")
    return CheckReport((CheckItem("nonsingular-real-sums", not bad, tuple(bad[:5])),))


def check_progressions(T: AlgebraType) -> CheckReport:
    """Every direction extends along an exact progression with a common divisor root.

    Both the full system and the even part admit a real direction whose level
    set is exactly the imaginary level group, dividing every other modulus.
    """
    quotient = dot_quotient(T)
    items: list[CheckItem] = []
    for which, even in (("full", False), ("even", True)):
        im_period = 1
        if even and T.family is Family.A2K_2L_TW4:
            im_period = 2
        moduli_bad: list[str] = []
        star_found = False
        for direction in quotient.nonzero:
            s_prog, t_prog = extension_sets(T, direction)
            prog = t_prog if even else s_prog
            if prog.empty:
                continue
            if prog.r % im_period != 0:
                moduli_bad.append(f"{direction}: modulus {prog.r}")
            is_real = direction in quotient.re
            if is_real and prog.k0 == 0 and prog.r == im_period:
                star_found = True
        items.append(CheckItem(f"{which}-moduli-divisible", not moduli_bad,
                               tuple(moduli_bad[:5])))
        items.append(CheckItem(f"{which}-divisor-direction", star_found))
    return CheckReport(tuple(items))


def check_min_period(T: AlgebraType, window: Window) -> CheckReport:
    """The claimed shift period preserves membership and parity; nothing smaller does."""
    r = min_period(T)
    expected = 4 if T.family is Family.A2K_2L_TW4 else 2
    view = enumerate_roots(T, window)
    shift_bad = []
    for e in view:
        moved = e.vec + T.delta(r)
        if not contains(T, moved):
            shift_bad.append(str(e.vec))
        elif not e.vec.is_delta_multiple() and parity(T, moved) != e.parity:
            shift_bad.append(f"{e.vec} parity")
    smaller_ok = []
    for cand in range(1, r):
        violations = any(
            not contains(T, e.vec + T.delta(cand))
            or (not e.vec.is_delta_multiple() and parity(T, e.vec + T.delta(cand)) != e.parity)
            for e in view)
        if not violations:
            smaller_ok.append(str(cand))
    return CheckReport((
        CheckItem("period-value", r == expected, () if r == expected else (str(r),)),
        CheckItem("period-shifts", not shift_bad, tuple(shift_bad[:5])),
        CheckItem("period-minimal", not smaller_ok, tuple(smaller_ok)),
    ))


def check_reflection_closure(T: AlgebraType, window: Window) -> CheckReport:
    """Reflections through real roots keep every window root in the system."""
    view = enumerate_roots(T, window)
    reals = list(view.real_vectors())
    bad = []
    for alpha in reals:
        for e in view:
            image = reflect(e.vec, alpha)
            if not contains(T, image):
                bad.append(f"r_{alpha}({e.vec}) = {image}")
    return CheckReport((CheckItem("reflection-closure", not bad, tuple(bad[:5])),))


def check_subsystems(T: AlgebraType, window: Window) -> CheckReport:
    """Subsystem containment, even-part coverage, and base-data invariants."""
    items: list[CheckItem] = []
    sub_bad: list[str] = []
    for i in (1, 2):
        for v in subsystem(T, i, window).vectors():
            if v.is_delta_multiple():
                if not contains(T, v):
                    sub_bad.append(f"#{i}: {v}")
            elif not contains_even(T, v) or parity(T, v) != "even":
                sub_bad.append(f"#{i}: {v}")
    items.append(CheckItem("subsystem-containment", not sub_bad, tuple(sub_bad[:5])))

    cover_bad = []
    overlap_bad = []
    for e in enumerate_roots(T, window):
        v = e.vec
        if v.is_delta_multiple() or e.parity != "even":
            continue
        in1 = subsystem_contains(T, 1, v)
        in2 = subsystem_contains(T, 2, v)
        if not (in1 or in2):
            cover_bad.append(str(v))
        if in1 and in2:
            overlap_bad.append(str(v))
    items.append(CheckItem("even-coverage", not cover_bad, tuple(cover_bad[:5])))
    items.append(CheckItem("even-disjointness", not overlap_bad, tuple(overlap_bad[:5])))

    base_bad = []
    for i in (1, 2):
        data = base_and_theta(T, i)
        s_delta = T.delta(data.period)
        if not subsystem_contains(T, i, data.affine_root):
            base_bad.append(f"#{i}: affine {data.affine_root}")
        if data.affine_root + data.highest != s_delta:
            base_bad.append(f"#{i}: highest mismatch")
        for v in data.finite_base:
            if not subsystem_contains(T, i, v):
                base_bad.append(f"#{i}: simple {v}")
    items.append(CheckItem("base-data", not base_bad, tuple(base_bad[:5])))
    return CheckReport(tuple(items))


def check_quotient(T: AlgebraType) -> CheckReport:
    """Quotient side partition, nonsingular shape, and the chained decompositions."""
    quotient = dot_quotient(T)
    items: list[CheckItem] = []

    side_bad = [str(v) for v in quotient.re1 if v in quotient.re2]
    support_bad = [str(v) for v in quotient.re1 if any(v.f)]
    support_bad += [str(v) for v in quotient.re2 if any(v.e)]
    items.append(CheckItem("side-partition", not (side_bad or support_bad),
                           tuple((side_bad + support_bad)[:5])))

    ns_bad = [str(v) for v in quotient.ns
              if sorted(abs(c) for c in v.e if c) != [1]
              or sorted(abs(c) for c in v.f if c) != [1]]
    items.append(CheckItem("nonsingular-shape", not ns_bad, tuple(ns_bad[:5])))

    # directions listed exactly when extendable
    dir_bad = []
    for v in quotient.nonzero:
        s_prog, _ = extension_sets(T, v)
        if s_prog.empty:
            dir_bad.append(str(v))
    items.append(CheckItem("directions-extendable", not dir_bad, tuple(dir_bad[:5])))

    rank = span_rank([T.delta()] + [v for v in quotient.nonzero])
    items.append(CheckItem("full-span", rank == 1 + T.k + T.l, (str(rank),)))

    if T.family is Family.A2KM1_2LM1_TW2:
        items.append(_check_ns_chains(T, quotient))
    return CheckReport(tuple(items))


def _check_ns_chains(T: AlgebraType, quotient) -> CheckItem:
    """Each nonsingular direction reaches each other through short/real steps."""
    ns_set = set(quotient.ns)
    re_set = set(quotient.re)
    short = set(quotient.length_global.get("sh", ()))
    bad = []
    for start in quotient.ns:
        for end in quotient.ns:
            if _ns_reachable(start, end, ns_set, re_set, short):
                continue
            bad.append(f"{start} -> {end}")
    return CheckItem("nonsingular-chains", not bad, tuple(bad[:5]))


def _ns_reachable(start: RootVec, end: RootVec, ns_set: set[RootVec],
                  re_set: set[RootVec], short: set[RootVec]) -> bool:
    diff = end - start
    if diff.is_zero():
        return True
    for b1 in short:
        first = start + b1
        if first == end:
            return True
        if first not in ns_set:
            continue
        for b2 in re_set:
            second = first + b2
            if second == end:
                return True
            if second not in ns_set:
                continue
            if (end - second) in re_set:
                return True
    return False


def verify_suite(T: AlgebraType, window: Window, corrupt: bool = False,
                 ) -> list[tuple[str, CheckReport]]:
    """All root-system checks for one type, named for reporting."""
    return [
        ("table-oracle", check_table_oracle(T, window, corrupt=corrupt)),
        ("table-extensions", check_table4(T)),
        ("partition", check_partition(T, window)),
        ("nonsingular-sums", check_ns_sums(T, window)),
        ("nonsingular-real-sums", check_ns_plus_real(T, window)),
        ("progressions", check_progressions(T)),
        ("min-period", check_min_period(T, window)),
        ("reflection-closure", check_reflection_closure(T, window)),
        ("subsystems", check_subsystems(T, window)),
        ("quotient", check_quotient(T)),
    ]
