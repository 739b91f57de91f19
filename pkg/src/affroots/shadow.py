"""Shadow labelings of real roots and the combinatorics they induce.

A labeling assigns, per quotient direction, a pattern saying which part of
the direction's delta-string acts locally nilpotently ("ln") and which acts
injectively ("in").  Only four pattern shapes can occur; labelings are
stored in that compressed form and per-root labels are derived.  On top of
the labels sit the closure-axiom checker, the per-subsystem tight/hybrid
classification, the associated parabolic subsets, a rational functional
realizing their union as a half-space, and the finite-support extremal
weight search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Callable, Iterable, Optional, Sequence

from .lattice import (
    RationalFunctional,
    RootClass,
    RootVec,
    bilinear,
    reflect,
)
from .rootsys import (
    AlgebraType,
    Progression,
    RootSystemView,
    Window,
    base_and_theta,
    contains,
    contains_even,
    dot_quotient,
    enumerate_roots,
    extension_sets,
    subsystem,
    subsystem_contains,
    subsystem_directions,
    subsystem_period,
)

LN = "ln"
IN = "in"


class NonRealRootError(ValueError):
    """Labels exist only for nonzero real roots."""


class NotHybridError(ValueError):
    """The requested construction needs a hybrid subsystem."""


class MixedOrientationError(ValueError):
    """A subsystem mixes both hybrid orientations; no shadow does that."""


class IncompatibleLabelingError(ValueError):
    """The two subsystems carry opposite hybrid orientations."""


class InvalidModelError(ValueError):
    """A support model failed its step-flag verification."""


class NoExtremalWeightError(ValueError):
    """No support point is extremal for the given step set."""


FULL_LN = "full-ln"
FULL_IN = "full-in"
UP_NILPOTENT = "up-nilpotent"  # entries >= boundary are ln, below are in
UP_INJECTIVE = "up-injective"  # entries >= boundary are in, below are ln


@dataclass(frozen=True)
class Pattern:
    kind: str
    boundary: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind in (FULL_LN, FULL_IN):
            if self.boundary is not None:
                raise ValueError("full patterns carry no boundary")
        elif self.kind in (UP_NILPOTENT, UP_INJECTIVE):
            if self.boundary is None:
                raise ValueError("hybrid patterns need a boundary")
        else:
            raise ValueError(f"unknown pattern kind {self.kind!r}")

    @property
    def hybrid(self) -> bool:
        return self.kind in (UP_NILPOTENT, UP_INJECTIVE)

    def label_at(self, level: int) -> str:
        if self.kind == FULL_LN:
            return LN
        if self.kind == FULL_IN:
            return IN
        if self.kind == UP_NILPOTENT:
            return LN if level >= self.boundary else IN
        return IN if level >= self.boundary else LN

    def reversed(self, step: int) -> Pattern:
        """The pattern seen at level -v, with the boundary snapped to the string step."""
        if self.kind == FULL_LN or self.kind == FULL_IN:
            return self
        kind = UP_INJECTIVE if self.kind == UP_NILPOTENT else UP_NILPOTENT
        return Pattern(kind, -self.boundary + step)


@dataclass(frozen=True)
class ShadowLabeling:
    """Per-direction patterns inducing ln/in labels on all real roots."""

    type: AlgebraType
    patterns: tuple[tuple[RootVec, Pattern], ...]

    @property
    def pattern_map(self) -> dict[RootVec, Pattern]:
        return dict(self.patterns)

    def pattern_of_direction(self, direction: RootVec) -> Pattern:
        for d, pat in self.patterns:
            if d == direction:
                return pat
        raise KeyError(direction)

    def with_pattern(self, direction: RootVec, pat: Pattern) -> ShadowLabeling:
        items = [(d, pat if d == direction else p) for d, p in self.patterns]
        return ShadowLabeling(self.type, tuple(items))

    def negated(self) -> ShadowLabeling:
        """Labeling L' with L'(beta) = L(-beta); swaps the two orientations."""
        pmap = self.pattern_map
        items = tuple(
            (d, pmap[-d].reversed(direction_step(self.type, d).r))
            for d, _ in self.patterns
        )
        return ShadowLabeling(self.type, items)


def label_of(labeling: ShadowLabeling, beta: RootVec) -> str:
    """Label of a nonzero real root under the labeling."""
    T = labeling.type
    if not contains(T, beta):
        raise NonRealRootError(f"{beta} is not a root")
    if beta.is_delta_multiple() or bilinear(beta, beta) == 0:
        raise NonRealRootError(f"{beta} is not a nonzero real root")
    return labeling.pattern_of_direction(beta.finite_part()).label_at(beta.d)


def direction_step(T: AlgebraType, direction: RootVec) -> Progression:
    return extension_sets(T, direction)[0]


def _snap_up(prog: Progression, x: Q) -> int:
    """Smallest progression level >= x."""
    c = math.ceil(Q(x - prog.k0, prog.r))
    return prog.k0 + prog.r * c


def from_functional(T: AlgebraType, psi: RationalFunctional) -> ShadowLabeling:
    """Labeling with beta ln exactly when psi(beta) >= 0.

    Functional-induced labelings satisfy every closure axiom by linearity;
    the sign of psi(delta) selects the hybrid orientation, and psi(delta)=0
    makes every direction full.
    """
    quotient = dot_quotient(T)
    psid = psi(T.delta())
    items = []
    for direction in quotient.re:
        prog = direction_step(T, direction)
        value = psi(direction)
        if psid > 0:
            items.append((direction, Pattern(UP_NILPOTENT, _snap_up(prog, -value / psid))))
        elif psid < 0:
            bound = value / -psid
            b = _snap_up(prog, bound)
            if b == bound:
                b += prog.r
            items.append((direction, Pattern(UP_INJECTIVE, b)))
        else:
            items.append((direction, Pattern(FULL_LN if value >= 0 else FULL_IN)))
    return ShadowLabeling(T, tuple(items))


_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)

KIND_ALL_UP = "all-up"
KIND_ALL_DOWN = "all-down"
KIND_MIXED_TIGHT = "mixed-tight"

SYNTH_KINDS = (KIND_ALL_UP, KIND_ALL_DOWN, KIND_MIXED_TIGHT)


def synth_labeling(T: AlgebraType, seed: int, kind: str) -> ShadowLabeling:
    """Deterministic labeling generator.

    all-up / all-down draw a generic functional with positive / negative
    value on delta, which makes every direction hybrid with the matching
    orientation.  mixed-tight uses a functional vanishing on delta, so every
    direction is full.  Coordinate values get distinct prime denominators,
    which rules out accidental zeros on roots.
    """
    if kind not in SYNTH_KINDS:
        raise ValueError(f"unknown labeling kind {kind!r}")
    rng = random.Random(f"{kind}:{seed}:{T.family.value}:{T.k}:{T.l}")
    if T.k + T.l > len(_PRIMES):
        raise ValueError("rank too large for the generator's prime table")
    values = []
    for idx in range(T.k + T.l):
        a = rng.choice((-1, 0, 1))
        s = rng.choice((1, 2, -1, -2))
        values.append(Q(a) + Q(s, _PRIMES[idx]))
    z_d = {KIND_ALL_UP: Q(1), KIND_ALL_DOWN: Q(-1), KIND_MIXED_TIGHT: Q(0)}[kind]
    psi = RationalFunctional(z_d, tuple(values[: T.k]), tuple(values[T.k:]))
    labeling = from_functional(T, psi)
    for _, pat in labeling.patterns:
        if pat.hybrid:
            assert abs(pat.boundary) <= 6
    return labeling


def pattern_of(labels: Sequence[tuple[RootVec, str]]) -> tuple[str, Optional[int]]:
    """Classify a labeled delta-string: 'i', 'ii', 'iii', 'iv' or 'inconsistent'.

    'iii' strings are ln then in as the level grows (boundary = first in
    level), 'iv' strings are in then ln (boundary = first ln level).
    """
    if not labels:
        raise ValueError("empty string")
    directions = {vec.finite_part() for vec, _ in labels}
    if len(directions) != 1:
        raise ValueError("labels must range over a single direction")
    ordered = sorted(labels, key=lambda pair: pair[0].d)
    seq = [lab for _, lab in ordered]
    for lab in seq:
        if lab not in (LN, IN):
            raise ValueError(f"bad label {lab!r}")
    switches = [idx for idx in range(1, len(seq)) if seq[idx] != seq[idx - 1]]
    if not switches:
        return ("i", None) if seq[0] == LN else ("ii", None)
    if len(switches) > 1:
        return ("inconsistent", None)
    idx = switches[0]
    boundary = ordered[idx][0].d
    if seq[0] == LN:
        return ("iii", boundary)
    return ("iv", boundary)


@dataclass(frozen=True)
class CheckItem:
    name: str
    passed: bool
    witnesses: tuple[str, ...] = ()


@dataclass(frozen=True)
class CheckReport:
    items: tuple[CheckItem, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def item(self, name: str) -> CheckItem:
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)


def _label_table(labeling: ShadowLabeling, window: Window) -> dict[RootVec, str]:
    T = labeling.type
    pmap = labeling.pattern_map
    table: dict[RootVec, str] = {}
    for vec in enumerate_roots(T, window).real_vectors():
        pat = pmap.get(vec.finite_part())
        if pat is not None:
            table[vec] = pat.label_at(vec.d)
    return table


def check_axioms(labeling: ShadowLabeling, window: Window) -> CheckReport:
    """Verify the labeling's closure and shape axioms exhaustively on a window.

    Items: totality of the pattern table, the boundary linkage between a
    direction and its negative, closure of ln under sums and under
    beta1 + 2*beta2, reflection symmetry of in-labels through symmetric
    directions, and absence of the impossible mixed string shape.
    """
    T = labeling.type
    pmap = labeling.pattern_map
    quotient = dot_quotient(T)
    items: list[CheckItem] = []

    missing = [str(d) for d in quotient.re if d not in pmap]
    items.append(CheckItem("totality", not missing, tuple(missing[:5])))

    link_bad: list[str] = []
    for direction in quotient.re:
        pat = pmap.get(direction)
        opp = pmap.get(-direction)
        if pat is None or opp is None:
            continue
        if pat.hybrid != opp.hybrid:
            link_bad.append(f"{direction}: {pat.kind} vs {opp.kind}")
            continue
        if pat.hybrid:
            if pat.kind != opp.kind:
                link_bad.append(f"{direction}: {pat.kind} vs {opp.kind}")
                continue
            r = direction_step(T, direction).r
            if pat.boundary + opp.boundary not in (0, r, 2 * r):
                link_bad.append(f"{direction}: boundaries {pat.boundary},{opp.boundary}")
    items.append(CheckItem("pair-linkage", not link_bad, tuple(link_bad[:5])))

    table = _label_table(labeling, window)
    ln_roots = sorted((v for v, lab in table.items() if lab == LN), key=RootVec.sort_key)

    def _real_label(vec: RootVec) -> Optional[str]:
        if not contains(T, vec) or bilinear(vec, vec) == 0:
            return None
        pat = pmap.get(vec.finite_part())
        return None if pat is None else pat.label_at(vec.d)

    close1_bad: list[str] = []
    for a_idx in range(len(ln_roots)):
        for b_idx in range(a_idx, len(ln_roots)):
            total = ln_roots[a_idx] + ln_roots[b_idx]
            lab = _real_label(total)
            if lab == IN:
                close1_bad.append(f"{ln_roots[a_idx]} + {ln_roots[b_idx]} -> {total}")
    items.append(CheckItem("sum-closure", not close1_bad, tuple(close1_bad[:5])))

    close2_bad: list[str] = []
    for a in ln_roots:
        for b in ln_roots:
            total = a + 2 * b
            lab = _real_label(total)
            if lab == IN:
                close2_bad.append(f"{a} + 2*{b} -> {total}")
    items.append(CheckItem("double-sum-closure", not close2_bad, tuple(close2_bad[:5])))

    refl_bad: list[str] = []
    symmetric = [v for v, lab in table.items() if table.get(-v) == lab]
    for alpha in symmetric:
        for gamma, lab in table.items():
            image = reflect(gamma, alpha)
            image_lab = _real_label(image)
            if image_lab is not None and image_lab != lab:
                refl_bad.append(f"r_{alpha}({gamma}) = {image}: {lab} vs {image_lab}")
    items.append(CheckItem("reflection-symmetry", not refl_bad, tuple(refl_bad[:5])))

    case4_bad: list[str] = []
    for direction in quotient.re:
        pat = pmap.get(direction)
        opp = pmap.get(-direction)
        if pat is None or opp is None or pat.kind != UP_INJECTIVE:
            continue
        r = direction_step(T, direction).r
        level = pat.boundary - r  # last ln level before the in tail
        if opp.label_at(-level) == LN and opp.label_at(-level - r) == IN:
            gamma = direction + labeling.type.delta(level)
            case4_bad.append(f"{gamma} ln, step {r}")
    items.append(CheckItem("no-mixed-string", not case4_bad, tuple(case4_bad[:5])))

    return CheckReport(tuple(items))


def inject_mixed_string(labeling: ShadowLabeling) -> ShadowLabeling:
    """Corrupt one direction pair into the impossible mixed string shape."""
    T = labeling.type
    direction = dot_quotient(T).re1[0]
    prog = direction_step(T, direction)
    below = prog.k0 - prog.r  # largest progression level < 0 (since 0 <= k0 < r)
    bad = labeling.with_pattern(direction, Pattern(UP_INJECTIVE, below + prog.r))
    return bad.with_pattern(-direction, Pattern(UP_NILPOTENT, -below))


def inject_sum_violation(T: AlgebraType, window: Window) -> ShadowLabeling:
    """All-ln labeling with one direction flipped to break sum closure."""
    all_ln = ShadowLabeling(T, tuple((d, Pattern(FULL_LN)) for d in dot_quotient(T).re))
    view = enumerate_roots(T, window)
    reals = sorted(view.real_vectors(), key=RootVec.sort_key)
    real_set = set(reals)
    for a in reals:
        for b in reals:
            total = a + b
            if total in real_set and bilinear(total, total) != 0:
                return all_ln.with_pattern(total.finite_part(), Pattern(FULL_IN))
    raise RuntimeError("no real sum found in window")


# -- tight/hybrid classification and parabolic subsets ------------------------

TIGHT = "tight"
UP_HYBRID = "up-nilpotent-hybrid"
DOWN_HYBRID = "down-nilpotent-hybrid"


@dataclass(frozen=True)
class SubsystemVerdict:
    tags: tuple[str, str]

    @property
    def compatible(self) -> bool:
        return not (UP_HYBRID in self.tags and DOWN_HYBRID in self.tags)

    @property
    def both_hybrid(self) -> bool:
        return all(tag in (UP_HYBRID, DOWN_HYBRID) for tag in self.tags)


def classify_subsystems(labeling: ShadowLabeling) -> SubsystemVerdict:
    """Tag each even subsystem as tight or hybrid (with orientation)."""
    T = labeling.type
    pmap = labeling.pattern_map
    tags = []
    for i in (1, 2):
        kinds = {pmap[d].kind for d, _ in subsystem_directions(T, i)}
        if FULL_LN in kinds or FULL_IN in kinds:
            tags.append(TIGHT)
        elif kinds == {UP_NILPOTENT}:
            tags.append(UP_HYBRID)
        elif kinds == {UP_INJECTIVE}:
            tags.append(DOWN_HYBRID)
        else:
            raise MixedOrientationError(f"subsystem {i} mixes hybrid orientations")
    return SubsystemVerdict((tags[0], tags[1]))


@dataclass(frozen=True)
class ParabolicSet:
    """An orientation-dependent parabolic subset of one even subsystem."""

    type: AlgebraType
    subsystem: int
    orientation: str
    roots: tuple[RootVec, ...]
    report: CheckReport
    predicate: Callable[[RootVec], bool] = field(compare=False, repr=False)

    def contains_root(self, x: RootVec) -> bool:
        return self.predicate(x)


def parabolic_predicate(labeling: ShadowLabeling, i: int, orientation: str,
                        ) -> Callable[[RootVec], bool]:
    """Membership test for the labeling's parabolic subset of subsystem i."""
    T = labeling.type
    pmap = labeling.pattern_map

    def pred(x: RootVec) -> bool:
        if not subsystem_contains(T, i, x):
            return False
        if x.is_delta_multiple():
            return x.d >= 0 if orientation == UP_HYBRID else x.d <= 0
        pat = pmap[x.finite_part()]
        if pat.label_at(x.d) == LN:
            return True
        opp = pmap[(-x).finite_part()]
        return opp.label_at(-x.d) == IN

    return pred


def build_parabolic(labeling: ShadowLabeling, i: int, window: Window) -> ParabolicSet:
    """The parabolic subset of hybrid subsystem i, with covering/closure checks."""
    verdict = classify_subsystems(labeling)
    orientation = verdict.tags[i - 1]
    if orientation == TIGHT:
        raise NotHybridError(f"subsystem {i} is tight")
    T = labeling.type
    pred = parabolic_predicate(labeling, i, orientation)
    view = subsystem(T, i, window)
    roots = tuple(sorted((v for v in view.vectors() if pred(v)), key=RootVec.sort_key))

    cover_bad = [str(v) for v in view.vectors() if not (pred(v) or pred(-v))]
    closure_bad = []
    for a in roots:
        for b in roots:
            total = a + b
            if subsystem_contains(T, i, total) and not pred(total):
                closure_bad.append(f"{a} + {b} -> {total}")
    s_delta = T.delta(subsystem_period(T, i))
    if orientation == DOWN_HYBRID:
        s_delta = -s_delta
    marker_ok = pred(s_delta) and not pred(-s_delta)
    report = CheckReport((
        CheckItem("covering", not cover_bad, tuple(cover_bad[:5])),
        CheckItem("closure", not closure_bad, tuple(closure_bad[:5])),
        CheckItem("imaginary-marker", marker_ok,
                  () if marker_ok else (str(s_delta),)),
    ))
    return ParabolicSet(T, i, orientation, roots, report, pred)


# -- the separating functional -----------------------------------------------


def _solve_functional(T: AlgebraType, basis: Sequence[RootVec], values: Sequence[Q],
                      ) -> RationalFunctional:
    """The functional taking the given values on a spanning basis."""
    n = 1 + T.k + T.l
    if len(basis) != n:
        raise ValueError("need a full basis")
    rows = [[Q(b.coords()[c]) for c in range(n)] + [Q(values[idx])]
            for idx, b in enumerate(basis)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            raise ValueError("functional basis is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                fac = rows[r][col]
                rows[r] = [a - fac * b for a, b in zip(rows[r], rows[col])]
    z = [rows[c][n] for c in range(n)]
    return RationalFunctional(z[0], tuple(z[1:1 + T.k]), tuple(z[1 + T.k:]))


def _adapt_base(labeling: ShadowLabeling, i: int, orientation: str,
                ) -> tuple[list[RootVec], int]:
    """Reflect the canonical base into the parabolic subset.

    Returns the adapted base and the index of the affine member's image.
    Reflections through a simple root outside the subset strictly shrink the
    finite discrepancy, so the loop terminates.
    """
    T = labeling.type
    data = base_and_theta(T, i)
    pred = parabolic_predicate(labeling, i, orientation)
    base = list(data.affine_base)
    affine_idx = len(base) - 1
    for _ in range(100_000):
        outside = next((idx for idx, v in enumerate(base) if not pred(v)), None)
        if outside is None:
            return base, affine_idx
        mirror = base[outside]
        base = [reflect(v, mirror) for v in base]
    raise RuntimeError("base adaptation failed to converge")


@dataclass(frozen=True)
class FunctionalWitness:
    """A functional realizing the union of the two parabolic subsets."""

    functional: RationalFunctional
    case: int
    orientation: str
    s_ratio: Q
    base1: tuple[RootVec, ...]
    base2: tuple[RootVec, ...]
    affine1: RootVec
    affine2: RootVec
    theta1: RootVec
    theta2: RootVec
    affine2_value: Q
    affine2_expected: Q
    strict_counts: tuple[int, int]


_CASE_AFFINE1 = {1: Q(0), 2: Q(1), 3: None, 4: Q(0)}  # case 3 value is 1/s
_CASE_SIDE2_NUM = {1: Q(1), 2: Q(1), 3: Q(2), 4: Q(1, 2)}


def build_zeta(labeling: ShadowLabeling) -> FunctionalWitness:
    """Rational functional whose nonnegativity region cuts out P1 union P2.

    Requires both subsystems hybrid with a common orientation.  The
    construction follows the explicit four-case value tables keyed by
    whether each subsystem's affine base member is strictly positive; the
    down-nilpotent orientation is handled by building on the negated
    labeling and negating the result.
    """
    verdict = classify_subsystems(labeling)
    if not verdict.both_hybrid:
        raise NotHybridError(f"need two hybrid subsystems, got {verdict.tags}")
    if not verdict.compatible:
        raise IncompatibleLabelingError(f"orientations {verdict.tags} are incompatible")
    if verdict.tags[0] == DOWN_HYBRID:
        up = build_zeta(labeling.negated())
        return FunctionalWitness(
            functional=-up.functional,
            case=up.case,
            orientation=DOWN_HYBRID,
            s_ratio=up.s_ratio,
            base1=up.base1, base2=up.base2,
            affine1=up.affine1, affine2=up.affine2,
            theta1=up.theta1, theta2=up.theta2,
            affine2_value=up.affine2_value,
            affine2_expected=up.affine2_expected,
            strict_counts=up.strict_counts,
        )

    T = labeling.type
    s1 = subsystem_period(T, 1)
    s2 = subsystem_period(T, 2)
    s = Q(s2, s1)

    bases: list[list[RootVec]] = []
    affines: list[RootVec] = []
    thetas: list[RootVec] = []
    marks_by_side: list[list[int]] = []
    strict: list[list[bool]] = []
    for i in (1, 2):
        base, affine_idx = _adapt_base(labeling, i, UP_HYBRID)
        pred = parabolic_predicate(labeling, i, UP_HYBRID)
        affine = base[affine_idx]
        finite = [v for idx, v in enumerate(base) if idx != affine_idx]
        s_i = subsystem_period(T, i)
        coeffs = _theta_coefficients(T, i, finite, affine, s_i)
        bases.append(finite + [affine])
        affines.append(affine)
        thetas.append(T.delta(s_i) - affine)
        marks_by_side.append(coeffs)
        strict.append([pred(v) and not pred(-v) for v in finite + [affine]])

    fin1, fin2 = bases[0][:-1], bases[1][:-1]
    a1_strict = strict[0][-1]
    a2_strict = strict[1][-1]
    case = {(False, False): 1, (True, True): 2, (True, False): 3, (False, True): 4}[
        (a1_strict, a2_strict)]

    t_count = sum(1 for flag in strict[0][:-1] if flag)
    k_count = sum(1 for flag in strict[1][:-1] if flag)

    values: dict[RootVec, Q] = {}
    for idx, v in enumerate(fin1):
        if strict[0][idx]:
            values[v] = Q(1) / (s * t_count * marks_by_side[0][idx])
        else:
            values[v] = Q(0)
    a1_value = _CASE_AFFINE1[case]
    values[affines[0]] = Q(1) / s if a1_value is None else a1_value
    num2 = _CASE_SIDE2_NUM[case]
    for idx, v in enumerate(fin2):
        if strict[1][idx]:
            values[v] = num2 / (k_count * marks_by_side[1][idx])
        else:
            values[v] = Q(0)

    basis = fin1 + [affines[0]] + fin2
    functional = _solve_functional(T, basis, [values[v] for v in basis])
    affine2_value = functional(affines[1])
    expected = {1: Q(0), 2: s, 3: Q(0), 4: Q(1, 2)}[case]
    return FunctionalWitness(
        functional=functional,
        case=case,
        orientation=UP_HYBRID,
        s_ratio=s,
        base1=tuple(bases[0]), base2=tuple(bases[1]),
        affine1=affines[0], affine2=affines[1],
        theta1=thetas[0], theta2=thetas[1],
        affine2_value=affine2_value,
        affine2_expected=expected,
        strict_counts=(t_count, k_count),
    )


def _theta_coefficients(T: AlgebraType, i: int, finite: Sequence[RootVec],
                        affine: RootVec, s_i: int) -> list[int]:
    """Positive integer coordinates of (s_i*delta - affine) in the finite part."""
    from .rootsys import _coord_slots, _solve_in_base

    theta = T.delta(s_i) - affine
    sol = _solve_in_base(list(finite), theta, _coord_slots(T, i))
    if sol is None:
        raise RuntimeError("highest root is not spanned by the finite base")
    coeffs = []
    for c in sol:
        if c.denominator != 1 or c < 1:
            raise RuntimeError(f"non-positive highest-root coefficient {c}")
        coeffs.append(int(c))
    return coeffs


# -- triangular decompositions -----------------------------------------------

TARGET_FULL = "full"
TARGET_EVEN = "even"


@dataclass(frozen=True)
class TriangularDecomposition:
    zeta: RationalFunctional
    plus: tuple[RootVec, ...]
    zero: tuple[RootVec, ...]
    minus: tuple[RootVec, ...]

    @property
    def trivial(self) -> bool:
        return not self.plus and not self.minus


def triangular_decompose(zeta: RationalFunctional, T: AlgebraType, window: Window,
                         target: str = TARGET_FULL) -> TriangularDecomposition:
    """Sign decomposition of the (even part of the) root system under zeta."""
    if target not in (TARGET_FULL, TARGET_EVEN):
        raise ValueError(f"unknown target {target!r}")
    view = enumerate_roots(T, window)
    plus, zero, minus = [], [], []
    for entry in view:
        if target == TARGET_EVEN and not contains_even(T, entry.vec):
            continue
        value = zeta(entry.vec)
        (plus if value > 0 else zero if value == 0 else minus).append(entry.vec)
    return TriangularDecomposition(zeta, tuple(plus), tuple(zero), tuple(minus))


def is_parabolic(decomp: TriangularDecomposition, T: AlgebraType,
                 target: str = TARGET_FULL) -> CheckReport:
    """Covering and closure of plus+zero, scanned exhaustively on the window."""
    members = set(decomp.plus) | set(decomp.zero)
    everything = members | set(decomp.minus)

    def in_target(x: RootVec) -> bool:
        return contains(T, x) if target == TARGET_FULL else contains_even(T, x)

    cover_bad = [str(v) for v in everything if not (v in members or -v in members)]
    closure_bad = []
    ordered = sorted(members, key=RootVec.sort_key)
    for a in ordered:
        for b in ordered:
            total = a + b
            if in_target(total) and total in everything and total not in members:
                closure_bad.append(f"{a} + {b} -> {total}")
    return CheckReport((
        CheckItem("covering", not cover_bad, tuple(cover_bad[:5])),
        CheckItem("closure", not closure_bad, tuple(closure_bad[:5])),
    ))


# -- finite-support extremal weights ------------------------------------------


@dataclass(frozen=True)
class SupportModel:
    """A finite weight support together with a finite set of step vectors."""

    supp: frozenset[RootVec]
    steps: tuple[RootVec, ...]

    def verify(self) -> CheckReport:
        """Check the step flags actually used by the extremal search.

        Forward chains terminate automatically on a finite support; the
        usable trace of downward shift-closure is convexity of the support
        along every step direction, checked chain by chain.
        """
        items: list[CheckItem] = []
        items.append(CheckItem("nonempty-support", bool(self.supp)))
        step_bad = [str(s) for s in self.steps if s.is_zero()]
        items.append(CheckItem("nonzero-steps", not step_bad, tuple(step_bad)))
        for s_idx, step in enumerate(self.steps):
            gaps = []
            for lam in self.supp:
                if lam - step in self.supp:
                    continue  # only walk from chain starts
                probe = lam
                while probe + step in self.supp:
                    probe = probe + step
                # anything further out along the same line is a convexity gap
                beyond = probe + step
                for _ in range(self._diameter(step)):
                    beyond = beyond + step
                    if beyond in self.supp:
                        gaps.append(f"{lam} along {step}")
                        break
            items.append(CheckItem(f"convex-step-{s_idx}", not gaps, tuple(gaps[:5])))
        return CheckReport(tuple(items))

    def _diameter(self, step: RootVec) -> int:
        """Upper bound on how many step lengths fit inside the support box."""
        coords = [lam.coords() for lam in self.supp]
        if not coords:
            return 0
        best = 0
        for axis, move in enumerate(step.coords()):
            if move == 0:
                continue
            spread = max(c[axis] for c in coords) - min(c[axis] for c in coords)
            span = spread // abs(move)
            best = span if best == 0 else min(best, span)
        return best + 1


def _positivity_functional(steps: Sequence[RootVec]) -> Optional[tuple[int, ...]]:
    """Integer functional positive on every step, if one is easy to find."""
    if not steps:
        return None
    dim = len(steps[0].coords())
    candidates = [tuple(sum(s.coords()[c] for s in steps) for c in range(dim))]
    for s in steps:
        candidates.append(s.coords())
    rng = random.Random(0)
    for _ in range(200):
        candidates.append(tuple(rng.randint(-3, 3) for _ in range(dim)))
    for w in candidates:
        if all(sum(a * b for a, b in zip(w, s.coords())) > 0 for s in steps):
            return w
    return None


class _ComboChecker:
    """Decides whether a vector is a nonnegative integer combination of steps."""

    def __init__(self, steps: Sequence[RootVec]):
        self.steps = list(steps)
        self.w = _positivity_functional(steps)
        self.memo: dict[tuple[int, ...], bool] = {}

    def reachable(self, v: RootVec) -> bool:
        depth_cap = None if self.w is not None else 64
        return self._go(v.coords(), depth_cap)

    def _go(self, coords: tuple[int, ...], depth_cap: Optional[int]) -> bool:
        if all(c == 0 for c in coords):
            return True
        if depth_cap is not None and depth_cap <= 0:
            raise RuntimeError("combination search exceeded depth cap; steps span no half-space")
        if self.w is not None:
            value = sum(a * b for a, b in zip(self.w, coords))
            if value <= 0:
                return False
        cached = self.memo.get(coords)
        if cached is not None:
            return cached
        self.memo[coords] = False  # guards cycles when no functional exists
        out = False
        for s in self.steps:
            nxt = tuple(a - b for a, b in zip(coords, s.coords()))
            if self._go(nxt, None if depth_cap is None else depth_cap - 1):
                out = True
                break
        self.memo[coords] = out
        return out


def extremal_weight(model: SupportModel) -> RootVec:
    """A support point lambda with (lambda + nonneg span of steps) hitting only itself.

    Implements the iterated filtering construction: repeatedly discard
    points that still move forward along some step, then verify the
    defining property of the survivors directly and return the
    lexicographically greatest verified one.
    """
    report = model.verify()
    if not report.passed:
        bad = [item.name for item in report.items if not item.passed]
        raise InvalidModelError(f"support model failed verification: {bad}")
    survivors = set(model.supp)
    for step in model.steps:
        survivors = {lam for lam in survivors if lam + step not in model.supp}
        if not survivors:
            raise NoExtremalWeightError("iterated filtering emptied the support")
    checker = _ComboChecker(model.steps)
    for lam in sorted(survivors, key=RootVec.sort_key, reverse=True):
        if all(mu == lam or not checker.reachable(mu - lam) for mu in model.supp):
            return lam
    raise NoExtremalWeightError("no survivor satisfies the extremal property")
