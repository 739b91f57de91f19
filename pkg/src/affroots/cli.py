"""Command-line front end with a stable JSON interchange format.

Four subcommands: `enumerate` exports windowed root lists, `verify` runs the
root-system invariant suite, `shadow` exercises labelings, and `realize`
cross-checks the matrix models.  Reports are deterministic for a fixed
configuration; the exit code is zero exactly when the report passes.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .lattice import RootClass
from .rootsys import (
    FAMILY_BY_CLI_NAME,
    AlgebraType,
    Family,
    Window,
    enumerate_roots,
)
from . import realization, shadow, verify


@dataclass
class RunConfig:
    command: str
    type_name: Optional[str] = None
    k: int = 1
    l: int = 1
    window: int = 8
    seed: int = 0
    seeds: int = 20
    kind: Optional[str] = None
    trials: int = 200
    inject: Optional[str] = None
    out: Optional[str] = None
    threads: int = 1

    def algebra_types(self, default: Sequence[AlgebraType]) -> list[AlgebraType]:
        if self.type_name is None:
            return list(default)
        family = FAMILY_BY_CLI_NAME.get(self.type_name)
        if family is None:
            raise UsageError(f"unknown type {self.type_name!r}; choose from "
                             + ", ".join(sorted(FAMILY_BY_CLI_NAME)))
        try:
            return [AlgebraType(family, self.k, self.l)]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def echo(self) -> dict:
        out = {"type": self.type_name, "k": self.k, "l": self.l,
               "window": self.window, "seed": self.seed, "threads": self.threads}
        if self.command == "shadow":
            out.update({"kind": self.kind, "seeds": self.seeds})
        if self.command == "realize":
            out.update({"trials": self.trials})
        if self.inject:
            out["inject"] = self.inject
        return out


class UsageError(ValueError):
    pass


@dataclass
class ReportItem:
    name: str
    status: str  # pass | fail | skip
    witnesses: tuple[str, ...] = ()
    time_s: float = 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status,
                "witnesses": list(self.witnesses), "time_s": round(self.time_s, 4)}


@dataclass
class Report:
    command: str
    config: dict
    items: list[ReportItem] = field(default_factory=list)
    started: float = field(default_factory=time.monotonic)

    @property
    def status(self) -> str:
        return "pass" if all(item.status != "fail" for item in self.items) else "fail"

    def add(self, name: str, report: shadow.CheckReport, elapsed: float) -> None:
        witnesses: list[str] = []
        for item in report.items:
            if item.passed:
                continue
            if item.witnesses:
                witnesses.extend(f"{item.name}: {wit}" for wit in item.witnesses)
            else:
                witnesses.append(item.name)
        self.items.append(ReportItem(name, "pass" if report.passed else "fail",
                                     tuple(witnesses[:8]), elapsed))

    def add_item(self, name: str, ok: bool, witnesses: Sequence[str] = (),
                 elapsed: float = 0.0) -> None:
        self.items.append(ReportItem(name, "pass" if ok else "fail",
                                     tuple(witnesses)[:8], elapsed))

    def skip(self, name: str, reason: str) -> None:
        self.items.append(ReportItem(name, "skip", (reason,), 0.0))

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "status": self.status,
            "items": [item.as_dict() for item in self.items],
            "elapsed_s": round(time.monotonic() - self.started, 4),
        }


def _timed(fn: Callable[[], shadow.CheckReport]) -> tuple[shadow.CheckReport, float]:
    start = time.monotonic()
    out = fn()
    return out, time.monotonic() - start


def run_enumerate(cfg: RunConfig) -> tuple[dict, int]:
    types = cfg.algebra_types(default=())
    if not types:
        raise UsageError("enumerate requires --type")
    T = types[0]
    view = enumerate_roots(T, Window(cfg.window))
    roots = [{
        "delta": e.vec.d,
        "eps": list(e.vec.e),
        "del": list(e.vec.f),
        "class": e.cls,
        "parity": e.parity,
    } for e in view]
    doc = {"type": T.cli_name, "k": T.k, "l": T.l, "window": cfg.window, "roots": roots}
    return doc, 0


def run_verify(cfg: RunConfig) -> tuple[dict, int]:
    report = Report("verify", cfg.echo())
    types = cfg.algebra_types(default=verify.small_grid())
    window = Window(cfg.window)
    corrupt = cfg.inject == "corrupt-membership"

    def one(T: AlgebraType) -> list[tuple[str, shadow.CheckReport, float]]:
        out = []
        for name, rep in _timed_suite(T, window, corrupt):
            out.append((f"{T.cli_name}[k={T.k},l={T.l}] {name}", rep[0], rep[1]))
        return out

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        for chunk in pool.map(one, types):
            for name, rep, elapsed in chunk:
                report.add(name, rep, elapsed)
    doc = report.as_dict()
    return doc, 0 if report.status == "pass" else 1


def _timed_suite(T: AlgebraType, window: Window, corrupt: bool):
    for name, make in (
        ("table-oracle", lambda: verify.check_table_oracle(T, window, corrupt=corrupt)),
        ("table-extensions", lambda: verify.check_table4(T)),
        ("partition", lambda: verify.check_partition(T, window)),
        ("nonsingular-sums", lambda: verify.check_ns_sums(T, window)),
        ("nonsingular-real-sums", lambda: verify.check_ns_plus_real(T, window)),
        ("progressions", lambda: verify.check_progressions(T)),
        ("min-period", lambda: verify.check_min_period(T, window)),
        ("reflection-closure", lambda: verify.check_reflection_closure(T, window)),
        ("subsystems", lambda: verify.check_subsystems(T, window)),
        ("quotient", lambda: verify.check_quotient(T)),
    ):
        yield name, _timed(make)


_SHADOW_DEFAULT = (
    AlgebraType(Family.A2K_2LM1_TW2, 1, 1),
    AlgebraType(Family.A2KM1_2LM1_TW2, 1, 2),
    AlgebraType(Family.A2K_2L_TW4, 1, 1),
    AlgebraType(Family.D_TW2, 1, 1),
)


def run_shadow(cfg: RunConfig) -> tuple[dict, int]:
    report = Report("shadow", cfg.echo())
    kinds = (cfg.kind,) if cfg.kind else shadow.SYNTH_KINDS
    types = cfg.algebra_types(default=_SHADOW_DEFAULT)
    window = Window(cfg.window)

    if cfg.inject:
        _run_shadow_injection(cfg, report, types[0], window)
        doc = report.as_dict()
        return doc, 0 if report.status == "pass" else 1

    for T in types:
        for kind in kinds:
            start = time.monotonic()
            axiom_bad: list[str] = []
            trip_bad: list[str] = []
            func_bad: list[str] = []
            tight_seen = False
            for seed in range(cfg.seeds):
                labeling = shadow.synth_labeling(T, seed, kind)
                axioms = shadow.check_axioms(labeling, window)
                if not axioms.passed:
                    axiom_bad.append(f"seed {seed}")
                if not _round_trip_ok(T, labeling, window):
                    trip_bad.append(f"seed {seed}")
                verdict = shadow.classify_subsystems(labeling)
                if not verdict.both_hybrid:
                    tight_seen = True
                    continue
                problem = _functional_problem(T, labeling, window)
                if problem:
                    func_bad.append(f"seed {seed}: {problem}")
            label = f"{T.cli_name}[k={T.k},l={T.l}] {kind}"
            elapsed = time.monotonic() - start
            report.add_item(f"{label} axioms x{cfg.seeds}", not axiom_bad, axiom_bad, elapsed)
            report.add_item(f"{label} pattern-round-trip", not trip_bad, trip_bad)
            if tight_seen:
                report.skip(f"{label} functional", "tight")
            else:
                report.add_item(f"{label} functional", not func_bad, func_bad)
    doc = report.as_dict()
    return doc, 0 if report.status == "pass" else 1


def _run_shadow_injection(cfg: RunConfig, report: Report, T: AlgebraType,
                          window: Window) -> None:
    if cfg.inject == "case4":
        labeling = shadow.inject_mixed_string(shadow.synth_labeling(T, cfg.seed, "all-up"))
        axioms, elapsed = _timed(lambda: shadow.check_axioms(labeling, window))
        report.add(f"{T.cli_name} injected-case4", axioms, elapsed)
    elif cfg.inject == "close1":
        labeling = shadow.inject_sum_violation(T, window)
        axioms, elapsed = _timed(lambda: shadow.check_axioms(labeling, window))
        report.add(f"{T.cli_name} injected-close1", axioms, elapsed)
    else:
        raise UsageError(f"unknown injection {cfg.inject!r}")


def _round_trip_ok(T: AlgebraType, labeling: shadow.ShadowLabeling,
                   window: Window) -> bool:
    for direction, pat in labeling.patterns:
        prog = shadow.direction_step(T, direction)
        string = [(direction + T.delta(d), pat.label_at(d))
                  for d in window.levels() if prog.member(d)]
        case, boundary = shadow.pattern_of(string)
        if pat.kind == shadow.FULL_LN and case != "i":
            return False
        if pat.kind == shadow.FULL_IN and case != "ii":
            return False
        if pat.kind == shadow.UP_INJECTIVE and (case, boundary) != ("iii", pat.boundary):
            return False
        if pat.kind == shadow.UP_NILPOTENT and (case, boundary) != ("iv", pat.boundary):
            return False
    return True


def _functional_problem(T: AlgebraType, labeling: shadow.ShadowLabeling,
                        window: Window) -> Optional[str]:
    verdict = shadow.classify_subsystems(labeling)
    witness = shadow.build_zeta(labeling)
    zeta = witness.functional
    if witness.affine2_value != witness.affine2_expected:
        return "case value"
    if witness.orientation == shadow.UP_HYBRID and not zeta(T.delta()) > 0:
        return "delta sign"
    preds = {i: shadow.parabolic_predicate(labeling, i, verdict.tags[i - 1])
             for i in (1, 2)}
    pmap = labeling.pattern_map
    for i in (1, 2):
        par = shadow.build_parabolic(labeling, i, window)
        if not par.report.passed:
            return f"parabolic #{i}"
        from .rootsys import subsystem as _sub
        for v in _sub(T, i, window).vectors():
            if (preds[1](v) or preds[2](v)) != (zeta(v) >= 0):
                return f"half-space {v}"
    from .rootsys import contains_even
    for entry in enumerate_roots(T, window):
        if entry.cls != RootClass.REAL or not contains_even(T, entry.vec):
            continue
        value = zeta(entry.vec)
        label = pmap[entry.vec.finite_part()].label_at(entry.vec.d)
        if value > 0 and label != shadow.LN:
            return f"sign {entry.vec}"
        if value < 0 and label != shadow.IN:
            return f"sign {entry.vec}"
    return None


_REALIZE_DEFAULT = (
    AlgebraType(Family.A2K_2LM1_TW2, 1, 1),
    AlgebraType(Family.A2KM1_2LM1_TW2, 2, 1),
    AlgebraType(Family.A2K_2L_TW4, 1, 1),
    AlgebraType(Family.D_TW2, 1, 1),
    AlgebraType(Family.D_TW2, 2, 1),
)


def run_realize(cfg: RunConfig) -> tuple[dict, int]:
    report = Report("realize", cfg.echo())
    types = cfg.algebra_types(default=_REALIZE_DEFAULT)
    window = Window(cfg.window)
    for T in types:
        try:
            realization.matrix_model(T)
        except realization.SizeCapError as exc:
            raise UsageError(str(exc)) from exc
        label = f"{T.cli_name}[k={T.k},l={T.l}]"
        if realization.matrix_model(T).identity_line is not None:
            report.skip(f"{label} identity-line",
                        "equal block sizes: zero-weight identity direction counted "
                        "in imaginary multiplicities")
        rep, elapsed = _timed(lambda: realization.verify_automorphism(T, cfg.trials, cfg.seed))
        report.add(f"{label} automorphism", rep, elapsed)
        rep, elapsed = _timed(lambda: _eigen_checks(T))
        report.add(f"{label} eigencomponents", rep, elapsed)
        rep, elapsed = _timed(lambda: _weight_checks(T, window))
        report.add(f"{label} weights-vs-roots", rep, elapsed)
        rep, elapsed = _timed(lambda: _operator_checks(T, cfg.seed))
        report.add(f"{label} operator-identities", rep, elapsed)
        if T.family is Family.A2KM1_2LM1_TW2:
            report.skip(f"{label} ladder-adjoint", "no odd real roots in this family")
        else:
            rep, elapsed = _timed(lambda: realization.verify_ladder_adjoint(T, 3))
            report.add(f"{label} ladder-adjoint", rep, elapsed)
    doc = report.as_dict()
    return doc, 0 if report.status == "pass" else 1


def _eigen_checks(T: AlgebraType) -> shadow.CheckReport:
    model = realization.matrix_model(T)
    comps = realization.eigen_decompose(T)
    total = sum(c.multiplicity for c in comps)
    items = [shadow.CheckItem("dimension-sum", total == model.dim,
                              () if total == model.dim else (f"{total} != {model.dim}",))]
    zeta = model.zeta()
    eq_bad = []
    for comp in comps:
        lam = realization.GQ_ONE
        for _ in range(comp.k_mod_n):
            lam = lam * zeta
        for mat in comp.basis:
            if not (model.twist(mat) - mat.scale(lam)).is_zero():
                eq_bad.append(f"class {comp.k_mod_n} weight {comp.weight}")
    items.append(shadow.CheckItem("eigen-equation", not eq_bad, tuple(eq_bad[:5])))
    rng = random.Random(11)
    grade_bad = []
    comps_nonzero = [c for c in comps if c.basis]
    for _ in range(40):
        c1 = rng.choice(comps_nonzero)
        c2 = rng.choice(comps_nonzero)
        x = rng.choice(c1.basis)
        y = rng.choice(c2.basis)
        br = realization.super_bracket(x, y)
        lam = realization.GQ_ONE
        for _ in range((c1.k_mod_n + c2.k_mod_n) % model.order):
            lam = lam * zeta
        if not (model.twist(br) - br.scale(lam)).is_zero():
            grade_bad.append(f"{c1.k_mod_n}+{c2.k_mod_n}")
    items.append(shadow.CheckItem("bracket-grading", not grade_bad, tuple(grade_bad[:5])))
    return shadow.CheckReport(tuple(items))


def _weight_checks(T: AlgebraType, window: Window) -> shadow.CheckReport:
    records = realization.cartan_weights(T, window)
    weight_set = {r.vec for r in records if not r.vec.is_delta_multiple()}
    root_set = {e.vec for e in enumerate_roots(T, window) if not e.vec.is_delta_multiple()}
    diff = sorted(weight_set ^ root_set, key=lambda v: v.sort_key())
    mult_bad = [str(r.vec) for r in records
                if not r.vec.is_delta_multiple() and r.multiplicity != 1]
    from .rootsys import parity as root_parity
    par_bad = [str(r.vec) for r in records
               if not r.vec.is_delta_multiple() and root_parity(T, r.vec) != r.parity]
    items = [
        shadow.CheckItem("weight-set", not diff, tuple(str(v) for v in diff[:5])),
        shadow.CheckItem("multiplicity-one", not mult_bad, tuple(mult_bad[:5])),
        shadow.CheckItem("parity-match", not par_bad, tuple(par_bad[:5])),
    ]
    return shadow.CheckReport(tuple(items))


def _operator_checks(T: AlgebraType, seed: int) -> shadow.CheckReport:
    model = realization.matrix_model(T)
    rng = random.Random(seed)
    items = []
    nil_bad = []
    for trial in range(5):
        x = model.random_element(rng, rng.choice((realization.PARITY_EVEN,
                                                  realization.PARITY_ODD)))
        y = model.random_element(rng, realization.PARITY_ODD)
        if not realization.verify_nilpot_identity(x, y, 2).passed:
            nil_bad.append(f"trial {trial}")
        y_even = model.random_element(rng, realization.PARITY_EVEN)
        if not realization.verify_even_binomial(x, y_even, 3).passed:
            nil_bad.append(f"binomial trial {trial}")
    items.append(shadow.CheckItem("reordering-identities", not nil_bad, tuple(nil_bad)))
    from fractions import Fraction as Q
    r1 = realization.ladder_scalar(1, Q(4))
    r2 = realization.ladder_scalar(2, Q(4))
    items.append(shadow.CheckItem("ladder-values", (r1, r2) == (Q(4), Q(-8)),
                                  () if (r1, r2) == (Q(4), Q(-8)) else (str((r1, r2)),)))
    member_bad = []
    for trial in range(10):
        x = model.random_element(rng, rng.choice((realization.PARITY_EVEN,
                                                  realization.PARITY_ODD)))
        y = model.random_element(rng, rng.choice((realization.PARITY_EVEN,
                                                  realization.PARITY_ODD)))
        if not model.contains(realization.super_bracket(x, y)):
            member_bad.append(f"trial {trial}")
    items.append(shadow.CheckItem("bracket-membership", not member_bad, tuple(member_bad)))
    return shadow.CheckReport(tuple(items))


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="affroots")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, need_type: bool = False) -> None:
        p.add_argument("--type", dest="type_name", required=need_type,
                       choices=sorted(FAMILY_BY_CLI_NAME), help="algebra family")
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--l", type=int, default=1)
        p.add_argument("--window", type=int, default=8)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")

    pe = sub.add_parser("enumerate", help="export the windowed root list as JSON")
    common(pe, need_type=True)
    pv = sub.add_parser("verify", help="root-system invariant suite")
    common(pv)
    pv.add_argument("--inject", choices=("corrupt-membership",), default=None)
    ps = sub.add_parser("shadow", help="labeling axiom and functional suite")
    common(ps)
    ps.add_argument("--kind", choices=shadow.SYNTH_KINDS, default=None)
    ps.add_argument("--seeds", type=int, default=20)
    ps.add_argument("--inject", choices=("case4", "close1"), default=None)
    pr = sub.add_parser("realize", help="matrix-model cross-checks")
    common(pr)
    pr.add_argument("--trials", type=int, default=200)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    threads = 1
    env = os.environ.get("AFFROOTS_THREADS")
    if env:
        try:
            threads = max(1, int(env))
        except ValueError as exc:
            raise UsageError(f"AFFROOTS_THREADS must be an integer, got {env!r}") from exc
    return RunConfig(
        command=args.command,
        type_name=getattr(args, "type_name", None),
        k=args.k, l=args.l,
        window=args.window,
        seed=args.seed,
        seeds=getattr(args, "seeds", 20),
        kind=getattr(args, "kind", None),
        trials=getattr(args, "trials", 200),
        inject=getattr(args, "inject", None),
        out=args.out,
        threads=threads,
    )


_RUNNERS = {
    "enumerate": run_enumerate,
    "verify": run_verify,
    "shadow": run_shadow,
    "realize": run_realize,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        doc, code = _RUNNERS[cfg.command](cfg)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    _emit(doc, cfg.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
