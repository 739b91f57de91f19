"""Shared fixtures-free test utilities."""

from __future__ import annotations

import random

from affroots.lattice import RootVec
from affroots.rootsys import AlgebraType, Family
from affroots.shadow import SupportModel


def grid(max_rank: int = 2) -> list[AlgebraType]:
    out = []
    for fam in Family:
        for k in range(1, max_rank + 1):
            for l in range(1, max_rank + 1):
                if fam is Family.A2KM1_2LM1_TW2 and (k, l) == (1, 1):
                    continue
                out.append(AlgebraType(fam, k, l))
    return out


def one_of_each() -> list[AlgebraType]:
    return [
        AlgebraType(Family.A2K_2LM1_TW2, 1, 1),
        AlgebraType(Family.A2KM1_2LM1_TW2, 1, 2),
        AlgebraType(Family.A2K_2L_TW4, 1, 1),
        AlgebraType(Family.D_TW2, 1, 1),
    ]


def random_support_model(rng: random.Random, target: int) -> SupportModel:
    """A random support model whose steps span an open half-space.

    The support is fully closed downward along the steps above a floor
    value, which makes it convex along every step direction.
    """
    while True:
        weights = tuple(rng.randint(1, 3) for _ in range(3))
        steps: list[RootVec] = []
        tries = 0
        want = rng.randint(1, 3)
        while len(steps) < want and tries < 200:
            tries += 1
            cand = RootVec(rng.randint(-2, 2), (rng.randint(-2, 2),), (rng.randint(-2, 2),))
            if cand.is_zero() or cand in steps:
                continue
            if sum(a * b for a, b in zip(weights, cand.coords())) > 0:
                steps.append(cand)
        if steps:
            break

    def height(v: RootVec) -> int:
        return sum(a * b for a, b in zip(weights, v.coords()))

    budget = 2
    while True:
        seeds = [RootVec(rng.randint(-5, 5), (rng.randint(-5, 5),), (rng.randint(-5, 5),))
                 for _ in range(rng.randint(1, 4))]
        floor = min(height(p) for p in seeds) - budget
        supp: set[RootVec] = set()
        queue = list(seeds)
        while queue:
            point = queue.pop()
            if point in supp:
                continue
            supp.add(point)
            for step in steps:
                down = point - step
                if down not in supp and height(down) >= floor:
                    queue.append(down)
        if len(supp) >= target or budget > 40:
            break
        budget += 2
    return SupportModel(frozenset(supp), tuple(steps))


def brute_force_extremal(model: SupportModel) -> RootVec | None:
    """Independent oracle: BFS the forward cone of every point inside the box."""
    coords = [p.coords() for p in model.supp]
    dim = len(coords[0])
    lo = tuple(min(c[i] for c in coords) for i in range(dim))
    hi = tuple(max(c[i] for c in coords) for i in range(dim))
    best = None
    for lam in model.supp:
        seen = {lam.coords()}
        stack = [lam.coords()]
        isolated = True
        while stack and isolated:
            cur = stack.pop()
            for step in model.steps:
                nxt = tuple(a + b for a, b in zip(cur, step.coords()))
                if nxt in seen or any(n < a or n > b for n, a, b in zip(nxt, lo, hi)):
                    continue
                seen.add(nxt)
                candidate = RootVec(nxt[0], tuple(nxt[1:1 + len(lam.e)]), tuple(nxt[1 + len(lam.e):]))
                if candidate in model.supp:
                    isolated = False
                    break
                stack.append(nxt)
        if isolated and (best is None or lam.sort_key() > best.sort_key()):
            best = lam
    return best
