"""Algebraic Gaussian elimination on sparse chain complexes.

A complex is handed over as a list of sparse columns (``cols[j]`` is the
boundary of basis element ``j`` as ``{i: coefficient}``).  Cancelling a pair
``(a, b)`` with unit incidence ``eps = <d a, b>`` replaces the complex by the
one on the remaining cells with differential ``delta - beta * eps * gamma``
where ``d a = eps * b + gamma`` and ``beta(x)`` is the ``b``-coefficient of
``d x``.  The chain maps relating the two complexes are

* projection ``pi``:  ``a -> 0``, ``b -> -eps * gamma``, identity elsewhere;
* inclusion ``iota``: ``x -> x - eps * beta(x) * a``;
* homotopy ``h``:     ``b -> eps * a``, zero elsewhere,

and satisfy ``pi iota = id`` and ``id - iota pi = d h + h d``.  Every step is
recorded so that the composite maps can be evaluated lazily on sparse chains.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Sequence

from .errors import CyclicMatching, NonUnitPivot


@dataclass(frozen=True)
class Step:
    a: int
    b: int
    eps: int
    row_b: dict  # x -> beta(x) at the time of cancellation (a excluded)
    gamma: dict  # d a minus its b-term, at the time of cancellation


def _add(target: dict, key, value) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


class Eliminator:
    """Mutable elimination state over a fixed index set ``0..n-1``."""

    def __init__(self, cols: Sequence[dict]):
        n = len(cols)
        self.down: list[dict] = [dict(c) for c in cols]
        self.up: list[dict] = [{} for _ in range(n)]
        for j, col in enumerate(self.down):
            for i, v in col.items():
                self.up[i][j] = v
        self.alive = [True] * n
        self.steps: list[Step] = []
        self.step_of: dict[int, int] = {}
        self.row_index: dict[int, list[int]] = {}

    def _set(self, x: int, k: int, value: int) -> None:
        if value:
            self.down[x][k] = value
            self.up[k][x] = value
        else:
            self.down[x].pop(k, None)
            self.up[k].pop(x, None)

    def cancel(self, a: int, b: int) -> Step:
        down, up = self.down, self.up
        eps = down[a].get(b, 0)
        if eps not in (1, -1):
            raise NonUnitPivot((a, b), eps)
        gamma = {k: v for k, v in down[a].items() if k != b}
        row_b = {x: v for x, v in up[b].items() if x != a}
        for x, beta in row_b.items():
            col = down[x]
            del col[b]
            f = beta * eps
            for k, g in gamma.items():
                self._set(x, k, col.get(k, 0) - f * g)
        # detach a and b
        for k in list(down[a]):
            up[k].pop(a, None)
        for y in list(up[a]):
            down[y].pop(a, None)
        for k in list(down[b]):
            up[k].pop(b, None)
        for y in list(up[b]):
            down[y].pop(b, None)
        down[a] = {}
        down[b] = {}
        up[a] = {}
        up[b] = {}
        self.alive[a] = self.alive[b] = False
        t = len(self.steps)
        step = Step(a, b, eps, row_b, gamma)
        self.steps.append(step)
        self.step_of[a] = t
        self.step_of[b] = t
        for x in row_b:
            self.row_index.setdefault(x, []).append(t)
        return step

    # composite maps ---------------------------------------------------------
    def project(self, chain: dict, record: list | None = None) -> dict:
        """Apply the composite projection to a chain on the original cells."""
        v = {k: c for k, c in chain.items() if c}
        heap = sorted({self.step_of[k] for k in v if k in self.step_of})
        queued = set(heap)
        steps, step_of = self.steps, self.step_of
        while heap:
            t = heapq.heappop(heap)
            st = steps[t]
            v.pop(st.a, None)
            c = v.pop(st.b, 0)
            if not c:
                continue
            if record is not None:
                record.append((t, c))
            f = -st.eps * c
            for k, g in st.gamma.items():
                _add(v, k, f * g)
                s = step_of.get(k)
                if s is not None and s not in queued:
                    queued.add(s)
                    heapq.heappush(heap, s)
        return v

    def include(self, chain: dict) -> dict:
        """Apply the composite inclusion to a chain on surviving cells.

        Also accepts chains containing cancelled cells ``a_t``: only steps
        preceding their cancellation are then applied to them, which is what
        the homotopy formula needs.
        """
        v = {k: c for k, c in chain.items() if c}
        row_index, steps = self.row_index, self.steps
        queued: set[int] = set()
        heap: list[int] = []
        for k in v:
            for t in row_index.get(k, ()):
                if t not in queued:
                    queued.add(t)
                    heapq.heappush(heap, -t)
        while heap:
            t = -heapq.heappop(heap)
            st = steps[t]
            beta = 0
            rb = st.row_b
            if len(v) < len(rb):
                for x, c in v.items():
                    w = rb.get(x)
                    if w:
                        beta += c * w
            else:
                for x, w in rb.items():
                    c = v.get(x)
                    if c:
                        beta += c * w
            if not beta:
                continue
            _add(v, st.a, -st.eps * beta)
            for s in row_index.get(st.a, ()):
                if s not in queued:
                    queued.add(s)
                    heapq.heappush(heap, -s)
        return v

    def homotopy(self, chain: dict) -> dict:
        record: list = []
        self.project(chain, record)
        out: dict = {}
        for t, c in record:
            st = self.steps[t]
            for k, v in self.include({st.a: st.eps * c}).items():
                _add(out, k, v)
        return out

    def survivors(self) -> list[int]:
        return [j for j, live in enumerate(self.alive) if live]


def check_matching(cols: Sequence[dict], pairs: Sequence[tuple[int, int]], labels=None) -> None:
    """Raise ``NonUnitPivot`` / ``CyclicMatching`` for an invalid matching."""
    name = (lambda j: labels[j]) if labels is not None else (lambda j: j)
    partner: dict[int, int] = {}
    for a, b in pairs:
        c = cols[a].get(b, 0)
        if c not in (1, -1):
            raise NonUnitPivot((name(a), name(b)), c)
        for z in (a, b):
            if z in partner:
                raise ValueError(f"cell {name(z)!r} is matched twice")
        partner[a] = b
        partner[b] = a
    matched = {tuple(pr) for pr in pairs}
    # modified Hasse diagram: x -> y for y in d x, reversed along matched pairs
    preds: dict[int, set] = {j: set() for j in range(len(cols))}
    for x, col in enumerate(cols):
        for y in col:
            if (x, y) in matched:
                preds[x].add(y)
            else:
                preds[y].add(x)
    try:
        TopologicalSorter(preds).prepare()
    except CycleError as exc:
        raise CyclicMatching([name(j) for j in exc.args[1]]) from None


def greedy_pairs(elim: Eliminator, order: Sequence[int]) -> int:
    """Cancel unit entries greedily until none is left; returns the count.

    Columns are visited in ``order``; within a column the unit entry whose row
    has the fewest entries is taken (ties broken by index).
    """
    total = 0
    while True:
        done = 0
        for j in order:
            if not elim.alive[j]:
                continue
            col = elim.down[j]
            best = None
            for i, c in col.items():
                if c == 1 or c == -1:
                    key = (len(elim.up[i]), i)
                    if best is None or key < best:
                        best = key
            if best is not None:
                elim.cancel(j, best[1])
                done += 1
        total += done
        if not done:
            return total


@dataclass
class ReductionData:
    """Result of a reduction: survivors (original indices) and transferred columns."""

    elim: Eliminator
    survivors: list[int]
    cols: list[dict] = field(repr=False)  # in survivor positions

    def project(self, chain: dict) -> dict:
        pos = {j: k for k, j in enumerate(self.survivors)}
        return {pos[k]: v for k, v in self.elim.project(chain).items()}

    def include(self, chain: dict) -> dict:
        return self.elim.include({self.survivors[k]: v for k, v in chain.items() if v})

    def homotopy(self, chain: dict) -> dict:
        return self.elim.homotopy(chain)


def _finish(elim: Eliminator) -> ReductionData:
    surv = elim.survivors()
    pos = {j: k for k, j in enumerate(surv)}
    cols = [{pos[i]: v for i, v in elim.down[j].items()} for j in surv]
    return ReductionData(elim, surv, cols)


def reduce_matching(cols: Sequence[dict], pairs: Sequence[tuple[int, int]], labels=None) -> ReductionData:
    check_matching(cols, pairs, labels)
    elim = Eliminator(cols)
    for a, b in pairs:
        elim.cancel(a, b)
    return _finish(elim)


def reduce_greedy(cols: Sequence[dict], order: Sequence[int] | None = None) -> ReductionData:
    elim = Eliminator(cols)
    greedy_pairs(elim, range(len(cols)) if order is None else order)
    return _finish(elim)
