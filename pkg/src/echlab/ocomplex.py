"""The complex on pairs ``(m, o)`` with ``o`` in ``{0, +1, -1, both}``.

Differential (the ``star`` rules)::

    (m, 0)    -> 0
    (m, 1)    -> (m, 0) + (m+1, 0)
    (m, -1)   -> (m, 0) + (m-1, 0)
    (m, both) -> (m, -1) - (m, 1) + (m+1, -1) - (m-1, 1)

The grading of ``(m, o)`` is the weight ``|o|`` (0, 1, 1, 2), and the
filtration level of a cell is ``|m| + 2|o|``.  ``window(L)`` is the span of the
cells of level ``< L``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

from .complexes import ColimitResult, GradedComplex, colimit_homology

BOTH = 2
O_VALUES = (0, 1, -1, BOTH)


class OLabel(NamedTuple):
    m: int
    o: int  # 0, 1, -1 or BOTH

    @property
    def weight(self) -> int:
        return o_weight(self.o)

    @property
    def level(self) -> int:
        return abs(self.m) + 2 * self.weight

    def __str__(self) -> str:
        o = "both" if self.o == BOTH else f"{self.o:+d}" if self.o else "0"
        return f"({self.m},{o})"


def o_weight(o: int) -> int:
    if o == 0:
        return 0
    if o in (1, -1):
        return 1
    if o == BOTH:
        return 2
    raise ValueError(f"invalid o value {o!r}")


Rules = Callable[[int, int], list]  # (m, o) -> [(coefficient, m', o'), ...]


def star_rules(m: int, o: int) -> list:
    if o == 0:
        return []
    if o == 1:
        return [(1, m, 0), (1, m + 1, 0)]
    if o == -1:
        return [(1, m, 0), (1, m - 1, 0)]
    if o == BOTH:
        return [(1, m, -1), (-1, m, 1), (1, m + 1, -1), (-1, m - 1, 1)]
    raise ValueError(f"invalid o value {o!r}")


def _mutant(o_target: int, edit: Callable[[int, list], list]) -> Rules:
    def rules(m: int, o: int) -> list:
        terms = star_rules(m, o)
        return edit(m, terms) if o == o_target else terms

    return rules


def _flip(k):
    return lambda m, t: [(-c, a, b) if i == k else (c, a, b) for i, (c, a, b) in enumerate(t)]


def _drop(k):
    return lambda m, t: [x for i, x in enumerate(t) if i != k]


# Single-term or single-sign corruptions of the rules, used to show that the
# checks are sensitive to the sign conventions.
MUTATIONS: dict[str, Rules] = {
    "plus-sign": _mutant(1, _flip(1)),
    "plus-shift": _mutant(1, lambda m, t: [t[0], (1, m - 1, 0)]),
    "minus-drop": _mutant(-1, _drop(1)),
    "both-sign-first": _mutant(BOTH, _flip(0)),
    "both-sign-third": _mutant(BOTH, _flip(2)),
    "both-drop-last": _mutant(BOTH, _drop(3)),
}


def boundary_star(x: OLabel | tuple, rules: Rules = star_rules) -> dict:
    """``d(x)`` as a chain ``{OLabel: coefficient}``."""
    m, o = x
    out: dict = {}
    for c, m2, o2 in rules(m, o):
        key = OLabel(m2, o2)
        s = out.get(key, 0) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def window_labels(L: int) -> list[OLabel]:
    """Cells of level ``< L``, ordered by weight, then ``m``, then ``o``."""
    out = []
    for o in O_VALUES:
        w = o_weight(o)
        r = L - 1 - 2 * w  # |m| <= r
        for m in range(-r, r + 1):
            out.append(OLabel(m, o))
    out.sort(key=lambda x: (x.weight, x.m, x.o))
    return out


def window_size(L: int) -> int:
    return (2 * L - 1) + 2 * max(0, 2 * L - 5) + max(0, 2 * L - 9)


def balanced_labels(N: int) -> list[OLabel]:
    """Cells of the balanced window ``W_N`` (``8N`` of them)."""
    if N < 1:
        raise ValueError("balanced windows start at N = 1")
    out = [OLabel(m, 0) for m in range(-N, N + 1)]
    out += [OLabel(m, 1) for m in range(-N, N)]
    out += [OLabel(m, -1) for m in range(-N + 1, N + 1)]
    out += [OLabel(m, BOTH) for m in range(-N + 1, N)]
    out.sort(key=lambda x: (x.weight, x.m, x.o))
    return out


def _complex(labels: list[OLabel], rules: Rules) -> GradedComplex:
    return GradedComplex.from_boundaries(labels, [x.weight for x in labels], 0, lambda x: boundary_star(x, rules))


def window(L: int, rules: Rules = star_rules) -> GradedComplex:
    if L < 1:
        raise ValueError("L must be at least 1")
    return _complex(window_labels(L), rules)


def balanced_window(N: int, rules: Rules = star_rules) -> GradedComplex:
    return _complex(balanced_labels(N), rules)


# ---------------------------------------------------------------------------
# the canonical acyclic matching
# ---------------------------------------------------------------------------

CRITICAL = (OLabel(0, 0), OLabel(0, 1))


def o_partner(x: OLabel | tuple) -> tuple[OLabel, bool] | None:
    """Partner of ``x`` in the canonical matching and whether ``x`` is the upper cell.

    Pairs (upper, lower): ``((m,-1),(m,0))`` and ``((m,both),(m,1))`` for
    ``m >= 1``; ``((m,1),(m,0))`` and ``((m,both),(m,-1))`` for ``m <= -1``;
    ``((0,both),(0,-1))``.  The unmatched cells are ``(0,0)`` and ``(0,1)``.
    """
    m, o = x
    if o == 0:
        if m >= 1:
            return OLabel(m, -1), False
        if m <= -1:
            return OLabel(m, 1), False
        return None
    if o == 1:
        if m >= 1:
            return OLabel(m, BOTH), False
        if m <= -1:
            return OLabel(m, 0), True
        return None
    if o == -1:
        if m >= 1:
            return OLabel(m, 0), True
        return OLabel(m, BOTH), False
    if o == BOTH:
        return (OLabel(m, 1) if m >= 1 else OLabel(m, -1)), True
    raise ValueError(f"invalid o value {o!r}")


def canonical_matching(labels) -> list[tuple[OLabel, OLabel]]:
    """Canonical pairs ``(upper, lower)`` with both cells among ``labels``."""
    present = set(labels)
    pairs = []
    for x in labels:
        r = o_partner(x)
        if r is None:
            continue
        y, upper = r
        if upper and y in present:
            pairs.append((OLabel(*x), y))
    return pairs


def vhat_generator(k: int) -> dict:
    """Cycle representing the generator of the limit homology in grading ``k``."""
    if k == 0:
        return {OLabel(0, 0): 1}
    if k == 1:
        return {OLabel(0, 1): 1, OLabel(1, -1): -1}
    raise ValueError("the limit homology lives in gradings 0 and 1")


# ---------------------------------------------------------------------------
# limit homology
# ---------------------------------------------------------------------------

@dataclass
class LimitHomology:
    L_max: int
    results: dict[int, ColimitResult]

    @property
    def stable_level(self) -> int:
        """Smallest window index from which every grading's image is constant."""
        return max(r.stable_from for r in self.results.values()) + 1

    def group(self, k: int):
        return self.results[k].group


def limit_homology(L_max: int, rules: Rules = star_rules, steps: int = 3) -> LimitHomology:
    """Direct limit of ``H(V_1) -> H(V_2) -> ... -> H(V_Lmax)`` per grading."""
    if L_max < 1:
        raise ValueError("L_max must be positive")
    tower = [window(L, rules) for L in range(1, L_max + 1)]
    return LimitHomology(L_max, {k: colimit_homology(tower, k, steps) for k in (0, 1, 2)})
