"""Input chain data: a finite generator set with a T-polynomial differential.

The free module on ``names x Z`` is encoded by a differential whose entries
are polynomials in a translation symbol ``T`` (``T`` lowers the ``Z`` factor
by one and the grading by two).  A coefficient ``c T^k`` on the edge
``x -> y`` means ``d(x, i)`` contains ``c (y, i - k)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .complexes import SES, GradedComplex, GradedEndo, sub_quotient
from .errors import InvalidData
from .linalg import IntMatrix

Poly = dict  # exponent -> coefficient
EdgeMap = dict  # (source, target) -> Poly


def _clean(edges) -> EdgeMap:
    out: EdgeMap = {}
    for key, poly in edges.items():
        p = {int(k): int(c) for k, c in poly.items() if c}
        if p:
            out[tuple(key)] = p
    return out


@dataclass
class HFData:
    names: list
    p: int
    grading: dict
    differential: EdgeMap = field(default_factory=dict)
    h1_actions: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.names = list(self.names)
        self.grading = {k: int(v) for k, v in self.grading.items()}
        self.differential = _clean(self.differential)
        self.h1_actions = [_clean(e) for e in self.h1_actions]

    @classmethod
    def from_edges(cls, names, p, grading, edges: Iterable, h1_actions: Iterable = (), metadata=None) -> "HFData":
        """Build from ``(source, target, t_power, coefficient)`` tuples."""

        def collect(es):
            out: EdgeMap = {}
            for src, tgt, k, c in es:
                poly = out.setdefault((src, tgt), {})
                poly[k] = poly.get(k, 0) + c
            return out

        return cls(list(names), p, dict(grading), collect(edges), [collect(a) for a in h1_actions], dict(metadata or {}))

    def edges(self, action: EdgeMap | None = None) -> list[tuple]:
        src = self.differential if action is None else action
        order = {n: i for i, n in enumerate(self.names)}
        out = []
        for (x, y), poly in src.items():
            for k, c in poly.items():
                out.append((x, y, k, c))
        out.sort(key=lambda e: (order.get(e[0], -1), order.get(e[1], -1), e[2]))
        return out

    @property
    def max_exponent(self) -> int:
        ks = [k for a in [self.differential, *self.h1_actions] for poly in a.values() for k in poly]
        return max(ks, default=0)

    def grade_class(self, g: int) -> int:
        return g % self.p if self.p else g


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise InvalidData(self.violations)


def _compose(f: EdgeMap, g: EdgeMap) -> EdgeMap:
    """Edge map of ``f o g`` (apply ``g`` first)."""
    by_src: dict = {}
    for (y, z), poly in f.items():
        by_src.setdefault(y, []).append((z, poly))
    out: EdgeMap = {}
    for (x, y), p1 in g.items():
        for z, p2 in by_src.get(y, ()):
            acc = out.setdefault((x, z), {})
            for k1, c1 in p1.items():
                for k2, c2 in p2.items():
                    acc[k1 + k2] = acc.get(k1 + k2, 0) + c1 * c2
    return _clean(out)


def _sum(*maps: EdgeMap) -> EdgeMap:
    out: EdgeMap = {}
    for m in maps:
        for key, poly in m.items():
            acc = out.setdefault(key, {})
            for k, c in poly.items():
                acc[k] = acc.get(k, 0) + c
    return _clean(out)


def validate(hf: HFData) -> ValidationReport:
    """Check the structural requirements; every violation names its witness."""
    v: list[str] = []
    if len(set(hf.names)) != len(hf.names):
        v.append("generator names are not unique")
    if hf.p < 0 or hf.p % 2:
        v.append(f"grading modulus p={hf.p} must be even and nonnegative")
    names = set(hf.names)
    for n in hf.names:
        if n not in hf.grading:
            v.append(f"generator {n!r} has no grading")
    for n in hf.grading:
        if n not in names:
            v.append(f"grading given for undeclared generator {n!r}")

    def check_map(em: EdgeMap, what: str):
        for (x, y), poly in em.items():
            for name in (x, y):
                if name not in names:
                    v.append(f"{what} edge {x!r} -> {y!r} references undeclared generator {name!r}")
            for k in poly:
                if k < 0:
                    v.append(f"{what} edge {x!r} -> {y!r} has negative t_power {k}")
                elif x in hf.grading and y in hf.grading and hf.p >= 0 and hf.p % 2 == 0:
                    if hf.grade_class(hf.grading[y] - 2 * k - hf.grading[x] + 1):
                        v.append(
                            f"{what} edge {x!r} -> {y!r} (t_power {k}) does not lower the grading by 1"
                        )

    check_map(hf.differential, "differential")
    for j, act in enumerate(hf.h1_actions):
        check_map(act, f"h1 action {j}")
    if v:
        return ValidationReport(False, v)
    sq = _compose(hf.differential, hf.differential)
    if sq:
        (x, z), poly = next(iter(sorted(sq.items(), key=lambda kv: repr(kv[0]))))
        v.append(f"d^2 is nonzero: d(d({x!r})) contains {poly} * {z!r}")
    for j, act in enumerate(hf.h1_actions):
        ac = _sum(_compose(hf.differential, act), _compose(act, hf.differential))
        if ac:
            (x, z), _ = next(iter(sorted(ac.items(), key=lambda kv: repr(kv[0]))))
            v.append(f"h1 action {j} does not anticommute with d at {x!r} -> {z!r}")
    if not v:
        # the expanded differential on an explicit window must also square to zero
        K = hf.max_exponent
        W = window_complex(hf, -K - 1, K)
        D = W.differential
        for j, col in enumerate(D.columns()):
            if col and D.apply(col):
                v.append(f"d^2 is nonzero on window cell {W.basis[j]!r}")
                break
    return ValidationReport(not v, v)


# ---------------------------------------------------------------------------
# windows and flavors
# ---------------------------------------------------------------------------

def window_labels(hf: HFData, i_min: int, i_max: int) -> list[tuple]:
    return [(x, i) for i in range(i_min, i_max + 1) for x in hf.names]


def _expand(hf: HFData, em: EdgeMap, i_min: int, i_max: int) -> IntMatrix:
    labels = window_labels(hf, i_min, i_max)
    index = {lab: j for j, lab in enumerate(labels)}
    out_edges: dict = {}
    for (x, y), poly in em.items():
        out_edges.setdefault(x, []).append((y, poly))
    cols = []
    for x, i in labels:
        col: dict = {}
        for y, poly in out_edges.get(x, ()):
            for k, c in poly.items():
                if i - k >= i_min:
                    r = index[(y, i - k)]
                    s = col.get(r, 0) + c
                    if s:
                        col[r] = s
                    else:
                        col.pop(r)
        cols.append(col)
    n = len(labels)
    return IntMatrix(n, n, cols)


def window_complex(hf: HFData, i_min: int, i_max: int) -> GradedComplex:
    """The subquotient on labels ``(x, i)`` with ``i_min <= i <= i_max``.

    Terms of ``d(x, i)`` below ``i_min`` are dropped (quotient side); the top
    is an honest subcomplex cut.  The grading lift of ``(x, i)`` is
    ``gr(x) + 2 i``.
    """
    if i_min > i_max:
        raise ValueError("empty window")
    labels = window_labels(hf, i_min, i_max)
    grading = [hf.grading[x] + 2 * i for x, i in labels]
    return GradedComplex(labels, grading, hf.p, _expand(hf, hf.differential, i_min, i_max))


def flavor_ses(hf: HFData, i_min: int, i_max: int) -> SES:
    """Sub on ``i <= -1`` (minus), total (infinity), quotient on ``i >= 0`` (plus)."""
    return sub_quotient(window_complex(hf, i_min, i_max), lambda lab: lab[1] <= -1)


def flavor_complex(hf: HFData, flavor: str, i_min: int, i_max: int) -> GradedComplex:
    ses = flavor_ses(hf, i_min, i_max)
    return {"inf": ses.total, "minus": ses.sub, "plus": ses.quotient}[normalize_flavor(flavor)]


def normalize_flavor(flavor: str) -> str:
    aliases = {"inf": "inf", "infinity": "inf", "∞": "inf", "minus": "minus", "-": "minus", "plus": "plus", "+": "plus"}
    try:
        return aliases[flavor]
    except KeyError:
        raise ValueError(f"unknown flavor {flavor!r}") from None


def u_map(hf: HFData, i_min: int, i_max: int) -> GradedEndo:
    """``(x, i) -> (x, i - 1)``, zero on the bottom row of the window."""
    labels = window_labels(hf, i_min, i_max)
    n_gen = len(hf.names)
    cols = [({j - n_gen: 1} if i > i_min else {}) for j, (x, i) in enumerate(labels)]
    n = len(labels)
    return GradedEndo(IntMatrix(n, n, cols), -2, "commutes")


def h1_map(hf: HFData, j: int, i_min: int, i_max: int) -> GradedEndo:
    return GradedEndo(_expand(hf, hf.h1_actions[j], i_min, i_max), -1, "anticommutes")


def interior_gradings(hf: HFData, i_min: int, i_max: int, extra_weight: tuple = (0, 0), flavor: str = "inf") -> range:
    """Integer gradings (``p == 0``) whose homology is unaffected by the window.

    ``extra_weight`` is the (min, max) grading contribution of further tensor
    factors.  A grading ``k`` is interior when every cell of grading ``k`` of
    the untruncated complex sits at least the maximal ``T``-exponent above
    ``i_min`` (so no boundary term is dropped) and every cell of grading
    ``k + 1`` exists below ``i_max``.  The minus flavor is only cut at the
    bottom and the plus flavor only at the top.  For ``p > 0`` every grading
    class meets both cuts, so the range is empty.
    """
    if hf.p:
        return range(0)
    gmin = min(hf.grading.values()) + extra_weight[0]
    gmax = max(hf.grading.values()) + extra_weight[1]
    K = hf.max_exponent
    flavor = normalize_flavor(flavor)
    lo = 2 * (i_min + K) + gmax if flavor != "plus" else gmin
    hi = 2 * i_max + gmin - 1 if flavor != "minus" else gmax - 2
    return range(lo, hi + 1)
