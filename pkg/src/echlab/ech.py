"""Assembly of the ech complex: HF window tensored with ``g`` handle factors.

A generator is ``(x, i, handles)`` with one ``OLabel`` per handle.  The
differential is ``d_HF`` on the first factor plus, for every handle ``p``,
the star differential on that factor with the Koszul sign
``(-1)^(|(x, i)| + sum of the weights of the handles before p)``.

Two families of truncations are used:

* the *level* truncation keeps generators whose total handle level
  ``sum |m_p| + 2|o_p|`` is below ``L`` (this is the filtration of the full
  complex, and every differential respects it);
* the *balanced* truncation uses the window ``W_N`` in every handle factor.
  Balanced windows are cofinal with the level windows and their homology is
  already the limit homology, so they give the direct limit at a much lower
  cost.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import NamedTuple, Sequence

from .complexes import ChainHomology, GradedComplex, GradedEndo, induced_homology_map, parse_coefficients, sub_quotient
from .errors import NotStabilized, NotSubcomplex
from .hf import HFData, interior_gradings, normalize_flavor, window_complex
from .linalg import FinAbGroup, IntMatrix, is_isomorphism
from .ocomplex import CRITICAL, OLabel, Rules, balanced_labels, boundary_star, o_weight, star_rules, window_labels


class EchGenerator(NamedTuple):
    x: str
    i: int
    handles: tuple

    @property
    def level(self) -> int:
        return sum(h.level for h in self.handles)

    def __str__(self) -> str:
        return f"{self.x}[{self.i}]" + "".join(f"⊗{h}" for h in self.handles)


def handle_tuples(g: int, L: int) -> list[tuple]:
    """All ``g``-tuples of O-cells with total level ``< L``."""
    if g < 1:
        raise ValueError("g must be positive")
    cells = [x for x in window_labels(L) if x.level < L]
    out: list[tuple] = []

    def rec(prefix: tuple, budget: int):
        if len(prefix) == g:
            out.append(prefix)
            return
        for c in cells:
            if c.level < budget:
                rec(prefix + (c,), budget - c.level)

    rec((), L)
    return out


def balanced_tuples(g: int, N: int) -> list[tuple]:
    return list(product(balanced_labels(N), repeat=g))


def vhat_tuples(g: int) -> list[tuple]:
    return list(product(CRITICAL, repeat=g))


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def assemble(base: GradedComplex, handles: Sequence[tuple], rules: Rules | None = star_rules) -> GradedComplex:
    """Tensor ``base`` (labels ``(x, i)``) with the span of ``handles``.

    ``rules=None`` gives handle factors with zero differential (used for the
    critical-cell model).  Boundary terms leaving the handle set raise
    ``NotSubcomplex``.
    """
    handles = list(handles)
    H = len(handles)
    hidx = {h: j for j, h in enumerate(handles)}
    weights = [[o_weight(c.o) for c in h] for h in handles]
    hw = [sum(w) for w in weights]
    # per handle tuple: list of (column offset, coefficient, parity of weights before p)
    hbound: list[list] = []
    for h, w in zip(handles, weights):
        terms = []
        if rules is not None:
            before = 0
            for p, c in enumerate(h):
                for tgt, coef in boundary_star(c, rules).items():
                    t = h[:p] + (tgt,) + h[p + 1:]
                    j = hidx.get(t)
                    if j is None:
                        raise NotSubcomplex(h, f"handle boundary of {h} leaves the truncation at {t}")
                    terms.append((j, coef, before & 1))
                before += w[p]
        hbound.append(terms)
    basis = [EchGenerator(x, i, h) for (x, i) in base.basis for h in handles]
    grading = [gb + w for gb in base.grading for w in hw]
    cols = []
    for a, bcol in enumerate(base.differential.columns()):
        base_par = base.grading[a] & 1
        off = a * H
        for j in range(H):
            col = {r * H + j: v for r, v in bcol.items()}
            for t, coef, par in hbound[j]:
                col[off + t] = -coef if (base_par ^ par) else coef
            cols.append(col)
    n = len(basis)
    return GradedComplex(basis, grading, base.p, IntMatrix(n, n, cols))


@dataclass
class EchTruncation:
    hf: HFData
    g: int
    window: tuple
    complex: GradedComplex
    kind: str  # "level", "balanced" or "critical"
    L: int | None = None
    N: int | None = None
    handles: list = field(default_factory=list, repr=False)


def build_ech(hf: HFData, g: int, L: int, window: tuple, rules: Rules = star_rules) -> EchTruncation:
    """Level truncation: generators with total handle level ``< L``."""
    if L < 1:
        raise ValueError("L must be at least 1")
    hs = handle_tuples(g, L)
    C = assemble(window_complex(hf, *window), hs, rules)
    return EchTruncation(hf, g, tuple(window), C, "level", L=L, handles=hs)


def build_balanced(hf: HFData, g: int, N: int, window: tuple, rules: Rules = star_rules) -> EchTruncation:
    hs = balanced_tuples(g, N)
    C = assemble(window_complex(hf, *window), hs, rules)
    return EchTruncation(hf, g, tuple(window), C, "balanced", N=N, handles=hs)


def build_vhat_model(hf: HFData, g: int, window: tuple) -> EchTruncation:
    """HF window tensored with ``g`` copies of the two-cell critical model."""
    hs = vhat_tuples(g)
    C = assemble(window_complex(hf, *window), hs, None)
    return EchTruncation(hf, g, tuple(window), C, "critical", handles=hs)


def product_matching(trunc: EchTruncation) -> list[tuple]:
    """Canonical matching applied in the first non-critical handle factor.

    Cells whose partner falls outside the truncation stay unmatched.
    """
    from .ocomplex import o_partner

    present = trunc.complex.index
    pairs = []
    for lab in trunc.complex.basis:
        h = lab.handles
        for p, c in enumerate(h):
            r = o_partner(c)
            if r is None:
                continue
            partner, upper = r
            if upper:
                other = EchGenerator(lab.x, lab.i, h[:p] + (partner,) + h[p + 1:])
                if other in present:
                    pairs.append((lab, other))
            break
    return pairs


# ---------------------------------------------------------------------------
# module structure
# ---------------------------------------------------------------------------

def _shift_matrix(C: GradedComplex, i_min: int) -> IntMatrix:
    idx = C.index
    cols = []
    for lab in C.basis:
        if lab.i > i_min:
            cols.append({idx[EchGenerator(lab.x, lab.i - 1, lab.handles)]: 1})
        else:
            cols.append({})
    n = len(C)
    return IntMatrix(n, n, cols)


def t_action(trunc: EchTruncation) -> GradedEndo:
    """Translation of the ``Z`` factor: ``(x, i, h) -> (x, i - 1, h)``."""
    return GradedEndo(_shift_matrix(trunc.complex, trunc.window[0]), -2, "commutes")


def lift_hf_map(trunc: EchTruncation, base_map: IntMatrix, degree: int, commutation: str) -> GradedEndo:
    """``f (x) id`` on the handle factors for a map ``f`` of the HF window."""
    base = window_complex(trunc.hf, *trunc.window)
    H = len(trunc.handles)
    cols = []
    for a, bcol in enumerate(base_map.columns()):
        for j in range(H):
            cols.append({r * H + j: v for r, v in bcol.items()})
    n = len(trunc.complex)
    return GradedEndo(IntMatrix(n, n, cols), degree, commutation)


def u_map_ech(trunc: EchTruncation) -> GradedEndo:
    from .hf import u_map

    U = u_map(trunc.hf, *trunc.window)
    return lift_hf_map(trunc, U.matrix, -2, "commutes")


def h1_map_ech(trunc: EchTruncation, j: int) -> GradedEndo:
    from .hf import h1_map

    E = h1_map(trunc.hf, j, *trunc.window)
    return lift_hf_map(trunc, E.matrix, -1, "anticommutes")


def interior_rows(trunc: EchTruncation, margin: int) -> list[int]:
    """Cells at least ``margin`` rows above the bottom of the window."""
    lo = trunc.window[0] + margin
    return [j for j, lab in enumerate(trunc.complex.basis) if lab.i >= lo]


# ---------------------------------------------------------------------------
# stabilization in the handle direction
# ---------------------------------------------------------------------------

def handle_complex(g: int, handles: Sequence[tuple], rules: Rules = star_rules) -> GradedComplex:
    """The handle factors alone (tensor with a single grading-0 cell)."""
    base = GradedComplex([("*", 0)], [0], 0, IntMatrix(1, 1))
    C = assemble(base, handles, rules)
    return GradedComplex([lab.handles for lab in C.basis], C.grading, 0, C.differential)


@dataclass(frozen=True)
class HandleStability:
    g: int
    N: int
    ok: bool
    groups: tuple  # (grading, iso type) for the large window

    def __bool__(self) -> bool:
        return self.ok


@lru_cache(maxsize=None)
def handle_stability(g: int, N: int) -> HandleStability:
    """Whether ``W_1^g -> W_N^g`` induces an isomorphism in every grading.

    This does not depend on the HF data; tensoring a quasi-isomorphism of
    bounded free complexes with the HF window keeps it a quasi-isomorphism.
    """
    small = handle_complex(g, balanced_tuples(g, 1))
    big = handle_complex(g, balanced_tuples(g, N))
    Hs, Hb = ChainHomology(small), ChainHomology(big)
    ok = True
    groups = []
    for k in range(0, 2 * g + 1):
        M = induced_homology_map(lambda z: dict(z), Hs, Hb, k, k)
        Gs, Gb = Hs.group(k), Hb.group(k)
        groups.append((k, Gb.iso_type()))
        if not is_isomorphism(M, Gs, Gb):
            ok = False
    return HandleStability(g, N, ok, tuple(groups))


def handle_budget(L: int) -> int:
    """Balanced window index certified by a level budget ``L`` (``W_N`` lies in ``V_{N+4}``)."""
    return max(1, L - 4)


# ---------------------------------------------------------------------------
# flavored homology
# ---------------------------------------------------------------------------

@dataclass
class FlavorHomology:
    flavor: str
    g: int
    L: int
    window: tuple
    coefficients: str
    p: int
    table: dict  # grading -> FinAbGroup (integers) or int (field rank)
    interior: list
    handle_check: HandleStability
    window_stable: bool | None  # None when p > 0 (every class meets the cut)
    complex_size: int = 0

    @property
    def status(self) -> str:
        if not self.handle_check.ok:
            return "not-stabilized"
        if self.window_stable is None:
            return "window-dependent"
        return "stable" if self.window_stable else "not-stabilized"


def _flavor_part(hf: HFData, g: int, window: tuple, flavor: str) -> GradedComplex:
    E = build_balanced(hf, g, 1, window).complex
    if flavor == "inf":
        return E
    ses = sub_quotient(E, lambda lab: lab.i <= -1)
    return ses.sub if flavor == "minus" else ses.quotient


def _table(C: GradedComplex, coeff: int | None) -> dict:
    H = ChainHomology(C)
    out = {}
    for k in C.degrees() if len(C) else []:
        out[k] = H.group(k) if coeff is None else H.field_rank(k, coeff)
    return out


def ech_flavor_homology(
    hf: HFData,
    g: int,
    flavor: str = "inf",
    L: int = 6,
    window: tuple = (-3, 3),
    coefficients: str | None = None,
    check_window: bool = True,
) -> FlavorHomology:
    """Homology of one flavor, with the stabilization evidence attached.

    The handle direction is certified by ``handle_stability(g, L - 4)``; the
    window direction by recomputing with the window enlarged by 2 on both
    sides and comparing the interior gradings (integer gradings only).
    Raises ``NotStabilized`` when either check fails.
    """
    flavor = normalize_flavor(flavor)
    coeff = parse_coefficients(coefficients)
    C = _flavor_part(hf, g, window, flavor)
    table = _table(C, coeff)
    hs = handle_stability(g, handle_budget(L))
    interior = [k for k in interior_gradings(hf, *window, extra_weight=(0, 2 * g), flavor=flavor) if k in table]
    stable = None
    if hf.p == 0 and check_window:
        wide = (window[0] - 2, window[1] + 2)
        other = _table(_flavor_part(hf, g, wide, flavor), coeff)
        stable = all(_same(table[k], other.get(k)) for k in interior)
    res = FlavorHomology(
        flavor, g, L, tuple(window), coefficients or "z", hf.p, table, interior, hs, stable, len(C)
    )
    if res.status == "not-stabilized":
        raise NotStabilized(
            f"{flavor} homology did not stabilize (handles N={hs.N}: {hs.ok}, window: {stable})",
            towers=(res,),
        )
    return res


def _same(a, b) -> bool:
    if isinstance(a, FinAbGroup) and isinstance(b, FinAbGroup):
        return a.iso_type() == b.iso_type()
    return a == b
