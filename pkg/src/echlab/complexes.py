"""Graded chain complexes over Z with a relative Z/pZ grading.

Gradings are stored as integer lifts; the grading *class* of a cell is its
lift reduced modulo ``p`` (or the lift itself when ``p == 0``).  Koszul signs
use the parity of the lift, which is well defined because ``p`` is even.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .errors import (
    CompositionNonzero,
    ExactnessFailure,
    GradingMismatch,
    NotChainMap,
    NotStabilized,
    NotSubcomplex,
)
from .linalg import (
    FinAbGroup,
    IntMatrix,
    field_homology_pair,
    hermite_rows,
    homology_pair,
    image_lattice,
    kernel_lattice,
    smith_normal_form,
    solve_integer,
)
from .reduction import ReductionData, reduce_greedy, reduce_matching

Chain = dict  # label -> coefficient


def _add(target: dict, key, value) -> None:
    s = target.get(key, 0) + value
    if s:
        target[key] = s
    else:
        target.pop(key, None)


@dataclass(eq=False)
class GradedComplex:
    basis: list
    grading: tuple
    p: int
    differential: IntMatrix

    def __post_init__(self):
        self.basis = list(self.basis)
        self.grading = tuple(int(g) for g in self.grading)
        if self.p < 0 or self.p % 2:
            raise GradingMismatch(f"grading modulus must be even and nonnegative, got {self.p}")
        n = len(self.basis)
        if len(self.grading) != n or self.differential.shape != (n, n):
            raise ValueError("basis, grading and differential sizes disagree")
        self.index = {lab: i for i, lab in enumerate(self.basis)}
        if len(self.index) != n:
            raise ValueError("basis labels must be unique")

    @classmethod
    def from_boundaries(cls, basis, grading, p: int, boundary: Callable[[Hashable], dict]) -> "GradedComplex":
        """Build from a function returning ``d(label)`` as a label chain.

        Terms landing outside ``basis`` are an error (use ``sub_quotient`` or
        explicit truncation to drop them).
        """
        basis = list(basis)
        index = {lab: i for i, lab in enumerate(basis)}
        cols = []
        for lab in basis:
            col = {}
            for t, c in boundary(lab).items():
                if t not in index:
                    raise NotSubcomplex(lab, f"boundary of {lab!r} contains {t!r} outside the basis")
                if c:
                    _add(col, index[t], c)
            cols.append(col)
        return cls(basis, grading, p, IntMatrix(len(basis), len(basis), cols))

    def __len__(self) -> int:
        return len(self.basis)

    def grade_class(self, g: int) -> int:
        return g % self.p if self.p else g

    @cached_property
    def classes(self) -> tuple:
        return tuple(self.grade_class(g) for g in self.grading)

    def cells(self, k: int) -> list[int]:
        k = self.grade_class(k)
        return [i for i, c in enumerate(self.classes) if c == k]

    def degrees(self) -> list[int]:
        return sorted(set(self.classes))

    def boundary(self, label) -> Chain:
        col = self.differential.column(self.index[label])
        return {self.basis[i]: v for i, v in col.items()}

    def to_indices(self, chain: Chain) -> dict:
        return {self.index[k]: v for k, v in chain.items() if v}

    def to_labels(self, vec: dict) -> Chain:
        return {self.basis[i]: v for i, v in vec.items() if v}

    def d(self, chain: Chain) -> Chain:
        return self.to_labels(self.differential.apply(self.to_indices(chain)))

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return self.differential.submatrix(rows, cols)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class ComplexReport:
    ok: bool
    witness: Hashable = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_complex(C: GradedComplex) -> ComplexReport:
    """Check that the differential has degree -1 and squares to zero."""
    cls = C.classes
    for i, j, _ in C.differential.entries():
        if C.grade_class(C.grading[j] - 1) != cls[i]:
            return ComplexReport(False, C.basis[j], f"d({C.basis[j]!r}) hits {C.basis[i]!r} in the wrong degree")
    D = C.differential
    for j, col in enumerate(D.columns()):
        if col and D.apply(col):
            return ComplexReport(False, C.basis[j], f"d(d({C.basis[j]!r})) != 0")
    return ComplexReport(True)


@dataclass
class GradedEndo:
    """Endomorphism of a graded complex with a declared degree and relation to d."""

    matrix: IntMatrix
    degree: int
    commutation: str = "commutes"  # or "anticommutes"

    def check(self, C: GradedComplex, rows: Iterable[int] | None = None) -> ComplexReport:
        """Verify the degree everywhere and the (anti)commutation on ``rows``.

        ``rows`` restricts the relation check to the given source cells (for
        truncated windows where it only holds away from the edge).
        """
        if self.matrix.shape != C.differential.shape:
            return ComplexReport(False, None, "shape mismatch")
        for i, j, _ in self.matrix.entries():
            if C.grade_class(C.grading[j] + self.degree) != C.classes[i]:
                return ComplexReport(False, C.basis[j], f"entry at {C.basis[j]!r} has the wrong degree")
        sign = -1 if self.commutation == "commutes" else 1
        D, F = C.differential, self.matrix
        for j in range(len(C)) if rows is None else rows:
            col = {j: 1}
            v = D.apply(F.apply(col))
            for i, x in F.apply(D.apply(col)).items():
                _add(v, i, sign * x)
            if v:
                return ComplexReport(False, C.basis[j], f"relation '{self.commutation}' fails at {C.basis[j]!r}")
        return ComplexReport(True)


def check_chain_map(f: IntMatrix, src: GradedComplex, tgt: GradedComplex) -> None:
    """Raise ``NotChainMap`` unless ``f d = d f``."""
    if f.shape != (len(tgt), len(src)):
        raise ValueError("chain map has the wrong shape")
    for j in range(len(src)):
        a = f.apply(src.differential.apply({j: 1}))
        b = tgt.differential.apply(f.apply({j: 1}))
        if a != b:
            raise NotChainMap(src.basis[j])


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def combined_modulus(p: int, q: int) -> int:
    if p == q or q == 0:
        return p
    if p == 0:
        return q
    if p % q == 0 or q % p == 0:
        return min(p, q)
    raise GradingMismatch(f"grading moduli {p} and {q} are incompatible")


def tensor(C: GradedComplex, D: GradedComplex) -> GradedComplex:
    """Tensor product with the Koszul rule ``d(c x e) = dc x e + (-1)^|c| c x de``."""
    p = combined_modulus(C.p, D.p)
    nD = len(D)
    basis = [(c, e) for c in C.basis for e in D.basis]
    grading = [gc + ge for gc in C.grading for ge in D.grading]
    dcols = list(D.differential.columns())
    cols = []
    for a, ccol in enumerate(C.differential.columns()):
        sign = -1 if C.grading[a] % 2 else 1
        for b in range(nD):
            col = {i * nD + b: v for i, v in ccol.items()}
            for k, v in dcols[b].items():
                _add(col, a * nD + k, sign * v)
            cols.append(col)
    n = len(basis)
    return GradedComplex(basis, grading, p, IntMatrix(n, n, cols))


@dataclass
class SES:
    sub: GradedComplex
    total: GradedComplex
    quotient: GradedComplex
    inclusion: IntMatrix
    projection: IntMatrix


def sub_quotient(C: GradedComplex, keep: Callable[[Hashable], bool]) -> SES:
    """Split ``C`` along a subcomplex spanned by the labels satisfying ``keep``."""
    kept = [i for i, lab in enumerate(C.basis) if keep(lab)]
    rest = [i for i, lab in enumerate(C.basis) if not keep(lab)]
    kset = set(kept)
    for j in kept:
        for i in C.differential.column(j):
            if i not in kset:
                raise NotSubcomplex(C.basis[j], f"d({C.basis[j]!r}) contains {C.basis[i]!r} outside the subcomplex")
    sub = GradedComplex([C.basis[i] for i in kept], [C.grading[i] for i in kept], C.p, C.block(kept, kept))
    quo = GradedComplex([C.basis[i] for i in rest], [C.grading[i] for i in rest], C.p, C.block(rest, rest))
    inc = IntMatrix(len(C), len(kept), [{i: 1} for i in kept])
    pos = {i: k for k, i in enumerate(rest)}
    proj = IntMatrix(len(rest), len(C), [({pos[i]: 1} if i in pos else {}) for i in range(len(C))])
    return SES(sub, C, quo, inc, proj)


def restrict(C: GradedComplex, labels: Iterable[Hashable]) -> GradedComplex:
    """Subcomplex on ``labels`` (must be closed under d)."""
    keep = set(labels)
    return sub_quotient(C, keep.__contains__).sub


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

def parse_coefficients(coeff) -> int | None:
    """``None``/'z' -> integers, 'q' -> 0, 'f<p>' or an int -> that prime."""
    if coeff is None or coeff in ("z", "Z"):
        return None
    if coeff in ("q", "Q"):
        return 0
    if isinstance(coeff, int):
        return coeff
    if isinstance(coeff, str) and coeff[:1] in ("f", "F") and coeff[1:].isdigit():
        p = int(coeff[1:])
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{coeff!r}: coefficient field size must be prime")
        return p
    raise ValueError(f"unknown coefficient specification {coeff!r}")


class ChainHomology:
    """Homology of a graded complex, via greedy elimination followed by SNF.

    Generators are reported as label chains in ``C``; coordinates of any cycle
    of ``C`` are available through ``group(k).coordinates``-style helpers.
    """

    def __init__(self, C: GradedComplex, reduction: ReductionData | None = None):
        self.C = C
        if reduction is None:
            order = sorted(range(len(C)), key=lambda j: (C.grading[j], j))
            reduction = reduce_greedy(list(C.differential.columns()), order)
        self.red = reduction
        surv = reduction.survivors
        self.classes = [C.classes[j] for j in surv]
        n = len(surv)
        self.matrix = IntMatrix(n, n, reduction.cols)
        self._groups: dict[int, FinAbGroup] = {}

    def _cells(self, k: int) -> list[int]:
        k = self.C.grade_class(k)
        return [i for i, c in enumerate(self.classes) if c == k]

    def pair(self, k: int) -> tuple[IntMatrix, IntMatrix, list[int]]:
        C = self.C
        here, above, below = self._cells(k), self._cells(k + 1), self._cells(k - 1)
        return self.matrix.submatrix(here, above), self.matrix.submatrix(below, here), here

    def group(self, k: int) -> FinAbGroup:
        k = self.C.grade_class(k)
        if k in self._groups:
            return self._groups[k]
        d_in, d_out, here = self.pair(k)
        local = homology_pair(d_in, d_out, torsion_generators=True)
        surv = self.red.survivors
        C = self.C

        def lift(vec):
            return C.to_labels(self.red.include({here[i]: v for i, v in vec.items()}))

        pos = {j: t for t, j in enumerate(here)}

        def localize(chain: Chain) -> dict:
            red = self.red.project(C.to_indices(chain))
            out = {}
            for i, v in red.items():
                if i in pos:
                    out[pos[i]] = v
                elif v:
                    raise ValueError("chain is not homogeneous in the requested grading")
            return out

        g = FinAbGroup(
            local.free_rank,
            local.torsion,
            [lift(z) for z in local.generators],
            [lift(z) for z in local.torsion_generators],
            local.projection,
            localize,
        )
        self._groups[k] = g
        return g

    def coordinates(self, k: int, chain: Chain) -> tuple:
        return self.group(k).coordinates(chain)

    def field_rank(self, k: int, characteristic: int) -> int:
        d_in, d_out, _ = self.pair(k)
        return field_homology_pair(d_in, d_out, characteristic)

    def is_boundary(self, chain: Chain, k: int) -> bool:
        g = self.group(k)
        return not any(g.coordinates(chain))


def homology(C: GradedComplex, k: int) -> FinAbGroup:
    return ChainHomology(C).group(k)


def induced_homology_map(f: Callable[[Chain], Chain], src: ChainHomology, tgt: ChainHomology, k_src: int, k_tgt: int) -> IntMatrix:
    """Matrix of ``H_k(f)`` in the recorded generator bases.

    ``f`` maps label chains of the source complex to label chains of the
    target.  The image of every generator must be a cycle (else NotChainMap).
    """
    S, T = src.group(k_src), tgt.group(k_tgt)
    cols = []
    for j, z in enumerate(S.all_generators()):
        w = f(z)
        if tgt.C.d(w):
            raise NotChainMap(j, f"image of homology generator {j} is not a cycle")
        c = T.coordinates(w)
        cols.append({i: v for i, v in enumerate(c) if v})
    return IntMatrix(T.ngens, S.ngens, cols)


def label_map(mapping: Callable[[Hashable], Chain | None]) -> Callable[[Chain], Chain]:
    """Extend a per-label map linearly (``None`` means zero)."""

    def f(chain: Chain) -> Chain:
        out: Chain = {}
        for lab, c in chain.items():
            img = mapping(lab)
            if img:
                for t, v in img.items():
                    _add(out, t, c * v)
        return out

    return f


def inclusion_map(target_labels: Iterable[Hashable] | None = None) -> Callable[[Chain], Chain]:
    """The chain map induced by an inclusion of labelled bases."""
    if target_labels is None:
        return lambda chain: dict(chain)
    allowed = set(target_labels)

    def f(chain: Chain) -> Chain:
        for lab in chain:
            if lab not in allowed:
                raise NotChainMap(lab, f"{lab!r} is not a label of the target")
        return dict(chain)

    return f


# ---------------------------------------------------------------------------
# long exact sequences
# ---------------------------------------------------------------------------

@dataclass
class LESRow:
    """Exact row ``... -> H_k(A) -> H_k(B) -> H_k(C) -> H_{k-1}(A) -> ...``.

    ``maps[i]`` goes from ``groups[i]`` to ``groups[i+1]``; when ``cyclic``
    the last map closes the loop back to ``groups[0]``.
    """

    nodes: list  # (name, grading) with name in {'sub', 'total', 'quotient'}
    groups: list[FinAbGroup]
    maps: list[IntMatrix]
    cyclic: bool
    checked_ends: bool = True

    def index(self, name: str, k: int) -> int:
        return self.nodes.index((name, k))

    def exactness_failures(self) -> list:
        bad = []
        n = len(self.groups)
        for i in range(n):
            X = self.groups[i]
            has_in = self.cyclic or i > 0
            has_out = self.cyclic or i < n - 1
            if not self.checked_ends and (not has_in or not has_out):
                continue
            if has_in:
                f = self.maps[i - 1]
                Y = self.groups[i - 1]
            else:
                f, Y = IntMatrix(X.ngens, 0), FinAbGroup(0)
            if has_out:
                gmap = self.maps[i]
                Z = self.groups[(i + 1) % n]
            else:
                gmap, Z = IntMatrix(0, X.ngens), FinAbGroup(0)
            if not maps_exact(f, gmap, Y, X, Z):
                bad.append(self.nodes[i])
        return bad

    def check(self) -> None:
        bad = self.exactness_failures()
        if bad:
            raise ExactnessFailure(bad[0])


def maps_exact(f: IntMatrix, g: IntMatrix, Y: FinAbGroup, X: FinAbGroup, Z: FinAbGroup) -> bool:
    """Whether ``Y --f--> X --g--> Z`` is exact at ``X``."""
    return image_lattice(f, X.moduli) == kernel_lattice(g, X.moduli, Z.moduli)


def connecting_map(ses: SES, HA: ChainHomology, HC: ChainHomology, k: int) -> IntMatrix:
    """Zig-zag map ``H_k(quotient) -> H_{k-1}(sub)``.

    Quotient cycles are lifted to the total complex by keeping their labels,
    whose boundary then lies in the subcomplex.
    """
    total, sub = ses.total, ses.sub
    Q, A = HC.group(k), HA.group(k - 1)
    cols = []
    for j, z in enumerate(Q.all_generators()):
        w = total.d(z)
        for lab in w:
            if lab not in sub.index:
                raise NotChainMap(lab, "lifted boundary leaves the subcomplex")
        c = A.coordinates(w)
        cols.append({i: v for i, v in enumerate(c) if v})
    return IntMatrix(A.ngens, Q.ngens, cols)


def long_exact_sequence(
    ses: SES, gradings: Sequence[int] | None = None, check: bool = True, complete: bool = False
) -> LESRow:
    """Long exact homology sequence of ``ses``.

    For ``p == 0`` and no explicit window the row covers every grading where
    any of the three complexes lives, so exactness is checked at every node
    (including the two ends, whose outer neighbours are zero).  Pass
    ``complete=True`` with explicit ``gradings`` that cover that range to
    keep the end checks.  For ``p > 0`` the row is a closed loop over the
    ``p`` grading classes.
    """
    p = ses.total.p
    HA, HB, HC = ChainHomology(ses.sub), ChainHomology(ses.total), ChainHomology(ses.quotient)
    if p:
        ks = list(range(p - 1, -1, -1))
        cyclic, checked_ends = True, True
    elif gradings is None:
        gs = ses.total.grading
        ks = list(range(max(gs), min(gs) - 1, -1)) if gs else []
        cyclic, checked_ends = False, True
    else:
        ks = sorted(set(gradings), reverse=True)
        cyclic, checked_ends = False, complete
    inc = label_map(lambda lab: {lab: 1})
    nodes, groups, maps = [], [], []
    for k in ks:
        nodes += [("sub", k), ("total", k), ("quotient", k)]
        groups += [HA.group(k), HB.group(k), HC.group(k)]
        maps.append(induced_homology_map(inc, HA, HB, k, k))
        maps.append(induced_homology_map(_projector(ses.quotient), HB, HC, k, k))
        maps.append(connecting_map(ses, HA, HC, k))
    if not cyclic and maps:
        maps.pop()  # the final connecting map leaves the window
    row = LESRow(nodes, groups, maps, cyclic, checked_ends)
    row.homologies = (HA, HB, HC)
    if check:
        row.check()
    return row


def _projector(quotient: GradedComplex):
    idx = quotient.index
    return label_map(lambda lab: {lab: 1} if lab in idx else None)


# ---------------------------------------------------------------------------
# Morse reduction
# ---------------------------------------------------------------------------

@dataclass
class Reduction:
    """A reduced complex together with the chain maps linking it to the original."""

    original: GradedComplex
    reduced: GradedComplex
    data: ReductionData = field(repr=False)

    def project(self, chain: Chain) -> Chain:
        return self.reduced.to_labels(self.data.project(self.original.to_indices(chain)))

    def include(self, chain: Chain) -> Chain:
        return self.original.to_labels(self.data.include(self.reduced.to_indices(chain)))

    def homotopy(self, chain: Chain) -> Chain:
        return self.original.to_labels(self.data.homotopy(self.original.to_indices(chain)))


def _wrap(C: GradedComplex, data: ReductionData) -> Reduction:
    surv = data.survivors
    n = len(surv)
    red = GradedComplex([C.basis[j] for j in surv], [C.grading[j] for j in surv], C.p, IntMatrix(n, n, data.cols))
    return Reduction(C, red, data)


def morse_reduce(C: GradedComplex, matching: Sequence[tuple[Hashable, Hashable]]) -> Reduction:
    """Cancel the given ``(a, b)`` pairs (``b`` a unit term of ``d a``)."""
    idx = C.index
    pairs = [(idx[a], idx[b]) for a, b in matching]
    return _wrap(C, reduce_matching(list(C.differential.columns()), pairs, C.basis))


def greedy_reduce(C: GradedComplex) -> Reduction:
    order = sorted(range(len(C)), key=lambda j: (C.grading[j], j))
    return _wrap(C, reduce_greedy(list(C.differential.columns()), order))


# ---------------------------------------------------------------------------
# direct limits
# ---------------------------------------------------------------------------

@dataclass
class ColimitResult:
    """Stable image of a tower ``H_k(C_1) -> H_k(C_2) -> ... -> H_k(C_N)``.

    ``group`` is the image of ``H_k(C_stable)`` inside ``H_k(C_N)``; its
    generators are label chains supported in ``C_stable``.  ``images`` holds
    the canonical (HNF) image lattices for every level below the top.
    """

    grading: int
    group: FinAbGroup
    stable_from: int  # position in the tower (0-based)
    images: list
    per_level: list[FinAbGroup]
    top: "ChainHomology" = field(default=None, repr=False)


def colimit_homology(tower: Sequence[GradedComplex], k: int, steps: int = 3) -> ColimitResult:
    """Detect the direct limit of a tower of labelled subcomplexes.

    The image of each level's homology in the top level is compared; the
    limit is declared once the image stays constant over ``steps``
    consecutive inclusions strictly below the top level.
    """
    if not tower:
        raise ValueError("empty tower")
    homs = [ChainHomology(C) for C in tower]
    top = homs[-1]
    T = top.group(k)
    images = []
    for H in homs[:-1]:
        G = H.group(k)
        cols = []
        for z in G.all_generators():
            c = T.coordinates(z)
            cols.append({i: v for i, v in enumerate(c) if v})
        images.append(image_lattice(IntMatrix(T.ngens, len(cols), cols), T.moduli))
    per_level = [H.group(k) for H in homs]
    stable = None
    for s in range(len(images) - steps):
        if all(images[s + t] == images[s] for t in range(1, steps + 1)):
            stable = s
            break
    if stable is None:
        raise NotStabilized(
            f"image tower in grading {k} still moves below level {len(tower)}",
            towers=(images, per_level),
        )
    group = _subgroup(T, homs[stable], k)
    return ColimitResult(k, group, stable, images, per_level, top)


def _subgroup(T: FinAbGroup, H: ChainHomology, k: int) -> FinAbGroup:
    """Image of ``H`` (a lower level) inside the top-level group ``T``.

    The image lattice ``S`` (containing the relations of ``T``) is put in
    Hermite form; SNF of the relations expressed in that basis gives the
    group structure, and every basis vector is realised as an integer
    combination of lower-level generators.
    """
    G = H.group(k)
    gens = G.all_generators()
    n = T.ngens
    cols = [T.coordinates(z) for z in gens]
    rels = [[m if i == j else 0 for i in range(n)] for j, m in enumerate(T.moduli) if m]
    S = hermite_rows([list(c) for c in cols] + rels, n)
    r = len(S)
    Smat = IntMatrix.from_dense([[row[i] for row in S] for i in range(n)], r) if n else IntMatrix(0, r)
    # express each relation of T in the S basis
    rel_coords = []
    for rel in rels:
        x = solve_integer(Smat, rel)
        rel_coords.append(x)
    R = IntMatrix.from_dense([[x[i] for x in rel_coords] for i in range(r)], len(rel_coords)) if r else IntMatrix(0, 0)
    snf = smith_normal_form(R if rel_coords else IntMatrix(r, 0))
    d = snf.d + [0] * (r - len(snf.d))
    # new basis of S: columns of left^{-1}
    Linv = snf.left_inv
    tors = [i for i in range(r) if d[i] > 1]
    free = [i for i in range(r) if d[i] == 0]
    # realise each basis vector b of S as sum_j w_j gens_j (mod relations)
    A = IntMatrix.from_dense([[c[i] for c in cols] + [rel[i] for rel in rels] for i in range(n)], len(cols) + len(rels)) if n else None

    def realise(i: int) -> Chain:
        vec = Linv.column(i)  # coefficients in the S basis
        target = [0] * n
        for s, c in vec.items():
            for t in range(n):
                target[t] += c * S[s][t]
        w = solve_integer(A, target)
        out: Chain = {}
        for j in range(len(gens)):
            if w[j]:
                for lab, v in gens[j].items():
                    _add(out, lab, w[j] * v)
        return out

    return FinAbGroup(
        len(free),
        tuple(d[i] for i in tors),
        [realise(i) for i in free],
        [realise(i) for i in tors],
    )
