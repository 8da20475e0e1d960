"""Exact integer linear algebra.

Everything here works with Python integers, so there is no overflow at any
step.  Matrices are stored sparse by column (``IntMatrix``) and densified as
lists of lists only inside the normal-form routines.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Sequence

from .errors import CompositionNonzero, NotChainMap, ResourceExhausted


class IntMatrix:
    """Integer matrix stored as a list of sparse columns ``{row: value}``."""

    __slots__ = ("nrows", "ncols", "_cols")

    def __init__(self, nrows: int, ncols: int, cols: list[dict[int, int]] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        elif len(cols) != ncols:
            raise ValueError(f"expected {ncols} columns, got {len(cols)}")
        self._cols = cols

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [{j: 1} for j in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if nrows else 0
        cols: list[dict[int, int]] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = int(v)
        return cls(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: Iterable[dict[int, int]]) -> "IntMatrix":
        cols = []
        for c in columns:
            col = {}
            for i, v in c.items():
                if not 0 <= i < nrows:
                    raise IndexError(f"row {i} out of range for {nrows} rows")
                if v:
                    col[i] = int(v)
            cols.append(col)
        return cls(nrows, len(cols), cols)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, int]]) -> "IntMatrix":
        m = cls(nrows, ncols)
        for i, j, v in entries:
            m._check(i, j)
            if v:
                col = m._cols[j]
                s = col.get(i, 0) + v
                if s:
                    col[i] = s
                else:
                    col.pop(i, None)
        return m

    # access -------------------------------------------------------------
    def _check(self, i: int, j: int) -> None:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside a {self.nrows}x{self.ncols} matrix")

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        self._check(i, j)
        return self._cols[j].get(i, 0)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def column(self, j: int) -> dict[int, int]:
        if not 0 <= j < self.ncols:
            raise IndexError(f"column {j} out of range")
        return dict(self._cols[j])

    def columns(self):
        """Iterate over the (read-only) sparse columns."""
        return iter(self._cols)

    def entries(self):
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                yield i, j, v

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def max_abs(self) -> int:
        return max((abs(v) for c in self._cols for v in c.values()), default=0)

    def is_zero(self) -> bool:
        return all(not c for c in self._cols)

    def to_dense(self) -> list[list[int]]:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    # arithmetic ---------------------------------------------------------
    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector ``{col: value}``."""
        out: dict[int, int] = {}
        for j, a in vec.items():
            if not 0 <= j < self.ncols:
                raise IndexError(f"vector index {j} out of range")
            for i, v in self._cols[j].items():
                s = out.get(i, 0) + a * v
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix(self.nrows, other.ncols, [self.apply(c) for c in other._cols])

    def _combine(self, other: "IntMatrix", sign: int) -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for i, v in b.items():
                s = c.get(i, 0) + sign * v
                if s:
                    c[i] = s
                else:
                    c.pop(i, None)
            cols.append(c)
        return IntMatrix(self.nrows, self.ncols, cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, [{i: -v for i, v in c.items()} for c in self._cols])

    def scale(self, k: int) -> "IntMatrix":
        if k == 0:
            return IntMatrix(self.nrows, self.ncols)
        return IntMatrix(self.nrows, self.ncols, [{i: k * v for i, v in c.items()} for c in self._cols])

    def transpose(self) -> "IntMatrix":
        cols: list[dict[int, int]] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self._cols):
            for i, v in col.items():
                cols[i][j] = v
        return IntMatrix(self.ncols, self.nrows, cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        pos = {r: k for k, r in enumerate(rows)}
        out = []
        for j in cols:
            src = self._cols[j]
            out.append({pos[i]: v for i, v in src.items() if i in pos})
        return IntMatrix(len(rows), len(cols), out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(tuple(sorted(c.items())) for c in self._cols)))

    def __repr__(self) -> str:
        if self.nrows * self.ncols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def _dense(A) -> list[list[int]]:
    if isinstance(A, IntMatrix):
        return A.to_dense()
    return [list(map(int, r)) for r in A]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SNFResult:
    """``left @ A @ right`` is diagonal with diagonal ``d`` (padded by zeros).

    ``left_inv`` / ``right_inv`` are the exact inverses when they were
    requested, else ``None``.
    """

    d: list[int]
    left: IntMatrix
    right: IntMatrix
    left_inv: IntMatrix | None = None
    right_inv: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)


def _identity_rows(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A, inverses: bool = True) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivots are chosen with minimal absolute value in the remaining block, which
    keeps intermediate coefficients small on the sparse +-1 matrices we feed it.
    """
    try:
        return _snf(_dense(A), A.ncols if isinstance(A, IntMatrix) else None, inverses)
    except MemoryError as exc:  # pragma: no cover - depends on host limits
        raise ResourceExhausted("Smith normal form exhausted available memory") from exc


def _snf(M: list[list[int]], ncols_hint, inverses: bool) -> SNFResult:
    m = len(M)
    n = len(M[0]) if m else (ncols_hint or 0)
    U = _identity_rows(m)
    V = _identity_rows(n)
    Ui = _identity_rows(m) if inverses else None
    Vi = _identity_rows(n) if inverses else None

    def swap_rows(i, j):
        if i == j:
            return
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        if Ui is not None:
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        if Vi is not None:
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if not q:
            return
        rs, rd = M[src], M[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        us, ud = U[src], U[dst]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]
        if Ui is not None:
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if not q:
            return
        for row in M:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]
        if Vi is not None:
            vd, vs = Vi[dst], Vi[src]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]
        if Ui is not None:
            for row in Ui:
                row[i] = -row[i]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remaining entry of row/column t into the pivot
                cand = [(abs(M[i][t]), i, t) for i in range(t, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t, n) if M[t][j]]
                _, ci, cj = min(cand)
                swap_rows(t, ci)
                swap_cols(t, cj)
                continue
            bad = None
            for i in range(t + 1, m):
                row = M[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            negate_row(t)
        diag.append(M[t][t])
        t += 1
    diag.extend([0] * (min(m, n) - len(diag)))
    res = SNFResult(
        d=diag,
        left=IntMatrix.from_dense(U, m),
        right=IntMatrix.from_dense(V, n),
    )
    if inverses:
        res.left_inv = IntMatrix.from_dense(Ui, m)
        res.right_inv = IntMatrix.from_dense(Vi, n)
    return res


def invariant_factors(A) -> list[int]:
    return smith_normal_form(A, inverses=False).d


# ---------------------------------------------------------------------------
# Hermite normal form and lattices
# ---------------------------------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_rows(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Canonical row Hermite normal form of the lattice spanned by ``vectors``.

    Rows are returned with strictly increasing pivot columns, positive pivots,
    and entries above each pivot reduced into ``[0, pivot)``.  Two generating
    sets span the same lattice iff their HNFs are equal.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    for r in rows:
        if len(r) != n:
            raise ValueError("vector length mismatch")
    out: list[list[int]] = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        dead = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        piv = live[0]
        for r in live[1:]:
            a, b = piv[col], r[col]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [x * u + y * v for u, v in zip(piv, r)]
            new_r = [-bg * u + ag * v for u, v in zip(piv, r)]
            piv = new_piv
            if any(new_r):
                dead.append(new_r)
        if piv[col] < 0:
            piv = [-u for u in piv]
        out.append(piv)
        rows = [r for r in dead if any(r)]
        col += 1
    for k in range(len(out)):
        pc = next(j for j, v in enumerate(out[k]) if v)
        p = out[k][pc]
        for above in range(k):
            q = out[above][pc] // p
            if q:
                out[above] = [u - q * v for u, v in zip(out[above], out[k])]
    return out


def lattice_contains(hnf: list[list[int]], v: Sequence[int]) -> bool:
    """Membership test against a basis in the form produced by ``hermite_rows``."""
    w = list(v)
    for row in hnf:
        pc = next(j for j, x in enumerate(row) if x)
        if w[pc] % row[pc]:
            return False
        q = w[pc] // row[pc]
        if q:
            w = [a - q * b for a, b in zip(w, row)]
    return not any(w)


def integer_kernel(A: IntMatrix) -> list[list[int]]:
    """Basis (HNF-canonical) of ``{x in Z^n : A x = 0}``."""
    snf = smith_normal_form(A, inverses=False)
    r = snf.rank
    R = snf.right.to_dense()
    n = A.ncols
    basis = [[R[i][j] for i in range(n)] for j in range(r, n)]
    return hermite_rows(basis, n)


def solve_integer(A: IntMatrix, b: dict[int, int] | Sequence[int]) -> list[int] | None:
    """An integer solution of ``A x = b`` or ``None`` when there is none."""
    if not isinstance(b, dict):
        b = {i: v for i, v in enumerate(b) if v}
    snf = smith_normal_form(A, inverses=False)
    ub = snf.left.apply(b)
    y = [0] * A.ncols
    for i, v in ub.items():
        di = snf.d[i] if i < len(snf.d) else 0
        if di == 0 or v % di:
            return None
        y[i] = v // di
    x = snf.right.apply({j: v for j, v in enumerate(y) if v})
    return [x.get(j, 0) for j in range(A.ncols)]


def rank_mod_p(A: IntMatrix, p: int) -> int:
    """Rank over the prime field F_p by sparse row elimination."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for col in A.columns():
        v = {i: x % p for i, x in col.items() if x % p}
        while v:
            lead = min(v)
            if lead not in pivots:
                inv = pow(v[lead], -1, p)
                pivots[lead] = {i: (x * inv) % p for i, x in v.items()}
                rank += 1
                break
            piv = pivots[lead]
            c = v[lead]
            for i, x in piv.items():
                s = (v.get(i, 0) - c * x) % p
                if s:
                    v[i] = s
                else:
                    v.pop(i, None)
    return rank


def rank_q(A: IntMatrix) -> int:
    """Exact rank over Q (fraction-free Bareiss elimination)."""
    M = A.to_dense()
    m, n = A.nrows, A.ncols
    rank = 0
    prev = 1
    row = 0
    for col in range(n):
        if row >= m:
            break
        piv = next((i for i in range(row, m) if M[i][col]), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        for i in range(row + 1, m):
            a = M[i][col]
            for j in range(col + 1, n):
                M[i][j] = (M[row][col] * M[i][j] - a * M[row][j]) // prev
            M[i][col] = 0
        prev = M[row][col]
        row += 1
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass
class FinAbGroup:
    """``Z^free_rank`` plus cyclic torsion summands ``Z/t`` (divisibility chain).

    Coordinates of an element are listed torsion summands first, then free
    summands; torsion coordinates are reduced modulo their order.
    ``projection`` maps cycles of the ambient basis to those coordinates and
    ``generators`` / ``torsion_generators`` hold representatives as sparse
    chains ``{basis index: coefficient}`` when they were recorded.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()
    generators: list[dict[int, int]] | None = field(default=None, compare=False)
    torsion_generators: list[dict[int, int]] | None = field(default=None, compare=False)
    projection: IntMatrix | None = field(default=None, repr=False, compare=False)
    # optional map from ambient chains into the domain of ``projection``
    localize: Callable[[dict], dict] | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.torsion = tuple(int(t) for t in self.torsion)
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion orders must be at least 2")

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    def iso_type(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def all_generators(self) -> list[dict[int, int]]:
        """Representatives in coordinate order (torsion first, then free)."""
        if self.torsion and self.torsion_generators is None:
            raise ValueError("torsion generators were not recorded")
        return list(self.torsion_generators or []) + list(self.generators or [])

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        return tuple((c % m) if m else c for c, m in zip(coords, self.moduli))

    def coordinates(self, chain: dict[int, int]) -> tuple[int, ...]:
        if self.projection is None:
            raise ValueError("group has no recorded projection")
        if self.localize is not None:
            chain = self.localize(chain)
        v = self.projection.apply(chain)
        return self.reduce([v.get(i, 0) for i in range(self.ngens)])

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def same_type(self, other: "FinAbGroup") -> bool:
        return self.iso_type() == other.iso_type()


def homology_pair(d_in: IntMatrix, d_out: IntMatrix, torsion_generators: bool = False) -> FinAbGroup:
    """``ker(d_out) / im(d_in)`` with representatives and a coordinate projection."""
    if d_in.nrows != d_out.ncols:
        raise ValueError(f"maps are not composable: {d_in.shape} then {d_out.shape}")
    comp = d_out @ d_in
    for j, col in enumerate(comp.columns()):
        if col:
            raise CompositionNonzero(j)
    n = d_out.ncols
    if n == 0:
        return FinAbGroup(0, (), [], [] if torsion_generators else None, IntMatrix(0, 0))
    s1 = smith_normal_form(d_out)
    r = s1.rank
    k = n - r
    Vi = s1.right_inv
    R = s1.right
    # kernel coordinates of a cycle c are rows r.. of right_inv @ c
    kin = Vi.submatrix(list(range(r, n)), list(range(n)))
    kbasis = R.submatrix(list(range(n)), list(range(r, n)))
    M = kin @ d_in
    s2 = smith_normal_form(M)
    U2, U2i = s2.left, s2.left_inv
    e = s2.d + [0] * (k - len(s2.d))
    proj = U2 @ kin
    gens_all = kbasis @ U2i
    tors_idx = [j for j in range(k) if e[j] > 1]
    free_idx = [j for j in range(k) if e[j] == 0]
    keep = tors_idx + free_idx
    rows = proj.submatrix(keep, list(range(n)))  # one row per kept coordinate
    gens = [gens_all.column(j) for j in free_idx]
    tgens = [gens_all.column(j) for j in tors_idx] if torsion_generators else None
    return FinAbGroup(
        free_rank=len(free_idx),
        torsion=tuple(e[j] for j in tors_idx),
        generators=gens,
        torsion_generators=tgens,
        projection=rows,
    )


def field_homology_pair(d_in: IntMatrix, d_out: IntMatrix, characteristic: int = 0) -> int:
    """Dimension of ``ker(d_out) / im(d_in)`` over Q (characteristic 0) or F_p."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("maps are not composable")
    comp = d_out @ d_in
    for j, col in enumerate(comp.columns()):
        if col:
            raise CompositionNonzero(j)
    if characteristic == 0:
        r_out, r_in = rank_q(d_out), rank_q(d_in)
    else:
        r_out, r_in = rank_mod_p(d_out, characteristic), rank_mod_p(d_in, characteristic)
    return d_out.ncols - r_out - r_in


def induced_map(
    f: IntMatrix,
    source: FinAbGroup,
    target: FinAbGroup,
    source_pair: tuple[IntMatrix, IntMatrix] | None = None,
    target_pair: tuple[IntMatrix, IntMatrix] | None = None,
) -> IntMatrix:
    """Matrix of the map induced by ``f`` in the recorded generator bases.

    Columns are indexed by the source generators (torsion first, then free);
    entries of torsion rows are reduced modulo the target orders.  When the
    composable pairs are passed, ``f`` is first checked to send cycles to
    cycles and boundaries to boundaries; a violation raises ``NotChainMap``.
    """
    gens = source.all_generators()
    images = [f.apply(z) for z in gens]
    if target_pair is not None:
        t_in, t_out = target_pair
        for j, w in enumerate(images):
            if t_out.apply(w):
                raise NotChainMap(j, f"image of generator {j} is not a cycle")
    if source_pair is not None and target_pair is not None:
        s_in, _ = source_pair
        t_in, _ = target_pair
        for j, col in enumerate(s_in.columns()):
            if not col:
                continue
            w = f.apply(col)
            if w and solve_integer(t_in, w) is None:
                raise NotChainMap(j, f"boundary of source cell {j} maps to a non-boundary")
    cols = []
    for w in images:
        c = target.coordinates(w)
        cols.append({i: v for i, v in enumerate(c) if v})
    return IntMatrix(target.ngens, len(gens), cols)


# ---------------------------------------------------------------------------
# homomorphisms between finitely presented groups Z^a / diag(moduli)
# ---------------------------------------------------------------------------

def _relations(moduli: Sequence[int]) -> list[list[int]]:
    n = len(moduli)
    return [[m if i == j else 0 for i in range(n)] for j, m in enumerate(moduli) if m]


def image_lattice(M: IntMatrix, target_moduli: Sequence[int]) -> list[list[int]]:
    """HNF of ``im(M) + relations`` inside the target coordinate lattice."""
    b = len(target_moduli)
    vecs = [[c.get(i, 0) for i in range(b)] for c in M.columns()]
    return hermite_rows(vecs + _relations(target_moduli), b)


def kernel_lattice(M: IntMatrix, source_moduli: Sequence[int], target_moduli: Sequence[int]) -> list[list[int]]:
    """HNF of ``{w : M w in relations(target)} + relations(source)``."""
    a, b = len(source_moduli), len(target_moduli)
    rels = [(i, m) for i, m in enumerate(target_moduli) if m]
    cols = [dict(c) for c in M.columns()]
    for i, m in rels:
        cols.append({i: m})
    aug = IntMatrix(b, a + len(rels), cols)
    ker = integer_kernel(aug) if aug.ncols else []
    vecs = [v[:a] for v in ker]
    return hermite_rows(vecs + _relations(source_moduli), a)


def is_isomorphism(M: IntMatrix, source: FinAbGroup, target: FinAbGroup) -> bool:
    """Whether the homomorphism with matrix ``M`` is bijective."""
    if source.iso_type() != target.iso_type():
        return False
    src, tgt = source.moduli, target.moduli
    full_t = hermite_rows(_relations(tgt) + [[1 if i == j else 0 for i in range(len(tgt))] for j in range(len(tgt))], len(tgt))
    if image_lattice(M, tgt) != full_t:
        return False
    return kernel_lattice(M, src, tgt) == hermite_rows(_relations(src), len(src))


def compose_matrices(*ms: IntMatrix) -> IntMatrix:
    out = ms[-1]
    for m in reversed(ms[:-1]):
        out = m @ out
    return out


def gcd_list(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g
