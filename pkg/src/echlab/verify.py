"""Machine checks of the structural statements about the ech complex.

Every check returns a ``VerificationReport`` rather than raising: the
verdict is ``pass``, ``fail`` (with a witness) or ``not-stabilized`` (the
budget was too small to decide).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .complexes import (
    ChainHomology,
    GradedComplex,
    LESRow,
    induced_homology_map,
    label_map,
    long_exact_sequence,
    morse_reduce,
    parse_coefficients,
    sub_quotient,
    verify_complex,
)
from .ech import (
    EchGenerator,
    build_balanced,
    build_ech,
    build_vhat_model,
    h1_map_ech,
    handle_budget,
    handle_stability,
    product_matching,
    t_action,
    u_map_ech,
)
from .errors import CyclicMatching, EchError, NonUnitPivot, NotStabilized, NotSubcomplex
from .hf import HFData, validate
from .linalg import FinAbGroup, IntMatrix, is_isomorphism
from .ocomplex import CRITICAL, OLabel, Rules, limit_homology, star_rules, vhat_generator, window

PASS, FAIL, UNSTABLE = "pass", "fail", "not-stabilized"


@dataclass
class VerificationReport:
    statement: str
    verdict: str
    parameters: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)
    witness: object = None
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "statement": self.statement,
            "verdict": self.verdict,
            "parameters": _jsonable(self.parameters),
            "evidence": _jsonable(self.evidence),
            "witness": None if self.witness is None else str(self.witness),
            "message": self.message,
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, FinAbGroup):
        return str(x)
    return str(x)


# ---------------------------------------------------------------------------
# the limit of the O-complex windows
# ---------------------------------------------------------------------------

VHAT = {0: FinAbGroup(1), 1: FinAbGroup(1), 2: FinAbGroup(0)}


def _chain_str(chain: dict) -> str:
    if not chain:
        return "0"
    parts = []
    for lab, c in sorted(chain.items()):
        s = str(lab)
        parts.append(("+" if c > 0 else "-") + ("" if abs(c) == 1 else str(abs(c))) + s)
    out = " ".join(parts)
    return out[1:] if out.startswith("+") else out


def check_lemma_2_5(L_max: int = 8, rules: Rules = star_rules) -> VerificationReport:
    """Limit homology of the O-complex windows is Z in gradings 0 and 1.

    Passes iff the stabilized limit is ``Z`` in gradings 0 and 1 and zero in
    grading 2, with the classes of ``(0,0)`` and ``(0,1) - (1,-1)`` as
    generators (up to sign).
    """
    params = {"L_max": L_max}
    windows = {}
    for L in range(1, L_max + 1):
        W = window(L, rules)
        rep = verify_complex(W)
        if not rep:
            return VerificationReport("lemma25", FAIL, params, {}, rep.witness, f"window L={L}: {rep.reason}")
        H = ChainHomology(W)
        windows[L] = [str(H.group(k)) for k in (0, 1, 2)]
    try:
        lim = limit_homology(L_max, rules)
    except NotStabilized as exc:
        return VerificationReport("lemma25", UNSTABLE, params, {"windows": windows}, None, str(exc))
    evidence = {"windows": windows, "stable_level": lim.stable_level, "limit": {}, "generators": {}}
    for k in (0, 1, 2):
        res = lim.results[k]
        G = res.group
        evidence["limit"][k] = str(G)
        evidence["generators"][k] = [_chain_str(z) for z in G.all_generators()]
        if G.iso_type() != VHAT[k].iso_type():
            return VerificationReport("lemma25", FAIL, params, evidence, k, f"grading {k}: limit {G}, expected {VHAT[k]}")
        if k == 2:
            continue
        expected = vhat_generator(k)
        top = res.top
        if top.C.d(expected):
            return VerificationReport("lemma25", FAIL, params, evidence, _chain_str(expected), "expected generator is not closed")
        got = top.coordinates(k, G.all_generators()[0])
        want = top.coordinates(k, expected)
        if want not in (got, tuple(-c for c in got)):
            return VerificationReport(
                "lemma25", FAIL, params, evidence, _chain_str(expected),
                f"grading {k}: {_chain_str(expected)} is not a generator of the limit",
            )
        evidence["generators"][k].append(f"~ {_chain_str(expected)}")
    return VerificationReport("lemma25", PASS, params, evidence)


# ---------------------------------------------------------------------------
# collapse of the handle factors
# ---------------------------------------------------------------------------

def _expected_include(lab: EchGenerator) -> dict:
    """``x (x) iota(h_1) (x) ... (x) iota(h_g)`` with iota(0,1) = (0,1) - (1,-1)."""
    terms = {(): 1}
    for h in lab.handles:
        opts = vhat_generator(0 if h == CRITICAL[0] else 1)
        new = {}
        for prefix, c in terms.items():
            for o, v in opts.items():
                new[prefix + (o,)] = c * v
        terms = new
    return {EchGenerator(lab.x, lab.i, h): c for h, c in terms.items()}


def min_collapse_level(g: int) -> int:
    return 3 * g + 1


def check_collapse(hf: HFData, g: int, L: int | None = None, window_: tuple = (-2, 2), rules: Rules = star_rules) -> VerificationReport:
    """Collapse every handle factor by the canonical matching.

    Passes iff on the level truncation the cells ``x (x) {(0,0),(0,1)}^g``
    span a subcomplex of the reduced complex whose differential is exactly
    ``d_HF (x) id``, the recorded inclusion sends them to ``x`` tensor the
    limit generators, and the balanced truncation reduces to that model
    with nothing left over.
    """
    if L is None:
        L = min_collapse_level(g)
    params = {"g": g, "L": L, "window": list(window_)}
    rep = validate(hf)
    if not rep:
        return VerificationReport("collapse", FAIL, params, {}, None, rep.violations[0])
    if L < min_collapse_level(g):
        return VerificationReport(
            "collapse", UNSTABLE, params, {}, None,
            f"level budget {L} is below {min_collapse_level(g)}, where the critical cells decouple",
        )
    model = build_vhat_model(hf, g, window_).complex
    evidence: dict = {}
    try:
        T = build_ech(hf, g, L, window_, rules)
        vr = verify_complex(T.complex)
        if not vr:
            return VerificationReport("collapse", FAIL, params, evidence, vr.witness, vr.reason)
        R = morse_reduce(T.complex, product_matching(T))
        evidence["level"] = {"cells": len(T.complex), "after_collapse": len(R.reduced)}
        for lab in model.basis:
            if lab not in R.reduced.index:
                return VerificationReport("collapse", FAIL, params, evidence, lab, f"{lab} was cancelled")
            got = R.reduced.boundary(lab)
            want = model.boundary(lab)
            if got != want:
                diff = {k: got.get(k, 0) - want.get(k, 0) for k in set(got) | set(want) if got.get(k, 0) != want.get(k, 0)}
                key = min(diff, key=str)
                return VerificationReport(
                    "collapse", FAIL, params, evidence, lab,
                    f"reduced d({lab}) differs at {key}: {got.get(key, 0)} vs {want.get(key, 0)}",
                )
            inc = R.include({lab: 1})
            if inc != _expected_include(lab):
                return VerificationReport("collapse", FAIL, params, evidence, lab, f"inclusion of {lab} is {inc}")
        E = build_balanced(hf, g, 1, window_, rules)
        vr = verify_complex(E.complex)
        if not vr:
            return VerificationReport("collapse", FAIL, params, evidence, vr.witness, vr.reason)
        RB = morse_reduce(E.complex, product_matching(E))
        evidence["balanced"] = {"cells": len(E.complex), "after_collapse": len(RB.reduced)}
        if RB.reduced.basis != model.basis:
            return VerificationReport("collapse", FAIL, params, evidence, None, "balanced collapse leaves extra cells")
        if RB.reduced.differential != model.differential:
            bad = next(
                lab for j, lab in enumerate(model.basis)
                if RB.reduced.differential.column(j) != model.differential.column(j)
            )
            return VerificationReport("collapse", FAIL, params, evidence, bad, f"balanced reduced d({bad}) differs")
    except (NonUnitPivot, CyclicMatching, NotSubcomplex) as exc:
        return VerificationReport("collapse", FAIL, params, evidence, getattr(exc, "pair", None), str(exc))
    evidence["model_cells"] = len(model)
    return VerificationReport("collapse", PASS, params, evidence)


# ---------------------------------------------------------------------------
# the ladder of long exact sequences
# ---------------------------------------------------------------------------

@dataclass
class _Ladder:
    E: object
    B: object
    R: object
    ses_top: object
    ses_bot: object
    top: LESRow
    bottom: LESRow


def _project_into(R, keep: Callable) -> Callable:
    def f(chain):
        return {k: v for k, v in R.project(chain).items() if keep(k)}

    return f


def _node_map(R, name: str) -> Callable:
    if name == "sub":
        return _project_into(R, lambda lab: lab.i <= -1)
    if name == "quotient":
        return _project_into(R, lambda lab: lab.i >= 0)
    return R.project


def _reduce_mod(vec, moduli):
    return tuple((v % m) if m else v for v, m in zip(vec, moduli))


def _matrix_equal_mod(A: IntMatrix, B: IntMatrix, moduli) -> bool:
    if A.shape != B.shape:
        return False
    for j in range(A.ncols):
        a = [A.column(j).get(i, 0) for i in range(A.nrows)]
        b = [B.column(j).get(i, 0) for i in range(B.nrows)]
        if _reduce_mod(a, moduli) != _reduce_mod(b, moduli):
            return False
    return True


def _endo_intertwines(endo_top, endo_bot, R, H_top: ChainHomology, H_bot: ChainHomology, degree: int, grades) -> object:
    """First generator ``z`` with ``pi(F z) != F pi(z)`` in homology, else None."""
    Etop = label_map(lambda lab: H_top.C.to_labels(endo_top.apply({H_top.C.index[lab]: 1})))
    Ebot = label_map(lambda lab: H_bot.C.to_labels(endo_bot.apply({H_bot.C.index[lab]: 1})))
    for k in grades:
        for z in H_top.group(k).all_generators():
            a = R.project(Etop(z))
            b = Ebot(R.project(z))
            G = H_bot.group(k + degree)
            if G.coordinates(a) != G.coordinates(b):
                return (k, _chain_str_generic(z))
    return None


def _chain_str_generic(chain) -> str:
    return " ".join(f"{c:+d}*{lab}" for lab, c in sorted(chain.items(), key=lambda kv: str(kv[0])))


def _uct_ok(groups: dict, ranks: dict, p: int, modulus: int) -> object:
    """Universal-coefficient consistency of field ranks with integer groups."""
    for k, r in ranks.items():
        G = groups[k]
        if p == 0:
            want = G.free_rank
        else:
            prev = groups.get((k - 1) % modulus if modulus else k - 1)
            want = G.free_rank + sum(1 for t in G.torsion if t % p == 0)
            if prev is not None:
                want += sum(1 for t in prev.torsion if t % p == 0)
        if r != want:
            return k
    return None


def check_theorem_2_4(
    hf: HFData,
    g: int,
    coefficients: str | None = None,
    L: int = 6,
    window_: tuple = (-3, 3),
) -> VerificationReport:
    """The ladder relating the ech flavors to HF flavors tensor V-hat^g.

    Top row: the long exact sequence of the minus/infinity/plus flavors of
    the ech complex (balanced truncation).  Bottom row: the same for the HF
    window tensored with the two-cell model of V-hat in every handle.  The
    vertical maps are induced by the projection of the canonical collapse.
    """
    params = {"g": g, "L": L, "window": list(window_), "coefficients": coefficients or "z"}
    rep = validate(hf)
    if not rep:
        return VerificationReport("thm24", FAIL, params, {}, None, rep.violations[0])
    if window_[0] > -1 or window_[1] < 0:
        raise ValueError("the window must contain i = -1 and i = 0")
    hs = handle_stability(g, handle_budget(L))
    evidence: dict = {"handle_stability": {"N": hs.N, "ok": hs.ok}}
    if not hs.ok:
        return VerificationReport("thm24", UNSTABLE, params, evidence, None, "handle windows did not stabilize")
    try:
        lad = _ladder(hf, g, window_)
    except EchError as exc:
        return VerificationReport("thm24", FAIL, params, evidence, getattr(exc, "witness", None), str(exc))
    if lad is None:
        return VerificationReport("thm24", FAIL, params, evidence, None, "collapse of the handle factors does not give the model")
    top, bot = lad.top, lad.bottom
    evidence["top"] = [f"{n}[{k}]={G}" for (n, k), G in zip(top.nodes, top.groups)]
    evidence["bottom"] = [f"{n}[{k}]={G}" for (n, k), G in zip(bot.nodes, bot.groups)]
    # (a) exactness of both rows
    for name, row in (("top", top), ("bottom", bot)):
        bad = row.exactness_failures()
        if bad:
            return VerificationReport("thm24", FAIL, params, evidence, bad[0], f"{name} row is not exact at {bad[0]}")
    # vertical maps
    Htop = dict(zip(("sub", "total", "quotient"), top.homologies))
    Hbot = dict(zip(("sub", "total", "quotient"), bot.homologies))
    verts = []
    for (name, k), Gt, Gb in zip(top.nodes, top.groups, bot.groups):
        V = induced_homology_map(_node_map(lad.R, name), Htop[name], Hbot[name], k, k)
        # (c) isomorphisms over Z
        if not is_isomorphism(V, Gt, Gb):
            return VerificationReport("thm24", FAIL, params, evidence, (name, k), f"vertical map at {name}[{k}] is not an isomorphism")
        verts.append(V)
    # (b) squares commute
    n = len(top.groups)
    for j, (ft, fb) in enumerate(zip(top.maps, bot.maps)):
        jn = (j + 1) % n
        lhs = verts[jn] @ ft
        rhs = fb @ verts[j]
        if not _matrix_equal_mod(lhs, rhs, bot.groups[jn].moduli):
            return VerificationReport("thm24", FAIL, params, evidence, (top.nodes[j], top.nodes[jn]), "square does not commute")
    # (d), (e) module structure
    msg = _module_checks(hf, lad, Htop, Hbot)
    if msg is not None:
        return VerificationReport("thm24", FAIL, params, evidence, msg[0], msg[1])
    # coefficient fields
    c = parse_coefficients(coefficients)
    if c is not None:
        modulus = hf.p
        for name in ("sub", "total", "quotient"):
            degrees = sorted({k for (nm, k) in top.nodes if nm == name})
            rt = {k: Htop[name].field_rank(k, c) for k in degrees}
            rb = {k: Hbot[name].field_rank(k, c) for k in degrees}
            if rt != rb:
                k = next(k for k in degrees if rt[k] != rb[k])
                return VerificationReport("thm24", FAIL, params, evidence, (name, k), "field ranks differ between rows")
            groups = {k: Htop[name].group(k) for k in degrees}
            bad = _uct_ok(groups, rt, c, modulus)
            if bad is not None:
                return VerificationReport("thm24", FAIL, params, evidence, (name, bad), "field ranks disagree with integer groups")
            evidence[f"ranks_{name}"] = {k: rt[k] for k in degrees}
    return VerificationReport("thm24", PASS, params, evidence)


def _ladder(hf: HFData, g: int, window_: tuple):
    E = build_balanced(hf, g, 1, window_)
    B = build_vhat_model(hf, g, window_)
    R = morse_reduce(E.complex, product_matching(E))
    if R.reduced.basis != B.complex.basis or R.reduced.differential != B.complex.differential:
        return None
    below = lambda lab: lab.i <= -1  # noqa: E731
    ses_top = sub_quotient(E.complex, below)
    ses_bot = sub_quotient(B.complex, below)
    ks = None
    if E.complex.p == 0:
        gs = E.complex.grading + B.complex.grading
        ks = range(min(gs), max(gs) + 1)
    top = long_exact_sequence(ses_top, ks, check=False, complete=True)
    bottom = long_exact_sequence(ses_bot, ks, check=False, complete=True)
    return _Ladder(E, B, R, ses_top, ses_bot, top, bottom)


def _module_checks(hf: HFData, lad: _Ladder, Htop: dict, Hbot: dict):
    """U, t and h1 intertwining; returns (witness, message) on failure."""
    E, B, R = lad.E, lad.B, lad.R
    t = t_action(E)
    U_E, U_B = u_map_ech(E), u_map_ech(B)
    if t.matrix != U_E.matrix:
        return (None, "t-action differs from U (x) id at chain level")
    for endo, C in ((U_E, E.complex), (U_B, B.complex)):
        rep = endo.check(C)
        if not rep:
            return (rep.witness, f"U: {rep.reason}")
    grades = sorted({k for (nm, k) in lad.top.nodes if nm == "total"})
    w = _endo_intertwines(U_E.matrix, U_B.matrix, R, Htop["total"], Hbot["total"], -2, grades)
    if w is not None:
        return (w, "U is not intertwined by the comparison map")
    for j in range(len(hf.h1_actions)):
        A_E, A_B = h1_map_ech(E, j), h1_map_ech(B, j)
        for endo, C in ((A_E, E.complex), (A_B, B.complex)):
            rep = endo.check(C)
            if not rep:
                return (rep.witness, f"h1 action {j}: {rep.reason}")
        w = _endo_intertwines(A_E.matrix, A_B.matrix, R, Htop["total"], Hbot["total"], -1, grades)
        if w is not None:
            return (w, f"h1 action {j} is not intertwined by the comparison map")
    return None


def check_module_structure(hf: HFData, g: int, window_: tuple = (-3, 3)) -> VerificationReport:
    """U and h1 actions on ech homology versus ``U_HF (x) id`` and ``h1 (x) id``.

    Besides intertwining, checks on ech homology that every h1 action
    squares to zero, that distinct actions anticommute, and that each
    commutes with U.
    """
    params = {"g": g, "window": list(window_)}
    rep = validate(hf)
    if not rep:
        return VerificationReport("modules", FAIL, params, {}, None, rep.violations[0])
    lad = _ladder(hf, g, window_)
    if lad is None:
        return VerificationReport("modules", FAIL, params, {}, None, "collapse does not give the model")
    Htop = dict(zip(("sub", "total", "quotient"), lad.top.homologies))
    Hbot = dict(zip(("sub", "total", "quotient"), lad.bottom.homologies))
    msg = _module_checks(hf, lad, Htop, Hbot)
    if msg is not None:
        return VerificationReport("modules", FAIL, params, {}, msg[0], msg[1])
    E = lad.E
    H = Htop["total"]
    C = E.complex
    acts = [h1_map_ech(E, j).matrix for j in range(len(hf.h1_actions))]
    U = u_map_ech(E).matrix
    grades = sorted(set(C.classes))

    def apply(M, chain):
        return C.to_labels(M.apply(C.to_indices(chain)))

    def same_class(a, b, k):
        if k not in grades:
            return not a and not b
        G = H.group(k)
        return G.coordinates(a) == G.coordinates(b)

    def deg(k, d):
        return C.grade_class(k + d)

    for k in grades:
        for z in H.group(k).all_generators():
            for j, A in enumerate(acts):
                if not same_class(apply(A, apply(A, z)), {}, deg(k, -2)):
                    return VerificationReport("modules", FAIL, params, {}, (k, j), f"h1 action {j} does not square to zero")
                if not same_class(apply(A, apply(U, z)), apply(U, apply(A, z)), deg(k, -3)):
                    return VerificationReport("modules", FAIL, params, {}, (k, j), f"h1 action {j} does not commute with U")
                for j2 in range(j + 1, len(acts)):
                    a = apply(A, apply(acts[j2], z))
                    b = apply(acts[j2], apply(A, z))
                    b = {lab: -v for lab, v in b.items()}
                    if not same_class(a, b, deg(k, -2)):
                        return VerificationReport("modules", FAIL, params, {}, (k, j, j2), "h1 actions do not anticommute")
    return VerificationReport("modules", PASS, params, {"h1_actions": len(acts)})
