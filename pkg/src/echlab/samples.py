"""Random valid chain data for property tests and acceptance runs.

Instances are built as a direct sum of simple pieces (free generators and
two-generator complexes ``x -> c T^k y``), optionally with an action pairing
two free generators, and then disguised by a unipotent change of basis
``A = I + N`` with ``N`` nilpotent, grading-preserving and polynomial in ``T``.
Conjugating keeps the square-zero and anticommutation relations exact.
"""
from __future__ import annotations

import random

from .hf import HFData, _compose, _sum


def _neg(em: dict) -> dict:
    return {k: {e: -c for e, c in p.items()} for k, p in em.items()}


def _unipotent_inverse(N: dict, n: int) -> dict:
    """``(I + N)^{-1} - I`` for nilpotent ``N`` of index at most ``n``."""
    out: dict = {}
    power = N
    sign = -1
    for _ in range(n):
        if not power:
            break
        out = _sum(out, power if sign > 0 else _neg(power))
        power = _compose(N, power)
        sign = -sign
    return out


def _conjugate(M: dict, A: dict, Ainv: dict) -> dict:
    """``(I + A) M (I + Ainv)``."""
    MA = _sum(M, _compose(M, Ainv))
    return _sum(MA, _compose(A, MA))


def random_hfdata(rng: random.Random, max_gens: int = 6, max_exp: int = 2, p_choices=(0, 2, 4, 8), with_action: bool | None = None) -> HFData:
    while True:
        hf = _attempt(rng, max_gens, max_exp, p_choices, with_action)
        if hf is not None:
            return hf


def _attempt(rng, max_gens, max_exp, p_choices, with_action):
    p = rng.choice(p_choices)
    n = rng.randint(1, max_gens)
    names = [f"g{j}" for j in range(n)]
    grading: dict = {}
    diff: dict = {}
    free: list = []
    j = 0
    while j < n:
        if j + 1 < n and rng.random() < 0.6:
            x, y = names[j], names[j + 1]
            k = rng.randint(0, max_exp)
            gx = rng.randint(-2, 3)
            grading[x], grading[y] = gx, gx - 1 + 2 * k
            diff[(x, y)] = {k: rng.choice((1, -1, 2, 3))}
            j += 2
        else:
            grading[names[j]] = rng.randint(-2, 3)
            free.append(names[j])
            j += 1
    actions = []
    want = with_action if with_action is not None else rng.random() < 0.3
    if want and len(free) >= 2:
        z1, z2 = rng.sample(free, 2)
        k = rng.randint(0, max_exp)
        grading[z2] = grading[z1] - 1 + 2 * k
        actions.append({(z1, z2): {k: 1}})
    # unipotent disguise: N maps generator a to T^k b with matching grading
    order = names[:]
    rng.shuffle(order)
    N: dict = {}
    for s in range(n):
        for t in range(s + 1, n):
            a, b = order[s], order[t]
            for k in range(max_exp + 1):
                if grading[b] - 2 * k == grading[a] and rng.random() < 0.5:
                    N[(a, b)] = {k: rng.choice((1, -1, 2))}
    Ninv = _unipotent_inverse(N, n)
    diff = _conjugate(diff, N, Ninv)
    actions = [_conjugate(a, N, Ninv) for a in actions]
    for em in [diff, *actions]:
        for poly in em.values():
            if any(k > max_exp for k in poly):
                return None
    if p:
        grading = {x: g % p for x, g in grading.items()}
    return HFData(names, p, grading, diff, actions)
