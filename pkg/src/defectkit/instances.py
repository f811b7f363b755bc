"""Seeded random instances for property checks and the self-test."""

from __future__ import annotations

import random

from .fpab import (
    FpGroup,
    Morphism,
    cokernel,
    direct_sum,
    free_group,
    identity,
    make_group,
    pushout,
    subgroup_generated,
)
from .homext import ext1, ext_class_to_extension, hom_group
from .tower import Tower, finite_tower
from .zlinalg import IntMatrix, rank


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 20) -> IntMatrix:
    return IntMatrix(rows, cols, [rng.randint(-bound, bound) for _ in range(rows * cols)])


def random_group(rng: random.Random, max_gens: int = 3, bound: int = 6, finite: bool = False) -> FpGroup:
    n = rng.randint(1, max_gens)
    if finite:
        while True:
            m = random_matrix(rng, n, n, bound)
            if rank(m) == n:
                return make_group(m, n)
    k = rng.randint(0, n + 1)
    return make_group(random_matrix(rng, n, k, bound), n)


def _small_coords(rng: random.Random, g: FpGroup, bound: int = 3) -> list[int]:
    out = []
    for i in range(g.ngens):
        d = g.torsion[i] if i < len(g.torsion) else 0
        out.append(rng.randrange(d) if d else rng.randint(-bound, bound))
    return out


def random_element(rng: random.Random, g: FpGroup):
    """Element of ``g`` (taken on its Smith form, then mapped back)."""
    from .fpab import simplify

    s, _, back = simplify(g)
    return back(_small_coords(rng, s))


def random_morphism(rng: random.Random, a: FpGroup, b: FpGroup) -> Morphism:
    h = hom_group(a, b)
    return h.decode(_small_coords(rng, h.carrier))


def random_mono_into_free(rng: random.Random, max_rank: int = 3, bound: int = 6) -> Morphism:
    n = rng.randint(1, max_rank)
    k = rng.randint(0, n)
    while True:
        m = random_matrix(rng, n, k, bound)
        if rank(m) == k:
            return Morphism(free_group(k), free_group(n), m)


def random_into_free(rng: random.Random, max_rank: int = 3, bound: int = 6, free_source: bool = False) -> Morphism:
    L = free_group(rng.randint(0, max_rank)) if free_source else random_group(rng, max_rank, bound)
    P = free_group(rng.randint(1, max_rank))
    return random_morphism(rng, L, P)


def random_epi(rng: random.Random, max_gens: int = 3, bound: int = 6) -> Morphism:
    """Quotient map ``L -> L / H`` for a random subgroup ``H``."""
    L = random_group(rng, max_gens, bound)
    elems = [random_element(rng, L) for _ in range(rng.randint(0, 2))]
    _, incl = subgroup_generated(L, elems)
    _, proj = cokernel(incl)
    return proj


def random_ses(rng: random.Random, max_gens: int = 2, bound: int = 6) -> tuple[Morphism, Morphism]:
    """``0 -> B -i-> E -q-> A -> 0`` from a random class in ``Ext^1(A, B)``."""
    a = random_group(rng, max_gens, bound)
    b = random_group(rng, max_gens, bound)
    e = ext1(a, b)
    ext = ext_class_to_extension(e, _small_coords(rng, e.carrier))
    return ext.nu, ext.pi


def random_mono_tower(rng: random.Random, length: int, max_gens: int = 2, bound: int = 4) -> Tower:
    """Monomorphic chain: each step adjoins a summand or an ``n``-th root of an element."""
    stages = [random_group(rng, max_gens, bound)]
    trans = []
    for _ in range(length):
        g = stages[-1]
        if rng.random() < 0.5:
            s, inj, _ = direct_sum(g, random_group(rng, 1, bound))
            trans.append(inj[0])
            stages.append(s)
        else:
            x = random_element(rng, g)
            n = rng.randint(2, 4)
            z = free_group(1)
            times_n = Morphism(z, z, IntMatrix(1, 1, [n]))
            pick = Morphism(z, g, IntMatrix.column(x.coords))
            # pushout of the mono x n along 1 -> x: g embeds, x gains an n-th root
            big, nu, _ = pushout(pick, times_n)
            trans.append(nu)
            stages.append(big)
    return finite_tower(stages, trans)


def random_tower(rng: random.Random, length: int, max_gens: int = 2, bound: int = 4) -> Tower:
    stages = [random_group(rng, max_gens, bound) for _ in range(length + 1)]
    trans = [random_morphism(rng, a, b) for a, b in zip(stages, stages[1:])]
    return finite_tower(stages, trans)


def random_split_pair(rng: random.Random, bound: int = 4) -> tuple[Morphism, Morphism, Morphism, Morphism]:
    """``(beta, h, g, k)`` with ``g beta + k h = id`` by construction, so ``(g, k)``
    is a left inverse of ``(beta, h)^t``."""
    L = random_group(rng, 2, bound)
    P = random_group(rng, 2, bound)
    F = random_group(rng, 2, bound)
    beta = random_morphism(rng, L, P)
    g = random_morphism(rng, P, L)
    _, inj, proj = direct_sum(L, F)
    h = inj[0] @ (identity(L) - g @ beta) + inj[1] @ random_morphism(rng, L, F)
    return beta, h, g, proj[0]


def random_nonsplit_sigma(rng: random.Random, n_family: int, bound: int = 4):
    """``(beta, family, sigma)`` with ``beta`` mono into free and a random ``sigma``."""
    beta = random_mono_into_free(rng, 2, bound)
    family = [random_group(rng, 1, bound) for _ in range(n_family)]
    s, _, _ = direct_sum(*family)
    return beta, family, random_morphism(rng, beta.src, s)
