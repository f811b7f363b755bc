"""Named worked examples over ``Z[1/p]`` and ``Q``, modelled as pattern towers."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Sequence

from .fpab import Z, FpGroup, Morphism, cokernel, identity, p_divisible_part
from .criteria import TowerQuotientSplit, quotient_split_lift_check
from .tower import (
    PhiReport,
    TowerMorphism,
    dev_tower,
    factorial_tower,
    mult_tower,
    phi_verdict,
)
from .zlinalg import IntMatrix


def inclusion_into_mult(p: int, n: int) -> TowerMorphism:
    """``Z -> Z[1/p]`` as the inclusion of stage 0."""
    return TowerMorphism(Z, mult_tower(p, n), (0,), (identity(Z),))


def rational_failure(p: int = 2, window: int = 4) -> PhiReport:
    """``Z -> Z[1/p]`` against the factorial chain exhausting ``Q``."""
    return phi_verdict(inclusion_into_mult(p, window), factorial_tower(window), window)


def _p_adic(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def least_factorial_stage(p: int, k: int) -> int:
    """Least ``n`` with ``p^k`` dividing ``n!``."""
    n = 0
    while _p_adic(factorial(n), p) < k:
        n += 1
    return n


def mult_into_factorial(p: int, n: int) -> TowerMorphism:
    """``Z[1/p] -> Q``: stage ``k`` (generator ``1/p^k``) goes to stage ``m(k)`` (generator ``1/m(k)!``)."""
    reindex = [least_factorial_stage(p, k) for k in range(n + 1)]
    maps = [Morphism(Z, Z, IntMatrix(1, 1, [factorial(m) // p ** k])) for k, m in enumerate(reindex)]
    return TowerMorphism(mult_tower(p, n), factorial_tower(reindex[-1]), tuple(reindex), tuple(maps))


def unliftable_split(p: int = 2, window: int = 4) -> TowerQuotientSplit:
    """``Z[1/p] -> Q`` modulo ``Z``: split on the quotients, no lift ``Q -> Z[1/p]``."""
    beta = mult_into_factorial(p, window)
    return quotient_split_lift_check(beta, identity(Z), window)


@dataclass
class DivisibleQuotientRow:
    group: FpGroup
    dev: FpGroup
    quotient: FpGroup
    agree: bool
    certificate: str


def divisible_quotient(p: int, groups: Sequence[FpGroup], window: int = 4) -> list[DivisibleQuotientRow]:
    """``Dev(A)`` along ``Z -> Z[1/p]`` against ``A / D_p(A)``."""
    beta = inclusion_into_mult(p, window)
    rows = []
    for a in groups:
        d, _, v = dev_tower(beta, a, window)
        _, incl = p_divisible_part(a, p)
        q, _ = cokernel(incl)
        rows.append(DivisibleQuotientRow(a, d, q, d is not None and d.isomorphic(q), v.certificate))
    return rows
