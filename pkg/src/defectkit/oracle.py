"""Brute-force ground truth on finite abelian groups.

Groups are first rewritten as ``Z/d1 + ... + Z/dk``; elements are tuples of
residues and homomorphisms are tuples of generator images.  Nothing here uses
the lattice machinery beyond that normalization, so counts are independent of
the Hom and kernel constructions they are compared against.
"""

from __future__ import annotations

from itertools import product
from math import prod
from typing import Iterator, Sequence

from .fpab import FpGroup, Morphism, simplify

LIMIT = 10 ** 6


class TooLarge(ValueError):
    pass


def _cyclic_orders(g: FpGroup) -> list[int]:
    if not g.is_finite():
        raise ValueError("oracle handles finite groups only")
    return list(simplify(g)[0].torsion)


def _residues(orders: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return product(*[range(d) for d in orders])


def enumerate_homs(a: FpGroup, b: FpGroup) -> list[tuple[tuple[int, ...], ...]]:
    """All homomorphisms ``A -> B`` as tuples of generator images in ``B``'s cyclic coordinates."""
    da, db = _cyclic_orders(a), _cyclic_orders(b)
    nb = prod(db)
    if nb * prod(da) > LIMIT:
        raise TooLarge("hom enumeration exceeds the bound")
    # a generator of order d may go to any y with d * y = 0
    choices = []
    for d in da:
        choices.append([y for y in _residues(db) if all((d * c) % m == 0 for c, m in zip(y, db))])
    return list(product(*choices))


def element_count(g: FpGroup) -> int:
    """Number of elements, by closing the generators under addition."""
    orders = _cyclic_orders(g)
    if prod(orders) > LIMIT:
        raise TooLarge("group too large to enumerate")
    zero = tuple(0 for _ in orders)
    seen = {zero}
    frontier = [zero]
    gens = [tuple(1 if i == j else 0 for i in range(len(orders))) for j in range(len(orders))]
    while frontier:
        nxt = []
        for x in frontier:
            for e in gens:
                y = tuple((u + v) % m for u, v, m in zip(x, e, orders))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def _apply_all(f: Morphism) -> dict:
    """Table ``x -> f(x)`` on cyclic coordinates of source and target."""
    sa, _, back_a = simplify(f.src)
    sb, to_b, _ = simplify(f.dst)
    da, db = list(sa.torsion), list(sb.torsion)
    if prod(da) > LIMIT:
        raise TooLarge("group too large to enumerate")
    table = {}
    for x in _residues(da):
        y = to_b(f(back_a(x))).coords
        table[x] = tuple(c % m for c, m in zip(y, db))
    return table


def exact_by_counting(f: Morphism, g: Morphism) -> bool:
    """Exactness of ``A -f-> B -g-> C`` at ``B``, from explicit element tables."""
    if f.dst != g.src:
        raise ValueError("morphisms are not composable")
    image = set(_apply_all(f).values())
    tg = _apply_all(g)
    zero_c = tuple(0 for _ in simplify(g.dst)[0].torsion)
    kernel = {x for x, y in tg.items() if y == zero_c}
    return image == kernel


def groups_of_order(n: int) -> list[FpGroup]:
    """One group per isomorphism type of order ``n``, as invariant factor chains."""
    from .fpab import abelian

    out = []

    def chains(m: int, last: int, acc: list[int]) -> None:
        # invariant factors d1 | d2 | ... with product m, built from the largest down
        if m == 1:
            out.append(abelian(list(reversed(acc))))
            return
        for d in range(2, m + 1):
            if m % d == 0 and (last == 0 or last % d == 0):
                chains(m // d, d, acc + [d])

    chains(n, 0, [])
    return out


def groups_up_to(n: int) -> list[FpGroup]:
    return [g for k in range(1, n + 1) for g in groups_of_order(k)]
