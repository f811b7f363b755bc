"""Finitely presented abelian groups and their homomorphisms.

Conventions used everywhere in the package:

* a group on ``n`` generators is ``Z^n / colspan(rels)``; relators are the
  COLUMNS of ``rels``;
* a morphism ``A -> B`` is a ``B.ngens x A.ngens`` matrix acting on
  coordinate columns from the left;
* morphisms are cosets, so they are stored by a canonical representative
  (every column reduced modulo the relation lattice of the target).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Optional, Sequence

from .zlinalg import (
    IntMatrix,
    block_diag,
    diagonal,
    hnf,
    hstack,
    kernel_basis,
    kron,
    reduce_mod_hnf,
    snf,
    solve,
    unimodular_inverse,
    unvec,
    vec,
)


class IncompatibleWithRelations(ValueError):
    """The matrix does not send relators of the source into the relation lattice of the target."""


class NotMono(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


@dataclass(frozen=True)
class FpGroup:
    ngens: int
    rels: IntMatrix

    def __post_init__(self):
        if self.rels.rows != self.ngens:
            raise ValueError(f"relation matrix has {self.rels.rows} rows for {self.ngens} generators")

    @cached_property
    def _lattice_hnf(self) -> IntMatrix:
        return hnf(self.rels.T)[0]

    @cached_property
    def _invariants(self) -> tuple[int, tuple[int, ...]]:
        d = [x for x in diagonal(snf(self.rels)[0]) if x]
        free = self.ngens - len(d)
        return free, tuple(x for x in d if x != 1)

    def invariants(self) -> tuple[int, list[int]]:
        r, fac = self._invariants
        return r, list(fac)

    @property
    def rank(self) -> int:
        return self._invariants[0]

    @property
    def torsion(self) -> list[int]:
        return list(self._invariants[1])

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self._invariants[1]

    def is_finite(self) -> bool:
        return self.rank == 0

    def is_free(self) -> bool:
        return not self._invariants[1]

    def order(self) -> Optional[int]:
        """Cardinality, or ``None`` for infinite groups."""
        if self.rank:
            return None
        out = 1
        for d in self._invariants[1]:
            out *= d
        return out

    def isomorphic(self, other: "FpGroup") -> bool:
        return self._invariants == other._invariants

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return reduce_mod_hnf(self._lattice_hnf, coords)

    def contains_relation(self, coords: Sequence[int]) -> bool:
        return not any(self.reduce(coords))

    def element(self, coords: Sequence[int]) -> "Element":
        return Element(self, self.reduce(coords))

    def zero(self) -> "Element":
        return Element(self, (0,) * self.ngens)

    def gens(self) -> list["Element"]:
        return [self.element([1 if i == j else 0 for i in range(self.ngens)]) for j in range(self.ngens)]

    def describe(self) -> str:
        r, fac = self.invariants()
        parts = [f"Z/{d}" for d in fac] + ["Z"] * r
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FpGroup({self.ngens}, {self.describe()})"

    @cached_property
    def _smith(self) -> "Smith":
        return _smith_presentation(self)


def make_group(rels: Sequence[Sequence[int]] | IntMatrix, ngens: Optional[int] = None) -> FpGroup:
    """Group on ``ngens`` generators with the given relator columns.

    ``rels`` may be an ``IntMatrix`` (relators as columns) or a list of
    relators, each given as a coordinate vector.
    """
    if isinstance(rels, IntMatrix):
        return FpGroup(rels.rows, rels)
    rels = [list(r) for r in rels]
    if ngens is None:
        if not rels:
            raise ValueError("ngens is required when there are no relators")
        ngens = len(rels[0])
    return FpGroup(ngens, IntMatrix.from_columns(rels, ngens))


def free_group(n: int) -> FpGroup:
    return FpGroup(n, IntMatrix.zeros(n, 0))


def cyclic(n: int) -> FpGroup:
    """Z/n, with ``cyclic(0)`` meaning Z."""
    if n == 0:
        return free_group(1)
    return FpGroup(1, IntMatrix(1, 1, [n]))


def abelian(torsion: Sequence[int] = (), rank: int = 0) -> FpGroup:
    """Z/d1 + ... + Z/dk + Z^rank in Smith-style presentation."""
    torsion = [d for d in torsion if d != 1]
    n = len(torsion) + rank
    return FpGroup(n, IntMatrix.diag(torsion, n, len(torsion)))


ZERO = free_group(0)
Z = free_group(1)


def invariants(g: FpGroup) -> tuple[int, list[int]]:
    return g.invariants()


@dataclass(frozen=True)
class Element:
    parent: FpGroup
    coords: tuple[int, ...]

    def _other(self, other: "Element") -> "Element":
        if not isinstance(other, Element) or other.parent != self.parent:
            raise ValueError("elements belong to different groups")
        return other

    def __add__(self, other: "Element") -> "Element":
        other = self._other(other)
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "Element") -> "Element":
        other = self._other(other)
        return self.parent.element([a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "Element":
        return self.parent.element([-a for a in self.coords])

    def __rmul__(self, k: int) -> "Element":
        return self.parent.element([k * a for a in self.coords])

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True, eq=False)
class Morphism:
    src: FpGroup
    dst: FpGroup
    mat: IntMatrix

    def __post_init__(self):
        if self.mat.shape != (self.dst.ngens, self.src.ngens):
            raise ValueError(
                f"matrix shape {self.mat.shape} does not fit {self.src.ngens} -> {self.dst.ngens} generators"
            )
        image_of_rels = self.mat @ self.src.rels
        for j in range(image_of_rels.cols):
            if not self.dst.contains_relation(image_of_rels.col(j)):
                raise IncompatibleWithRelations(
                    f"relator {j} of the source is not killed in the target"
                )
        canon = IntMatrix.from_columns(
            [self.dst.reduce(self.mat.col(j)) for j in range(self.mat.cols)], self.dst.ngens
        )
        object.__setattr__(self, "mat", canon)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.src == other.src and self.dst == other.dst and self.mat == other.mat

    def __hash__(self) -> int:
        return hash((self.src, self.dst, self.mat))

    def __repr__(self) -> str:
        return f"Morphism({self.src.describe()} -> {self.dst.describe()}, {self.mat.tolist()})"

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition: ``(g @ f)(x) = g(f(x))``."""
        if other.dst != self.src:
            raise ValueError("morphisms are not composable")
        return Morphism(other.src, self.dst, self.mat @ other.mat)

    def __add__(self, other: "Morphism") -> "Morphism":
        self._same_type(other)
        return Morphism(self.src, self.dst, self.mat + other.mat)

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._same_type(other)
        return Morphism(self.src, self.dst, self.mat - other.mat)

    def __neg__(self) -> "Morphism":
        return Morphism(self.src, self.dst, -self.mat)

    def __rmul__(self, k: int) -> "Morphism":
        return Morphism(self.src, self.dst, self.mat.scale(k))

    def _same_type(self, other: "Morphism") -> None:
        if self.src != other.src or self.dst != other.dst:
            raise ValueError("morphisms have different source or target")

    def __call__(self, x: Element | Sequence[int]) -> Element:
        coords = x.coords if isinstance(x, Element) else tuple(x)
        return self.dst.element(self.mat.apply(coords))

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def is_mono(self) -> bool:
        return kernel(self)[0].is_trivial()

    def is_epi(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def preimage(self, y: Element | Sequence[int]) -> Optional[Element]:
        """Some ``x`` with ``self(x) == y``, or ``None``."""
        coords = y.coords if isinstance(y, Element) else tuple(y)
        system = hstack(self.mat, self.dst.rels)
        sol = solve(system, coords)
        if sol is None:
            return None
        return self.src.element(sol[: self.src.ngens])


def make_morphism(src: FpGroup, dst: FpGroup, mat: Sequence[Sequence[int]] | IntMatrix) -> Morphism:
    if not isinstance(mat, IntMatrix):
        mat = IntMatrix.from_rows(mat, src.ngens)
    return Morphism(src, dst, mat)


def identity(g: FpGroup) -> Morphism:
    return Morphism(g, g, IntMatrix.identity(g.ngens))


def zero_morphism(a: FpGroup, b: FpGroup) -> Morphism:
    return Morphism(a, b, IntMatrix.zeros(b.ngens, a.ngens))


# --------------------------------------------------------------------------
# Smith-form presentations


@dataclass(frozen=True)
class Smith:
    """A group rewritten as Z/d1 + ... + Z/dk + Z^r, with the two isomorphisms."""

    group: FpGroup
    to: Morphism
    back: Morphism


def _smith_presentation(g: FpGroup) -> Smith:
    d, u, _ = snf(g.rels)
    diag = diagonal(d)
    keep = [i for i in range(g.ngens) if i >= len(diag) or diag[i] != 1]
    torsion = [diag[i] for i in keep if i < len(diag) and diag[i] != 0]
    rank = len(keep) - len(torsion)
    target = abelian(torsion, rank)
    if target == g:
        return Smith(g, identity(g), identity(g))
    uinv = unimodular_inverse(u)
    to = Morphism(g, target, u.take_rows(keep))
    back = Morphism(target, g, uinv.take_columns(keep))
    return Smith(target, to, back)


def simplify(g: FpGroup) -> tuple[FpGroup, Morphism, Morphism]:
    """Smith-form presentation ``S`` of ``g`` with isomorphisms ``g -> S`` and ``S -> g``."""
    s = g._smith
    return s.group, s.to, s.back


def is_smith_form(g: FpGroup) -> bool:
    return simplify(g)[0] == g


# --------------------------------------------------------------------------
# sums


def direct_sum(*groups: FpGroup) -> tuple[FpGroup, list[Morphism], list[Morphism]]:
    """``(S, injections, projections)`` for the external direct sum."""
    total = FpGroup(sum(g.ngens for g in groups), block_diag(*[g.rels for g in groups])) if groups else ZERO
    injections, projections = [], []
    offset = 0
    for g in groups:
        rows = range(offset, offset + g.ngens)
        emb = IntMatrix.identity(total.ngens).take_columns(list(rows))
        injections.append(Morphism(g, total, emb))
        projections.append(Morphism(total, g, emb.T))
        offset += g.ngens
    return total, injections, projections


def morphism_sum(*maps: Morphism) -> Morphism:
    """``(f1, f2, ...)`` : A1 + A2 + ... -> B  (maps with a common target)."""
    dst = maps[0].dst
    src, _, _ = direct_sum(*[m.src for m in maps])
    return Morphism(src, dst, hstack(*[m.mat for m in maps]))


def morphism_pair(*maps: Morphism) -> Morphism:
    """``(f1, f2, ...)^t`` : A -> B1 + B2 + ...  (maps with a common source)."""
    src = maps[0].src
    dst, _, _ = direct_sum(*[m.dst for m in maps])
    rows = [r for m in maps for r in m.mat.tolist()]
    return Morphism(src, dst, IntMatrix.from_rows(rows, src.ngens))


def direct_sum_map(*maps: Morphism) -> Morphism:
    src, _, _ = direct_sum(*[m.src for m in maps])
    dst, _, _ = direct_sum(*[m.dst for m in maps])
    return Morphism(src, dst, block_diag(*[m.mat for m in maps]))


# --------------------------------------------------------------------------
# kernels, images, cokernels


def _preimage_lattice(mat: IntMatrix, target_rels: IntMatrix) -> IntMatrix:
    """Generators (columns) of ``{x : mat x in colspan(target_rels)}``."""
    k = kernel_basis(hstack(mat, target_rels))
    return k.take_rows(range(mat.cols))


def _simplified_inclusion(h: FpGroup, incl: Morphism) -> tuple[FpGroup, Morphism]:
    s, _, back = simplify(h)
    return s, incl @ back


def subgroup_generated(g: FpGroup, elements: Iterable[Element | Sequence[int]] | IntMatrix) -> tuple[FpGroup, Morphism]:
    """Subgroup spanned by the given elements, with its inclusion."""
    if isinstance(elements, IntMatrix):
        gens = elements
    else:
        cols = [e.coords if isinstance(e, Element) else tuple(e) for e in elements]
        gens = IntMatrix.from_columns(cols, g.ngens)
    rels = _preimage_lattice(gens, g.rels)
    h = FpGroup(gens.cols, rels)
    return _simplified_inclusion(h, Morphism(h, g, gens))


def kernel(f: Morphism) -> tuple[FpGroup, Morphism]:
    gens = _preimage_lattice(f.mat, f.dst.rels)
    return subgroup_generated(f.src, gens)


def image(f: Morphism) -> tuple[FpGroup, Morphism]:
    return subgroup_generated(f.dst, f.mat)


def cokernel(f: Morphism) -> tuple[FpGroup, Morphism]:
    c = FpGroup(f.dst.ngens, hstack(f.dst.rels, f.mat))
    proj = Morphism(f.dst, c, IntMatrix.identity(f.dst.ngens))
    s, to, _ = simplify(c)
    return s, to @ proj


def quotient_by(g: FpGroup, incl: Morphism) -> tuple[FpGroup, Morphism]:
    if incl.dst != g:
        raise ValueError("inclusion does not land in the group")
    if not incl.is_mono():
        raise NotMono("quotient_by needs a monomorphism")
    return cokernel(incl)


def pushout(f: Morphism, g: Morphism) -> tuple[FpGroup, Morphism, Morphism]:
    """Pushout of ``B <-f- A -g-> C``: returns ``(X, rho: B -> X, nu: C -> X)``."""
    if f.src != g.src:
        raise ValueError("pushout needs a common source")
    s, inj, _ = direct_sum(f.dst, g.dst)
    diff = Morphism(f.src, s, IntMatrix.from_rows(f.mat.tolist() + (-g.mat).tolist(), f.src.ngens))
    x, proj = cokernel(diff)
    return x, proj @ inj[0], proj @ inj[1]


def contained_in(sub: Morphism, sup: Morphism) -> bool:
    """Whether image(sub) is contained in image(sup) (both into the same group)."""
    if sub.dst != sup.dst:
        raise ValueError("subgroups of different groups")
    system = hstack(sup.mat, sup.dst.rels)
    return all(solve(system, sub.mat.col(j)) is not None for j in range(sub.mat.cols))


def is_exact(f: Morphism, g: Morphism) -> bool:
    """Exactness of ``A -f-> B -g-> C`` at ``B``."""
    if f.dst != g.src:
        raise ValueError("morphisms are not composable")
    if not (g @ f).is_zero():
        return False
    _, k = kernel(g)
    return contained_in(k, f)


def is_short_exact(i: Morphism, q: Morphism) -> bool:
    return i.is_mono() and is_exact(i, q) and q.is_epi()


# --------------------------------------------------------------------------
# linear equations in unknown morphisms


@dataclass(frozen=True)
class Term:
    """``left @ X[index] @ right``; ``None`` stands for an identity."""

    index: int
    left: Optional[Morphism] = None
    right: Optional[Morphism] = None


def solve_morphisms(unknowns: Sequence[tuple[FpGroup, FpGroup]],
                    equations: Sequence[tuple[Sequence[Term], Morphism]]) -> Optional[list[Morphism]]:
    """Find morphisms ``X_k : S_k -> T_k`` satisfying every ``sum(terms) == rhs``.

    The whole problem becomes one integer linear system: the entries of each
    ``X_k``, plus auxiliary matrices witnessing that ``X_k`` respects
    relations and that each equation holds modulo the target's relations.
    Returns ``None`` exactly when that system has no integer solution.
    """
    offset = 0
    x_off = []
    for s, t in unknowns:
        x_off.append(offset)
        offset += t.ngens * s.ngens
    q_off = []
    for s, t in unknowns:
        q_off.append(offset)
        offset += t.rels.cols * s.rels.cols
    e_off = []
    for _, rhs in equations:
        e_off.append(offset)
        offset += rhs.dst.rels.cols * rhs.src.ngens
    nvars = offset

    row_blocks: list[list[int]] = []
    rhs_vec: list[int] = []

    def add_rows(nrows: int, parts: list[tuple[int, IntMatrix]], rhs: Sequence[int]) -> None:
        rows = [[0] * nvars for _ in range(nrows)]
        for off, m in parts:
            for i in range(m.rows):
                r = rows[i]
                for j, x in enumerate(m.row(i)):
                    if x:
                        r[off + j] += x
        row_blocks.extend(rows)
        rhs_vec.extend(rhs)

    # each X respects relations: X R_S - R_T Q = 0
    for k, (s, t) in enumerate(unknowns):
        if s.rels.cols == 0:
            continue
        n = t.ngens * s.rels.cols
        add_rows(n, [(x_off[k], kron(s.rels.T, IntMatrix.identity(t.ngens))),
                     (q_off[k], -kron(IntMatrix.identity(s.rels.cols), t.rels))], [0] * n)

    for e, (terms, rhs) in enumerate(equations):
        w, v = rhs.dst, rhs.src
        parts = []
        for term in terms:
            s, t = unknowns[term.index]
            left = term.left.mat if term.left is not None else IntMatrix.identity(t.ngens)
            right = term.right.mat if term.right is not None else IntMatrix.identity(s.ngens)
            if left.rows != w.ngens or right.cols != v.ngens:
                raise ValueError("equation term does not match right-hand side shape")
            parts.append((x_off[term.index], kron(right.T, left)))
        parts.append((e_off[e], -kron(IntMatrix.identity(v.ngens), w.rels)))
        add_rows(w.ngens * v.ngens, parts, vec(rhs.mat))

    if not row_blocks:
        sol = (0,) * nvars
    else:
        sol = solve(IntMatrix(len(row_blocks), nvars, [x for r in row_blocks for x in r]), rhs_vec)
        if sol is None:
            return None
    out = []
    for k, (s, t) in enumerate(unknowns):
        chunk = sol[x_off[k]:x_off[k] + t.ngens * s.ngens]
        out.append(Morphism(s, t, unvec(chunk, t.ngens, s.ngens)))
    return out


def left_inverse(f: Morphism) -> Optional[Morphism]:
    """Some ``g`` with ``g @ f == id``, or ``None`` if ``f`` is not a split mono."""
    sol = solve_morphisms([(f.dst, f.src)], [([Term(0, right=f)], identity(f.src))])
    return None if sol is None else sol[0]


def right_inverse(f: Morphism) -> Optional[Morphism]:
    """Some section ``s`` with ``f @ s == id``, or ``None`` if ``f`` is not a split epi."""
    sol = solve_morphisms([(f.dst, f.src)], [([Term(0, left=f)], identity(f.dst))])
    return None if sol is None else sol[0]


def factor_through(target: Morphism, via: Morphism) -> Optional[Morphism]:
    """Some ``h`` with ``via @ h == target`` (lift along ``via``)."""
    if target.dst != via.dst:
        raise ValueError("maps must share a target")
    sol = solve_morphisms([(target.src, via.src)], [([Term(0, left=via)], target)])
    return None if sol is None else sol[0]


def extend_along(target: Morphism, along: Morphism) -> Optional[Morphism]:
    """Some ``h`` with ``h @ along == target`` (factor through ``along`` on the right)."""
    if target.src != along.src:
        raise ValueError("maps must share a source")
    sol = solve_morphisms([(along.dst, target.dst)], [([Term(0, right=along)], target)])
    return None if sol is None else sol[0]


# --------------------------------------------------------------------------
# divisible parts


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def divisible_part(g: FpGroup, c: int) -> tuple[FpGroup, Morphism]:
    """Largest subgroup ``D`` with ``c D = D``; for finitely generated ``g``
    this is the torsion prime to ``c``."""
    if c < 2:
        raise ValueError("divisor must be at least 2")
    s, _, back = simplify(g)
    primes = prime_factors(c)
    gens = []
    for i, d in enumerate(s.torsion):
        part = d
        for p in primes:
            while part % p == 0:
                part //= p
        e = [0] * s.ngens
        e[i] = d // part
        gens.append(back(e).coords)
    return subgroup_generated(g, IntMatrix.from_columns(gens, g.ngens))


def p_divisible_part(g: FpGroup, p: int) -> tuple[FpGroup, Morphism]:
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    return divisible_part(g, p)


# --------------------------------------------------------------------------
# enumeration helpers (finite groups only)


def elements_of(g: FpGroup) -> list[Element]:
    """All elements of a finite group via its Smith presentation."""
    if not g.is_finite():
        raise ValueError("group is infinite")
    s, _, back = simplify(g)
    return [back(c) for c in product(*[range(d) for d in s.torsion])]
