"""Hom and Ext^1 of finitely presented abelian groups as finitely presented groups.

``Hom(A, B)`` is built from presentations ``A = Z^a / R_A`` and
``B = Z^b / R_B``: a ``b x a`` matrix ``M`` defines a homomorphism exactly when
``M R_A = R_B Q`` for some integer ``Q``.  The solution set of that linear
system, projected to ``M``, is a lattice; two solutions give the same
homomorphism when their difference has every column in ``colspan(R_B)``.
The carrier is the quotient of the solution lattice by those matrices,
computed on Smith-form presentations of ``A`` and ``B`` to keep it small.
Elements of the carrier decode to ``Morphism`` objects and back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .fpab import (
    Element,
    FpGroup,
    Morphism,
    cokernel,
    factor_through,
    free_group,
    identity,
    is_exact,
    pushout,
    simplify,
    solve_morphisms,
    Term,
)
from .zlinalg import IntMatrix, kernel_basis, kron, lattice_basis, solve, unvec, vec


@dataclass(frozen=True, eq=False)
class HomGroup:
    src: FpGroup
    dst: FpGroup
    carrier: FpGroup
    # internal: Smith forms of src/dst and the lattice basis of valid matrices
    _src_s: tuple
    _dst_s: tuple
    _basis: IntMatrix
    _raw_to_carrier: Morphism
    _carrier_to_raw: Morphism

    def encode(self, f: Morphism) -> Element:
        if f.src != self.src or f.dst != self.dst:
            raise ValueError("morphism does not belong to this Hom group")
        s_src, _, back_src = self._src_s
        s_dst, to_dst, _ = self._dst_s
        m = (to_dst @ f @ back_src).mat
        z = solve(self._basis, vec(m))
        if z is None:  # pragma: no cover - every valid morphism lies in the lattice
            raise AssertionError("morphism matrix outside the solution lattice")
        return self._raw_to_carrier(z)

    def decode(self, x: Element | Sequence[int]) -> Morphism:
        coords = x.coords if isinstance(x, Element) else tuple(x)
        z = self._carrier_to_raw.mat.apply(coords)
        s_src, to_src, _ = self._src_s
        s_dst, _, back_dst = self._dst_s
        m = unvec(self._basis.apply(z), s_dst.ngens, s_src.ngens)
        return back_dst @ Morphism(s_src, s_dst, m) @ to_src

    def generators(self) -> list[Morphism]:
        return [self.decode(g) for g in self.carrier.gens()]

    def elements(self) -> list[Morphism]:
        from .fpab import elements_of

        return [self.decode(e) for e in elements_of(self.carrier)]


@lru_cache(maxsize=8192)
def hom_group(a: FpGroup, b: FpGroup) -> HomGroup:
    if not isinstance(a, FpGroup) or not isinstance(b, FpGroup):
        raise TypeError("hom_group needs finitely presented groups; use the tower module for ind-objects")
    sa = simplify(a)
    sb = simplify(b)
    A, B = sa[0], sb[0]
    na, nb = A.ngens, B.ngens
    ra, rb = A.rels.cols, B.rels.cols
    nm = na * nb
    if ra:
        # M R_A - R_B Q = 0 in vec form over unknowns (vec M, vec Q)
        system = kron(A.rels.T, IntMatrix.identity(nb)).hstack(-kron(IntMatrix.identity(ra), B.rels))
        sols = kernel_basis(system).take_rows(range(nm))
    else:
        sols = IntMatrix.identity(nm)
    basis = lattice_basis(sols) if sols.cols else IntMatrix.zeros(nm, 0)
    t = basis.cols
    # matrices whose columns lie in colspan(R_B) represent the zero map
    null_gens = kron(IntMatrix.identity(na), B.rels)
    rel_cols = []
    for j in range(null_gens.cols):
        z = solve(basis, null_gens.col(j))
        if z is None:  # pragma: no cover
            raise AssertionError("null matrix outside the solution lattice")
        rel_cols.append(z)
    raw = FpGroup(t, IntMatrix.from_columns(rel_cols, t))
    carrier, to_c, back_c = simplify(raw)
    return HomGroup(a, b, carrier, sa, sb, basis, to_c, back_c)


def _carrier_map(src: FpGroup, dst: FpGroup, images: list[Element]) -> Morphism:
    return Morphism(src, dst, IntMatrix.from_columns([e.coords for e in images], dst.ngens))


def induced_pre(f: Morphism, b: FpGroup) -> Morphism:
    """``Hom(f, B)`` : Hom(A, B) -> Hom(A', B), ``phi -> phi @ f`` for ``f : A' -> A``."""
    h = hom_group(f.dst, b)
    h2 = hom_group(f.src, b)
    return _carrier_map(h.carrier, h2.carrier, [h2.encode(phi @ f) for phi in h.generators()])


def induced_post(g: Morphism, a: FpGroup) -> Morphism:
    """``Hom(A, g)`` : Hom(A, B) -> Hom(A, B'), ``phi -> g @ phi`` for ``g : B -> B'``."""
    h = hom_group(a, g.src)
    h2 = hom_group(a, g.dst)
    return _carrier_map(h.carrier, h2.carrier, [h2.encode(g @ phi) for phi in h.generators()])


# --------------------------------------------------------------------------
# Ext^1


@dataclass(frozen=True, eq=False)
class ExtGroup:
    """Ext^1(A, B) from the free presentation ``0 -> Z^k -kappa-> Z^a -> A -> 0``."""

    src: FpGroup
    dst: FpGroup
    carrier: FpGroup
    kappa: Morphism  # Z^k -> Z^a, columns a basis of the relation lattice of A
    presentation: Morphism  # Z^a -> A
    projection: Morphism  # Hom(Z^k, B).carrier -> carrier

    @property
    def cocycles(self) -> HomGroup:
        return hom_group(self.kappa.src, self.dst)

    def encode_cocycle(self, phi: Morphism) -> Element:
        """Class of a map ``phi : Z^k -> B``."""
        return self.projection(self.cocycles.encode(phi))

    def cocycle(self, x: Element | Sequence[int]) -> Morphism:
        """A representative cocycle ``Z^k -> B`` for a carrier element."""
        lift = self.projection.preimage(x)
        assert lift is not None
        return self.cocycles.decode(lift)


@lru_cache(maxsize=4096)
def ext1(a: FpGroup, b: FpGroup) -> ExtGroup:
    if not isinstance(a, FpGroup) or not isinstance(b, FpGroup):
        raise TypeError("ext1 needs finitely presented groups")
    k = lattice_basis(a.rels) if a.rels.cols else IntMatrix.zeros(a.ngens, 0)
    F = free_group(a.ngens)
    K = free_group(k.cols)
    kappa = Morphism(K, F, k)
    restriction = induced_pre(kappa, b)
    carrier, proj = cokernel(restriction)
    return ExtGroup(a, b, carrier, kappa, Morphism(F, a, IntMatrix.identity(a.ngens)), proj)


def ext_map(g: Morphism, a: FpGroup) -> Morphism:
    """``Ext^1(A, g)`` for ``g : B -> B'``."""
    e = ext1(a, g.src)
    e2 = ext1(a, g.dst)
    images = [e2.encode_cocycle(g @ e.cocycle(x)) for x in e.carrier.gens()]
    return _carrier_map(e.carrier, e2.carrier, images)


@dataclass(frozen=True)
class Extension:
    """A short exact sequence ``0 -> B -nu-> E -pi-> A -> 0``."""

    nu: Morphism
    pi: Morphism

    @property
    def middle(self) -> FpGroup:
        return self.nu.dst


def ext_class_to_extension(e: ExtGroup, x: Element | Sequence[int]) -> Extension:
    """Realize a class by pushing the presentation out along a representative cocycle."""
    phi = e.cocycle(x)
    E, rho, nu = pushout(e.kappa, phi)
    # E -> A is induced by (presentation on Z^a, 0 on B)
    pi = _induced_from_pushout(E, rho, nu, e.presentation, Morphism(e.dst, e.src, IntMatrix.zeros(e.src.ngens, e.dst.ngens)))
    return Extension(nu, pi)


def _induced_from_pushout(E: FpGroup, rho: Morphism, nu: Morphism, on_rho: Morphism, on_nu: Morphism) -> Morphism:
    sol = solve_morphisms(
        [(E, on_rho.dst)],
        [([Term(0, right=rho)], on_rho), ([Term(0, right=nu)], on_nu)],
    )
    if sol is None:  # pragma: no cover - universal property of the pushout
        raise AssertionError("maps do not agree on the pushout")
    return sol[0]


def extension_class(e: ExtGroup, ext: Extension) -> Element:
    """Class in ``e.carrier`` of an extension of ``e.src`` by ``e.dst``."""
    if ext.nu.src != e.dst or ext.pi.dst != e.src:
        raise ValueError("extension does not match the Ext group")
    # lift the presentation Z^a -> A through pi, restrict to Z^k, pull back along nu
    sigma = factor_through(e.presentation, ext.pi)
    if sigma is None:
        raise ValueError("pi is not an epimorphism")
    psi = factor_through(sigma @ e.kappa, ext.nu)
    if psi is None:
        raise ValueError("sequence is not exact")
    return e.encode_cocycle(psi)


# --------------------------------------------------------------------------
# long exact sequences


def connecting_map(beta: Morphism, alpha: Morphism, i: Morphism, q: Morphism,
                   target_carrier: FpGroup, encode) -> Morphism:
    """Connecting map ``Hom(M, Z) -> D(X)`` of the snake lemma.

    ``L -beta-> P -alpha-> M -> 0`` is a presentation with ``P`` free and
    ``0 -> X -i-> Y -q-> Z -> 0`` is short exact.  For ``phi : M -> Z`` lift
    ``phi @ alpha`` through ``q`` to ``psi : P -> Y``; then ``psi @ beta``
    factors as ``i @ chi`` and the image is the class ``encode(chi)``.
    Sign convention: no sign is introduced.
    """
    hmz = hom_group(alpha.dst, q.dst)
    images = []
    for phi in hmz.generators():
        psi = factor_through(phi @ alpha, q)
        if psi is None:
            raise ValueError("cannot lift through q; is the source of alpha free and q epi?")
        chi = factor_through(psi @ beta, i)
        if chi is None:
            raise ValueError("lift does not restrict into X; is the sequence exact?")
        images.append(encode(chi))
    return _carrier_map(hmz.carrier, target_carrier, images)


@dataclass(frozen=True)
class LongSequence:
    objects: list
    maps: list
    exact_at: list  # one bool per checked interior node

    @property
    def verdict(self) -> bool:
        return all(self.exact_at)


def six_term_sequence(a: FpGroup, i: Morphism, q: Morphism) -> LongSequence:
    """``Hom(A,X) -> Hom(A,Y) -> Hom(A,Z) -> Ext(A,X) -> Ext(A,Y) -> Ext(A,Z)``,
    with exactness checked at the four interior nodes plus injectivity on the left."""
    x, y, z = i.src, i.dst, q.dst
    h_i = induced_post(i, a)
    h_q = induced_post(q, a)
    ex = ext1(a, x)
    delta = connecting_map(ex.kappa, ex.presentation, i, q, ex.carrier, ex.encode_cocycle)
    e_i = ext_map(i, a)
    e_q = ext_map(q, a)
    maps = [h_i, h_q, delta, e_i, e_q]
    exact = [h_i.is_mono()] + [is_exact(f, g) for f, g in zip(maps, maps[1:])]
    objects = [h_i.src, h_i.dst, h_q.dst, ex.carrier, e_i.dst, e_q.dst]
    return LongSequence(objects, maps, exact)
