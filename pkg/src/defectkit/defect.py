"""The defect functor ``Dev_beta(X) = Hom(L, X) / Im Hom(beta, X)`` of ``beta : L -> P``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .fpab import (
    Element,
    FpGroup,
    Morphism,
    PreconditionFailed,
    cokernel,
    extend_along,
    free_group,
    identity,
    is_exact,
    is_short_exact,
    kernel,
)
from .homext import (
    LongSequence,
    _carrier_map,
    connecting_map,
    ext1,
    ext_map,
    hom_group,
    induced_post,
    induced_pre,
)
from .zlinalg import IntMatrix, lattice_basis, solve_matrix


@dataclass(frozen=True, eq=False)
class DefectValue:
    beta: Morphism
    at: FpGroup
    carrier: FpGroup
    projection: Morphism  # hom_group(L, X).carrier -> carrier
    restriction: Morphism  # induced_pre(beta, X)

    @property
    def hom(self):
        return hom_group(self.beta.src, self.at)

    def encode(self, f: Morphism) -> Element:
        """Class of ``f : L -> X``."""
        return self.projection(self.hom.encode(f))

    def decode(self, x: Element | Sequence[int]) -> Morphism:
        """Coset representative ``L -> X`` of a carrier element."""
        lift = self.projection.preimage(x)
        assert lift is not None
        return self.hom.decode(lift)

    def invariants(self):
        return self.carrier.invariants()


@lru_cache(maxsize=8192)
def dev(beta: Morphism, x: FpGroup) -> DefectValue:
    restriction = induced_pre(beta, x)
    hom_l = restriction.dst
    if hom_l.is_trivial():
        # zero source: Dev = Hom(L, X) = 0
        return DefectValue(beta, x, hom_l, identity(hom_l), restriction)
    if beta.dst.is_trivial():
        # P = 0: Dev_beta is Hom(L, -) itself
        return DefectValue(beta, x, hom_l, identity(hom_l), restriction)
    carrier, proj = cokernel(restriction)
    return DefectValue(beta, x, carrier, proj, restriction)


def dev_map(beta: Morphism, f: Morphism) -> Morphism:
    """``Dev_beta(f)`` : coset of ``alpha`` goes to the coset of ``f @ alpha``."""
    dx = dev(beta, f.src)
    dy = dev(beta, f.dst)
    return _carrier_map(dx.carrier, dy.carrier, [dy.encode(f @ dx.decode(g)) for g in dx.carrier.gens()])


# --------------------------------------------------------------------------
# comparison with Ext^1 and Hom


@dataclass(frozen=True)
class DevExtComparison:
    agree: bool
    witness: Morphism  # Dev_beta(X).carrier -> Ext^1(coker beta, X).carrier
    dev_invariants: tuple
    ext_invariants: tuple
    naturality: Optional[bool] = None


def _ext_witness(beta: Morphism, x: FpGroup) -> Morphism:
    """Iso ``Dev_beta(X) -> Ext^1(P / beta L, X)`` for ``beta`` mono into free ``P``.

    The Ext group uses the presentation ``Z^k -kappa-> P`` whose columns are a
    basis of ``beta(L)``; ``theta : Z^k -> L`` with ``beta @ theta == kappa``
    is an isomorphism and precomposition with it identifies the two cokernels.
    """
    m, _ = cokernel(beta)
    e = ext1(_coker_presented(beta), x)
    theta_mat = solve_matrix(beta.mat, e.kappa.mat)
    if theta_mat is None:
        raise AssertionError("presentation basis outside the image of beta")
    theta = Morphism(e.kappa.src, beta.src, theta_mat)
    d = dev(beta, x)
    images = [e.encode_cocycle(d.decode(g) @ theta) for g in d.carrier.gens()]
    return _carrier_map(d.carrier, e.carrier, images)


def _coker_presented(beta: Morphism) -> FpGroup:
    """``P / beta(L)`` presented on the generators of free ``P``."""
    return FpGroup(beta.dst.ngens, beta.mat)


def _check_mono_into_free(beta: Morphism) -> None:
    if beta.dst.rels.cols or not beta.dst.is_free():
        raise PreconditionFailed("target of beta must be free (presented without relators)")
    if not beta.is_mono():
        raise PreconditionFailed("beta must be a monomorphism")


def dev_vs_ext_check(beta: Morphism, x: FpGroup, f: Optional[Morphism] = None) -> DevExtComparison:
    """Compare ``Dev_beta(X)`` with ``Ext^1(P / beta L, X)``; optionally check naturality along ``f : X -> Y``."""
    _check_mono_into_free(beta)
    w = _ext_witness(beta, x)
    m = _coker_presented(beta)
    d_inv = dev(beta, x).carrier.invariants()
    e_inv = ext1(m, x).carrier.invariants()
    agree = d_inv == e_inv and w.is_iso()
    nat = None
    if f is not None:
        if f.src != x:
            raise ValueError("naturality map must start at X")
        wy = _ext_witness(beta, f.dst)
        nat = (wy @ dev_map(beta, f)) == (ext_map(f, m) @ w)
    return DevExtComparison(agree, w, (d_inv[0], tuple(d_inv[1])), (e_inv[0], tuple(e_inv[1])), nat)


# --------------------------------------------------------------------------
# the restriction sequence 0 -> Dev_{beta bar} -> Dev_beta -> Dev_{pi_K} -> 0


@dataclass(frozen=True)
class RestrictionSequence:
    beta_bar: Morphism  # L/K -> P
    pi_k: Morphism  # L -> L/K
    left: DefectValue
    middle: DefectValue
    right: DefectValue
    first: Morphism
    second: Morphism
    mono: bool
    middle_exact: bool
    epi: bool

    @property
    def verdict(self) -> bool:
        return self.mono and self.middle_exact and self.epi


def factor_beta(beta: Morphism) -> tuple[Morphism, Morphism, Morphism]:
    """``(i_K, pi_K, beta_bar)`` with ``beta == beta_bar @ pi_K``."""
    _, i_k = kernel(beta)
    _, pi_k = cokernel(i_k)
    beta_bar = extend_along(beta, pi_k)
    assert beta_bar is not None
    return i_k, pi_k, beta_bar


def restriction_sequence(beta: Morphism, x: FpGroup) -> RestrictionSequence:
    _, pi_k, beta_bar = factor_beta(beta)
    left = dev(beta_bar, x)
    middle = dev(beta, x)
    right = dev(pi_k, x)
    first = _carrier_map(left.carrier, middle.carrier,
                         [middle.encode(left.decode(g) @ pi_k) for g in left.carrier.gens()])
    second = _carrier_map(middle.carrier, right.carrier,
                          [right.encode(middle.decode(g)) for g in middle.carrier.gens()])
    return RestrictionSequence(beta_bar, pi_k, left, middle, right, first, second,
                               first.is_mono(), is_exact(first, second), second.is_epi())


# --------------------------------------------------------------------------
# half exactness


def half_exact_sequence(beta: Morphism, i: Morphism, q: Morphism) -> LongSequence:
    """``0 -> (M,X) -> (M,Y) -> (M,Z) -> Dev(X) -> Dev(Y) -> Dev(Z)`` for ``P`` free, ``M = coker beta``.

    Exactness is checked at ``(M,X)`` (injectivity) and at the four nodes
    strictly between the ends.
    """
    if beta.dst.rels.cols:
        raise PreconditionFailed("target of beta must be free (presented without relators)")
    if not is_short_exact(i, q):
        raise PreconditionFailed("input sequence is not short exact")
    m = _coker_presented(beta)
    alpha = Morphism(beta.dst, m, IntMatrix.identity(beta.dst.ngens))
    dx = dev(beta, i.src)
    h_i = induced_post(i, m)
    h_q = induced_post(q, m)
    delta = connecting_map(beta, alpha, i, q, dx.carrier, dx.encode)
    d_i = dev_map(beta, i)
    d_q = dev_map(beta, q)
    maps = [h_i, h_q, delta, d_i, d_q]
    exact = [h_i.is_mono()] + [is_exact(f, g) for f, g in zip(maps, maps[1:])]
    objects = [h_i.src, h_i.dst, h_q.dst, dx.carrier, d_i.dst, d_q.dst]
    return LongSequence(objects, maps, exact)


def right_exactness(beta: Morphism, i: Morphism, q: Morphism) -> bool:
    """``Dev(X) -> Dev(Y) -> Dev(Z) -> 0`` exact; holds when ``L`` and ``P`` are free."""
    if beta.src.rels.cols or beta.dst.rels.cols:
        raise PreconditionFailed("source and target of beta must be free")
    if not is_short_exact(i, q):
        raise PreconditionFailed("input sequence is not short exact")
    d_i = dev_map(beta, i)
    d_q = dev_map(beta, q)
    return is_exact(d_i, d_q) and d_q.is_epi()


def preserves_epi(beta: Morphism, q: Morphism) -> bool:
    """Whether ``Dev_beta(q)`` is onto (guaranteed for ``q`` epi and ``L`` free)."""
    return dev_map(beta, q).is_epi()


def transpose(beta: Morphism) -> FpGroup:
    """``Dev_beta(Z)`` for ``beta`` between free groups; isomorphic to ``coker(beta^T)``."""
    if beta.src.rels.cols or beta.dst.rels.cols:
        raise PreconditionFailed("transpose needs beta between free groups")
    return dev(beta, free_group(1)).carrier
