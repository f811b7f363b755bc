"""Countable chains of finitely presented groups and truncation-honest verdicts.

A :class:`Tower` stores stages ``0..N`` and the transitions between them.
Pattern towers (``mult c``, ``factorial``, ``const G``) describe infinite
chains in closed form and extend on demand; ``mult p`` models ``Z[1/p]`` and
``factorial`` models ``Q`` as the union of ``(1/n!) Z``.

Nothing here claims a property of an infinite colimit or limit unless a
pattern-level certificate backs it; otherwise the answer is
``Undetermined`` at the inspected window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Callable, Optional, Sequence, Union

from .defect import dev
from .fpab import (
    ZERO,
    Z,
    FpGroup,
    Morphism,
    Term,
    cokernel,
    direct_sum,
    divisible_part,
    extend_along,
    identity,
    image,
    kernel,
    prime_factors,
    solve_morphisms,
    zero_morphism,
)
from .homext import _carrier_map, hom_group, induced_post, induced_pre
from .zlinalg import IntMatrix

DEFAULT_WINDOW = 8


class Outcome(str, enum.Enum):
    YES = "CertifiedYes"
    NO = "CertifiedNo"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    window: Optional[int]
    certificate: str = ""
    witness: dict = field(default_factory=dict)
    check: Optional[Callable[[], bool]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.outcome is Outcome.UNDETERMINED and (self.witness or self.certificate):
            raise ValueError("an undetermined verdict carries no witness")
        if self.outcome is not Outcome.UNDETERMINED and not (self.witness or self.certificate):
            raise ValueError("a certified verdict needs a witness")

    @property
    def certified(self) -> bool:
        return self.outcome is not Outcome.UNDETERMINED

    @property
    def yes(self) -> bool:
        return self.outcome is Outcome.YES

    @property
    def no(self) -> bool:
        return self.outcome is Outcome.NO

    def verify(self) -> bool:
        """Re-check the witness from scratch; undetermined verdicts verify trivially."""
        if self.outcome is Outcome.UNDETERMINED:
            return True
        return True if self.check is None else bool(self.check())


def undetermined(window: Optional[int]) -> Verdict:
    return Verdict(Outcome.UNDETERMINED, window)


# --------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class Pattern:
    kind: str  # "mult" | "factorial" | "const"
    c: int = 0
    group: Optional[FpGroup] = None

    def stage(self, i: int) -> FpGroup:
        return self.group if self.kind == "const" else Z

    def transition(self, i: int) -> Morphism:
        if self.kind == "const":
            return identity(self.group)
        k = self.c if self.kind == "mult" else i + 1
        return Morphism(Z, Z, IntMatrix(1, 1, [k]))

    def factor(self, i: int, j: int) -> int:
        """Scalar of the composite transition ``i -> j`` on ``Z`` stages."""
        if self.kind == "mult":
            return self.c ** (j - i)
        if self.kind == "factorial":
            return factorial(j) // factorial(i)
        raise ValueError("constant towers have no scalar transitions")

    def tag(self) -> str:
        if self.kind == "mult":
            return f"mult {self.c}"
        if self.kind == "factorial":
            return "factorial"
        return "const"


@dataclass(frozen=True, eq=False)
class Tower:
    stages: tuple
    transitions: tuple
    pattern: Optional[Pattern] = None
    mono: bool = field(default=False, init=False)

    def __post_init__(self):
        stages, trans = tuple(self.stages), tuple(self.transitions)
        object.__setattr__(self, "stages", stages)
        object.__setattr__(self, "transitions", trans)
        if not stages:
            raise ValueError("a tower needs at least one stage")
        if len(trans) != len(stages) - 1:
            raise ValueError("need exactly one transition between consecutive stages")
        for i, t in enumerate(trans):
            if t.src != stages[i] or t.dst != stages[i + 1]:
                raise ValueError(f"transition {i} does not connect stages {i} and {i + 1}")
        if self.pattern is not None:
            for i, g in enumerate(stages):
                if g != self.pattern.stage(i):
                    raise ValueError(f"stage {i} does not match pattern {self.pattern.tag()}")
            for i, t in enumerate(trans):
                if t != self.pattern.transition(i):
                    raise ValueError(f"transition {i} does not match pattern {self.pattern.tag()}")
        object.__setattr__(self, "mono", all(kernel(t)[0].is_trivial() for t in trans))

    @property
    def last(self) -> int:
        return len(self.stages) - 1

    def extend(self, n: int) -> "Tower":
        """Tower holding at least stages ``0..n`` (pattern towers only grow)."""
        if n <= self.last:
            return self
        if self.pattern is None:
            raise ValueError(f"finite tower has only {self.last + 1} stages")
        return pattern_tower(self.pattern, n)

    def truncate(self, n: int) -> "Tower":
        n = min(n, self.last)
        return Tower(self.stages[:n + 1], self.transitions[:n], self.pattern)

    def composite(self, i: int, j: int) -> Morphism:
        """Structural map ``v_{ij}`` from stage ``i`` to stage ``j >= i``."""
        if j < i:
            raise ValueError("composite goes forward only")
        t = self.extend(j)
        out = identity(t.stages[i])
        for k in range(i, j):
            out = t.transitions[k] @ out
        return out

    def describe(self) -> str:
        if self.pattern is not None:
            return f"pattern {self.pattern.tag()}"
        return f"finite chain of {len(self.stages)} stages"


def pattern_tower(pattern: Pattern, n: int) -> Tower:
    stages = [pattern.stage(i) for i in range(n + 1)]
    trans = [pattern.transition(i) for i in range(n)]
    return Tower(stages, trans, pattern)


def mult_tower(c: int, n: int = DEFAULT_WINDOW) -> Tower:
    """``Z -c-> Z -c-> ...``; colimit ``Z[1/c]``."""
    if c == 0:
        raise ValueError("multiplier must be nonzero")
    return pattern_tower(Pattern("mult", c=c), n)


def factorial_tower(n: int = DEFAULT_WINDOW) -> Tower:
    """Stage ``i`` is ``(1/i!) Z``; transition ``i -> i+1`` is ``x (i+1)``; colimit ``Q``."""
    return pattern_tower(Pattern("factorial"), n)


def const_tower(g: FpGroup, n: int = DEFAULT_WINDOW) -> Tower:
    return pattern_tower(Pattern("const", group=g), n)


def finite_tower(stages: Sequence[FpGroup], transitions: Sequence[Morphism]) -> Tower:
    return Tower(tuple(stages), tuple(transitions))


def direct_sum_as_tower(groups: Sequence[FpGroup], replication: int = 1) -> Tower:
    """Chain of partial sums ``A0, A0+A1, ...`` with the canonical inclusions."""
    summands = list(groups) * replication
    if not summands:
        return Tower((ZERO,), ())
    stages, trans = [], []
    for k in range(1, len(summands) + 1):
        s, _, _ = direct_sum(*summands[:k])
        stages.append(s)
    for k in range(len(stages) - 1):
        a, b = stages[k], stages[k + 1]
        trans.append(Morphism(a, b, IntMatrix.identity(b.ngens).take_columns(range(a.ngens))))
    return Tower(tuple(stages), tuple(trans))


def _window(t: Tower, window: int) -> tuple[Tower, int]:
    if t.pattern is not None:
        t = t.extend(window)
        return t, window
    return t, min(window, t.last)


def colim_truncated(t: Tower, n: int) -> tuple[FpGroup, list[Morphism]]:
    """Stage ``n`` with the structural maps ``v_i`` from every earlier stage.

    This approximates the true colimit from below; it is the colimit of the
    truncated chain, not of the whole tower.
    """
    t = t.extend(n)
    return t.stages[n], [t.composite(i, n) for i in range(n + 1)]


# --------------------------------------------------------------------------
# maps between towers


@dataclass(frozen=True, eq=False)
class TowerMorphism:
    """Level data ``src_k -> dst_{m(k)}`` with commuting squares inside the window.

    A plain ``FpGroup`` at either end is treated as a constant tower.
    """

    src: Union[Tower, FpGroup]
    dst: Union[Tower, FpGroup]
    reindex: tuple
    level_maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "reindex", tuple(self.reindex))
        object.__setattr__(self, "level_maps", tuple(self.level_maps))
        if len(self.reindex) != len(self.level_maps) or not self.level_maps:
            raise ValueError("need one level map per reindexed level")
        if any(b < a for a, b in zip(self.reindex, self.reindex[1:])):
            raise ValueError("reindexing must be monotone")
        for k, (m, f) in enumerate(zip(self.reindex, self.level_maps)):
            if f.src != _stage(self.src, k) or f.dst != _stage(self.dst, m):
                raise ValueError(f"level map {k} has the wrong source or target")
        for k in range(len(self.level_maps) - 1):
            lhs = _composite(self.dst, self.reindex[k], self.reindex[k + 1]) @ self.level_maps[k]
            rhs = self.level_maps[k + 1] @ _composite(self.src, k, k + 1)
            if lhs != rhs:
                raise ValueError(f"square {k} does not commute")

    @property
    def window(self) -> int:
        return len(self.level_maps) - 1


def _stage(x: Union[Tower, FpGroup], k: int) -> FpGroup:
    return x if isinstance(x, FpGroup) else x.extend(k).stages[k]


def _composite(x: Union[Tower, FpGroup], i: int, j: int) -> Morphism:
    return identity(x) if isinstance(x, FpGroup) else x.composite(i, j)


# --------------------------------------------------------------------------
# Hom into and out of towers


def hom_from_fp(a: FpGroup, t: Tower, window: int = DEFAULT_WINDOW) -> tuple[FpGroup, Verdict]:
    """``colim_i Hom(A, T_i)``, which equals ``Hom(A, colim T)`` for finitely presented ``A``."""
    tw, n = _window(t, window)
    value = hom_group(a, tw.stages[n]).carrier
    p = tw.pattern
    if p is not None and p.kind == "const":
        return value, Verdict(Outcome.YES, window, "constant-tower", {"stable_from": 0},
                              check=lambda: True)
    if p is not None:
        h0 = hom_group(a, Z).carrier
        if h0.is_trivial():
            return value, Verdict(Outcome.YES, window, "zero-at-every-stage", {"stage_value": "0"},
                                  check=lambda: hom_group(a, Z).carrier.is_trivial())
        if p.kind == "mult":
            step = induced_post(p.transition(0), a)
            if step.is_iso():
                return value, Verdict(Outcome.YES, window, "periodic-iso",
                                      {"stable_from": 0, "transition": step},
                                      check=lambda: induced_post(p.transition(0), a).is_iso())
        return value, undetermined(window)
    if n == tw.last:
        return value, Verdict(Outcome.YES, window, "finite-chain", {"last_stage": n},
                              check=lambda: n == t.last)
    return value, undetermined(window)


def _torsion_exponent(g: FpGroup) -> int:
    tors = g.torsion
    return tors[-1] if tors else 1


def hom_to_fp(t: Tower, b: FpGroup, window: int = DEFAULT_WINDOW) -> tuple[FpGroup, Verdict]:
    """``lim_i Hom(T_i, B)`` along precomposition, i.e. ``Hom(colim T, B)``.

    A certified verdict's witness carries ``restriction``: a morphism from the
    returned group into ``hom_group(T_k, B).carrier`` whose image is the set of
    restrictions of maps on the colimit to a stage ``T_k`` (the image is the
    same subgroup for every ``k`` on the pattern towers handled here).
    """
    tw, n = _window(t, window)
    p = tw.pattern
    if p is not None and p.kind == "const":
        h = hom_group(p.group, b).carrier
        return h, Verdict(Outcome.YES, window, "constant-tower", {"restriction": identity(h)},
                          check=lambda: True)
    if p is not None and p.kind == "mult" and abs(p.c) == 1:
        hz = hom_group(Z, b)
        return hz.carrier, Verdict(Outcome.YES, window, "periodic-iso", {"restriction": identity(hz.carrier)},
                                   check=lambda: True)
    if p is not None and p.kind == "mult":
        d, incl = divisible_part(b, abs(p.c))
        hz = hom_group(Z, b)
        restr = _carrier_map(d, hz.carrier, [hz.encode(Morphism(Z, b, IntMatrix.column(incl(g).coords)))
                                           for g in d.gens()])
        tag = "torsion-automorphism" if incl.is_epi() else "divisibility"

        def check() -> bool:
            # x c is invertible on D, and B/D has no nonzero infinitely c-divisible elements
            c_on_d = Morphism(d, d, IntMatrix.identity(d.ngens).scale(p.c))
            q, _ = cokernel(incl)
            primes = set(prime_factors(p.c))
            return c_on_d.is_iso() and all(set(prime_factors(x)) <= primes for x in q.torsion)

        return d, Verdict(Outcome.YES, window, tag, {"restriction": restr, "divisor": p.c}, check=check)
    if p is not None and p.kind == "factorial":
        e = _torsion_exponent(b)
        hz = hom_group(Z, b)
        return ZERO, Verdict(Outcome.YES, window, "divisibility",
                             {"restriction": zero_morphism(ZERO, hz.carrier), "torsion_exponent": e},
                             check=lambda: factorial(e) % _torsion_exponent(b) == 0)
    if n == tw.last:
        h = hom_group(tw.stages[n], b).carrier
        return h, Verdict(Outcome.YES, window, "finite-chain", {"last_stage": n}, check=lambda: True)
    return hom_group(tw.stages[n], b).carrier, undetermined(window)


def _smallest_prime_not_dividing(c: int) -> int:
    q = 2
    while True:
        if all(q % k for k in range(2, int(q ** 0.5) + 1)) and c % q:
            return q
        q += 1


def hom_tower_to_tower(s: Tower, t: Tower, window: int = DEFAULT_WINDOW) -> tuple[Optional[FpGroup], Verdict]:
    """``Hom(colim S, colim T)`` where a pattern certificate exists.

    Returns ``(None, Undetermined)`` when the answer is not finitely presented
    or not decidable from the patterns.
    """
    ps, pt = s.pattern, t.pattern
    if ps is not None and ps.kind == "const":
        return hom_from_fp(ps.group, t, window)
    if ps is None and s.last <= window:
        return hom_from_fp(s.stages[-1], t, window)
    if pt is not None and pt.kind == "const":
        return hom_to_fp(s, pt.group, window)
    if ps is None or pt is None:
        return None, undetermined(window)
    if ps.kind == "factorial" and pt.kind == "mult":
        # a map Q -> Z[1/c] sends 1 to an element divisible by q^k for all k, q a prime not dividing c
        q = _smallest_prime_not_dividing(pt.c)
        return ZERO, Verdict(Outcome.YES, window, "hom-vanishing", {"prime": q, "target_divisor": pt.c},
                             check=lambda: pt.c % q != 0 and all(q % k for k in range(2, q)))
    if ps.kind == "mult" and pt.kind == "mult":
        missing = [q for q in prime_factors(ps.c) if pt.c % q]
        if missing:
            q = missing[0]
            return ZERO, Verdict(Outcome.YES, window, "hom-vanishing", {"prime": q, "target_divisor": pt.c},
                                 check=lambda: ps.c % q == 0 and pt.c % q != 0)
    return None, undetermined(window)


# --------------------------------------------------------------------------
# Dev along a map into a tower


def _restriction_image(beta: TowerMorphism, x: FpGroup, window: int):
    """Image of ``Hom(colim P, X) -> Hom(L, X)`` as a morphism into the Hom carrier, with its verdict."""
    p = beta.dst
    lam = beta.level_maps[0]
    k = beta.reindex[0]
    if isinstance(p, FpGroup):
        r = induced_pre(lam, x)
        return r, Verdict(Outcome.YES, window, "finitely-presented-target", {"target": p.describe()},
                          check=lambda: True)
    lim, v = hom_to_fp(p, x, window)
    if not v.certified:
        return None, v
    restr = v.witness["restriction"]  # lim -> Hom(P_k, X)
    if restr.dst != hom_group(_stage(p, k), x).carrier:
        return None, undetermined(window)
    return induced_pre(lam, x) @ restr, v


def dev_tower(beta: TowerMorphism, x: FpGroup, window: int = DEFAULT_WINDOW):
    """``Dev_beta(X)`` for ``beta : L -> colim P`` with ``L`` finitely presented.

    Returns ``(carrier, projection from hom_group(L, X).carrier, verdict)``.
    """
    if not isinstance(beta.src, FpGroup):
        raise TypeError("dev_tower needs a finitely presented source")
    image, v = _restriction_image(beta, x, window)
    if image is None:
        return None, None, undetermined(window)
    carrier, proj = cokernel(image)
    return carrier, proj, v


# --------------------------------------------------------------------------
# the comparison map Phi


@dataclass
class PhiReport:
    window: int
    epi: Verdict
    mono: Verdict
    iso: Verdict
    stage_values: list  # Dev_beta(M_k) carriers, k <= window
    colim_value: Any = None  # Dev_beta(colim) when certified
    notes: list = field(default_factory=list)


def _epi_witnesses(beta: Morphism, t: Tower, n: int) -> list[tuple[int, Morphism, Morphism, Morphism]]:
    """For each generator ``f`` of ``Dev_beta(M_n)``: smallest ``k`` with ``f = g beta + v_k h``."""
    top = t.stages[n]
    d = dev(beta, top)
    out = []
    for xi in d.carrier.gens():
        f = d.decode(xi)
        for k in range(n + 1):
            vk = t.composite(k, n)
            sol = solve_morphisms(
                [(beta.dst, top), (beta.src, t.stages[k])],
                [([Term(0, right=beta), Term(1, left=vk)], f)],
            )
            if sol is not None:
                out.append((k, f, sol[1], sol[0]))
                break
        else:  # pragma: no cover - k = n always works
            raise AssertionError("no factorization even at the top stage")
    return out


def truncated_phi_kernels(beta: Morphism, t: Tower, window: int) -> list[FpGroup]:
    """Kernels of ``Dev_beta(v_{k,N}) : Dev_beta(M_k) -> Dev_beta(M_N)`` for ``k <= N``."""
    tw, n = _window(t, window)
    from .defect import dev_map

    return [kernel(dev_map(beta, tw.composite(k, n)))[0] for k in range(n + 1)]


def phi_verdict(beta: Union[Morphism, TowerMorphism], t: Tower, window: int = DEFAULT_WINDOW) -> PhiReport:
    """Verdicts on whether ``colim Dev_beta(M_i) -> Dev_beta(colim M_i)`` is epi, mono, iso."""
    if isinstance(beta, TowerMorphism):
        return _phi_tower_beta(beta, t, window)
    tw, n = _window(t, window)
    stage_values = [dev(beta, tw.stages[k]).carrier for k in range(n + 1)]

    wits = _epi_witnesses(beta, tw, n)

    def check_epi() -> bool:
        return all(f == g @ beta + tw.composite(k, n) @ h for k, f, h, g in wits)

    epi = Verdict(Outcome.YES, window, "finitely-presented-source",
                  {"factorizations": [{"k": k, "h": h, "g": g} for k, _, h, g in wits]}, check=check_epi)

    if beta.is_epi() and tw.mono:
        kernels = truncated_phi_kernels(beta, tw, n)

        def check_mono() -> bool:
            return all(k.is_trivial() for k in truncated_phi_kernels(beta, tw, n))

        if all(k.is_trivial() for k in kernels):
            mono = Verdict(Outcome.YES, window, "epi-beta-direct-union",
                           {"level_kernels": [k.describe() for k in kernels]}, check=check_mono)
        else:  # pragma: no cover - contradicts the structural argument
            raise AssertionError("nonzero level kernel for an epimorphism on a direct union")
    else:
        mono = Verdict(Outcome.YES, window, "finitely-presented-source-and-target",
                       {"source": beta.src.describe(), "target": beta.dst.describe()}, check=lambda: True)
    iso = Verdict(Outcome.YES, window, f"{epi.certificate}+{mono.certificate}",
                  {"epi": epi.certificate, "mono": mono.certificate},
                  check=lambda: epi.verify() and mono.verify())
    return PhiReport(n, epi, mono, iso, stage_values, colim_value=stage_values[-1] if tw.pattern is None and n == tw.last else None)


def _p_adic(n: int, p: int) -> int:
    v = 0
    while n and n % p == 0:
        n //= p
        v += 1
    return v


def _dev_of_colimit(beta: TowerMorphism, t: Tower, window: int):
    """``Dev_beta(colim T)`` from pattern certificates: ``(value, verdict)`` where
    value is ``"zero"``, ``"colimit"`` (equal to the colimit of stage values) or ``None``."""
    p = beta.dst
    lam = beta.level_maps[0]
    if isinstance(p, Tower) and p.pattern is not None and p.pattern.kind == "mult" and t.pattern is not None:
        c = abs(p.pattern.c)
        primes = prime_factors(c)
        divisible = t.pattern.kind == "factorial" or (
            t.pattern.kind == "mult" and all(t.pattern.c % q == 0 for q in primes))
        # Hom(L, colim T) is Q-linear of dimension rank L; maps out of the colimit of P
        # restrict onto it exactly when lambda has infinite image on a rank-one L
        onto = beta.src.rank == 0 or (beta.src.rank == 1 and not image(lam)[0].is_finite())
        if c > 1 and divisible and onto:
            # every element of colim T is infinitely c-divisible, so every map from
            # stage 0 extends over colim P and Dev vanishes
            tw = t.extend(window)
            vals = {q: [_p_adic(tw.pattern.factor(i, window), q) for i in range(window + 1)] for q in primes}

            def closed_form(q: int, i: int) -> int:
                # Legendre's formula for factorial ratios, plain valuation for powers
                if t.pattern.kind == "mult":
                    return (window - i) * _p_adic(t.pattern.c, q)
                total, qe = 0, q
                while qe <= window:
                    total += window // qe - i // qe
                    qe *= q
                return total

            def check() -> bool:
                return all(vals[q][i] == closed_form(q, i) for q in primes for i in range(window + 1))

            return "zero", Verdict(Outcome.YES, window, "divisible-colimit",
                                   {"divisor": c, "valuations_to_window": vals}, check=check)
        if c > 1 and t.pattern.kind == "mult" and not divisible:
            return "colimit", Verdict(Outcome.YES, window, "no-divisible-elements",
                                      {"divisor": c, "colimit_divisor": t.pattern.c}, check=lambda: True)
    if t.pattern is not None and t.pattern.kind == "const":
        return "colimit", Verdict(Outcome.YES, window, "constant-tower", {"stable_from": 0}, check=lambda: True)
    if t.pattern is None and window >= t.last:
        return "colimit", Verdict(Outcome.YES, window, "finite-chain", {"last_stage": t.last}, check=lambda: True)
    return None, undetermined(window)


def _phi_tower_beta(beta: TowerMorphism, t: Tower, window: int) -> PhiReport:
    if not isinstance(beta.src, FpGroup):
        raise TypeError("phi for a tower-valued beta needs a finitely presented source")
    tw, n = _window(t, window)
    L = beta.src
    stage_values, projs, stage_verdicts = [], [], []
    for k in range(n + 1):
        carrier, proj, v = dev_tower(beta, tw.stages[k], window)
        stage_values.append(carrier)
        projs.append(proj)
        stage_verdicts.append(v)
    report = PhiReport(n, undetermined(window), undetermined(window), undetermined(window), stage_values)
    if not all(v.certified for v in stage_verdicts):
        report.notes.append("stage values not certified")
        return report
    # Dev transitions: post-compose representatives
    dev_trans = []
    for k in range(n):
        hk = hom_group(L, tw.stages[k])
        hk1 = hom_group(L, tw.stages[k + 1])
        images = []
        for g in stage_values[k].gens():
            lift = projs[k].preimage(g)
            f = hk.decode(lift)
            images.append(projs[k + 1](hk1.encode(tw.transitions[k] @ f)))
        dev_trans.append(_carrier_map(stage_values[k], stage_values[k + 1], images))

    value, cv = _dev_of_colimit(beta, t, window)
    report.colim_value = value
    if value == "zero":
        report.epi = Verdict(Outcome.YES, window, "target-is-zero", {"colimit": cv.certificate}, check=cv.verify)
        stage_nonzero = [not g.is_trivial() for g in stage_values]
        trans_mono = [m.is_mono() for m in dev_trans]
        pattern_repeats = tw.pattern is not None and tw.pattern.kind in ("mult", "factorial")
        if all(stage_nonzero) and all(trans_mono) and pattern_repeats:
            def check_nonzero() -> bool:
                return cv.verify() and all(not g.is_trivial() for g in stage_values) and all(
                    m.is_mono() for m in dev_trans)

            wit = {
                "dev_of_colimit": "0",
                "colimit_certificate": cv.certificate,
                "colimit_witness": cv.witness,
                "stage_values": [g.describe() for g in stage_values],
                "stage_transitions_mono": trans_mono,
            }
            report.mono = Verdict(Outcome.NO, window, "nonzero-colimit-into-zero", wit, check=check_nonzero)
            report.iso = Verdict(Outcome.NO, window, "nonzero-colimit-into-zero", wit, check=check_nonzero)
        elif L.is_finite() and pattern_repeats:
            # Hom(finite, Z) = 0 at every stage: both sides vanish
            wit = {"dev_of_colimit": "0", "stage_value": "0", "colimit_certificate": cv.certificate}
            report.mono = Verdict(Outcome.YES, window, "zero-to-zero", wit, check=cv.verify)
            report.iso = Verdict(Outcome.YES, window, "zero-to-zero", wit, check=cv.verify)
        return report
    if value == "colimit":
        report.epi = Verdict(Outcome.YES, window, cv.certificate, cv.witness or {"tag": cv.certificate}, check=cv.verify)
        report.mono = Verdict(Outcome.YES, window, cv.certificate, cv.witness or {"tag": cv.certificate}, check=cv.verify)
        report.iso = Verdict(Outcome.YES, window, cv.certificate, cv.witness or {"tag": cv.certificate}, check=cv.verify)
    return report


# --------------------------------------------------------------------------
# quotient towers


def quotient_tower(t: Tower, sub0: Morphism, n: int) -> tuple[Tower, list[Morphism]]:
    """Stages ``T_k / v_{0k}(H)`` for a subgroup ``H -> T_0``, with the level projections."""
    tw = t.extend(n)
    stages, projs = [], []
    for k in range(n + 1):
        q, pr = cokernel(tw.composite(0, k) @ sub0)
        stages.append(q)
        projs.append(pr)
    trans = []
    for k in range(n):
        induced = extend_along(projs[k + 1] @ tw.transitions[k], projs[k])
        assert induced is not None
        trans.append(induced)
    return Tower(tuple(stages), tuple(trans)), projs
