"""Command line front end.

Reports are ``key: value`` lines (see ``textio``).  Exit codes: 0 computed,
1 a certified verdict contradicts ``--expect`` (or a replayed witness fails),
2 input error, 3 undetermined under ``--require-certified``.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from math import gcd
from typing import Optional

from . import criteria, examples, oracle
from .defect import dev, dev_vs_ext_check, half_exact_sequence, restriction_sequence, right_exactness
from .fpab import FpGroup, Morphism, PreconditionFailed, cyclic, direct_sum, identity, is_exact
from .homext import ext1, hom_group
from .instances import (
    random_epi,
    random_group,
    random_into_free,
    random_matrix,
    random_mono_into_free,
    random_mono_tower,
    random_morphism,
    random_nonsplit_sigma,
    random_ses,
)
from .textio import Document, InputError, Report, format_invariants, group_literal, parse
from .tower import DEFAULT_WINDOW, Outcome, Verdict, direct_sum_as_tower, phi_verdict
from .zlinalg import IntMatrix, snf, diagonal, det

EXIT_OK, EXIT_EXPECT, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2, 3


def _bool_verdict(flag: bool, yes_tag: str, no_tag: str, witness: Optional[dict] = None, check=None) -> Verdict:
    w = witness or {"computed": True}
    if flag:
        return Verdict(Outcome.YES, None, yes_tag, w, check=check)
    return Verdict(Outcome.NO, None, no_tag, w, check=None if check is None else (lambda: not check()))


def _load(args) -> Document:
    if args.file is None:
        return Document()
    try:
        with open(args.file, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {args.file}: {e.strerror}") from None


def _verdict_lines(rep: Report, v: Verdict, key: str = "verdict") -> None:
    rep.add(key, v.outcome.value)
    if v.window is not None:
        rep.add(f"{key}_window", v.window)
    if v.certified:
        rep.add(f"{key}_certificate", v.certificate)
        if v.witness:
            rep.add(f"{key}_witness", v.witness)


# --------------------------------------------------------------------------
# commands


def cmd_snf(args, doc):
    rep = Report()
    target = args.target
    mats = []
    if target in doc.groups:
        mats.append((target, doc.groups[target].rels))
    elif target in doc.morphisms:
        mats.append((target, doc.morphisms[target].mat))
    elif os.path.isfile(target):
        with open(target, encoding="utf-8") as fh:
            text = fh.read()
        try:
            d2 = parse(text)
            for kind, name in d2.order:
                if kind == "group":
                    mats.append((name, d2.groups[name].rels))
                elif kind == "morphism":
                    mats.append((name, d2.morphisms[name].mat))
        except InputError:
            rows = []
            for no, line in enumerate(text.splitlines(), 1):
                body = line.split("#", 1)[0].split()
                if body:
                    try:
                        rows.append([int(x) for x in body])
                    except ValueError:
                        raise InputError("expected integers", no) from None
            if len({len(r) for r in rows}) > 1:
                raise InputError("ragged matrix")
            mats.append(("matrix", IntMatrix.from_rows(rows, len(rows[0]) if rows else 0)))
        if not mats:
            raise InputError("no matrices in file")
    else:
        raise InputError(f"no group, morphism or file named {target!r}")
    for name, m in mats:
        d, u, v = snf(m)
        rep.add(f"{name}.input", m)
        rep.add(f"{name}.diagonal", diagonal(d))
        rep.add(f"{name}.U", u)
        rep.add(f"{name}.V", v)
        rep.add(f"{name}.check", u @ m @ v == d)
    return rep, None


def cmd_invariants(args, doc):
    g = doc.group(args.group)
    rep = Report()
    rep.add("group", g)
    rep.add("invariant_factors", format_invariants(g))
    return rep, None


def cmd_hom(args, doc):
    a, b = doc.group(args.a), doc.group(args.b)
    h = hom_group(a, b)
    rep = Report()
    rep.add("carrier", h.carrier)
    rep.add("invariant_factors", format_invariants(h.carrier))
    rep.add("order", h.carrier.order() if h.carrier.is_finite() else "infinite")
    rep.add("generators", h.generators())
    return rep, None


def cmd_ext(args, doc):
    a, b = doc.group(args.a), doc.group(args.b)
    e = ext1(a, b)
    rep = Report()
    rep.add("carrier", e.carrier)
    rep.add("invariant_factors", format_invariants(e.carrier))
    rep.add("cocycles", [e.cocycle(g) for g in e.carrier.gens()])
    return rep, None


def cmd_dev(args, doc):
    beta, x = doc.morphism(args.beta), doc.group(args.at)
    d = dev(beta, x)
    rep = Report()
    rep.add("carrier", d.carrier)
    rep.add("invariant_factors", format_invariants(d.carrier))
    rep.add("representatives", [d.decode(g) for g in d.carrier.gens()])
    return rep, None


def cmd_dev_vs_ext(args, doc):
    beta, x = doc.morphism(args.beta), doc.group(args.at)
    f = doc.morphism(args.map) if args.map else None
    c = dev_vs_ext_check(beta, x, f)
    rep = Report()
    rep.add("dev_invariants", f"{c.dev_invariants[0]}, [{','.join(map(str, c.dev_invariants[1]))}]")
    rep.add("ext_invariants", f"{c.ext_invariants[0]}, [{','.join(map(str, c.ext_invariants[1]))}]")
    rep.add("naturality", c.naturality)
    ok = c.agree and c.naturality is not False
    v = _bool_verdict(ok, "isomorphism", "mismatch", {"iso": c.witness}, check=lambda: c.witness.is_iso())
    _verdict_lines(rep, v)
    return rep, v


def cmd_seq23(args, doc):
    beta, x = doc.morphism(args.beta), doc.group(args.at)
    s = restriction_sequence(beta, x)
    rep = Report()
    rep.add("left", s.left.carrier)
    rep.add("middle", s.middle.carrier)
    rep.add("right", s.right.carrier)
    rep.add("exact_left", s.mono)
    rep.add("exact_middle", s.middle_exact)
    rep.add("exact_right", s.epi)
    v = _bool_verdict(s.verdict, "short-exact", "not-exact", {"first": s.first, "second": s.second})
    _verdict_lines(rep, v)
    return rep, v


def cmd_sixterm(args, doc):
    beta = doc.morphism(args.beta)
    i, q = doc.lookup("sequences", args.ses)
    seq = half_exact_sequence(beta, i, q)
    rep = Report()
    rep.add("objects", [o.describe() for o in seq.objects])
    rep.add("exact_at", seq.exact_at)
    if not beta.src.rels.cols:
        rep.add("right_exact", right_exactness(beta, i, q))
    v = _bool_verdict(seq.verdict, "exact", "not-exact", {"maps": seq.maps})
    _verdict_lines(rep, v)
    return rep, v


def cmd_phi(args, doc):
    beta = doc.morphism(args.beta)
    t = doc.lookup("towers", args.tower)
    r = phi_verdict(beta, t, args.window)
    rep = Report()
    rep.add("tower", t)
    rep.add("stage_values", [g.describe() for g in r.stage_values])
    for name in ("epi", "mono", "iso"):
        _verdict_lines(rep, getattr(r, name), name)
    return rep, getattr(r, args.property)


def cmd_check(args, doc):
    rep = Report()
    beta = doc.morphism(args.beta)
    if args.which == "split-pair":
        (h,) = _need(args.rest, 1, "H")
        v = criteria.split_pair_check(beta, doc.morphism(h))
    elif args.which in ("thm41", "quotient-split"):
        (sub,) = _need(args.rest, 1, "SUBGROUP")
        res = criteria.quotient_split_lift_check(beta, doc.morphism(sub))
        rep.add("beta_bar", res.beta_bar)
        v = res.verdict
    elif args.which == "split-small":
        fam_name, sigma_name, fset = _need(args.rest, 3, "FAMILY SIGMA F")
        family = doc.lookup("families", fam_name)
        sigma = doc.morphism(sigma_name)
        if fset == "min":
            F = criteria.minimal_split_set(beta, family, sigma)
            rep.add("minimal_F", "none" if F is None else list(F))
            F = tuple(range(len(family))) if F is None else F
        else:
            F = _index_set(fset, len(family))
        res = criteria.splitting_small_check(beta, family, sigma, F)
        rep.add("F", list(F))
        rep.add("rho", res.rho)
        v = res.verdict
    elif args.which == "def-omega":
        (chain,) = _need(args.rest, 1, "CHAIN")
        res = criteria.chain_split_check(beta, doc.lookup("chains", chain))
        rep.add("index", res.index)
        v = res.verdict
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown check {args.which}")
    _verdict_lines(rep, v)
    return rep, v


def _need(rest, n, what):
    if len(rest) != n:
        raise InputError(f"expected {what}")
    return rest


def _index_set(text: str, n: int) -> tuple:
    if text in ("-", "none"):
        return ()
    try:
        out = tuple(sorted({int(x) for x in text.split(",")}))
    except ValueError:
        raise InputError(f"bad index set {text!r}") from None
    if any(i < 0 or i >= n for i in out):
        raise InputError("index out of range")
    return out


def cmd_examples(args, doc):
    rep = Report()
    p = args.prime
    if args.name == "ex32":
        r = examples.rational_failure(p, args.window)
        rep.add("beta", f"Z -> Z[1/{p}] (stage 0 of pattern mult {p})")
        rep.add("tower", "pattern factorial (union of (1/n!)Z, colimit Q)")
        rep.add("stage_values", [g.describe() for g in r.stage_values])
        rep.add("dev_of_colimit", "0" if r.colim_value == "zero" else "uncertified")
        for name in ("epi", "mono", "iso"):
            _verdict_lines(rep, getattr(r, name), name)
        return rep, r.iso
    if args.name == "ex42":
        res = examples.unliftable_split(p, args.window)
        rep.add("beta", f"Z[1/{p}] -> Q (pattern mult {p} into pattern factorial)")
        rep.add("subgroup", "Z at stage 0")
        rep.add("source_quotient", [g.describe() for g in res.source_quotient.stages[:args.window + 1]])
        rep.add("target_quotient", [g.describe() for g in res.target_quotient.stages])
        _verdict_lines(rep, res.split_verdict, "split")
        _verdict_lines(rep, res.verdict, "lift")
        return rep, res.verdict
    if args.name == "devp":
        groups = [group_literal(s) for s in ("Z", "Z^2", "Z/2+Z", "Z/3+Z/6", "Z/4+Z/5+Z")]
        groups += [g for _, g in sorted(doc.groups.items())]
        rows = examples.divisible_quotient(p, groups, args.window)
        for n, row in enumerate(rows):
            rep.add(f"case.{n}", f"A = {row.group.describe()}; Dev = {row.dev.describe()}; "
                                 f"A/D_{p}(A) = {row.quotient.describe()}; agree = {str(row.agree).lower()}")
        v = _bool_verdict(all(r.agree for r in rows), "agree", "mismatch", {"cases": len(rows)})
        _verdict_lines(rep, v)
        return rep, v
    raise InputError(f"unknown example {args.name}")  # pragma: no cover


def cmd_oracle(args, doc):
    a, b = doc.group(args.a), doc.group(args.b)
    try:
        count = len(oracle.enumerate_homs(a, b))
    except (oracle.TooLarge, ValueError) as e:
        raise InputError(str(e)) from None
    engine = hom_group(a, b).carrier.order()
    rep = Report()
    rep.add("oracle_count", count)
    rep.add("engine_count", engine)
    v = _bool_verdict(count == engine, "agree", "mismatch", {"count": count})
    _verdict_lines(rep, v)
    return rep, v


# --------------------------------------------------------------------------
# self-test


def selftest(seed: int) -> tuple[list[tuple[str, int, int]], bool]:
    rng = random.Random(seed)
    out = []

    def suite(name, trials, fn):
        passed = sum(1 for _ in range(trials) if fn())
        out.append((name, passed, trials))

    def snf_case():
        m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), 20)
        d, u, v = snf(m)
        dg = diagonal(d)
        nz = [x for x in dg if x]
        return (u @ m @ v == d and abs(det(u)) == 1 and abs(det(v)) == 1
                and all(b % a == 0 for a, b in zip(nz, nz[1:])) and all(x >= 0 for x in dg))

    suite("snf", 200, snf_case)
    gs = oracle.groups_up_to(12)
    pairs = [(a, b) for a in gs for b in gs]
    out.append(("hom_oracle", sum(len(oracle.enumerate_homs(a, b)) == hom_group(a, b).carrier.order()
                                  for a, b in pairs), len(pairs)))
    ext_pairs = [(n, m) for n in range(2, 13) for m in range(2, 13)]
    out.append(("ext_formula", sum(ext1(cyclic(n), cyclic(m)).carrier.isomorphic(cyclic(gcd(n, m)))
                                   for n, m in ext_pairs), len(ext_pairs)))

    def dev_ext():
        beta = random_mono_into_free(rng)
        x, y = random_group(rng, 3, 5), random_group(rng, 3, 5)
        c = dev_vs_ext_check(beta, x, random_morphism(rng, x, y))
        return c.agree and c.naturality

    suite("dev_vs_ext", 20, dev_ext)

    def seq23():
        L, P, x = random_group(rng, 3, 5), random_group(rng, 3, 5), random_group(rng, 3, 5)
        return restriction_sequence(random_morphism(rng, L, P), x).verdict

    suite("restriction_sequence", 20, seq23)

    def sixterm():
        beta = random_into_free(rng, free_source=rng.random() < 0.5)
        i, q = random_ses(rng)
        ok = half_exact_sequence(beta, i, q).verdict
        if not beta.src.rels.cols:
            ok = ok and right_exactness(beta, i, q)
        return ok

    suite("six_term", 20, sixterm)

    def unions():
        beta = random_epi(rng)
        r = phi_verdict(beta, random_mono_tower(rng, 6), 6)
        return r.mono.yes and r.mono.certificate == "epi-beta-direct-union" and r.mono.verify()

    suite("monomorphism_unions", 10, unions)

    def fp_epi():
        L, P = random_group(rng, 3, 5), random_group(rng, 3, 5)
        r = phi_verdict(random_morphism(rng, L, P), random_mono_tower(rng, 3), 1)
        return r.epi.yes and r.epi.verify()

    suite("fp_source_epi", 20, fp_epi)

    def split_small():
        n = rng.randint(1, 4)
        beta, fam, sigma = random_nonsplit_sigma(rng, n)
        epi = phi_verdict(beta, direct_sum_as_tower(fam), n - 1).epi
        F = criteria.minimal_split_set(beta, fam, sigma)
        return epi.yes == (F is not None) and all(
            criteria.dev_class_from_partial_sum(beta, fam, sigma, S)
            == criteria.splitting_small_check(beta, fam, sigma, S).verdict.yes
            for S in criteria.subsets_smallest_first(n))

    suite("splitting_small", 10, split_small)
    r = examples.rational_failure(2, 4)
    out.append(("ex32", int(r.iso.no and r.iso.verify()), 1))
    e = examples.unliftable_split(2, 4)
    out.append(("ex42", int(e.verdict.no and e.split_verdict.yes and e.verdict.verify()), 1))
    return out, all(p == t for _, p, t in out)


def cmd_selftest(args, doc):
    results, ok = selftest(args.seed)
    rep = Report()
    rep.add("seed", args.seed)
    for name, passed, total in results:
        rep.add(f"suite.{name}", f"{passed}/{total}")
    v = _bool_verdict(ok, "all-suites-pass", "suite-failure", {"suites": len(results)})
    _verdict_lines(rep, v)
    return rep, v


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    def common_options(p, suppress: bool) -> None:
        # subcommands repeat the options without defaults so they do not mask ones given earlier
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("-f", "--file", default=d(None), help="input file with group/morphism/tower blocks")
        p.add_argument("--window", type=int, default=d(DEFAULT_WINDOW))
        p.add_argument("--seed", type=int, default=d(0))
        p.add_argument("--expect", choices=("yes", "no"), default=d(None))
        p.add_argument("--require-certified", action="store_true", default=d(False))
        p.add_argument("--verify-witness", action="store_true", default=d(False),
                       help="replay the witness of the main verdict")

    common = argparse.ArgumentParser(add_help=False)
    common_options(common, True)
    parser = argparse.ArgumentParser(prog="defectkit",
                                     description="Defect functors over finitely presented abelian groups.")
    common_options(parser, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for p in pos:
            sp.add_argument(p)
        sp.set_defaults(fn=fn)
        return sp

    add("snf", cmd_snf, "target")
    add("invariants", cmd_invariants, "group")
    add("hom", cmd_hom, "a", "b")
    add("ext", cmd_ext, "a", "b")
    add("dev", cmd_dev, "beta", "at")
    add("dev-vs-ext", cmd_dev_vs_ext, "beta", "at").add_argument("--map", help="naturality map X -> Y")
    add("seq23", cmd_seq23, "beta", "at")
    add("sixterm", cmd_sixterm, "beta", "ses")
    add("phi", cmd_phi, "beta", "tower").add_argument("--property", choices=("epi", "mono", "iso"), default="iso")
    chk = add("check", cmd_check)
    chk.add_argument("which", choices=("split-pair", "thm41", "quotient-split", "split-small", "def-omega"))
    chk.add_argument("beta")
    chk.add_argument("rest", nargs="*")
    ex = add("examples", cmd_examples)
    ex.add_argument("name", choices=("ex32", "ex42", "devp"))
    ex.add_argument("--prime", type=int, default=2)
    orc = add("oracle", cmd_oracle)
    orc.add_argument("kind", choices=("hom",))
    orc.add_argument("a")
    orc.add_argument("b")
    add("selftest", cmd_selftest)
    return parser


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.window < 0:
        err.write("error: window must be nonnegative\n")
        return EXIT_INPUT
    try:
        doc = _load(args)
        rep, verdict = args.fn(args, doc)
    except (InputError, PreconditionFailed, ValueError, TypeError) as e:
        err.write(f"error: {e}\n")
        return EXIT_INPUT
    code = EXIT_OK
    if verdict is not None and args.verify_witness:
        ok = verdict.verify()
        rep.add("witness_verified", ok)
        if not ok:
            code = EXIT_EXPECT
    out.write(rep.text())
    if verdict is not None:
        if args.expect == "yes" and verdict.no or args.expect == "no" and verdict.yes:
            return EXIT_EXPECT
        if args.require_certified and not verdict.certified:
            return EXIT_UNDETERMINED
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
