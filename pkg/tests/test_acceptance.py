"""Acceptance criteria 1-12, each recorded as one pass/fail line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import io
import random
import subprocess
import sys
import time
from math import gcd

import conftest
from defectkit import criteria, oracle
from defectkit.cli import run
from defectkit.defect import dev_vs_ext_check, half_exact_sequence, restriction_sequence, right_exactness
from defectkit.fpab import cyclic
from defectkit.homext import ext1, hom_group
from defectkit.instances import (
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
from defectkit.tower import direct_sum_as_tower, phi_verdict, truncated_phi_kernels
from defectkit.zlinalg import det, diagonal, snf


def record(n: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {n} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out, io.StringIO())
    return code, out.getvalue()


def test_normal_form_suite():
    rng = random.Random(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(1000):
        m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6), 20)
        d, u, v = snf(m)
        dg = [x for x in diagonal(d) if x]
        ok = (u @ m @ v == d and abs(det(u)) == 1 and abs(det(v)) == 1
              and all(x > 0 for x in dg) and all(b % a == 0 for a, b in zip(dg, dg[1:])))
        bad += not ok
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 10
    record(1, "normal forms", ok, f"{bad} failures in 1000, {dt:.2f}s")
    assert ok


def test_hom_against_brute_force():
    t0 = time.perf_counter()
    gs = oracle.groups_up_to(24)
    mism = sum(len(oracle.enumerate_homs(a, b)) != hom_group(a, b).carrier.order() for a in gs for b in gs)
    dt = time.perf_counter() - t0
    ok = mism == 0 and dt < 30 and len(gs) == 37
    record(2, "hom oracle agreement", ok, f"{mism} mismatches over {len(gs) ** 2} pairs, {dt:.2f}s")
    assert ok


def _coker_times_n(n: int, m: int) -> int:
    # order of Z/m / n(Z/m), by listing the image
    return m // len({(n * x) % m for x in range(m)})


def test_ext_of_cyclics():
    mism = 0
    for n in range(2, 31):
        for m in range(2, 31):
            e = ext1(cyclic(n), cyclic(m)).carrier
            k = _coker_times_n(n, m)
            mism += not (e.isomorphic(cyclic(k)) and k == gcd(n, m))
    record(3, "ext of cyclic groups", mism == 0, f"{mism} mismatches over 841 pairs")
    assert mism == 0


def test_dev_equals_ext_for_mono_into_free():
    rng = random.Random(4)
    fails = 0
    for _ in range(200):
        beta = random_mono_into_free(rng)
        x, y = random_group(rng, 4, 5), random_group(rng, 4, 5)
        c = dev_vs_ext_check(beta, x, random_morphism(rng, x, y))
        fails += not (c.agree and c.naturality)
    record(4, "dev agrees with ext", fails == 0, f"{fails} failures in 200")
    assert fails == 0


def test_restriction_sequence_exact():
    rng = random.Random(5)
    fails = 0
    for _ in range(200):
        L, P, x = random_group(rng, 3, 5), random_group(rng, 3, 5), random_group(rng, 3, 5)
        s = restriction_sequence(random_morphism(rng, L, P), x)
        fails += not (s.mono and s.middle_exact and s.epi)
    record(5, "restriction sequence exact", fails == 0, f"{fails} failures in 200")
    assert fails == 0


def test_six_term_sequence_exact():
    rng = random.Random(6)
    fails, free_src = 0, 0
    for _ in range(100):
        beta = random_into_free(rng, free_source=rng.random() < 0.5)
        i, q = random_ses(rng)
        ok = half_exact_sequence(beta, i, q).verdict
        if not beta.src.rels.cols:
            free_src += 1
            ok = ok and right_exactness(beta, i, q)
        fails += not ok
    record(6, "six-term exactness", fails == 0, f"{fails} failures in 100, {free_src} with free source")
    assert fails == 0


def test_rational_union_failure():
    t0 = time.perf_counter()
    code, out = cli("examples", "ex32", "--window", "4", "--verify-witness")
    dt = time.perf_counter() - t0
    lines = dict(l.split(": ", 1) for l in out.splitlines() if ": " in l)
    stages = lines.get("stage_values", "")[1:-1].split(", ")
    ok = (code == 0 and lines.get("iso") == "CertifiedNo"
          and lines.get("dev_of_colimit") == "0"
          and lines.get("iso_witness.colimit_certificate") == "divisible-colimit"
          and len(stages) == 5 and all(s not in ("", "0") for s in stages)
          and lines.get("witness_verified") == "true" and dt < 1)
    record(7, "rational union example", ok, f"iso {lines.get('iso')}, stages {stages}, {dt:.3f}s")
    assert ok


def test_unliftable_split():
    code, out = cli("examples", "ex42", "--verify-witness")
    lines = dict(l.split(": ", 1) for l in out.splitlines() if ": " in l)
    levels = [k for k in lines if k.startswith("split_witness.levels.")]
    ok = (code == 0 and lines.get("split") == "CertifiedYes" and len(levels) == 9
          and lines.get("lift") == "CertifiedNo" and lines.get("lift_certificate") == "hom-vanishing"
          and lines.get("witness_verified") == "true")
    record(8, "unliftable split example", ok,
           f"split {lines.get('split')} on {len(levels)} levels, lift {lines.get('lift')}")
    assert ok


def test_epi_beta_kernels_vanish():
    rng = random.Random(9)
    fails = 0
    for _ in range(100):
        beta = random_epi(rng)
        t = random_mono_tower(rng, 6)
        fails += not (t.mono and all(k.is_trivial() for k in truncated_phi_kernels(beta, t, 6)))
    record(9, "epi beta over direct unions", fails == 0, f"{fails} failures in 100")
    assert fails == 0


def test_partial_sums_match_splitting():
    rng = random.Random(10)
    disagree, nonempty = 0, 0
    for _ in range(100):
        n = rng.randint(1, 5)
        beta, fam, sigma = random_nonsplit_sigma(rng, n)
        epi = phi_verdict(beta, direct_sum_as_tower(fam), n - 1).epi
        F = criteria.minimal_split_set(beta, fam, sigma)
        nonempty += bool(F)
        same = epi.yes == (F is not None) and all(
            criteria.dev_class_from_partial_sum(beta, fam, sigma, S)
            == criteria.splitting_small_check(beta, fam, sigma, S).verdict.yes
            for S in criteria.subsets_smallest_first(n))
        disagree += not same
    record(10, "partial sums versus pushout splitting", disagree == 0,
           f"{disagree} disagreements in 100, {nonempty} needing a nonempty F")
    assert disagree == 0


def test_fp_source_epi_at_window_one():
    rng = random.Random(11)
    fails = 0
    for _ in range(100):
        L, P = random_group(rng, 3, 5), random_group(rng, 3, 5)
        r = phi_verdict(random_morphism(rng, L, P), random_mono_tower(rng, 3), 1)
        fails += not (r.epi.yes and r.epi.verify())
    record(11, "finitely presented source", fails == 0, f"{fails} failures in 100")
    assert fails == 0


def test_selftest_is_deterministic():
    a = cli("selftest", "--seed", "7")
    b = cli("selftest", "--seed", "7")
    proc = subprocess.run([sys.executable, "-m", "defectkit", "selftest", "--seed", "7"],
                          capture_output=True, text=True)
    ok = a == b and a[0] == 0 and proc.stdout == a[1] and proc.returncode == 0
    record(12, "determinism", ok, f"{len(a[1])} bytes, identical in-process and in a fresh process")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
