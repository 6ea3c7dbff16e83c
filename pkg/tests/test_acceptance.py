"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (shown in the pytest terminal summary) and
enforces its runtime budget.  Run ``python tests/test_acceptance.py`` to print
the lines without pytest.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE  # noqa: E402

from pqwiener.base import Config, ZpPoint, ones_count  # noqa: E402
from pqwiener.cyclo import cy_root  # noqa: E402
from pqwiener.dualgroup import enumerate_ball, phat_make, phat_zero  # noqa: E402
from pqwiener.fourier import (  # noqa: E402
    DualFn,
    LCFn,
    character_fn,
    conv_dual,
    conv_zp,
    fourier_fwd,
    fourier_inv,
    haar_integral,
    norm_dual_sup,
    norm_dual_window,
    norm_fn,
    parseval,
    to_numeric,
)
from pqwiener.measures import MeasureHat, aq_partial_closed, aq_tilde, mu_tilde, value_attainment_scan  # noqa: E402
from pqwiener.qadic import from_exact, qval, vq_rational  # noqa: E402
from pqwiener.wtt import (  # noqa: E402
    NotInvertibleError,
    build_phi_N,
    claim2_check,
    conv_inverse_dual,
    lemma_estimates_check,
    m0_bound,
    nondensity_witness,
    phi_conv_identity_check,
    phi_conv_window_norms,
    truncate_dual,
    wtt_continuous_check,
)

MINUS_ONE = ZpPoint.from_int(-1, 2)


def _run(k: int, title: str, budget: float, fn) -> None:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    in_time = dt < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {k}: {title} ({detail}; {dt:.2f}s of {budget:g}s)"
    ACCEPTANCE[k] = line
    print(line)
    assert ok, line
    assert in_time, line


# 1 -------------------------------------------------------------------------------


def criterion_1():
    checked = 0
    for p in (2, 3):
        for q in (5, 7):
            ctx = Config(p, q).field(3)
            for t in enumerate_ball(3, p):
                chi = character_fn(t, 3)
                expected = 1 if not t else 0
                if haar_integral(chi) != expected:
                    return False, f"exact failure at p={p}, t={t}"
                if not haar_integral(to_numeric(chi, ctx)).equals(ctx.from_rational(expected)):
                    return False, f"numeric failure at p={p}, q={q}, t={t}"
                checked += 1
    return True, f"{checked} (p, q, t) cases exact"


def test_criterion_1_orthogonality():
    _run(1, "character orthogonality", 1.0, criterion_1)


# 2 -------------------------------------------------------------------------------


def _random_lcfn(rng, p, q):
    N = rng.randint(0, 3)
    vals = []
    for _ in range(p**N):
        e = rng.choice([0, 0, 0, 1, 2, -1])
        vals.append(Fraction(rng.randint(-20, 20), rng.choice([1, 2, 3])) * Fraction(q) ** e)
    return LCFn(p, vals)


def criterion_2():
    rng = random.Random(20240501)
    n = 0
    for p in (2, 3):
        for q in (5, 7):
            ctx = Config(p, q, precision=64).field(3)
            for _ in range(100):
                f, g = _random_lcfn(rng, p, q), _random_lcfn(rng, p, q)
                F, G = fourier_fwd(f), fourier_fwd(g)
                if fourier_inv(F) != f:
                    return False, "round-trip"
                if fourier_fwd(f * g) != conv_dual(F, G):
                    return False, "F(fg) = F(f) * F(g)"
                if fourier_fwd(conv_zp(f, g)) != F * G:
                    return False, "F(f * g) = F(f) F(g)"
                if parseval(f, g) != haar_integral(f * g):
                    return False, "parseval"
                if norm_fn(f, ctx) != norm_dual_sup(F, ctx):
                    return False, "isometry"
                n += 1
    return True, f"{n} random pairs, all five identities exact"


def test_criterion_2_isomorphism_suite():
    _run(2, "isometric algebra isomorphism suite", 30.0, criterion_2)


# 3 -------------------------------------------------------------------------------


def criterion_3():
    rng = random.Random(7)
    n = 0
    for q in (5, 7):
        mu = MeasureHat.aq(q)
        for N in range(9):
            residues = range(2**N) if N <= 6 else rng.sample(range(2**N), 32)
            for z in residues:
                r = mu_tilde(mu, z, N, method="sum").as_rational()
                if r is None:
                    return False, f"t-sum not rational at q={q}, N={N}, z={z}"
                if r != aq_partial_closed(z, N, q):
                    return False, f"mismatch at q={q}, N={N}, z={z}"
                n += 1
    return True, f"{n} (q, N, z) cases"


def test_criterion_3_aq_partial_sums():
    _run(3, "A_q partial-sum identity", 60.0, criterion_3)


# 4 -------------------------------------------------------------------------------


def criterion_4():
    q = 5
    ctx = Config(2, q, precision=64).field(0)
    # (a) the limit at -1 from the closed-form geometric sum, and by truncation
    lim = aq_tilde(MINUS_ONE, q)
    if lim.topology != "q-adic" or lim.rational != Fraction(1, 3):
        return False, f"closed-form limit {lim}"
    for K in range(1, 33):
        trunc = -Fraction(q - 3, 4) * sum(Fraction(q ** ones_count(MINUS_ONE.truncate(n)), 2**n) for n in range(K))
        if vq_rational(trunc - Fraction(1, 3), q) < K:
            return False, f"truncation oracle disagrees at K={K}"
    mu = MeasureHat.aq(q)
    L = lim.qadic(ctx)
    for N in range(33):
        d = from_exact(mu_tilde(mu, MINUS_ONE, N), ctx) - L
        v = qval(d)
        if not isinstance(v, int) or v < N:
            return False, f"valuation {v} < {N}"
        if N <= 8 and mu_tilde(mu, MINUS_ONE, N, method="sum") != mu_tilde(mu, MINUS_ONE, N):
            return False, f"t-sum differs at N={N}"
    # (b) archimedean branch: partial sums approach the limit at the exact rate
    for m in (1, 2, 3):
        L = aq_tilde(m, q)
        if L.topology != "archimedean":
            return False, f"z={m} not archimedean"
        lam = m.bit_length()
        for N in range(lam, lam + 9):
            gap = aq_partial_closed(m, N, q) - L.rational
            if gap != Fraction(q ** ones_count(m) * (q - 1), 2 ** (N + 1)):
                return False, f"z={m}, N={N}"
    # (c) the value at 0
    for qq in (5, 7, 11, 13):
        if aq_tilde(0, qq).rational != -Fraction(qq - 3, 2):
            return False, f"value at 0 for q={qq}"
    return True, "limit 1/3 with valuation >= N to N=32; z in {1,2,3} archimedean; value at 0"


def test_criterion_4_mixed_topology():
    _run(4, "mixed-topology limits", 5.0, criterion_4)


# 5 -------------------------------------------------------------------------------


def _four_way(chi):
    rep = wtt_continuous_check(chi)
    zero_free = not rep.zero_set
    try:
        inv = conv_inverse_dual(fourier_fwd(chi))
        inv_ok = conv_dual(fourier_fwd(chi), inv) == DualFn.one_zero(chi.p)
    except NotInvertibleError:
        inv_ok = False
    return zero_free == rep.circulant_rank_full == inv_ok == bool(rep.inverse_verified)


def criterion_5():
    rng = random.Random(5)
    units = [1, 2, 3, 4, Fraction(1, 2), Fraction(3, 7), Fraction(5, 3)]
    disagreements, n = 0, 0
    for p in (2, 3):
        for N in (0, 1, 2):
            for pat in itertools.product([0, 1], repeat=p**N):
                chi = LCFn(p, [b * rng.choice(units) for b in pat])
                disagreements += not _four_way(chi)
                n += 1
    for i in range(200):
        p = (2, 3)[i % 2]
        N = rng.randint(0, 2)
        q = rng.choice([5, 7])
        vals = []
        for _ in range(p**N):
            if rng.random() < 0.5:
                vals.append(rng.randrange(q))
            else:
                vals.append(rng.choice(units) * cy_root(p, N, rng.randrange(p**N)))
        disagreements += not _four_way(LCFn(p, vals))
        n += 1
    return disagreements == 0, f"{n} functions, {disagreements} disagreements"


def test_criterion_5_continuous_wtt():
    _run(5, "continuous WTT four-way agreement", 30.0, criterion_5)


# 6 -------------------------------------------------------------------------------


def _spread_table(rng, p, q, level, size):
    out = {}
    for _ in range(size):
        t = phat_make(rng.randrange(p**level), level, p) if level else phat_zero(p)
        t = phat_make(t.k, t.n, p)
        e = rng.randint(-2, 4)
        c = Fraction(rng.choice([1, 2, 3, 4, 6]), rng.choice([1, 2])) * Fraction(q) ** e
        v = c * cy_root(p, rng.randint(0, 2), rng.randrange(p**2))
        if rng.random() < 0.3:
            v = v + Fraction(q) ** rng.randint(0, 3)
        out[t] = v
    return DualFn(p, out)


def criterion_6():
    rng = random.Random(6)
    violations = 0
    for i in range(200):
        p = (2, 3)[i % 2]
        q = (5, 7)[(i // 2) % 2]
        cfg = Config(p, q)
        M, N = rng.randint(0, 2), rng.randint(0, 2)
        phi = _spread_table(rng, p, q, N, rng.randint(1, 3))
        f = _spread_table(rng, p, q, rng.randint(0, 3), rng.randint(1, 4))
        g = _spread_table(rng, p, q, M, rng.randint(1, 3))
        if rng.random() < 0.2:
            phi = DualFn.one_zero(p)
        r = lemma_estimates_check(phi, f, g, M, N, cfg)
        violations += (not r.first) + (not r.second)
    return violations == 0, f"200 instances, {violations} violations"


def test_criterion_6_three_convolution_lemma():
    _run(6, "three-convolution estimate", 10.0, criterion_6)


# 7 -------------------------------------------------------------------------------


def criterion_7():
    rng = random.Random(77)
    cfg = Config(2, 5)
    A = MeasureHat.aq(5)
    measures = {"dirac": MeasureHat.dirac_zero(2), "aq": A, "aq-1/3": A.minus_dirac(Fraction(1, 3))}
    z0s = [MINUS_ONE, ZpPoint.nat(3, 2), ZpPoint.from_fraction(Fraction(1, 3), 2), ZpPoint.nat(0, 2)]
    for name, mu in measures.items():
        for _ in range(50):
            n = rng.randint(0, 4)
            tau = phat_make(rng.randrange(2**n), n, 2)
            N = rng.randint(tau.n, 6)
            if not phi_conv_identity_check(mu, rng.choice(z0s), tau, N):
                return False, f"claim 1 failed for {name}"
    ctx = cfg.field(4)
    for z0 in z0s:
        for N in range(5):
            phi = build_phi_N(z0, N)
            if any(norm_dual_window(phi, M, ctx) != 1 for M in range(5)):
                return False, f"phi_N norm at z0={z0}, N={N}"
    for _ in range(50):
        eta = DualFn(2, {phat_make(rng.randrange(16), rng.randint(0, 4), 2): rng.randint(1, 9) for _ in range(rng.randint(1, 4))})
        M0 = m0_bound(eta)
        if truncate_dual(eta, M0) != eta:
            return False, "M0 is not a truncation bound"
        for M in range(M0, M0 + 2):
            if not claim2_check(eta, A, M, 4):
                return False, "claim 2 truncation"
    mu = measures["aq-1/3"]
    for N in range(9):
        norms = phi_conv_window_norms(mu, MINUS_ONE, N, cfg)
        if any(x > Fraction(1, 5**N) for x in norms):
            return False, f"claim 3 decay at N={N}"
    return True, "claims 1-3 and phi_N norms"


def test_criterion_7_proof_machinery():
    _run(7, "proof-machinery identities", 30.0, criterion_7)


# 8 -------------------------------------------------------------------------------


def criterion_8():
    rng = random.Random(8)
    cfg = Config(2, 5)
    A = MeasureHat.aq(5)
    mu = A.minus_dirac(Fraction(1, 3))
    units = [1, 2, 3, 4, 6, 7, 8, 9, Fraction(1, 2), Fraction(3, 4)]
    good = 0
    for _ in range(50):
        combo = []
        for _ in range(3):
            n = rng.randint(0, 4)
            coeff = rng.choice(units) * cy_root(2, rng.randint(0, 2), rng.randrange(4))
            combo.append((coeff, phat_make(rng.randrange(2**n), n, 2)))
        w = nondensity_witness(mu, MINUS_ONE, combo, cfg)
        good += bool(w.verdict and w.identity_ok and w.windowed_max >= 1)
    rep = value_attainment_scan(A, Fraction(1, 3), [0, 1, 3, MINUS_ONE, ZpPoint.from_fraction(Fraction(1, 3), 2)], 8, cfg)
    scan_ok = rep.attaining == [MINUS_ONE] and rep.conclusion.startswith("not dense")
    return good == 50 and scan_ok, f"{good}/50 witnesses, scan attains 1/3 at -1: {scan_ok}"


def test_criterion_8_nondensity_witness():
    _run(8, "non-density witness", 20.0, criterion_8)


if __name__ == "__main__":
    failed = 0
    for k, fn in enumerate([test_criterion_1_orthogonality, test_criterion_2_isomorphism_suite,
                            test_criterion_3_aq_partial_sums, test_criterion_4_mixed_topology,
                            test_criterion_5_continuous_wtt, test_criterion_6_three_convolution_lemma,
                            test_criterion_7_proof_machinery, test_criterion_8_nondensity_witness], 1):
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
