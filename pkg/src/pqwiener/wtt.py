"""Finite-level checks of the Tauberian theorems and their proof machinery.

For a locally constant chi of level N, the translates of chi^ restricted to
the ball of radius p^N form a p^N x p^N circulant whose eigenvalues are the
values of chi, so zero-freeness, full rank and the existence of a
convolution inverse can be compared exactly.  In the measure case the module
builds the certificate used in the non-density direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .base import Config, ZpPoint
from .cyclo import CycloNum, lincomb
from .dualgroup import PHat, enumerate_ball
from .fourier import (
    DualFn,
    LCFn,
    character,
    conv_dual,
    fourier_fwd,
    fourier_inv,
    min_valuation,
    resolve_ctx,
    value_to_json,
)
from .measures import MeasureHat, _ball_sum, certified_limit, measure_convolve_dual, mu_tilde
from .qadic import FieldCtx, abs_q, valuation


class NotInvertibleError(ArithmeticError):
    pass


class PreconditionError(ValueError):
    pass


def exact_rank(rows: list[list[CycloNum]]) -> int:
    """Rank by Gaussian elimination over the cyclotomic field."""
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if not m[i][col].is_zero()), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        prow = [x * inv for x in m[rank]]
        m[rank] = prow
        for i in range(len(m)):
            if i != rank and not m[i][col].is_zero():
                c = m[i][col]
                m[i] = [a - c * b if not b.is_zero() else a for a, b in zip(m[i], prow)]
        rank += 1
    return rank


def translate_matrix(F: DualFn, N: int) -> list[list[CycloNum]]:
    """A[s][t] = F(t - s) for s, t in the ball of radius p^N."""
    ball = enumerate_ball(N, F.p)
    return [[F(t - s) for t in ball] for s in ball]


@dataclass
class WttContinuousReport:
    level: int
    zero_set: list[int]
    dft_values: list[CycloNum]
    rank: int
    circulant_rank_full: bool
    inverse_transform: DualFn | None
    inverse_verified: bool | None
    note: str = "finite-level circulant projection of the translate-span test"

    @property
    def consistent(self) -> bool:
        a = not self.zero_set
        return a == self.circulant_rank_full == (self.inverse_transform is not None) and self.inverse_verified is not False

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "zero_set": self.zero_set,
            "dft_values": [value_to_json(v) for v in self.dft_values],
            "rank": self.rank,
            "circulant_rank_full": self.circulant_rank_full,
            "inverse_transform": None if self.inverse_transform is None else self.inverse_transform.to_json(),
            "inverse_verified": self.inverse_verified,
            "consistent": self.consistent,
            "note": self.note,
        }


def conv_inverse_dual(F: DualFn) -> DualFn:
    """The convolution inverse of F: the transform of the reciprocal of its inverse transform."""
    chi = fourier_inv(F)
    zeros = chi.zeros()
    if zeros:
        raise NotInvertibleError("not invertible: chi vanishes at residue " + ", ".join(map(str, zeros)))
    G = fourier_fwd(chi.reciprocal())
    if conv_dual(F, G) != DualFn.one_zero(F.p):
        raise ArithmeticError("convolution inverse failed verification")
    return G


def wtt_continuous_check(chi: LCFn) -> WttContinuousReport:
    N = chi.level
    F = fourier_fwd(chi)
    zero_set = chi.zeros()
    rank = exact_rank(translate_matrix(F, N))
    full = rank == chi.p**N
    inv, ok = None, None
    if not zero_set:
        G = fourier_fwd(chi.reciprocal())
        ok = conv_dual(F, G) == DualFn.one_zero(chi.p)
        inv = G
    return WttContinuousReport(N, zero_set, list(chi.values), rank, full, inv, ok)


# -- three-convolution estimate --------------------------------------------------


def _window(F: DualFn, n: float, ctx: FieldCtx) -> Fraction:
    return abs_q(min_valuation([v for t, v in F.items() if t.n <= n], ctx), ctx.q)


def _needed_level(*objs: DualFn) -> int:
    lv = 0
    for F in objs:
        for t, v in F.items():
            lv = max(lv, t.n, v.N)
    return lv


@dataclass
class LemmaCheck:
    first: bool
    second: bool
    norms: dict = field(default_factory=dict)


def lemma_estimates_check(phi: DualFn, f: DualFn, g: DualFn, M: int, N: int, where: Config | FieldCtx) -> LemmaCheck:
    """Evaluate both sides of the two windowed-norm inequalities for phi * f and phi * f * g."""
    if phi.level > N or g.level > M:
        raise PreconditionError("hypothesis violated: support exceeds declared ball")
    pf = conv_dual(phi, f)
    pfg = conv_dual(pf, g)
    ctx = resolve_ctx(where, _needed_level(phi, f, g, pf, pfg))
    big = max(M, N)
    n = {
        "phi_f_M": _window(pf, M, ctx),
        "phi_sup": _window(phi, math.inf, ctx),
        "f_max": _window(f, big, ctx),
        "phi_f_g_M": _window(pfg, M, ctx),
        "phi_f_max": _window(pf, big, ctx),
        "g_sup": _window(g, math.inf, ctx),
    }
    first = n["phi_f_M"] <= n["phi_sup"] * n["f_max"]
    second = n["phi_f_g_M"] <= n["phi_f_max"] * n["g_sup"]
    return LemmaCheck(first, second, n)


# -- proof objects for the measure theorem ----------------------------------------


def build_phi_N(z0: ZpPoint, N: int) -> DualFn:
    """t -> 1_0(p^N t) e^{-2 pi i {t z0}_p}: the characters of z0, cut to the ball of radius p^N."""
    return DualFn(z0.p, {t: character(-t, z0) for t in enumerate_ball(N, z0.p)})


def _conv_with_phi(mu, z0: ZpPoint, N: int, tau: PHat) -> CycloNum:
    # (mu^ * phi_N)(tau) = sum over s in the ball of phi_N(s) mu^(tau - s)
    p = z0.p
    zN = z0.truncate(N)
    terms = []
    for s in enumerate_ball(N, p):
        v = mu.evaluate(tau - s)
        if not v.is_zero():
            terms.append((v, N, -(s.k * p ** (N - s.n)) * zN))
    return lincomb(p, terms)


def phi_conv_identity_check(mu, z0: ZpPoint, tau: PHat, N: int) -> bool:
    """(mu^ * phi_N)(tau) == e^{-2 pi i {tau z0}_p} * mu_tilde_N(z0), both sides from literal sums."""
    if N < tau.n:
        raise PreconditionError("N must be at least -v_p(tau)")
    lhs = _conv_with_phi(mu, z0, N, tau)
    rhs = character(-tau, z0) * _ball_sum(mu.evaluate, mu.p, z0, N)
    return lhs == rhs


def truncate_dual(eta: DualFn, M: int) -> DualFn:
    """1_0(p^M t) eta(t)."""
    return eta.restrict(M)


def m0_bound(eta: DualFn) -> int:
    """Least M with truncate_dual(eta, M) == eta."""
    return eta.level


def claim2_check(eta: DualFn, mu: MeasureHat, M: int, window: int) -> bool:
    """mu^ convolved with the truncation of eta agrees with mu^ * eta on the ball of radius p^window."""
    a = measure_convolve_dual(mu, truncate_dual(eta, M))
    b = measure_convolve_dual(mu, eta)
    return all(a.evaluate(t) == b.evaluate(t) for t in enumerate_ball(window, mu.p))


def phi_conv_window_norms(mu, z0: ZpPoint, N: int, where: Config | FieldCtx) -> list[Fraction]:
    """[||phi_N * mu^||_{p^m, q} for m = 0..N], each by direct evaluation."""
    p = z0.p
    vals = {t: _conv_with_phi(mu, z0, N, t) for t in enumerate_ball(N, p)}
    ctx = resolve_ctx(where, max([N] + [v.N for v in vals.values()]))
    out = []
    for m in range(N + 1):
        out.append(abs_q(min_valuation([v for t, v in vals.items() if t.n <= m], ctx), ctx.q))
    return out


# -- non-density witness --------------------------------------------------------------


@dataclass
class NondensityWitness:
    z0: ZpPoint
    combo: list[tuple[CycloNum, PHat]]
    N_star: int
    f_z0: CycloNum
    mu_tilde_N: CycloNum
    windowed_max: Fraction
    identity_ok: bool
    verdict: bool

    def to_json(self) -> dict:
        return {
            "z0": self.z0.to_json(),
            "combo": [{"coeff": value_to_json(c), "shift": str(s)} for c, s in self.combo],
            "N_star": self.N_star,
            "f_z0": value_to_json(self.f_z0),
            "mu_tilde_N_star": value_to_json(self.mu_tilde_N),
            "windowed_max": str(self.windowed_max),
            "identity_ok": self.identity_ok,
            "verdict": self.verdict,
        }


def nondensity_witness(
    mu: MeasureHat,
    z0: ZpPoint,
    combo: Sequence[tuple],
    where: Config | FieldCtx,
    max_level: int | None = None,
) -> NondensityWitness:
    """Certificate that 1_0 stays at distance >= 1 from sum c_m mu^(. - t_m).

    Needs a closed-form zero limit of the partial sums of mu at z0.  The level
    N* is the first one covering every shift at which |f(z0) mu_tilde_N*(z0)|_q < 1,
    where f(z) = sum c_m e^{2 pi i {t_m z}_p}.  On that ball the windowed
    values of 1_0 - eta^ * mu^ pair with the characters of z0 to give exactly
    1 - f(z0) mu_tilde_N*(z0), a q-adic unit, so one of them must be a unit too.
    """
    p = mu.p
    if not isinstance(z0, ZpPoint):
        z0 = ZpPoint.from_int(int(z0), p)
    lim = certified_limit(mu, z0)
    if lim is None or lim.topology == "archimedean" or not lim.value.is_zero():
        raise PreconditionError("precondition unverified: mu_tilde(z0) limit not certified zero")
    combo = [(c if isinstance(c, CycloNum) else CycloNum.rational(Fraction(c), p), s) for c, s in combo]
    eta = DualFn(p, [(s, c) for c, s in combo])
    f_z0 = CycloNum.zero(p)
    for c, s in combo:
        f_z0 = f_z0 + c * character(s, z0)
    if max_level is None:
        max_level = where.max_level if isinstance(where, Config) else where.N
    start = max([0] + [s.n for _, s in combo])
    N_star, mt = None, None
    for N in range(start, max_level + 1):
        mt = mu_tilde(mu, z0, N)
        prod = f_z0 * mt
        if prod.is_zero() or valuation(prod, resolve_ctx(where, prod.N)) >= 1:
            N_star = N
            break
    if N_star is None:
        raise PreconditionError(f"no level up to {max_level} makes |f(z0) mu_tilde_N(z0)|_q < 1")
    G = measure_convolve_dual(mu, eta)
    ball = enumerate_ball(N_star, p)
    diff = {t: (CycloNum.one(p) if not t else CycloNum.zero(p)) - G.evaluate(t) for t in ball}
    ctx = resolve_ctx(where, max([N_star] + [v.N for v in diff.values()]))
    wmax = abs_q(min_valuation(diff.values(), ctx), ctx.q)
    zN = z0.truncate(N_star)
    paired = lincomb(p, [(v, N_star, t.k * p ** (N_star - t.n) * zN) for t, v in diff.items()])
    identity_ok = paired == CycloNum.one(p) - f_z0 * mt
    return NondensityWitness(z0, combo, N_star, f_z0, mt, wmax, identity_ok, wmax >= 1)
