"""Measures on Z_p through their Fourier-Stieltjes transforms, partial Fourier
sums, and the A_q example on Z_2 with its two-topology limit function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .base import Config, ZpPoint, bit_length, ones_count
from .cyclo import CycloNum, lincomb
from .dualgroup import PHat, parse_phat, phat_make, phat_zero
from .fourier import DualFn, LCFn, character, fourier_fwd, resolve_ctx, value_from_json, value_to_json
from .qadic import FieldCtx, from_exact, valuation

Scalar = Union[int, Fraction, CycloNum]


def _cy(c: Scalar, p: int) -> CycloNum:
    return c if isinstance(c, CycloNum) else CycloNum.rational(Fraction(c), p)


# -- base transforms ---------------------------------------------------------------


@dataclass(frozen=True)
class DiracZero:
    """The indicator 1_0 on the dual group."""

    def __call__(self, t: PHat) -> CycloNum:
        return CycloNum.one(t.p) if not t else CycloNum.zero(t.p)

    def to_json(self) -> dict:
        return {"kind": "dirac_zero"}


@dataclass(frozen=True)
class AqProduct:
    """The transform A_q^ on the dual of Z_2."""

    q: int

    def __call__(self, t: PHat) -> CycloNum:
        return aq_hat(t, self.q)

    def to_json(self) -> dict:
        return {"kind": "aq_product", "q": self.q}


@dataclass(frozen=True)
class Table:
    """A finitely supported transform."""

    table: DualFn = field(compare=False)

    def __call__(self, t: PHat) -> CycloNum:
        return self.table(t)

    def __eq__(self, other):
        return isinstance(other, Table) and self.table == other.table

    def __hash__(self):
        return hash(tuple(self.table.support.items()))

    def to_json(self) -> dict:
        return {"kind": "table", **self.table.to_json()}


@dataclass(frozen=True)
class PointMass:
    """The point mass at a, whose transform is t -> e^{-2 pi i {t a}_p}; at a = 0 it is identically 1."""

    a: ZpPoint

    def __call__(self, t: PHat) -> CycloNum:
        return character(-t, self.a)

    def to_json(self) -> dict:
        return {"kind": "point_mass", "a": self.a.to_json()}


Base = Union[DiracZero, AqProduct, Table, PointMass]


def base_from_json(obj: dict, p: int) -> Base:
    kind = obj.get("kind")
    if kind == "dirac_zero":
        return DiracZero()
    if kind == "aq_product":
        if p != 2:
            raise ValueError("the A_q product lives on the dual of Z_2")
        return AqProduct(int(obj["q"]))
    if kind == "table":
        return Table(DualFn.from_json(obj, p))
    if kind == "point_mass":
        return PointMass(ZpPoint.from_json(obj["a"], p))
    raise ValueError(f"unknown base kind {kind!r}")


@lru_cache(maxsize=1 << 16)
def _aq_hat(k: int, n: int, q: int) -> CycloNum:
    if n == 0:
        return CycloNum.one(2)
    rest = _aq_hat(*_double(k, n), q)
    factor = lincomb(2, [(CycloNum.rational(Fraction(1, 4), 2), 0, 0), (CycloNum.rational(Fraction(q, 4), 2), n, -k)])
    return factor * rest


def _double(k: int, n: int) -> tuple[int, int]:
    t = phat_make(2 * k, n, 2)
    return t.k, t.n


def aq_hat(t: PHat, q: int) -> CycloNum:
    """A_q^(t) = prod_{m < -v_2(t)} (1 + q e^{-2 pi i 2^m t}) / 4, and 1 at t = 0."""
    if t.p != 2:
        raise ValueError("A_q^ is defined on the dual of Z_2")
    return _aq_hat(t.k, t.n, q)


# -- measure transforms as term lists ---------------------------------------------


@dataclass(frozen=True)
class Term:
    coeff: CycloNum
    shift: PHat
    base: Base


class MeasureHat:
    """t -> sum of coeff * base(t - shift) over the terms."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Iterable[tuple[Scalar, PHat, Base]]):
        self.p = p
        ts = []
        for c, s, b in terms:
            if s.p != p:
                raise ValueError("mismatched p")
            if isinstance(b, AqProduct) and p != 2:
                raise ValueError("the A_q product lives on the dual of Z_2")
            c = _cy(c, p)
            if not c.is_zero():
                ts.append(Term(c, s, b))
        self.terms = tuple(ts)

    @classmethod
    def of(cls, base: Base, p: int, coeff: Scalar = 1) -> "MeasureHat":
        return cls(p, [(coeff, phat_zero(p), base)])

    @classmethod
    def dirac_zero(cls, p: int) -> "MeasureHat":
        return cls.of(DiracZero(), p)

    @classmethod
    def aq(cls, q: int) -> "MeasureHat":
        return cls.of(AqProduct(q), 2)

    @classmethod
    def table(cls, F: DualFn) -> "MeasureHat":
        return cls.of(Table(F), F.p)

    @classmethod
    def point_mass(cls, a: ZpPoint) -> "MeasureHat":
        return cls.of(PointMass(a), a.p)

    def evaluate(self, t: PHat) -> CycloNum:
        parts = []
        for term in self.terms:
            v = term.base(t - term.shift if term.shift else t)
            if not v.is_zero():
                parts.append(v if term.coeff == 1 else term.coeff * v)
        if len(parts) == 1:
            return parts[0]
        return lincomb(self.p, [(v, 0, 0) for v in parts])

    __call__ = evaluate

    def __add__(self, other: "MeasureHat") -> "MeasureHat":
        return MeasureHat(self.p, [(t.coeff, t.shift, t.base) for t in self.terms + other.terms])

    def __neg__(self) -> "MeasureHat":
        return self.scale(-1)

    def __sub__(self, other: "MeasureHat") -> "MeasureHat":
        return self + (-other)

    def scale(self, c: Scalar) -> "MeasureHat":
        c = _cy(c, self.p)
        return MeasureHat(self.p, [(c * t.coeff, t.shift, t.base) for t in self.terms])

    def translate(self, s: PHat) -> "MeasureHat":
        """tau_s: t -> mu^(t + s)."""
        return MeasureHat(self.p, [(t.coeff, t.shift - s, t.base) for t in self.terms])

    def minus_dirac(self, c: Scalar) -> "MeasureHat":
        """mu^ - c * 1_0."""
        return self - MeasureHat.dirac_zero(self.p).scale(c)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "terms": [{"coeff": value_to_json(t.coeff), "shift": str(t.shift), "base": t.base.to_json()} for t in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict, p: int | None = None) -> "MeasureHat":
        p = int(obj.get("p", p if p is not None else 0))
        if p is None or p < 2:
            raise ValueError("measure JSON needs a prime p")
        terms = []
        for e in obj["terms"]:
            terms.append((value_from_json(e.get("coeff", "1"), p), parse_phat(str(e.get("shift", "0")), p), base_from_json(e["base"], p)))
        return cls(p, terms)

    def __repr__(self) -> str:
        return f"MeasureHat(p={self.p}, terms={list(self.terms)})"


def measure_eval(mu: MeasureHat, t: PHat) -> CycloNum:
    return mu.evaluate(t)


def measure_convolve_dual(mu: MeasureHat, eta: DualFn) -> MeasureHat:
    """t -> sum_s eta(s) mu^(t - s), again a term list."""
    terms = []
    for s, v in eta.items():
        for term in mu.terms:
            terms.append((v * term.coeff, term.shift + s, term.base))
    return MeasureHat(mu.p, terms)


@dataclass
class MeasureProduct:
    """Transform of a convolution of measures: the pointwise product of the factors' transforms."""

    factors: tuple

    @property
    def p(self) -> int:
        return self.factors[0].p

    def evaluate(self, t: PHat) -> CycloNum:
        acc = CycloNum.one(self.p)
        for f in self.factors:
            acc = acc * f.evaluate(t)
            if acc.is_zero():
                break
        return acc

    __call__ = evaluate


def conv_measures(mu, nu) -> MeasureProduct:
    if mu.p != nu.p:
        raise ValueError("mismatched p")
    fs = []
    for m in (mu, nu):
        fs.extend(m.factors if isinstance(m, MeasureProduct) else (m,))
    return MeasureProduct(tuple(fs))


def integrate_against(f: LCFn, mu) -> CycloNum:
    """The integral of f against mu, as the finite sum of f^(s) mu^(-s) over the support of f^."""
    acc = CycloNum.zero(f.p)
    for s, v in fourier_fwd(f).items():
        w = mu.evaluate(-s)
        if not w.is_zero():
            acc = acc + v * w
    return acc


# -- partial Fourier sums ------------------------------------------------------------


def _as_point(z, p: int) -> ZpPoint:
    return z if isinstance(z, ZpPoint) else ZpPoint.from_int(int(z), p)


def mu_tilde(mu, z, N: int, method: str = "auto") -> CycloNum:
    """The partial sum of mu^(t) e^{2 pi i {t z}_p} over |t|_p <= p^N.

    ``method="sum"`` always evaluates the literal sum over the ball.  With
    ``"auto"`` an A_q term whose shift lies inside the ball is evaluated by its
    closed form (a rational times a root of unity), which keeps large N cheap.
    """
    p = mu.p
    z = _as_point(z, p)
    if method not in ("auto", "sum"):
        raise ValueError(f"unknown method {method!r}")
    if method == "sum" or not isinstance(mu, MeasureHat):
        return _ball_sum(mu.evaluate, p, z, N)
    acc = CycloNum.zero(p)
    rest = []
    for term in mu.terms:
        if isinstance(term.base, AqProduct) and term.shift.n <= N:
            S = CycloNum.rational(aq_partial_closed(z, N, term.base.q), 2)
            acc = acc + term.coeff * character(term.shift, z) * S
        else:
            rest.append(term)
    if rest:
        sub = MeasureHat(p, [(t.coeff, t.shift, t.base) for t in rest])
        acc = acc + _ball_sum(sub.evaluate, p, z, N)
    return acc


def _ball_sum(ev, p: int, z: ZpPoint, N: int) -> CycloNum:
    zN = z.truncate(N)
    terms = []
    for k in range(p**N):
        t = phat_make(k, N, p)
        v = ev(t)
        if not v.is_zero():
            terms.append((v, N, k * zN))
    return lincomb(p, terms)


def aq_partial_closed(z, N: int, q: int) -> Fraction:
    """q^{#1([z]_{2^N})}/2^N - (q-3)/4 * sum_{n<N} q^{#1([z]_{2^n})}/2^n."""
    z = _as_point(z, 2)
    if z.p != 2:
        raise ValueError("the A_q closed form lives on Z_2")
    tail = sum(Fraction(q ** ones_count(z.truncate(n)), 2**n) for n in range(N))
    return Fraction(q ** ones_count(z.truncate(N)), 2**N) - Fraction(q - 3, 4) * tail


@dataclass(frozen=True)
class TaggedLimit:
    """A limit value together with the topology in which it was taken.

    ``topology`` is ``"archimedean"`` (convergence in C), ``"q-adic"``
    (convergence in C_q), or ``"exact"`` when the partial sums are eventually
    constant, so both notions agree.
    """

    topology: str
    value: CycloNum

    @property
    def rational(self) -> Fraction | None:
        return self.value.as_rational()

    def qadic(self, ctx: FieldCtx):
        if self.topology == "archimedean":
            raise ValueError("an archimedean limit has no q-adic meaning")
        return from_exact(self.value, ctx)

    def to_json(self) -> dict:
        return {"topology": self.topology, "value": value_to_json(self.value)}


def aq_tilde(z, q: int) -> TaggedLimit:
    """The pointwise limit of the A_q partial sums.

    Points of N_0 get the real limit; other eventually periodic points get the
    q-adic limit, a geometric series summed in closed form.
    """
    z = _as_point(z, 2)
    c = Fraction(q - 3, 4)
    if z.is_natural:
        m = z.value
        lam = bit_length(m)
        head = sum(Fraction(q ** ones_count(z.truncate(n)), 2**n) for n in range(lam))
        val = -Fraction(q - 3, 2) * Fraction(q ** ones_count(m), 2**lam) - c * head
        return TaggedLimit("archimedean", CycloNum.rational(val, 2))
    r, L = len(z.pre), len(z.period)
    w = sum(z.period)
    head = sum(Fraction(q ** ones_count(z.truncate(n)), 2**n) for n in range(r))
    cr = ones_count(z.truncate(r))
    block = sum(Fraction(q ** (cr + sum(z.period[:i])), 2 ** (r + i)) for i in range(L))
    ratio = Fraction(q**w, 2**L)
    val = -c * (head + block / (1 - ratio))
    return TaggedLimit("q-adic", CycloNum.rational(val, 2))


def _base_limit(base: Base, z: ZpPoint) -> TaggedLimit | None:
    p = z.p
    if isinstance(base, DiracZero):
        return TaggedLimit("exact", CycloNum.one(p))
    if isinstance(base, Table):
        F = base.table
        acc = CycloNum.zero(p)
        for t, v in F.items():
            acc = acc + v * character(t, z)
        return TaggedLimit("exact", acc)
    if isinstance(base, AqProduct):
        return aq_tilde(z, base.q)
    if isinstance(base, PointMass):
        return TaggedLimit("exact", CycloNum.zero(p)) if base.a != z else None
    raise TypeError(f"unknown base {base!r}")


_RANK = {"exact": 0, "q-adic": 1, "archimedean": 1}


def certified_limit(mu: MeasureHat, z) -> TaggedLimit | None:
    """Closed-form limit of mu_tilde(mu, z, N) as N grows, or None if none is known.

    A shifted term contributes e^{2 pi i {s z}_p} times its base's limit, since
    re-indexing the ball by t -> t - s is a bijection once |s|_p <= p^N.
    """
    z = _as_point(z, mu.p)
    topology = "exact"
    acc = CycloNum.zero(mu.p)
    for term in mu.terms:
        lim = _base_limit(term.base, z)
        if lim is None:
            return None
        if lim.topology != "exact":
            if topology != "exact" and topology != lim.topology:
                return None
            topology = lim.topology
        acc = acc + term.coeff * character(term.shift, z) * lim.value
    return TaggedLimit(topology, acc)


@dataclass
class CauchyReport:
    z: ZpPoint
    rows: list[tuple[int, float]]
    verdict: str

    def to_json(self) -> dict:
        return {
            "z": self.z.to_json(),
            "increments": [{"N": n, "valuation": None if v == math.inf else v} for n, v in self.rows],
            "verdict": self.verdict,
        }


def cauchy_report(mu, z, N_max: int, where: Config | FieldCtx, method: str = "auto") -> CauchyReport:
    """Valuations of mu_tilde_{N+1}(z) - mu_tilde_N(z) for N < N_max, with an observational verdict.

    The verdict reads "q-adically Cauchy (observed)" when the valuations are
    strictly increasing over the final half of the range (exact zeros count
    as increasing) and "not Cauchy (observed)" otherwise.  It is never a proof.
    """
    z = _as_point(z, mu.p)
    sums = [mu_tilde(mu, z, N, method) for N in range(N_max + 1)]
    rows = []
    for N in range(N_max):
        inc = sums[N + 1] - sums[N]
        if inc.is_zero():
            rows.append((N, math.inf))
            continue
        ctx = resolve_ctx(where, inc.N)
        rows.append((N, valuation(inc, ctx)))
    tail = [v for _, v in rows[len(rows) // 2 :]]
    ok = all(b == math.inf or b > a for a, b in zip(tail, tail[1:]))
    verdict = "q-adically Cauchy (observed)" if ok else "not Cauchy (observed)"
    return CauchyReport(z, rows, verdict)


@dataclass
class AttainmentRow:
    z: ZpPoint
    limit: TaggedLimit | None
    attained: bool
    cauchy: CauchyReport


@dataclass
class AttainmentReport:
    c: CycloNum
    rows: list[AttainmentRow]

    @property
    def attaining(self) -> list[ZpPoint]:
        return [r.z for r in self.rows if r.attained]

    @property
    def conclusion(self) -> str:
        qpts = [r.z for r in self.rows if r.attained and r.limit.topology != "archimedean"]
        if qpts:
            pts = ", ".join(str(z) for z in qpts)
            return f"not dense: translates of mu^ - c*1_0 span a non-dense subspace (limit equals c at {pts})"
        return "no conclusion: no candidate attains c (a scan is not a density proof)"

    def to_json(self) -> dict:
        return {
            "c": value_to_json(self.c),
            "rows": [
                {
                    "z": r.z.to_json(),
                    "limit": None if r.limit is None else r.limit.to_json(),
                    "attained": r.attained,
                    "verdict": r.cauchy.verdict,
                }
                for r in self.rows
            ],
            "attaining": [z.to_json() for z in self.attaining],
            "conclusion": self.conclusion,
        }


def value_attainment_scan(mu: MeasureHat, c: Scalar, candidates: Iterable, N_max: int, where: Config | FieldCtx) -> AttainmentReport:
    """For each candidate z, compare the closed-form limit of mu's partial sums at z with c."""
    c = _cy(c, mu.p)
    shifted = mu.minus_dirac(c)
    rows = []
    for z in candidates:
        z = _as_point(z, mu.p)
        lim = certified_limit(mu, z)
        attained = lim is not None and lim.value == c
        rows.append(AttainmentRow(z, lim, attained, cauchy_report(shifted, z, N_max, where)))
    return AttainmentReport(c, rows)
