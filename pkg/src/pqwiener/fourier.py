"""Locally constant functions on Z_p, finitely supported functions on the dual,
transforms between them, convolutions, translations and norms.

Values live in one of two backends.  Exact values are :class:`CycloNum`
(authoritative for identities); numeric values are :class:`QAdicNum` under a
fixed :class:`FieldCtx` (used for norms).  Norm functions map exact values
through the embedding on demand.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .base import Config, ZpPoint
from .cyclo import CycloNum, cy_root, lincomb
from .dualgroup import PHat, enumerate_ball, frac_mul, phat_make, phat_zero, parse_phat
from .qadic import FieldCtx, QAdicNum, abs_q, from_exact, valuation


# -- value helpers -------------------------------------------------------------


def _coerce(v, p: int, ctx: FieldCtx | None):
    if isinstance(v, (int, Fraction)):
        return CycloNum.rational(v, p) if ctx is None else ctx.from_rational(v)
    if isinstance(v, CycloNum) and ctx is not None:
        return from_exact(v, ctx)
    return v


def _is_zero(v) -> bool:
    if isinstance(v, QAdicNum):
        return v.exact_zero
    return v.is_zero()


def _zero(p: int, ctx: FieldCtx | None):
    return CycloNum.zero(p) if ctx is None else ctx.zero()


def _root(p: int, n: int, j: int, ctx: FieldCtx | None):
    return cy_root(p, n, j) if ctx is None else ctx.root(n, j)


def _sum_roots(p: int, terms: list, ctx: FieldCtx | None):
    """sum of value * zeta_{p^n}^j over (value, n, j)."""
    if ctx is None:
        return lincomb(p, terms)
    acc = ctx.zero()
    for v, n, j in terms:
        if not _is_zero(v):
            acc = acc + v * ctx.root(n, j)
    return acc


def _level_of(length: int, p: int) -> int:
    N, m = 0, 1
    while m < length:
        m *= p
        N += 1
    if m != length:
        raise ValueError(f"{length} values is not a power of p={p}")
    return N


def value_to_json(v):
    if isinstance(v, QAdicNum):
        return v.to_json()
    r = v.as_rational()
    if r is not None:
        return str(r)
    return v.to_json()


def value_from_json(obj, p: int) -> CycloNum:
    return CycloNum.from_json(obj, p)


# -- functions on Z_p ------------------------------------------------------------


class LCFn:
    """A function on Z_p that is constant on cosets of p^N Z_p.

    ``values[n]`` is the value on n + p^N Z_p, so there are p^N of them.
    """

    __slots__ = ("p", "values", "ctx", "level")

    def __init__(self, p: int, values: Iterable, ctx: FieldCtx | None = None):
        vals = tuple(_coerce(v, p, ctx) for v in values)
        self.p = p
        self.values = vals
        self.ctx = ctx
        self.level = _level_of(len(vals), p)

    @classmethod
    def const(cls, c, p: int, ctx: FieldCtx | None = None) -> "LCFn":
        return cls(p, [c], ctx)

    @classmethod
    def indicator(cls, residue: int, N: int, p: int) -> "LCFn":
        """Indicator of residue + p^N Z_p."""
        return cls(p, [1 if n == residue % p**N else 0 for n in range(p**N)])

    @classmethod
    def from_callable(cls, fn: Callable[[int], object], N: int, p: int, ctx: FieldCtx | None = None) -> "LCFn":
        return cls(p, [fn(n) for n in range(p**N)], ctx)

    def lift(self, N: int) -> "LCFn":
        if N < self.level:
            raise ValueError("cannot lower the level of a locally constant function")
        if N == self.level:
            return self
        P = self.p**self.level
        out = LCFn.__new__(LCFn)
        out.p, out.ctx, out.level = self.p, self.ctx, N
        out.values = tuple(self.values[n % P] for n in range(self.p**N))
        return out

    def __call__(self, z) -> object:
        if isinstance(z, ZpPoint):
            return self.values[z.truncate(self.level)]
        return self.values[int(z) % self.p**self.level]

    def _align(self, other: "LCFn") -> tuple["LCFn", "LCFn"]:
        if not isinstance(other, LCFn):
            raise TypeError("expected an LCFn")
        if other.p != self.p:
            raise ValueError("mismatched p")
        N = max(self.level, other.level)
        return self.lift(N), other.lift(N)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LCFn):
            return NotImplemented
        a, b = self._align(other)
        if a.ctx is None and b.ctx is None:
            return a.values == b.values
        return all(_coerce(x, a.p, a.ctx or b.ctx).equals(_coerce(y, a.p, a.ctx or b.ctx)) for x, y in zip(a.values, b.values))

    def __hash__(self):
        return hash((self.p, self.values)) if self.ctx is None else id(self)

    def __add__(self, other: "LCFn") -> "LCFn":
        a, b = self._align(other)
        return LCFn(a.p, [x + y for x, y in zip(a.values, b.values)], a.ctx)

    def __sub__(self, other: "LCFn") -> "LCFn":
        a, b = self._align(other)
        return LCFn(a.p, [x - y for x, y in zip(a.values, b.values)], a.ctx)

    def __neg__(self) -> "LCFn":
        return LCFn(self.p, [-x for x in self.values], self.ctx)

    def __mul__(self, other) -> "LCFn":
        if isinstance(other, LCFn):
            a, b = self._align(other)
            return LCFn(a.p, [x * y for x, y in zip(a.values, b.values)], a.ctx)
        c = _coerce(other, self.p, self.ctx)
        return LCFn(self.p, [c * x for x in self.values], self.ctx)

    __rmul__ = __mul__

    def zeros(self) -> list[int]:
        return [n for n, v in enumerate(self.values) if _is_zero(v)]

    def reciprocal(self) -> "LCFn":
        z = self.zeros()
        if z:
            raise ZeroDivisionError(f"function vanishes at residues {z}")
        return LCFn(self.p, [v.inverse() for v in self.values], self.ctx)

    def __repr__(self) -> str:
        return f"LCFn(p={self.p}, level={self.level}, values=[{', '.join(map(str, self.values))}])"

    def to_json(self) -> dict:
        return {"level": self.level, "values": [value_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "LCFn":
        vals = [value_from_json(v, p) for v in obj["values"]]
        f = cls(p, vals)
        if "level" in obj and int(obj["level"]) != f.level:
            raise ValueError(f"level {obj['level']} does not match {len(vals)} values")
        return f


# -- functions on the dual group -------------------------------------------------


class DualFn:
    """A finitely supported function on the dual group; zero entries are dropped."""

    __slots__ = ("p", "support", "ctx")

    def __init__(self, p: int, mapping: Mapping[PHat, object] | Iterable[tuple[PHat, object]] = (), ctx: FieldCtx | None = None):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        sup: dict[PHat, object] = {}
        for t, v in items:
            if t.p != p:
                raise ValueError("mismatched p")
            v = _coerce(v, p, ctx)
            if t in sup:
                v = sup[t] + v
            sup[t] = v
        self.p = p
        self.ctx = ctx
        self.support = {t: sup[t] for t in sorted(sup) if not _is_zero(sup[t])}

    @classmethod
    def dirac(cls, s: PHat, value=1, ctx: FieldCtx | None = None) -> "DualFn":
        return cls(s.p, {s: value}, ctx)

    @classmethod
    def one_zero(cls, p: int, value=1) -> "DualFn":
        """The indicator 1_0 of the zero element (optionally scaled)."""
        return cls(p, {phat_zero(p): value})

    @property
    def level(self) -> int:
        return max((t.n for t in self.support), default=0)

    def __call__(self, t: PHat):
        return self.support.get(t, _zero(self.p, self.ctx))

    def evaluate(self, t: PHat):
        return self(t)

    def items(self):
        return self.support.items()

    def __len__(self) -> int:
        return len(self.support)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DualFn):
            return NotImplemented
        if self.ctx is None and other.ctx is None:
            return self.p == other.p and self.support == other.support
        return all(v.is_zero() for v in (self - other).support.values())

    def __hash__(self):
        return hash((self.p, tuple(self.support.items()))) if self.ctx is None else id(self)

    def __add__(self, other: "DualFn") -> "DualFn":
        items = list(self.support.items()) + list(other.support.items())
        return DualFn(self.p, items, self.ctx or other.ctx)

    def __neg__(self) -> "DualFn":
        return DualFn(self.p, {t: -v for t, v in self.support.items()}, self.ctx)

    def __sub__(self, other: "DualFn") -> "DualFn":
        return self + (-other)

    def __mul__(self, other) -> "DualFn":
        if isinstance(other, DualFn):
            return DualFn(self.p, {t: v * other.support[t] for t, v in self.support.items() if t in other.support}, self.ctx)
        c = _coerce(other, self.p, self.ctx)
        return DualFn(self.p, {t: c * v for t, v in self.support.items()}, self.ctx)

    __rmul__ = __mul__

    def restrict(self, N: int) -> "DualFn":
        """Restriction to the ball |t|_p <= p^N."""
        return DualFn(self.p, {t: v for t, v in self.support.items() if t.n <= N}, self.ctx)

    def __repr__(self) -> str:
        body = ", ".join(f"{t}: {v}" for t, v in self.support.items())
        return f"DualFn(p={self.p}, {{{body}}})"

    def to_json(self) -> dict:
        return {"support": [{"t": str(t), "v": value_to_json(v)} for t, v in self.support.items()]}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "DualFn":
        return cls(p, [(parse_phat(str(e["t"]), p), value_from_json(e["v"], p)) for e in obj["support"]])


# -- characters, integral, transforms ----------------------------------------------


def character(t: PHat, z, ctx: FieldCtx | None = None):
    """e^{2 pi i {t z}_p} as an exact root of unity (or its image under ctx)."""
    if not isinstance(z, ZpPoint):
        z = ZpPoint.from_int(int(z), t.p)
    u = frac_mul(t, z)
    return _root(t.p, u.n, u.k, ctx)


def character_fn(t: PHat, N: int | None = None, ctx: FieldCtx | None = None) -> LCFn:
    """The character z -> e^{2 pi i {t z}_p} as an LCFn of level max(N, -v_p(t))."""
    N = t.n if N is None else max(N, t.n)
    p = t.p
    shift = p ** (N - t.n)
    return LCFn(p, [_root(p, N, t.k * shift * n, ctx) for n in range(p**N)], ctx)


def haar_integral(f: LCFn):
    """The Haar average of f at its own level (exact for locally constant f)."""
    total = _zero(f.p, f.ctx)
    for v in f.values:
        total = total + v
    return total * _coerce(Fraction(1, f.p**f.level), f.p, f.ctx)


def fourier_fwd(f: LCFn) -> DualFn:
    """f^(t) = p^{-N} sum_n f(n) e^{-2 pi i n t} on the ball of radius p^N."""
    p, N, ctx = f.p, f.level, f.ctx
    P = p**N
    inv = _coerce(Fraction(1, P), p, ctx)
    out = {}
    nz = [(n, v) for n, v in enumerate(f.values) if not _is_zero(v)]
    for k in range(P):
        s = _sum_roots(p, [(v, N, -k * n) for n, v in nz], ctx)
        if not _is_zero(s):
            out[phat_make(k, N, p)] = s * inv
    return DualFn(p, out, ctx)


def fourier_inv(F: DualFn) -> LCFn:
    """f(z) = sum_t F(t) e^{2 pi i {t z}_p}, tabulated at the level of F's support."""
    p, N, ctx = F.p, F.level, F.ctx
    items = list(F.items())
    return LCFn(p, [_sum_roots(p, [(v, t.n, t.k * m) for t, v in items], ctx) for m in range(p**N)], ctx)


def conv_zp(f: LCFn, g: LCFn) -> LCFn:
    """(f * g)(y) = integral of f(y - z) g(z) dz."""
    a, b = f._align(g)
    p, N, ctx = a.p, a.level, a.ctx
    P = p**N
    inv = _coerce(Fraction(1, P), p, ctx)
    nz = [(n, v) for n, v in enumerate(b.values) if not _is_zero(v)]
    out = []
    for m in range(P):
        acc = _zero(p, ctx)
        for n, v in nz:
            x = a.values[(m - n) % P]
            if not _is_zero(x):
                acc = acc + x * v
        out.append(acc * inv)
    return LCFn(p, out, ctx)


def conv_dual(F: DualFn, G: DualFn) -> DualFn:
    """(F * G)(t) = sum_s F(s) G(t - s)."""
    out: dict[PHat, object] = {}
    for s, x in F.items():
        for u, y in G.items():
            key = s + u
            v = x * y
            out[key] = out[key] + v if key in out else v
    return DualFn(F.p, out, F.ctx or G.ctx)


def mul_fn(f: LCFn, g: LCFn) -> LCFn:
    return f * g


def mul_dual(F: DualFn, G: DualFn) -> DualFn:
    return F * G


def translate_dual(F: DualFn, s: PHat) -> DualFn:
    """tau_s F: t -> F(t + s), so the support moves by -s."""
    return DualFn(F.p, {t - s: v for t, v in F.items()}, F.ctx)


def translate_fn(f: LCFn, a) -> LCFn:
    """tau_a f: z -> f(z + a)."""
    if not isinstance(a, ZpPoint):
        a = ZpPoint.from_int(int(a), f.p)
    P = f.p**f.level
    sh = a.truncate(f.level)
    return LCFn(f.p, [f.values[(n + sh) % P] for n in range(P)], f.ctx)


def parseval(f: LCFn, g: LCFn):
    """sum_t f^(-t) g^(t)."""
    F, G = fourier_fwd(f), fourier_fwd(g)
    acc = _zero(f.p, f.ctx)
    for t, v in G.items():
        w = F(-t)
        if not _is_zero(w):
            acc = acc + w * v
    return acc


def to_numeric(f, ctx: FieldCtx):
    """Map an LCFn or DualFn into the numeric backend of ctx."""
    if isinstance(f, LCFn):
        return LCFn(f.p, [from_exact(v, ctx) if isinstance(v, CycloNum) else v for v in f.values], ctx)
    return DualFn(f.p, {t: from_exact(v, ctx) if isinstance(v, CycloNum) else v for t, v in f.items()}, ctx)


# -- norms ---------------------------------------------------------------------------


def _conductor(v) -> int:
    return v.N if isinstance(v, CycloNum) else 0


def resolve_ctx(where: Config | FieldCtx, needed: int) -> FieldCtx:
    """A field context able to hold values of conductor p^needed."""
    if isinstance(where, FieldCtx):
        if where.N < needed:
            raise ValueError(f"field level {where.N} is below the needed conductor level {needed}")
        return where
    return where.field(needed)


def min_valuation(values: Iterable, where: Config | FieldCtx) -> float:
    """Minimum q-adic valuation over values (inf if all are zero)."""
    vals = [v for v in values if not _is_zero(v)]
    if not vals:
        return math.inf
    ctx = resolve_ctx(where, max(_conductor(v) for v in vals))
    return min(valuation(v, ctx) for v in vals)


def norm_fn(f: LCFn, where: Config | FieldCtx) -> Fraction:
    """sup_z |f(z)|_q."""
    ctx = f.ctx or where
    return abs_q(min_valuation(f.values, ctx), _q_of(ctx))


def norm_dual_sup(F: DualFn, where: Config | FieldCtx) -> Fraction:
    """sup_t |F(t)|_q."""
    ctx = F.ctx or where
    return abs_q(min_valuation(F.support.values(), ctx), _q_of(ctx))


def norm_dual_window(F, n: int, where: Config | FieldCtx) -> Fraction:
    """sup over |t|_p <= p^n of |F(t)|_q; F may be a DualFn or any evaluable transform."""
    if isinstance(F, DualFn):
        vals = [v for t, v in F.items() if t.n <= n]
        ctx = F.ctx or where
    else:
        vals = [F.evaluate(t) for t in enumerate_ball(n, F.p)]
        ctx = where
    return abs_q(min_valuation(vals, ctx), _q_of(ctx))


def _q_of(where: Config | FieldCtx) -> int:
    return where.q
