"""Truncated arithmetic in the unramified extension Q_q(zeta_{p^N}).

A :class:`FieldCtx` pins one embedding of Q(zeta_{p^N}) into C_q: it holds a
monic g of degree f = ord(q mod p^N), a Hensel lift to Z/q^M of an irreducible
factor of Phi_{p^N} mod q, and zeta_{p^N} is sent to the class of x in
Z_q[x]/(g).  Because the extension is unramified and 1, x, ..., x^(f-1)
reduces to a basis of the residue field, the valuation of an element is the
minimum valuation of its coordinates.

Elements carry their own precision: ``val`` (the valuation) plus ``rel``
significant q-adic digits, so the absolute precision is ``val + rel``.
Images of exact numbers are known to absolute precision M (less the
valuation of any q in a denominator), since g itself is only known mod q^M.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclo import CycloNum, phi


class PrecisionError(ArithmeticError):
    """Raised when cancellation has consumed every available q-adic digit."""


@dataclass(frozen=True)
class AtLeast:
    """A valuation known only to be >= bound (a zero to the working precision)."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


def vq(n: int, q: int) -> float:
    """q-adic valuation of an integer; inf for 0."""
    if n == 0:
        return math.inf
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def vq_rational(x: Fraction, q: int) -> float:
    x = Fraction(x)
    if x == 0:
        return math.inf
    return vq(x.numerator, q) - vq(x.denominator, q)


def abs_q(v: float, q: int) -> Fraction:
    """q^(-v) as an exact rational; 0 for v = inf."""
    if v == math.inf:
        return Fraction(0)
    return Fraction(1, q**v) if v >= 0 else Fraction(q ** (-v))


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


# -- polynomials over F_q (lists of ints, constant term first) ----------------


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _deg(a: list[int]) -> int:
    return -1 if a == [0] else len(a) - 1


def _fq_mul(a: list[int], b: list[int], q: int) -> list[int]:
    if q < 1 << 20 and len(a) * len(b) > 64:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % q
        return _trim(out.tolist())
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % q for c in out])


def _fq_divmod(a: list[int], b: list[int], q: int) -> tuple[list[int], list[int]]:
    db = _deg(b)
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) - 1 < db:
        return [0], _trim([c % q for c in a])
    inv = pow(b[-1], -1, q)
    r = np.asarray(a, dtype=object if q >= 1 << 20 else np.int64) % q
    bb = np.asarray(b, dtype=r.dtype)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = int(r[i]) * inv % q
        if c:
            quo[i - db] = c
            r[i - db : i + 1] = (r[i - db : i + 1] - c * bb) % q
    return _trim(quo), _trim([int(c) for c in r[:db]] or [0])


def _fq_rem(a, b, q):
    return _fq_divmod(a, b, q)[1]


def _fq_sub(a: list[int], b: list[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _fq_add(a: list[int], b: list[int], q: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % q for i in range(n)])


def _fq_monic(a: list[int], q: int) -> list[int]:
    inv = pow(a[-1], -1, q)
    return [c * inv % q for c in a]


def _fq_gcd(a: list[int], b: list[int], q: int) -> list[int]:
    while _deg(b) >= 0:
        a, b = b, _fq_rem(a, b, q)
    return _fq_monic(a, q) if _deg(a) >= 0 else a


def _fq_xgcd(a: list[int], b: list[int], q: int):
    """(d, s, t) with s a + t b = d = gcd(a, b), d monic."""
    r0, r1, s0, s1, t0, t1 = a, b, [1], [0], [0], [1]
    while _deg(r1) >= 0:
        quo, rem = _fq_divmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, _fq_sub(s0, _fq_mul(quo, s1, q), q)
        t0, t1 = t1, _fq_sub(t0, _fq_mul(quo, t1, q), q)
    inv = pow(r0[-1], -1, q)
    return [c * inv % q for c in r0], [c * inv % q for c in s0], [c * inv % q for c in t0]


def _fq_powmod(a: list[int], e: int, m: list[int], q: int) -> list[int]:
    result = [1]
    base = _fq_rem(a, m, q)
    while e:
        if e & 1:
            result = _fq_rem(_fq_mul(result, base, q), m, q)
        e >>= 1
        if e:
            base = _fq_rem(_fq_mul(base, base, q), m, q)
    return result


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_fq(g: list[int], q: int) -> bool:
    """Rabin's irreducibility test over the field with q elements."""
    f = _deg(g)
    if f <= 0:
        return False
    g = _fq_monic(g, q)
    x = [0, 1]

    def frob_iter(k: int) -> list[int]:
        y = x
        for _ in range(k):
            y = _fq_powmod(y, q, g, q)
        return y

    if _fq_rem(_fq_sub(frob_iter(f), x, q), g, q) != [0]:
        return False
    for r in _prime_factors(f):
        h = _fq_rem(_fq_sub(frob_iter(f // r), x, q), g, q)
        if _deg(_fq_gcd(g, h, q)) != 0:
            return False
    return True


def _test_polys(n: int, q: int):
    # Fixed enumeration of polynomials of degree 1..n-1, ordered by their base-q code.
    for idx in itertools.count(q):
        digits, m = [], idx
        while m:
            m, d = divmod(m, q)
            digits.append(d)
        if len(digits) > n:
            raise RuntimeError("equal-degree factorization failed to split")
        yield digits


def _equal_degree_factors(u: list[int], f: int, q: int) -> list[list[int]]:
    """Split a squarefree monic u whose irreducible factors all have degree f."""
    n = _deg(u)
    if n == f:
        return [u]
    for a in _test_polys(n, q):
        if q == 2:
            b, t = [0], a
            for _ in range(f):
                b = _fq_add(b, t, q)
                t = _fq_rem(_fq_mul(t, t, q), u, q)
        else:
            b = _fq_sub(_fq_powmod(a, (q**f - 1) // 2, u, q), [1], q)
        d = _fq_gcd(u, b, q)
        if 0 < _deg(d) < n:
            rest = _fq_divmod(u, d, q)[0]
            return _equal_degree_factors(d, f, q) + _equal_degree_factors(rest, f, q)
    raise RuntimeError("unreachable")


def cyclotomic_poly(p: int, N: int) -> list[int]:
    """Integer coefficients of Phi_{p^N}, constant term first."""
    if N == 0:
        return [-1, 1]
    P = p ** (N - 1)
    out = [0] * (phi(p, N) + 1)
    for i in range(p):
        out[i * P] = 1
    return out


def _poly_mul_int(a: list[int], b: list[int], mod: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % mod for c in out]


def _hensel_lift(F: list[int], g0: list[int], h0: list[int], q: int, M: int) -> list[int]:
    """Lift F = g0 h0 (mod q), g0 monic and coprime to h0, to a factor g mod q^M."""
    d, s, t = _fq_xgcd(g0, h0, q)
    if d != [1]:
        raise ArithmeticError("factors are not coprime; cannot Hensel lift")
    g, h = list(g0), list(h0)
    for k in range(1, M):
        mod = q**k
        gh = _poly_mul_int(g, h, q ** (k + 1))
        err = [((F[i] if i < len(F) else 0) - (gh[i] if i < len(gh) else 0)) for i in range(len(F))]
        if any(c % mod for c in err):
            raise ArithmeticError("Hensel invariant broken")
        e = _trim([(c // mod) % q for c in err])
        dg = _fq_rem(_fq_mul(t, e, q), g0, q)
        dh = _fq_divmod(_fq_sub(e, _fq_mul(dg, h0, q), q), g0, q)[0]
        g = [(g[i] + mod * (dg[i] if i < len(dg) else 0)) % (mod * q) for i in range(len(g))]
        h = [(h[i] + mod * (dh[i] if i < len(dh) else 0)) % (mod * q) for i in range(len(h))]
    return g


def _poly_divides_mod(F: list[int], g: list[int], mod: int) -> bool:
    # g monic; remainder of F by g must vanish mod `mod`.
    r = list(F)
    f = len(g) - 1
    for i in range(len(r) - 1, f - 1, -1):
        c = r[i] % mod
        if c:
            for j in range(f + 1):
                r[i - f + j] -= c * g[j]
    return all(c % mod == 0 for c in r[:f])


@dataclass(frozen=True)
class FieldCtx:
    """One fixed embedding of Q(zeta_{p^N}) into the unramified extension of Q_q."""

    p: int
    q: int
    N: int
    M: int
    f: int
    g: tuple[int, ...]
    powers: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @property
    def modulus(self) -> int:
        return self.q**self.M

    @property
    def zeta_image(self) -> "QAdicNum":
        return self.root(self.N, 1)

    def root(self, n: int, j: int) -> "QAdicNum":
        """Image of zeta_{p^n}^j."""
        if n > self.N:
            raise ValueError(f"conductor p^{n} exceeds field level {self.N}")
        e = (j * self.p ** (self.N - n)) % self.p**self.N
        if e < len(self.powers):
            return QAdicNum._from_ints(self, list(self.powers[e]), 0, self.M)
        from .cyclo import cy_root

        return from_exact(cy_root(self.p, self.N, e), self)

    def one(self) -> "QAdicNum":
        return QAdicNum._from_ints(self, [1] + [0] * (self.f - 1), 0, self.M)

    def zero(self) -> "QAdicNum":
        return QAdicNum._exact_zero(self)

    def from_rational(self, x) -> "QAdicNum":
        return from_exact(CycloNum.rational(Fraction(x), self.p), self)

    def reduce(self, poly: list[int], mod: int) -> list[int]:
        """Reduce an integer polynomial modulo g and mod."""
        r = [c % mod for c in poly]
        f = self.f
        for i in range(len(r) - 1, f - 1, -1):
            c = r[i]
            if c:
                for j in range(f):
                    r[i - f + j] = (r[i - f + j] - c * self.g[j]) % mod
        r = r[:f] + [0] * (f - len(r[:f]))
        return r

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "N": self.N, "M": self.M, "f": self.f, "g": [str(c) for c in self.g]}


def field_setup(cfg, N: int) -> FieldCtx:
    """Build (and cache) the embedding for Q(zeta_{p^N}) at precision cfg.precision.

    The irreducible factor of Phi_{p^N} mod q is the lowest one in the
    lexicographic order that compares coefficients from x^(f-1) down to the
    constant term, with entries in {0, ..., q-1}.
    """
    return _field_setup(cfg.p, cfg.q, N, cfg.precision)


@lru_cache(maxsize=None)
def _field_setup(p: int, q: int, N: int, M: int) -> FieldCtx:
    if p == q:
        raise ValueError("p and q must be distinct")
    F = cyclotomic_poly(p, N)
    f = multiplicative_order(q, p**N)
    Fq = [c % q for c in F]
    factors = _equal_degree_factors(Fq, f, q)
    if any(_deg(u) != f for u in factors):
        raise ArithmeticError("unexpected factor degree")
    g0 = min(factors, key=lambda u: tuple(reversed(u)))
    h0 = [1]
    for u in factors:
        if u is not g0:
            h0 = _fq_mul(h0, u, q)
    g = _hensel_lift(F, g0, h0, q, M) if len(factors) > 1 else [c % q**M for c in F]
    mod = q**M
    if not _poly_divides_mod(F, g, mod):
        raise ArithmeticError("lifted factor does not divide the cyclotomic polynomial")
    if not is_irreducible_fq([c % q for c in g], q):
        raise ArithmeticError("factor is not irreducible mod q")
    if multiplicative_order(q, p**N) != len(g) - 1:
        raise ArithmeticError("degree does not match the order of q")
    powers = []
    cur = [1] + [0] * (f - 1)
    for _ in range(phi(p, N)):
        powers.append(tuple(cur))
        # multiply by x and reduce by the monic g
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * g[j]) % mod for j, c in enumerate(cur)]
    return FieldCtx(p, q, N, M, f, tuple(g), tuple(powers))


class QAdicNum:
    """q^val * (sum coeffs[i] x^i), with ``rel`` known digits, in Z_q[x]/(g).

    A zero to precision has ``rel == 0`` and ``val`` equal to the bound on its
    valuation; an exact zero has ``exact_zero`` set.
    """

    __slots__ = ("ctx", "coeffs", "val", "rel", "exact_zero")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...], val: int, rel: int, exact_zero: bool = False):
        self.ctx = ctx
        self.coeffs = coeffs
        self.val = val
        self.rel = rel
        self.exact_zero = exact_zero

    @classmethod
    def _exact_zero(cls, ctx: FieldCtx) -> "QAdicNum":
        return cls(ctx, (0,) * ctx.f, 0, 0, True)

    @classmethod
    def _from_ints(cls, ctx: FieldCtx, ints: list[int], shift: int, absprec: int) -> "QAdicNum":
        """Normalise q^shift * sum(ints[i] x^i) known modulo q^absprec."""
        q = ctx.q
        room = absprec - shift
        if room <= 0:
            return cls(ctx, (0,) * ctx.f, absprec, 0)
        mod = q**room
        ints = [c % mod for c in ints]
        v = min((vq(c, q) for c in ints), default=math.inf)
        if v >= room:
            return cls(ctx, (0,) * ctx.f, absprec, 0)
        rel = room - v
        scale = q**v
        m2 = q**rel
        return cls(ctx, tuple((c // scale) % m2 for c in ints), shift + v, rel)

    @property
    def absprec(self) -> float:
        if self.exact_zero:
            return math.inf
        return self.val + self.rel

    def is_zero(self) -> bool:
        """True for exact zero and for zero-to-precision."""
        return self.exact_zero or self.rel == 0

    def _check(self, other) -> "QAdicNum":
        if isinstance(other, (int, Fraction)):
            return self.ctx.from_rational(other)
        if isinstance(other, CycloNum):
            return from_exact(other, self.ctx)
        if not isinstance(other, QAdicNum):
            return NotImplemented
        if other.ctx != self.ctx:
            raise ValueError("elements of different field contexts")
        return other

    def __add__(self, other) -> "QAdicNum":
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        absprec = min(self.absprec, other.absprec)
        shift = min(self.val, other.val)
        q = self.ctx.q
        sa, sb = q ** (self.val - shift), q ** (other.val - shift)
        ints = [a * sa + b * sb for a, b in zip(self.coeffs, other.coeffs)]
        return QAdicNum._from_ints(self.ctx, ints, shift, absprec)

    __radd__ = __add__

    def __neg__(self) -> "QAdicNum":
        if self.is_zero():
            return self
        m = self.ctx.q**self.rel
        return QAdicNum(self.ctx, tuple((-c) % m for c in self.coeffs), self.val, self.rel)

    def __sub__(self, other) -> "QAdicNum":
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QAdicNum":
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "QAdicNum":
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        if self.exact_zero or other.exact_zero:
            return QAdicNum._exact_zero(ctx)
        if self.rel == 0 or other.rel == 0:
            return QAdicNum(ctx, (0,) * ctx.f, self.val + other.val, 0)
        rel = min(self.rel, other.rel)
        mod = ctx.q**rel
        prod = _poly_mul_int(list(self.coeffs), list(other.coeffs), mod)
        return QAdicNum._from_ints(ctx, ctx.reduce(prod, mod), self.val + other.val, self.val + other.val + rel)

    __rmul__ = __mul__

    def inverse(self) -> "QAdicNum":
        if self.exact_zero:
            raise ZeroDivisionError("division by zero")
        if self.rel == 0:
            raise PrecisionError("precision exhausted: cannot invert a zero to precision")
        ctx, q = self.ctx, self.ctx.q
        g0 = [c % q for c in ctx.g]
        u0 = _trim([c % q for c in self.coeffs])
        d, s, _ = _fq_xgcd(u0, g0, q)
        if d != [1]:
            raise ArithmeticError("unit not invertible mod q")
        v = s + [0] * (ctx.f - len(s))
        k = 1
        u = list(self.coeffs)
        while k < self.rel:
            k = min(2 * k, self.rel)
            mod = q**k
            uv = ctx.reduce(_poly_mul_int(u, v, mod), mod)
            two_minus = [(-c) % mod for c in uv]
            two_minus[0] = (two_minus[0] + 2) % mod
            v = ctx.reduce(_poly_mul_int(v, two_minus, mod), mod)
        return QAdicNum._from_ints(ctx, v, -self.val, -self.val + self.rel)

    def __truediv__(self, other) -> "QAdicNum":
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, e: int) -> "QAdicNum":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def equals(self, other) -> bool:
        """Equality to the precision of both operands."""
        return (self - other).is_zero()

    def residues(self) -> list[int]:
        """Coordinates as integers modulo q^absprec (only meaningful when val >= 0)."""
        if self.is_zero():
            return [0] * self.ctx.f
        if self.val < 0:
            raise ValueError("element is not integral")
        scale = self.ctx.q**self.val
        return [c * scale for c in self.coeffs]

    def __repr__(self) -> str:
        if self.exact_zero:
            return "QAdicNum(0)"
        if self.rel == 0:
            return f"QAdicNum(O({self.ctx.q}^{self.val}))"
        return f"QAdicNum({self.ctx.q}^{self.val} * {list(self.coeffs)} + O({self.ctx.q}^{self.absprec}))"

    def to_json(self) -> dict:
        c = self.ctx
        return {
            "ctx": {"p": c.p, "q": c.q, "N": c.N, "M": c.M},
            "val": None if self.exact_zero else self.val,
            "rel": self.rel,
            "coeffs": [str(x) for x in self.coeffs],
        }


def from_exact(a: CycloNum, ctx: FieldCtx) -> QAdicNum:
    """The image of an exact cyclotomic number under the embedding pinned by ctx."""
    if isinstance(a, (int, Fraction)):
        a = CycloNum.rational(a, ctx.p)
    if a.p != ctx.p:
        raise ValueError("mismatched p")
    if a.N > ctx.N:
        raise ValueError(f"conductor {a.p}^{a.N} exceeds field level {ctx.N}")
    if a.is_zero():
        return QAdicNum._exact_zero(ctx)
    q, M = ctx.q, ctx.M
    v_den = int(vq(a.den, q))
    d_rest = a.den // q**v_den
    mod = q**M
    dinv = pow(d_rest, -1, mod)
    stride = ctx.p ** (ctx.N - a.N)
    acc = [0] * ctx.f
    for i, c in enumerate(a.nums):
        if c:
            row = ctx.powers[i * stride]
            for j, r in enumerate(row):
                if r:
                    acc[j] += c * r
    acc = [x * dinv % mod for x in acc]
    return QAdicNum._from_ints(ctx, acc, -v_den, M - v_den)


def qval(x: QAdicNum) -> int | AtLeast | float:
    """Valuation: an int, AtLeast(bound) for a zero to precision, inf for exact zero."""
    if x.exact_zero:
        return math.inf
    if x.rel == 0:
        return AtLeast(x.val)
    return x.val


def q_add(a: QAdicNum, b: QAdicNum) -> QAdicNum:
    return a + b


def q_neg(a: QAdicNum) -> QAdicNum:
    return -a


def q_mul(a: QAdicNum, b: QAdicNum) -> QAdicNum:
    return a * b


def q_inv(a: QAdicNum) -> QAdicNum:
    return a.inverse()


def valuation(x, ctx: FieldCtx | None = None) -> float:
    """q-adic valuation of an exact or numeric value, under ctx's embedding.

    Returns an int, or inf for an exact zero.  Rational numbers and rational
    multiples of a root of unity are valued directly (their valuation does not
    depend on the embedding); everything else goes through :func:`from_exact`.
    Raises PrecisionError when the value is zero to the working precision.
    """
    if isinstance(x, QAdicNum):
        v = qval(x)
        if isinstance(v, AtLeast):
            raise PrecisionError(f"precision exhausted: valuation {v}")
        return v
    if ctx is None:
        raise ValueError("a field context is needed to value an exact number")
    if isinstance(x, (int, Fraction)):
        x = CycloNum.rational(x, ctx.p)
    if x.is_zero():
        return math.inf
    mono = x.monomial()
    if mono is not None:
        c = mono[0]
        v = vq_rational(c, ctx.q)
        v_den = max(0, int(vq(c.denominator, ctx.q)))
        if v >= ctx.M - v_den:
            raise PrecisionError(f"precision exhausted: valuation >= {ctx.M - v_den}")
        return v
    return valuation(from_exact(x, ctx))
