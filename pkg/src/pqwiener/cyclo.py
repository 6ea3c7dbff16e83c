"""Exact arithmetic in the cyclotomic fields Q(zeta_{p^N}).

An element is stored as integer numerators over one positive common
denominator, in the power basis 1, zeta, ..., zeta^(phi-1) of its *minimal*
conductor p^N, reduced modulo the cyclotomic polynomial
Phi_{p^N}(x) = sum_{i<p} x^(i p^(N-1)).  That form is unique, so equality is
structural.  Coherence zeta_{p^n} = zeta_{p^m}^(p^(m-n)) is built in: lifting
an element to a larger conductor substitutes x -> x^(p^(m-n)).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Union[int, Fraction]


def phi(p: int, N: int) -> int:
    """Euler phi of p^N: the degree of Q(zeta_{p^N})."""
    return 1 if N == 0 else p ** (N - 1) * (p - 1)


def _reduce_cyclic(p: int, m: int, v: list[int]) -> list[int]:
    # v holds coefficients modulo x^(p^m) - 1; fold the top block using Phi_{p^m}.
    if m == 0:
        return [v[0]]
    P = p ** (m - 1)
    top = v[(p - 1) * P:]
    return [v[i * P + r] - top[r] for i in range(p - 1) for r in range(P)]


def _normalize(p: int, N: int, nums: list[int], den: int) -> "CycloNum":
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    while N >= 1:
        if N == 1:
            if any(nums[1:]):
                break
            nums = nums[:1]
            N = 0
        else:
            if any(c for i, c in enumerate(nums) if i % p):
                break
            nums = nums[::p]
            N -= 1
    g = math.gcd(den, *nums)
    if g == 0 or not any(nums):
        return CycloNum._raw(p, 0, (0,), 1)
    if g != 1:
        nums = [c // g for c in nums]
        den //= g
    return CycloNum._raw(p, N, tuple(nums), den)


class CycloNum:
    """An element of Q(zeta_{p^N}) in reduced form.

    ``nums`` has length phi(p^N); the value is sum(nums[i] zeta^i) / den with
    ``zeta = zeta_{p^N}``.  Instances are immutable.
    """

    __slots__ = ("p", "N", "nums", "den", "_hash")

    p: int
    N: int
    nums: tuple[int, ...]
    den: int

    def __init__(self, p: int, N: int = 0, coeffs: Iterable[Rational] = (0,)):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) != phi(p, N):
            raise ValueError(f"need {phi(p, N)} coefficients at conductor {p}^{N}")
        den = math.lcm(*(c.denominator for c in coeffs))
        other = _normalize(p, N, [int(c * den) for c in coeffs], den)
        for name in ("p", "N", "nums", "den"):
            object.__setattr__(self, name, getattr(other, name))
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, p: int, N: int, nums: tuple[int, ...], den: int) -> "CycloNum":
        obj = object.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "N", N)
        object.__setattr__(obj, "nums", nums)
        object.__setattr__(obj, "den", den)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    @classmethod
    def rational(cls, x: Rational, p: int) -> "CycloNum":
        x = Fraction(x)
        return cls._raw(p, 0, (x.numerator,), x.denominator)

    @classmethod
    def zero(cls, p: int) -> "CycloNum":
        return cls._raw(p, 0, (0,), 1)

    @classmethod
    def one(cls, p: int) -> "CycloNum":
        return cls._raw(p, 0, (1,), 1)

    # -- inspection -------------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.nums)

    def is_zero(self) -> bool:
        return self.N == 0 and self.nums[0] == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def as_rational(self) -> Fraction | None:
        """The rational value, or None when the element is not in Q."""
        if self.N != 0:
            return None
        return Fraction(self.nums[0], self.den)

    def monomial(self) -> tuple[Fraction, int] | None:
        """(c, i) when the element is c * zeta_{p^N}^i, else None."""
        nz = [(i, c) for i, c in enumerate(self.nums) if c]
        if len(nz) != 1:
            return None
        i, c = nz[0]
        return Fraction(c, self.den), i

    def lift(self, m: int) -> list[Fraction]:
        """Coefficients at the larger conductor p^m."""
        if m < self.N:
            raise ValueError("cannot lift to a smaller conductor")
        out = [Fraction(0)] * phi(self.p, m)
        stride = self.p ** (m - self.N)
        for i, c in enumerate(self.nums):
            if c:
                out[i * stride] = Fraction(c, self.den)
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNum.rational(other, self.p)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return (self.p, self.N, self.nums, self.den) == (other.p, other.N, other.nums, other.den)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.p, self.N, self.nums, self.den)))
        return self._hash

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.p != self.p:
                raise ValueError(f"cannot mix p={self.p} and p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.rational(other, self.p)
        return NotImplemented

    def __add__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        m = max(self.N, other.N)
        den = math.lcm(self.den, other.den)
        out = [0] * phi(p, m)
        for a in (self, other):
            s = den // a.den
            stride = p ** (m - a.N)
            for i, c in enumerate(a.nums):
                if c:
                    out[i * stride] += c * s
        return _normalize(p, m, out, den)

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum._raw(self.p, self.N, tuple(-c for c in self.nums), self.den)

    def __sub__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        if other.N == 0:
            c = other.nums[0]
            return _normalize(p, self.N, [a * c for a in self.nums], self.den * other.den)
        if self.N == 0:
            c = self.nums[0]
            return _normalize(p, other.N, [b * c for b in other.nums], self.den * other.den)
        m = max(self.N, other.N)
        P = p**m
        sa = p ** (m - self.N)
        sb = p ** (m - other.N)
        A = [(i * sa, c) for i, c in enumerate(self.nums) if c]
        B = [(j * sb, c) for j, c in enumerate(other.nums) if c]
        acc = [0] * (2 * P)
        for i, a in A:
            for j, b in B:
                acc[i + j] += a * b
        cyc = [acc[k] + acc[k + P] for k in range(P)]
        return _normalize(p, m, _reduce_cyclic(p, m, cyc), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        if self.N == 0:
            return CycloNum.rational(Fraction(self.den, self.nums[0]), self.p)
        modulus = [Fraction(0)] * (phi(self.p, self.N) + 1)
        P = self.p ** (self.N - 1)
        for i in range(self.p):
            modulus[i * P] = Fraction(1)
        inv = _poly_inverse_mod(list(self.coeffs), modulus)
        return CycloNum(self.p, self.N, inv)

    def __truediv__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> "CycloNum":
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNum.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- presentation -----------------------------------------------------

    def __repr__(self) -> str:
        return f"CycloNum({self})"

    def __str__(self) -> str:
        if self.N == 0:
            return str(Fraction(self.nums[0], self.den))
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mono = f"z{self.p ** self.N}" + (f"^{i}" if i > 1 else "")
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj, p: int) -> "CycloNum":
        if isinstance(obj, (int, str)):
            return cls.rational(Fraction(obj), p)
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise ValueError(f"not a cyclotomic number: {obj!r}")
        return cls(p, int(obj.get("N", 0)), [Fraction(c) for c in obj["coeffs"]])


def _trim(a: list[Fraction]) -> list[Fraction]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _poly_inverse_mod(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    """s with s*a = 1 mod m over Q, by the extended Euclidean algorithm."""
    n = len(m) - 1
    r0, r1 = _trim(list(m)), _trim(list(a))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        quo = [Fraction(0)] * (len(r0) - len(r1) + 1)
        rem = list(r0)
        lead = r1[-1]
        for k in range(len(rem) - len(r1), -1, -1):
            c = rem[k + len(r1) - 1] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(r1):
                    rem[k + j] -= c * b
        rem = _trim(rem[: len(r1) - 1] or [Fraction(0)])
        prod = [Fraction(0)] * (len(quo) + len(s1) - 1)
        for i, x in enumerate(quo):
            if x:
                for j, y in enumerate(s1):
                    prod[i + j] += x * y
        width = max(len(s0), len(prod))
        s_new = [
            (s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0) for i in range(width)
        ]
        r0, r1 = r1, rem
        s0, s1 = s1, _trim(s_new)
    c = r1[0]
    if c == 0:
        raise ZeroDivisionError("element is not invertible")
    out = [x / c for x in s1] + [Fraction(0)] * n
    return out[:n]


def cy_root(p: int, n: int, j: int) -> CycloNum:
    """zeta_{p^n}^j, embedded coherently into every larger conductor."""
    return lincomb(p, [(CycloNum.one(p), n, j)])


def lincomb(p: int, terms: Iterable[tuple[CycloNum, int, int]]) -> CycloNum:
    """sum of value * zeta_{p^n}^j over the (value, n, j) triples.

    This is the workhorse for every Fourier sum: multiplication by a root of
    unity is an index shift, so the whole sum costs one reduction.
    """
    terms = [t for t in terms if t[0].nums[0] or t[0].N]
    if not terms:
        return CycloNum.zero(p)
    m = max(max(a.N, n) for a, n, _ in terms)
    P = p**m
    den = math.lcm(*{a.den for a, _, _ in terms})
    acc = [0] * P
    for a, n, j in terms:
        s = den // a.den
        stride = p ** (m - a.N)
        J = (j * p ** (m - n)) % P
        for i, c in enumerate(a.nums):
            if c:
                acc[(i * stride + J) % P] += c * s
    return _normalize(p, m, _reduce_cyclic(p, m, acc), den)


def cy_add(a: CycloNum, b: CycloNum) -> CycloNum:
    return a + b


def cy_neg(a: CycloNum) -> CycloNum:
    return -a


def cy_mul(a: CycloNum, b: CycloNum) -> CycloNum:
    return a * b


def cy_inv(a: CycloNum) -> CycloNum:
    return a.inverse()


def cy_as_rational(a: CycloNum) -> Fraction | None:
    return a.as_rational()
