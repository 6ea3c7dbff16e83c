"""Session configuration, points of Z_p and binary digit helpers.

Points of Z_p are restricted to eventually periodic digit streams, i.e. the
p-adic integers that are rational numbers.  That covers N_0 as well as points
such as -1 = ...111 in Z_2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Config:
    """Primes and precision for one session.

    ``precision`` is the number of q-adic digits carried by the numeric
    backend; ``max_level`` bounds the conductor exponent N of p^N.
    """

    p: int
    q: int
    precision: int = 64
    max_level: int = 8

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if not is_prime(self.q):
            raise ValueError(f"q={self.q} is not prime")
        if self.p == self.q:
            raise ValueError("p and q must be distinct")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")

    def field(self, level: int | None = None):
        """The q-adic field context realising the embedding of Q(zeta_{p^level})."""
        from .qadic import field_setup

        level = self.max_level if level is None else level
        if level > self.max_level:
            raise ValueError(f"level {level} exceeds max_level {self.max_level}")
        return field_setup(self, level)


def _primitive_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class ZpPoint:
    """An eventually periodic p-adic integer.

    Digits are little-endian: ``pre`` is read first, then ``period`` repeats
    forever.  The representation is canonical, so ``==`` is point equality.
    Natural numbers have period ``(0,)``.
    """

    p: int
    pre: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(d) for d in self.pre)
        period = tuple(int(d) for d in self.period)
        if not period:
            raise ValueError("period must be nonempty")
        for d in pre + period:
            if not 0 <= d < self.p:
                raise ValueError(f"digit {d} out of range for p={self.p}")
        period = _primitive_period(period)
        while pre and pre[-1] == period[-1]:
            pre = pre[:-1]
            period = (period[-1],) + period[:-1]
        object.__setattr__(self, "pre", pre)
        object.__setattr__(self, "period", period)

    @classmethod
    def nat(cls, m: int, p: int) -> "ZpPoint":
        if m < 0:
            raise ValueError("FiniteNat needs m >= 0; use from_int for negatives")
        digits = []
        while m:
            m, d = divmod(m, p)
            digits.append(d)
        return cls(p, tuple(digits), (0,))

    @classmethod
    def periodic(cls, pre: Sequence[int], period: Sequence[int], p: int) -> "ZpPoint":
        return cls(p, tuple(pre), tuple(period))

    @classmethod
    def from_int(cls, n: int, p: int) -> "ZpPoint":
        if n >= 0:
            return cls.nat(n, p)
        k = 1
        while p**k < -n:
            k += 1
        r = n % p**k
        digits = []
        for _ in range(k):
            r, d = divmod(r, p)
            digits.append(d)
        return cls(p, tuple(digits), (p - 1,))

    @classmethod
    def from_fraction(cls, x: Fraction | int, p: int) -> "ZpPoint":
        """Digit expansion of a rational with denominator prime to p."""
        x = Fraction(x)
        a, b = x.numerator, x.denominator
        if b % p == 0:
            raise ValueError(f"{x} is not a {p}-adic integer")
        binv = pow(b, -1, p)
        seen: dict[int, int] = {}
        digits: list[int] = []
        while a not in seen:
            seen[a] = len(digits)
            d = (a * binv) % p
            digits.append(d)
            a = (a - d * b) // p
        start = seen[a]
        return cls(p, tuple(digits[:start]), tuple(digits[start:]))

    @property
    def is_natural(self) -> bool:
        return self.period == (0,)

    @property
    def value(self) -> int | None:
        """The integer value for points of N_0, else None."""
        if not self.is_natural:
            return None
        return sum(d * self.p**i for i, d in enumerate(self.pre))

    def as_fraction(self) -> Fraction:
        """The rational number this digit stream converges to p-adically."""
        p, r, L = self.p, len(self.pre), len(self.period)
        head = sum(d * p**i for i, d in enumerate(self.pre))
        block = sum(d * p**i for i, d in enumerate(self.period))
        return head + Fraction(block * p**r, 1 - p**L)

    def digit(self, i: int) -> int:
        if i < len(self.pre):
            return self.pre[i]
        return self.period[(i - len(self.pre)) % len(self.period)]

    def digits(self, n: int) -> list[int]:
        return [self.digit(i) for i in range(n)]

    def truncate(self, N: int) -> int:
        """The representative of this point in {0, ..., p^N - 1}."""
        return _truncate(self, N)

    def to_json(self) -> dict:
        if self.is_natural:
            return {"kind": "nat", "value": self.value}
        return {"kind": "periodic", "pre": list(self.pre), "period": list(self.period)}

    @classmethod
    def from_json(cls, obj: dict, p: int) -> "ZpPoint":
        kind = obj.get("kind")
        if kind == "nat":
            return cls.nat(int(obj["value"]), p)
        if kind == "periodic":
            return cls(p, tuple(obj["pre"]), tuple(obj["period"]))
        raise ValueError(f"unknown ZpPoint kind {kind!r}")

    @classmethod
    def parse(cls, text: str, p: int) -> "ZpPoint":
        """Parse CLI syntax: a decimal integer, or ``pre:period`` little-endian digits.

        Digits may be written as a plain string (``01:1``) or comma separated
        (``0,1:1``) when p > 10.
        """
        text = text.strip()
        if ":" not in text:
            return cls.from_int(int(text), p)
        pre_s, per_s = text.split(":", 1)

        def digits(s: str) -> tuple[int, ...]:
            if not s:
                return ()
            if "," in s:
                return tuple(int(d) for d in s.split(","))
            return tuple(int(c) for c in s)

        return cls(p, digits(pre_s), digits(per_s))

    def __str__(self) -> str:
        if self.is_natural:
            return str(self.value)
        sep = "," if self.p > 10 else ""
        return sep.join(map(str, self.pre)) + ":" + sep.join(map(str, self.period))


@lru_cache(maxsize=4096)
def _truncate(z: ZpPoint, N: int) -> int:
    p = z.p
    return sum(z.digit(i) * p**i for i in range(N))


def truncate_point(z: ZpPoint, N: int) -> int:
    return z.truncate(N)


def ones_count(n: int) -> int:
    """Number of 1 digits in the binary expansion of n."""
    if n < 0:
        raise ValueError("ones_count needs n >= 0")
    return bin(n).count("1")


def digit_sum(n: int, base: int) -> int:
    """Sum of the base-``base`` digits of n; equals ones_count when base == 2."""
    s = 0
    while n:
        n, d = divmod(n, base)
        s += d
    return s


def bit_length(m: int) -> int:
    """ceil(log2(m + 1)): the number of binary digits of m, with bit_length(0) == 0."""
    if m < 0:
        raise ValueError("bit_length needs m >= 0")
    return m.bit_length()
