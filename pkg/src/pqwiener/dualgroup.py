"""The dual group Z[1/p]/Z of Z_p: reduced p-power fractions under addition mod 1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .base import ZpPoint


@dataclass(frozen=True)
class PHat:
    """The fraction k/p^n in [0, 1), always in lowest terms.

    Zero is (k=0, n=0).  Construct through :func:`phat_make`, which reduces.
    """

    k: int
    n: int
    p: int

    def __post_init__(self):
        if self.n < 0 or not 0 <= self.k < self.p**self.n or (self.n == 0 and self.k != 0):
            raise ValueError(f"({self.k}, {self.n}) is not a reduced fraction for p={self.p}")
        if self.n > 0 and self.k % self.p == 0:
            raise ValueError(f"{self.k}/{self.p}^{self.n} is not reduced")

    def _check(self, other: "PHat"):
        if not isinstance(other, PHat):
            return NotImplemented
        if other.p != self.p:
            raise ValueError(f"cannot mix p={self.p} and p={other.p}")
        return None

    def __add__(self, other: "PHat") -> "PHat":
        if self._check(other) is NotImplemented:
            return NotImplemented
        n = max(self.n, other.n)
        p = self.p
        return phat_make(self.k * p ** (n - self.n) + other.k * p ** (n - other.n), n, p)

    def __neg__(self) -> "PHat":
        return phat_make(-self.k, self.n, self.p)

    def __sub__(self, other: "PHat") -> "PHat":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __bool__(self) -> bool:
        return self.k != 0

    def scale(self, m: int) -> "PHat":
        """m * t mod 1 for an integer m."""
        return phat_make(self.k * m, self.n, self.p)

    def as_fraction(self) -> Fraction:
        return Fraction(self.k, self.p**self.n)

    def __lt__(self, other: "PHat") -> bool:
        return self.as_fraction() < other.as_fraction()

    def __str__(self) -> str:
        if self.n == 0:
            return "0"
        return f"{self.k}/{self.p ** self.n}"

    def __repr__(self) -> str:
        return f"PHat({self}, p={self.p})"

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n}

    @classmethod
    def from_json(cls, obj, p: int) -> "PHat":
        if isinstance(obj, str):
            return parse_phat(obj, p)
        return phat_make(int(obj["k"]), int(obj["n"]), p)


def phat_make(k: int, n: int, p: int) -> PHat:
    """Canonical representative of k/p^n mod 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    k %= p**n
    if k == 0:
        return PHat(0, 0, p)
    while k % p == 0:
        k //= p
        n -= 1
    return PHat(k, n, p)


def phat_zero(p: int) -> PHat:
    return PHat(0, 0, p)


def phat_add(a: PHat, b: PHat) -> PHat:
    return a + b


def phat_neg(a: PHat) -> PHat:
    return -a


def phat_abs(t: PHat) -> int:
    """|t|_p: p^n for t = k/p^n reduced, and 0 for t = 0."""
    return 0 if t.n == 0 else t.p**t.n


def neg_valuation(t: PHat) -> float:
    """-v_p(t), which is -inf at t = 0."""
    return -math.inf if t.n == 0 else t.n


def parse_phat(text: str, p: int) -> PHat:
    """Parse ``"k/p^n"`` written with an explicit denominator, e.g. ``"3/8"``."""
    text = text.strip()
    if "/" not in text:
        return phat_make(int(text), 0, p)
    num_s, den_s = text.split("/", 1)
    den = int(den_s)
    n = 0
    while den % p == 0:
        den //= p
        n += 1
    if den != 1:
        raise ValueError(f"{text!r} is not a {p}-power fraction")
    return phat_make(int(num_s), n, p)


def enumerate_ball(N: int, p: int) -> list[PHat]:
    """All t with |t|_p <= p^N, as k/p^N for k = 0, ..., p^N - 1."""
    return [phat_make(k, N, p) for k in range(p**N)]


def frac_mul(t: PHat, z: ZpPoint) -> PHat:
    """The p-adic fractional part {t z}_p; only z mod p^n matters."""
    if t.p != z.p:
        raise ValueError("mismatched primes")
    return phat_make(t.k * z.truncate(t.n), t.n, t.p)
