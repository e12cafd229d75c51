"""Log-domain scalars for doubly-exponentially small quantities.

A LogScalar stores a nonnegative number as its base-2 logarithm (with an
explicit zero flag), so products, quotients, powers and comparisons stay
exact in situations where the linear value underflows any float format.
log2 = -inf is allowed and means "positive but below every representable
scale" (it arises when a bound's magnitude itself overflows).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LogScalar:
    log2: float
    is_zero: bool = False

    @staticmethod
    def zero() -> "LogScalar":
        return LogScalar(float("-inf"), True)

    @staticmethod
    def from_log2(l: float) -> "LogScalar":
        return LogScalar(float(l))

    @staticmethod
    def from_linear(x: float) -> "LogScalar":
        if x < 0:
            raise ValueError("LogScalar represents nonnegative quantities")
        if x == 0:
            return LogScalar.zero()
        return LogScalar(math.log2(x))

    def to_linear(self) -> float:
        """Linear value; only valid while |log2| < 900 (no silent under/overflow).

        The integer part of the exponent is applied exactly via ldexp, so
        the round trip from_linear -> to_linear is within 1 ulp for values
        in [1/2, 2); elsewhere the stored log2 itself carries rounding of
        order |log2| * 2^-53, which bounds the achievable accuracy.
        """
        if self.is_zero:
            return 0.0
        if not abs(self.log2) < 900.0:
            raise OverflowError(f"2^{self.log2} is not representable in binary64")
        i = math.floor(self.log2)
        return math.ldexp(2.0 ** (self.log2 - i), i)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        if self.is_zero or other.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log2 + other.log2)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        if other.is_zero:
            raise ZeroDivisionError("division by LogScalar zero")
        if self.is_zero:
            return LogScalar.zero()
        return LogScalar(self.log2 - other.log2)

    def __pow__(self, e: float) -> "LogScalar":
        if self.is_zero:
            if e <= 0:
                raise ZeroDivisionError("0 to a nonpositive power")
            return LogScalar.zero()
        return LogScalar(self.log2 * e)

    def _key(self):
        return (-1, 0.0) if self.is_zero else (0, self.log2)

    def __lt__(self, other: "LogScalar") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogScalar") -> bool:
        return self._key() <= other._key()

    def __gt__(self, other: "LogScalar") -> bool:
        return self._key() > other._key()

    def __ge__(self, other: "LogScalar") -> bool:
        return self._key() >= other._key()

    def __repr__(self) -> str:
        return "LogScalar(0)" if self.is_zero else f"LogScalar(2^{self.log2!r})"
