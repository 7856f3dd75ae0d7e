from typing import Tuple

import attr

from securesum.domain.dataclass import dataclass
from securesum.exceptions import DivisionByZeroError, FieldMismatchError, NotPrimeError


MAX_MODULUS = 1 << 31

# Deterministic Miller-Rabin witnesses, enough for every n < 3,215,031,751.
_WITNESSES = (2, 3, 5, 7)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def egcd(a: int, b: int) -> Tuple[int, int, int]:
    """
    Extended Euclid. Returns ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``.
    """
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        quotient, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - quotient * x1
        y0, y1 = y1, y0 - quotient * y1
    return a, x0, y0


def inverse_mod(a: int, q: int) -> int:
    a %= q
    if a == 0:
        raise DivisionByZeroError(f"0 has no inverse in F_{q}")
    _, x, _ = egcd(a, q)
    return x % q


def _check_modulus(instance, attribute, q):
    if not isinstance(q, int) or isinstance(q, bool):
        raise NotPrimeError(f"field modulus must be an int, got {q!r}")
    if not 2 <= q < MAX_MODULUS:
        raise NotPrimeError(f"field modulus {q} outside [2, 2^31)")
    if not is_prime(q):
        raise NotPrimeError(f"field modulus {q} is not prime")


@dataclass(frozen=True)
class FieldSpec:
    q: int = attr.ib(validator=_check_modulus)
    """
    Prime modulus of F_q.
    """

    def element(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self.q, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def __str__(self):
        return f"F_{self.q}"


def _check_canonical(instance, attribute, value):
    if not 0 <= value < instance.spec.q:
        raise ValueError(f"{value} is not a canonical residue of F_{instance.spec.q}")


@dataclass(frozen=True)
class FieldElement:
    value: int = attr.ib(converter=int, validator=_check_canonical)
    spec: FieldSpec

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return add(self, neg(other))

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return mul(self, other)

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return mul(self, inv(other))

    def __neg__(self):
        return neg(self)

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def _same_spec(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldMismatchError(a.spec, b.spec)
    return a.spec


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_spec(a, b)
    return FieldElement((a.value + b.value) % spec.q, spec)


def neg(a: FieldElement) -> FieldElement:
    return FieldElement((-a.value) % a.spec.q, a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_spec(a, b)
    return FieldElement(a.value * b.value % spec.q, spec)


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(inverse_mod(a.value, a.spec.q), a.spec)
