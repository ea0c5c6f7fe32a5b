"""Finite fields GF(p^k) backed by dense addition/multiplication tables.

Elements are plain ints in ``range(q)``.  An element ``c_0 + c_1 t + ... +
c_{k-1} t^{k-1}`` (``t`` the class of ``x`` modulo the defining polynomial) is
stored as the integer ``sum(c_i * p**i)``, so 0 and 1 keep their usual meaning
and prime fields are just integers mod p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache


class FieldError(ValueError):
    pass


class NonPrimeP(FieldError):
    pass


class ReducibleModulus(FieldError):
    pass


class DegreeMismatch(FieldError):
    pass


class InvalidOrder(FieldError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise InvalidOrder otherwise."""
    if q < 2:
        raise InvalidOrder(f"field order must be >= 2, got {q}")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise InvalidOrder(f"{q} is not a prime power")
    return p, k


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except InvalidOrder:
        return False
    return True


# Polynomials over GF(p) are tuples of coefficients, lowest degree first.

def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return a


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = tuple(low) + (1,)
            if not any(_poly_mod(list(poly), divisor, p)):
                return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k (high degree first).

    Returned lowest-degree-first, like every other polynomial in this module.
    """
    for high_first in itertools.product(range(p), repeat=k):
        poly = tuple(reversed(high_first)) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """``p``, ``k`` and the modulus given as coefficients c_k, ..., c_0."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    @property
    def q(self) -> int:
        return self.p**self.k

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``"p"``, ``"p^k"`` or ``"p^k/c_k,...,c_0"``."""
        text = text.strip()
        head, _, poly = text.partition("/")
        base, _, exp = head.partition("^")
        p, k = int(base), int(exp) if exp else 1
        modulus = tuple(int(c) for c in poly.split(",")) if poly else None
        return cls(p, k, modulus)

    @classmethod
    def for_order(cls, q: int) -> FieldSpec:
        p, k = prime_power(q)
        return cls(p, k)

    def resolved(self) -> FieldSpec:
        """Validate and fill in the default modulus."""
        if not is_prime(self.p):
            raise NonPrimeP(f"p={self.p} is not prime")
        if self.k < 1:
            raise DegreeMismatch(f"exponent k={self.k} must be positive")
        if self.k == 1:
            return FieldSpec(self.p, 1, None)
        if self.modulus is None:
            low_first = default_modulus(self.p, self.k)
            return FieldSpec(self.p, self.k, tuple(reversed(low_first)))
        if len(self.modulus) != self.k + 1:
            raise DegreeMismatch(
                f"modulus has degree {len(self.modulus) - 1}, expected {self.k}"
            )
        if any(not 0 <= c < self.p for c in self.modulus):
            raise FieldError(f"modulus coefficients must lie in [0, {self.p})")
        if self.modulus[0] != 1:
            raise FieldError("modulus must be monic")
        if not is_irreducible(tuple(reversed(self.modulus)), self.p):
            raise ReducibleModulus(f"{self} has a reducible modulus")
        return self

    def __str__(self) -> str:
        if self.k == 1:
            return str(self.p)
        modulus = self.modulus
        if modulus is None:
            modulus = tuple(reversed(default_modulus(self.p, self.k)))
        return f"{self.p}^{self.k}/" + ",".join(str(c) for c in modulus)


@dataclass(frozen=True, eq=False)
class Field:
    spec: FieldSpec
    add_table: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False)
    neg_table: tuple[int, ...] = field(repr=False)
    inv_table: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return len(self.neg_table)

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def characteristic(self) -> int:
        return self.spec.p

    @property
    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        result = 1
        for _ in range(e):
            result = self.mul_table[result][a]
        return result

    def from_poly(self, coeffs_low_first: list[int] | tuple[int, ...]) -> int:
        return sum(c * self.p**i for i, c in enumerate(coeffs_low_first))

    def to_poly(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.spec.k):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)


def make_field(spec: FieldSpec | int | str) -> Field:
    """Build GF(q) from a spec, an order q, or a string such as ``"2^2/1,1,1"``."""
    if isinstance(spec, int):
        spec = FieldSpec.for_order(spec)
    elif isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    return _build(spec.resolved())


@lru_cache(maxsize=None)
def _build(spec: FieldSpec) -> Field:
    p, k = spec.p, spec.k
    q = p**k
    digits = [tuple((a // p**i) % p for i in range(k)) for a in range(q)]

    def encode(poly: list[int]) -> int:
        return sum(c * p**i for i, c in enumerate(poly))

    add = tuple(
        tuple(encode([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q))
        for a in range(q)
    )
    modulus = tuple(reversed(spec.modulus)) if k > 1 else (0, 1)

    def poly_mul(a: int, b: int) -> int:
        if k == 1:
            return a * b % p
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(digits[a]):
            if x:
                for j, y in enumerate(digits[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, modulus, p)
        return encode(rem + [0] * (k - len(rem)))

    mul = tuple(tuple(poly_mul(a, b) for b in range(q)) for a in range(q))
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return Field(spec, add, mul, neg, inv)


def check_axioms(F: Field) -> list[str]:
    """Exhaustively test the field axioms; return a list of violations (empty if none)."""
    problems: list[str] = []
    A, M = F.add_table, F.mul_table
    E = range(F.q)
    for a in E:
        if A[0][a] != a or M[1][a] != a:
            problems.append(f"identity fails at {a}")
        if A[a][F.neg_table[a]] != 0:
            problems.append(f"additive inverse fails at {a}")
        if a and M[a][F.inv_table[a]] != 1:
            problems.append(f"multiplicative inverse fails at {a}")
        for b in E:
            if A[a][b] != A[b][a] or M[a][b] != M[b][a]:
                problems.append(f"commutativity fails at ({a},{b})")
            if a and b and M[a][b] == 0:
                problems.append(f"zero divisor ({a},{b})")
            for c in E:
                if A[A[a][b]][c] != A[a][A[b][c]]:
                    problems.append(f"additive associativity fails at ({a},{b},{c})")
                if M[M[a][b]][c] != M[a][M[b][c]]:
                    problems.append(f"multiplicative associativity fails at ({a},{b},{c})")
                if M[a][A[b][c]] != A[M[a][b]][M[a][c]]:
                    problems.append(f"distributivity fails at ({a},{b},{c})")
            if len(problems) > 20:
                return problems
    return problems
