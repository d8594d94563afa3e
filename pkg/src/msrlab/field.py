"""Exact arithmetic over prime fields GF(p) and binary extension fields GF(2^m).

Field elements are plain Python integers holding the canonical representative:
the residue in [0, p) for a prime field, and the packed coefficient mask of
the residue polynomial for a binary extension field (bit i is the coefficient
of x^i).  Equality of elements is therefore plain integer equality, and all
arithmetic is exact.

Extension fields precompute log/antilog tables on a multiplicative generator,
so multiplication and inversion are table lookups.  The generator is found by
search, which keeps the tables correct for any irreducible modulus, not only
primitive ones.
"""

from __future__ import annotations

from .errors import DivisionByZero, FieldError

#: Irreducible polynomials over GF(2), one per supported extension degree,
#: packed as coefficient masks.  These are the classic primitive polynomials
#: used throughout the erasure-coding literature; construction re-verifies
#: irreducibility regardless.
DEFAULT_MODULI = {
    2: 0x7,       # x^2 + x + 1
    3: 0xB,       # x^3 + x + 1
    4: 0x13,      # x^4 + x + 1
    5: 0x25,      # x^5 + x^2 + 1
    6: 0x43,      # x^6 + x + 1
    7: 0x89,      # x^7 + x^3 + 1
    8: 0x11D,     # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,     # x^9 + x^4 + 1
    10: 0x409,    # x^10 + x^3 + 1
    11: 0x805,    # x^11 + x^2 + 1
    12: 0x1053,   # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,   # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,   # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,   # x^15 + x + 1
    16: 0x1100B,  # x^16 + x^12 + x^3 + x + 1
}

MAX_PRIME = (1 << 31) - 1
MAX_EXT_DEGREE = 16

# Inverse tables are only built below this order.
_TABLE_LIMIT = 1 << 16

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _poly_degree(f: int) -> int:
    return f.bit_length() - 1


def _poly_mod(a: int, f: int) -> int:
    """Remainder of the GF(2)[x] division a mod f."""
    df = _poly_degree(f)
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def is_irreducible_gf2(f: int) -> bool:
    """Irreducibility of a GF(2)[x] polynomial by trial division.

    Intended for small degrees (<= 16): tries every polynomial of degree
    1..deg(f)//2 as a divisor.
    """
    deg = _poly_degree(f)
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _poly_mod(f, g) == 0:
                return False
    return True


def default_modulus(m: int) -> int:
    """Built-in irreducible modulus for GF(2^m)."""
    try:
        return DEFAULT_MODULI[m]
    except KeyError:
        raise FieldError(f"no built-in modulus for extension degree {m}") from None


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """A finite field GF(p^m) with arithmetic on canonical integer elements.

    Supported configurations: any prime field GF(p) with p <= 2^31 - 1, and
    binary extension fields GF(2^m) for 2 <= m <= 16 with an explicit
    irreducible modulus (packed coefficient mask).
    """

    __slots__ = ("p", "m", "modulus", "q", "_exp", "_log", "_inv")

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        if not isinstance(p, int) or not is_prime(p):
            raise FieldError(f"characteristic {p!r} is not prime")
        if p > MAX_PRIME:
            raise FieldError(f"characteristic {p} exceeds {MAX_PRIME}")
        if m < 1:
            raise FieldError(f"extension degree must be >= 1, got {m}")
        if m == 1:
            if modulus is not None:
                raise FieldError("prime fields take no modulus")
        else:
            if p != 2:
                raise FieldError("extension fields are supported for p = 2 only")
            if m > MAX_EXT_DEGREE:
                raise FieldError(f"extension degree {m} exceeds {MAX_EXT_DEGREE}")
            if modulus is None:
                raise FieldError("extension fields require an explicit modulus")
            if _poly_degree(modulus) != m:
                raise FieldError(
                    f"modulus {modulus:#x} has degree {_poly_degree(modulus)}, expected {m}"
                )
            if not is_irreducible_gf2(modulus):
                raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.q = p ** m
        self._exp = None
        self._log = None
        self._inv = None
        if m > 1:
            self._build_ext_tables()
        elif p <= _TABLE_LIMIT:
            self._build_prime_inverses()

    # -- construction helpers -------------------------------------------------

    def _mul_raw(self, a: int, b: int) -> int:
        """Carry-less multiply with on-the-fly modulus reduction."""
        mod = self.modulus
        top = 1 << self.m
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return acc

    def _pow_raw(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._mul_raw(out, a)
            a = self._mul_raw(a, a)
            e >>= 1
        return out

    def _build_ext_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order)
        gen = 0
        for g in range(2, q):
            if all(self._pow_raw(g, order // f) != 1 for f in factors):
                gen = g
                break
        if not gen:  # pragma: no cover - every finite field has a generator
            raise FieldError("no multiplicative generator found")
        exp = [0] * (2 * q)
        log = [0] * q
        val = 1
        for i in range(order):
            exp[i] = val
            log[val] = i
            val = self._mul_raw(val, gen)
        for i in range(order, 2 * q):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log

    def _build_prime_inverses(self):
        p = self.p
        inv = [0] * p
        if p > 1:
            inv[1 % p] = 1 % p
        for i in range(2, p):
            inv[i] = (p - (p // i) * inv[p % i]) % p
        self._inv = inv

    # -- arithmetic ------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        return a

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no multiplicative inverse in {self}")
        if self.m == 1:
            if self._inv is not None:
                return self._inv[a]
            return pow(a, self.p - 2, self.p)
        return self._exp[self.q - 1 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def dot(self, xs, ys) -> int:
        """Inner product of two equal-length element sequences."""
        if self.m == 1:
            s = 0
            for x, y in zip(xs, ys):
                s += x * y
            return s % self.p
        exp, log = self._exp, self._log
        s = 0
        for x, y in zip(xs, ys):
            if x and y:
                s ^= exp[log[x] + log[y]]
        return s

    def elements(self) -> range:
        return range(self.q)

    # -- identity --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.modulus == other.modulus
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (FieldSpec, (self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF(2^{self.m}, modulus={self.modulus:#x})"


def field_inverse(x: int, f: FieldSpec) -> int:
    """Multiplicative inverse of x in f; raises DivisionByZero for x = 0."""
    return f.inv(x)
