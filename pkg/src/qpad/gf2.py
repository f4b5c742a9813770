"""Binary-field arithmetic and bit-vector helpers.

Bit vectors and elements of GF(2^m) are packed into Python integers with
bit i holding the coefficient of x^i (little-endian).  The text rendering
of a bit vector lists bit 0 first, so ``Bits.from_text("101")`` has bits 0
and 2 set and value 5.  Everything here is a pure function on immutable
values and safe to share between threads.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

MAX_DEGREE = 64

# span/enumeration guards; anything bigger is not desk scale
_MAX_SPAN_BITS = 24


def parity(x: int) -> int:
    """XOR of all bits of a nonnegative integer."""
    return x.bit_count() & 1


@dataclass(frozen=True)
class Bits:
    """Fixed-width bit vector.

    ``width`` is the number of positions and ``value`` packs the bits with
    bit i at integer bit i.  Instances are immutable and hashable.
    """

    width: int
    value: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_text(cls, text: str) -> "Bits":
        """Parse a 0/1 string; the first character is bit 0."""
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        value = sum(1 << i for i, c in enumerate(text) if c == "1")
        return cls(len(text), value)

    def to_text(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.width))

    @classmethod
    def from_hex(cls, width: int, text: str) -> "Bits":
        """Parse ``0x...`` (lowercase hex of the packed integer)."""
        if not text.startswith("0x"):
            raise ValueError(f"expected 0x-prefixed hex, got {text!r}")
        return cls(width, int(text, 16))

    def to_hex(self) -> str:
        return f"0x{self.value:x}"

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise ValueError(f"bit index {i} out of range for width {self.width}")
        return (self.value >> i) & 1

    def __xor__(self, other: "Bits") -> "Bits":
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} != {other.width}")
        return Bits(self.width, self.value ^ other.value)

    def __str__(self):
        return self.to_text()


def dot(x: Bits, y: Bits) -> int:
    """Inner product over GF(2); the widths must agree."""
    if x.width != y.width:
        raise ValueError(f"width mismatch: {x.width} != {y.width}")
    return (x.value & y.value).bit_count() & 1


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(2)[x], coefficients packed into ints


def clmul(a: int, b: int) -> int:
    """Carry-less (polynomial) product."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, mod: int) -> int:
    """Remainder of a modulo mod in GF(2)[x]; mod must be nonzero."""
    if mod == 0:
        raise ValueError("division by the zero polynomial")
    dm = mod.bit_length()
    while a.bit_length() >= dm:
        a ^= mod << (a.bit_length() - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _poly_square(a: int) -> int:
    # squaring over GF(2) just spreads the bits: (sum x^i)^2 = sum x^(2i)
    r = 0
    while a:
        low = a & -a
        r |= 1 << (2 * (low.bit_length() - 1))
        a ^= low
    return r


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def is_irreducible(poly: int) -> bool:
    """Irreducibility over GF(2) of the packed polynomial.

    Trial division by every possible divisor degree up to deg/2 for degrees
    up to 32; Rabin's criterion (x^(2^m) = x mod f plus coprimality at the
    maximal proper subfield degrees) beyond that.
    """
    m = poly.bit_length() - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if poly & 1 == 0:
        return False  # divisible by x
    if m <= 32:
        for ddeg in range(1, m // 2 + 1):
            for cand in range((1 << ddeg) | 1, 1 << (ddeg + 1), 2):
                if poly_mod(poly, cand) == 0:
                    return False
        return True
    # Rabin: x^(2^m) == x (mod poly), and for each prime q | m the map
    # x -> x^(2^(m/q)) has no fixed subfield in common with poly.
    x = 0b10
    r = x
    for _ in range(m):
        r = poly_mod(_poly_square(r), poly)
    if r != x:
        return False
    for q in _prime_factors(m):
        h = x
        for _ in range(m // q):
            h = poly_mod(_poly_square(h), poly)
        if poly_gcd(h ^ x, poly) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^degree) presented by an irreducible modulus polynomial."""

    degree: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.degree <= MAX_DEGREE:
            raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {self.degree}")
        if self.modulus.bit_length() != self.degree + 1:
            raise ValueError(
                f"modulus 0x{self.modulus:x} does not have degree {self.degree}"
            )
        if not is_irreducible(self.modulus):
            raise ValueError(f"modulus 0x{self.modulus:x} is reducible")

    @property
    def order(self) -> int:
        return 1 << self.degree

    def check(self, a: int):
        if not 0 <= a < self.order:
            raise ValueError(f"0x{a:x} is not an element of GF(2^{self.degree})")

    def mul(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return poly_mod(clmul(a, b), self.modulus)

    def pow(self, a: int, e: int) -> int:
        """a**e by square and multiply; a**0 == 1 (including a == 0)."""
        self.check(a)
        if e < 0:
            raise ValueError(f"exponent must be >= 0, got {e}")
        r = 1
        base = a
        while e:
            if e & 1:
                r = poly_mod(clmul(r, base), self.modulus)
            base = poly_mod(clmul(base, base), self.modulus)
            e >>= 1
        return r

    def element(self, value: int) -> "FieldElement":
        self.check(value)
        return FieldElement(self, value)


@dataclass(frozen=True)
class FieldElement:
    """An element of a concrete GF(2^m); supports * (field), ^ and + (xor)."""

    spec: FieldSpec
    value: int

    def __post_init__(self):
        self.spec.check(self.value)

    def _coerce(self, other: "FieldElement") -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise ValueError("field elements live in different fields")
        return other.value

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.spec.mul(self.value, self._coerce(other)))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.spec, self.value ^ self._coerce(other))

    __xor__ = __add__

    def __pow__(self, e: int) -> "FieldElement":
        return FieldElement(self.spec, self.spec.pow(self.value, e))

    def to_hex(self) -> str:
        return f"0x{self.value:x}"

    @classmethod
    def from_hex(cls, spec: FieldSpec, text: str) -> "FieldElement":
        if not text.startswith("0x"):
            raise ValueError(f"expected 0x-prefixed hex, got {text!r}")
        return cls(spec, int(text, 16))

    def __str__(self):
        return self.to_hex()


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def gf_pow(a: FieldElement, e: int) -> FieldElement:
    return a**e


@functools.lru_cache(maxsize=None)
def find_irreducible(m: int) -> FieldSpec:
    """Smallest irreducible degree-m modulus in integer order of the packing.

    Candidates are restricted to odd polynomials (nonzero constant term),
    which for m == 1 gives x + 1.
    """
    if not 1 <= m <= MAX_DEGREE:
        raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {m}")
    for cand in range((1 << m) | 1, 1 << (m + 1), 2):
        if is_irreducible(cand):
            return FieldSpec(m, cand)
    raise RuntimeError(f"no irreducible polynomial of degree {m} found")  # unreachable


# ---------------------------------------------------------------------------
# GF(2) linear algebra on int-packed row vectors


def rref(rows: Sequence[int]) -> dict[int, int]:
    """Reduced row echelon form; returns {pivot bit -> row}.

    Pivots are chosen at the lowest set bit of each row.
    """
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            p = (r & -r).bit_length() - 1
            if p in basis:
                r ^= basis[p]
            else:
                basis[p] = r
                break
    for p in sorted(basis):
        for q in list(basis):
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= basis[p]
    return basis


def rank(rows: Sequence[int]) -> int:
    return len(rref(rows))


def nullspace(rows: Sequence[int], width: int) -> list[int]:
    """Basis of {v : <v, r> == 0 for every row r}, rows packed into ints."""
    basis = rref(rows)
    pivots = set(basis)
    out = []
    for f in range(width):
        if f in pivots:
            continue
        v = 1 << f
        for p, row in basis.items():
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def subgroup_span(basis: Sequence[Bits], width: int | None = None) -> list[Bits]:
    """All GF(2) combinations of an independent basis.

    The result is ordered by the coefficient counter: entry c is the XOR of
    basis[j] over the set bits j of c, so each basis vector doubles the
    prefix.  An empty basis needs an explicit ``width`` and spans {0}.
    """
    if not basis:
        if width is None:
            raise ValueError("empty basis needs an explicit width")
        return [Bits(width, 0)]
    w = basis[0].width
    if any(b.width != w for b in basis):
        raise ValueError("basis vectors have mixed widths")
    if width is not None and width != w:
        raise ValueError(f"width mismatch: {width} != {w}")
    rows = [b.value for b in basis]
    if 0 in rows or rank(rows) != len(rows):
        raise ValueError("basis is linearly dependent")
    if len(basis) > _MAX_SPAN_BITS:
        from .errors import ResourceLimitError

        raise ResourceLimitError(f"span of {len(basis)} generators is too large")
    vals = [0]
    for b in basis:
        vals += [v ^ b.value for v in vals]
    return [Bits(w, v) for v in vals]
