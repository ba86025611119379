"""Coefficient fields: word-size prime fields and exact rationals.

Scalars are plain Python ``int`` (residues in ``[0, p)``) or
``fractions.Fraction``.  The field objects carry the arithmetic and the
numpy conventions used by the dense linear algebra in :mod:`relguess.hankel`.
"""

from fractions import Fraction

import numpy as np

# int64 products of two residues stay exact below this bound
_INT64_SAFE = 1 << 31


def _is_prime(p):
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for p < 3.3e24
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field Z/pZ for a prime ``p < 2**63``."""

    def __init__(self, p):
        p = int(p)
        if p >= 1 << 63 or not _is_prime(p):
            raise ValueError(f"{p} is not a prime below 2**63")
        self.p = p
        self.dtype = np.int64 if p < _INT64_SAFE else object

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    @property
    def spec(self):
        return str(self.p)

    def __call__(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(a), -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e):
        return pow(a, e, self.p)

    def to_str(self, a):
        return str(a)

    def signed(self, a):
        """Symmetric representative, handy for printing."""
        return a - self.p if a > self.p // 2 else a

    # -- array helpers -------------------------------------------------
    def array(self, values):
        arr = np.array(values, dtype=object)
        if arr.size:
            arr = np.vectorize(self.__call__, otypes=[object])(arr)
        return arr.astype(self.dtype) if self.dtype is not object else arr

    def zeros(self, shape):
        if self.dtype is object:
            arr = np.empty(shape, dtype=object)
            arr.fill(0)
            return arr
        return np.zeros(shape, dtype=np.int64)

    def reduce(self, arr):
        return arr % self.p

    def vecmat(self, v, A):
        """Exact ``v @ A`` for residue vectors/matrices."""
        if self.dtype is object or A.shape[0] >= 1 << 16:
            return np.asarray(v, dtype=object).dot(np.asarray(A, dtype=object)) % self.p
        # split v into 16-bit limbs so every partial sum fits in int64
        lo = v & 0xFFFF
        hi = v >> 16
        return ((hi @ A) % self.p * 65536 + lo @ A) % self.p

    def matmul(self, A, B):
        if self.dtype is object or A.shape[1] >= 1 << 16:
            return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object)) % self.p
        lo = A & 0xFFFF
        hi = A >> 16
        return ((hi @ B) % self.p * 65536 + lo @ B) % self.p

    def random(self, rng, size=None):
        if size is None:
            return int(rng.integers(0, self.p))
        if self.dtype is object:
            return np.array([int(rng.integers(0, self.p)) for _ in range(size)], dtype=object)
        return rng.integers(0, self.p, size=size, dtype=np.int64)

    def root_of_unity(self, q):
        """A primitive ``q``-th root of unity; requires ``q | p - 1``."""
        if (self.p - 1) % q:
            raise ValueError(f"no primitive {q}-th root of unity mod {self.p}")
        if q == 1:
            return 1
        primes = [r for r in range(2, q + 1) if q % r == 0 and _is_prime(r)]
        for g in range(2, self.p):
            z = pow(g, (self.p - 1) // q, self.p)
            if all(pow(z, q // r, self.p) != 1 for r in primes):
                return z
        raise ArithmeticError("unreachable")


class RationalField:
    """Exact rationals backed by :class:`fractions.Fraction`."""

    dtype = object
    zero = Fraction(0)
    one = Fraction(1)
    p = 0

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    @property
    def spec(self):
        return "Q"

    def __call__(self, x):
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def pow(self, a, e):
        return Fraction(a) ** e

    def to_str(self, a):
        return str(a)

    def signed(self, a):
        return a

    def array(self, values):
        arr = np.array(values, dtype=object)
        if arr.size:
            arr = np.vectorize(Fraction, otypes=[object])(arr)
        return arr

    def zeros(self, shape):
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr

    def reduce(self, arr):
        return arr

    def vecmat(self, v, A):
        return np.asarray(v, dtype=object).dot(np.asarray(A, dtype=object))

    def matmul(self, A, B):
        return np.asarray(A, dtype=object).dot(np.asarray(B, dtype=object))

    def random(self, rng, size=None):
        if size is None:
            return Fraction(int(rng.integers(-99, 100)))
        return np.array([Fraction(int(rng.integers(-99, 100))) for _ in range(size)], dtype=object)


QQ = RationalField()

DEFAULT_PRIME = 2147483647


def make_field(spec):
    """Build a field from ``"Q"`` or a prime given as int/str."""
    if isinstance(spec, (PrimeField, RationalField)):
        return spec
    if isinstance(spec, str) and spec.strip().upper() in ("Q", "QQ"):
        return QQ
    return PrimeField(int(spec))
