"""Monomials, LEX/DRL orderings, enumeration and staircases.

A pure x-monomial is a tuple of exponents ``(i_1, ..., i_n)`` where ``x_1``
is the largest variable by default.  A mixed monomial ``t^k x^i`` is the
pair ``(k, i)`` of two such tuples; in every mixed order all t-variables
sit below all x-variables.
"""

import itertools
from dataclasses import dataclass

MAX_EXPONENT = (1 << 63) - 1

LEX = "lex"
DRL = "drl"


def is_mixed(m):
    return len(m) == 2 and isinstance(m[0], tuple)


def mono_mul(a, b):
    """Commutative product of two monomials of the same kind."""
    if is_mixed(a):
        return (mono_mul(a[0], b[0]), mono_mul(a[1], b[1]))
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    out = tuple(x + y for x, y in zip(a, b))
    if any(e > MAX_EXPONENT for e in out):
        raise OverflowError("exponent overflow")
    return out


def mono_div(a, b):
    """``a / b`` assuming ``b | a``."""
    if is_mixed(a):
        return (mono_div(a[0], b[0]), mono_div(a[1], b[1]))
    return tuple(x - y for x, y in zip(a, b))


def divides(a, b):
    """Componentwise divisibility ``a | b`` (pure or mixed)."""
    if is_mixed(a):
        return divides(a[0], b[0]) and divides(a[1], b[1])
    return all(x <= y for x, y in zip(a, b))


def lcm(a, b):
    if is_mixed(a):
        return (lcm(a[0], b[0]), lcm(a[1], b[1]))
    return tuple(max(x, y) for x, y in zip(a, b))


def degree(m):
    if is_mixed(m):
        return sum(m[0]) + sum(m[1])
    return sum(m)


def one(n):
    return (0,) * n


def variable(n, p):
    return tuple(int(q == p) for q in range(n))


@dataclass(frozen=True)
class MonomialOrder:
    """LEX or DRL on ``n`` x-variables, extended to ``t^k x^i`` with t below x.

    ``perm`` lists variable indices from largest to smallest; the default
    ``(0, 1, ..., n-1)`` gives ``x_n < ... < x_1``.  The same permutation is
    applied to the t-block.
    """

    kind: str
    n: int
    perm: tuple = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in (LEX, DRL):
            raise ValueError(f"unknown order kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        perm = tuple(range(self.n)) if self.perm is None else tuple(self.perm)
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        object.__setattr__(self, "perm", perm)

    def _flat(self, m):
        if is_mixed(m):
            k, i = m
            if len(k) != self.n or len(i) != self.n:
                raise ValueError("dimension mismatch")
            return tuple(i[p] for p in self.perm) + tuple(k[p] for p in self.perm)
        if len(m) != self.n:
            raise ValueError("dimension mismatch")
        return tuple(m[p] for p in self.perm)

    def key(self, m):
        e = self._flat(m)
        if self.kind == LEX:
            return e
        return (sum(e), tuple(-v for v in reversed(e)))

    def sort(self, monos):
        return sorted(monos, key=self.key)

    def max(self, monos):
        return max(monos, key=self.key)

    def names(self):
        return f"{self.kind.upper()}({' < '.join(f'x{p + 1}' for p in reversed(self.perm))})"


def compare(order, a, b):
    """-1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def _compositions(total, parts, caps=None, offset=0):
    if parts == 1:
        if caps is None or total <= caps[offset]:
            yield (total,)
        return
    top = total if caps is None else min(total, caps[offset])
    for first in range(top + 1):
        for rest in _compositions(total - first, parts - 1, caps, offset + 1):
            yield (first,) + rest


def enumerate_monomials(order, pred=None, caps=None, max_degree=None):
    """Yield x-monomials in increasing order.

    DRL streams are graded and may be unbounded; LEX needs ``caps`` (one
    inclusive exponent bound per variable).  ``pred`` filters monomials.
    """
    n = order.n
    if order.kind == LEX:
        if caps is None:
            raise ValueError("LEX enumeration needs per-variable caps")
        ranges = [range(caps[p] + 1) for p in order.perm]
        for flat in itertools.product(*ranges):
            m = [0] * n
            for pos, p in enumerate(order.perm):
                m[p] = flat[pos]
            m = tuple(m)
            if max_degree is not None and sum(m) > max_degree:
                continue
            if pred is None or pred(m):
                yield m
        return
    d = 0
    while max_degree is None or d <= max_degree:
        layer = [m for m in _compositions(d, n, caps) if pred is None or pred(m)]
        layer.sort(key=order.key)
        yield from layer
        d += 1
        if caps is not None and d > sum(caps):
            return


def enumerate_mixed(order, pred=None, tdeg=None, max_degree=None):
    """Yield mixed monomials ``(k, i)`` in increasing DRL order.

    ``tdeg`` bounds the total t-degree, ``pred`` filters on the x-part.
    """
    if order.kind != DRL:
        raise ValueError("mixed enumeration is graded; use DRL")
    n = order.n
    d = 0
    while max_degree is None or d <= max_degree:
        layer = []
        top = d if tdeg is None else min(d, tdeg)
        for kt in range(top + 1):
            xs = [i for i in _compositions(d - kt, n) if pred is None or pred(i)]
            if not xs:
                continue
            for k in _compositions(kt, n):
                layer.extend((k, i) for i in xs)
        layer.sort(key=order.key)
        yield from layer
        d += 1


def staircase_close(S, T, divides_fn=divides):
    """Add to ``S`` every monomial of ``T`` dividing an element of ``S``."""
    S = set(S)
    extra = {m for m in T if m not in S and any(divides_fn(m, s) for s in S)}
    return S | extra


def is_staircase(S, divisors_fn):
    """Check closure of ``S`` under ``divisors_fn`` (immediate divisors)."""
    S = set(S)
    return all(d in S for m in S for d in divisors_fn(m))


def immediate_divisors(m):
    """``m / x_p`` for each variable present in ``m``."""
    out = []
    for p, e in enumerate(m):
        if e:
            out.append(m[:p] + (e - 1,) + m[p + 1:])
    return out
