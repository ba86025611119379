"""Skew polynomials in K[t]<x> with t_p x_p = x_p (t_p + 1).

Elements are stored in normal form: a dict from mixed monomials
``(k, i)`` (meaning ``t^k x^i``, all t's on the left) to nonzero field
elements.  Ideals are right ideals: reducers are multiplied on the right.
"""

import itertools
from math import comb

from .monomials import MonomialOrder, DRL, lcm as mono_lcm


def _tshift_powers(k, j):
    """Expand ``(t - j)^k`` as a dict ``q -> integer coefficient``."""
    n = len(k)
    out = {(0,) * n: 1}
    for p in range(n):
        if not k[p]:
            continue
        factor = [(q, comb(k[p], q) * (-j[p]) ** (k[p] - q)) for q in range(k[p] + 1)]
        nxt = {}
        for mono, c in out.items():
            for q, a in factor:
                if a:
                    key = mono[:p] + (mono[p] + q,) + mono[p + 1:]
                    nxt[key] = nxt.get(key, 0) + c * a
        out = nxt
    return out


def monomial_product(a, b):
    """``t^l x^j * t^k x^i = t^l (t - j)^k x^{j+i}`` as ``{(k', i'): int}``."""
    (l, j), (k, i) = a, b
    x = tuple(p + q for p, q in zip(j, i))
    out = {}
    for q, c in _tshift_powers(k, j).items():
        t = tuple(p + r for p, r in zip(l, q))
        out[(t, x)] = c
    return out


class SkewPolynomial:
    """An element of K[t]<x> in normal form."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field, n, terms=None):
        self.field = field
        self.n = n
        clean = {}
        for m, c in (terms or {}).items():
            if not (len(m) == 2 and isinstance(m[0], tuple)):
                m = ((0,) * n, tuple(m))
            c = field(c)
            if c != field.zero:
                clean[(tuple(m[0]), tuple(m[1]))] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @classmethod
    def constant(cls, field, n, c=1):
        return cls(field, n, {((0,) * n, (0,) * n): c})

    @classmethod
    def x(cls, field, n, p, e=1):
        i = tuple(e if q == p else 0 for q in range(n))
        return cls(field, n, {((0,) * n, i): 1})

    @classmethod
    def t(cls, field, n, p, e=1):
        k = tuple(e if q == p else 0 for q in range(n))
        return cls(field, n, {(k, (0,) * n): 1})

    @classmethod
    def monomial(cls, field, n, m, c=1):
        return cls(field, n, {m: c})

    # -- basic protocol -------------------------------------------------
    def __repr__(self):
        from .polytext import format_poly
        return f"SkewPolynomial({format_poly(self.terms, self.field, self.n)!r})"

    def __eq__(self, other):
        if isinstance(other, SkewPolynomial):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _new(self, terms):
        out = SkewPolynomial.__new__(SkewPolynomial)
        out.field, out.n, out.terms = self.field, self.n, terms
        return out

    def _coerce(self, other):
        if isinstance(other, SkewPolynomial):
            return other
        return SkewPolynomial.constant(self.field, self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = F.add(out.get(m, F.zero), c)
            if v == F.zero:
                out.pop(m, None)
            else:
                out[m] = v
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return self._new({m: F.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        F = self.field
        c = F(c)
        if c == F.zero:
            return self._new({})
        return self._new({m: F.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SkewPolynomial):
            return self.scale(other)
        return skew_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e):
        out = SkewPolynomial.constant(self.field, self.n)
        for _ in range(e):
            out = out * self
        return out

    # -- inspection -----------------------------------------------------
    def support(self):
        return set(self.terms)

    def lm(self, order):
        return max(self.terms, key=order.key)

    def lc(self, order):
        return self.terms[self.lm(order)]

    def degree(self):
        return max((sum(k) + sum(i) for k, i in self.terms), default=-1)

    def is_pure_x(self):
        return all(not any(k) for k, _ in self.terms)

    def x_dict(self):
        """Pure-x view ``{i: c}``; requires no t-variables."""
        if not self.is_pure_x():
            raise ValueError("polynomial involves t-variables")
        return {i: c for (_, i), c in self.terms.items()}

    def monic(self, order):
        return self.scale(self.field.inv(self.lc(order)))

    def right_mul_monomial(self, m):
        """``self * t^k x^i`` for a mixed monomial ``m = (k, i)``."""
        F = self.field
        out = {}
        for a, c in self.terms.items():
            for key, w in monomial_product(a, m).items():
                v = F.add(out.get(key, F.zero), F.mul(c, F(w)))
                out[key] = v
        return self._new({k: v for k, v in out.items() if v != F.zero})


def skew_mul(f, g):
    """Product in K[t]<x>, expanded term by term."""
    F = f.field
    out = {}
    for a, c in f.terms.items():
        for b, d in g.terms.items():
            cd = F.mul(c, d)
            for key, w in monomial_product(a, b).items():
                out[key] = F.add(out.get(key, F.zero), F.mul(cd, F(w)))
    return f._new({k: v for k, v in out.items() if v != F.zero})


def default_order(n):
    return MonomialOrder(DRL, n)


# -- G-degrees -----------------------------------------------------------

def is_g_homogeneous(f, gmap):
    """Common G-degree of all monomials of ``f`` or ``None``.

    t-variables have G-degree zero; the zero polynomial is homogeneous of
    degree zero.
    """
    degs = {gmap.gdegree(i) for _, i in f.terms}
    if not degs:
        return gmap.zero()
    if len(degs) > 1:
        return None
    return degs.pop()


# -- division in the (cone) universe -------------------------------------

class _Universe:
    """Divisibility of mixed monomials, optionally with x-quotients in a cone."""

    def __init__(self, n, cone=None):
        self.n = n
        self.cone = cone

    def contains(self, m):
        return self.cone is None or self.cone.contains(m[1])

    def quotient(self, a, b):
        """``q`` with ``b * q`` having leading monomial ``a``, or ``None``."""
        k = tuple(x - y for x, y in zip(a[0], b[0]))
        i = tuple(x - y for x, y in zip(a[1], b[1]))
        if min(k + i, default=0) < 0:
            return None
        if self.cone is not None and not self.cone.contains(i):
            return None
        return (k, i)

    def common_multiples(self, a, b):
        """Minimal common multiples of two mixed monomials."""
        t = tuple(max(x, y) for x, y in zip(a[0], b[0]))
        if self.cone is None:
            return [(t, mono_lcm(a[1], b[1]))]
        i1, i2 = a[1], b[1]
        top = tuple(x + y for x, y in zip(i1, i2))
        cands = []
        for c in itertools.product(*[range(v - x + 1) for v, x in zip(top, i1)]):
            L = tuple(x + y for x, y in zip(i1, c))
            if self.cone.contains(c) and self.cone.divides(i2, L):
                cands.append(L)
        minimal = [L for L in cands
                   if not any(M != L and self.cone.divides(M, L) for M in cands)]
        return [(t, L) for L in sorted(minimal)]


def _check_universe(f, universe):
    for m in f.terms:
        if not universe.contains(m):
            raise AssertionError(f"monomial {m} left the cone universe")


def skew_spoly(f, g, order, cone=None):
    """S-polynomial of ``f`` and ``g`` in the right ideal they span.

    With a cone, the common multiple is taken in ``T[N^n] x T[C]``; when
    several minimal ones exist the smallest for ``order`` is used.
    Raises ``ValueError`` when no common multiple exists.
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of zero")
    universe = _Universe(f.n, cone)
    a, b = f.lm(order), g.lm(order)
    multiples = universe.common_multiples(a, b)
    if not multiples:
        raise ValueError("no common multiple within the cone")
    L = min(multiples, key=order.key)
    return _spoly_at(f, g, a, b, L, order, universe)


def _spoly_at(f, g, a, b, L, order, universe):
    qa, qb = universe.quotient(L, a), universe.quotient(L, b)
    fa = f.right_mul_monomial(qa)
    gb = g.right_mul_monomial(qb)
    F = f.field
    return fa.scale(F.inv(fa.terms[L])) - gb.scale(F.inv(gb.terms[L]))


# -- reduction -----------------------------------------------------------

def _reduce(f, basis, order, universe, trace=None, full=True):
    """Right normal form of ``f`` modulo ``basis``.

    ``trace`` (a list of multipliers, one per basis element) is updated so
    that ``f_in = f_out + sum basis[j] * trace[j]`` when provided.
    """
    F = f.field
    lms = [(g.lm(order), g) for g in basis]
    rem = f._new({})
    cur = f
    while cur.terms:
        m = cur.lm(order)
        c = cur.terms[m]
        for idx, (lg, g) in enumerate(lms):
            q = universe.quotient(m, lg)
            if q is None:
                continue
            gq = g.right_mul_monomial(q)
            coef = F.div(c, gq.terms[m])
            cur = cur - gq.scale(coef)
            if trace is not None:
                trace[idx] = trace[idx] + SkewPolynomial.monomial(F, f.n, q, coef)
            if universe.cone is not None:
                _check_universe(cur, universe)
            break
        else:
            if not full:
                return cur + rem
            rem = rem + f._new({m: c})
            cur = cur - f._new({m: c})
    return rem


def skew_reduce(f, basis, order, cone=None):
    """Normal form of ``f`` modulo the right ideal generators ``basis``."""
    return _reduce(f, [g for g in basis if not g.is_zero()], order, _Universe(f.n, cone))


class BuchbergerResult(list):
    """List of basis elements with ``truncated`` flag and multiplier trace."""

    truncated = False
    trace = None
    inputs = None

    def replay(self):
        """Recombine every element from the inputs; True if all match."""
        if self.trace is None:
            return None
        for h, mults in zip(self, self.trace):
            acc = SkewPolynomial(h.field, h.n)
            for g, q in zip(self.inputs, mults):
                acc = acc + g * q
            if acc != h:
                return False
        return True


def skew_buchberger(gens, order=None, cone=None, gmap=None, max_degree=8, track=True,
                    max_pairs=10000):
    """Right-ideal Groebner basis in K[t]<x>, truncated at ``max_degree``.

    Pairs are processed smallest common multiple first.  The product
    criterion is used only between polynomials free of t.  With ``cone``
    every multiplier keeps its x-part in the cone.  With ``gmap`` inputs
    must be G-homogeneous and so is every element produced.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return BuchbergerResult()
    n, F = gens[0].n, gens[0].field
    order = order or default_order(n)
    universe = _Universe(n, cone)
    for g in gens:
        _check_universe(g, universe)
        if gmap is not None and is_g_homogeneous(g, gmap) is None:
            raise ValueError("input is not G-homogeneous")
    one = SkewPolynomial.constant(F, n)
    zero = SkewPolynomial(F, n)

    basis = []
    traces = []
    for idx, g in enumerate(gens):
        scale = F.inv(g.lc(order))
        basis.append(g.scale(scale))
        tr = [zero] * len(gens)
        tr[idx] = one.scale(scale)
        traces.append(tr)

    pairs = []

    def add_pairs(j):
        for i in range(j):
            a, b = basis[i].lm(order), basis[j].lm(order)
            for L in universe.common_multiples(a, b):
                pairs.append((order.key(L), i, j, L))

    for j in range(len(basis)):
        add_pairs(j)
    truncated = False
    done = 0
    while pairs:
        pairs.sort(key=lambda p: p[0])
        _, i, j, L = pairs.pop(0)
        done += 1
        if done > max_pairs:
            truncated = True
            break
        if sum(L[0]) + sum(L[1]) > max_degree:
            truncated = True
            continue
        f, g = basis[i], basis[j]
        if cone is None and f.is_pure_x() and g.is_pure_x():
            a, b = f.lm(order)[1], g.lm(order)[1]
            if all(x == 0 or y == 0 for x, y in zip(a, b)):
                continue
        a, b = f.lm(order), g.lm(order)
        qa, qb = universe.quotient(L, a), universe.quotient(L, b)
        fa, gb = f.right_mul_monomial(qa), g.right_mul_monomial(qb)
        ca, cb = F.inv(fa.terms[L]), F.inv(gb.terms[L])
        s = fa.scale(ca) - gb.scale(cb)
        trace = None
        if track:
            trace = [zero] * len(basis)
            trace[i] = SkewPolynomial.monomial(F, n, qa, ca)
            trace[j] = SkewPolynomial.monomial(F, n, qb, F.neg(cb))
        if cone is not None:
            _check_universe(s, universe)
        if s.degree() > max_degree:
            truncated = True
            continue
        trace_red = [zero] * len(basis) if track else None
        h = _reduce(s, basis, order, universe, trace_red)
        if h.is_zero():
            continue
        if gmap is not None and is_g_homogeneous(h, gmap) is None:
            raise AssertionError("S-polynomial lost G-homogeneity")
        scale = F.inv(h.lc(order))
        h = h.scale(scale)
        if track:
            # h = (s - sum basis_j r_j) * scale, s = sum basis_j trace_j
            comb_ = [(trace[k] - trace_red[k]).scale(scale) for k in range(len(basis))]
            tr = [zero] * len(gens)
            for k, mult in enumerate(comb_):
                if mult.is_zero():
                    continue
                for src, q in enumerate(traces[k]):
                    if not q.is_zero():
                        tr[src] = tr[src] + q * mult
            traces.append(tr)
        basis.append(h)
        add_pairs(len(basis) - 1)

    # drop elements whose leading monomial is a multiple of another one
    keep = []
    for idx, g in enumerate(basis):
        lg = g.lm(order)
        redundant = False
        for jdx, h in enumerate(basis):
            if jdx == idx:
                continue
            lh = h.lm(order)
            if universe.quotient(lg, lh) is not None and (lg != lh or jdx < idx):
                redundant = True
                break
        if not redundant:
            keep.append(idx)
    # interreduce tails
    out = BuchbergerResult()
    out_traces = []
    for idx in keep:
        others = [basis[j] for j in keep if j != idx]
        tr_red = [zero] * len(others) if track else None
        g = basis[idx]
        lead = g.lm(order)
        head = g._new({lead: g.terms[lead]})
        tail = _reduce(g - head, others, order, universe, tr_red)
        h = head + tail
        out.append(h)
        if track:
            tr = list(traces[idx])
            for k, j in enumerate(x for x in keep if x != idx):
                if tr_red[k].is_zero():
                    continue
                for src, q in enumerate(traces[j]):
                    if not q.is_zero():
                        tr[src] = tr[src] - q * tr_red[k]
            out_traces.append(tr)
    order_key = lambda p: order.key(p[0].lm(order))
    paired = sorted(zip(out, out_traces or [None] * len(out)), key=order_key)
    res = BuchbergerResult(p[0] for p in paired)
    res.truncated = truncated
    if track:
        res.trace = [p[1] for p in paired]
        res.inputs = list(gens)
    return res
