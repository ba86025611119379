"""Random zero-dimensional ideals invariant under a cyclic diagonal action.

The ideal vanishes on ``orbits`` random orbits of ``Z/q`` acting by
``x_p -> zeta^{e_p} x_p`` with ``e_n = 1``.  Its DRL staircase is the
column rank profile of the evaluation matrix, computed one G-degree at a
time: a monomial of degree ``delta`` evaluates on an orbit as its value at
the base point times ``zeta^{j delta}``, so dependencies only occur inside
a degree and can be read off the base points alone.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .field import DEFAULT_PRIME, PrimeField
from .fglm import SparseMultMatrix
from .hankel import rref
from .monomials import DRL, MonomialOrder, enumerate_monomials
from .skew import SkewPolynomial
from .structures import GDegreeMap


@dataclass
class SyntheticIdeal:
    M: SparseMultMatrix
    gmap: GDegreeMap
    points: np.ndarray
    gb: list
    order: MonomialOrder
    seed: int

    @property
    def D(self):
        return self.M.D

    def xn_values(self):
        return sorted(set(int(v) for v in self.points[:, -1]))

    def eliminant(self):
        """Coefficients of the product of ``(x_n - a)`` over the points."""
        F = self.M.field
        poly = [F.one]
        for a in self.xn_values():
            nxt = [F.zero] * (len(poly) + 1)
            for e, c in enumerate(poly):
                nxt[e + 1] = F.add(nxt[e + 1], c)
                nxt[e] = F.sub(nxt[e], F.mul(c, a))
            poly = nxt
        return poly


def _candidates(n, D, order, extra):
    s = 0
    while comb(s + n, n) < D:
        s += 1
    return list(enumerate_monomials(order, max_degree=s + extra))


def _evaluate(F, base, monos):
    """``E[o, c] = monos[c](base[o])`` mod p."""
    p = F.p
    E = np.ones((len(base), len(monos)), dtype=np.int64)
    for c, m in enumerate(monos):
        col = np.ones(len(base), dtype=np.int64)
        for q, e in enumerate(m):
            if e:
                col = col * np.array([pow(int(a), e, p) for a in base[:, q]], dtype=np.int64) % p
        E[:, c] = col
    return E


class _Rejected(Exception):
    pass


def _attempt(F, n, q, orbits, degrees, rng, order):
    p = F.p
    zeta = F.root_of_unity(q)
    base = rng.integers(1, p, size=(orbits, n), dtype=np.int64)
    last = [pow(int(a), q, p) for a in base[:, -1]]
    if len(set(last)) != orbits:
        raise _Rejected("repeated x_n orbit")
    gmap = GDegreeMap([q], [[e] for e in degrees])
    D = q * orbits
    extra = 1
    while True:
        cand = _candidates(n, D, order, extra)
        top = max(sum(m) for m in cand)
        by_deg = {}
        for m in cand:
            by_deg.setdefault(gmap.gdegree(m), []).append(m)
        stair, expr = [], {}
        for g, monos in by_deg.items():
            E = _evaluate(F, base, monos)
            R, piv = rref(E, F)
            pm = [monos[c] for c in piv]
            stair += pm
            for j, m in enumerate(monos):
                expr[m] = (pm, [int(R[r, j]) for r in range(len(piv))])
        if len(stair) != D:
            raise _Rejected("evaluation matrix is rank deficient")
        if max(sum(m) for m in stair) < top:
            break
        extra += 1
    stair.sort(key=order.key)
    index = {m: c for c, m in enumerate(stair)}

    def nf(m):
        vec = [0] * D
        pm, coefs = expr[m]
        for s, c in zip(pm, coefs):
            vec[index[s]] = c
        return vec

    def in_stair(m):
        return m in index

    xn = n - 1
    columns = []
    for m in stair:
        mx = m[:xn] + (m[xn] + 1,)
        if mx in index:
            columns.append(index[mx])
            continue
        divs = [m2 for m2 in (mx[:r] + (mx[r] - 1,) + mx[r + 1:] for r in range(n) if mx[r])]
        if not all(in_stair(d) for d in divs):
            raise _Rejected("property M fails")
        columns.append(nf(mx))
    nfs = {}
    for r in range(n - 1):
        e = tuple(int(s == r) for s in range(n))
        if e not in index:
            nfs[r] = nf(e)
    M = SparseMultMatrix(F, stair, columns, nf=nfs, gmap=gmap)
    points = np.concatenate([
        np.stack([base[:, r] * pow(zeta, (degrees[r] * j) % q, p) % p for r in range(n)], axis=1)
        for j in range(q)])
    gb = []
    border = sorted({m[:r] + (m[r] + 1,) + m[r + 1:] for m in stair for r in range(n)} - set(index),
                    key=order.key)
    for L in border:
        if all(in_stair(L[:r] + (L[r] - 1,) + L[r + 1:]) for r in range(n) if L[r]):
            terms = {((0,) * n, L): F.one}
            for s, c in zip(*expr[L]):
                if c:
                    terms[((0,) * n, s)] = F.neg(c)
            gb.append(SkewPolynomial(F, n, terms))
    return M, gmap, points, gb


def synthetic_ideal(n=2, q=1, orbits=8, seed=0, p=DEFAULT_PRIME, degrees=None, max_tries=50):
    """A random ``Z/q``-invariant radical ideal of degree ``q * orbits``.

    Satisfies Properties S and M (resampled until both hold).  ``degrees``
    gives the action exponents of ``x_1 .. x_{n-1}``; ``x_n`` has 1.
    """
    F = PrimeField(p)
    rng = np.random.default_rng(seed)
    order = MonomialOrder(DRL, n)
    for _ in range(max_tries):
        degs = list(degrees) if degrees is not None else [int(x) for x in rng.integers(0, q, size=n - 1)]
        degs = [d % q for d in degs] + [1 % q]
        try:
            M, gmap, points, gb = _attempt(F, n, q, orbits, degs, rng, order)
        except _Rejected:
            continue
        return SyntheticIdeal(M, gmap, points, gb, order, seed)
    raise RuntimeError("could not sample an ideal with properties S and M")
