"""Support structures: cones, integer lattices and G-degree maps."""

import itertools
import threading


def _xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_rows(vectors, n):
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns the nonzero echelon rows with positive pivots; entries above a
    pivot are reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        pivot = nz[0]
        for r in nz[1:]:
            g, s, t = _xgcd(pivot[col], r[col])
            a, b = pivot[col] // g, r[col] // g
            new_pivot = [s * x + t * y for x, y in zip(pivot, r)]
            other = [b * x - a * y for x, y in zip(pivot, r)]
            pivot = new_pivot
            if any(other):
                rest.append(other)
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        basis.append((col, pivot))
        rows = [r for r in rest if any(r)]
        col += 1
    # reduce above pivots
    for k in range(len(basis)):
        ck, rk = basis[k]
        for j in range(k):
            cj, rj = basis[j]
            q = rj[ck] // rk[ck]
            if q:
                basis[j] = (cj, [x - q * y for x, y in zip(rj, rk)])
    return basis


def integer_kernel(A):
    """Basis of ``{v in Z^m : A v = 0}`` for an integer matrix ``A`` (r x m)."""
    r = len(A)
    m = len(A[0]) if r else 0
    # column operations on [A; I]
    cols = [[A[i][j] for i in range(r)] + [int(k == j) for k in range(m)] for j in range(m)]
    for i in range(r):
        active = [c for c in cols if c[i]]
        idle = [c for c in cols if not c[i]]
        if not active:
            cols = idle
            continue
        piv = active[0]
        for c in active[1:]:
            g, s, t = _xgcd(piv[i], c[i])
            a, b = piv[i] // g, c[i] // g
            piv, other = (
                [s * x + t * y for x, y in zip(piv, c)],
                [b * x - a * y for x, y in zip(piv, c)],
            )
            idle.append(other)
        cols = idle
    return [c[r:] for c in cols]


class Cone:
    """Submonoid of N^n spanned by nonnegative generators."""

    def __init__(self, generators):
        gens = [tuple(int(x) for x in g) for g in generators]
        if not gens:
            raise ValueError("a cone needs at least one generator")
        n = len(gens[0])
        if any(len(g) != n or min(g) < 0 for g in gens):
            raise ValueError("generators must be nonnegative vectors of equal length")
        self.generators = tuple(g for g in gens if any(g))
        self.n = n
        self._memo = {(0,) * n: True}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Cone({list(self.generators)})"

    def contains(self, i):
        """Membership by reachability over the box below ``i``."""
        i = tuple(i)
        if len(i) != self.n:
            raise ValueError("dimension mismatch")
        if min(i) < 0:
            return False
        memo = self._memo
        if i in memo:
            return memo[i]
        # iterative DFS; every value written is final, so concurrent fills agree
        stack = [i]
        while stack:
            v = stack[-1]
            if v in memo:
                stack.pop()
                continue
            pending = False
            found = False
            for g in self.generators:
                w = tuple(a - b for a, b in zip(v, g))
                if min(w) < 0:
                    continue
                hit = memo.get(w)
                if hit is None:
                    stack.append(w)
                    pending = True
                elif hit:
                    found = True
                    break
            if found:
                with self._lock:
                    memo[v] = True
                stack.pop()
            elif not pending:
                with self._lock:
                    memo[v] = False
                stack.pop()
        return memo[i]

    __contains__ = contains

    def divides(self, a, b):
        """``a`` divides ``b`` inside the cone: ``b - a`` lies in the cone."""
        return self.contains(tuple(y - x for x, y in zip(a, b)))

    def divisors(self, m):
        """Immediate cone divisors ``m - g`` of ``m`` that stay in the cone."""
        out = []
        for g in self.generators:
            w = tuple(a - b for a, b in zip(m, g))
            if min(w) >= 0 and self.contains(w):
                out.append(w)
        return out


def orthant(n):
    return Cone([tuple(int(p == q) for q in range(n)) for p in range(n)])


class Lattice:
    """Full-rank sublattice of Z^n with a fundamental domain.

    ``basis`` holds generating vectors (rows).  The fundamental domain is
    computed from the Hermite form unless given explicitly, in which case it
    is validated.
    """

    def __init__(self, basis, fundamental_domain=None):
        basis = [tuple(int(x) for x in v) for v in basis]
        if not basis:
            raise ValueError("empty lattice basis")
        self.n = n = len(basis[0])
        self.basis = tuple(basis)
        self.hnf = hermite_rows(basis, n)
        if len(self.hnf) < n:
            raise ValueError("lattice basis must have full rank")
        self.index = 1
        for c, row in self.hnf:
            self.index *= row[c]
        if fundamental_domain is None:
            ranges = [range(row[c]) for c, row in self.hnf]
            domain = [tuple(v) for v in itertools.product(*ranges)]
        else:
            domain = [tuple(int(x) for x in a) for a in fundamental_domain]
        if (0,) * n not in domain:
            raise ValueError("fundamental domain must contain 0")
        self.domain = tuple(domain)
        self._rep = {}
        for a in self.domain:
            key = self.reduce(a)
            if key in self._rep:
                raise ValueError(f"{a} and {self._rep[key]} lie in the same coset")
            self._rep[key] = a
        if len(self._rep) != self.index:
            raise ValueError(
                f"fundamental domain has {len(self._rep)} cosets, lattice index is {self.index}"
            )

    def __repr__(self):
        return f"Lattice({list(self.basis)}, domain={list(self.domain)})"

    def reduce(self, v):
        """Canonical representative of ``v + Lambda`` with ``0 <= v_c < pivot_c``."""
        v = list(v)
        for c, row in self.hnf:
            q = v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    def coset(self, v):
        """The element ``a`` of the fundamental domain with ``v - a`` in the lattice."""
        key = self.reduce(v)
        try:
            return self._rep[key]
        except KeyError:
            raise ValueError(f"fundamental domain does not cover the coset of {tuple(v)}") from None

    def contains(self, v):
        return not any(self.reduce(v))

    @classmethod
    def full(cls, n):
        return cls([tuple(int(p == q) for q in range(n)) for p in range(n)])


class GDegreeMap:
    """G-degrees for a diagonal action of Z/q_1 x ... x Z/q_l.

    ``degrees[p]`` is the degree of ``x_{p+1}``; t-variables have degree 0.
    """

    def __init__(self, invariant_factors, degrees):
        self.q = tuple(int(x) for x in invariant_factors)
        for a, b in zip(self.q, self.q[1:]):
            if b % a:
                raise ValueError("invariant factors must divide each other")
        self.degrees = tuple(tuple(int(e) % q for e, q in zip(d, self.q)) for d in degrees)
        if any(len(d) != len(self.q) for d in self.degrees):
            raise ValueError("each degree needs one entry per invariant factor")
        self.n = len(self.degrees)

    def __repr__(self):
        return f"GDegreeMap({list(self.q)}, {list(self.degrees)})"

    @property
    def order(self):
        out = 1
        for q in self.q:
            out *= q
        return out

    def zero(self):
        return (0,) * len(self.q)

    def add(self, a, b):
        return tuple((x + y) % q for x, y, q in zip(a, b, self.q))

    def scale(self, a, k):
        return tuple((x * k) % q for x, q in zip(a, self.q))

    def of_exponents(self, i):
        out = [0] * len(self.q)
        for e, d in zip(i, self.degrees):
            if e:
                for l, q in enumerate(self.q):
                    out[l] = (out[l] + e * d[l]) % q
        return tuple(out)

    def gdegree(self, m):
        """G-degree of an x-monomial or of a mixed ``(k, i)`` monomial."""
        if len(m) == 2 and isinstance(m[0], tuple):
            m = m[1]
        if len(m) != self.n:
            raise ValueError("dimension mismatch")
        return self.of_exponents(m)

    def variable_degree(self, p):
        return self.degrees[p]

    def is_trivial(self):
        return all(not any(d) for d in self.degrees)

    def zero_lattice(self):
        """Lattice of exponents of G-degree zero, one coset per reachable degree."""
        n, l = self.n, len(self.q)
        if self.is_trivial():
            return Lattice.full(n)
        # i in Lambda  <=>  exists y with sum_p i_p deg_p = q * y componentwise
        A = [[self.degrees[p][r] for p in range(n)] + [-self.q[r] * int(s == r) for s in range(l)]
             for r in range(l)]
        kernel = integer_kernel(A)
        gens = [v[:n] for v in kernel]
        gens += [tuple(self.q[-1] * int(p == r) for r in range(n)) for p in range(n)]
        rows = hermite_rows(gens, n)
        return Lattice([row for _, row in rows])


def gdegree_zero_lattice(gmap):
    return gmap.zero_lattice()


def parse_gdeg(text):
    """Parse ``group q1 .. ql`` then one line (or ``;`` part) of degrees per variable."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.replace(";", "\n").splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("group"):
        raise ValueError("G-degree file must start with 'group q1 .. ql'")
    q = [int(x) for x in lines[0].split()[1:]]
    degrees = [[int(x) for x in ln.split()] for ln in lines[1:]]
    return GDegreeMap(q, degrees)


def read_gdeg(path):
    with open(path) as fh:
        return parse_gdeg(fh.read())


def format_gdeg(gmap):
    out = ["group " + " ".join(map(str, gmap.q))]
    out += [" ".join(map(str, d)) for d in gmap.degrees]
    return "\n".join(out) + "\n"


def _int_rows(text):
    rows = []
    for ln in text.replace(";", "\n").splitlines():
        ln = ln.split("#", 1)[0].replace(",", " ").strip()
        if ln:
            rows.append(ln)
    return rows


def parse_cone(text):
    """One generator per line (or ``;``-separated), entries split by spaces or commas."""
    gens = [tuple(int(x) for x in ln.split()) for ln in _int_rows(text)]
    return Cone(gens)


def parse_lattice(text):
    """Basis rows, optionally followed by ``domain`` and one vector per line."""
    basis, domain, target = [], None, None
    target = basis
    for ln in _int_rows(text):
        if ln.lower() == "domain":
            domain = []
            target = domain
            continue
        target.append(tuple(int(x) for x in ln.split()))
    return Lattice(basis, domain)


def format_cone(cone):
    return "\n".join(" ".join(map(str, g)) for g in cone.generators) + "\n"


def format_lattice(lattice, with_domain=False):
    out = [" ".join(map(str, v)) for v in lattice.basis]
    if with_domain:
        out.append("domain")
        out += [" ".join(map(str, a)) for a in lattice.domain]
    return "\n".join(out) + "\n"


def read_cone(path):
    with open(path) as fh:
        return parse_cone(fh.read())


def read_lattice(path):
    with open(path) as fh:
        return parse_lattice(fh.read())
