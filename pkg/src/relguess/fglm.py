"""Sparse FGLM: from a DRL multiplication matrix to a shape-position LEX basis.

The multiplication-by-``x_n`` matrix ``M`` acts on coordinate vectors in the
staircase basis.  Column ``c`` holds the normal form of ``labels[c] * x_n``:
either a unit vector (trivial column) or a dense vector read off a
Groebner basis element.  Table terms are ``[x_n^e] = r M^e e_1`` and
``[x_i x_n^e] = r M^e NF(x_i)`` for a random row vector ``r``.

Under a diagonal group action the G-degrees split ``M`` into blocks and the
Hankel systems only need exponents in arithmetic progressions of step
``d``, which are reached by big steps with ``M^d``.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import make_field
from .hankel import rref
from .monomials import DRL, LEX, MonomialOrder, divides
from .polytext import Names, format_poly, parse_poly
from .skew import SkewPolynomial


class PropertyMError(ValueError):
    """Some ``m * x_n`` is neither in the staircase nor a leading monomial."""


class SingularHankelError(ArithmeticError):
    """Every random vector tried gave a singular Hankel system."""


# -- column operators ----------------------------------------------------

class ColumnOperator:
    """Right action ``v -> v A`` of a matrix with trivial and dense columns.

    ``targets[c] >= 0`` means column ``c`` is the unit vector at that index;
    dense columns are stored in ``dense`` (``D x k``, positions given by
    ``dense_cols``).  ``groups`` optionally restricts each batch of dense
    columns to the rows where they can be nonzero.
    """

    def __init__(self, field, targets, dense_cols, dense, groups=None):
        self.field = field
        self.targets = np.asarray(targets, dtype=np.int64)
        self.dense_cols = np.asarray(dense_cols, dtype=np.int64)
        self.dense = dense
        self.groups = groups
        self._triv = np.nonzero(self.targets >= 0)[0]
        self._src = self.targets[self._triv]

    @property
    def D(self):
        return len(self.targets)

    @property
    def k(self):
        return len(self.dense_cols)

    def nonzeros(self):
        if self.groups is None:
            dense = int(np.count_nonzero(self.dense))
        else:
            dense = sum(int(np.count_nonzero(B)) for _, _, B in self.groups)
        return len(self._triv) + dense

    def apply(self, v, pool=None):
        """``v A`` for a row vector or a stack of row vectors."""
        F = self.field
        out = F.zeros(v.shape)
        out[..., self._triv] = v[..., self._src]
        if not self.k:
            return out
        if self.groups is None:
            out[..., self.dense_cols] = F.vecmat(v, self.dense)
            return out

        def run(g):
            rows, cols, B = g
            return cols, F.vecmat(v[..., rows], B)

        parts = pool.map(run, self.groups) if pool is not None else map(run, self.groups)
        for cols, vals in parts:
            out[..., cols] = vals
        return out

    def to_dense(self):
        F = self.field
        A = F.zeros((self.D, self.D))
        A[self._src, self._triv] = F.one
        if self.k:
            A[:, self.dense_cols] = self.dense
        return A


class SparseMultMatrix:
    """Multiplication by ``x_n`` in the staircase basis.

    ``columns[c]`` is an int (trivial column: index of ``labels[c] * x_n``)
    or a length-``D`` coefficient vector.  ``nf`` maps a variable index
    ``p < n - 1`` to the coordinate vector of ``NF(x_p)``; variables in the
    staircase default to unit vectors.
    """

    def __init__(self, field, labels, columns, nf=None, gmap=None):
        self.field = F = make_field(field)
        self.labels = [tuple(int(a) for a in m) for m in labels]
        self.D = len(self.labels)
        if self.D == 0:
            raise ValueError("empty staircase")
        self.n = len(self.labels[0])
        if self.labels[0] != (0,) * self.n:
            raise ValueError("the first staircase label must be 1")
        if len(columns) != self.D:
            raise ValueError("need one column per staircase monomial")
        self.index = {m: c for c, m in enumerate(self.labels)}
        targets = []
        dense_cols = []
        dense = []
        for c, col in enumerate(columns):
            if isinstance(col, (int, np.integer)):
                if not 0 <= col < self.D:
                    raise ValueError(f"trivial column {c} points outside the staircase")
                targets.append(int(col))
            else:
                vec = F.array(list(col))
                if vec.shape != (self.D,):
                    raise ValueError(f"dense column {c} has wrong length")
                targets.append(-1)
                dense_cols.append(c)
                dense.append(vec)
        self.targets = np.array(targets, dtype=np.int64)
        self.dense_cols = dense_cols
        self.dense = np.stack(dense, axis=1) if dense else F.zeros((self.D, 0))
        self.nf = {}
        for p in range(self.n - 1):
            if nf is not None and p in nf:
                self.nf[p] = F.array(list(nf[p]))
            else:
                e = tuple(int(q == p) for q in range(self.n))
                if e not in self.index:
                    raise ValueError(f"normal form of x_{p + 1} missing and x_{p + 1} is not in the staircase")
                vec = F.zeros(self.D)
                vec[self.index[e]] = F.one
                self.nf[p] = vec
        self.gmap = None
        self.gdeg = None
        self.blocks = None
        if gmap is not None:
            self.set_gmap(gmap)

    @property
    def k(self):
        return len(self.dense_cols)

    def column(self, c):
        F = self.field
        if self.targets[c] >= 0:
            v = F.zeros(self.D)
            v[self.targets[c]] = F.one
            return v
        return self.dense[:, self.dense_cols.index(c)].copy()

    def columns(self):
        """Columns in file form: ints for trivial, lists for dense."""
        out = []
        for c in range(self.D):
            t = int(self.targets[c])
            out.append(t if t >= 0 else [_py(x) for x in self.column(c)])
        return out

    def operator(self, blocked=False):
        groups = self._groups(self.dense_cols, self.dense, 1) if blocked else None
        return ColumnOperator(self.field, self.targets, self.dense_cols, self.dense, groups)

    def to_dense(self):
        return self.operator().to_dense()

    def __eq__(self, other):
        return (isinstance(other, SparseMultMatrix) and self.field == other.field
                and self.labels == other.labels
                and np.array_equal(self.to_dense(), other.to_dense())
                and all(np.array_equal(self.nf[p], other.nf[p]) for p in self.nf))

    # -- G-degrees ------------------------------------------------------
    def set_gmap(self, gmap):
        if gmap.n != self.n:
            raise ValueError("G-degree map has wrong number of variables")
        self.gmap = gmap
        self.gdeg = [gmap.gdegree(m) for m in self.labels]
        blocks = {}
        for c, g in enumerate(self.gdeg):
            blocks.setdefault(g, []).append(c)
        self.blocks = {g: np.array(ix, dtype=np.int64) for g, ix in blocks.items()}
        step = gmap.variable_degree(self.n - 1)
        for pos, c in enumerate(self.dense_cols):
            want = gmap.add(self.gdeg[c], step)
            nz = np.nonzero(self.dense[:, pos])[0]
            if any(self.gdeg[r] != want for r in nz):
                raise ValueError(f"dense column {self.labels[c]} is not G-homogeneous")
        for p, vec in self.nf.items():
            want = gmap.variable_degree(p)
            if any(self.gdeg[r] != want for r in np.nonzero(vec)[0]):
                raise ValueError(f"normal form of x_{p + 1} is not G-homogeneous")

    def _groups(self, cols, dense, power):
        """Split dense columns by the G-degree block their nonzeros live in."""
        if self.gmap is None or len(self.blocks) == 1:
            return None
        step = self.gmap.scale(self.gmap.variable_degree(self.n - 1), power)
        by_block = {}
        for pos, c in enumerate(cols):
            by_block.setdefault(self.gmap.add(self.gdeg[c], step), []).append(pos)
        groups = []
        for g in sorted(by_block):
            pos = np.array(by_block[g], dtype=np.int64)
            rows = self.blocks.get(g, np.zeros(0, dtype=np.int64))
            B = dense[np.ix_(rows, pos)]
            groups.append((rows, np.asarray(cols, dtype=np.int64)[pos], B))
        return groups

    # -- powers ---------------------------------------------------------
    def apply_col(self, w):
        """``M w`` for a column vector ``w``."""
        F = self.field
        out = F.zeros(self.D)
        triv = self.targets >= 0
        out[self.targets[triv]] = w[triv]
        if self.k:
            extra = F.matmul(self.dense, w[self.dense_cols].reshape(-1, 1)).reshape(-1)
            out = F.reduce(out + extra)
        return out

    def power(self, d, blocked=False):
        """``M^d`` as a :class:`ColumnOperator`.

        A column of ``M^d`` is trivial when ``m * x_n^d`` stays in the
        staircase; otherwise the chain of trivial steps ends at a dense
        column, which is pushed through the remaining steps.  Pushes are
        batched, one G-degree block at a time when degrees are known.
        """
        if d < 1:
            raise ValueError("power must be positive")
        F = self.field
        targets = np.full(self.D, -1, dtype=np.int64)
        cols, starts, remaining = [], [], []
        for c in range(self.D):
            cur, s = c, 0
            while s < d and self.targets[cur] >= 0:
                cur = int(self.targets[cur])
                s += 1
            if s == d:
                targets[c] = cur
            else:
                cols.append(c)
                starts.append(self.dense_cols.index(cur))
                remaining.append(d - s - 1)
        W = self.dense[:, starts] if cols else F.zeros((self.D, 0))
        remaining = np.array(remaining, dtype=np.int64)
        degs = None
        if self.gmap is not None and cols:
            step = self.gmap.variable_degree(self.n - 1)
            # degree of M^(d - remaining) e_c
            degs = [self.gmap.add(self.gdeg[c], self.gmap.scale(step, d - int(r)))
                    for c, r in zip(cols, remaining)]
        for t in range(int(remaining.max()) if cols else 0):
            sel = np.nonzero(remaining > t)[0]
            if degs is None:
                W[:, sel] = self._push(W[:, sel])
                continue
            by_deg = {}
            for j in sel:
                by_deg.setdefault(degs[j], []).append(j)
            for g, js in by_deg.items():
                js = np.array(js, dtype=np.int64)
                W[:, js] = self._push(W[:, js], g)
            for j in sel:
                degs[j] = self.gmap.add(degs[j], step)
        groups = self._groups(cols, W, d) if blocked else None
        return ColumnOperator(F, targets, cols, W, groups)

    def _push(self, W, g=None):
        """``M W`` for columns ``W``; ``g`` is their common G-degree if known."""
        F = self.field
        out = F.zeros(W.shape)
        triv = self.targets >= 0
        out[self.targets[triv]] = W[triv]
        if not self.k:
            return out
        dpos = np.arange(self.k)
        if g is not None:
            dpos = np.array([j for j, c in enumerate(self.dense_cols) if self.gdeg[c] == g],
                            dtype=np.int64)
            if not len(dpos):
                return out
            rows = self.blocks.get(self.gmap.add(g, self.gmap.variable_degree(self.n - 1)))
            src = np.asarray(self.dense_cols, dtype=np.int64)[dpos]
            out[rows] = F.reduce(out[rows] + F.matmul(self.dense[np.ix_(rows, dpos)], W[src]))
            return out
        src = np.asarray(self.dense_cols, dtype=np.int64)
        return F.reduce(out + F.matmul(self.dense, W[src]))


def _py(x):
    return int(x) if isinstance(x, np.integer) else x


# -- loading -------------------------------------------------------------

def staircase_of(leading, n, order, limit=100000):
    """Monomials not divisible by any of ``leading``, sorted by ``order``."""
    for p in range(n):
        if not any(all(m[q] == 0 for q in range(n) if q != p) and m[p] > 0 for m in leading):
            raise ValueError("ideal is not zero-dimensional: no pure power of "
                             f"variable {p + 1} among the leading monomials")
    zero = (0,) * n
    if any(m == zero for m in leading):
        raise ValueError("the ideal is the whole ring")
    seen = {zero}
    todo = [zero]
    while todo:
        m = todo.pop()
        for p in range(n):
            c = m[:p] + (m[p] + 1,) + m[p + 1:]
            if c in seen or any(divides(l, c) for l in leading):
                continue
            seen.add(c)
            todo.append(c)
            if len(seen) > limit:
                raise ValueError("staircase too large")
    return sorted(seen, key=order.key)


def mult_matrix_from_gb(polys, order, gmap=None):
    """Build ``M`` (multiplication by the smallest variable) from a reduced GB."""
    if not polys:
        raise ValueError("empty Groebner basis")
    F = polys[0].field
    n = polys[0].n
    xn = n - 1
    basis = {}
    for g in polys:
        d = g.monic(order).x_dict() if g.terms else {}
        if not d:
            continue
        lm = max(d, key=lambda m: order.key(((0,) * n, m)))
        basis[lm] = d
    labels = staircase_of(list(basis), n, _x_order(order))
    index = {m: c for c, m in enumerate(labels)}

    def tail_vector(lm):
        vec = [F.zero] * len(labels)
        for m, c in basis[lm].items():
            if m == lm:
                continue
            if m not in index:
                raise ValueError(f"basis element with leading monomial {lm} is not reduced")
            vec[index[m]] = F.neg(c)
        return vec

    columns = []
    for m in labels:
        mx = m[:xn] + (m[xn] + 1,)
        if mx in index:
            columns.append(index[mx])
        elif mx in basis:
            columns.append(tail_vector(mx))
        else:
            raise PropertyMError(f"{mx} is neither in the staircase nor a leading monomial")
    nf = {}
    for p in range(n - 1):
        e = tuple(int(q == p) for q in range(n))
        if e in index:
            continue
        if e not in basis:
            raise ValueError(f"x_{p + 1} is neither in the staircase nor a leading monomial")
        nf[p] = tail_vector(e)
    return SparseMultMatrix(F, labels, columns, nf=nf, gmap=gmap)


def _x_order(order):
    """Order on pure x-exponents compatible with ``order``."""
    n = order.n

    class _XOrder:
        def key(self, m):
            return order.key(((0,) * n, m))

    return _XOrder()


def _header_fields(line):
    out = {}
    for part in line.split(";"):
        key, _, rest = part.strip().partition(" ")
        if key:
            out[key.lower()] = rest.strip()
    return out


def read_gb(path):
    """Read a GB file: ``order lex|drl; vars x,y; field p`` then polynomials."""
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].lower().startswith("order"):
        raise ValueError(f"{path}: first line must name the order")
    head = _header_fields(lines[0])
    kind = head["order"].split()[0].lower()
    if kind not in (LEX, DRL):
        raise ValueError(f"{path}: unknown order {kind!r}")
    if "vars" not in head:
        raise ValueError(f"{path}: header needs 'vars'")
    xs = [s.strip() for s in head["vars"].split(",") if s.strip()]
    names = Names(len(xs), xs)
    F = make_field(head.get("field", "2147483647"))
    order = MonomialOrder(kind, len(xs))
    polys = [parse_poly(ln, F, names) for ln in lines[1:]]
    return polys, order, names


def write_gb(path, polys, order, names=None):
    n = polys[0].n
    names = names or Names(n)
    F = polys[0].field
    with open(path, "w") as fh:
        fh.write(f"order {order.kind}; vars {','.join(names.x)}; field {F.spec}\n")
        for g in polys:
            fh.write(format_poly(g.terms, F, names, order) + "\n")


def read_matrix(path, gmap=None):
    """Read a matrix file (see ``docs/formats.md``)."""
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    head = lines[0].split()
    if len(head) not in (3, 4):
        raise ValueError(f"{path}: header must be 'D k n [p]'")
    D, k, n = (int(x) for x in head[:3])
    F = make_field(head[3] if len(head) == 4 else "2147483647")
    labels = [tuple(int(x) for x in ln.split()) for ln in lines[1:1 + D]]
    if len(labels) != D or any(len(m) != n for m in labels):
        raise ValueError(f"{path}: expected {D} staircase monomials with {n} exponents")
    columns = []
    for ln in lines[1 + D:1 + 2 * D]:
        parts = ln.split()
        if parts[0] == "trivial" and len(parts) == 2:
            columns.append(int(parts[1]))
        elif parts[0] == "dense" and len(parts) == D + 1:
            columns.append([F(x) for x in parts[1:]])
        else:
            raise ValueError(f"{path}: bad column line {ln!r}")
    if len(columns) != D:
        raise ValueError(f"{path}: expected {D} column lines")
    nf = {}
    for ln in lines[1 + 2 * D:]:
        parts = ln.split()
        if parts[0] != "nf" or len(parts) != D + 2:
            raise ValueError(f"{path}: bad line {ln!r}")
        nf[int(parts[1]) - 1] = [F(x) for x in parts[2:]]
    M = SparseMultMatrix(F, labels, columns, nf=nf, gmap=gmap)
    if M.k != k:
        raise ValueError(f"{path}: header says {k} dense columns, found {M.k}")
    return M


def write_matrix(path, M):
    with open(path, "w") as fh:
        fh.write(f"{M.D} {M.k} {M.n} {M.field.spec}\n")
        for m in M.labels:
            fh.write(" ".join(map(str, m)) + "\n")
        for col in M.columns():
            if isinstance(col, int):
                fh.write(f"trivial {col}\n")
            else:
                fh.write("dense " + " ".join(map(str, col)) + "\n")
        for p in sorted(M.nf):
            e = tuple(int(q == p) for q in range(M.n))
            if e not in M.index:
                fh.write(f"nf {p + 1} " + " ".join(str(_py(x)) for x in M.nf[p]) + "\n")


def load_mult_matrix(path, gmap=None):
    """Load ``M`` from a GB file or a matrix file, detected by the header."""
    with open(path) as fh:
        first = ""
        for ln in fh:
            first = ln.split("#", 1)[0].strip()
            if first:
                break
    if first.lower().startswith("order"):
        polys, order, _ = read_gb(path)
        return mult_matrix_from_gb(polys, order, gmap)
    return read_matrix(path, gmap)


# -- shape basis ---------------------------------------------------------

def compute_deltas(gmap, D, xn=None):
    """``(d, delta_n, [delta_1 .. delta_{n-1}])`` for the shape LEX basis.

    ``d`` is the order of ``deg x_n``; ``delta_n`` the least exponent with
    ``deg x_n^delta_n = deg x_n^D`` and ``delta_i`` the least with
    ``deg x_n^delta_i = deg x_i``.
    """
    n = gmap.n
    xn = n - 1 if xn is None else xn
    step = gmap.variable_degree(xn)
    zero = gmap.zero()
    powers = [zero]
    while True:
        nxt = gmap.add(powers[-1], step)
        if nxt == zero:
            break
        powers.append(nxt)
    d = len(powers)
    delta_n = D % d
    deltas = []
    for p in range(n):
        if p == xn:
            continue
        want = gmap.variable_degree(p)
        if want not in powers:
            raise ValueError(f"no power of x_{xn + 1} has the G-degree of x_{p + 1}")
        deltas.append(powers.index(want))
    return d, delta_n, deltas


@dataclass
class ShapeLexBasis:
    """``{x_n^D + g_n, x_{n-1} + g_{n-1}, ..., x_1 + g_1}``.

    ``g_n`` and each ``g[i]`` map exponents of ``x_n`` to coefficients.
    """

    field: object
    n: int
    D: int
    g_n: dict
    g: list
    d: int = 1
    delta_n: int = 0
    deltas: list = dc_field(default_factory=list)
    reads: set = dc_field(default_factory=set)
    timings: dict = dc_field(default_factory=dict)
    attempts: int = 1

    def eliminant(self):
        """Coefficients of ``x_n^D + g_n``, lowest degree first."""
        out = [self.field.zero] * (self.D + 1)
        for e, c in self.g_n.items():
            out[e] = c
        out[self.D] = self.field.one
        return out

    def polys(self):
        F, n = self.field, self.n
        xn = n - 1
        out = []
        lead = {(0,) * xn + (self.D,): F.one}
        out.append(self._poly(lead, self.g_n))
        for p in range(n - 2, -1, -1):
            lead = {tuple(int(q == p) for q in range(n)): F.one}
            out.append(self._poly(lead, self.g[p]))
        return out

    def _poly(self, lead, tail):
        F, n = self.field, self.n
        terms = {((0,) * n, m): c for m, c in lead.items()}
        for e, c in tail.items():
            if c != F.zero:
                terms[((0,) * n, (0,) * (n - 1) + (e,))] = c
        return SkewPolynomial(F, n, terms)

    def format(self, names=None):
        names = names or Names(self.n)
        order = MonomialOrder(LEX, self.n)
        return [format_poly(g.terms, self.field, names, order) for g in self.polys()]

    def same_polys(self, other):
        return (self.field == other.field and self.D == other.D
                and _clean(self.g_n) == _clean(other.g_n)
                and [_clean(a) for a in self.g] == [_clean(b) for b in other.g])

    def to_dict(self, names=None):
        return {
            "D": self.D,
            "d": self.d,
            "delta_n": self.delta_n,
            "deltas": list(self.deltas),
            "basis": self.format(names),
            "reads": len(self.reads),
            "attempts": self.attempts,
        }


def _clean(d):
    return {int(e): _py(c) for e, c in d.items() if c}


def _systems(D, n, d, delta_n, deltas):
    """Row/column exponents of the Hankel systems.

    Returns ``(N, rows_n, cols_n, per_i)`` where ``per_i[p]`` is
    ``(cols, rows, shift)``: the unknowns ``x_n^cols``, the multipliers
    ``x_n^rows`` and the offset ``shift`` with ``rows - shift`` in the class
    of ``2 delta_n`` mod ``d``.  Every table term read then comes from
    ``r M^e`` with ``e = 2 delta_n`` mod ``d``, so a single big-step
    sequence serves all systems.
    """
    N = (D - delta_n) // d
    rows_n = [delta_n + r * d for r in range(N)]
    cols_n = [delta_n + c * d for c in range(N)]
    per_i = []
    for di in deltas:
        cols = [di + c * d for c in range((D - 1 - di) // d + 1)] if di < D else []
        shift = (-di) % d
        rows = [2 * delta_n + shift + r * d for r in range(len(cols))]
        per_i.append((cols, rows, shift))
    return N, rows_n, cols_n, per_i


def krylov_sequence(M, r, needs, d=1, blocked=False, jobs=1):
    """``{e: r M^e}`` for every ``e`` in ``needs``.

    The plain path steps by ``M``.  The blocked path steps by ``M`` up to
    the first exponent of each residue class mod ``d`` and then by ``M^d``,
    multiplying G-degree blocks (concurrently when ``jobs > 1``).
    """
    needs = sorted(set(int(e) for e in needs))
    F = M.field
    out = {}
    v = F.array(list(r)) if not isinstance(r, np.ndarray) else r.copy()
    if not needs:
        return out
    pool = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 and blocked else None
    try:
        if not blocked or d == 1:
            op = M.operator(blocked=blocked and M.gmap is not None)
            want = set(needs)
            for e in range(needs[-1] + 1):
                if e in want:
                    out[e] = v
                if e < needs[-1]:
                    v = op.apply(v, pool)
            return out
        classes = {}
        for e in needs:
            classes.setdefault(e % d, []).append(e)
        classes = [classes[c] for c in sorted(classes)]
        starts = sorted(es[0] for es in classes)
        op = M.operator(blocked=M.gmap is not None)
        first = {}
        want = set(starts)
        for e in range(starts[-1] + 1):
            if e in want:
                first[e] = v
            if e < starts[-1]:
                v = op.apply(v, pool)
        big = M.power(d, blocked=M.gmap is not None)
        # all residue classes advance together as one stacked matrix
        V = np.stack([first[es[0]] for es in classes])
        wants = [set(es) for es in classes]
        steps = max((es[-1] - es[0]) // d for es in classes)
        for s in range(steps + 1):
            for c, es in enumerate(classes):
                e = es[0] + s * d
                if e in wants[c]:
                    out[e] = V[c].copy()
            if s < steps:
                V = big.apply(V, pool)
        return out
    finally:
        if pool is not None:
            pool.shutdown()


def solve_shape_basis(M, gmap=None, seed=0, blocked=None, jobs=1, retries=3):
    """LEX shape basis of the ideal behind ``M``.

    Solves one Hankel system for ``g_n`` and one per remaining variable,
    with table terms from :func:`krylov_sequence`.  A singular system means
    an unlucky random vector; up to ``retries`` fresh vectors are drawn.
    """
    F = M.field
    n, D = M.n, M.D
    if gmap is not None and M.gmap is None:
        M.set_gmap(gmap)
    gmap = M.gmap
    if gmap is not None and not gmap.is_trivial():
        d, delta_n, deltas = compute_deltas(gmap, D)
    else:
        d, delta_n, deltas = 1, 0, [0] * (n - 1)
    if blocked is None:
        blocked = gmap is not None and d > 1
    N, rows_n, cols_n, per_i = _systems(D, n, d, delta_n, deltas)
    xn = n - 1

    needs = {ro + c for ro in rows_n for c in cols_n} | {D + ro for ro in rows_n}
    for cols, rows, shift in per_i:
        needs |= {ro + c for ro in rows for c in cols}
        needs |= {ro - shift for ro in rows}
    # r M^(e - s) M^s NF(x_i) = r M^e NF(x_i)
    nf_shifted = []
    for p, (_, _, shift) in enumerate(per_i):
        w = M.nf[p].reshape(-1, 1)
        for _ in range(shift):
            w = M._push(w)
        nf_shifted.append(w.reshape(-1))

    rng = np.random.default_rng(seed)
    for attempt in range(1, retries + 2):
        r = F.random(rng, D)
        t0, c0 = time.perf_counter(), time.process_time()
        vecs = krylov_sequence(M, r, needs, d=d, blocked=blocked, jobs=jobs)
        t1, c1 = time.perf_counter(), time.process_time()
        reads = set()

        def xpow(e):
            reads.add((0,) * xn + (e,))
            return vecs[e][0]

        def xvar(p, e):
            reads.add(tuple(int(q == p) for q in range(xn)) + (e,))
            return _dot(F, vecs[e - per_i[p][2]], nf_shifted[p])

        try:
            systems = [(rows_n, cols_n, [xpow(D + ro) for ro in rows_n])]
            systems += [(rows, cols, [xvar(p, ro) for ro in rows])
                        for p, (cols, rows, _) in enumerate(per_i)]
            sols = _solve_systems(F, systems, xpow)
        except ArithmeticError:
            continue
        g_n, g = sols[0], sols[1:]
        t2 = time.perf_counter()
        return ShapeLexBasis(F, n, D, g_n, g, d, delta_n, list(deltas), reads,
                             {"seq_gen": t1 - t0, "seq_gen_cpu": c1 - c0, "guess": t2 - t1}, attempt)
    raise SingularHankelError(f"Hankel system singular for {retries + 1} random vectors")


def _dot(F, v, w):
    nz = np.nonzero(w)[0]
    if len(nz) == 1 and w[nz[0]] == F.one:
        return _py(v[nz[0]])
    return _py(F.vecmat(v, w.reshape(-1, 1))[0])


def _hankel(F, rows, cols, xpow):
    H = F.zeros((len(rows), len(cols)))
    for a, ro in enumerate(rows):
        for b, c in enumerate(cols):
            H[a, b] = xpow(ro + c)
    return H


def _solve_systems(F, systems, xpow):
    """Solve Hankel systems ``H gamma = -rhs``; equal matrices share one elimination."""
    groups = {}
    for s, (rows, cols, rhs) in enumerate(systems):
        groups.setdefault((tuple(rows), tuple(cols)), []).append(s)
    out = [None] * len(systems)
    for (rows, cols), members in groups.items():
        if not cols:
            for s in members:
                if any(x != F.zero for x in systems[s][2]):
                    raise ArithmeticError("inconsistent empty system")
                out[s] = {}
            continue
        k = len(cols)
        aug = F.zeros((len(rows), k + len(members)))
        aug[:, :k] = _hankel(F, rows, cols, xpow)
        for j, s in enumerate(members):
            aug[:, k + j] = F.array(systems[s][2])
        R, piv = rref(aug, F)
        if piv[:k] != list(range(k)) or len(piv) != k:
            raise ArithmeticError("singular or inconsistent Hankel system")
        for j, s in enumerate(members):
            gamma = [F.neg(_py(R[r, k + j])) for r in range(k)]
            out[s] = {e: c for e, c in zip(cols, gamma) if c != F.zero}
    return out


def query_formula(D, n, d=1):
    """Distinct table terms predicted for the aligned shape case.

    ``S`` holds the powers ``x_n^{jd} < x_n^D`` and ``L`` adds the leading
    monomials ``x_n^D, x_1, .., x_{n-1}``; the count is ``|S + (S u L)|``.
    """
    xn = n - 1
    S = {(0,) * xn + (j * d,) for j in range((D - 1) // d + 1)}
    L = set(S) | {(0,) * xn + (D,)} | {tuple(int(q == p) for q in range(n)) for p in range(xn)}
    return len({tuple(a + b for a, b in zip(s, l)) for s in S for l in L})


def residuals(M, basis, r, exponents):
    """``r M^e (NF(x_i) + g_i(M) e_1)`` and ``r M^e (M^D + g_n(M)) e_1``.

    Returns a list of residual tuples, one per exponent; all zero when the
    basis holds on those Krylov shifts.
    """
    F = M.field
    D = M.D
    powers = [None] * (D + 1)
    w = F.zeros(D)
    w[0] = F.one
    for e in range(D + 1):
        powers[e] = w
        w = M.apply_col(w)

    def poly_vec(tail, lead):
        acc = lead.copy()
        for e, c in tail.items():
            acc = F.reduce(acc + F.array([c])[0] * powers[e])
        return acc

    vecs = [poly_vec(basis.g_n, powers[D])]
    vecs += [poly_vec(basis.g[p], M.nf[p]) for p in range(M.n - 1)]
    seq = krylov_sequence(M, r, exponents)
    return [tuple(_dot(F, seq[e], vec) for vec in vecs) for e in sorted(set(exponents))]


def blocked_speedup_bench(M, gmap=None, seed=0, jobs=1, repeats=1, key="seq_gen"):
    """Time the plain and blocked paths and check they agree.

    Returns a dict with both timings (best of ``repeats``) and the bases.
    ``seq_gen`` is wall time; ``seq_gen_cpu`` is process CPU time, which is
    steadier when BLAS threads compete for cores. ``key`` picks which one
    ranks the repeats.
    """
    if gmap is not None:
        M.set_gmap(gmap)
    runs = {}
    for mode in ("plain", "blocked"):
        best = None
        for _ in range(repeats):
            b = solve_shape_basis(M, seed=seed, blocked=(mode == "blocked"), jobs=jobs)
            if best is None or b.timings[key] < best.timings[key]:
                best = b
        runs[mode] = best
    if not runs["plain"].same_polys(runs["blocked"]):
        raise AssertionError("plain and blocked paths disagree")
    plain, blocked = runs["plain"].timings, runs["blocked"].timings
    return {
        "D": M.D,
        "k": M.k,
        "group_order": M.gmap.order if M.gmap is not None else 1,
        "plain": dict(plain),
        "blocked": dict(blocked),
        "speedup": plain["seq_gen"] / max(blocked["seq_gen"], 1e-12),
        "identical": True,
        "basis": runs["blocked"],
    }
