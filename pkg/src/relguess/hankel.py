"""Multi-Hankel matrices, column rank profiles and relation solving.

Row labels are x-monomials ``i``; column labels are x-monomials or mixed
monomials ``(k, j)``.  The entry at row ``i`` and column ``t^k x^j`` is
``[t^k x^{i+j}]_u``.
"""

from dataclasses import dataclass

import numpy as np

from .monomials import is_mixed
from .polytext import Names, format_monomial
from .tables import bracket_monomial


def as_mixed(m, n):
    return m if is_mixed(m) else ((0,) * n, tuple(m))


@dataclass
class MultiHankelMatrix:
    row_labels: list
    col_labels: list
    entries: np.ndarray
    field: object

    @property
    def shape(self):
        return self.entries.shape

    def column(self, label):
        return self.entries[:, self.col_labels.index(label)]

    def tolist(self):
        """Entries as Python scalars (ints or Fractions)."""
        return [[v if not isinstance(v, np.integer) else int(v) for v in row]
                for row in self.entries]

    def dump(self, names=None):
        """Labeled matrix as aligned text."""
        n = len(self.row_labels[0]) if self.row_labels else 0
        names = names or Names(n)

        def lab(m):
            return format_monomial(as_mixed(m, n), names) or "1"

        cols = [lab(c) for c in self.col_labels]
        rows = [lab(r) for r in self.row_labels]
        cells = [[str(v) for v in row] for row in self.tolist()]
        w0 = max([len(r) for r in rows] + [1])
        widths = [max([len(c)] + [len(row[j]) for row in cells]) for j, c in enumerate(cols)]
        lines = [" " * w0 + "  " + "  ".join(c.rjust(w) for c, w in zip(cols, widths))]
        for r, row in zip(rows, cells):
            lines.append(r.rjust(w0) + "  " + "  ".join(v.rjust(w) for v, w in zip(row, widths)))
        return "\n".join(lines)


def build_hankel(u, X, T):
    """``H_{X,T}`` for the table ``u``."""
    F = u.field
    X = [tuple(x) for x in X]
    T = list(T)
    n = u.dim
    mixed_cols = [as_mixed(c, n) for c in T]
    H = F.zeros((len(X), len(T)))
    for r, i in enumerate(X):
        for c, (k, j) in enumerate(mixed_cols):
            idx = tuple(a + b for a, b in zip(i, j))
            H[r, c] = bracket_monomial(u, k, idx)
    return MultiHankelMatrix(X, T, H, F)


# -- elimination ---------------------------------------------------------

def rref(A, field):
    """Reduced row echelon form with pivots chosen left to right.

    Returns ``(R, pivots)`` where ``pivots[r]`` is the pivot column of row
    ``r``.  Works in place on a copy; prime fields below 2^31 use int64.
    """
    R = np.array(A, dtype=field.dtype, copy=True)
    if R.ndim != 2:
        raise ValueError("matrix expected")
    m, ncols = R.shape
    pivots = []
    row = 0
    prime = bool(getattr(field, "p", 0))
    p = field.p if prime else None
    for c in range(ncols):
        if row >= m:
            break
        col = R[row:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        r0 = row + int(nz[0])
        if r0 != row:
            R[[row, r0]] = R[[r0, row]]
        inv = field.inv(R[row, c])
        R[row, c:] = (R[row, c:] * inv) % p if prime else R[row, c:] * inv
        col = R[:, c].copy()
        col[row] = 0
        targets = np.nonzero(col)[0]
        if len(targets):
            f = col[targets].reshape(-1, 1)
            upd = R[targets, c:] - f * R[row, c:]
            R[targets, c:] = upd % p if prime else upd
        pivots.append(c)
        row += 1
    return R, pivots


def rank(A, field):
    return len(rref(A, field)[1])


def column_rank_profile(M, field=None):
    """Leftmost maximal independent set of columns.

    ``M`` is a :class:`MultiHankelMatrix` (returns labels) or an array
    (returns indices, ``field`` required).
    """
    if isinstance(M, MultiHankelMatrix):
        _, piv = rref(M.entries, M.field)
        return [M.col_labels[c] for c in piv]
    return rref(M, field)[1]


def kernel_basis(A, field):
    """Right kernel vectors, one per non-pivot column.

    The vector for non-pivot column ``j`` has 1 at ``j``, zeros at other
    non-pivot columns, so ``j`` is its largest column index.
    """
    return kernel_from_rref(*rref(A, field), field)


def kernel_from_rref(R, piv, field):
    """Kernel vectors from an already computed ``rref`` result."""
    ncols = R.shape[1]
    pivset = set(piv)
    out = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = [field.zero] * ncols
        v[j] = field.one
        for r, c in enumerate(piv):
            if c < j:
                v[c] = field.neg(_scalar(R[r, j]))
        out.append((j, v))
    return out


def solve_columns(A, b, field):
    """Solve ``A g = -b`` exactly; ``None`` when inconsistent.

    ``A`` must have full column rank.
    """
    A = np.asarray(A)
    m, k = A.shape if A.size else (len(b), 0)
    aug = field.zeros((m, k + 1))
    if k:
        aug[:, :k] = A
    aug[:, k] = np.asarray(b, dtype=field.dtype) if len(b) else aug[:, k]
    R, piv = rref(aug, field)
    if k in piv:
        return None
    if len(piv) != k:
        raise ArithmeticError("coefficient matrix is rank deficient")
    return [field.neg(_scalar(R[r, k])) for r in range(k)]


def _scalar(v):
    return int(v) if isinstance(v, np.integer) else v


def solve_relation(u, S, g, rows=None):
    """Coefficients ``gamma`` with ``H_{R,S} gamma + H_{R,{g}} = 0``.

    ``R`` defaults to ``S``.  Returns ``None`` when the column of ``g`` is
    independent of those of ``S``.  With ``S`` empty the result is ``[]``
    when every entry of column ``g`` vanishes.
    """
    rows = list(S) if rows is None else list(rows)
    n = u.dim
    rows = [as_mixed(r, n)[1] for r in rows]
    H = build_hankel(u, rows, list(S) + [g])
    k = len(S)
    return solve_columns(H.entries[:, :k], H.entries[:, k], u.field)


# -- incremental growth for adaptive guessing ----------------------------

class BorderedInverse:
    """Inverse of a growing symmetric-shaped matrix ``H_{S,S}``.

    ``try_extend(col, row, corner)`` tests whether bordering with a new row
    and column keeps full rank.  On success the state is extended; on
    failure the coefficients of the dependency are returned.
    """

    def __init__(self, field):
        self.field = field
        self.inv = []  # list of lists, size |S| x |S|

    @property
    def size(self):
        return len(self.inv)

    def _matvec(self, M, v):
        F = self.field
        out = []
        for row in M:
            acc = F.zero
            for a, b in zip(row, v):
                if a and b:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return out

    def _vecmat(self, v, M):
        F = self.field
        k = len(M)
        out = [F.zero] * k
        for a, row in zip(v, M):
            if a:
                for j in range(k):
                    if row[j]:
                        out[j] = F.add(out[j], F.mul(a, row[j]))
        return out

    def schur(self, col, row, corner):
        """Return ``(s, x, y)`` with ``x = H^-1 col``, ``y = row H^-1``."""
        F = self.field
        x = self._matvec(self.inv, col)
        y = self._vecmat(row, self.inv)
        s = corner
        for a, b in zip(row, x):
            if a and b:
                s = F.sub(s, F.mul(a, b))
        return s, x, y

    def try_extend(self, col, row, corner):
        """``col`` = H_{S,{m}}, ``row`` = H_{{m},S}, ``corner`` = H_{m,m}.

        Returns ``None`` when extended, else ``gamma`` with
        ``H_{S,S} gamma + col = 0``.
        """
        F = self.field
        s, x, y = self.schur(col, row, corner)
        if s == F.zero:
            return [F.neg(v) for v in x]
        si = F.inv(s)
        k = self.size
        new = [[F.zero] * (k + 1) for _ in range(k + 1)]
        for a in range(k):
            xa = F.mul(x[a], si)
            for b in range(k):
                new[a][b] = F.add(self.inv[a][b], F.mul(xa, y[b]))
            new[a][k] = F.neg(xa)
        for b in range(k):
            new[k][b] = F.neg(F.mul(y[b], si))
        new[k][k] = si
        self.inv = new
        return None
