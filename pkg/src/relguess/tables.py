"""Queryable tables: explicit arrays, formulas and lattice-walk counts.

Every table memoizes its values, so ``query_count`` is the number of
distinct indices read since the last :meth:`TableSource.reset`.
"""

import re
import threading

from .field import make_field


class TableIndexError(LookupError):
    """The table cannot supply the requested index."""


class TableSource:
    """Base class: deterministic, memoized, thread-safe queries."""

    def __init__(self, field, dim):
        self.field = make_field(field)
        self.dim = int(dim)
        self._memo = {}
        self._lock = threading.Lock()

    def _compute(self, i):
        raise NotImplementedError

    def query(self, i):
        i = tuple(int(x) for x in i)
        if len(i) != self.dim:
            raise ValueError(f"index {i} has wrong dimension, expected {self.dim}")
        v = self._memo.get(i)
        if v is None:
            if min(i) < 0:
                raise TableIndexError(f"negative index {i}")
            v = self.field(self._compute(i))
            with self._lock:
                v = self._memo.setdefault(i, v)
        return v

    __getitem__ = query

    @property
    def query_count(self):
        return len(self._memo)

    def queried(self):
        """Sorted list of the distinct indices read so far."""
        return sorted(self._memo)

    def reset(self):
        """Forget memoized values so counting starts afresh."""
        with self._lock:
            self._memo = {}


class ExplicitTable(TableSource):
    """A finite table given by a dict ``index -> value``."""

    def __init__(self, field, dim, values, bounds=None):
        super().__init__(field, dim)
        self.values = {tuple(int(x) for x in k): self.field(v) for k, v in values.items()}
        if bounds is None and self.values:
            bounds = [max(k[p] for k in self.values) for p in range(self.dim)]
        self.bounds = tuple(bounds) if bounds is not None else (0,) * self.dim
        for k in self.values:
            if len(k) != self.dim or any(a < 0 or a > b for a, b in zip(k, self.bounds)):
                raise ValueError(f"index {k} outside declared bounds {self.bounds}")

    def _compute(self, i):
        try:
            return self.values[i]
        except KeyError:
            raise TableIndexError(f"index {i} is not stored in this table") from None

    @classmethod
    def from_table(cls, table, indices):
        """Materialize ``table`` at ``indices``."""
        values = {tuple(i): table.query(i) for i in indices}
        return cls(table.field, table.dim, values)


class FunctionTable(TableSource):
    """Table defined by a Python function of the index."""

    def __init__(self, field, func, dim):
        super().__init__(field, dim)
        self.func = func

    def _compute(self, i):
        return self.func(*i)


class WalkCounter:
    """Counts walks from the origin staying in the nonnegative orthant.

    Frontier dynamic programming over positions, extended lazily in the
    number of steps.  Counts are exact integers so one counter can feed
    tables over several fields.
    """

    def __init__(self, steps):
        self.steps = [tuple(int(x) for x in s) for s in steps]
        if not self.steps:
            raise ValueError("empty step set")
        self.k = len(self.steps[0])
        if any(len(s) != self.k for s in self.steps):
            raise ValueError("steps must have equal length")
        self.layers = [{(0,) * self.k: 1}]
        self._lock = threading.Lock()

    def _extend(self, n):
        with self._lock:
            while len(self.layers) <= n:
                nxt = {}
                for pos, c in self.layers[-1].items():
                    for s in self.steps:
                        q = tuple(a + b for a, b in zip(pos, s))
                        if min(q) >= 0:
                            nxt[q] = nxt.get(q, 0) + c
                self.layers.append(nxt)

    def count(self, n, pos):
        if n < 0:
            return 0
        if n >= len(self.layers):
            self._extend(n)
        return self.layers[n].get(tuple(pos), 0)


class WalkTable(TableSource):
    """Walk counts indexed by ``(n, free coordinates)``.

    ``mask`` has one entry per spatial coordinate: 1 keeps it as an index,
    0 fixes it to zero.  Gessel's ``g_{n,0,j}`` uses mask ``(0, 1)``.
    """

    def __init__(self, counter, field, mask=None):
        if not isinstance(counter, WalkCounter):
            counter = WalkCounter(counter)
        self.counter = counter
        self.mask = tuple(int(b) for b in mask) if mask is not None else (1,) * counter.k
        if len(self.mask) != counter.k:
            raise ValueError("mask length must equal walk dimension")
        super().__init__(field, 1 + sum(self.mask))

    def _compute(self, i):
        free = iter(i[1:])
        pos = tuple(next(free) if b else 0 for b in self.mask)
        return self.counter.count(i[0], pos)


KING_STEPS = [(1,), (-1,)]
GESSEL_STEPS = [(1, 0), (1, 1), (-1, 0), (-1, -1)]


def king_walk(field="Q", counter=None):
    """1D walk with steps +1 and -1 on the nonnegative ray."""
    return WalkTable(counter or WalkCounter(KING_STEPS), field)


def gessel_walk(field="Q", counter=None):
    """Gessel walk restricted to ``g_{n,0,j}``."""
    return WalkTable(counter or WalkCounter(GESSEL_STEPS), field, mask=(0, 1))


# -- brackets ------------------------------------------------------------

def _weight(k, i):
    w = 1
    for a, b in zip(i, k):
        if b:
            w *= a ** b
    return w


def bracket_monomial(u, k, i):
    """``[t^k x^i]_u = i^k u_i`` with ``0^0 = 1``."""
    w = _weight(k, i)
    if w == 0:
        return u.field.zero
    return u.field.mul(u.field(w), u.query(i))


def bracket(u, g):
    """Evaluate ``[g]_u`` for ``g`` a dict of monomials to coefficients.

    Keys are pure exponent tuples or mixed ``(k, i)`` pairs.
    """
    F = u.field
    acc = F.zero
    for m, c in g.items():
        if len(m) == 2 and isinstance(m[0], tuple):
            k, i = m
        else:
            k, i = None, m
        if k is None or not any(k):
            term = u.query(i)
        else:
            w = _weight(k, i)
            if w == 0:
                continue
            term = F.mul(F(w), u.query(i))
        acc = F.add(acc, F.mul(F(c), term))
    return acc


def shift(g, s):
    """Right multiplication of a polynomial dict by the x-monomial ``x^s``.

    For mixed terms ``t^k x^i x^s = t^k x^{i+s}`` since t sits on the left.
    """
    out = {}
    for m, c in g.items():
        if len(m) == 2 and isinstance(m[0], tuple):
            key = (m[0], tuple(a + b for a, b in zip(m[1], s)))
        else:
            key = tuple(a + b for a, b in zip(m, s))
        out[key] = c
    return out


# -- files ---------------------------------------------------------------

def _header_fields(line):
    out = {}
    for part in line.split(";"):
        part = part.strip()
        if not part:
            continue
        key, _, rest = part.partition(" ")
        out[key.strip().lower()] = rest.strip()
    return out


def read_table(path):
    """Read a table file.

    Header ``dim n; field p|Q; bounds b1 .. bn`` followed by lines
    ``i1 .. in value``.  Blank lines and ``#`` comments are ignored.
    """
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError(f"{path}: missing header")
    head = _header_fields(lines[0])
    try:
        dim = int(head["dim"])
        field = make_field(head.get("field", "Q"))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"{path}: bad header {lines[0]!r}") from exc
    bounds = [int(b) for b in head["bounds"].split()] if "bounds" in head else None
    if bounds is not None and len(bounds) != dim:
        raise ValueError(f"{path}: expected {dim} bounds")
    values = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != dim + 1:
            raise ValueError(f"{path}: bad line {ln!r}")
        values[tuple(int(x) for x in parts[:dim])] = field(parts[dim])
    return ExplicitTable(field, dim, values, bounds)


def write_table(path, table, indices=None):
    """Write an explicit table (or ``table`` sampled at ``indices``)."""
    if indices is None:
        values = table.values
    else:
        values = {tuple(i): table.query(i) for i in indices}
    keys = sorted(values)
    dim = table.dim
    bounds = [max((k[p] for k in keys), default=0) for p in range(dim)]
    with open(path, "w") as fh:
        fh.write(f"dim {dim}; field {table.field.spec}; bounds {' '.join(map(str, bounds))}\n")
        for k in keys:
            fh.write(" ".join(map(str, k)) + f" {values[k]}\n")


_VEC = re.compile(r"\(([^)]*)\)")


def parse_walk_spec(text):
    """Parse ``dim k; steps: (..); (..); project: m1 .. mk``.

    Returns ``(steps, mask)``.
    """
    text = " ".join(ln.split("#", 1)[0] for ln in text.splitlines())
    m = re.search(r"dim\s+(\d+)", text)
    if not m:
        raise ValueError("walk spec needs 'dim k'")
    k = int(m.group(1))
    body = text[m.end():]
    steps_part, _, proj_part = body.partition("project:")
    if "steps:" not in steps_part:
        raise ValueError("walk spec needs 'steps:'")
    steps_part = steps_part.split("steps:", 1)[1]
    steps = [tuple(int(x) for x in v.split(",")) for v in _VEC.findall(steps_part)]
    if not steps or any(len(s) != k for s in steps):
        raise ValueError(f"steps must be {k}-vectors")
    mask = None
    proj = proj_part.replace(";", " ").split()
    if proj:
        mask = tuple(int(x) for x in proj)
        if len(mask) != k or any(b not in (0, 1) for b in mask):
            raise ValueError("project mask needs k entries in {0, 1}")
    return steps, mask


def read_walk_spec(path):
    with open(path) as fh:
        return parse_walk_spec(fh.read())


def format_walk_spec(steps, mask=None):
    k = len(steps[0])
    out = f"dim {k}; steps: " + "; ".join("(" + ",".join(map(str, s)) + ")" for s in steps)
    if mask is not None:
        out += "; project: " + " ".join(map(str, mask))
    return out + "\n"
