"""Guessing linear recurrence relations from multi-Hankel matrices.

Batch and adaptive variants, optionally restricted to a cone of
exponents or split along the cosets of a lattice, plus P-relation
guessing through kernels of rectangular matrices.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .hankel import (BorderedInverse, as_mixed, build_hankel, kernel_from_rref, rank, rref,
                     solve_columns)
from .monomials import divides, immediate_divisors, is_mixed
from .polytext import Names, format_monomial, format_poly
from .skew import SkewPolynomial
from .structures import Lattice
from .tables import bracket, shift


# -- monomial universes --------------------------------------------------

class Universe:
    """Exponents allowed as labels: the orthant or a cone, with its division."""

    def __init__(self, n, cone=None):
        self.n = n
        self.cone = cone

    def contains(self, i):
        return self.cone is None or self.cone.contains(i)

    def divides(self, a, b):
        """``a | b`` for x-monomials or mixed monomials within the universe."""
        if is_mixed(a):
            if not divides(a[0], b[0]):
                return False
            a, b = a[1], b[1]
        if self.cone is None:
            return divides(a, b)
        return self.cone.divides(a, b)

    def generators(self):
        if self.cone is None:
            return [tuple(int(p == q) for q in range(self.n)) for p in range(self.n)]
        return list(self.cone.generators)

    def divisors(self, i):
        """Immediate divisors of an x-monomial inside the universe."""
        if self.cone is None:
            return immediate_divisors(i)
        return self.cone.divisors(i)


def _xpart(m):
    return m[1] if is_mixed(m) else m


def _mono_text(m, names):
    n = names.n
    return format_monomial(as_mixed(m, n), names) or "1"


# -- results -------------------------------------------------------------

@dataclass
class Relation:
    """A guessed relation ``lm + lower terms``."""

    poly: SkewPolynomial
    lm: tuple
    rows: list = dc_field(default_factory=list)
    coset: tuple = None

    def terms(self):
        return self.poly.terms

    def format(self, names=None, order=None):
        names = names or Names(self.poly.n)
        return format_poly(self.poly.terms, self.poly.field, names, order)


@dataclass
class GuessReport:
    relations: list
    staircase: list
    query_count: int
    matrix_shape: list
    order: object = None
    classification: list = None
    trace: list = None
    degenerate: bool = False
    truncated: bool = False

    def relation_texts(self, names=None):
        return [r.format(names, self.order) for r in self.relations]

    def counts(self):
        cls = self.classification or []
        return {"fake": sum(c == "fake" for c in cls),
                "correct": sum(c == "correct-so-far" for c in cls)}

    def to_dict(self, names=None, with_trace=False):
        n = self.relations[0].poly.n if self.relations else (
            len(_xpart(self.staircase[0])) if self.staircase else 1)
        names = names or Names(n)
        out = {
            "relations": self.relation_texts(names),
            "leading_monomials": [_mono_text(r.lm, names) for r in self.relations],
            "staircase": [_mono_text(s, names) for s in self.staircase],
            "query_count": self.query_count,
            "matrix_shape": [list(s) for s in self.matrix_shape],
            "degenerate": self.degenerate,
            "truncated": self.truncated,
        }
        if self.classification is not None:
            out["classification"] = list(self.classification)
            out.update(self.counts())
        if with_trace and self.trace is not None:
            out["trace"] = [_trace_entry(t, names) for t in self.trace]
        return out


def _trace_entry(t, names):
    out = dict(t)
    if "labels" in out:
        out["labels"] = [_mono_text(m, names) for m in out["labels"]]
    if "profile" in out:
        out["profile"] = [_mono_text(m, names) for m in out["profile"]]
    if "coset" in out and out["coset"] is not None:
        out["coset"] = list(out["coset"])
    if "matrix" in out:
        out["matrix"] = [[str(v) for v in row] for row in out["matrix"]]
    return out


def _make_relation(u, lm, cols, gamma, rows, coset=None):
    """``lm + sum gamma_c c`` as a skew polynomial."""
    F, n = u.field, u.dim
    terms = {as_mixed(lm, n): F.one}
    for c, g in zip(cols, gamma):
        if g != F.zero:
            terms[as_mixed(c, n)] = g
    return Relation(SkewPolynomial(F, n, terms), lm, list(rows), coset)


def _reads(rows, cols, n):
    """Distinct table indices read by ``H_{rows, cols}`` (zero weights skipped)."""
    out = set()
    for k, j in (as_mixed(c, n) for c in cols):
        for i in rows:
            idx = tuple(a + b for a, b in zip(i, j))
            if any(k) and any(e == 0 for e, kk in zip(idx, k) if kk):
                continue
            out.add(idx)
    return out


# -- validation ----------------------------------------------------------

def _check_sorted(T, order):
    keys = [order.key(m) for m in T]
    if any(a >= b for a, b in zip(keys, keys[1:])):
        raise ValueError("T must be strictly increasing for the order")


def _check_staircase(T, universe):
    Ts = set(T)
    for m in T:
        if not universe.contains(m):
            raise ValueError(f"{m} lies outside the cone")
        for d in universe.divisors(m):
            if d not in Ts:
                raise ValueError(f"T is not a staircase: {d} divides {m} but is missing")


def _stabilize(S, T, universe):
    """Add every ``m`` of ``T`` dividing an element of ``S``."""
    S = set(S)
    for m in T:
        if m not in S and any(universe.divides(m, s) for s in S):
            S.add(m)
    return S


def _border(T, universe, order, count, keep=None, max_layers=64):
    """The ``count`` smallest monomials outside ``T`` reached from ``T``.

    Breadth-first over products by the universe generators; ``keep``
    filters the monomials collected (e.g. to stay in one coset).
    """
    if count <= 0:
        return []
    Ts = set(T)
    found = set()
    visited = set(Ts)
    frontier = sorted(T, key=order.key) or [(0,) * universe.n]
    for _ in range(max_layers):
        new = set()
        for m in frontier:
            for g in universe.generators():
                c = tuple(a + b for a, b in zip(m, g))
                if c not in visited:
                    visited.add(c)
                    new.add(c)
        if not new:
            break
        found |= {c for c in new if keep is None or keep(c)}
        if len(found) >= count:
            break
        frontier = sorted(new, key=order.key)
    return sorted(found, key=order.key)[:count]


def _minimal_relations(cands, universe, order):
    """Drop relations whose leading monomial is a multiple of another one."""
    cands = sorted(cands, key=lambda r: order.key(r.lm))
    kept = []
    for r in cands:
        if not any(universe.divides(q.lm, r.lm) for q in kept):
            kept.append(r)
    return kept


# -- batch algorithms ----------------------------------------------------

def sfglm(u, order, T, cone=None, extra_rows=0):
    """Batch guessing on the staircase ``T`` (sorted increasingly)."""
    T = [tuple(m) for m in T]
    universe = Universe(u.dim, cone)
    _check_sorted(T, order)
    _check_staircase(T, universe)
    extra = _border(T, universe, order, extra_rows)
    rows = T + extra
    H = build_hankel(u, rows, T)
    _, piv = rref(H.entries, u.field)
    profile = [T[c] for c in piv]
    S = _stabilize(profile, T, universe)
    L = [m for m in T if m not in S]
    rels = []
    pruned = []
    for g in L:
        if any(universe.divides(p, g) for p in pruned):
            continue
        gamma = solve_columns(H.entries[:, piv], H.column(g), u.field)
        if gamma is None:
            raise ArithmeticError(f"column {g} unexpectedly independent")
        rels.append(_make_relation(u, g, profile, gamma, rows))
        pruned.append(g)
    staircase = sorted(S, key=order.key)
    trace = [{"labels": list(T), "profile": profile}]
    return GuessReport(rels, staircase, len(_reads(rows, T, u.dim)), [H.shape], order,
                       trace=trace, degenerate=not piv)


def lattice_sfglm(u, order, T, lattice, jobs=1, extra_rows=0):
    """Batch guessing with one matrix per coset, each augmented with ``1``."""
    T = [tuple(m) for m in T]
    n = u.dim
    universe = Universe(n)
    _check_sorted(T, order)
    _check_staircase(T, universe)
    one = (0,) * n
    parts = {a: [] for a in lattice.domain}
    for m in T:
        parts[lattice.coset(m)].append(m)

    def work(a):
        labels = sorted(set([one] + parts[a]), key=order.key)
        keep = lambda c: lattice.coset(c) == a
        extra = _border(labels, universe, order, extra_rows, keep)
        rows = labels + extra
        H = build_hankel(u, rows, labels)
        _, piv = rref(H.entries, u.field)
        return a, labels, rows, H, piv

    cosets = [a for a in lattice.domain if parts[a]]
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, cosets))
    else:
        results = [work(a) for a in cosets]
    info = {}
    trace = []
    reads = set()
    profile_union = set()
    for a, labels, rows, H, piv in results:
        prof = [labels[c] for c in piv]
        info[a] = (labels, rows, H, piv, prof)
        profile_union |= set(prof)
        reads |= _reads(rows, labels, n)
        trace.append({"coset": a, "labels": labels, "matrix": H.tolist(), "profile": prof})
    S = _stabilize(profile_union, T, universe)
    L = [m for m in T if m not in S]
    rels = []
    pruned = []
    for g in L:
        if any(universe.divides(p, g) for p in pruned):
            continue
        a = lattice.coset(g)
        labels, rows, H, piv, prof = info[a]
        gamma = solve_columns(H.entries[:, piv], H.column(g), u.field)
        if gamma is None:
            raise ArithmeticError(f"column {g} unexpectedly independent")
        rels.append(_make_relation(u, g, prof, gamma, rows, coset=a))
        pruned.append(g)
    staircase = sorted(S, key=order.key)
    shapes = [info[a][2].shape for a in cosets]
    return GuessReport(rels, staircase, len(reads), shapes, order, trace=trace,
                       degenerate=not profile_union)


# -- adaptive algorithms -------------------------------------------------

def adaptive_sfglm(u, order, cone=None, max_staircase=64, max_degree=None, extra_rows=0):
    """Adaptive guessing: grow ``H_{S,S}`` one monomial at a time."""
    return lattice_adaptive_sfglm(u, order, Lattice.full(u.dim), cone=cone,
                                  max_staircase=max_staircase, max_degree=max_degree,
                                  extra_rows=extra_rows)


def lattice_adaptive_sfglm(u, order, lattice, cone=None, max_staircase=64, max_degree=None,
                           extra_rows=0, jobs=1):
    """Adaptive guessing with one growing matrix per coset of ``lattice``.

    Every coset matrix starts as ``H_{{1},{1}}``.  Candidates are the
    smallest unpruned products of a staircase element by a generator of
    the universe.  ``jobs`` is accepted for interface symmetry; the
    candidate queue is global so the run is sequential.
    """
    n = u.dim
    F = u.field
    universe = Universe(n, cone)
    one = (0,) * n
    u0 = u.query(one)
    if u0 == F.zero:
        rel = Relation(SkewPolynomial.constant(F, n), one, [one])
        return GuessReport([rel], [], 1, [(1, 1)], order,
                           trace=[{"step": 1, "labels": [one], "matrix": [[u0]],
                                   "full_rank": False}], degenerate=True)
    S = {a: [one] for a in lattice.domain}
    states = {}
    for a in lattice.domain:
        st = BorderedInverse(F)
        st.try_extend([], [], u0)
        states[a] = st
    trace = [{"step": 1, "coset": None, "labels": [one], "matrix": [[u0]], "full_rank": True}]
    reads = {one}
    gens = universe.generators()
    cand = set()
    seen = {one}

    def push(m):
        for g in gens:
            c = tuple(a + b for a, b in zip(m, g))
            if c in seen:
                continue
            if max_degree is not None and sum(c) > max_degree:
                continue
            seen.add(c)
            cand.add(c)

    push(one)
    rels = []
    truncated = False
    step = 1
    shapes = []
    while cand:
        m = min(cand, key=order.key)
        cand.discard(m)
        if any(universe.divides(r.lm, m) for r in rels):
            continue
        size = len(set().union(*S.values()))
        if max_staircase is not None and size >= max_staircase:
            truncated = True
            break
        a = lattice.coset(m)
        Sa = S[a]
        new = Sa + [m]
        step += 1
        H = build_hankel(u, new, new)
        reads |= _reads(new, new, n)
        if extra_rows:
            keep = lambda c, a=a: lattice.coset(c) == a
            buf = _border(new, universe, order, extra_rows, keep)
            Hr = build_hankel(u, new + buf, new)
            reads |= _reads(new + buf, new, n)
            full = rank(Hr.entries, F) == len(new)
            gamma = None if full else solve_columns(Hr.entries[:, :-1], Hr.entries[:, -1], F)
            rows_used = new + buf
            if not full and gamma is None:
                full = True
        else:
            col = [_py(v) for v in H.entries[:-1, -1]]
            row = [_py(v) for v in H.entries[-1, :-1]]
            gamma = states[a].try_extend(col, row, _py(H.entries[-1, -1]))
            full = gamma is None
            rows_used = list(Sa)
        trace.append({"step": step, "coset": a if len(lattice.domain) > 1 else None,
                      "labels": list(new), "matrix": H.tolist(), "full_rank": full})
        shapes.append(H.shape)
        if full:
            S[a] = new
            push(m)
        else:
            rels.append(_make_relation(u, m, Sa, gamma, rows_used, coset=a))
            for c in list(cand):
                if universe.divides(m, c):
                    cand.discard(c)
    staircase = sorted(set().union(*S.values()), key=order.key)
    return GuessReport(rels, staircase, len(reads), shapes or [(1, 1)], order, trace=trace,
                       truncated=truncated)


def _py(v):
    return int(v) if hasattr(v, "dtype") else v


# -- P-relations ---------------------------------------------------------

def guess_prels(u, order, X, T, cone=None):
    """Right kernel of ``H_{X,T}`` as candidate P-relations.

    ``T`` holds mixed monomials sorted increasingly; each kernel vector has
    a distinct leading column.  Vectors whose leading monomial is a
    multiple of another one's are discarded.
    """
    n = u.dim
    X = [tuple(x) for x in X]
    T = [as_mixed(m, n) for m in T]
    _check_sorted(T, order)
    universe = Universe(n, cone)
    if cone is not None:
        bad = [m for m in list(X) + [c[1] for c in T] if not cone.contains(m)]
        if bad:
            raise ValueError(f"{bad[0]} lies outside the cone")
    H = build_hankel(u, X, T)
    R, piv = rref(H.entries, u.field)
    kern = kernel_from_rref(R, piv, u.field)
    rels = []
    for j, vec in kern:
        terms = {T[c]: v for c, v in enumerate(vec) if v != u.field.zero}
        rels.append(Relation(SkewPolynomial(u.field, n, terms), T[j], list(X)))
    rels = _minimal_relations(rels, universe, order)
    staircase = [T[c] for c in piv]
    degenerate = not piv
    return GuessReport(rels, staircase, len(_reads(X, T, n)), [H.shape], order,
                       degenerate=degenerate)


# -- verification --------------------------------------------------------

def classify_relations(u, relations, shifts):
    """``fake`` if some shift gives a nonzero bracket, else ``correct-so-far``."""
    out = []
    for r in relations:
        terms = r.poly.terms if isinstance(r, Relation) else r.terms
        verdict = "correct-so-far"
        for s in shifts:
            if bracket(u, shift(terms, s)) != u.field.zero:
                verdict = "fake"
                break
        out.append(verdict)
    return out


def classify_report(u, report, shifts):
    report.classification = classify_relations(u, report.relations, shifts)
    return report


def relation_holds_on(u, rel, shifts):
    """True when ``[rel * x^s]_u = 0`` for every ``s`` in ``shifts``."""
    terms = rel.poly.terms if isinstance(rel, Relation) else rel.terms
    return all(bracket(u, shift(terms, s)) == u.field.zero for s in shifts)
