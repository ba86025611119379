"""Text format for polynomials in t and x.

A polynomial is a sum of terms ``c*t1^a1*...*tn^an*x1^b1*...*xn^bn``;
``*`` and ``^1`` are optional and coefficients are integers or
``num/den``.  The parser also accepts parentheses and products in any
order, evaluated with the skew rule ``t_p x_p = x_p (t_p + 1)``.
"""

import re
from fractions import Fraction

from .monomials import MonomialOrder, DRL


def default_names(n):
    """Default ``(xnames, tnames)``: x, y, z / t, u, v up to n=3, else indexed."""
    if n <= 3:
        return tuple("xyz"[:n]), tuple("tuv"[:n])
    return tuple(f"x{p + 1}" for p in range(n)), tuple(f"t{p + 1}" for p in range(n))


class Names:
    """Variable names for the x-block and the t-block."""

    def __init__(self, n, xnames=None, tnames=None):
        dx, dt = default_names(n)
        self.n = n
        self.x = tuple(xnames) if xnames else dx
        self.t = tuple(tnames) if tnames else dt
        if len(self.x) != n or len(self.t) != n:
            raise ValueError(f"need {n} x-names and {n} t-names")
        if len(set(self.x + self.t)) != 2 * n:
            raise ValueError("variable names must be distinct")

    @classmethod
    def parse(cls, n, spec):
        """``spec`` like ``"x,y"`` or ``"x,y;t,u"``."""
        if not spec:
            return cls(n)
        xs, _, ts = spec.partition(";")
        xs = [s.strip() for s in xs.split(",") if s.strip()]
        ts = [s.strip() for s in ts.split(",") if s.strip()] or None
        return cls(n, xs, ts)

    def __repr__(self):
        return f"Names({list(self.x)}, {list(self.t)})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text, names):
    known = sorted(names.x + names.t, key=len, reverse=True)
    out = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            # split glued names such as "xy" or "x0x1"
            rest = name
            while rest:
                for k in known:
                    if rest.startswith(k):
                        out.append(("var", k))
                        rest = rest[len(k):]
                        break
                else:
                    raise ValueError(f"unknown variable {rest!r} in {text!r}")
        else:
            out.append(("sym", sym))
    return out


class _Parser:
    def __init__(self, text, field, names):
        from .skew import SkewPolynomial

        self.P = SkewPolynomial
        self.toks = _tokenize(text, names)
        self.pos = 0
        self.field = field
        self.names = names
        self.n = names.n
        self.text = text

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, msg):
        raise ValueError(f"cannot parse {self.text!r}: {msg}")

    def parse(self):
        if not self.toks:
            return self.P(self.field, self.n)
        out = self.expr()
        if self.pos != len(self.toks):
            self.error(f"unexpected {self.peek()[1]!r}")
        return out

    def expr(self):
        sign = 1
        kind, val = self.peek()
        if kind == "sym" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            kind, val = self.peek()
            if kind == "sym" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "sym" and val == "*":
                self.take()
                acc = acc * self.power()
            elif kind in ("num", "var") or (kind == "sym" and val == "("):
                acc = acc * self.power()
            else:
                return acc

    def power(self):
        base = self.atom()
        kind, val = self.peek()
        if kind == "sym" and val == "^":
            self.take()
            kind, e = self.take()
            if kind != "num":
                self.error("exponent must be a natural number")
            return base ** e
        return base

    def atom(self):
        kind, val = self.take()
        F, n = self.field, self.n
        if kind == "num":
            k2, v2 = self.peek()
            if k2 == "sym" and v2 == "/":
                self.take()
                k3, den = self.take()
                if k3 != "num" or den == 0:
                    self.error("bad denominator")
                return self.P.constant(F, n, F(Fraction(val, den)))
            return self.P.constant(F, n, F(val))
        if kind == "var":
            if val in self.names.x:
                return self.P.x(F, n, self.names.x.index(val))
            return self.P.t(F, n, self.names.t.index(val))
        if kind == "sym" and val == "(":
            inner = self.expr()
            k2, v2 = self.take()
            if v2 != ")":
                self.error("missing ')'")
            return inner
        self.error(f"unexpected {val!r}")


def parse_poly(text, field, names):
    """Parse ``text`` into a :class:`~relguess.skew.SkewPolynomial`."""
    if isinstance(names, int):
        names = Names(names)
    return _Parser(text, field, names).parse()


def _coef_text(field, c):
    if getattr(field, "p", 0):
        return str(int(c)), False
    c = Fraction(c)
    return str(abs(c)), c < 0


def format_monomial(m, names):
    k, i = m
    parts = []
    for name, e in list(zip(names.t, k)) + list(zip(names.x, i)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(terms, field, names, order=None):
    """Format a dict of mixed (or pure) monomials, largest term first.

    Prime-field coefficients are printed as residues in ``[0, p)``.
    """
    if isinstance(names, int):
        names = Names(names)
    n = names.n
    mixed = {}
    for m, c in terms.items():
        if not (len(m) == 2 and isinstance(m[0], tuple)):
            m = ((0,) * n, tuple(m))
        if c != field.zero:
            mixed[m] = c
    if not mixed:
        return "0"
    order = order or MonomialOrder(DRL, n)
    out = []
    for m in sorted(mixed, key=order.key, reverse=True):
        ctext, neg = _coef_text(field, mixed[m])
        mono = format_monomial(m, names)
        if not mono:
            body = ctext
        elif ctext == "1":
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def read_polys(path, field, names):
    """Read one polynomial per line; ``#`` starts a comment."""
    out = []
    with open(path) as fh:
        for ln in fh:
            ln = ln.split("#", 1)[0].strip()
            if ln:
                out.append(parse_poly(ln, field, names))
    return out
