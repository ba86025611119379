"""
Polynomial-coefficient recurrences
==================================

Binomial coefficients satisfy recurrences whose coefficients are
polynomials in the indices.  Writing t, u for the index operators, the
kernel of a multi-Hankel matrix with columns t^k x^i gives such
relations directly, and a Groebner basis in the skew ring t x = x (t+1)
derives further ones without reading any more table terms.
"""

import itertools
from math import comb

from relguess import DRL, QQ, FunctionTable, MonomialOrder, guess_prels, parse_poly
from relguess import skew_buchberger, skew_mul, skew_reduce
from relguess.monomials import enumerate_mixed, enumerate_monomials

drl = MonomialOrder(DRL, 2)
table = FunctionTable("Q", lambda i, j: comb(i, j), 2)

X = list(itertools.islice(enumerate_monomials(drl), 45))
T = list(itertools.islice(enumerate_mixed(drl, tdeg=1), 20))
report = guess_prels(table, drl, X, T)
print("matrix", report.matrix_shape[0], "queries", report.query_count)
for text in report.relation_texts():
    print("  ", text)

# Pascal's rule times (t - u), rewritten in the two guessed relations
P = lambda s: parse_poly(s, QQ, 2)
lhs = skew_mul(P("x*y - y - 1"), P("t - u"))
G = skew_buchberger([P("u*y - (t-u)"), P("(t-u)*x - (t+1)")], drl)
print("basis size", len(G), "; Pascal * (t-u) reduces to zero:", skew_reduce(lhs, G, drl).is_zero())
