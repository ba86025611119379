"""
Constant-coefficient recurrences from a table
=============================================

A two-index sequence over F_7 is built from two exponentials with
polynomial amplitudes.  Its recurrences form a zero-dimensional ideal;
the batch guesser recovers its reduced Groebner basis from a handful of
table terms, for two different monomial orders.
"""

import itertools

from relguess import DRL, LEX, FunctionTable, MonomialOrder, PrimeField, classify_relations, sfglm

F7 = PrimeField(7)


def u(i, j):
    return (5 + 4 * i + 3 * j) * 2 ** (i + j) + (3 + 6 * i + j) * 5 ** (i + j)


table = FunctionTable(F7, u, 2)

# LEX(y < x): columns 1, y, .., y^4 and a few powers of x are enough
lex = MonomialOrder(LEX, 2)
T = [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 0), (1, 1), (2, 0), (3, 0), (4, 0)]
report = sfglm(table, lex, T)
print("LEX basis:", report.relation_texts())
print("staircase:", report.staircase, "queries:", report.query_count)

# DRL(y < x): all monomials of degree at most 3
table.reset()
drl = MonomialOrder(DRL, 2)
T = drl.sort([m for m in itertools.product(range(4), repeat=2) if sum(m) <= 3])
report = sfglm(table, drl, T)
print("DRL basis:", report.relation_texts())
print("queries:", report.query_count)

# the guesses only saw a few terms; check them on many more shifts
shifts = [m for m in itertools.product(range(21), repeat=2) if sum(m) <= 20]
print("verdicts:", classify_relations(table, [r.poly for r in report.relations], shifts))
