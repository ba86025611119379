"""
Lattice and cone structure
==========================

When the support of a table is periodic, the Hankel matrix splits into
one block per coset of a lattice.  The table 2^i ((j+1) mod 3) has the
ideal <y^3 - 1, x - 2>; the blocks recover it, while the same ideal seen
through 2^i (j mod 3) leaves the trivial coset empty and fails.  Mixing
the two tables with a generic weight repairs it.

The second half restricts the King walk to a cone and shows how a short
buffer lets a fake relation through.
"""

from relguess import LEX, Cone, FunctionTable, Lattice, MonomialOrder, lattice_adaptive_sfglm, lattice_sfglm
from relguess import adaptive_sfglm, classify_relations
from relguess.tables import king_walk

lex = MonomialOrder(LEX, 2)
lattice = Lattice([(0, 3), (1, 0)])
T = [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 0)]


def show(name, report):
    print(f"{name}: {report.relation_texts()}")
    for step in report.trace:
        rows = [[int(v) for v in r] for r in step["matrix"]]
        print(f"   coset {step['coset']}: {rows} profile {step['profile']}")


show("good", lattice_sfglm(FunctionTable("Q", lambda i, j: 2 ** i * ((j + 1) % 3), 2), lex, T, lattice))
show("shifted", lattice_sfglm(FunctionTable("Q", lambda i, j: 2 ** i * (j % 3), 2), lex, T, lattice))
mixed = FunctionTable("Q", lambda i, j: 2 ** i * (j % 3) + 2 ** i * ((j + 1) % 3), 2)
show("mixed", lattice_sfglm(mixed, lex, T, lattice))

# the adaptive variant grows one block at a time
report = lattice_adaptive_sfglm(FunctionTable("Q", lambda i, j: 2 ** i * ((j + 1) % 3), 2), lex, lattice)
for step in report.trace:
    print("adaptive:", step["coset"], step["labels"], "full rank" if step["full_rank"] else "rank drop")
print("adaptive result:", report.relation_texts())

# King walk on the cone (1,1)N + (2,0)N, stopped after three staircase monomials
king = adaptive_sfglm(king_walk(), lex, cone=Cone([(1, 1), (2, 0)]), max_staircase=3)
for step in king.trace:
    print("king:", [[int(v) for v in r] for r in step["matrix"]])
rels = [r.poly for r in king.relations]
print(king.relation_texts(), "->", classify_relations(king_walk(), rels, [(2, 0)]))
