"""
Fake relations and the choice of region
=======================================

Gessel walk counts g_{n,0,j} are guessed with P-relations from three
regions of the same matrix size: a thin cone, a half orthant and the
full orthant.  Every kernel relation is then tested on further region
points.  Restricting to the cone avoids the fake relations that the
orthants produce at this size.  Pass a larger size as the first
argument to reproduce the full-scale run (slower).
"""

import sys

from relguess.bench import bench_table1, format_table1

size = int(sys.argv[1]) if len(sys.argv) > 1 else 300
shapes = {mode: (size + d, size - 10 + d) for d, mode in enumerate(("cone", "half", "full"))}
results = bench_table1(shapes=shapes, tdeg=3, verify=300)
print(format_table1(results))
