"""Fake versus correct P-relations on walk tables restricted to regions.

A region is the cone spanned by two exponent vectors.  Rows of the
multi-Hankel matrix are the first region points and columns the first
mixed monomials ``t^k x^i`` with ``i`` in the region, both in DRL order.
Each kernel relation is then tested on further region points and counted
as fake or correct.
"""

from itertools import islice

from .field import DEFAULT_PRIME
from .guess import classify_report, guess_prels
from .monomials import DRL, MonomialOrder, enumerate_mixed, enumerate_monomials
from .structures import Cone
from .tables import GESSEL_STEPS, WalkCounter, WalkTable

REGIONS = {
    "cone": ((2, 0), (2, 1)),
    "half": ((2, 0), (0, 1)),
    "full": ((1, 0), (0, 1)),
}

# matrix shapes of the comparable row of the published table (rows, cols)
GESSEL_SHAPES = {"cone": (721, 711), "half": (724, 713), "full": (726, 715)}
GESSEL_QUERIES = {"cone": 1408, "half": 1401, "full": 1386}


def region_points(gens, count, start=0):
    """Region points ``start .. start+count-1`` in DRL order."""
    cone = Cone(gens)
    order = MonomialOrder(DRL, len(gens[0]))
    return list(islice(enumerate_monomials(order, pred=cone.contains), start, start + count))


def region_columns(gens, count, tdeg=3):
    """First ``count`` mixed monomials ``t^k x^i``, ``|k| <= tdeg``, ``i`` in the region."""
    cone = Cone(gens)
    order = MonomialOrder(DRL, len(gens[0]))
    return list(islice(enumerate_mixed(order, pred=cone.contains, tdeg=tdeg), count))


def gessel_table(field=DEFAULT_PRIME, counter=None):
    """``g_{n,0,j}`` indexed by ``(n, j)``."""
    return WalkTable(counter or WalkCounter(GESSEL_STEPS), field, mask=(0, 1))


def bench_region(u, gens, rows, cols, tdeg=3, verify=300):
    """Guess P-relations on one region and classify them.

    Returns a dict with the matrix shape, distinct queries, and the fake
    and correct-so-far counts after testing on ``verify`` further rows.
    """
    order = MonomialOrder(DRL, u.dim)
    X = region_points(gens, rows)
    T = region_columns(gens, cols, tdeg)
    u.reset()
    report = guess_prels(u, order, X, T, cone=Cone(gens))
    queries = report.query_count
    shifts = region_points(gens, verify, start=rows)
    classify_report(u, report, shifts)
    counts = report.counts()
    return {
        "generators": [list(g) for g in gens],
        "shape": list(report.matrix_shape[0]),
        "queries": queries,
        "relations": len(report.relations),
        "fake": counts["fake"],
        "correct": counts["correct"],
        "report": report,
    }


def bench_table1(shapes=None, tdeg=3, verify=300, field=DEFAULT_PRIME, table=None, regions=None):
    """Run every region mode on the Gessel table (or ``table``)."""
    shapes = shapes or GESSEL_SHAPES
    regions = regions or REGIONS
    counter = WalkCounter(GESSEL_STEPS)
    out = {}
    for mode, gens in regions.items():
        u = table if table is not None else gessel_table(field, counter)
        rows, cols = shapes[mode]
        out[mode] = bench_region(u, gens, rows, cols, tdeg, verify)
    return out


def format_table1(results):
    """Plain-text table with one line per region mode."""
    lines = [f"{'mode':<6} {'shape':>11} {'queries':>8} {'fake':>5} {'correct':>8}"]
    for mode, r in results.items():
        shape = f"{r['shape'][0]}x{r['shape'][1]}"
        lines.append(f"{mode:<6} {shape:>11} {r['queries']:>8} {r['fake']:>5} {r['correct']:>8}")
    return "\n".join(lines)
