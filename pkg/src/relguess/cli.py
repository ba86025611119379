"""Command-line front end: ``relguess guess|fglm|verify|walk-table|bench-table1``.

Every run resolves to a flat configuration dict (flags win over
``--config`` values, which win over defaults).  With ``--json`` the
structured result is printed as one JSON document with sorted keys;
``--out`` writes the same document to a file.
"""

import argparse
import json
import os
import sys
from itertools import islice

from .bench import GESSEL_SHAPES, REGIONS, bench_table1, format_table1
from .field import DEFAULT_PRIME, make_field
from .fglm import (PropertyMError, SingularHankelError, blocked_speedup_bench, load_mult_matrix,
                   solve_shape_basis, write_matrix)
from .guess import (Universe, adaptive_sfglm, classify_relations, classify_report, guess_prels,
                    lattice_adaptive_sfglm, lattice_sfglm, sfglm)
from .monomials import DRL, MonomialOrder, enumerate_mixed, enumerate_monomials
from .polytext import Names, format_poly, read_polys
from .structures import parse_cone, parse_gdeg, parse_lattice
from .tables import (GESSEL_STEPS, KING_STEPS, WalkCounter, WalkTable, format_walk_spec,
                     parse_walk_spec, read_table, write_table)

WALK_PRESETS = {
    "king": (KING_STEPS, None),
    "gessel": (GESSEL_STEPS, (0, 1)),
}

DEFAULTS = {
    "field": None,
    "order": "drl",
    "perm": None,
    "vars": None,
    "degree": 4,
    "caps": None,
    "max_staircase": 64,
    "max_degree": None,
    "extra_rows": 2,
    "rows": 50,
    "cols": 50,
    "tdeg": None,
    "verify_shifts": 0,
    "seed": 0,
    "jobs": 1,
    "repeats": 1,
    "shapes": None,
    "verify": 300,
    "bounds": None,
}


class CLIError(Exception):
    pass


# -- input helpers -------------------------------------------------------

def _text_or_file(value):
    """Contents of ``value`` if it names a file, else ``value`` itself."""
    if value is not None and os.path.isfile(value):
        with open(value) as fh:
            return fh.read()
    return value


def _ints(text):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(x) for x in str(text).replace(",", " ").split()]


def walk_steps(spec):
    """``(steps, mask)`` from a preset name, a spec file or inline spec text."""
    if spec.lower() in WALK_PRESETS:
        return WALK_PRESETS[spec.lower()]
    return parse_walk_spec(_text_or_file(spec))


def load_table(cfg):
    if cfg.get("table"):
        u = read_table(cfg["table"])
        if cfg.get("field") is not None and make_field(cfg["field"]) != u.field:
            raise CLIError("--field differs from the field in the table file")
        return u
    if cfg.get("walk"):
        steps, mask = walk_steps(cfg["walk"])
        field = cfg["field"] if cfg.get("field") is not None else DEFAULT_PRIME
        return WalkTable(WalkCounter(steps), field, mask)
    raise CLIError("need --table or --walk")


def load_cone(cfg):
    return parse_cone(_text_or_file(cfg["cone"])) if cfg.get("cone") else None


def load_lattice(cfg):
    return parse_lattice(_text_or_file(cfg["lattice"])) if cfg.get("lattice") else None


def make_order(cfg, n):
    perm = _ints(cfg.get("perm"))
    return MonomialOrder(cfg["order"], n, tuple(perm) if perm else None)


def order_text(order, names):
    return f"{order.kind.upper()}({' < '.join(names.x[p] for p in reversed(order.perm))})"


def batch_columns(universe, order, degree=None, caps=None):
    """Universe monomials of total degree ``<= degree`` (or in a box), sorted by ``order``."""
    n = universe.n
    drl = MonomialOrder(DRL, n)
    if caps is not None:
        monos = enumerate_monomials(drl, pred=universe.contains, caps=caps, max_degree=degree)
    else:
        monos = enumerate_monomials(drl, pred=universe.contains, max_degree=degree)
    return order.sort(monos)


def universe_points(universe, count, start=0):
    drl = MonomialOrder(DRL, universe.n)
    return list(islice(enumerate_monomials(drl, pred=universe.contains), start, start + count))


# -- commands ------------------------------------------------------------

def cmd_guess(cfg):
    u = load_table(cfg)
    n = u.dim
    names = Names.parse(n, cfg.get("vars"))
    cone = load_cone(cfg)
    lattice = load_lattice(cfg)
    universe = Universe(n, cone)
    if cfg.get("prels"):
        if cfg["order"] != DRL:
            raise CLIError("P-relation guessing enumerates columns in DRL order")
        order = make_order(cfg, n)
        X = universe_points(universe, cfg["rows"])
        pred = universe.contains
        T = list(islice(enumerate_mixed(order, pred=pred, tdeg=cfg["tdeg"] or 1), cfg["cols"]))
        report = guess_prels(u, order, X, T, cone=cone)
        mode = "prels"
        shifts = universe_points(universe, cfg["verify_shifts"], start=cfg["rows"])
    else:
        order = make_order(cfg, n)
        extra = cfg["extra_rows"]
        if cfg.get("adaptive"):
            kw = dict(max_staircase=cfg["max_staircase"], max_degree=cfg["max_degree"],
                      extra_rows=extra)
            if lattice is not None:
                report = lattice_adaptive_sfglm(u, order, lattice, cone=cone, jobs=cfg["jobs"], **kw)
                mode = "lattice-adaptive"
            else:
                report = adaptive_sfglm(u, order, cone=cone, **kw)
                mode = "adaptive"
        else:
            T = batch_columns(universe, order, cfg["degree"], _ints(cfg.get("caps")))
            if lattice is not None:
                if cone is not None:
                    raise CLIError("batch lattice mode works on the full orthant")
                report = lattice_sfglm(u, order, T, lattice, jobs=cfg["jobs"], extra_rows=extra)
                mode = "lattice"
            else:
                report = sfglm(u, order, T, cone=cone, extra_rows=extra)
                mode = "batch"
        shifts = universe_points(universe, cfg["verify_shifts"])
    queries = u.query_count
    if shifts:
        classify_report(u, report, shifts)
    doc = report.to_dict(names, with_trace=cfg.get("trace", False))
    doc["mode"] = mode
    doc["order"] = order_text(order, names)
    doc["field"] = u.field.spec
    doc["distinct_queries"] = queries
    doc["verify_shifts"] = len(shifts)
    if cfg.get("dump"):
        _dump_queries(cfg["dump"], u)
    lines = [f"{mode} guessing, {doc['order']}, field {doc['field']}"]
    lines.append(f"matrix shapes: {', '.join('x'.join(map(str, s)) for s in doc['matrix_shape'])}")
    lines.append(f"queries: {doc['query_count']}")
    lines.append("staircase: " + " ".join(doc["staircase"]))
    verdicts = doc.get("classification") or [""] * len(doc["relations"])
    lines.append(f"relations ({len(doc['relations'])}):")
    for text, v in zip(doc["relations"], verdicts):
        lines.append(f"  {text}" + (f"    [{v}]" if v else ""))
    if doc["truncated"]:
        lines.append("note: staircase budget exhausted, output truncated")
    return doc, "\n".join(lines)


def _dump_queries(path, u):
    """Write every table entry read so far, so the run can be replayed from the file."""
    write_table(path, u, u.queried())


def cmd_verify(cfg):
    u = load_table(cfg)
    n = u.dim
    names = Names.parse(n, cfg.get("vars"))
    if not cfg.get("relations"):
        raise CLIError("need --relations FILE")
    polys = read_polys(cfg["relations"], u.field, names)
    universe = Universe(n, load_cone(cfg))
    shifts = universe_points(universe, cfg["verify_shifts"] or 50)
    verdicts = classify_relations(u, polys, shifts)
    texts = [format_poly(p.terms, u.field, names) for p in polys]
    doc = {
        "relations": texts,
        "classification": verdicts,
        "shifts": len(shifts),
        "fake": sum(v == "fake" for v in verdicts),
        "correct": sum(v == "correct-so-far" for v in verdicts),
    }
    lines = [f"{v:>15}  {t}" for t, v in zip(texts, verdicts)] or ["no relations"]
    lines.append(f"{doc['fake']} fake, {doc['correct']} correct so far on {len(shifts)} shifts")
    return doc, "\n".join(lines)


def cmd_walk_table(cfg):
    if not cfg.get("walk"):
        raise CLIError("need --walk")
    if not cfg.get("out_table"):
        raise CLIError("need --out-table FILE")
    steps, mask = walk_steps(cfg["walk"])
    field = cfg["field"] if cfg.get("field") is not None else DEFAULT_PRIME
    u = WalkTable(WalkCounter(steps), field, mask)
    bounds = _ints(cfg.get("bounds"))
    if bounds is None or len(bounds) != u.dim:
        raise CLIError(f"need --bounds with {u.dim} entries")
    path = cfg["out_table"]
    cached = os.path.isfile(path) and not cfg.get("force")
    if cached:
        t = read_table(path)
        if list(t.bounds) != bounds or t.field != u.field:
            cached = False
    if not cached:
        indices = [i for i in _box(bounds)]
        write_table(path, u, indices)
    doc = {"path": path, "walk": format_walk_spec(steps, mask).strip(), "bounds": bounds,
           "field": u.field.spec, "cached": cached}
    return doc, f"{'reused' if cached else 'wrote'} {path}"


def _box(bounds):
    if not bounds:
        yield ()
        return
    for head in range(bounds[0] + 1):
        for rest in _box(bounds[1:]):
            yield (head,) + rest


def _parse_shapes(text):
    """``cone=721x711,half=724x713`` into a dict."""
    if text is None:
        return None
    if isinstance(text, dict):
        return {k: tuple(v) for k, v in text.items()}
    out = {}
    for part in text.split(","):
        mode, _, shape = part.partition("=")
        r, _, c = shape.lower().partition("x")
        out[mode.strip()] = (int(r), int(c))
    return out


def cmd_bench_table1(cfg):
    shapes = _parse_shapes(cfg.get("shapes")) or dict(GESSEL_SHAPES)
    regions = {m: REGIONS[m] for m in shapes if m in REGIONS}
    unknown = set(shapes) - set(REGIONS)
    if unknown:
        raise CLIError(f"unknown region modes {sorted(unknown)}")
    table = None
    if cfg.get("walk") or cfg.get("table"):
        table = load_table(cfg)
        if table.dim != 2:
            raise CLIError("region modes are defined for two-index tables")
    field = cfg["field"] if cfg.get("field") is not None else DEFAULT_PRIME
    results = bench_table1(shapes, tdeg=cfg["tdeg"] or 3,
                           verify=cfg["verify"], field=field, table=table, regions=regions)
    doc = {}
    for mode, r in results.items():
        doc[mode] = {k: v for k, v in r.items() if k != "report"}
        if cfg.get("with_relations"):
            doc[mode]["relations"] = r["report"].relation_texts()
            doc[mode]["classification"] = r["report"].classification
    return doc, format_table1(results)


def load_fglm_input(cfg):
    gmap = parse_gdeg(_text_or_file(cfg["gdeg"])) if cfg.get("gdeg") else None
    if cfg.get("synthetic"):
        from .synthetic import synthetic_ideal
        kw = {}
        for part in cfg["synthetic"].split(","):
            key, _, val = part.partition("=")
            kw[key.strip()] = int(val)
        ideal = synthetic_ideal(seed=cfg["seed"], **kw)
        return ideal.M, ideal.gmap
    path = cfg.get("matrix") or cfg.get("gb")
    if not path:
        raise CLIError("need --matrix, --gb or --synthetic")
    return load_mult_matrix(path, gmap), gmap


def cmd_fglm(cfg):
    M, gmap = load_fglm_input(cfg)
    n = M.n
    names = Names.parse(n, cfg.get("vars"))
    if cfg.get("write_matrix"):
        write_matrix(cfg["write_matrix"], M)
    if cfg.get("bench"):
        res = blocked_speedup_bench(M, gmap, seed=cfg["seed"], jobs=cfg["jobs"],
                                    repeats=cfg["repeats"])
        basis = res.pop("basis")
        doc = dict(res)
        doc["basis"] = basis.to_dict(names)
        text = (f"D={res['D']} k={res['k']} |G|={res['group_order']}\n"
                f"plain   seq_gen {res['plain']['seq_gen']:.4f}s  guess {res['plain']['guess']:.4f}s\n"
                f"blocked seq_gen {res['blocked']['seq_gen']:.4f}s  guess {res['blocked']['guess']:.4f}s\n"
                f"speedup {res['speedup']:.2f}, identical bases")
        return _strip_timings(doc, cfg), text
    basis = solve_shape_basis(M, gmap, seed=cfg["seed"], jobs=cfg["jobs"])
    doc = basis.to_dict(names)
    doc["timings"] = dict(basis.timings)
    text = "\n".join(doc["basis"]) + f"\n({doc['reads']} sequence terms read)"
    return _strip_timings(doc, cfg), text


def _strip_timings(doc, cfg):
    """Timings are the only nondeterministic fields; ``--no-timings`` drops them."""
    if cfg.get("no_timings"):
        for key in ("timings", "plain", "blocked", "speedup"):
            doc.pop(key, None)
    return doc


COMMANDS = {
    "guess": cmd_guess,
    "verify": cmd_verify,
    "walk-table": cmd_walk_table,
    "bench-table1": cmd_bench_table1,
    "fglm": cmd_fglm,
}


# -- argument parsing ----------------------------------------------------

def _common(p):
    p.add_argument("--json", action="store_true", help="print the structured result as JSON")
    p.add_argument("--out", help="also write the JSON result to this file")
    p.add_argument("--config", help="JSON file with option values (flags win)")
    p.add_argument("--save-config", help="write the resolved configuration to this file")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--field", help="prime or Q")
    p.add_argument("--vars", help="variable names, e.g. 'x,y' or 'x,y;t,u'")


def _source(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--table", help="table file")
    g.add_argument("--walk", help="walk spec file, inline spec, or preset (king, gessel)")


def build_parser():
    ap = argparse.ArgumentParser(prog="relguess", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("guess", help="guess recurrence relations from a table")
    _common(p)
    _source(p)
    p.add_argument("--order", choices=["lex", "drl"])
    p.add_argument("--perm", help="variable indices from largest to smallest")
    p.add_argument("--cone", help="cone file or inline generators '1 1; 2 0'")
    p.add_argument("--lattice", help="lattice file or inline basis '0 3; 1 0'")
    p.add_argument("--adaptive", action="store_true", default=None)
    p.add_argument("--prels", action="store_true", default=None)
    p.add_argument("--tdeg", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--degree", type=int, help="total degree bound of the batch column set")
    p.add_argument("--caps", help="per-variable exponent caps of the batch column set")
    p.add_argument("--max-staircase", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--extra-rows", type=int)
    p.add_argument("--verify-shifts", type=int)
    p.add_argument("--trace", action="store_true", default=None)
    p.add_argument("--dump", help="write the table entries read to this table file")

    p = sub.add_parser("verify", help="test relations against further table terms")
    _common(p)
    _source(p)
    p.add_argument("--relations", help="one polynomial per line")
    p.add_argument("--cone")
    p.add_argument("--verify-shifts", "--shifts", dest="verify_shifts", type=int)

    p = sub.add_parser("walk-table", help="materialize walk counts into a table file")
    _common(p)
    p.add_argument("--walk")
    p.add_argument("--bounds", help="inclusive index bounds, e.g. '20 10'")
    p.add_argument("--out-table", help="table file to write")
    p.add_argument("--force", action="store_true", default=None)

    p = sub.add_parser("bench-table1", help="fake/correct P-relation counts per region mode")
    _common(p)
    _source(p)
    p.add_argument("--shapes", help="e.g. 'cone=721x711,half=724x713,full=726x715'")
    p.add_argument("--tdeg", type=int)
    p.add_argument("--verify", type=int, help="number of further region points for testing")
    p.add_argument("--with-relations", action="store_true", default=None)

    p = sub.add_parser("fglm", help="DRL to LEX change of order via Hankel systems")
    _common(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--matrix", help="multiplication matrix file")
    g.add_argument("--gb", help="DRL Groebner basis file")
    g.add_argument("--synthetic", help="random invariant ideal, e.g. 'n=3,q=3,orbits=20'")
    p.add_argument("--gdeg", help="G-degree file or inline text")
    p.add_argument("--bench", action="store_true", default=None)
    p.add_argument("--repeats", type=int)
    p.add_argument("--write-matrix", help="save the multiplication matrix to this file")
    p.add_argument("--no-timings", action="store_true", default=None)
    return ap


_NOT_CONFIG = {"json", "out", "config", "save_config"}


def resolve_config(args):
    """Merge defaults, ``--config`` values and explicit flags."""
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if loaded.get("command", args.command) != args.command:
            raise CLIError(f"config is for {loaded['command']!r}, not {args.command!r}")
        cfg.update({k: v for k, v in loaded.items() if k != "command"})
    for k, v in vars(args).items():
        if k in _NOT_CONFIG or v is None:
            continue
        cfg[k] = v
    cfg["command"] = args.command
    cfg["order"] = str(cfg["order"]).lower()
    return cfg


def run(argv=None):
    """Parse ``argv`` and return ``(config, doc, text)``."""
    args = build_parser().parse_args(argv)
    cfg = resolve_config(args)
    doc, text = COMMANDS[args.command](cfg)
    return args, cfg, doc, text


def dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2, default=_jsonable)


def _jsonable(v):
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, (set, tuple)):
        return list(v)
    return str(v)


def main(argv=None):
    try:
        args, cfg, doc, text = run(argv)
    except (CLIError, ValueError, PropertyMError, SingularHankelError, OSError) as exc:
        print(f"relguess: error: {exc}", file=sys.stderr)
        return 2
    if args.save_config:
        with open(args.save_config, "w") as fh:
            fh.write(dumps(cfg) + "\n")
    out = dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    print(out if args.json else text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
