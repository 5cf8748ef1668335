"""Command-line surface for the exact F2 algebra engines.

One binary, one subcommand per computation: Cotor charts, cone charts
with module actions, filtration spectral-sequence pages, Adem
normalization, dual Steenrod actions, free/quotient bases, cell-chart
survivor reports, stability Hopf algebras from cell specs, group
homology, and the periodic-family bidegree table.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
invariant violation.  Identical arguments produce byte-identical output;
argument files can be passed as @path (one token per line).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import cellfilt, cellhopf, cobar, dyer_lashof as dl, grouphom, mayss
from .cobar import WindowError, build_cobar, build_cone, chart_rows, chart_tsv, ring_chart_names
from .hopf import build_a1_star, build_delta_cgl

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

SCHEMA_PREFIX = "f2alg"

ALPHABET = {"s": dl.SIGMA, "b": dl.BETA, "n1": dl.NU1, "n2": dl.NU2}

# relations presenting the stability quotient of the free algebra on
# sigma, nu1, nu2
STABILITY_RELATIONS = ("s*Q[1](s)", "s*Q[3](s)", "s^2*Q[2](s)", "s*n1", "s*n2")

# verification window for family detecting classes (largest needed
# in-window bidegree is (19, 12))
FAMILY_WINDOW = (19, 12)

# desk-scale ceiling for cobar-backed charts
MAX_CHART_G = 20


def _check_chart_budget(gmax: int) -> None:
    if gmax > MAX_CHART_G:
        raise WindowError(f"chart window g <= {MAX_CHART_G}, requested {gmax}")


# ---------------------------------------------------------------- expressions

_TOKEN = re.compile(r"\s*([Qq]\[[\d,]+\]|\^?\d+|[A-Za-z]\w*|[()*+])")


def _tokenize(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ValueError(f"bad expression near {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def eval_expr(text: str, gens: dict = ALPHABET) -> "dl.Poly":
    """Evaluate a class expression with nested operations, e.g.
    Q[2](s*Q[1](s)); the result is fully Adem-normalized."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def expect(t):
        nonlocal i
        if peek() != t:
            raise ValueError(f"expected {t!r} in expression {text!r}")
        i += 1

    def atom():
        nonlocal i
        t = peek()
        if t is None:
            raise ValueError(f"truncated expression {text!r}")
        if t == "(":
            i += 1
            p = expr()
            expect(")")
            return p
        if t[0] in "Qq" and "[" in t:
            op, seq = t[0], tuple(int(k) for k in t[2:-1].split(","))
            i += 1
            expect("(")
            inner = expr()
            expect(")")
            for s in reversed(seq):
                if op == "q":
                    # lower index: offset by the current degree
                    _, d = cellhopf.poly_bidegree(inner)
                    s += d
                inner = dl.apply_q(s, inner)
            return inner
        if t in gens:
            i += 1
            return dl.poly(((gens[t], ()),))
        raise ValueError(f"unknown name {t!r} in expression")

    def power():
        nonlocal i
        p = atom()
        t = peek()
        if t is not None and t.startswith("^"):
            i += 1
            e = int(t[1:])
            out = dl.ONE
            for _ in range(e):
                out = dl.poly_mul(out, p)
            return out
        return p

    def term():
        nonlocal i
        p = power()
        while peek() == "*":
            i += 1
            p = dl.poly_mul(p, power())
        return p

    def expr():
        nonlocal i
        p = term()
        while peek() == "+":
            i += 1
            p = dl.poly_add(p, term())
        return p

    out = expr()
    if i != len(toks):
        raise ValueError(f"trailing tokens in expression {text!r}")
    return out


# ---------------------------------------------------------------- output plumbing

def _emit(text: str, args) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_payload(schema: str, columns, rows) -> str:
    doc = {"schema": f"{SCHEMA_PREFIX}.{schema}/1", "columns": list(columns),
           "rows": [list(r) for r in rows]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _tsv(columns, rows, comments=()) -> str:
    lines = ["\t".join(columns)]
    lines.extend("\t".join(str(c) for c in r) for r in rows)
    lines.extend(f"# {c}" for c in comments)
    return "\n".join(lines) + "\n"


def _table(args, schema, columns, rows, comments=()):
    if args.format == "json":
        doc = {"schema": f"{SCHEMA_PREFIX}.{schema}/1", "columns": list(columns),
               "rows": [list(r) for r in rows], "notes": list(comments)}
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    return _tsv(columns, [[str(c) for c in r] for r in rows], comments)


# ---------------------------------------------------------------- subcommands

def _algebra(name: str):
    if name == "a1":
        return build_a1_star()
    if name == "cgl":
        return build_delta_cgl()
    raise ValueError(f"unknown algebra {name!r}")


def cmd_cotor(args) -> str:
    _check_chart_budget(args.gmax)
    h = _algebra(args.algebra)
    cx = build_cobar(h, g_max=max(args.gmax, 1), s_max=max(args.gmax, 1))
    names = ring_chart_names(args.gmax, args.dmax) if args.algebra == "a1" else None
    rows = chart_rows(cx, args.gmax, args.dmax, names)
    if args.format == "json":
        return _table(args, "chart", ["g", "d", "dim", "class_names"], rows)
    return chart_tsv(rows)


def cmd_cone(args) -> str:
    _check_chart_budget(args.gmax)
    cx = build_cobar(build_a1_star(), g_max=max(args.gmax, 6), s_max=max(args.gmax, 6))
    h10 = cx.unique_class(1, 0, "h10")
    cone = build_cone(cx, h10)
    rows = chart_rows(cone, args.gmax, args.dmax)
    comments = []
    if args.gmax >= 4 and args.dmax >= 3:
        z00 = cone.unique_class(0, 0, "z00")
        z32 = cone.unique_class(3, 2, "z32")
        h11 = cx.unique_class(2, 1, "h11")
        g1, d1, c1 = cone.module_action(h10, 3, 2, z32.chain)
        h11sq = cx.cotor_product(h11, h11)
        g2, d2, c2 = cone.module_action(h11sq, 0, 0, z00.chain)
        ok = (g1, d1) == (g2, d2) and cone.classes_agree(g1, d1, c1, c2)
        comments.append(f"action h10.z32 = h11^2.z00: {'ok' if ok else 'FAILED'}")
        if not ok:
            raise AssertionError("module action fixture failed")
    return _table(args, "chart", ["g", "d", "dim", "class_names"], rows, comments)


def cmd_may(args) -> str:
    _check_chart_budget(args.gmax)
    fc = mayss.build_filtered(build_a1_star(), g_max=args.gmax, s_max=args.gmax)
    if args.cone:
        fc = mayss.filtered_cone(fc, fc.complex.unique_class(1, 0))
    p = mayss.page(fc, args.page, args.gmax, args.dmax)
    if args.format == "json":
        rows = [(g, d, f, dim) for (g, d, f), dim in sorted(p.dims.items())]
        return _table(args, "sspage", ["g", "d", "f", "dim"], rows)
    return mayss.page_tsv(p)


def cmd_adem(args) -> str:
    return dl.render(eval_expr(args.expr)) + "\n"


def cmd_nishida(args) -> str:
    return dl.render(dl.dual_steenrod(args.a, eval_expr(args.expr))) + "\n"


def cmd_wbasis(args) -> str:
    gens = [ALPHABET[n] for n in args.gens.split(",")]
    if args.quotient:
        rels = [dl.parse(r, ALPHABET) for r in STABILITY_RELATIONS]
        dims = dl.ideal_quotient_dims(gens, rels, args.gmax, args.dmax)
        rows = [(g, d, dims.get((g, d), 0))
                for g in range(args.gmax + 1) for d in range(args.dmax + 1)]
        return _table(args, "dims", ["g", "d", "dim"], rows)
    rows = [(args.g, args.d, dl.render_mono(m))
            for m in dl.free_basis(gens, args.g, args.d)]
    return _table(args, "basis", ["g", "d", "monomial"], rows)


def _parse_spots(text: str):
    out = []
    for part in text.split(";"):
        g, d, f = (int(x) for x in part.split(","))
        out.append((g, d, f))
    return out


def cmd_cellss(args) -> str:
    decls = (
        cellfilt.parse_declarations(Path(args.decls).read_text())
        if args.decls
        else cellfilt.load_declarations()
    )
    spots = _parse_spots(args.spots)
    charts = [
        cellfilt.propagate(cellfilt.build_chart(g, d, f), decls) for g, d, f in spots
    ]
    comments = []
    rec = cellfilt.chart_reconciliation(12, 8, cellfilt.TABLE_12_8)
    for m in rec["enumerated_only"]:
        comments.append(f"enumerated but not charted at (12,8): {m}")
    for m in rec["recorded_only"]:
        comments.append(f"charted but not enumerated at (12,8): {m}")
    rep = cellfilt.reading_report(spots, decls)
    for name, expr, listed, computed in rep["discrepancies"]:
        comments.append(
            f"filtration discrepancy {name}: {expr} recorded {listed} rule {computed}"
        )
    comments.append(
        "survivors agree under both filtration readings: "
        + ("yes" if rep["agree"] else "NO")
    )
    if not rep["agree"]:
        raise AssertionError("filtration readings disagree on survivors")
    rows = []
    for chart in charts:
        for c in chart.entries:
            st, by = chart.status.get(c, ("survives", ""))
            rows.append((c.g, c.d, c.f, c.p, c.label, st, by))
    return _table(args, "survivors",
                  ["g", "d", "f", "p", "class", "status", "killed_by"],
                  rows, comments)


def cmd_delta(args) -> str:
    path = Path(args.cells)
    if path.exists():
        spec = cellhopf.parse_cells(path.read_text())
    else:
        spec = cellhopf.load_cells(args.cells)
    pres = cellhopf.delta_of_cells(spec, args.bound)
    doc = {
        "schema": f"{SCHEMA_PREFIX}.delta/1",
        "generators": [list(g) for g in pres.generators],
        "flags": list(pres.flags),
        "log": list(pres.log),
        "hopf": json.loads(pres.hopf.to_json()),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_grouphom(args) -> str:
    path = Path(args.group)
    text = path.read_text() if path.exists() else args.group
    g = grouphom.parse_group(text)
    res = grouphom.resolve(g, args.dmax + 1)
    dims = grouphom.homology_dims(res)
    name = g.name or args.group
    comments = [f"H_1 abelianization cross-check: "
                f"{'ok' if dims[1] == grouphom.abelianization_f2_dim(g) else 'FAILED'}"]
    if dims[1] != grouphom.abelianization_f2_dim(g):
        raise AssertionError("H_1 disagrees with the abelianization oracle")
    rows = [(name, d, dims[d]) for d in range(args.dmax + 1)]
    return _table(args, "grouphom", ["group", "d", "dim"], rows, comments)


def _family_rows(max_i: int):
    """(family, i, j, g, d, detector) with detector (i, j, base) where
    base names the cone class the detecting product acts on."""
    rows = []
    for i in range(max_i + 1):
        for j in (0, 1, 2):
            rows.append(("alpha", i, j, 12 * i + 2 * j, 8 * i + j, (i, j, "z00")))
        for j in (0, 1, 2):
            rows.append(("gamma", i, j, 12 * i + 2 * j + 3, 8 * i + j + 2, (i, j, "z32")))
        for j in (0, 1, 2):
            rows.append(("u", i, j, 12 * i + 2 * j + 2, 8 * i + j + 1, (i, j, "z32")))
        if i > 0:
            rows.append(("s", i, "", 12 * i - 1, 8 * i - 1, (i, 0, "z00")))
    return rows


def _detector_label(i: int, j: int, base: str) -> str:
    parts = []
    if i:
        parts.append("y128" if i == 1 else f"y128^{i}")
    if j:
        parts.append("h11" if j == 1 else f"h11^{j}")
    head = "*".join(parts)
    return f"{head}.{base}" if head else base


def cmd_families(args) -> str:
    rows = _family_rows(args.max_i)
    results = []
    cx = cone = None
    cache: dict = {}
    for fam, i, j, g, d, det in rows:
        di, dj, base = det
        label = _detector_label(di, dj, base)
        zg, zd = (0, 0) if base == "z00" else (3, 2)
        dg, dd = zg + 12 * di + 2 * dj, zd + 8 * di + dj
        if args.no_verify or dg > FAMILY_WINDOW[0] or dd > FAMILY_WINDOW[1]:
            status = "unverified (outside window)" if not args.no_verify else "unverified"
            results.append((fam, i, j, g, d, label, status))
            continue
        if cone is None:
            w = FAMILY_WINDOW[0]
            cx = build_cobar(build_a1_star(), g_max=w + 1, s_max=w + 1)
            cone = build_cone(cx, cx.unique_class(1, 0, "h10"))
            cache["h11"] = cx.unique_class(2, 1, "h11")
            cache["y128"] = cx.unique_class(12, 8, "y128")
        key = (di, dj, base)
        if key not in cache:
            cg, cd = zg, zd
            chain = (cone.unique_class(0, 0) if base == "z00"
                     else cone.unique_class(3, 2)).chain
            for _ in range(dj):
                cg, cd, chain = cone.module_action(cache["h11"], cg, cd, chain)
            for _ in range(di):
                cg, cd, chain = cone.module_action(cache["y128"], cg, cd, chain)
            cache[key] = (cg, cd, chain)
        cg, cd, chain = cache[key]
        if (cg, cd) != (dg, dd):
            raise AssertionError("detecting class bidegree drifted")
        status = "nonzero" if cone.class_nonzero(cg, cd, chain) else "ZERO"
        if status == "ZERO":
            raise AssertionError(f"detecting class {label} vanished")
        results.append((fam, i, j, g, d, label, status))
    return _table(args, "families",
                  ["family", "i", "j", "g", "d", "detecting_class", "status"],
                  results)


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="f2alg", fromfile_prefix_chars="@",
                                 description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--format", choices=["tsv", "json"], default="tsv")
        p.add_argument("--output", default=None)

    p = sub.add_parser("cotor", help="Cotor chart of a named Hopf algebra")
    p.add_argument("--algebra", default="a1")
    p.add_argument("--gmax", type=int, default=17)
    p.add_argument("--dmax", type=int, default=10)
    common(p)
    p.set_defaults(fn=cmd_cotor)

    p = sub.add_parser("cone", help="chart and module actions of the h10 cone")
    p.add_argument("--gmax", type=int, default=8)
    p.add_argument("--dmax", type=int, default=6)
    common(p)
    p.set_defaults(fn=cmd_cone)

    p = sub.add_parser("may", help="filtration spectral sequence page dims")
    p.add_argument("--page", type=int, default=1)
    p.add_argument("--gmax", type=int, default=14)
    p.add_argument("--dmax", type=int, default=10)
    p.add_argument("--cone", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_may)

    p = sub.add_parser("adem", help="normalize a class expression")
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=cmd_adem)

    p = sub.add_parser("nishida", help="dual Steenrod action Sq^a_*")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("expr")
    common(p)
    p.set_defaults(fn=cmd_nishida)

    p = sub.add_parser("wbasis", help="free or quotient basis dims")
    p.add_argument("--gens", default="s")
    p.add_argument("--g", type=int, default=0)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--quotient", action="store_true")
    p.add_argument("--gmax", type=int, default=6)
    p.add_argument("--dmax", type=int, default=3)
    common(p)
    p.set_defaults(fn=cmd_wbasis)

    p = sub.add_parser("cellss", help="cell chart survivor report")
    p.add_argument("--spots", default="12,8,-4;13,8,-5")
    p.add_argument("--decls", default=None)
    common(p)
    p.set_defaults(fn=cmd_cellss)

    p = sub.add_parser("delta", help="stability Hopf algebra from a cell spec")
    p.add_argument("--cells", default="cgl.cells")
    p.add_argument("--bound", type=int, default=5)
    common(p)
    p.set_defaults(fn=cmd_delta)

    p = sub.add_parser("grouphom", help="group homology dims")
    p.add_argument("group")
    p.add_argument("--dmax", type=int, default=4)
    common(p)
    p.set_defaults(fn=cmd_grouphom)

    p = sub.add_parser("families", help="periodic family bidegree table")
    p.add_argument("--max-i", type=int, default=1)
    p.add_argument("--no-verify", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_families)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        _emit(args.fn(args), args)
    except WindowError as e:
        print(f"error: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        if "budget" in str(e):
            print(f"error: budget exceeded: {e}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, KeyError) as e:
        print(f"error: internal invariant violated: {e!r}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as e:
        print(f"error: invalid input: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
