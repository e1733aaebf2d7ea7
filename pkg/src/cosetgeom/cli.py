"""Command-line front end.  Every run is deterministic; ``--json`` output
carries a versioned ``schema`` key."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import coarse, schreier
from . import group_actions as ga
from .cubecx import graphs, pocset, window

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2


class Inconclusive(Exception):
    """Raised after output is written when --strict is set."""


class _Parser(argparse.ArgumentParser):
    # usage errors share exit status 1 with other invalid input; 2 means inconclusive
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# --- argument helpers ---------------------------------------------------------

def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {text}")
    return v


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def _point(text):
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'ray,position', got {text!r}") from None
    return ga.RayPoint(a, b)


def _label(text):
    parts = [p for p in text.split(",") if p.strip()]
    vals = tuple(int(p) for p in parts)
    return vals[0] if len(vals) == 1 else vals


def _edge(text):
    a, sep, b = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected an edge 'u:v', got {text!r}")
    try:
        return _label(a), _label(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vertex label in {text!r}") from None


def _action(args) -> ga.MarkedAction:
    if args.family == "houghton":
        return ga.houghton_action(args.n)
    if args.family == "houghton-ext":
        return ga.extended_action(args.n, ga.parse_cycles(args.sigma, args.n))
    return ga.line_action()


def _word(action, text):
    word = ga.parse_word(text)
    unknown = sorted({lbl for lbl, _ in word} - set(action.labels))
    if unknown:
        raise ValueError(f"word uses labels {unknown} outside the generating set {list(action.labels)}")
    return word


def _ball(args, action=None):
    action = action or _action(args)
    bp = args.basepoint
    if not (1 <= bp.ray <= action.ray_count and bp.position >= 1):
        raise ValueError(f"basepoint {bp} is not in X_{action.ray_count}")
    return schreier.build_ball(action, bp, args.radius)


def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(schema: str, doc: dict) -> str:
    return json.dumps({"schema": f"cosetgeom.cli.{schema}/1", **doc}, sort_keys=True, indent=1) + "\n"


def _finish(args, ok: bool):
    if args.strict and not ok:
        raise Inconclusive


# --- Schreier-side commands ------------------------------------------------------

def cmd_schreier(args):
    ball = _ball(args)
    fmt = "json" if args.json else args.format
    if fmt not in ("json", "dot"):
        raise ValueError("schreier supports --format json or dot")
    _emit(args, schreier.export(ball, fmt).decode())


def cmd_growth(args):
    table = schreier.growth_table(_ball(args))
    verdict = coarse.linear_growth_check(table) if len(table.sizes) >= 4 else None
    if args.json or args.format == "json":
        _emit(args, _dump("growth", {"sizes": list(table.sizes),
                                     "verdict": verdict.to_dict() if verdict else None}))
    else:
        _emit(args, schreier.growth_csv(table))


def cmd_ends(args):
    rs = args.r if args.r else [2]
    prof = coarse.ends_profile(_ball(args), rs)
    if args.json:
        _emit(args, _dump("ends", prof.to_dict()))
    elif len(prof.counts) == 1:
        _emit(args, f"{next(iter(prof.counts.values()))}\n")
    else:
        _emit(args, "".join(f"r={r} ends={c}\n" for r, c in sorted(prof.counts.items())))


def cmd_narrowness(args):
    r = args.r[0] if args.r else 2
    rep = coarse.narrowness_profile(_ball(args), args.mu, r)
    if args.json:
        _emit(args, _dump("narrowness", rep.to_dict()))
    else:
        _emit(args, f"{rep.witness_count}\ncertificate_verified={str(rep.certificate_verified).lower()}\n")
    _finish(args, rep.certificate_verified)


def cmd_double_cosets(args):
    part = coarse.double_coset_orbits(_ball(args), args.budget)
    if args.json:
        _emit(args, _dump("double-cosets", part.to_dict()))
    else:
        sizes = ",".join(str(len(c)) for c in part.classes)
        _emit(args, f"{len(part)}\nstable={str(part.stable).lower()}\nclass_sizes={sizes}\n")
    _finish(args, part.stable)


def cmd_comm_probe(args):
    action = _action(args)
    probe = coarse.commensurator_probe(action, _word(action, args.word), args.radius,
                                       args.basepoint, args.budget)
    if args.json:
        _emit(args, _dump("comm-probe", probe.to_dict()))
    else:
        _emit(args, f"{probe.verdict}\nimage_sizes={','.join(map(str, probe.image_sizes))}\n")


def cmd_coset_distance(args):
    action = _action(args)
    res = coarse.coset_distance_probe(_ball(args, action), _word(action, args.word), args.distance, args.budget)
    exact = not isinstance(res, coarse.AtLeast)
    if args.json:
        _emit(args, _dump("coset-distance", {"distance": res if exact else None,
                                             "at_least": None if exact else res.bound}))
    else:
        _emit(args, f"{res}\n")
    _finish(args, exact)


def cmd_element(args):
    if args.element:
        f = ga.from_text(args.element)
    else:
        action = _action(args)
        f = action.word_element(_word(action, args.word or ""))
    doc = {"text": ga.to_text(f), "sigma": list(f.sigma), "translation": list(f.translation),
           "correction": [[list(a), list(b)] for a, b in f.correction]}
    if args.point:
        doc["image"] = list(f(args.point))
    if args.json:
        _emit(args, _dump("element", doc))
    else:
        tail = f"{args.point} -> {f(args.point)}\n" if args.point else ""
        _emit(args, doc["text"] + "\n" + tail)


# --- cube commands ---------------------------------------------------------------

def _graph(args) -> graphs.MedianGraph:
    if args.graph_file:
        return graphs.graph_from_json(Path(args.graph_file).read_text())
    return graphs.builtin_graph(args.graph)


def _hp_doc(g, h):
    return {"id": h.id, "edges": [[_jsonable(g.vertices[a]), _jsonable(g.vertices[b])] for a, b in h.edges],
            "plus_size": len(h.plus), "minus_size": len(h.minus)}


def _jsonable(v):
    return list(v) if isinstance(v, tuple) else v


def cmd_check_median(args):
    g = _graph(args)
    res = graphs.is_median(g)
    if args.json:
        _emit(args, _dump("check-median", {"median": res.ok, "vertices": len(g), "edges": len(g.edges),
                                           "triple": [_jsonable(v) for v in res.triple] if res.triple else None,
                                           "median_count": res.median_count}))
    else:
        line = "true" if res.ok else f"false triple={res.triple} medians={res.median_count}"
        _emit(args, line + "\n")


def cmd_hyperplanes(args):
    g = _graph(args)
    rep = graphs.separation_report(g)
    hps = graphs.hyperplanes(g, check=False)
    if args.json:
        _emit(args, _dump("hyperplanes", {
            "hyperplanes": [_hp_doc(g, h) for h in hps],
            "relations": [[a, b, r] for (a, b), r in sorted(rep.relations.items())]}))
    else:
        lines = [f"{len(hps)}"]
        for h in hps:
            lines.append(f"h{h.id}: " + " ".join(f"{g.vertices[a]}-{g.vertices[b]}" for a, b in h.edges))
        lines += [f"{r}={c}" for r, c in sorted(rep.counts().items())]
        _emit(args, "\n".join(lines) + "\n")


def cmd_facing_triples(args):
    g = _graph(args)
    hps = graphs.hyperplanes(g)
    among = None
    if args.touching is not None:
        v = g.vid(args.touching)
        among = [h.id for h in hps if v in h.support]
    triples = graphs.facing_triples(hps, among=among)
    if args.json:
        _emit(args, _dump("facing-triples", {"count": len(triples), "triples": [list(t) for t in triples],
                                             "among": among}))
    else:
        _emit(args, f"{len(triples)}\n" + "".join(f"{a} {b} {c}\n" for a, b, c in triples))


def cmd_dual(args):
    if args.pocset:
        p = pocset.pocset_from_json(Path(args.pocset).read_text())
    elif args.chain:
        p = pocset.chain_walls(args.chain)
    elif args.crossing:
        p = pocset.crossing_walls(args.crossing)
    else:
        raise ValueError("dual needs --pocset FILE, --chain K or --crossing K")
    g = pocset.dual_cube_complex(p)
    med = bool(graphs.is_median(g)) if g.connected and len(g) else False
    if args.format == "json" and not args.json:
        _emit(args, graphs.graph_to_json(g))
        return
    if args.json:
        _emit(args, _dump("dual", {"walls": p.walls, "vertices": len(g), "edges": len(g.edges),
                                   "connected": g.connected, "median": med}))
    else:
        _emit(args, f"vertices={len(g)} edges={len(g.edges)} connected={str(g.connected).lower()} "
                    f"median={str(med).lower()}\n")


def _window(args):
    return window.builtin_window(args.shape, args.window)


def _window_hp(w, edge):
    if edge is None:
        raise ValueError("this command needs --edge u:v")
    try:
        return w.hyperplane_at(*edge)
    except KeyError as exc:
        raise ValueError(f"no window hyperplane at edge {edge}") from exc


def cmd_skewer(args):
    w = _window(args)
    res = window.skewer_check(w, _window_hp(w, args.edge), args.N)
    if args.json:
        _emit(args, _dump("skewer", {"kind": res.kind, "power": res.power, "direction": res.direction}))
    else:
        _emit(args, f"{res}\n")
    _finish(args, res.kind != window.INCONCLUSIVE)


def _ids_doc(w, ids):
    by_id = {h.id: h for h in w.hyperplanes}
    return [_hp_doc(w.graph, by_id[i]) for i in sorted(ids)]


def cmd_symdiff(args):
    w = _window(args)
    members, verified = window.hyperplane_symdiff(w, _window_hp(w, args.edge), args.power)
    if args.json:
        _emit(args, _dump("symdiff", {"members": _ids_doc(w, members), "verified": verified}))
    else:
        g = w.graph
        by_id = {h.id: h for h in w.hyperplanes}
        lines = [f"{len(members)}", f"verified={str(verified).lower()}"]
        lines += [f"h{i}: " + " ".join(f"{g.vertices[a]}-{g.vertices[b]}" for a, b in by_id[i].edges)
                  for i in sorted(members)]
        _emit(args, "\n".join(lines) + "\n")
    _finish(args, verified)


def cmd_transfer(args):
    w = _window(args)
    res = window.transfer(w, _window_hp(w, args.edge), args.power)
    if args.json:
        _emit(args, _dump("transfer", {"value": res.value, "verified": res.verified, "estimate": res.estimate,
                                       "lost": _ids_doc(w, res.lost), "gained": _ids_doc(w, res.gained)}))
    else:
        shown = res.value if res.verified else f"Inconclusive (window estimate {res.estimate})"
        _emit(args, f"{shown}\nverified={str(res.verified).lower()}\n")
    _finish(args, res.verified)


def cmd_sep_index(args):
    w = _window(args)
    if args.k_edge is None:
        raise ValueError("sep-index needs --k-edge u:v")
    val = window.separation_index(w, _window_hp(w, args.k_edge), _window_hp(w, args.edge), args.N)
    if args.json:
        _emit(args, _dump("sep-index", {"value": val, "N": args.N}))
    else:
        _emit(args, f"{val}\n")


# --- parser ---------------------------------------------------------------------

def _common(p):
    p.add_argument("--json", action="store_true", help="versioned JSON output")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--strict", action="store_true", help="exit 2 on inconclusive verdicts")


def _action_args(p):
    p.add_argument("--family", choices=["houghton", "houghton-ext", "line"], default="houghton")
    p.add_argument("--n", type=_positive, default=2)
    p.add_argument("--sigma", default="()", help="ray permutation for houghton-ext, e.g. '(2,3)'")
    p.add_argument("--basepoint", type=_point, default=ga.RayPoint(1, 1))
    p.add_argument("--radius", "-R", type=_nonneg, default=12)
    p.add_argument("--budget", type=_nonneg, default=6)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cosetgeom", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, action=True):
        p = sub.add_parser(name, help=help_text)
        if action:
            _action_args(p)
        _common(p)
        p.set_defaults(func=func)
        return p

    add("schreier", cmd_schreier, "ball of the Schreier graph").add_argument(
        "--format", choices=["json", "dot"], default="json")
    add("growth", cmd_growth, "ball sizes |B(r)|").add_argument("--format", choices=["csv", "json"], default="csv")
    for name, func, text in (("ends", cmd_ends, "deep components of annuli"),
                             ("narrowness", cmd_narrowness, "disjoint coarse path witnesses")):
        p = add(name, func, text)
        p.add_argument("--r", type=_nonneg, nargs="+")
        p.add_argument("--mu", type=_positive, default=1)
    add("double-cosets", cmd_double_cosets, "H-orbits of cosets via loop words")
    add("comm-probe", cmd_comm_probe, "growth of rho_H(gH)").add_argument("--word", required=True)
    p = add("coset-distance", cmd_coset_distance, "distance from H to gH")
    p.add_argument("--word", required=True)
    p.add_argument("--distance", "-D", type=_nonneg, default=4)
    p = add("element", cmd_element, "normal form of a word or element text")
    p.add_argument("--word")
    p.add_argument("--element", help="text form 'n=2 | sigma=() | t=-1,1 | c=(1,1)->(2,1)'")
    p.add_argument("--point", type=_point)

    cube = sub.add_parser("cube", help="cube complex combinatorics")
    csub = cube.add_subparsers(dest="cube_command", required=True)

    def cadd(name, func, text, kind):
        p = csub.add_parser(name, help=text)
        _common(p)
        if kind == "graph":
            p.add_argument("--graph", default="cube:3", help="path:N, cube:N, cycle:N, tripod, spider:K,L")
            p.add_argument("--graph-file", help="median graph JSON")
        elif kind == "window":
            p.add_argument("--shape", default="line", help="line, staircase, ladder[:N,step]")
            p.add_argument("--window", type=_positive, default=20)
            p.add_argument("--edge", type=_edge, help="edge dual to h, e.g. 0:1 or 0,0:1,0")
            p.add_argument("--N", type=_nonneg, default=3)
            p.add_argument("--power", type=int, default=1)
        p.set_defaults(func=func)
        return p

    cadd("check-median", cmd_check_median, "exhaustive median test", "graph")
    cadd("hyperplanes", cmd_hyperplanes, "edge classes and pairwise relations", "graph")
    cadd("facing-triples", cmd_facing_triples, "facing triples of hyperplanes", "graph").add_argument(
        "--touching", type=_label, help="only hyperplanes whose support contains this vertex")
    p = cadd("dual", cmd_dual, "dual cube complex of a poc-set", None)
    p.add_argument("--pocset", help="poc-set JSON")
    p.add_argument("--chain", type=_positive)
    p.add_argument("--crossing", type=_positive)
    p.add_argument("--format", choices=["summary", "json"], default="summary")
    cadd("skewer", cmd_skewer, "does the shift skewer h", "window")
    cadd("symdiff", cmd_symdiff, "H(h) symmetric difference H(sigma^p h)", "window")
    cadd("transfer", cmd_transfer, "transfer of sigma^p relative to h+", "window")
    cadd("sep-index", cmd_sep_index, "separation index of k along the orbit of h", "window").add_argument(
        "--k-edge", type=_edge)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except Inconclusive:
        return EXIT_INCONCLUSIVE
    except (ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cosetgeom: error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
