"""Finite median graphs: intervals, the median test, hyperplanes and facing triples."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product

import numpy as np

MEDIAN_SCHEMA = "cosetgeom.median-graph/1"


class NotMedianError(ValueError):
    pass


@dataclass(frozen=True)
class MedianGraph:
    """An undirected simple graph given by vertex labels and index pairs.

    Whether it really is median is decided by :func:`is_median`;
    :func:`hyperplanes` refuses graphs that fail it.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        verts = tuple(self.vertices)
        if len(set(verts)) != len(verts):
            raise ValueError("duplicate vertex labels")
        edges = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b or not (0 <= a < len(verts) and 0 <= b < len(verts)):
                raise ValueError(f"bad edge ({a}, {b})")
            edges.add((min(a, b), max(a, b)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    @classmethod
    def from_label_edges(cls, vertices, label_edges):
        vertices = tuple(vertices)
        idx = {v: i for i, v in enumerate(vertices)}
        return cls(vertices, tuple((idx[a], idx[b]) for a, b in label_edges))

    def __len__(self):
        return len(self.vertices)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in self.vertices]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_set

    @cached_property
    def dist(self) -> np.ndarray:
        """All-pairs distances; -1 marks unreachable pairs."""
        n = len(self)
        D = np.full((n, n), -1, dtype=np.int32)
        for s in range(n):
            D[s, s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if D[s, v] < 0:
                        D[s, v] = D[s, u] + 1
                        queue.append(v)
        return D

    @property
    def connected(self) -> bool:
        return len(self) == 0 or bool((self.dist[0] >= 0).all())

    def vid(self, v) -> int:
        """Index of a vertex given by label (labels win over raw indices)."""
        if v in self.index:
            return self.index[v]
        if isinstance(v, (int, np.integer)) and 0 <= v < len(self):
            return int(v)
        raise KeyError(v)


def interval(g: MedianGraph, u, v) -> frozenset:
    """Vertex labels on geodesics from u to v."""
    iu, iv = g.vid(u), g.vid(v)
    D = g.dist
    if D[iu, iv] < 0:
        raise ValueError("vertices are in different components")
    mask = D[iu] + D[iv] == D[iu, iv]
    return frozenset(g.vertices[i] for i in np.flatnonzero(mask))


@dataclass(frozen=True)
class MedianCheck:
    ok: bool
    triple: tuple | None = None  # first failing (u, v, w) by index order, as labels
    median_count: int | None = None

    def __bool__(self):
        return self.ok


def is_median(g: MedianGraph) -> MedianCheck:
    """Exhaustive check that every triple has exactly one median."""
    if not g.connected:
        raise ValueError("median test needs a connected graph")
    n = len(g)
    if n <= 2:
        return MedianCheck(True)
    D = g.dist.astype(np.int32)
    # M[a, b, x]: x lies on a geodesic from a to b
    M = (D[:, None, :] + D[None, :, :] == D[:, :, None]).astype(np.int32)
    iu = np.arange(n)
    for u in range(n):
        A = M[u]
        counts = np.einsum("vx,wx,vwx->vw", A, A, M)
        bad = counts != 1
        bad[:, : u + 1] = False
        bad[: u + 1, :] = False
        bad &= iu[:, None] < iu[None, :]
        if bad.any():
            v, w = np.argwhere(bad)[0]
            return MedianCheck(False, (g.vertices[u], g.vertices[v], g.vertices[w]), int(counts[v, w]))
    return MedianCheck(True)


# --- hyperplanes ------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """An edge class with its two halfspaces (vertex index sets).

    ``plus`` is the halfspace not containing vertex 0.  Edges are stored as
    (minus endpoint, plus endpoint).
    """

    id: int
    edges: tuple
    plus: frozenset = field(repr=False)
    minus: frozenset = field(repr=False)

    @cached_property
    def support(self) -> frozenset:
        return frozenset(x for e in self.edges for x in e)

    def side(self, sign: int) -> frozenset:
        return self.plus if sign > 0 else self.minus


def hyperplanes(g: MedianGraph, check: bool = True) -> list[Hyperplane]:
    """Group edges by the halfspace split they induce.

    ``check`` runs the full median test first; the cheaper structural checks
    (each class is a cut whose sides are connected) always run.
    """
    if check:
        res = is_median(g)
        if not res:
            raise NotMedianError(f"not a median graph: triple {res.triple} has {res.median_count} medians")
    D = g.dist
    if (D < 0).any():
        raise NotMedianError("graph is disconnected")
    classes = {}
    for a, b in g.edges:
        closer_b = D[:, b] < D[:, a]
        if not (closer_b | (D[:, a] < D[:, b])).all():
            raise NotMedianError(f"edge ({g.vertices[a]}, {g.vertices[b]}) has an equidistant vertex")
        plus_mask = ~closer_b if closer_b[0] else closer_b
        key = plus_mask.tobytes()
        entry = classes.setdefault(key, (plus_mask, []))
        entry[1].append((a, b) if plus_mask[b] else (b, a))
    out = []
    for hid, (mask, edges) in enumerate(classes.values()):
        plus = frozenset(int(i) for i in np.flatnonzero(mask))
        minus = frozenset(range(len(g))) - plus
        out.append(Hyperplane(hid, tuple(edges), plus, minus))
    _check_cuts(g, out)
    return out


def _check_cuts(g, hps):
    for h in hps:
        cut = {(a, b) for a, b in g.edges if (a in h.plus) != (b in h.plus)}
        if cut != {tuple(sorted(e)) for e in h.edges}:
            raise NotMedianError(f"hyperplane {h.id}: its cut contains edges of another class")
        for side in (h.plus, h.minus):
            if not _connected_within(g, side):
                raise NotMedianError(f"hyperplane {h.id}: a halfspace is disconnected")


def _connected_within(g, members) -> bool:
    members = set(members)
    start = next(iter(members))
    seen, queue = {start}, deque([start])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if v in members and v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(members)


def hyperplane_at(hps, u: int, v: int) -> Hyperplane:
    e = (min(u, v), max(u, v))
    for h in hps:
        if any(tuple(sorted(x)) == e for x in h.edges):
            return h
    raise KeyError(f"no hyperplane is dual to edge ({u}, {v})")


CROSS = "Cross"
_NESTINGS = {  # empty quarter -> containment it implies
    ("+", "-"): "NestedPlusPlus",    # h+ <= k+
    ("+", "+"): "NestedPlusMinus",   # h+ <= k-
    ("-", "-"): "NestedMinusPlus",   # h- <= k+
    ("-", "+"): "NestedMinusMinus",  # h- <= k-
}


def relation(h: Hyperplane, k: Hyperplane) -> str:
    if h.id == k.id:
        raise ValueError("relation of a hyperplane with itself")
    empty = [(a, b) for a, b in product("+-", repeat=2)
             if not (h.side(1 if a == "+" else -1) & k.side(1 if b == "+" else -1))]
    if not empty:
        return CROSS
    if len(empty) != 1:
        raise ValueError(f"hyperplanes {h.id} and {k.id} have {len(empty)} empty quarters")
    return _NESTINGS[empty[0]]


def crosses(h: Hyperplane, k: Hyperplane) -> bool:
    return h.id != k.id and relation(h, k) == CROSS


def separates(h: Hyperplane, a: Hyperplane, b: Hyperplane) -> bool:
    """h separates a from b: their supports lie in opposite halfspaces of h."""
    sa, sb = a.support, b.support
    return (sa <= h.plus and sb <= h.minus) or (sa <= h.minus and sb <= h.plus)


def facing_triples(g_or_hps, among=None) -> list[tuple[int, int, int]]:
    """Triples of pairwise disjoint hyperplanes, none separating the other two.

    ``among`` optionally restricts the scan to the given hyperplane ids.
    """
    hps = hyperplanes(g_or_hps) if isinstance(g_or_hps, MedianGraph) else list(g_or_hps)
    if among is not None:
        keep = set(among)
        hps = [h for h in hps if h.id in keep]
    out = []
    for a, b, c in combinations(hps, 3):
        if crosses(a, b) or crosses(b, c) or crosses(a, c):
            continue
        if separates(a, b, c) or separates(b, a, c) or separates(c, a, b):
            continue
        out.append((a.id, b.id, c.id))
    return out


@dataclass(frozen=True)
class SeparationReport:
    relations: dict  # (h.id, k.id) with h.id < k.id -> relation name
    facing: list

    def counts(self) -> dict:
        out = {}
        for r in self.relations.values():
            out[r] = out.get(r, 0) + 1
        return out


def separation_report(g: MedianGraph) -> SeparationReport:
    hps = hyperplanes(g)
    rel = {(a.id, b.id): relation(a, b) for a, b in combinations(hps, 2)}
    return SeparationReport(rel, facing_triples(hps))


# --- example graphs -----------------------------------------------------------

def path_graph(n: int) -> MedianGraph:
    """Path with n edges on vertices 0..n."""
    return MedianGraph(tuple(range(n + 1)), tuple((i, i + 1) for i in range(n)))


def cycle_graph(n: int) -> MedianGraph:
    return MedianGraph(tuple(range(n)), tuple((i, (i + 1) % n) for i in range(n)))


def cube_graph(n: int) -> MedianGraph:
    verts = tuple(product((0, 1), repeat=n))
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[v], idx[v[:k] + (1,) + v[k + 1:]]) for v in verts for k in range(n) if v[k] == 0]
    return MedianGraph(verts, tuple(edges))


def spider(legs: int, length: int) -> MedianGraph:
    """A centre (0, 0) with ``legs`` paths of ``length`` edges; leg j has vertices (j, 1..length)."""
    verts = [(0, 0)] + [(j, d) for j in range(1, legs + 1) for d in range(1, length + 1)]
    label_edges = [((j, d - 1) if d > 1 else (0, 0), (j, d))
                   for j in range(1, legs + 1) for d in range(1, length + 1)]
    return MedianGraph.from_label_edges(verts, label_edges)


def tripod() -> MedianGraph:
    return spider(3, 1)


def builtin_graph(spec: str) -> MedianGraph:
    """'path:5', 'cube:3', 'cycle:5', 'tripod', 'spider:4,2'."""
    name, _, args = spec.partition(":")
    nums = [int(a) for a in args.split(",") if a.strip()]
    makers = {"path": path_graph, "cube": cube_graph, "cycle": cycle_graph,
              "spider": spider, "tripod": tripod}
    if name not in makers:
        raise ValueError(f"unknown built-in graph {spec!r}")
    return makers[name](*nums)


# --- JSON -------------------------------------------------------------------

def _label_to_json(v):
    return list(v) if isinstance(v, tuple) else v


def _label_from_json(v):
    return tuple(_label_from_json(x) for x in v) if isinstance(v, list) else v


def graph_to_json(g: MedianGraph) -> str:
    doc = {"schema": MEDIAN_SCHEMA, "vertices": [_label_to_json(v) for v in g.vertices],
           "edges": [list(e) for e in g.edges]}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def graph_from_json(text: str) -> MedianGraph:
    doc = json.loads(text)
    return MedianGraph(tuple(_label_from_json(v) for v in doc["vertices"]),
                       tuple(tuple(e) for e in doc["edges"]))
