"""Finite balls in Schreier graphs of marked actions on X_n."""

from __future__ import annotations

import csv
import io
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .group_actions import MarkedAction, RayPoint

BALL_SCHEMA = "cosetgeom.ball/1"


@dataclass(frozen=True)
class BallGraph:
    """Radius-R ball around ``basepoint``.

    Vertices are sorted by (ray, position).  ``edges`` holds every directed
    generator edge ``(u, label, v)`` with ``label(u) == v`` and both ends in the
    ball; inverse edges are the same edges read backwards.  ``spheres[i]`` is
    the distance of vertex ``i`` from the basepoint.
    """

    basepoint: RayPoint
    radius: int
    vertices: tuple[RayPoint, ...]
    edges: tuple[tuple[int, str, int], ...]
    spheres: tuple[int, ...]
    labels: tuple[str, ...]
    action: MarkedAction | None = field(default=None, compare=False, repr=False)

    @cached_property
    def index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def root(self) -> int:
        return self.index[self.basepoint]

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, p):
        return tuple(p) in self.index

    @cached_property
    def moves(self) -> list[dict]:
        """moves[i][(label, e)] = j when the letter label^e takes vertex i to j."""
        out = [{} for _ in self.vertices]
        for u, lbl, v in self.edges:
            out[u][(lbl, 1)] = v
            out[v][(lbl, -1)] = u
        return out

    @cached_property
    def simple_adjacency(self) -> list[tuple[int, ...]]:
        """Neighbours in the simplified view: no loops, no parallel edges."""
        nbrs = [set() for _ in self.vertices]
        for u, _, v in self.edges:
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
        return [tuple(sorted(s)) for s in nbrs]

    def walk(self, word, start: int):
        """Follow labelled edges; None if the walk leaves the ball."""
        i = start
        for letter in word:
            i = self.moves[i].get(tuple(letter))
            if i is None:
                return None
        return i

    def vertices_within(self, r: int) -> list[int]:
        return [i for i, d in enumerate(self.spheres) if d <= r]


def build_ball(action: MarkedAction, basepoint, R: int) -> BallGraph:
    if R < 0:
        raise ValueError("radius must be >= 0")
    basepoint = RayPoint(*basepoint)
    if not (1 <= basepoint.ray <= action.ray_count and basepoint.position >= 1):
        raise ValueError(f"basepoint {basepoint} is not in X_{action.ray_count}")
    letters = [(lbl, e) for lbl in action.labels for e in (1, -1)]
    dist = {basepoint: 0}
    layer = [basepoint]
    for d in range(R):
        nxt = []
        for x in layer:
            for lbl, e in letters:
                y = action.step(x, lbl, e)
                if y not in dist:
                    dist[y] = d + 1
                    nxt.append(y)
        layer = nxt
    vertices = tuple(sorted(dist))
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    for i, x in enumerate(vertices):
        for lbl in action.labels:
            j = index.get(action.step(x, lbl))
            if j is not None:
                edges.append((i, lbl, j))
    return BallGraph(basepoint, R, vertices, tuple(sorted(edges, key=_edge_key(action.labels))),
                     tuple(dist[v] for v in vertices), action.labels, action)


def _edge_key(labels):
    rank = {lbl: k for k, lbl in enumerate(labels)}
    return lambda e: (e[0], rank[e[1]], e[2])


def bfs_distances(ball: BallGraph, source: int, limit: int | None = None) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    adj = ball.simple_adjacency
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def graph_distance(ball: BallGraph, u, v, with_exactness: bool = False):
    """Edge-path distance inside the ball, None if unreachable.

    Accepts vertex indices or points.  With ``with_exactness`` returns
    ``(d, exact)``: the ball distance equals the Schreier distance whenever a
    path of that length from the nearer endpoint cannot leave the ball.
    """
    iu, iv = _vertex_index(ball, u), _vertex_index(ball, v)
    if iu is None or iv is None:
        d = None
    else:
        d = bfs_distances(ball, iu).get(iv)
    if not with_exactness:
        return d
    exact = d is not None and d <= ball.radius - min(ball.spheres[iu], ball.spheres[iv])
    return d, exact


def _vertex_index(ball, v):
    if isinstance(v, int):
        return v if 0 <= v < len(ball) else None
    return ball.index.get(tuple(v))


# --- growth -----------------------------------------------------------------

@dataclass(frozen=True)
class GrowthTable:
    sizes: tuple[int, ...]  # sizes[r] = |B(r)|

    def rows(self):
        return list(enumerate(self.sizes))


def growth_table(ball: BallGraph) -> GrowthTable:
    counts = [0] * (ball.radius + 1)
    for d in ball.spheres:
        counts[d] += 1
    sizes, total = [], 0
    for c in counts:
        total += c
        sizes.append(total)
    return GrowthTable(tuple(sizes))


def growth_csv(table: GrowthTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "ball_size", "ratio"])
    for r, s in table.rows():
        w.writerow([r, s, "" if r == 0 else str(Fraction(s, r))])
    return buf.getvalue()


# --- export -----------------------------------------------------------------

def _node(p):
    return f"{p[0]}_{p[1]}"


def to_json(ball: BallGraph) -> str:
    doc = {
        "schema": BALL_SCHEMA,
        "basepoint": list(ball.basepoint),
        "radius": ball.radius,
        "labels": list(ball.labels),
        "vertices": [list(v) for v in ball.vertices],
        "edges": [[u, lbl, v] for u, lbl, v in ball.edges],
        "spheres": list(ball.spheres),
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> BallGraph:
    doc = json.loads(text)
    if doc.get("schema", BALL_SCHEMA) != BALL_SCHEMA:
        raise ValueError(f"unsupported ball schema {doc.get('schema')!r}")
    vertices = tuple(RayPoint(*v) for v in doc["vertices"])
    labels = tuple(doc.get("labels") or sorted({e[1] for e in doc["edges"]}))
    return BallGraph(RayPoint(*doc["basepoint"]), int(doc["radius"]), vertices,
                     tuple((int(u), str(l), int(v)) for u, l, v in doc["edges"]),
                     tuple(int(d) for d in doc["spheres"]), labels)


def to_dot(ball: BallGraph) -> str:
    lines = ["digraph schreier {", f'  // basepoint {_node(ball.basepoint)}, radius {ball.radius}']
    for v, d in zip(ball.vertices, ball.spheres):
        lines.append(f'  "{_node(v)}" [label="({v[0]},{v[1]})"]; // d={d}')
    for u, lbl, v in ball.edges:
        lines.append(f'  "{_node(ball.vertices[u])}" -> "{_node(ball.vertices[v])}" [label="{lbl}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(ball: BallGraph, fmt: str = "json") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        return to_json(ball).encode()
    if fmt == "dot":
        return to_dot(ball).encode()
    raise ValueError(f"unknown export format {fmt!r}")
