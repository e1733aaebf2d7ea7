"""Finite-scale detectors for ends, narrowness, growth and double cosets.

Every report is qualified by the scale it was computed at.  The outer sphere
of a ball is a truncation frontier, so "unbounded" is read as "reaches the
outer shell of the ball".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .group_actions import MarkedAction, RayPoint, invert_word, word_text
from .schreier import BallGraph, GrowthTable, bfs_distances, build_ball


class ScaleError(ValueError):
    """The ball is too small for the requested scale parameters."""


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True

    def groups(self, items):
        out = {}
        for i in items:
            out.setdefault(self.find(i), []).append(i)
        return list(out.values())


def _components(adj, members) -> list[list[int]]:
    members = set(members)
    seen, comps = set(), []
    for s in sorted(members):
        if s in seen:
            continue
        comp, queue = [], deque([s])
        seen.add(s)
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in adj[u]:
                if v in members and v not in seen:
                    seen.add(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


# --- ends -------------------------------------------------------------------

@dataclass(frozen=True)
class EndsProfile:
    radius: int
    counts: dict  # r -> number of deep components of B(R) - B(r)
    components: dict = field(repr=False)  # r -> list of vertex lists

    def to_dict(self):
        return {"radius": self.radius, "counts": {str(r): c for r, c in sorted(self.counts.items())},
                "view": "simplified"}


def ends_profile(ball: BallGraph, r_values) -> EndsProfile:
    R = ball.radius
    r_values = sorted(set(int(r) for r in r_values))
    if not r_values:
        raise ScaleError("no inner radii given")
    if r_values[0] < 0 or r_values[-1] >= R - 1:
        raise ScaleError(f"inner radius must satisfy 0 <= r < R - 1 = {R - 1}")
    counts, comps = {}, {}
    for r in r_values:
        annulus = [i for i, d in enumerate(ball.spheres) if r < d <= R]
        deep = [c for c in _components(ball.simple_adjacency, annulus)
                if any(ball.spheres[i] == R for i in c)]
        counts[r] = len(deep)
        comps[r] = [[ball.vertices[i] for i in c] for c in deep]
    return EndsProfile(R, counts, comps)


# --- coarse connectivity and narrowness ---------------------------------------

def _power_adjacency(ball: BallGraph, members, mu: int) -> dict[int, list[int]]:
    members = set(members)
    adj = {}
    for v in members:
        near = bfs_distances(ball, v, limit=mu)
        adj[v] = sorted(u for u in near if u in members and u != v)
    return adj


def coarse_components(ball: BallGraph, vertex_set, mu: int) -> list[list[RayPoint]]:
    """Classes of ``vertex_set`` under chains of steps of length <= mu.

    Distances are measured in the whole ball, not the induced subgraph.
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    idx = sorted({ball.index[tuple(v)] if not isinstance(v, int) else v for v in vertex_set})
    adj = _power_adjacency(ball, idx, mu)
    return [[ball.vertices[i] for i in c] for c in _components(adj, idx)]


@dataclass(frozen=True)
class NarrownessReport:
    mu: int
    r: int
    R: int
    witness_count: int
    witnesses: tuple  # tuple of tuples of RayPoint
    cut: tuple  # vertex cut of size witness_count separating the shells
    method: str
    certificate_verified: bool

    def to_dict(self):
        return {"mu": self.mu, "r": self.r, "R": self.R, "witness_count": self.witness_count,
                "method": self.method, "certificate_verified": self.certificate_verified,
                "witnesses": [[list(p) for p in w] for w in self.witnesses],
                "cut": [list(p) for p in self.cut]}


def _max_disjoint_paths(adj, sources, sinks):
    """Vertex-disjoint sources->sinks paths by unit-capacity augmenting paths.

    Returns (paths, cut) where ``cut`` is a minimum vertex separator.
    """
    S, T = ("s",), ("t",)
    cap = {}

    def add(u, v, c):
        cap.setdefault(u, {})
        cap.setdefault(v, {})
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    big = len(adj) + 1  # only vertex arcs may appear in a minimum cut
    for v in adj:
        add(("in", v), ("out", v), 1)
        for u in adj[v]:
            add(("out", v), ("in", u), big)
    for v in sorted(sources):
        add(S, ("in", v), big)
    for v in sorted(sinks):
        add(("out", v), T, big)
    cap.setdefault(S, {})
    cap.setdefault(T, {})

    def reachable():
        prev = {S: None}
        queue = deque([S])
        while queue:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in prev:
                    prev[v] = u
                    queue.append(v)
        return prev

    while True:
        prev = reachable()
        if T not in prev:
            break
        v = T
        while prev[v] is not None:
            u = prev[v]
            cap[u][v] -= 1
            cap[v][u] += 1
            v = u

    reach = reachable()
    cut = sorted(v for v in adj if ("in", v) in reach and ("out", v) not in reach)

    # flow on (out v -> in u) is the reverse residual capacity
    nxt = {}
    for v in adj:
        for u in adj[v]:
            if cap[("in", u)][("out", v)] > 0:
                nxt.setdefault(v, []).append(u)
    paths = []
    for v in sorted(sources):
        if cap[("in", v)].get(S, 0) <= 0:
            continue
        path = [v]
        while cap[T].get(("out", path[-1]), 0) <= 0:
            path.append(nxt[path[-1]].pop())
        paths.append(path)
    return paths, cut


def narrowness_profile(ball: BallGraph, mu: int, r: int) -> NarrownessReport:
    """Largest family of disjoint mu-coarsely connected deep sets in B(R) - B(r).

    A witness must meet the inner shell r < d <= r + mu and the outer shell
    R - mu < d <= R.  Any such set contains a shell-to-shell path in the
    mu-step graph of the annulus and any such path is a witness, so the
    maximum equals the number of vertex-disjoint shell-to-shell paths.  The
    returned minimum cut certifies maximality: every witness meets it.
    """
    R = ball.radius
    if mu < 1:
        raise ValueError("mu must be >= 1")
    if r < 0 or r + mu >= R:
        raise ScaleError(f"need r + mu < R (got r={r}, mu={mu}, R={R})")
    annulus = [i for i, d in enumerate(ball.spheres) if r < d <= R]
    inner = {i for i in annulus if ball.spheres[i] <= r + mu}
    outer = {i for i in annulus if ball.spheres[i] > R - mu}
    adj = _power_adjacency(ball, annulus, mu)
    paths, cut = _max_disjoint_paths(adj, inner, outer)
    if len(cut) != len(paths):
        raise RuntimeError("max-flow/min-cut mismatch")
    verified = _check_separator(adj, inner, outer, set(cut))
    return NarrownessReport(mu, r, R, len(paths),
                            tuple(tuple(ball.vertices[i] for i in p) for p in paths),
                            tuple(ball.vertices[i] for i in cut), "menger-flow", verified)


def _check_separator(adj, inner, outer, cut) -> bool:
    start = [v for v in inner if v not in cut]
    seen = set(start)
    queue = deque(start)
    while queue:
        u = queue.popleft()
        if u in outer:
            return False
        for v in adj[u]:
            if v not in cut and v not in seen:
                seen.add(v)
                queue.append(v)
    return True


# --- growth -----------------------------------------------------------------

@dataclass(frozen=True)
class GrowthVerdict:
    C_estimate: Fraction
    holds: bool
    note: str = "finite-scale evidence, not a proof"

    def to_dict(self):
        return {"C_estimate": str(self.C_estimate), "C_float": float(self.C_estimate),
                "holds": self.holds, "note": self.note}


def linear_growth_check(table: GrowthTable) -> GrowthVerdict:
    """C = max |B(r)|/r; holds if the ratio peaks before the last quarter of radii."""
    sizes = table.sizes
    if len(sizes) < 4:
        raise ScaleError("growth table needs at least 4 entries")
    top = len(sizes) - 1
    ratios = {r: Fraction(sizes[r], r) for r in range(1, top + 1)}
    tail = max(1, top // 4)
    early = max(ratios[r] for r in range(1, top - tail + 1))
    late = max(ratios[r] for r in range(top - tail + 1, top + 1))
    return GrowthVerdict(max(ratios.values()), late <= early)


# --- loop words and double cosets ----------------------------------------------

@dataclass(frozen=True)
class LoopWord:
    word: tuple
    edge: tuple  # the non-tree edge (u, label, v) it comes from

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return word_text(self.word)


def spanning_tree(ball: BallGraph) -> tuple[dict, set]:
    """BFS tree rooted at the basepoint.

    Parents are chosen lexicographically by (sphere, ray, position, label
    order, +1 before -1).  Returns (paths, tree_edges): the tree word from the
    basepoint to every vertex, and the directed ball edges used by the tree.
    """
    order = sorted(range(len(ball)), key=lambda i: (ball.spheres[i], ball.vertices[i]))
    letters = [(lbl, e) for lbl in ball.labels for e in (1, -1)]
    paths = {ball.root: ()}
    tree_edges = set()
    for u in order:
        if u not in paths:
            continue
        for lbl, e in letters:
            v = ball.moves[u].get((lbl, e))
            if v is None or v in paths or ball.spheres[v] != ball.spheres[u] + 1:
                continue
            paths[v] = paths[u] + ((lbl, e),)
            tree_edges.add((u, lbl, v) if e == 1 else (v, lbl, u))
    return paths, tree_edges


def loop_words(ball: BallGraph, budget: int) -> list[LoopWord]:
    """Schreier generators of the basepoint stabiliser read off the ball.

    One word ``path(u) s path(v)^-1`` per non-tree edge ``(u, s, v)``, kept if
    its length is at most ``budget``.
    """
    if budget > 2 * ball.radius + 1:
        raise ScaleError(f"budget {budget} exceeds 2R+1 = {2 * ball.radius + 1}")
    paths, tree_edges = spanning_tree(ball)
    out = []
    for u, lbl, v in ball.edges:
        if (u, lbl, v) in tree_edges:
            continue
        word = paths[u] + ((lbl, 1),) + invert_word(paths[v])
        if len(word) > budget:
            continue
        if _apply(ball, word, ball.root) != ball.root:
            raise RuntimeError(f"loop word {word_text(word)} does not fix the basepoint")
        out.append(LoopWord(word, (ball.vertices[u], lbl, ball.vertices[v])))
    return out


def _apply(ball: BallGraph, word, i: int):
    """Image index of vertex i under ``word``, None if it lands outside the ball."""
    if ball.action is not None:
        return ball.index.get(ball.action.apply_word(word, ball.vertices[i]))
    return ball.walk(word, i)


@dataclass(frozen=True)
class DoubleCosetPartition:
    classes: tuple  # tuple of tuples of RayPoint, basepoint class first
    budget: int
    radius: int
    stable: bool
    trusted: tuple  # per class: does it contain a vertex v with d(v) + budget <= R
    untrusted_merges: int
    word_count: int

    def __len__(self):
        return len(self.classes)

    def class_of(self, p):
        p = tuple(p)
        for k, c in enumerate(self.classes):
            if p in c:
                return k
        raise KeyError(p)

    def to_dict(self):
        return {"budget": self.budget, "radius": self.radius, "stable": self.stable,
                "class_count": len(self.classes), "class_sizes": [len(c) for c in self.classes],
                "trusted": list(self.trusted), "untrusted_merges": self.untrusted_merges,
                "loop_words": self.word_count,
                "classes": [[list(p) for p in c] for c in self.classes]}


def _orbit_partition(ball: BallGraph, budget: int):
    words = loop_words(ball, budget)
    uf = UnionFind(len(ball))
    trusted = [d + budget <= ball.radius for d in ball.spheres]
    untrusted = 0
    for lw in words:
        for w in (lw.word, invert_word(lw.word)):
            for i in range(len(ball)):
                j = _apply(ball, w, i)
                if j is not None and uf.union(i, j) and not (trusted[i] and trusted[j]):
                    untrusted += 1
    groups = uf.groups(range(len(ball)))
    groups.sort(key=lambda g: (ball.root not in g, min(ball.spheres[i] for i in g), min(g)))
    return groups, trusted, untrusted, len(words)


def double_coset_orbits(ball: BallGraph, budget: int) -> DoubleCosetPartition:
    """Orbits of ball vertices under the loop words of length <= budget.

    Vertices are cosets Hg and orbits of H on them are double cosets HgH.
    ``stable`` records whether the partition survives raising the budget by one.
    """
    if budget > ball.radius:
        raise ScaleError(f"budget {budget} exceeds ball radius {ball.radius}")
    groups, trusted, untrusted, nwords = _orbit_partition(ball, budget)
    finer = _orbit_partition(ball, budget + 1)[0]
    stable = sorted(map(sorted, groups)) == sorted(map(sorted, finer))
    return DoubleCosetPartition(
        tuple(tuple(ball.vertices[i] for i in sorted(g, key=lambda i: ball.vertices[i])) for g in groups),
        budget, ball.radius, stable,
        tuple(any(trusted[i] for i in g) for g in groups), untrusted, nwords)


# --- commensurator and coset distance probes -----------------------------------

@dataclass(frozen=True)
class AtLeast:
    bound: int

    def __str__(self):
        return f">={self.bound}"


@dataclass(frozen=True)
class CommProbe:
    image_sizes: tuple  # image_sizes[r-1] = |rho(gH) n B(r)| for r = 1..R
    verdict: str  # "BoundedSoFar" or "GrowingSoFar"
    point: RayPoint
    budget: int

    def to_dict(self):
        return {"point": list(self.point), "budget": self.budget, "verdict": self.verdict,
                "image_sizes": list(self.image_sizes), "note": "finite-scale evidence, not a proof"}


def _coset_point(ball_or_action, g, basepoint):
    """g as a word or an element; returns basepoint.g."""
    action = ball_or_action.action if isinstance(ball_or_action, BallGraph) else ball_or_action
    if hasattr(g, "translation"):
        return g(basepoint)
    if action is None:
        raise ValueError("words need a ball built from an action")
    return action.apply_word(g, basepoint)


def coset_image(ball: BallGraph, g, budget: int) -> list[int]:
    """Vertices of rho_H(gH) detected in the ball: the H-orbit of basepoint.g."""
    x = _coset_point(ball, g, ball.basepoint)
    if x not in ball:
        return []
    groups = _orbit_partition(ball, budget)[0]
    target = ball.index[x]
    return next(sorted(c) for c in groups if target in c)


def commensurator_probe(action: MarkedAction, g, R: int, basepoint=(1, 1), budget: int | None = None) -> CommProbe:
    if R < 1:
        raise ScaleError("R must be >= 1")
    budget = min(6, R) if budget is None else budget
    ball = build_ball(action, basepoint, R)
    image = coset_image(ball, g, budget)
    sizes = tuple(sum(1 for i in image if ball.spheres[i] <= r) for r in range(1, R + 1))
    cutoff = R - max(1, R // 4)  # last radius before the final quarter
    growing = cutoff >= 1 and sizes[-1] > sizes[cutoff - 1]
    return CommProbe(sizes, "GrowingSoFar" if growing else "BoundedSoFar",
                     _coset_point(action, g, RayPoint(*basepoint)), budget)


def coset_distance_probe(ball: BallGraph, g, D: int, budget: int | None = None):
    """d_S(H, gH) as the distance from the basepoint to the nearest detected
    member of rho_H(gH); ``AtLeast(D)`` if none lies within distance D."""
    length = len(g) if isinstance(g, tuple) else ball.spheres[ball.index[_coset_point(ball, g, ball.basepoint)]]
    if ball.radius <= D + length:
        raise ScaleError(f"need radius > D + |g| = {D + length}")
    budget = min(6, ball.radius) if budget is None else budget
    image = coset_image(ball, g, budget)
    best = min((ball.spheres[i] for i in image), default=None)
    if best is None or best > D:
        return AtLeast(D)
    return best
