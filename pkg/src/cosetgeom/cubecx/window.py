"""Z-periodic cube complexes seen through a finite window.

A window is a finite median graph together with the partial map induced by
a generator of the Z-action.  Every query either resolves inside the window
or says so; nothing is extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .graphs import Hyperplane, MedianGraph, crosses, hyperplane_at, hyperplanes, separates


class WindowError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class WindowedShiftComplex:
    """``shift`` lists the defined part of the generator as (src, dst) vertex indices."""

    graph: MedianGraph
    shift: tuple
    period: int = 1
    name: str = ""

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) for a, b in self.shift))
        object.__setattr__(self, "shift", pairs)
        if len({a for a, _ in pairs}) != len(pairs):
            raise WindowError("shift assigns two images to one vertex")
        if len({b for _, b in pairs}) != len(pairs):
            raise WindowError("shift is not injective")
        g = self.graph
        for fwd in (self.forward, self.backward):
            for a, b in g.edges:
                if a in fwd and b in fwd and not g.has_edge(fwd[a], fwd[b]):
                    raise WindowError(f"shift breaks the edge ({g.vertices[a]}, {g.vertices[b]})")

    @cached_property
    def forward(self) -> dict[int, int]:
        return dict(self.shift)

    @cached_property
    def backward(self) -> dict[int, int]:
        return {b: a for a, b in self.shift}

    @cached_property
    def interior(self) -> frozenset:
        return frozenset(self.forward) & frozenset(self.backward)

    @cached_property
    def hyperplanes(self) -> list[Hyperplane]:
        # windows are built as median graphs; the triple scan is left to is_median
        return hyperplanes(self.graph, check=False)

    def hyperplane_at(self, u, v) -> Hyperplane:
        return hyperplane_at(self.hyperplanes, self.graph.vid(u), self.graph.vid(v))

    def truncated(self, h: Hyperplane) -> bool:
        return not h.support <= self.interior

    def power(self, x: int, n: int) -> int | None:
        step = self.forward if n >= 0 else self.backward
        for _ in range(abs(n)):
            x = step.get(x)
            if x is None:
                return None
        return x


@dataclass(frozen=True)
class OrientedImage:
    hyperplane: Hyperplane
    plus: frozenset  # side of the image hyperplane that receives h+


def image(w: WindowedShiftComplex, h: Hyperplane, n: int) -> OrientedImage | None:
    """sigma^n(h) with the orientation carried over from h, or None when the
    image cannot be resolved inside the interior."""
    mapped = []
    for m, p in h.edges:
        a, b = w.power(m, n), w.power(p, n)
        if a is not None and b is not None:
            mapped.append((a, b))
    seen = [(a, b) for a, b in mapped if a in w.interior and b in w.interior]
    if not seen:
        return None
    k = hyperplane_at(w.hyperplanes, *seen[0])
    plus = k.plus if seen[0][1] in k.plus else k.minus
    for a, b in mapped:
        if not w.graph.has_edge(a, b) or hyperplane_at(w.hyperplanes, a, b).id != k.id:
            raise WindowError(f"shift does not map hyperplane {h.id} onto a single hyperplane")
        if b not in plus:
            raise WindowError(f"shift reverses part of hyperplane {h.id}")
    return OrientedImage(k, plus)


def _require_interior(w, h):
    if not any(m in w.interior and p in w.interior for m, p in h.edges):
        raise WindowError(f"hyperplane {h.id} has no edge inside the interior")


# --- skewering ----------------------------------------------------------------

SKEWERS = "Skewers"
STABILISES = "StabilisesPower"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SkewerResult:
    kind: str
    power: int | None = None
    direction: str | None = None  # "plus": sigma^n h+ < h+, "minus": sigma^n h- < h-

    def __str__(self):
        if self.kind == INCONCLUSIVE:
            return INCONCLUSIVE
        tail = f", {self.direction}" if self.direction else ""
        return f"{self.kind}({self.power}{tail})"


def skewer_check(w: WindowedShiftComplex, h: Hyperplane, N: int) -> SkewerResult:
    if N < 1:
        raise ValueError("N must be >= 1")
    _require_interior(w, h)
    everything = frozenset(range(len(w.graph)))
    for n in range(1, N + 1):
        img = image(w, h, n)
        if img is None:
            return SkewerResult(INCONCLUSIVE)
        if img.hyperplane.id == h.id:
            return SkewerResult(STABILISES, n)
        if img.plus < h.plus:
            return SkewerResult(SKEWERS, n, "plus")
        if everything - img.plus < h.minus:
            return SkewerResult(SKEWERS, n, "minus")
    return SkewerResult(INCONCLUSIVE)


# --- crossing sets ---------------------------------------------------------------

def crossing_set(w: WindowedShiftComplex, h: Hyperplane) -> frozenset:
    """Ids of the window hyperplanes crossing h."""
    return frozenset(k.id for k in w.hyperplanes if crosses(h, k))


def hyperplane_symdiff(w: WindowedShiftComplex, h: Hyperplane, g_power: int = 1):
    """(ids in H(h) symdiff H(sigma^p h), verified).

    ``verified`` requires h, its image and every hyperplane met by either
    crossing set to lie wholly inside the interior.
    """
    _require_interior(w, h)
    img = image(w, h, g_power)
    if img is None:
        raise WindowError(f"sigma^{g_power} of hyperplane {h.id} leaves the interior")
    k = img.hyperplane
    ch, ck = crossing_set(w, h), crossing_set(w, k)
    by_id = {x.id: x for x in w.hyperplanes}
    verified = not any(w.truncated(by_id[i]) for i in ch | ck | {h.id, k.id})
    return frozenset(ch ^ ck), verified


# --- separation index ------------------------------------------------------------

def separation_index(w: WindowedShiftComplex, k: Hyperplane, h: Hyperplane, N: int) -> int:
    """Smallest |n1 - n2| with |n_i| <= N such that k separates sigma^n1 h
    from sigma^n2 h; 0 when no pair is separated."""
    if N < 0:
        raise ValueError("N must be >= 0")
    images = {}
    for n in range(-N, N + 1):
        img = image(w, h, n) if n else OrientedImage(h, h.plus)
        if img is None:
            raise WindowError(f"sigma^{n} of hyperplane {h.id} leaves the interior; enlarge the window")
        images[n] = img.hyperplane
    best = 0
    for n1 in range(-N, N + 1):
        for n2 in range(n1 + 1, N + 1):
            if (best == 0 or n2 - n1 < best) and separates(k, images[n1], images[n2]):
                best = n2 - n1
    return best


# --- transfer -------------------------------------------------------------------

@dataclass(frozen=True)
class TransferResult:
    value: int | None  # None unless verified
    verified: bool
    estimate: int | None
    lost: frozenset = frozenset()    # M+ minus g^-1 M+
    gained: frozenset = frozenset()  # g^-1 M+ minus M+


def _status(k: Hyperplane, side: frozenset) -> str:
    if k.support <= side:
        return "in"
    if not (k.support & side):
        return "out"
    return "cross"


def transfer(w: WindowedShiftComplex, h: Hyperplane, g_power: int = 1) -> TransferResult:
    """|M+ - g^-1 M+| - |g^-1 M+ - M+| for g = sigma^p, with M+ the
    hyperplanes lying in h+.

    g^-1 M+ is the set of hyperplanes lying in sigma^-p(h+), read off the
    oriented image of h.  The value is reported only when both differences
    consist of untruncated hyperplanes and no truncated hyperplane changes
    status between the two halfspaces.
    """
    _require_interior(w, h)
    img = image(w, h, -g_power) if g_power else OrientedImage(h, h.plus)
    if img is None:
        return TransferResult(None, False, None)
    side, shifted = h.plus, img.plus
    m_plus = {k.id for k in w.hyperplanes if k.support <= side}
    m_shift = {k.id for k in w.hyperplanes if k.support <= shifted}
    lost, gained = frozenset(m_plus - m_shift), frozenset(m_shift - m_plus)
    by_id = {k.id: k for k in w.hyperplanes}
    verified = not any(w.truncated(by_id[i]) for i in lost | gained) and all(
        _status(k, side) == _status(k, shifted) for k in w.hyperplanes if w.truncated(k))
    estimate = len(lost) - len(gained)
    return TransferResult(estimate if verified else None, verified, estimate, lost, gained)


# --- example windows ----------------------------------------------------------------

def _grid_window(points, step, period, name) -> WindowedShiftComplex:
    verts = tuple(sorted(points))
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[v], idx[u]) for v in verts
             for u in ((v[0] + 1, v[1]), (v[0], v[1] + 1)) if u in idx]
    shift = [(idx[v], idx[u]) for v in verts
             if (u := (v[0] + step[0], v[1] + step[1])) in idx]
    return WindowedShiftComplex(MedianGraph(verts, tuple(edges)), tuple(shift), period, name)


def line_window(N: int) -> WindowedShiftComplex:
    """Integers -N..N with the unit shift."""
    if N < 1:
        raise ValueError("N must be >= 1")
    g = MedianGraph(tuple(range(-N, N + 1)), tuple((i, i + 1) for i in range(2 * N)))
    return WindowedShiftComplex(g, tuple((i, i + 1) for i in range(2 * N)), 1, f"line:{N}")


def staircase_window(N: int) -> WindowedShiftComplex:
    """Unit squares of Z^2 with lower-left corners (k, k) and (k+1, k), |k| <= N,
    with the diagonal shift (x, y) -> (x+1, y+1)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    pts = {(x + dx, k + dy) for k in range(-N, N + 1) for x in (k, k + 1)
           for dx in (0, 1) for dy in (0, 1)}
    return _grid_window(pts, (1, 1), 1, f"staircase:{N}")


def ladder_window(N: int, step: int = 2) -> WindowedShiftComplex:
    """The ladder [-N, N] x {0, 1} with the shift x -> x + step."""
    if N < 1 or step < 1:
        raise ValueError("N and step must be >= 1")
    pts = {(x, y) for x in range(-N, N + 1) for y in (0, 1)}
    return _grid_window(pts, (step, 0), step, f"ladder:{N},{step}")


def builtin_window(spec: str, default_size: int = 20) -> WindowedShiftComplex:
    """'line', 'line:20', 'staircase:8', 'ladder:10,2'."""
    name, _, args = spec.partition(":")
    nums = [int(a) for a in args.split(",") if a.strip()] or [default_size]
    makers = {"line": line_window, "staircase": staircase_window, "ladder": ladder_window}
    if name not in makers:
        raise ValueError(f"unknown window {spec!r}")
    return makers[name](*nums)
