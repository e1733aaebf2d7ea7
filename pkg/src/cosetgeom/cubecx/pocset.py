"""Finite poc-sets and their dual cube complexes.

Halfspace ``2*i`` is A_i and ``2*i + 1`` is its complement A_i*.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .graphs import MedianGraph

POCSET_SCHEMA = "cosetgeom.pocset/1"
MAX_WALLS = 24


class PocSetError(ValueError):
    pass


def comp(a: int) -> int:
    return a ^ 1


def halfspace_name(a: int) -> str:
    return f"A{a // 2}" + ("*" if a & 1 else "")


@dataclass(frozen=True)
class PocSet:
    walls: int
    order: np.ndarray  # order[a, b] is True when halfspace a <= halfspace b

    def __post_init__(self):
        le = np.asarray(self.order, dtype=bool)
        m = 2 * self.walls
        if le.shape != (m, m):
            raise PocSetError(f"order matrix must be {m}x{m}")
        object.__setattr__(self, "order", le)
        if not le.diagonal().all():
            raise PocSetError("order is not reflexive")
        if ((le.astype(np.int64) @ le.astype(np.int64) > 0) & ~le).any():
            raise PocSetError("order is not transitive")
        off = le & le.T & ~np.eye(m, dtype=bool)
        if off.any():
            a, b = np.argwhere(off)[0]
            raise PocSetError(f"order is not antisymmetric: {halfspace_name(a)} and {halfspace_name(b)}")
        flip = np.arange(m) ^ 1
        if (le != le[np.ix_(flip, flip)].T).any():
            raise PocSetError("complementation does not reverse the order")
        for a in range(m):
            if le[a, comp(a)]:
                raise PocSetError(f"{halfspace_name(a)} <= its complement")

    def __hash__(self):
        return hash((self.walls, self.order.tobytes()))

    def __eq__(self, other):
        return isinstance(other, PocSet) and self.walls == other.walls and (self.order == other.order).all()

    @classmethod
    def from_relations(cls, walls: int, relations) -> "PocSet":
        """Close ``relations`` (pairs a <= b of halfspace indices) under
        complementation and transitivity."""
        m = 2 * walls
        le = np.eye(m, dtype=bool)
        for a, b in relations:
            a, b = _halfspace(a), _halfspace(b)
            if not (0 <= a < m and 0 <= b < m):
                raise PocSetError(f"halfspace index out of range in ({a}, {b})")
            le[a, b] = True
            le[comp(b), comp(a)] = True
        for k in range(m):  # Warshall
            le |= le[:, [k]] & le[[k], :]
        return cls(walls, le)

    def nested(self, i: int, j: int) -> bool:
        le = self.order
        return any(le[a, b] for a in (2 * i, 2 * i + 1) for b in (2 * j, 2 * j + 1))

    def transverse(self, i: int, j: int) -> bool:
        return i != j and not self.nested(i, j)


def _halfspace(a) -> int:
    if isinstance(a, str):
        name = a.strip()
        star = name.endswith("*")
        return 2 * int(name.lstrip("A").rstrip("*")) + int(star)
    return int(a)


def crossing_walls(k: int) -> PocSet:
    return PocSet.from_relations(k, [])


def chain_walls(k: int) -> PocSet:
    """A_0 <= A_1 <= ... <= A_{k-1}."""
    return PocSet.from_relations(k, [(2 * i, 2 * i + 2) for i in range(k - 1)])


def consistent_orientations(p: PocSet) -> list[int]:
    """Bitmasks (bit i set when A_i* is chosen) of all consistent orientations.

    A choice is consistent when no chosen halfspace lies below the complement
    of another chosen one, which is the same as being upward closed.
    """
    if p.walls > MAX_WALLS:
        raise PocSetError(f"at most {MAX_WALLS} walls can be enumerated")
    le = p.order
    # clash[a] = halfspaces that cannot be chosen together with a
    clash = [{b for b in range(2 * p.walls) if le[a, comp(b)] or le[b, comp(a)]} for a in range(2 * p.walls)]
    out = []

    def extend(i, chosen, mask):
        if i == p.walls:
            out.append(mask)
            return
        for bit in (0, 1):
            a = 2 * i + bit
            if not any(a in clash[c] for c in chosen):
                chosen.append(a)
                extend(i + 1, chosen, mask | (bit << i))
                chosen.pop()

    extend(0, [], 0)
    return sorted(out)


def dual_cube_complex(p: PocSet) -> MedianGraph:
    """1-skeleton of the dual cube complex: orientations joined when they
    differ on a single wall.  Check ``.connected`` on the result."""
    masks = consistent_orientations(p)
    idx = {m: i for i, m in enumerate(masks)}
    edges = [(idx[m], idx[m ^ (1 << w)]) for m in masks for w in range(p.walls)
             if not m >> w & 1 and (m ^ (1 << w)) in idx]
    labels = tuple(tuple((m >> w) & 1 for w in range(p.walls)) for m in masks)
    return MedianGraph(labels, tuple(edges))


def pocset_to_json(p: PocSet) -> str:
    doc = {"schema": POCSET_SCHEMA, "walls": p.walls,
           "halfspaces": [halfspace_name(a) for a in range(2 * p.walls)],
           "order": [[int(x) for x in row] for row in p.order]}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def pocset_from_json(text: str) -> PocSet:
    doc = json.loads(text)
    if "order" in doc:
        return PocSet(int(doc["walls"]), np.array(doc["order"], dtype=bool))
    return PocSet.from_relations(int(doc["walls"]), doc.get("relations", []))
