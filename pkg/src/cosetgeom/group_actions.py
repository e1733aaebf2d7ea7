"""Translations at infinity of X_n = {1..n} x N, optionally with a ray permutation.

An element is stored as ``(sigma, translation, correction)``.  Away from a
finite set it acts by the eventual rule

    (i, m) -> (sigma(i), m + translation[sigma(i)])

i.e. first the ray is permuted, then the target ray's translation is applied.
``correction`` lists every point where the element disagrees with that rule.
Pure Houghton elements have ``sigma`` equal to the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, NamedTuple, Sequence


class RayPoint(NamedTuple):
    ray: int
    position: int

    def __str__(self):
        return f"({self.ray},{self.position})"


class InvalidElement(ValueError):
    pass


Letter = tuple  # (label, exponent) with exponent in {+1, -1}


def _check_perm(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise InvalidElement(f"sigma {sigma} is not a permutation of 1..{n}")
    return sigma


@dataclass(frozen=True)
class HoughtonElement:
    ray_count: int
    translation: tuple[int, ...]
    correction: tuple[tuple[RayPoint, RayPoint], ...] = ()
    sigma: tuple[int, ...] = None

    def __post_init__(self):
        n = self.ray_count
        if n < 1:
            raise InvalidElement("ray_count must be >= 1")
        sigma = _check_perm(self.sigma if self.sigma is not None else range(1, n + 1), n)
        translation = tuple(int(a) for a in self.translation)
        if len(translation) != n:
            raise InvalidElement(f"translation has {len(translation)} entries, expected {n}")
        if sum(translation) != 0:
            raise InvalidElement(f"translation {translation} does not sum to 0")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "translation", translation)

        table = {}
        for src, dst in dict(self.correction).items():
            src, dst = RayPoint(*src), RayPoint(*dst)
            for p in (src, dst):
                if not (1 <= p.ray <= n and p.position >= 1):
                    raise InvalidElement(f"point {p} is not in X_{n}")
            if src in table:
                raise InvalidElement(f"duplicate correction entry for {src}")
            table[src] = dst
        # minimality: drop entries that agree with the eventual rule
        canon = tuple(sorted((s, d) for s, d in table.items() if self._eventual(s) != d))
        object.__setattr__(self, "correction", canon)
        self._validate_bijection()

    def _eventual(self, p):
        j = self.sigma[p[0] - 1]
        return (j, p[1] + self.translation[j - 1])

    @cached_property
    def _table(self):
        return dict(self.correction)

    @property
    def support_bound(self) -> int:
        """Largest position mentioned by the correction (0 if none)."""
        return max((max(s.position, d.position) for s, d in self.correction), default=0)

    @property
    def max_shift(self) -> int:
        return max((abs(a) for a in self.translation), default=0)

    def _validate_bijection(self):
        # Outside positions <= C+T every point follows the eventual rule, which is
        # injective and cannot collide with a corrected image (those sit at <= C).
        n = self.ray_count
        C, T = self.support_bound, self.max_shift
        M = C + T + 1
        seen = {}
        for i in range(1, n + 1):
            for m in range(1, M + 1):
                q = self(RayPoint(i, m), _check=False)
                if q.position < 1:
                    raise InvalidElement(f"({i},{m}) would map to position {q.position}")
                if q in seen:
                    raise InvalidElement(f"not injective: {seen[q]} and ({i},{m}) both map to {q}")
                seen[q] = (i, m)
        # with injectivity and zero total translation this forces surjectivity;
        # check the finite part explicitly anyway
        for i in range(1, n + 1):
            for m in range(1, C + 1):
                if (i, m) not in seen:
                    raise InvalidElement(f"not surjective: ({i},{m}) has no preimage")

    def __call__(self, p, _check=True) -> RayPoint:
        if _check and not (1 <= p[0] <= self.ray_count and p[1] >= 1):
            raise InvalidElement(f"point {tuple(p)} is not in X_{self.ray_count}")
        hit = self._table.get(p)
        if hit is not None:
            return hit
        return RayPoint(*self._eventual(p))

    @property
    def is_identity(self) -> bool:
        return not self.correction and not any(self.translation) and self.sigma == tuple(range(1, self.ray_count + 1))

    def __mul__(self, other):
        return compose(self, other)

    def __str__(self):
        return to_text(self)


def identity(n: int) -> HoughtonElement:
    return HoughtonElement(n, (0,) * n)


def apply(f: HoughtonElement, p) -> RayPoint:
    return f(RayPoint(*p))


def compose(f: HoughtonElement, g: HoughtonElement) -> HoughtonElement:
    """Return f o g, so that compose(f, g)(p) == f(g(p))."""
    n = f.ray_count
    if g.ray_count != n:
        raise InvalidElement(f"ray count mismatch: {n} vs {g.ray_count}")
    sigma = tuple(f.sigma[g.sigma[i] - 1] for i in range(n))
    f_inv = _perm_inverse(f.sigma)
    # translations are indexed by target ray; g's target ray is f^-1 of ours
    translation = tuple(f.translation[k] + g.translation[f_inv[k] - 1] for k in range(n))
    bound = max(g.support_bound, f.support_bound + g.max_shift) + g.max_shift + 1
    table = {}
    for i in range(1, n + 1):
        for m in range(1, bound + 1):
            p = RayPoint(i, m)
            table[p] = f(g(p))
    return HoughtonElement(n, translation, table, sigma)


def invert(f: HoughtonElement) -> HoughtonElement:
    n = f.ray_count
    inv_sigma = _perm_inverse(f.sigma)
    translation = tuple(-f.translation[f.sigma[i] - 1] for i in range(n))
    table = {d: s for s, d in f.correction}
    return HoughtonElement(n, translation, table, inv_sigma)


def canonical_equal(f: HoughtonElement, g: HoughtonElement) -> bool:
    if f.ray_count != g.ray_count:
        raise InvalidElement(f"ray count mismatch: {f.ray_count} vs {g.ray_count}")
    return f == g


def order(f: HoughtonElement, limit: int = 10_000):
    """Order of f, or None if it exceeds ``limit``."""
    g = f
    for k in range(1, limit + 1):
        if g.is_identity:
            return k
        g = compose(f, g)
    return None


def _perm_inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return tuple(inv)


# --- named elements ---------------------------------------------------------

def houghton_generator(i: int, n: int) -> HoughtonElement:
    """g_i: translation by one along the line ray 1 u ray i+1."""
    if not 1 <= i <= n - 1:
        raise InvalidElement(f"generator index {i} out of range 1..{n - 1}")
    translation = [0] * n
    translation[0] = -1
    translation[i] = 1
    return HoughtonElement(n, tuple(translation), {(1, 1): (i + 1, 1)})


def beta(n: int = 2) -> HoughtonElement:
    """The transposition of (1,1) and (2,1)."""
    if n < 2:
        raise InvalidElement("beta needs at least two rays")
    return HoughtonElement(n, (0,) * n, {(1, 1): (2, 1), (2, 1): (1, 1)})


def alpha(sigma: Sequence[int]) -> HoughtonElement:
    """Ray permutation (i, m) -> (sigma(i), m); ``sigma`` is the image tuple."""
    sigma = _check_perm(sigma, len(sigma))
    if sigma[0] != 1:
        raise InvalidElement("alpha requires sigma(1) = 1")
    return HoughtonElement(len(sigma), (0,) * len(sigma), (), sigma)


def perm_from_cycles(cycles: Iterable[Sequence[int]], n: int) -> tuple[int, ...]:
    img = list(range(1, n + 1))
    used = set()
    for cyc in cycles:
        cyc = [int(c) for c in cyc]
        for c in cyc:
            if not 1 <= c <= n or c in used:
                raise InvalidElement(f"bad cycle {cyc} for n={n}")
            used.add(c)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return tuple(img)


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """'(2,3)(4,5)' or '(2 3)' -> image tuple; '()' or '' is the identity."""
    text = text.strip()
    if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", text):
        raise InvalidElement(f"cannot parse cycles {text!r}")
    cycles = [re.split(r"[\s,]+", c.strip()) for c in re.findall(r"\(([^)]*)\)", text)]
    return perm_from_cycles([c for c in cycles if c != [""]], n)


def cycles_text(sigma: Sequence[int]) -> str:
    seen, out = set(), []
    for start in range(1, len(sigma) + 1):
        if start in seen or sigma[start - 1] == start:
            continue
        cyc, x = [], start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = sigma[x - 1]
        out.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# --- text form --------------------------------------------------------------

def to_text(f: HoughtonElement) -> str:
    corr = ";".join(f"{s}->{d}" for s, d in f.correction)
    return (f"n={f.ray_count} | sigma={cycles_text(f.sigma)} | "
            f"t={','.join(map(str, f.translation))} | c={corr}")


_POINT = r"\(\s*(\d+)\s*,\s*(\d+)\s*\)"


def from_text(text: str) -> HoughtonElement:
    fields = {}
    for part in text.split("|"):
        key, sep, value = part.partition("=")
        if not sep:
            raise InvalidElement(f"malformed field {part!r}")
        fields[key.strip()] = value.strip()
    try:
        n = int(fields["n"])
        translation = tuple(int(a) for a in fields["t"].split(",")) if fields.get("t") else (0,) * n
    except (KeyError, ValueError) as exc:
        raise InvalidElement(f"malformed element text {text!r}") from exc
    sigma = parse_cycles(fields.get("sigma", "()"), n)
    table = {}
    for entry in filter(None, (e.strip() for e in fields.get("c", "").split(";"))):
        mt = re.fullmatch(_POINT + r"\s*->\s*" + _POINT, entry)
        if not mt:
            raise InvalidElement(f"malformed correction entry {entry!r}")
        a, b, c, d = map(int, mt.groups())
        if (a, b) in table:
            raise InvalidElement(f"duplicate correction entry for ({a},{b})")
        table[(a, b)] = (c, d)
    return HoughtonElement(n, translation, table, sigma)


# --- marked actions and words -----------------------------------------------

@dataclass(frozen=True)
class MarkedAction:
    """A finite labelled generating set acting on X_n; inverses are implied."""

    ray_count: int
    generators: tuple[tuple[str, HoughtonElement], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        gens = tuple((str(lbl), g) for lbl, g in self.generators)
        labels = [lbl for lbl, _ in gens]
        if len(set(labels)) != len(labels):
            raise InvalidElement(f"duplicate generator labels in {labels}")
        for lbl, g in gens:
            if "^" in lbl or " " in lbl or not lbl:
                raise InvalidElement(f"bad generator label {lbl!r}")
            if g.ray_count != self.ray_count:
                raise InvalidElement(f"generator {lbl} acts on X_{g.ray_count}, expected X_{self.ray_count}")
        object.__setattr__(self, "generators", gens)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.generators)

    @cached_property
    def _elements(self):
        out = {}
        for lbl, g in self.generators:
            out[(lbl, 1)] = g
            out[(lbl, -1)] = invert(g)
        return out

    def element(self, label: str, exponent: int = 1) -> HoughtonElement:
        return self._elements[(label, exponent)]

    def step(self, p, label: str, exponent: int = 1) -> RayPoint:
        return self._elements[(label, exponent)](p)

    def apply_word(self, word, p) -> RayPoint:
        """Apply the letters of ``word`` left to right (right action)."""
        for lbl, e in word:
            p = self._elements[(lbl, e)](p)
        return p

    def word_element(self, word) -> HoughtonElement:
        return reduce(lambda acc, le: compose(self._elements[le], acc), word, identity(self.ray_count))


def houghton_action(n: int) -> MarkedAction:
    """G_n with Houghton's generators: {g_1, beta} for n = 2, {g_1..g_{n-1}} for n >= 3."""
    if n < 2:
        raise InvalidElement("Houghton actions need n >= 2")
    if n == 2:
        gens = (("g1", houghton_generator(1, 2)), ("beta", beta(2)))
    else:
        gens = tuple((f"g{i}", houghton_generator(i, n)) for i in range(1, n))
    return MarkedAction(n, gens, name=f"houghton-{n}")


def extended_action(n: int, sigma: Sequence[int]) -> MarkedAction:
    """The group generated by S_n together with the ray permutation alpha."""
    base = houghton_action(n)
    a = alpha(sigma)
    if a.ray_count != n:
        raise InvalidElement("sigma length does not match n")
    return MarkedAction(n, base.generators + (("alpha", a),), name=f"houghton-ext-{n}-{cycles_text(a.sigma)}")


def line_action() -> MarkedAction:
    """<g_1> acting on X_2: its Schreier graph is a bi-infinite line."""
    return MarkedAction(2, (("g1", houghton_generator(1, 2)),), name="line")


def parse_word(text: str) -> tuple[Letter, ...]:
    """'g1 g1^-1 beta' -> (('g1', 1), ('g1', -1), ('beta', 1)); '' or 'e' is empty."""
    word = []
    for tok in text.replace(",", " ").split():
        if tok in ("e", "1", "id"):
            continue
        lbl, _, exp = tok.partition("^")
        try:
            k = int(exp) if exp else 1
        except ValueError as exc:
            raise InvalidElement(f"bad exponent in {tok!r}") from exc
        word.extend([(lbl, 1 if k > 0 else -1)] * abs(k))
    return tuple(word)


def word_text(word) -> str:
    return " ".join(lbl if e == 1 else f"{lbl}^-1" for lbl, e in word) or "e"


def invert_word(word):
    return tuple((lbl, -e) for lbl, e in reversed(word))
