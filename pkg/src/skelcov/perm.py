"""Permutations of {0, ..., n-1} and small permutation-group machinery.

Permutations are plain tuples in one-line form: ``p[i]`` is the image of
``i``.  Products follow function composition, ``compose(p, q)`` applies
``q`` first.  All user-facing notation (cycle strings, one-line lists) is
1-based; the internal representation is 0-based.
"""

from __future__ import annotations

import re
from collections import deque
from collections.abc import Iterable, Sequence

from .errors import InvalidInput, ResourceBoundExceeded

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


def check_perm(p: Sequence[int]) -> Perm:
    p = tuple(p)
    if sorted(p) != list(range(len(p))):
        raise InvalidInput(f"not a permutation: {p}")
    return p


def compose(p: Perm, q: Perm) -> Perm:
    """Return p∘q (apply q, then p)."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def conjugate(p: Perm, c: Perm) -> Perm:
    """Return c∘p∘c⁻¹, the relabelling of p along c."""
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[c[i]] = c[x]
    return tuple(out)


def power(p: Perm, k: int) -> Perm:
    result = identity(len(p))
    base = p if k >= 0 else inverse(p)
    for _ in range(abs(k)):
        result = compose(base, result)
    return result


def cycles(p: Perm) -> list[list[int]]:
    """Cycle decomposition including fixed points, each cycle led by its minimum."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(cyc)
    return out


def cycle_type(p: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def format_cycles(p: Perm) -> str:
    parts = ["(" + " ".join(str(x + 1) for x in c) + ")" for c in cycles(p) if len(c) > 1]
    return "".join(parts) or "()"


def to_oneline(p: Perm) -> list[int]:
    return [x + 1 for x in p]


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(value, n: int | None = None) -> Perm:
    """Parse cycle notation or 1-based one-line notation.

    Accepted forms: ``"(1 2)(3 4)"``, ``"()"``, ``[2, 1, 3]`` (one-line) and
    ``[[1, 2], [3, 4]]`` (cycles).  ``n`` pads cycle notation to a degree.
    """
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("["):
            import json

            return parse_perm(json.loads(text), n)
        if text in ("", "e", "id", "()"):
            cyc: list[list[int]] = []
        else:
            if _CYCLE_RE.sub("", text).strip():
                raise InvalidInput(f"cannot parse permutation {value!r}")
            cyc = []
            for body in _CYCLE_RE.findall(text):
                items = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
                try:
                    cyc.append([int(tok) for tok in items])
                except ValueError:
                    raise InvalidInput(f"cannot parse permutation {value!r}") from None
        return _from_cycles(cyc, n)
    if isinstance(value, (list, tuple)):
        if all(isinstance(x, int) for x in value):
            p = tuple(x - 1 for x in value)
            p = check_perm(p)
            if n is not None and len(p) != n:
                raise InvalidInput(f"permutation {list(value)} has degree {len(p)}, expected {n}")
            return p
        if all(isinstance(c, (list, tuple)) for c in value):
            return _from_cycles([list(c) for c in value], n)
    raise InvalidInput(f"cannot parse permutation {value!r}")


def _from_cycles(cyc: list[list[int]], n: int | None) -> Perm:
    points = [x for c in cyc for x in c]
    if any(x < 1 for x in points) or len(points) != len(set(points)):
        raise InvalidInput(f"invalid cycle notation {cyc}")
    size = max(points, default=0) if n is None else n
    if points and max(points) > size:
        raise InvalidInput(f"cycle entry {max(points)} exceeds degree {size}")
    p = list(range(size))
    for c in cyc:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a - 1] = b - 1
    return tuple(p)


def orbits(gens: Iterable[Perm], n: int) -> list[list[int]]:
    """Orbits of the group generated by ``gens``, sorted by least element."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g):
            a, b = find(i), find(x)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def is_transitive(gens: Iterable[Perm], n: int) -> bool:
    return n <= 1 or len(orbits(gens, n)) == 1


def generate_elements(gens: Sequence[Perm], n: int, limit: int) -> list[Perm]:
    """All elements of ⟨gens⟩ in sorted order; raises past ``limit`` elements."""
    start = identity(n)
    seen = {start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(s, g)
            if h not in seen:
                seen.add(h)
                if len(seen) > limit:
                    raise ResourceBoundExceeded(f"group has more than {limit} elements")
                queue.append(h)
    return sorted(seen)


class StabilizerChain:
    """Base and strong generating set built by the deterministic Schreier-Sims method."""

    def __init__(self, gens: Sequence[Perm], n: int):
        self.n = n
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.transversals: list[dict[int, Perm]] = []
        for g in gens:
            if len(g) != n:
                raise InvalidInput("generators of mixed degree")
        self._build([g for g in gens if not is_identity(g)])

    def _orbit(self, level: int) -> None:
        b = self.base[level]
        trans = {b: identity(self.n)}
        queue = deque([b])
        while queue:
            x = queue.popleft()
            for s in self.strong[level]:
                y = s[x]
                if y not in trans:
                    trans[y] = compose(s, trans[x])
                    queue.append(y)
        self.transversals[level] = trans

    def sift(self, g: Perm, start: int = 0) -> tuple[int, Perm]:
        for level in range(start, len(self.base)):
            u = self.transversals[level].get(g[self.base[level]])
            if u is None:
                return level, g
            g = compose(inverse(u), g)
        return len(self.base), g

    def _add(self, g: Perm, level: int) -> None:
        # g fixes base[:level], so it lies in every stabilizer G^(k) with k <= level
        if level == len(self.base):
            moved = next(i for i, x in enumerate(g) if i != x)
            self.base.append(moved)
            self.strong.append([])
            self.transversals.append({})
        for k in range(level + 1):
            self.strong[k].append(g)
            self._orbit(k)

    def _build(self, gens: list[Perm]) -> None:
        for g in gens:
            level, r = self.sift(g)
            if not is_identity(r):
                self._add(r, level)
        changed = True
        while changed:
            changed = False
            for level in range(len(self.base) - 1, -1, -1):
                trans = self.transversals[level]
                for x, u in list(trans.items()):
                    for s in list(self.strong[level]):
                        h = compose(inverse(trans[s[x]]), compose(s, u))
                        j, r = self.sift(h, level + 1)
                        if not is_identity(r):
                            self._add(r, j)
                            changed = True
                            break
                    if changed:
                        break
                if changed:
                    break

    def order(self) -> int:
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def contains(self, g: Perm) -> bool:
        level, r = self.sift(g)
        return level == len(self.base) and is_identity(r)


def group_order(gens: Sequence[Perm], n: int) -> int:
    return StabilizerChain(list(gens), n).order()


def centralizer_of_transitive(gens: Sequence[Perm], n: int) -> list[Perm]:
    """Centralizer in S_n of a transitive group, found by propagating the image of 0."""
    result = []
    if n == 0:
        return [()]
    for target in range(n):
        c = _equivariant_map(gens, gens, n, 0, target)
        if c is not None and len(set(c)) == n:
            result.append(tuple(c))
    return result


def _equivariant_map(src_gens, dst_gens, n_src, start, target):
    """Map f with f∘s = t∘f for paired generators, fixed by f(start)=target, or None."""
    pairs = [(s, t) for s, t in zip(src_gens, dst_gens)]
    pairs += [(inverse(s), inverse(t)) for s, t in pairs]
    f = [-1] * n_src
    f[start] = target
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for s, t in pairs:
            a, b = s[x], t[f[x]]
            if f[a] == -1:
                f[a] = b
                queue.append(a)
            elif f[a] != b:
                return None
    if -1 in f:
        return None
    return f


def equivariant_map(src_gens: Sequence[Perm], dst_gens: Sequence[Perm], n_src: int,
                    target: int) -> list[int] | None:
    """Covering map between transitive actions sending point 0 to ``target``."""
    return _equivariant_map(list(src_gens), list(dst_gens), n_src, 0, target)


def all_perms(n: int):
    from itertools import permutations

    return permutations(range(n))
