"""Augmented metric graphs with exact rational edge lengths.

A graph is an immutable value: an ordered vertex list (each vertex carries
a genus), finite edges with positive rational lengths, and leaf edges, the
infinite rays toward punctures.  Construction never fails on bad data;
:func:`validate_graph` reports problems instead.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property

from .errors import InvalidInput


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidInput("lengths must be exact rationals, not floats")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError):
        raise InvalidInput(f"cannot parse rational {value!r}") from None


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    def __post_init__(self):
        object.__setattr__(self, "length", as_fraction(self.length))

    def other(self, v: str) -> str:
        return self.head if v == self.tail else self.tail


@dataclass(frozen=True)
class Leaf:
    """Infinite ray anchored at ``at``; its id doubles as the puncture label."""

    id: str
    at: str


@dataclass(frozen=True)
class Violation:
    code: str
    where: str = ""
    detail: str = ""

    def __str__(self):
        text = self.code
        if self.where:
            text += f" at {self.where}"
        if self.detail:
            text += f": {self.detail}"
        return text


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def merged(self, other: ValidationReport) -> ValidationReport:
        return ValidationReport(self.violations + other.violations, self.warnings + other.warnings)

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


@dataclass(frozen=True)
class AugmentedMetricGraph:
    vertices: tuple[Vertex, ...] = ()
    edges: tuple[Edge, ...] = ()
    leaves: tuple[Leaf, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "leaves", tuple(self.leaves))

    @classmethod
    def build(cls, vertices, edges=(), leaves=()) -> AugmentedMetricGraph:
        """Shorthand constructor.

        ``vertices`` holds ids or ``(id, genus)`` pairs; ``edges`` holds
        ``(id, tail, head, length)`` tuples; ``leaves`` holds ``(id, at)``.
        """
        vs = [Vertex(v) if isinstance(v, str) else Vertex(*v) for v in vertices]
        es = [Edge(*e) for e in edges]
        ls = [Leaf(*l) for l in leaves]
        return cls(tuple(vs), tuple(es), tuple(ls))

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def _vertex_index(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _leaf_index(self) -> dict[str, Leaf]:
        return {l.id: l for l in self.leaves}

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_index

    def vertex(self, v: str) -> Vertex:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise InvalidInput(f"unknown vertex {v!r}") from None

    def genus(self, v: str) -> int:
        return self.vertex(v).genus

    def edge(self, e: str) -> Edge:
        try:
            return self._edge_index[e]
        except KeyError:
            raise InvalidInput(f"unknown edge {e!r}") from None

    def leaf(self, l: str) -> Leaf:
        try:
            return self._leaf_index[l]
        except KeyError:
            raise InvalidInput(f"unknown leaf {l!r}") from None

    def is_edge(self, e: str) -> bool:
        return e in self._edge_index

    def is_leaf(self, e: str) -> bool:
        return e in self._leaf_index

    @cached_property
    def _incidence(self) -> dict[str, tuple[list[str], list[str]]]:
        inc: dict[str, tuple[list[str], list[str]]] = {v.id: ([], []) for v in self.vertices}
        for e in self.edges:
            for end in {e.tail, e.head}:
                if end in inc:
                    inc[end][0].append(e.id)
        for l in self.leaves:
            if l.at in inc:
                inc[l.at][1].append(l.id)
        return inc

    def incident_edges(self, v: str) -> list[str]:
        return list(self._incidence[v][0])

    def incident_leaves(self, v: str) -> list[str]:
        return list(self._incidence[v][1])

    def half_edges(self, v: str) -> list[str]:
        """Tangent directions at ``v``: incident finite edges, then leaves."""
        fin, lv = self._incidence[v]
        return fin + lv

    def valence(self, v: str) -> int:
        return len(self.half_edges(v))

    @cached_property
    def components(self) -> tuple[tuple[str, ...], ...]:
        """Vertex partition into connected components, ordered by first vertex."""
        seen: set[str] = set()
        out = []
        for v in self.vertex_ids:
            if v in seen:
                continue
            comp = []
            queue = deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for eid in self.incident_edges(x):
                    y = self._edge_index[eid].other(x)
                    if y in self._vertex_index and y not in seen:
                        seen.add(y)
                        queue.append(y)
            order = {u: i for i, u in enumerate(self.vertex_ids)}
            out.append(tuple(sorted(comp, key=order.__getitem__)))
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def induced(self, vertex_ids, edge_ids=None, leaf_ids=None) -> AugmentedMetricGraph:
        """Subgraph on ``vertex_ids``; by default keeps every edge and leaf inside it."""
        keep = set(vertex_ids)
        if edge_ids is None:
            es = [e for e in self.edges if e.tail in keep and e.head in keep]
        else:
            wanted = set(edge_ids)
            es = [e for e in self.edges if e.id in wanted]
        if leaf_ids is None:
            ls = [l for l in self.leaves if l.at in keep]
        else:
            wanted = set(leaf_ids)
            ls = [l for l in self.leaves if l.id in wanted]
        vs = [v for v in self.vertices if v.id in keep]
        return AugmentedMetricGraph(tuple(vs), tuple(es), tuple(ls))


def validate_graph(g: AugmentedMetricGraph) -> ValidationReport:
    violations = []
    warnings = []
    ids: set[str] = set()
    for v in g.vertices:
        if v.id in ids:
            violations.append(Violation("duplicate id", v.id))
        ids.add(v.id)
        if not isinstance(v.genus, int) or v.genus < 0:
            violations.append(Violation("negative genus", v.id, str(v.genus)))
    edge_ids: set[str] = set()
    for e in list(g.edges) + list(g.leaves):
        if e.id in edge_ids or e.id in ids:
            violations.append(Violation("duplicate id", e.id))
        edge_ids.add(e.id)
    for e in g.edges:
        for end in (e.tail, e.head):
            if not g.has_vertex(end):
                violations.append(Violation("dangling edge reference", e.id, f"unknown vertex {end!r}"))
        if e.tail == e.head:
            violations.append(Violation("loop edge", e.id))
        if e.length <= 0:
            violations.append(Violation("non-positive length", e.id, str(e.length)))
    for l in g.leaves:
        if not g.has_vertex(l.at):
            violations.append(Violation("dangling edge reference", l.id, f"unknown vertex {l.at!r}"))
    if not violations:
        for v in g.vertices:
            if v.genus == 0 and g.valence(v.id) == 2:
                warnings.append(f"non-essential vertex {v.id}")
    return ValidationReport(tuple(violations), tuple(warnings))


def require_valid(g: AugmentedMetricGraph) -> None:
    report = validate_graph(g)
    if not report.ok:
        raise InvalidInput("invalid graph: " + "; ".join(map(str, report)))


def connected_components(g: AugmentedMetricGraph) -> list[AugmentedMetricGraph]:
    return [g.induced(comp) for comp in g.components]


def betti_numbers(g: AugmentedMetricGraph) -> list[int]:
    """First Betti number of each component; leaves do not count."""
    out = []
    for comp in g.components:
        inside = set(comp)
        ne = sum(1 for e in g.edges if e.tail in inside)
        out.append(ne - len(comp) + 1)
    return out


def first_betti(g: AugmentedMetricGraph) -> int:
    return sum(betti_numbers(g))


def total_genus(g: AugmentedMetricGraph) -> int:
    if len(g.components) != 1:
        raise InvalidInput("total genus needs a connected graph; use per-component values")
    return first_betti(g) + sum(v.genus for v in g.vertices)


def subdivide(g: AugmentedMetricGraph, edge_id: str, pos, new_vertex: str | None = None,
              names: tuple[str, str] | None = None) -> AugmentedMetricGraph:
    """Insert a genus-0 vertex on ``edge_id`` at distance ``pos`` from its tail.

    The two halves keep the edge's orientation and are named ``<id>a`` (tail
    side) and ``<id>b`` unless ``names`` is given.
    """
    e = g.edge(edge_id)
    pos = as_fraction(pos)
    if not 0 < pos < e.length:
        raise InvalidInput(f"subdivision point {pos} not interior to {edge_id} (length {e.length})")
    vid = new_vertex or f"{edge_id}@{pos}"
    if g.has_vertex(vid):
        raise InvalidInput(f"vertex {vid!r} already exists")
    a, b = names or (f"{edge_id}a", f"{edge_id}b")
    first = Edge(a, e.tail, vid, pos)
    second = Edge(b, vid, e.head, e.length - pos)
    edges = []
    for x in g.edges:
        edges.extend([first, second] if x.id == edge_id else [x])
    return replace(g, vertices=g.vertices + (Vertex(vid, 0),), edges=tuple(edges))


@dataclass(frozen=True)
class SpanningTree:
    """BFS spanning tree of a connected graph rooted at its first vertex."""

    root: str
    tree_edges: tuple[str, ...]
    cotree_edges: tuple[str, ...]
    parent: dict[str, tuple[str, str]] = field(compare=False)  # v -> (edge, parent vertex)


def spanning_tree(g: AugmentedMetricGraph, tree_edges=None) -> SpanningTree:
    """Deterministic spanning tree; an explicit edge set is checked and used instead."""
    if not g.vertices:
        raise InvalidInput("empty graph has no spanning tree")
    if len(g.components) != 1:
        raise InvalidInput("spanning tree needs a connected graph")
    root = g.vertex_ids[0]
    allowed = None if tree_edges is None else set(tree_edges)
    parent: dict[str, tuple[str, str]] = {}
    seen = {root}
    used = []
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for eid in g.incident_edges(x):
            if allowed is not None and eid not in allowed:
                continue
            y = g.edge(eid).other(x)
            if y not in seen:
                seen.add(y)
                parent[y] = (eid, x)
                used.append(eid)
                queue.append(y)
    if allowed is not None and (len(seen) != len(g.vertices) or set(used) != allowed):
        raise InvalidInput("given edges do not form a spanning tree")
    used_set = set(used)
    ordered = tuple(e.id for e in g.edges if e.id in used_set)
    cotree = tuple(e.id for e in g.edges if e.id not in used_set)
    return SpanningTree(root, ordered, cotree, parent)


def tree_path(tree: SpanningTree, g: AugmentedMetricGraph, v: str) -> list[tuple[str, int]]:
    """Signed edge path from the root to ``v``: (edge, +1 if traversed tail→head)."""
    path = []
    x = v
    while x != tree.root:
        eid, p = tree.parent[x]
        e = g.edge(eid)
        path.append((eid, 1 if e.tail == p else -1))
        x = p
    path.reverse()
    return path
