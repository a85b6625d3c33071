"""Chordal graphs, clique orderings, and junction trees.

Vertices are the consecutive integers ``1..n``.  All routines are
deterministic: maximum-cardinality search breaks weight ties by smallest
vertex label, maximal cliques are emitted in the order their earliest
vertex is visited, and the parent of a clique is the earliest previous
clique that contains its separator.  Re-running any function on the same
graph therefore yields identical orderings, which the sampling and CLI
layers rely on for reproducibility.

The chordality test is maximum-cardinality search followed by the
perfect-elimination check; on failure a chordless cycle of length >= 4
is constructed and attached to the :class:`~tailgraph.errors.NotChordal`
exception as a witness.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ConfigError, EmptySubset, NotChordal, NotConnected


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``1..n``.

    Parameters
    ----------
    n : int
        Number of vertices (at least 1).
    edges : frozenset of 2-element frozensets
        Edge set; use :meth:`make` or :meth:`from_dict` rather than
        constructing directly.
    """

    n: int
    edges: frozenset
    _adj: dict = field(compare=False, repr=False, default_factory=dict)

    @staticmethod
    def make(n: int, edge_list) -> "Graph":
        if not isinstance(n, int) or n < 1:
            raise ConfigError(f"vertex count must be an integer >= 1, got {n!r}")
        edges = set()
        for e in edge_list:
            pair = tuple(e)
            if len(pair) != 2:
                raise ConfigError(f"edge {e!r} is not a pair")
            i, j = pair
            if not (isinstance(i, int) and isinstance(j, int)):
                raise ConfigError(f"edge {e!r} has non-integer endpoints")
            if i == j:
                raise ConfigError(f"self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise ConfigError(f"edge {e!r} leaves the vertex range 1..{n}")
            edges.add(frozenset((i, j)))
        g = Graph(n=n, edges=frozenset(edges))
        g._build_adj()
        return g

    def _build_adj(self) -> None:
        adj = {v: set() for v in range(1, self.n + 1)}
        for e in self.edges:
            i, j = sorted(e)
            adj[i].add(j)
            adj[j].add(i)
        self._adj.update(adj)

    # -- basic queries ---------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def neighbors(self, v: int) -> set[int]:
        if not self._adj:
            self._build_adj()
        return self._adj[v]

    def has_edge(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self.edges

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def is_clique(self, vs) -> bool:
        vs = list(vs)
        return all(
            self.has_edge(a, b) for k, a in enumerate(vs) for b in vs[k + 1 :]
        )

    def is_connected(self) -> bool:
        seen = {1}
        queue = deque([1])
        while queue:
            u = queue.popleft()
            for w in self.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    # -- serialization ---------------------------------------------------

    @staticmethod
    def from_dict(doc: dict) -> "Graph":
        if not isinstance(doc, dict):
            raise ConfigError("graph document must be an object")
        unknown = set(doc) - {"vertices", "edges"}
        if unknown:
            raise ConfigError(f"unknown graph fields: {sorted(unknown)}")
        if "vertices" not in doc or "edges" not in doc:
            raise ConfigError("graph document needs 'vertices' and 'edges'")
        verts = doc["vertices"]
        if isinstance(verts, int):
            n = verts
        elif isinstance(verts, list):
            if verts != list(range(1, len(verts) + 1)):
                raise ConfigError("vertex list must be consecutive 1..n")
            n = len(verts)
        else:
            raise ConfigError("'vertices' must be a count or a 1..n list")
        return Graph.make(n, doc["edges"])

    def to_dict(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edge_list()]}


def _mcs_order(graph: Graph, start: int) -> list[int]:
    """Maximum-cardinality search visit order, ties to the smallest label."""
    weights = {v: 0 for v in graph.vertices}
    weights[start] = graph.n  # force the requested start vertex first
    order: list[int] = []
    visited: set[int] = set()
    for _ in range(graph.n):
        u = min((v for v in weights if v not in visited), key=lambda v: (-weights[v], v))
        order.append(u)
        visited.add(u)
        for w in graph.neighbors(u):
            if w not in visited:
                weights[w] += 1
    return order


def _find_chordless_cycle(graph: Graph) -> tuple[int, ...]:
    """Return some chordless cycle of length >= 4.

    For every path x - u - y with x, y non-adjacent, a shortest x-y path
    avoiding the rest of u's closed neighborhood closes a chordless
    cycle through u.  A non-chordal graph always contains such a triple
    (take three consecutive vertices of any chordless cycle).
    """
    for u in graph.vertices:
        nbrs = sorted(graph.neighbors(u))
        for a, x in enumerate(nbrs):
            for y in nbrs[a + 1 :]:
                if graph.has_edge(x, y):
                    continue
                banned = (graph.neighbors(u) | {u}) - {x, y}
                # BFS for the shortest x-y path outside `banned`
                prev = {x: None}
                queue = deque([x])
                while queue:
                    c = queue.popleft()
                    if c == y:
                        break
                    for w in sorted(graph.neighbors(c)):
                        if w not in prev and w not in banned:
                            prev[w] = c
                            queue.append(w)
                if y not in prev:
                    continue
                path = [y]
                while path[-1] is not None:
                    path.append(prev[path[-1]])
                path.pop()  # drop the sentinel
                path.reverse()  # x .. y
                return tuple([u] + path)
    raise AssertionError("no chordless cycle found in a non-chordal graph")


def validate_chordal(graph: Graph) -> tuple[int, ...]:
    """Check connectivity and chordality; return a perfect elimination ordering.

    The ordering is the reverse of the maximum-cardinality search visit
    order started at vertex 1.  Raises :class:`NotConnected` or
    :class:`NotChordal` (with a chordless-cycle witness) otherwise.
    """
    if not graph.is_connected():
        raise NotConnected(f"graph on {graph.n} vertices is not connected")
    order = _mcs_order(graph, start=1)
    rank = {v: k for k, v in enumerate(order)}
    for u in order:
        earlier = [w for w in graph.neighbors(u) if rank[w] < rank[u]]
        if not graph.is_clique(earlier):
            raise NotChordal(_find_chordless_cycle(graph))
    return tuple(reversed(order))


@dataclass(frozen=True)
class CliqueOrdering:
    """Maximal cliques in an order satisfying the running-intersection property.

    ``separators[i]`` is ``cliques[i]`` intersected with the union of all
    earlier cliques (empty for the first), and ``parents[i]`` is the index
    of the earliest previous clique containing that separator.  Cliques
    and separators are stored as sorted vertex tuples.
    """

    graph: Graph
    root: int
    cliques: tuple[tuple[int, ...], ...]
    separators: tuple[tuple[int, ...], ...]
    parents: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cliques)

    def residuals(self) -> tuple[tuple[int, ...], ...]:
        """Per-clique new vertices C_i minus S_i."""
        return tuple(
            tuple(v for v in c if v not in set(s))
            for c, s in zip(self.cliques, self.separators)
        )

    def to_dict(self) -> dict:
        return {
            "root": self.root,
            "cliques": [list(c) for c in self.cliques],
            "separators": [list(s) for s in self.separators],
            "parents": list(self.parents),
        }


def clique_ordering(graph: Graph, root_vertex: int) -> CliqueOrdering:
    """Order the maximal cliques so the first contains ``root_vertex``.

    Runs maximum-cardinality search from ``root_vertex`` and emits each
    maximal clique when its earliest vertex is visited; for a chordal
    graph this order satisfies the running-intersection property, which
    is re-verified here defensively.
    """
    if not (1 <= root_vertex <= graph.n):
        raise ConfigError(f"root vertex {root_vertex} outside 1..{graph.n}")
    if not graph.is_connected():
        raise NotConnected(f"graph on {graph.n} vertices is not connected")
    order = _mcs_order(graph, start=root_vertex)
    rank = {v: k for k, v in enumerate(order)}
    candidates: list[tuple[int, ...]] = []
    for u in order:
        earlier = [w for w in graph.neighbors(u) if rank[w] < rank[u]]
        if not graph.is_clique(earlier):
            raise NotChordal(_find_chordless_cycle(graph))
        candidates.append(tuple(sorted(earlier + [u])))
    # keep candidates that are not contained in any other candidate
    cliques: list[tuple[int, ...]] = []
    for cand in candidates:
        cs = set(cand)
        if any(cs < set(other) for other in candidates):
            continue
        if cand not in cliques:
            cliques.append(cand)

    separators: list[tuple[int, ...]] = [()]
    parents: list[int] = [-1]
    seen = set(cliques[0])
    for i, c in enumerate(cliques[1:], start=1):
        sep = tuple(v for v in c if v in seen)
        parent = next(
            (k for k in range(i) if set(sep) <= set(cliques[k])),
            None,
        )
        if parent is None:
            raise NotChordal(_find_chordless_cycle(graph))
        separators.append(sep)
        parents.append(parent)
        seen |= set(c)
    if root_vertex not in cliques[0]:
        raise AssertionError("ordering lost the requested root vertex")
    return CliqueOrdering(
        graph=graph,
        root=root_vertex,
        cliques=tuple(cliques),
        separators=tuple(separators),
        parents=tuple(parents),
    )


@dataclass(frozen=True)
class JunctionTree:
    """Tree over clique indices with separator-labelled edges."""

    ordering: CliqueOrdering
    edges: tuple[tuple[int, int, tuple[int, ...]], ...]  # (child, parent, separator)

    @property
    def cliques(self) -> tuple[tuple[int, ...], ...]:
        return self.ordering.cliques

    def neighbors_of(self, i: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def tree_path(self, i: int, j: int) -> list[int]:
        """Clique indices on the unique path from i to j, inclusive."""
        prev = {i: None}
        queue = deque([i])
        while queue:
            c = queue.popleft()
            if c == j:
                break
            for w in self.neighbors_of(c):
                if w not in prev:
                    prev[w] = c
                    queue.append(w)
        path = [j]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        return path

    def check_path_intersection(self) -> bool:
        """Every pairwise clique intersection is contained in every clique
        on the tree path between the pair."""
        cl = self.cliques
        for i in range(len(cl)):
            for j in range(i + 1, len(cl)):
                inter = set(cl[i]) & set(cl[j])
                if not inter:
                    continue
                for k in self.tree_path(i, j):
                    if not inter <= set(cl[k]):
                        return False
        return True

    def to_dict(self) -> dict:
        return {
            "cliques": [list(c) for c in self.cliques],
            "edges": [
                {"child": a, "parent": b, "separator": list(s)}
                for a, b, s in self.edges
            ],
        }


def junction_tree(ordering: CliqueOrdering) -> JunctionTree:
    """Junction tree induced by an ordering's parent pointers."""
    edges = tuple(
        (i, ordering.parents[i], ordering.separators[i])
        for i in range(1, len(ordering))
    )
    return JunctionTree(ordering=ordering, edges=edges)


def is_block_graph(graph: Graph) -> bool:
    """True when every separator of the clique ordering is a single vertex
    (for a connected chordal graph this does not depend on the root)."""
    ordering = clique_ordering(graph, root_vertex=1)
    return all(len(s) == 1 for s in ordering.separators[1:])


def vertex_subset(graph: Graph, subset) -> tuple[int, ...]:
    """Validate and sort a nonempty vertex subset."""
    vs = sorted(set(subset))
    if not vs:
        raise EmptySubset("empty vertex subset")
    for v in vs:
        if not (1 <= v <= graph.n):
            raise ConfigError(f"vertex {v} outside 1..{graph.n}")
    return tuple(vs)


def goldner_harary() -> Graph:
    """The Goldner–Harary graph: a planar 3-tree on 11 vertices, 27 edges.

    Built as a triangular bipyramid (equator 1,2,3 with apexes 4 and 5)
    with one extra degree-3 vertex stacked on each of its six faces.  It
    is chordal with eight maximal cliques, all of size four; vertex 2
    lies in six of the eight.
    """
    equator = [(1, 2), (2, 3), (1, 3)]
    apex = [(a, b) for a in (4, 5) for b in (1, 2, 3)]
    faces = [
        (6, (1, 2, 4)),
        (7, (2, 3, 4)),
        (8, (1, 3, 4)),
        (9, (1, 2, 5)),
        (10, (2, 3, 5)),
        (11, (1, 3, 5)),
    ]
    stacked = [(u, w) for u, face in faces for w in face]
    return Graph.make(11, equator + apex + stacked)
