"""Directed acyclic sum-networks: constructors, composition, and file formats."""

from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Union

SOURCE, RELAY, TERMINAL = "source", "relay", "terminal"
ROLES = (SOURCE, RELAY, TERMINAL)

MAX_LEAF_PARAM = 256


class NetworkError(ValueError):
    """Structurally invalid network or network file."""


@dataclass(frozen=True)
class Network:
    """A labelled DAG with declared source and terminal nodes.

    ``edges`` is ordered; an edge's position is its index in code and
    verdict files.
    """

    name: str
    nodes: tuple[tuple[str, str], ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple((str(n), str(r)) for n, r in self.nodes))
        object.__setattr__(self, "edges", tuple((str(a), str(b)) for a, b in self.edges))
        self._validate()

    def _validate(self):
        roles = {}
        for node, role in self.nodes:
            if role not in ROLES:
                raise NetworkError(f"node {node!r} has unknown role {role!r}")
            if node in roles:
                raise NetworkError(f"duplicate node id {node!r}")
            roles[node] = role
        seen = set()
        for tail, head in self.edges:
            for end in (tail, head):
                if end not in roles:
                    raise NetworkError(f"edge ({tail}, {head}) references unknown node {end!r}")
            if tail == head:
                raise NetworkError(f"self-loop at {tail!r}")
            if (tail, head) in seen:
                raise NetworkError(f"duplicate edge ({tail}, {head})")
            seen.add((tail, head))
            if roles[head] == SOURCE:
                raise NetworkError(f"source {head!r} has an incoming edge")
            if roles[tail] == TERMINAL:
                raise NetworkError(f"terminal {tail!r} has an outgoing edge")
        if len(self.topo_order()) != len(self.nodes):
            raise NetworkError("network contains a cycle")

    @cached_property
    def role(self) -> dict[str, str]:
        return dict(self.nodes)

    @cached_property
    def sources(self) -> tuple[str, ...]:
        return tuple(n for n, r in self.nodes if r == SOURCE)

    @cached_property
    def terminals(self) -> tuple[str, ...]:
        return tuple(n for n, r in self.nodes if r == TERMINAL)

    @cached_property
    def in_edges(self) -> dict[str, tuple[int, ...]]:
        """Incoming edge indices per node, in edge-list order."""
        acc: dict[str, list[int]] = {n: [] for n, _ in self.nodes}
        for i, (_, head) in enumerate(self.edges):
            acc[head].append(i)
        return {n: tuple(v) for n, v in acc.items()}

    @cached_property
    def out_edges(self) -> dict[str, tuple[int, ...]]:
        acc: dict[str, list[int]] = {n: [] for n, _ in self.nodes}
        for i, (tail, _) in enumerate(self.edges):
            acc[tail].append(i)
        return {n: tuple(v) for n, v in acc.items()}

    def topo_order(self) -> list[str]:
        """Kahn's algorithm, ties broken by position in the node list."""
        indeg = {n: 0 for n, _ in self.nodes}
        succ: dict[str, list[str]] = {n: [] for n, _ in self.nodes}
        for tail, head in self.edges:
            if tail in succ and head in indeg:
                succ[tail].append(head)
                indeg[head] += 1
        pos = {n: i for i, (n, _) in enumerate(self.nodes)}
        heap = [(pos[n], n) for n, d in indeg.items() if d == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            _, n = heapq.heappop(heap)
            order.append(n)
            for h in succ[n]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(heap, (pos[h], h))
        return order

    @cached_property
    def edge_topo_order(self) -> tuple[int, ...]:
        """Edge indices such that every edge follows the edges entering its tail."""
        pos = {n: i for i, n in enumerate(self.topo_order())}
        return tuple(sorted(range(len(self.edges)), key=lambda i: (pos[self.edges[i][0]], i)))

    def reachable_from(self, node: str) -> set[str]:
        seen = {node}
        stack = [node]
        while stack:
            n = stack.pop()
            for i in self.out_edges[n]:
                h = self.edges[i][1]
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen


def topo_order(net: Network) -> list[str]:
    return net.topo_order()


def all_pairs_connected(net: Network) -> bool:
    """True iff every source has a directed path to every terminal."""
    terminals = set(net.terminals)
    return all(terminals <= net.reachable_from(s) for s in net.sources)


# -- constructors -----------------------------------------------------------


def build_s_network(m: int) -> Network:
    """The four-layer network S_m: m sources, m-1 relay chains, m terminals."""
    if m < 2:
        raise ValueError(f"S_m needs m >= 2, got {m}")
    r = range(1, m)
    nodes = (
        [(f"s{i}", SOURCE) for i in range(1, m + 1)]
        + [(f"u{i}", RELAY) for i in r]
        + [(f"v{i}", RELAY) for i in r]
        + [(f"t{i}", TERMINAL) for i in range(1, m + 1)]
    )
    edges = []
    for i in r:
        edges += [(f"s{i}", f"u{i}"), (f"u{i}", f"v{i}"), (f"v{i}", f"t{i}")]
    edges += [(f"s{i}", f"t{j}") for i in r for j in r if i != j]
    edges += [(f"s{m}", f"u{i}") for i in r]
    edges += [(f"v{i}", f"t{m}") for i in r]
    return Network(f"S({m})", tuple(nodes), tuple(edges))


def build_complete_bipartite(m: int, n: int) -> Network:
    """K_{m,n} with every edge directed source -> terminal."""
    if m < 1 or n < 1:
        raise ValueError(f"K_(m,n) needs m, n >= 1, got {m}, {n}")
    nodes = [(f"s{i}", SOURCE) for i in range(1, m + 1)] + [(f"t{j}", TERMINAL) for j in range(1, n + 1)]
    edges = [(f"s{i}", f"t{j}") for i in range(1, m + 1) for j in range(1, n + 1)]
    return Network(f"K({m},{n})", tuple(nodes), tuple(edges))


def crisscross(a: Network, b: Network, name: str | None = None) -> Network:
    """Join two networks and add every cross source -> terminal edge.

    Node ids are prefixed with ``L.`` and ``R.`` so the node sets are always
    disjoint.
    """
    left = {n: f"L.{n}" for n, _ in a.nodes}
    right = {n: f"R.{n}" for n, _ in b.nodes}
    nodes = [(left[n], r) for n, r in a.nodes] + [(right[n], r) for n, r in b.nodes]
    edges = [(left[x], left[y]) for x, y in a.edges]
    edges += [(right[x], right[y]) for x, y in b.edges]
    edges += [(left[s], right[t]) for s in a.sources for t in b.terminals]
    edges += [(right[s], left[t]) for s in b.sources for t in a.terminals]
    return Network(name or f"X({a.name},{b.name})", tuple(nodes), tuple(edges))


# -- construction expressions ------------------------------------------------


@dataclass(frozen=True)
class SLeaf:
    m: int

    def __str__(self):
        return f"S({self.m})"


@dataclass(frozen=True)
class KLeaf:
    m: int
    n: int

    def __str__(self):
        return f"K({self.m},{self.n})"


@dataclass(frozen=True)
class Crisscross:
    left: "NetSpec"
    right: "NetSpec"

    def __str__(self):
        return f"X({self.left},{self.right})"


NetSpec = Union[SLeaf, KLeaf, Crisscross]

_TOKEN = re.compile(r"\s*(?:(\d+)|([SKX])|([(),]))")


class NetSpecSyntaxError(ValueError):
    pass


def parse_netspec(text: str, *, max_param: int = MAX_LEAF_PARAM) -> NetSpec:
    """Parse ``S(m)``, ``K(m,n)`` and ``X(a,b)`` expressions."""
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        mt = _TOKEN.match(stripped, pos)
        if not mt:
            raise NetSpecSyntaxError(f"unexpected character at {pos} in {text!r}")
        tokens.append(mt.group(1) or mt.group(2) or mt.group(3))
        pos = mt.end()
    it = iter(tokens + [None])
    look = [next(it)]

    def take(expected=None):
        tok = look[0]
        if expected is not None and tok != expected:
            raise NetSpecSyntaxError(f"expected {expected!r}, got {tok!r} in {text!r}")
        look[0] = next(it, None)
        return tok

    def integer():
        tok = take()
        if tok is None or not tok.isdigit():
            raise NetSpecSyntaxError(f"expected integer, got {tok!r} in {text!r}")
        return int(tok)

    def expr():
        head = take()
        take("(")
        if head == "S":
            m = integer()
            node = SLeaf(m)
        elif head == "K":
            m = integer()
            take(",")
            node = KLeaf(m, integer())
        elif head == "X":
            left = expr()
            take(",")
            node = Crisscross(left, expr())
        else:
            raise NetSpecSyntaxError(f"unknown constructor {head!r} in {text!r}")
        take(")")
        return node

    spec = expr()
    if look[0] is not None:
        raise NetSpecSyntaxError(f"trailing input {look[0]!r} in {text!r}")
    check_netspec(spec, max_param=max_param)
    return spec


def check_netspec(spec: NetSpec, *, max_param: int = MAX_LEAF_PARAM) -> None:
    if isinstance(spec, SLeaf):
        if not 2 <= spec.m <= max_param:
            raise ValueError(f"S(m) needs 2 <= m <= {max_param}, got {spec.m}")
    elif isinstance(spec, KLeaf):
        if not (1 <= spec.m <= max_param and 1 <= spec.n <= max_param):
            raise ValueError(f"K(m,n) needs 1 <= m, n <= {max_param}, got {spec.m}, {spec.n}")
    elif isinstance(spec, Crisscross):
        check_netspec(spec.left, max_param=max_param)
        check_netspec(spec.right, max_param=max_param)
    else:
        raise TypeError(f"not a network expression: {spec!r}")


def realize(spec: NetSpec | str) -> Network:
    if isinstance(spec, str):
        spec = parse_netspec(spec)
    else:
        check_netspec(spec)
    if isinstance(spec, SLeaf):
        return build_s_network(spec.m)
    if isinstance(spec, KLeaf):
        return build_complete_bipartite(spec.m, spec.n)
    return crisscross(realize(spec.left), realize(spec.right), name=str(spec))


# -- serialization ------------------------------------------------------------


def to_dict(net: Network) -> dict:
    return {
        "name": net.name,
        "nodes": [{"id": n, "role": r} for n, r in net.nodes],
        "edges": [[t, h] for t, h in net.edges],
    }


def serialize(net: Network) -> str:
    return json.dumps(to_dict(net), indent=2) + "\n"


def from_dict(doc: dict) -> Network:
    try:
        nodes = tuple((d["id"], d["role"]) for d in doc["nodes"])
        edges = []
        for e in doc["edges"]:
            if len(e) != 2:
                raise NetworkError(f"edge {e!r} must be a [tail, head] pair")
            edges.append((e[0], e[1]))
        return Network(str(doc.get("name", "")), nodes, tuple(edges))
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network document: {exc}") from exc


def deserialize(text: str) -> Network:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"network file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkError("network document must be a JSON object")
    return from_dict(doc)


def _layers(net: Network) -> dict[str, int]:
    depth = {}
    for n in net.topo_order():
        ins = net.in_edges[n]
        depth[n] = 1 + max((depth[net.edges[i][0]] for i in ins), default=-1)
    return depth


def export_dot(net: Network) -> str:
    """Graphviz description with one rank per longest-path layer."""
    shapes = {SOURCE: "box", RELAY: "circle", TERMINAL: "doublecircle"}
    lines = [f"digraph {json.dumps(net.name)} {{", "  rankdir=TB;"]
    for n, r in net.nodes:
        lines.append(f"  {json.dumps(n)} [shape={shapes[r]}];")
    depth = _layers(net)
    by_layer: dict[int, list[str]] = {}
    for n, _ in net.nodes:
        by_layer.setdefault(depth[n], []).append(n)
    for d in sorted(by_layer):
        members = " ".join(json.dumps(n) + ";" for n in by_layer[d])
        lines.append(f"  {{ rank=same; {members} }}")
    for t, h in net.edges:
        lines.append(f"  {json.dumps(t)} -> {json.dumps(h)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
