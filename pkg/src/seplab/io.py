"""Graph serialization.

Two interchange formats plus a DOT export:

  * JSON: {"n": <int>, "edges": [[u, v], ...]}
  * edge list: first line "n <count>", then one "u v" pair per line

Both writers emit the canonical form (edges as u < v pairs, lexicographically
sorted, newline-terminated) so save(load(text)) is byte-identical on
canonical input.
"""

from __future__ import annotations

import json

from .errors import InputError
from .graph import Graph


def to_json(g: Graph) -> str:
    edges = g.edge_list().tolist()
    return json.dumps({"n": g.n, "edges": edges}, separators=(",", ":")) + "\n"


def from_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid graph JSON: {e}") from e
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise InputError('graph JSON must be {"n": int, "edges": [[u,v],...]}')
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise InputError("graph JSON: n must be a non-negative integer")
    return Graph.from_edges(n, obj["edges"])


def to_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    for u, v in g.edge_list():
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    tokens = text.split()
    if len(tokens) < 2:
        raise InputError("edge list must start with 'n m'")
    try:
        vals = [int(t) for t in tokens]
    except ValueError as e:
        raise InputError(f"edge list contains a non-integer token: {e}") from e
    n, m = vals[0], vals[1]
    body = vals[2:]
    if len(body) != 2 * m:
        raise InputError(f"edge list declares {m} edges but carries {len(body) // 2}")
    edges = [(body[2 * i], body[2 * i + 1]) for i in range(m)]
    return Graph.from_edges(n, edges)


def to_dot(g: Graph, name: str = "g") -> str:
    lines = [f"graph {name} {{"]
    for v in range(g.n):
        if g.degree(v) == 0:
            lines.append(f"  {v};")
    for u, v in g.edge_list():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_graph(g: Graph, path, fmt: str = "json") -> None:
    if fmt == "json":
        text = to_json(g)
    elif fmt == "edgelist":
        text = to_edge_list(g)
    elif fmt == "dot":
        text = to_dot(g)
    else:
        raise InputError(f"unknown graph format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)


def load_graph(path, fmt: str | None = None) -> Graph:
    with open(path) as fh:
        text = fh.read()
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "edgelist"
    if fmt == "json":
        return from_json(text)
    if fmt == "edgelist":
        return from_edge_list(text)
    raise InputError(f"unknown graph format {fmt!r}")
