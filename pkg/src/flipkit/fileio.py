"""Text formats for graphs, partitions, specs, weights, and families.

Every writer produces the canonical form its reader round-trips: graph
files start with ``n m`` and list edges ``u v`` with u < v; bipartite files
add a second header line ``U: ...`` naming the left side; partitions are
``v part_id`` lines, flip specs ``i j`` lines, weights ``v weight`` lines,
and set families one whitespace-separated set per line.
"""

from __future__ import annotations

import csv
import io

from .errors import DomainError
from .flips import FlipSpec, Partition
from .graphs import Bipartite, Graph


def _content_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def dumps_graph(g: Graph) -> str:
    edges = g.edges()
    out = [f"{g.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def loads_graph(text: str) -> Graph:
    lines = _content_lines(text)
    if not lines:
        raise DomainError("empty graph file")
    try:
        n, m = map(int, lines[0].split())
    except ValueError as exc:
        raise DomainError(f"bad graph header {lines[0]!r}") from exc
    if len(lines) - 1 != m:
        raise DomainError(f"header declares {m} edges, file has {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        u, v = map(int, line.split())
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def dumps_bipartite(b: Bipartite) -> str:
    edges = b.graph.edges()
    out = [f"{b.n} {len(edges)}", "U: " + " ".join(map(str, b.left))]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def loads_bipartite(text: str) -> Bipartite:
    lines = _content_lines(text)
    if len(lines) < 2 or not lines[1].startswith("U:"):
        raise DomainError("bipartite file needs an 'U: ...' second header line")
    n, m = map(int, lines[0].split())
    left = tuple(int(x) for x in lines[1][2:].split())
    edges = [tuple(map(int, line.split())) for line in lines[2:]]
    if len(edges) != m:
        raise DomainError(f"header declares {m} edges, file has {len(edges)}")
    right = tuple(v for v in range(n) if v not in set(left))
    return Bipartite(Graph.from_edges(n, edges), left, right)


def dumps_partition(p: Partition) -> str:
    return "\n".join(f"{v} {p.part_of(v)}" for v in range(p.n)) + "\n"


def loads_partition(text: str, n: int | None = None) -> Partition:
    lines = _content_lines(text)
    labels: dict[int, int] = {}
    for line in lines:
        v, part = map(int, line.split())
        if v in labels:
            raise DomainError(f"vertex {v} listed twice in partition file")
        labels[v] = part
    count = n if n is not None else (max(labels) + 1 if labels else 0)
    if set(labels) != set(range(count)):
        raise DomainError("partition file must assign every vertex 0..n-1 once")
    return Partition.from_labels([labels[v] for v in range(count)])


def dumps_flip_spec(spec: FlipSpec) -> str:
    return "\n".join(f"{i} {j}" for i, j in spec) + ("\n" if len(spec) else "")


def loads_flip_spec(text: str) -> FlipSpec:
    pairs = []
    for line in _content_lines(text):
        i, j = map(int, line.split())
        pairs.append((i, j))
    return FlipSpec(pairs)


def dumps_weights(weights) -> str:
    return "\n".join(f"{v} {w}" for v, w in enumerate(weights)) + "\n"


def loads_weights(text: str, n: int | None = None) -> list[int | float]:
    """Parse ``v weight`` lines; all-integer files come back as ints so the
    exact-arithmetic comparison path stays available."""
    entries: dict[int, str] = {}
    for line in _content_lines(text):
        v, w = line.split()
        entries[int(v)] = w
    count = n if n is not None else (max(entries) + 1 if entries else 0)
    if set(entries) != set(range(count)):
        raise DomainError("weights file must cover every vertex 0..n-1 once")
    raws = [entries[v] for v in range(count)]
    try:
        return [int(w) for w in raws]
    except ValueError:
        return [float(w) for w in raws]


def dumps_family(sets) -> str:
    return "\n".join(" ".join(map(str, s)) for s in sets) + "\n"


def loads_family(text: str) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in line.split()) for line in _content_lines(text)]


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------


def export_dot(g: Graph, partition: Partition | None = None) -> str:
    """Graphviz DOT text; with a partition, vertices are colored by part."""
    palette = [
        "lightblue", "lightcoral", "lightgreen", "gold",
        "plum", "lightsalmon", "paleturquoise", "khaki",
    ]
    out = ["graph G {"]
    for v in range(g.n):
        if partition is not None:
            color = palette[partition.part_of(v) % len(palette)]
            out.append(f'  {v} [style=filled, fillcolor="{color}"];')
        else:
            out.append(f"  {v};")
    for u, v in g.edges():
        out.append(f"  {u} -- {v};")
    out.append("}")
    return "\n".join(out) + "\n"


def export_csv(rows: list[dict], columns: list[str]) -> str:
    """CSV with a fixed header; an empty row list still emits the header."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()
