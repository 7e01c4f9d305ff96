"""Edge-list file format: parsing and serialization.

The format is line-oriented and 0-indexed::

    p mwm <n> <m>
    <u> <v> <w>
    ...

The header declares the node count (needed before the first edge) and the
edge count, which must match the body exactly. Blank lines and lines
starting with ``c`` are ignored. Line order is arrival order.
"""

from __future__ import annotations

import sys
from typing import Iterable

from .core import I64_MAX, EdgeStream, StreamFormatError, WeightedEdge

__all__ = ["parse_stream", "serialize_stream", "read_stream"]


def parse_stream(lines: Iterable[str]) -> EdgeStream:
    """Parse the edge-list format; every error names the offending line."""
    n: int | None = None
    declared_m = 0
    edges: list[WeightedEdge] = []
    last_line = 0
    for lineno, raw in enumerate(lines, start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "mwm":
                raise StreamFormatError(
                    f"expected header 'p mwm <n> <m>' at line {lineno}"
                )
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise StreamFormatError(f"malformed header at line {lineno}") from None
            if n < 0 or declared_m < 0:
                raise StreamFormatError(f"negative header counts at line {lineno}")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise StreamFormatError(f"malformed edge line at line {lineno}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise StreamFormatError(f"malformed edge line at line {lineno}") from None
        if len(edges) >= declared_m:
            raise StreamFormatError(
                f"more than the declared {declared_m} edges at line {lineno}"
            )
        if not (0 <= u < n and 0 <= v < n):
            raise StreamFormatError(f"endpoint out of range at line {lineno}")
        if u == v:
            raise StreamFormatError(f"self-loop at line {lineno}")
        if w < 0:
            raise StreamFormatError(f"negative weight at line {lineno}")
        if w > I64_MAX:
            raise StreamFormatError(f"weight exceeds 2^63-1 at line {lineno}")
        edges.append(WeightedEdge(u, v, w))
    if n is None:
        raise StreamFormatError("missing header 'p mwm <n> <m>'")
    if len(edges) != declared_m:
        raise StreamFormatError(
            f"header declared {declared_m} edges but found {len(edges)} "
            f"by line {last_line}"
        )
    return EdgeStream(n, edges)


def serialize_stream(stream: EdgeStream) -> str:
    """Canonical text form; `parse_stream` round-trips it exactly."""
    out = [f"p mwm {stream.n} {len(stream.edges)}"]
    out.extend(f"{e.u} {e.v} {e.weight}" for e in stream.edges)
    return "\n".join(out) + "\n"


def read_stream(path: str) -> EdgeStream:
    """Read a stream from a file path, or stdin when path is '-'."""
    if path == "-":
        return parse_stream(sys.stdin)
    with open(path, "r", encoding="utf-8") as fp:
        return parse_stream(fp)
