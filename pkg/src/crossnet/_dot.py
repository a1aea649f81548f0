"""Minimal undirected DOT writer with stable output."""
from __future__ import annotations


def quote(name: str) -> str:
    return '"' + str(name).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attrs(attrs: dict) -> str:
    if not attrs:
        return ""
    return " [" + ", ".join(f"{k}={v}" for k, v in attrs.items()) + "]"


def render_graph(name: str, nodes, edges) -> str:
    """``nodes``: iterable of (id, attrs); ``edges``: iterable of (a, b, attrs)."""
    lines = [f"graph {name} {{"]
    for node, attrs in nodes:
        lines.append(f"  {quote(node)}{_attrs(attrs)};")
    for a, b, attrs in edges:
        lines.append(f"  {quote(a)} -- {quote(b)}{_attrs(attrs)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
