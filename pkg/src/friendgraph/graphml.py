"""GraphML reader and canonical writer.

Each node carries a single string attribute ``uid`` holding the user id. The
writer emits it both as the element id and as the ``uid`` data value; the
reader prefers the data value and falls back to the element id.
"""

from __future__ import annotations

import io
import os
import warnings
import xml.etree.ElementTree as ET
from typing import BinaryIO, Union
from xml.sax.saxutils import escape

from friendgraph.errors import GraphMLParseError, UnsupportedSchemaError
from friendgraph.graph import MultiGraph, SimpleGraph

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"
SCHEMA_LOCATION = f"{GRAPHML_NS} {GRAPHML_NS}/1.0/graphml.xsd"
UID_KEY = "uid"

HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    f'<graphml xmlns="{GRAPHML_NS}" xmlns:xsi="{XSI_NS}" xsi:schemaLocation="{SCHEMA_LOCATION}">\n'
    f'  <key id="{UID_KEY}" for="node" attr.name="uid" attr.type="string"/>\n'
    '  <graph id="G" edgedefault="undirected">\n'
)
FOOTER = "  </graph>\n</graphml>\n"

_ATTR_ENTITIES = {'"': "&quot;"}

Source = Union[bytes, str, os.PathLike, BinaryIO]


class GraphMLWarning(UserWarning):
    pass


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _open(source: Source):
    if isinstance(source, (bytes, bytearray)):
        return io.BytesIO(source), True
    if isinstance(source, (str, os.PathLike)):
        return open(source, "rb"), True
    return source, False


def parse_graphml(source: Source) -> MultiGraph:
    """Stream-parse a GraphML document into a ``MultiGraph``.

    ``source`` is raw bytes, a path, or a binary file object. Every node and
    edge element becomes one record, duplicates included. Edges that reference
    undeclared node ids register those ids as nodes.
    """
    stream, owned = _open(source)
    try:
        return _parse(stream)
    finally:
        if owned:
            stream.close()


def _parse(stream) -> MultiGraph:
    uid_keys: set[str] = set()
    ignored_keys: set[str] = set()
    warned: set[str] = set()

    def warn_once(what: str) -> None:
        if what not in warned:
            warned.add(what)
            warnings.warn(f"ignoring {what}", GraphMLWarning, stacklevel=4)

    node_elements: list[tuple[str, str]] = []
    raw_edges: list[tuple[str, str]] = []
    depth_graph = 0
    seen_graph = False

    try:
        for event, elem in ET.iterparse(stream, events=("start", "end")):
            tag = _local(elem.tag)
            if event == "start":
                if tag == "graph":
                    depth_graph += 1
                    if depth_graph > 1:
                        raise UnsupportedSchemaError("nested graphs are not supported")
                    if seen_graph:
                        raise UnsupportedSchemaError("multiple graph elements are not supported")
                    seen_graph = True
                    edgedefault = elem.get("edgedefault", "undirected")
                    if edgedefault != "undirected":
                        raise UnsupportedSchemaError(f'edgedefault="{edgedefault}" is not supported')
                elif tag in ("hyperedge", "port"):
                    raise UnsupportedSchemaError(f"<{tag}> elements are not supported")
                continue

            if tag == "key":
                key_id = elem.get("id")
                if elem.get("attr.name") == "uid" and elem.get("for", "node") in ("node", "all"):
                    uid_keys.add(key_id)
                else:
                    ignored_keys.add(key_id)
                    warn_once(f"key {key_id!r}")
            elif tag == "node":
                element_id = elem.get("id")
                if not element_id:
                    raise GraphMLParseError("node element without id")
                uid = None
                for child in elem:
                    if _local(child.tag) != "data":
                        continue
                    key = child.get("key")
                    if key in uid_keys or (key == UID_KEY and not uid_keys):
                        uid = (child.text or "").strip() or None
                    else:
                        warn_once(f"node data key {key!r}")
                node_elements.append((element_id, uid or element_id))
                elem.clear()
            elif tag == "edge":
                if elem.get("directed") == "true":
                    raise UnsupportedSchemaError("directed edges are not supported")
                source, target = elem.get("source"), elem.get("target")
                if not source or not target:
                    raise GraphMLParseError("edge element without source/target")
                for child in elem:
                    if _local(child.tag) == "data":
                        warn_once(f"edge data key {child.get('key')!r}")
                raw_edges.append((source, target))
                elem.clear()
            elif tag == "graph":
                depth_graph -= 1
    except ET.ParseError as exc:
        line = exc.position[0] if getattr(exc, "position", None) else None
        raise GraphMLParseError(f"malformed XML: {exc}", line=line) from None

    element_to_uid = {}
    nodes = []
    for element_id, uid in node_elements:
        element_to_uid.setdefault(element_id, uid)
        nodes.append(uid)
    edges = [(element_to_uid.get(a, a), element_to_uid.get(b, b)) for a, b in raw_edges]
    registered = set(nodes)
    for a, b in edges:
        for endpoint in (a, b):
            if endpoint not in registered:
                registered.add(endpoint)
                nodes.append(endpoint)
    return MultiGraph(nodes, edges)


def _node_line(node_id: str) -> str:
    attr = escape(node_id, _ATTR_ENTITIES)
    return f'    <node id="{attr}"><data key="{UID_KEY}">{escape(node_id)}</data></node>\n'


def _edge_line(a: str, b: str) -> str:
    return f'    <edge source="{escape(a, _ATTR_ENTITIES)}" target="{escape(b, _ATTR_ENTITIES)}"/>\n'


def graphml_bytes(g: Union[SimpleGraph, MultiGraph]) -> bytes:
    """Serialize ``g``.

    A ``SimpleGraph`` is written canonically: nodes in dense-index order,
    edges sorted by (min endpoint, max endpoint). A ``MultiGraph`` is written
    record for record, preserving duplicates and order.
    """
    parts = [HEADER]
    if isinstance(g, SimpleGraph):
        parts.extend(_node_line(nid) for nid in g.ids)
        parts.extend(_edge_line(a, b) for a, b in g.edge_list())
    else:
        parts.extend(_node_line(nid) for nid in g.nodes)
        parts.extend(_edge_line(a, b) for a, b in g.edges)
    parts.append(FOOTER)
    return "".join(parts).encode("utf-8")


def write_graphml(g: Union[SimpleGraph, MultiGraph], dest=None) -> bytes:
    """Serialize ``g`` and optionally write it to ``dest`` (path or binary file).

    Returns the document bytes in either case.
    """
    data = graphml_bytes(g)
    if dest is None:
        return data
    if isinstance(dest, (str, os.PathLike)):
        from friendgraph.tables import atomic_write_bytes

        atomic_write_bytes(dest, data)
    else:
        dest.write(data)
    return data
