"""Readers, graph exporters and the JSON analysis report.

File formats (UTF-8):

* edge list TSV: ``citing<TAB>cited[<TAB>weight]``; ``#`` lines are comments,
  except an optional ``#order:<TAB>label<TAB>label...`` header listing
  every node from oldest to newest.
* affiliation TSV: ``row<TAB>column[<TAB>weight]``.
* journal CSV: header row ``,J1,J2,...`` then one row per journal
  ``Ji,count,count,...``; cell (i, j) = citations of j by i.
"""

from __future__ import annotations

import csv
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np
import scipy.sparse as sp

from bibnet import __version__
from bibnet.coauthor import UndirectedGraph, graph_from_edges
from bibnet.errors import EmptyCorpusError, ParseError, ValidationError
from bibnet.journalrank import JournalCitationMatrix
from bibnet.mapping import ClusterNetwork
from bibnet.netcore import AffiliationMatrix, TemporalDigraph, build_affiliation, build_digraph

REPORT_SCHEMA = "bibnet-report/1"
ORDER_HEADER = "#order:"


def _split_header(rest: str) -> list[str]:
    parts = rest.split("\t") if "\t" in rest else rest.split()
    return [p.strip() for p in parts if p.strip()]


def _weight(text: str, path, lineno: int) -> float:
    try:
        w = float(text)
    except ValueError:
        raise ParseError(f"non-numeric weight {text!r}", path, lineno, 3) from None
    if not math.isfinite(w) or w < 0:
        raise ParseError(f"weight must be a finite non-negative number, got {text!r}", path, lineno, 3)
    return w


def _records(path):
    """Yield ``(lineno, fields, is_order_header)`` for every non-comment line."""
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                if line.startswith(ORDER_HEADER):
                    yield lineno, _split_header(line[len(ORDER_HEADER):]), True
                continue
            fields = line.split("\t")
            if len(fields) not in (2, 3) or not all(f.strip() for f in fields[:2]):
                raise ParseError(f"expected 2 or 3 tab-separated fields, got {len(fields)}", path, lineno)
            yield lineno, [f.strip() for f in fields], False


def read_edge_list(path, allow_self_loops: bool = False) -> TemporalDigraph:
    order = None
    edges = []
    for lineno, fields, is_header in _records(path):
        if is_header:
            if order is not None:
                raise ParseError("second #order: header", path, lineno)
            if edges:
                raise ParseError("#order: header must precede the edges", path, lineno)
            order = fields
            if len(set(order)) != len(order):
                raise ParseError("#order: header lists a label twice", path, lineno)
            declared = set(order)
            continue
        if order is not None:
            for col, lab in enumerate(fields[:2], start=1):
                if lab not in declared:
                    raise ParseError(f"node {lab!r} is not declared in the #order: header", path, lineno, col)
        if fields[0] == fields[1] and not allow_self_loops:
            raise ParseError(f"self-citation of {fields[0]!r}", path, lineno)
        rec = (fields[0], fields[1], _weight(fields[2], path, lineno)) if len(fields) == 3 else tuple(fields)
        edges.append((lineno, rec))
    try:
        return build_digraph([r for _, r in edges], order=order, allow_self_loops=allow_self_loops)
    except ValidationError as exc:
        raise ParseError(str(exc), path) from None


def read_affiliation(path) -> AffiliationMatrix:
    records = []
    rows: dict[str, int] = {}
    cols: dict[str, int] = {}
    for lineno, fields, is_header in _records(path):
        if is_header:
            raise ParseError("#order: header is not valid in an affiliation file", path, lineno)
        r, c = fields[0], fields[1]
        if r in cols or c in rows or r == c:
            bad = r if (r in cols or r == c) else c
            raise ParseError(f"label {bad!r} appears as both row and column (not bipartite)", path, lineno)
        rows.setdefault(r, lineno)
        cols.setdefault(c, lineno)
        records.append((r, c, _weight(fields[2], path, lineno)) if len(fields) == 3 else (r, c))
    if not records:
        raise EmptyCorpusError(f"{path}: empty corpus")
    return build_affiliation(records)


def read_matrix_csv(path) -> JournalCitationMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [(i, r) for i, r in enumerate(rows, start=1) if any(cell.strip() for cell in r)]
    if not rows:
        raise ParseError("empty matrix file", path)
    header_line, header = rows[0]
    labels = [h.strip() for h in header[1:]]
    n = len(labels)
    if n == 0 or not all(labels):
        raise ParseError("header needs one non-empty label per column", path, header_line)
    if len(set(labels)) != n:
        raise ParseError("duplicate journal label in header", path, header_line)
    body = rows[1:]
    if len(body) != n:
        raise ParseError(f"matrix is not square: {n} columns but {len(body)} rows", path)
    counts = np.zeros((n, n))
    for i, (lineno, row) in enumerate(body):
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} cells, got {len(row)}", path, lineno)
        if row[0].strip() != labels[i]:
            raise ParseError(f"row label {row[0].strip()!r} does not match column label {labels[i]!r}", path, lineno, 1)
        for j, cell in enumerate(row[1:]):
            try:
                val = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", path, lineno, j + 2) from None
            if not math.isfinite(val) or val < 0:
                raise ParseError(f"counts must be finite and non-negative, got {cell!r}", path, lineno, j + 2)
            counts[i, j] = val
    return JournalCitationMatrix(tuple(labels), counts)


def read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\r\n") for line in fh]


def read_stopwords(path) -> set[str]:
    return {w.strip().lower() for w in read_lines(path) if w.strip() and not w.startswith("#")}


# -- graph export ---------------------------------------------------------


def format_number(x: float) -> str:
    """Shortest exact text for a float; integral values print without a fraction."""
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _graph_parts(obj):
    """``(directed, labels, node_attrs, edges)`` for any exportable object."""
    if isinstance(obj, TemporalDigraph):
        attrs = [{"order": obj.order[i]} if obj.order is not None else {} for i in range(obj.n)]
        return True, obj.labels, attrs, obj.edges()
    if isinstance(obj, UndirectedGraph):
        return False, obj.labels, [{} for _ in obj.labels], obj.edges()
    if isinstance(obj, ClusterNetwork):
        idx = {lab: i for i, lab in enumerate(obj.labels)}
        edges = [(idx[a], idx[b], w) for a, b, w in obj.edges]
        return False, obj.labels, [{"size": s} for s in obj.sizes], edges
    raise ValidationError(f"cannot export {type(obj).__name__}")


def to_dot(obj) -> str:
    directed, labels, attrs, edges = _graph_parts(obj)
    arrow = "->" if directed else "--"
    lines = ["digraph G {" if directed else "graph G {"]
    for lab, at in zip(labels, attrs):
        extra = "".join(f", {k}={format_number(v)}" for k, v in sorted(at.items()))
        lines.append(f"  {_dot_id(lab)} [label={_dot_id(lab)}{extra}];")
    for i, j, w in edges:
        lines.append(f"  {_dot_id(labels[i])} {arrow} {_dot_id(labels[j])} [weight={format_number(w)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_graphml(obj) -> str:
    directed, labels, attrs, edges = _graph_parts(obj)
    node_keys = sorted({k for at in attrs for k in at})
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
    ]
    for k in node_keys:
        out.append(f'  <key id="{k}" for="node" attr.name="{k}" attr.type="double"/>')
    out.append('  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>')
    out.append(f'  <graph id="G" edgedefault="{"directed" if directed else "undirected"}">')
    for lab, at in zip(labels, attrs):
        if at:
            out.append(f"    <node id={quoteattr(lab)}>")
            for k in sorted(at):
                out.append(f'      <data key="{k}">{format_number(at[k])}</data>')
            out.append("    </node>")
        else:
            out.append(f"    <node id={quoteattr(lab)}/>")
    for i, j, w in edges:
        out.append(f"    <edge source={quoteattr(labels[i])} target={quoteattr(labels[j])}>")
        out.append(f'      <data key="weight">{escape(format_number(w))}</data>')
        out.append("    </edge>")
    out.append("  </graph>")
    out.append("</graphml>")
    return "\n".join(out) + "\n"


def export_graph(obj, fmt: str, path=None) -> str:
    """Render ``obj`` as DOT or GraphML; write it to ``path`` when given.

    Node order follows the object's index order and edges are sorted, so
    output is byte-identical across runs.
    """
    if fmt == "dot":
        text = to_dot(obj)
    elif fmt == "graphml":
        text = to_graphml(obj)
    else:
        raise ValidationError(f"unknown export format {fmt!r}")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


_GML = "{http://graphml.graphdrawing.org/xmlns}"


def read_graphml(path):
    """Inverse of :func:`to_graphml` for citation and undirected graphs."""
    root = ET.parse(path).getroot()
    graph = root.find(f"{_GML}graph")
    if graph is None:
        raise ParseError("no <graph> element", path)
    directed = graph.get("edgedefault", "directed") == "directed"
    labels, order = [], {}
    for node in graph.findall(f"{_GML}node"):
        lab = node.get("id")
        labels.append(lab)
        for d in node.findall(f"{_GML}data"):
            if d.get("key") == "order":
                order[lab] = float(d.text)
    edges = []
    for e in graph.findall(f"{_GML}edge"):
        w = 1.0
        for d in e.findall(f"{_GML}data"):
            if d.get("key") == "weight":
                w = float(d.text)
        edges.append((e.get("source"), e.get("target"), w))
    if not directed:
        return graph_from_edges(edges, nodes=labels)
    self_loops = any(u == v for u, v, _ in edges)
    g = build_digraph(edges, nodes=labels, allow_self_loops=self_loops)
    if order:
        g = TemporalDigraph(g.labels, g.adjacency, tuple(order[lab] for lab in g.labels), self_loops)
    return g


# -- reports ----------------------------------------------------------------


def _canonical(x):
    """JSON-ready copy with floats rounded to 9 significant digits."""
    if isinstance(x, dict):
        return {str(k): _canonical(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canonical(v) for v in x]
    if isinstance(x, np.ndarray):
        return _canonical(x.tolist())
    if sp.issparse(x):
        return _canonical(x.toarray().tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
        r = float(f"{x:.9g}")
        return 0.0 if r == 0 else r
    return x


@dataclass
class AnalysisReport:
    command: str
    inputs: list[str]
    parameters: dict
    result: dict
    timing: dict | None = None
    version: str = field(default=__version__)

    def to_dict(self) -> dict:
        doc = {
            "schema": REPORT_SCHEMA,
            "tool": {"name": "bibnet", "version": self.version},
            "command": self.command,
            "inputs": list(self.inputs),
            "parameters": self.parameters,
            "result": self.result,
        }
        if self.timing is not None:
            doc["timing"] = self.timing
        return _canonical(doc)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
