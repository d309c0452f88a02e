"""Edge-list input and results output."""

from __future__ import annotations

import csv
import dataclasses
import gzip
import io
import json
import math
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Union

from .graph import Graph
from .metrics import MetricsRecord

PathLike = Union[str, Path]
COLUMNS = [f.name for f in dataclasses.fields(MetricsRecord)]


class ParseError(ValueError):
    def __init__(self, path, lineno: int, line: str, reason: str):
        super().__init__(f"{path}:{lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


def _open_text(path: PathLike) -> IO[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return io.TextIOWrapper(gzip.open(path, "rb"), encoding="utf-8")
    return open(path, encoding="utf-8")


def parse_graph(path: PathLike) -> Tuple[Graph, List[str]]:
    """Read a whitespace-separated edge list.

    Labels are arbitrary tokens, mapped to dense ids in order of first
    appearance; ``labels[i]`` is the token of vertex i. Lines starting with
    '#' or '%' are comments, columns after the second (weights, timestamps)
    are ignored, self-loops are dropped but their vertex is kept, duplicate
    and reversed edges are merged. DIMACS files (first line 'c ...' or
    'p ...') use 'c' comments, a 'p edge n m' header and 'e u w' edge lines
    (plain 'u w' lines are accepted there too). Files ending in .gz
    are decompressed.
    """
    g = Graph()
    ids: dict = {}
    labels: List[str] = []

    def vid(token: str) -> int:
        v = ids.get(token)
        if v is None:
            v = ids[token] = len(labels)
            labels.append(token)
            g.add_vertex(v)
        return v

    dimacs: Optional[bool] = None
    with _open_text(path) as f:
        for lineno, line in enumerate(f, 1):
            tokens = line.split()
            if not tokens or tokens[0][0] in "#%":
                continue
            head = tokens[0]
            if dimacs is None:
                dimacs = head in ("c", "p")
            if head == "p":
                if len(tokens) != 4 or not (tokens[2].isdigit() and tokens[3].isdigit()):
                    raise ParseError(path, lineno, line, "bad header")
                continue
            if dimacs:
                if head == "c":
                    continue
                if head == "e":
                    tokens = tokens[1:]
            if len(tokens) < 2:
                raise ParseError(path, lineno, line, "expected two vertex labels")
            u, w = vid(tokens[0]), vid(tokens[1])
            if u != w:
                g.add_edge(u, w)
    return g, labels


def write_edge_list(g: Graph, path: PathLike, labels: Optional[Sequence[str]] = None) -> None:
    """Canonical edge list: sorted edges, isolated vertices as self-loops (parse_graph keeps them)."""
    name = (lambda v: labels[v]) if labels is not None else str
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "wt", encoding="utf-8") as f:
        for v in sorted(g.adj):
            if not g.adj[v]:
                f.write(f"{name(v)} {name(v)}\n")
        for u, w in sorted(g.edges()):
            f.write(f"{name(u)} {name(w)}\n")


def _row(record) -> dict:
    if dataclasses.is_dataclass(record):
        return dataclasses.asdict(record)
    return dict(record)


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


class RecordWriter:
    """Appends records to a CSV or JSON results file, flushing after each one.

    CSV rows are complete on disk as soon as ``write`` returns. JSON output is
    one record per line inside the array, so an interrupted run leaves every
    finished record readable line by line.
    """

    def __init__(self, path: PathLike, fmt: str = "csv"):
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {fmt!r}")
        self.fmt = fmt
        self.count = 0
        self._f = open(path, "w", encoding="utf-8", newline="", buffering=1)
        if fmt == "csv":
            self._csv = csv.DictWriter(self._f, fieldnames=COLUMNS, lineterminator="\n")
            self._csv.writeheader()
        else:
            self._f.write("[")
        self._f.flush()

    def write(self, record) -> None:
        row = _row(record)
        if self.fmt == "csv":
            self._csv.writerow({k: ("" if row.get(k) is None else row[k]) for k in COLUMNS})
        else:
            sep = "\n" if self.count == 0 else ",\n"
            self._f.write(sep + json.dumps({k: _json_safe(row.get(k)) for k in COLUMNS}))
        self.count += 1
        self._f.flush()

    def close(self) -> None:
        if self._f.closed:
            return
        if self.fmt == "json":
            self._f.write("\n]\n" if self.count else "]\n")
        self._f.close()

    def __enter__(self) -> "RecordWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def emit(records: Iterable, fmt: str, path: PathLike) -> None:
    """Write records as CSV (fixed header, one row each) or as a JSON array."""
    with RecordWriter(path, fmt) as w:
        for r in records:
            w.write(r)


_INT = {"n", "m", "ell", "size", "nlb_value", "multilb_value"}
_FLOAT = {"density", "solve_time", "preprocessing_fraction", "nlb_quality", "multilb_quality",
          "solution_density", "global_cc", "min_local_cc"}


def _typed(key: str, value: str):
    if value == "":
        return None
    if key in _INT:
        return int(value)
    if key in _FLOAT:
        return float(value)
    if key == "proven_optimal":
        return value == "True"
    return value


def read_records(path: PathLike, fmt: str = "csv") -> List[MetricsRecord]:
    """Inverse of ``emit``."""
    with open(path, encoding="utf-8", newline="") as f:
        if fmt == "json":
            rows = json.load(f)
        else:
            rows = [{k: _typed(k, v) for k, v in row.items()} for row in csv.DictReader(f)]
    return [MetricsRecord(**row) for row in rows]
