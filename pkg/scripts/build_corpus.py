"""Regenerate the frozen desk corpus in tests/data.

Sources (all reachable through a plain PyPI mirror):
  english_words 2.0.2   word lists -> word-ladder graphs
  netsci 0.0.4          two cortical connectomes (directed synapses, symmetrized)
  pygsp 0.6.1           Minnesota road network, airfoil mesh
  networkx              Les Miserables co-appearance graph
  installed packages    intra-package module import graphs

Usage:
  pip download --no-deps english_words==2.0.2 netsci==0.0.4 pygsp==0.6.1 -d WHEELS
  python scripts/build_corpus.py WHEELS

Each network is written as gzipped "u w" lines with a short '#' header.
Import graphs depend on the installed package versions; the versions used are
recorded in the header.
"""

from __future__ import annotations

import ast
import csv
import gzip
import importlib.metadata
import importlib.util
import io
import itertools
import pickle
import sys
import zipfile
from collections import defaultdict
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data"


def wheel(wheels: Path, prefix: str) -> zipfile.ZipFile:
    matches = sorted(wheels.glob(prefix + "-*.whl"))
    if not matches:
        sys.exit(f"missing wheel {prefix}-*.whl in {wheels}")
    return zipfile.ZipFile(matches[0])


def write(name, edges, header):
    edges = sorted({(a, b) if a < b else (b, a) for a, b in edges if a != b})
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.edges.gz"
    # fixed mtime keeps the archive byte-identical across regenerations
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
        with io.TextIOWrapper(gz, encoding="utf-8") as f:
            for line in header:
                f.write(f"# {line}\n")
            for a, b in edges:
                f.write(f"{a} {b}\n")
    verts = {v for e in edges for v in e}
    print(f"{name:28s} n={len(verts):6d} m={len(edges):7d}")


def ladder_edges(words, substitution_only=True):
    """Words differing in one letter; optionally also one inserted/deleted letter."""
    words = set(words)
    edges = set()
    buckets = defaultdict(list)
    for w in words:
        for i in range(len(w)):
            buckets[w[:i] + "_" + w[i + 1:]].append(w)
    for group in buckets.values():
        group.sort()
        edges.update(itertools.combinations(group, 2))
    if not substitution_only:
        for w in words:
            for i in range(len(w)):
                shorter = w[:i] + w[i + 1:]
                if shorter in words:
                    edges.add((shorter, w))
    return edges


def word_graphs(wheels: Path):
    zf = wheel(wheels, "english_words")
    for source in ("web2", "gcide"):
        words = pickle.loads(zf.read(f"english_words/data/{source}_lower.pickle"))
        words = sorted(w for w in words if w.isascii() and w.isalpha())
        for length in (3, 4, 5, 6):
            chosen = [w for w in words if len(w) == length]
            write(f"words_{source}_{length}", ladder_edges(chosen),
                  [f"word ladder, {source} lower-case words of length {length}, one-letter substitutions"])
        if source == "web2":
            chosen = [w for w in words if 3 <= len(w) <= 6]
            write("words_web2_3to6", ladder_edges(chosen, substitution_only=False),
                  ["word ladder, web2 lower-case words of length 3-6, edit distance one"])


def connectomes(wheels: Path):
    zf = wheel(wheels, "netsci")
    for name in ("L5_TTPC", "L6_LBC"):
        raw = zf.read(f"netsci/resources/datasets/connectome.{name}.synapses.csv.gz")
        rows = csv.DictReader(io.StringIO(gzip.decompress(raw).decode()))
        edges = [(int(r["from"]), int(r["to"])) for r in rows]
        write(f"connectome_{name}", edges, [f"cortical microcircuit connectome {name}, synapses symmetrized"])


def pygsp_graphs(wheels: Path):
    import scipy.io
    import scipy.sparse

    zf = wheel(wheels, "pygsp")
    mat = scipy.io.loadmat(io.BytesIO(zf.read("pygsp/data/pointclouds/minnesota.mat")))
    a = scipy.sparse.coo_matrix(mat["A"])
    write("road_minnesota", zip(a.row.tolist(), a.col.tolist()), ["Minnesota road network"])
    mat = scipy.io.loadmat(io.BytesIO(zf.read("pygsp/data/pointclouds/airfoil.mat")))
    i = mat["i_inds"].ravel().astype(int) - 1
    j = mat["j_inds"].ravel().astype(int) - 1
    write("mesh_airfoil", zip(i.tolist(), j.tolist()), ["airfoil finite-element mesh"])


def networkx_graphs():
    import networkx as nx

    g = nx.les_miserables_graph()
    write("lesmis", [(a.replace(" ", "_"), b.replace(" ", "_")) for a, b in g.edges()],
          ["Les Miserables character co-appearance (networkx)"])


def import_graph(package: str, distribution: str):
    spec = importlib.util.find_spec(package)
    if spec is None or not spec.submodule_search_locations:
        print(f"skip {package}: not installed")
        return
    root = Path(list(spec.submodule_search_locations)[0])
    modules = {}
    for path in sorted(root.rglob("*.py")):
        rel = path.relative_to(root.parent).with_suffix("")
        parts = list(rel.parts)
        if parts[-1] == "__init__":
            parts.pop()
        modules[".".join(parts)] = path
    edges = set()
    for name, path in modules.items():
        try:
            tree = ast.parse(path.read_text(encoding="utf-8", errors="replace"))
        except SyntaxError:
            continue
        is_pkg = path.name == "__init__.py"
        for node in ast.walk(tree):
            targets = []
            if isinstance(node, ast.Import):
                targets = [a.name for a in node.names]
            elif isinstance(node, ast.ImportFrom):
                base = node.module or ""
                if node.level:
                    anchor = name.split(".")
                    drop = node.level - 1 if is_pkg else node.level
                    anchor = anchor[: len(anchor) - drop] if drop else anchor
                    base = ".".join(anchor + ([base] if base else []))
                targets = [base] + [f"{base}.{a.name}" for a in node.names]
            for t in targets:
                # resolve to the longest known module prefix
                while t and t not in modules:
                    t = t.rpartition(".")[0]
                if t and t != name:
                    edges.add((name, t))
    version = importlib.metadata.version(distribution)
    write(f"imports_{package}", edges, [f"module import graph of {package} {version}, undirected"])


def main(argv):
    if len(argv) != 2:
        sys.exit(__doc__)
    wheels = Path(argv[1])
    word_graphs(wheels)
    connectomes(wheels)
    pygsp_graphs(wheels)
    networkx_graphs()
    packages = [("numpy", "numpy"), ("scipy", "scipy"), ("sympy", "sympy"), ("sklearn", "scikit-learn"),
                ("networkx", "networkx"), ("pandas", "pandas"), ("matplotlib", "matplotlib")]
    for package, distribution in packages:
        import_graph(package, distribution)


if __name__ == "__main__":
    main(sys.argv)
