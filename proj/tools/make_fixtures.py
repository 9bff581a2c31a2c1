#!/usr/bin/env python3
"""Regenerates the bundled datasets under data/ (output is deterministic)."""

import pathlib

import networkx as nx
import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write_edges(path, edges):
    with open(path, "w") as f:
        for u, v in edges:
            f.write(f"{u}\t{v}\n")


def write_labels(path, pairs):
    with open(path, "w") as f:
        for node, label in pairs:
            f.write(f"{node}\t{label}\n")


def connect(n, edges, labels, rng):
    """Joins every component to the largest by one same-label edge when possible."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    comps = sorted(nx.connected_components(g), key=len, reverse=True)
    giant = sorted(comps[0])
    by_label = {}
    for u in giant:
        by_label.setdefault(labels[u], []).append(u)
    for comp in comps[1:]:
        u = min(comp)
        pool = by_label.get(labels[u], giant)
        edges.append((u, pool[rng.integers(len(pool))]))
    return edges


def planted(sizes, degree, intra, rng):
    """Planted partition with heavy-tailed node propensities."""
    labels = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    n = len(labels)
    weight = rng.pareto(2.5, n) + 1.0
    m = int(degree * n / 2)
    edges = set()
    members = [np.flatnonzero(labels == k + 1) for k in range(len(sizes))]
    probs = [weight[idx] / weight[idx].sum() for idx in members]
    all_p = weight / weight.sum()
    while len(edges) < m:
        u = rng.choice(n, p=all_p)
        if rng.random() < intra:
            k = labels[u] - 1
            v = rng.choice(members[k], p=probs[k])
        else:
            v = rng.choice(n, p=all_p)
            if labels[v] == labels[u]:
                continue
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return labels, sorted(edges)


def karate():
    out = ROOT / "karate"
    out.mkdir(parents=True, exist_ok=True)
    g = nx.karate_club_graph()
    write_edges(out / "edges.tsv", sorted((min(u, v), max(u, v)) for u, v in g.edges()))
    names = {"Mr. Hi": "instructor", "Officer": "administrator"}
    write_labels(out / "labels.tsv", [(u, names[g.nodes[u]["club"]]) for u in g.nodes()])
    write_labels(out / "seeds.tsv", [(0, "instructor"), (33, "administrator")])


def citation():
    """Seven unbalanced classes, 2708 nodes (the shape of a small citation graph)."""
    rng = np.random.default_rng(11)
    out = ROOT / "planted7"
    out.mkdir(parents=True, exist_ok=True)
    sizes = [818, 426, 418, 351, 298, 217, 180]
    labels, edges = planted(sizes, 4.0, 0.8, rng)
    edges = connect(len(labels), edges, labels, rng)
    perm = rng.permutation(len(labels))
    write_edges(out / "edges.tsv", sorted((int(perm[u]), int(perm[v])) for u, v in edges))
    write_labels(out / "labels.tsv", sorted((int(perm[u]), f"c{labels[u]}") for u in range(len(labels))))


def directed():
    """Five classes, every node with at least one in-arc and one out-arc."""
    rng = np.random.default_rng(23)
    out = ROOT / "directed5"
    out.mkdir(parents=True, exist_ok=True)
    sizes = [500, 350, 250, 150, 100]
    labels, edges = planted(sizes, 6.0, 0.8, rng)
    n = len(labels)
    arcs = set()
    for u, v in edges:
        arcs.add((u, v) if rng.random() < 0.5 else (v, u))
    members = [np.flatnonzero(labels == k + 1) for k in range(len(sizes))]
    outs = {u for u, _ in arcs}
    ins = {v for _, v in arcs}
    for u in range(n):
        pool = members[labels[u] - 1]
        while u not in outs:
            v = int(pool[rng.integers(len(pool))])
            if v != u:
                arcs.add((u, v))
                outs.add(u)
                ins.add(v)
        while u not in ins:
            v = int(pool[rng.integers(len(pool))])
            if v != u:
                arcs.add((v, u))
                ins.add(u)
                outs.add(v)
    write_edges(out / "edges.tsv", sorted(arcs))
    write_labels(out / "labels.tsv", [(u, f"t{labels[u]}") for u in range(n)])


def multilabel():
    """Partially labeled graph where some nodes carry two labels."""
    rng = np.random.default_rng(37)
    out = ROOT / "multilabel"
    out.mkdir(parents=True, exist_ok=True)
    sizes = [900, 700, 500, 300, 200]
    labels, edges = planted(sizes, 5.0, 0.85, rng)
    n = len(labels)
    edges = connect(n, edges, labels, rng)
    write_edges(out / "edges.tsv", sorted(edges))
    pairs = []
    for u in range(n):
        if rng.random() >= 0.4:
            continue
        pairs.append((u, f"area{labels[u]}"))
        if rng.random() < 0.1:
            other = int(rng.integers(1, len(sizes) + 1))
            if other != labels[u]:
                pairs.append((u, f"area{other}"))
    write_labels(out / "labels.tsv", pairs)


def block_pair():
    """Deterministic two-block graph, sizes 50/50, seeds 10/2, p=2, q=1, self-loops included."""
    out = ROOT / "block2"
    out.mkdir(parents=True, exist_ok=True)
    sizes, p, q = [50, 50], 2, 1
    block = [0] * sizes[0] + [1] * sizes[1]
    n = len(block)
    with open(out / "edges.tsv", "w") as f:
        for u in range(n):
            for v in range(u, n):
                f.write(f"{u}\t{v}\t{p if block[u] == block[v] else q}\n")
    write_labels(out / "labels.tsv", [(u, f"b{block[u] + 1}") for u in range(n)])
    write_labels(out / "seeds.tsv", [(u, "b1") for u in range(10)] + [(u, "b2") for u in range(50, 52)])


if __name__ == "__main__":
    karate()
    citation()
    directed()
    multilabel()
    block_pair()
