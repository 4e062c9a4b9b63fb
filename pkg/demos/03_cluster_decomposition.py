"""Recursive K-means decomposition of a 76-city instance into <= 4-city leaves.

Every leaf is small enough for the 8-qubit path register (2 bits per city).
"""

import pathlib

from qacotsp import build_cluster_tree, load_instance
from qacotsp.cluster import centroid_of

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

inst = load_instance(DATA / "eil76.tsp")
tree = build_cluster_tree(inst, seed=0)

leaves = tree.leaves()
print(f"{inst.name}: {inst.dimension} cities -> {len(leaves)} leaves, "
      f"tree depth {tree.depth()}")

sizes = sorted(len(leaf.node) for leaf in leaves)
print(f"leaf sizes: min {sizes[0]}, max {sizes[-1]}, "
      f"histogram {dict((s, sizes.count(s)) for s in set(sizes))}")

covered = sorted(i for leaf in leaves for i in leaf.node)
print(f"leaves partition the city set exactly: {covered == list(range(76))}")

print("\nfirst five leaves and their centroids:")
for leaf in leaves[:5]:
    cx, cy = centroid_of(inst, leaf.node)
    print(f"  cities {leaf.node} around ({cx:.1f}, {cy:.1f})")
