"""Loading benchmark instances and comparing distance conventions.

The canonical convention follows the classic benchmark formulas (integer
rounding for EUC_2D, the great-circle formula for GEO coordinates); the
plain convention is unrounded Euclidean distance on the raw coordinates.
"""

import pathlib

from qacotsp import MetricMode, Tour, gen_random_instance, load_instance, tour_length
from qacotsp.tsplib import format_instance, parse_instance

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

u16 = load_instance(DATA / "ulysses16.tsp")
print(f"{u16.name}: {u16.dimension} cities, {u16.edge_weight_type} coordinates")

identity = Tour(tuple(range(16)))
print(f"  identity tour, canonical GEO length: {tour_length(u16, identity):.0f}")
print(f"  identity tour, plain Euclidean     : "
      f"{tour_length(u16, identity, MetricMode.PLAIN):.3f}")

b52 = load_instance(DATA / "berlin52.tsp")
identity52 = Tour(tuple(range(52)))
print(f"\n{b52.name}: canonical = rounded Euclidean, so the two conventions "
      f"differ only by rounding:")
print(f"  canonical: {tour_length(b52, identity52):.0f}")
print(f"  plain    : {tour_length(b52, identity52, MetricMode.PLAIN):.3f}")

rnd = gen_random_instance(10, seed=7, bound=100.0)
print(f"\nGenerated {rnd.name} (deterministic for a fixed seed).")
text = format_instance(rnd)
again = parse_instance(text)
print(f"Serialized and re-parsed: {again.dimension} cities, "
      f"coordinates preserved: {(again.coords == rnd.coords).all()}")
