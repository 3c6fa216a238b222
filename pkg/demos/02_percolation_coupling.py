"""The process and oriented percolation are the same coin, flipped once.

Cell (i, t) depends on the triangle of lattice points below it.  Mark each
non-initial vertex closed with the erasure probability, keep the whole bottom
row open, and the statement "cell (i, t) is occupied" becomes "an open path
climbs from the bottom row to the apex".  With one shared randomness table the
two verdicts agree seed for seed, not just in distribution.
"""

from stavskaya import RngStream, Triangle, coupled_run, coupling_check, reachable, sample_triangle

tri = Triangle((0, 8))
print(f"triangle below apex {tri.apex}: {tri.vertex_count()} vertices\n")

sample = sample_triangle((0, 8), 0.35, RngStream(2024))
print("one sample at alpha=0.35 ('#' open, '.' closed), apex on top:")
for s in range(tri.t, -1, -1):
    row = "".join("#" if flag else "." for flag in sample.levels[s])
    print(" " * (tri.t - s) + " ".join(row))
print(f"\napex reachable: {reachable(sample)}")
print(f"process run on the same marks ends occupied: {bool(coupled_run(sample).cells[0])}")

trials, agreements = 5000, 0
for k in range(trials):
    agreements += coupling_check((0, 6), 0.3, RngStream(5, k))
print(f"\ncoupling_check agreement: {agreements}/{trials} seeded trials (exact by construction)")
