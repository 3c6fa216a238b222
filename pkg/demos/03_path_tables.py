"""Dual-graph path tables: enumeration and recurrence, weight by weight.

Crossings of the dual graph are counted through origin-rooted bond words over
three kinds (down-left, horizontal, up-left) with the factor rules 13, 31,
123, 321 excluded.  Each horizontal bond costs one power of alpha.  The level
tables come from two independent routes, depth-first enumeration and a local
recurrence, and agree exactly as integer polynomials.
"""

from stavskaya import (
    enumerate_nice_paths,
    finite_vertex_bound,
    generating_sum,
    iter_nice_paths,
    s_table_recurrence,
)

print("levels 1-4, entries (last bond r, endpoint i, t) -> alpha coefficients")
levels = s_table_recurrence(12)
for n in range(1, 5):
    enum = enumerate_nice_paths(n)
    assert enum == levels[n]
    rows = ", ".join(
        f"r{r}@({i},{t}):{list(poly.coefficients)}" for (r, i, t), poly in sorted(enum.items())
    )
    print(f"  n={n}: {rows}")

print("\npath counts per level (free family vs strictly self-avoiding):")
for n in (4, 5, 6, 7, 8):
    free = sum(p.total() for p in enumerate_nice_paths(n).values())
    strict = sum(p.total() for p in enumerate_nice_paths(n, self_avoiding=True).values())
    marker = "  <- first closed circuit (1 1 2 2 3 3)" if free != strict and n == 6 else ""
    print(f"  n={n}: {free} vs {strict}{marker}")

print("\nweighted sums per level at p=1.5, q=1.1, alpha=0.08:")
for n in range(1, 7):
    g = generating_sum(levels[n], 1.5, 1.1, 0.08)
    print(f"  n={n}: G = ({g[0]:.6f}, {g[1]:.6f}, {g[2]:.6f})")

fvb = finite_vertex_bound(1, 12, alpha=0.09)
print(f"\ntruncated crossing weight at endpoint (2, 0), n <= {fvb.n_max}, "
      f"alpha=0.09: {fvb.value:.8f}")

longest = max(iter_nice_paths(6), key=lambda p: p.weight_exponent)
print(f"heaviest 6-bond word: {longest.bonds}, weight alpha^{longest.weight_exponent}")
