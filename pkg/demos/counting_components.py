# %% [markdown]
# Counting the pieces of {mu_n > level}
#
# For each curve n the set where it sits above a level splits into K_n
# intervals.  K_1 <= 1, K_n <= n and the partial sums stay below n.  The
# brute-force scan on a 10x finer grid should give the same numbers.

# %%
from eigencurves import fixtures, geometry, problems

triple = problems.random_triple(5, seed=0, b_profile="indefinite")
levels = fixtures.default_levels(triple)
grid = fixtures.covering_grid(triple, levels)

result = geometry.verify_counting(triple, grid, levels)
print("all invariants hold:", result.ok)
for report in result.reports:
    print(f"level {report.mu_star:10.4f}  K = {report.counts}  S = {report.partial_sums.tolist()}")

# %% [markdown]
# The straight-line version: mu = alpha lam + beta becomes a level after shifting B.

# %%
tilted = geometry.transform_line(triple, 0.5)
levels = fixtures.default_levels(tilted)
print(geometry.verify_counting(tilted, fixtures.covering_grid(tilted, levels), levels).ok)
