# %% [markdown]
# A double eigenvalue on the curves
#
# Curves 1 and 2 of the 3x3 example meet at (lam, mu) = (1, 0).  One-sided
# derivatives there come from the b-values of the eigenspace, and finite
# differences converge to them at first order.

# %%
from eigencurves import analysis, checks, problems

triple = problems.paper_matrix_example()
info = analysis.eigenpoint(triple, 1.0, 0.0)
print("multiplicity", info.multiplicity, "b-values", info.b_values)
print("left ", info.left_derivatives)
print("right", info.right_derivatives)

# %%
for h in (1e-2, 1e-3, 1e-4, 1e-5):
    err = checks.finite_difference_errors(triple, 1.0, 0.0, h).max()
    print(f"h={h:.0e}  error={err:.3e}")
