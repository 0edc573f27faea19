# %% [markdown]
# Eigencurves of a small pencil
#
# A = tridiag(-1, 2, -1), M = I and an indefinite B.  Trace the three curves,
# look at where they go for large |lam| and write an SVG.

# %%
import sys

import numpy as np

from eigencurves import analysis, curves, formats, problems

triple = problems.paper_matrix_example()
print(triple.A, triple.B, sep="\n\n")

# %%
table = curves.trace(triple, curves.LambdaGrid.uniform(-6, 6, 241))
for lam in (-6.0, 0.0, 1.0, 6.0):
    print(f"lam={lam:5.1f}  mu={curves.slice(triple, lam).mu.round(4)}")

# %% [markdown]
# Slopes at +inf are minus the eigenvalues of B, largest first.

# %%
print("eta:", analysis.asymptotics(triple).eta)
print("eig(B):", np.linalg.eigvalsh(triple.B))

# %%
out = sys.argv[1] if len(sys.argv) > 1 else "tridiag_curves.svg"
formats.write_atomic(out, formats.trace_to_svg(table, title=triple.name))
print("wrote", out)
