# %% [markdown]
# # Generalized complex structures of 2D equations
#
# A closed 2-form in two variables gives an almost generalized complex
# structure on T + T*.  Its integrability residual vanishes exactly, and a
# sampled surface can be tested for being a generalized solution.

# %%
from mongeampere import (SampledSurface, divergent_type, gcs_from_hitchin_pair,
                         gcs_integrability_residual, generalized_solution_check, parse_poly,
                         symplectic_context)
from mongeampere import catalog
from mongeampere.gcs import residual_is_zero

# %%
w = catalog.tricomi(1, 1)
mu = divergent_type(w).mu
closed = w + symplectic_context(2).omega * mu
j = gcs_from_hitchin_pair(closed)
print("mu =", mu.to_str(("q1", "q2", "p1", "p2")))
print("J^2 = -1:", j.squares_to_minus_one(), " integrable:", residual_is_zero(gcs_integrability_residual(j)))

# %%
lap = gcs_from_hitchin_pair(catalog.laplace_2d())
grid = [(0.1 * i, 0.1 * k) for i in range(1, 4) for k in range(1, 4)]
for f in ("q1*q2", "q1^2"):
    surface = SampledSurface.graph_of_gradient(parse_poly(f, 2), grid)
    ok = all(r.passed for r in generalized_solution_check(lap, surface))
    print(f"graph of grad({f}) solves the Laplace equation:", ok)
