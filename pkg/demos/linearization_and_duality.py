# %% [markdown]
# # Linearizing at a solution
#
# The linearization of the special Lagrangian equation at a quadratic
# solution is compared with the one obtained from the dual form.

# %%
import random
from fractions import Fraction

from mongeampere import ellipticity_class, linearize, linearize_via_dual, mae_symbol, parse_poly
from mongeampere import catalog

# %%
slag = catalog.slag_3d()
phi = parse_poly("q1^2 + 3*q2^2/2 + q3^2/2", 3)  # Hessian diag(2, 3, 1)
print("residual:", mae_symbol(slag).substitute_jets(phi).to_str())

# %%
point = [Fraction(1), Fraction(0), Fraction(-1)]
direct = linearize(slag, phi, point).principal
dual = linearize_via_dual(slag, phi, point)
print("direct:", [[str(x) for x in row] for row in direct])
print("dual:  ", [[str(x) for x in row] for row in dual])
print("class: ", ellipticity_class(slag, phi, point))
