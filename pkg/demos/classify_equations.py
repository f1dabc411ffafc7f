# %% [markdown]
# # Classifying Monge-Ampere equations
#
# An equation is stored as a 2-form (two variables) or a 3-form (three
# variables) on T*R^n.  The orbit of a constant-coefficient form under the
# symplectic group is read off from exact invariants.

# %%
from mongeampere import classify, form_from_symbol, hitchin_pfaffian, hitchin_tensor, parse_form, parse_symbol
from mongeampere import catalog

# %% [markdown]
# ## Two variables
# The Pfaffian sorts 2D equations into elliptic, hyperbolic and parabolic orbits.

# %%
for label, src, pf in catalog.TABLE1_FORMS:
    print(f"{label:12s} {src:30s} pf = {classify(parse_form(src, 2)).pfaffian}")

# %% [markdown]
# ## Three variables
# The Hitchin tensor K of a 3-form squares to a multiple of the identity.

# %%
slag = catalog.slag_3d()
k = hitchin_tensor(slag)
print("lambda =", hitchin_pfaffian(slag))
print("K^2 == lambda Id:", k @ k == k.identity(3) * hitchin_pfaffian(slag))

# %%
for row, symbol, _, _ in catalog.TABLE2_SYMBOLS:
    orbit = classify(form_from_symbol(parse_symbol(symbol, 3)))
    print(row, symbol, "->", orbit.normal_form)
