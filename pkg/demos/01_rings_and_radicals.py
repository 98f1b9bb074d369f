# %% [markdown]
# # Finite rings and their radicals
#
# Rings are stored as Cayley tables over dense indices.  Descriptors name
# them compactly; labels make the elements readable.

# %%
from ringline import build_ring, jacobson_radical, quotient_ring
from ringline.radpar import is_local_ring
from ringline.rings import nil_exponent

for desc in ["zmod(4)", "zmod(6)", "dual(gf(3))", "trunc(gf(3),3)", "upper2(gf(3))", "mat2(gf(2))"]:
    R = build_ring(desc)
    rad = jacobson_radical(R)
    print(f"{desc:16s} |R|={R.size:3d} |R*|={len(R.units):3d} rad={rad!r:24s} "
          f"nil={nil_exponent(R)} local={is_local_ring(R)}")

# %% [markdown]
# The radical of the ternions (upper triangular 2x2 matrices) is spanned by
# the off-diagonal unit `e`.  Dividing it out leaves K x K.

# %%
R = build_ring("upper2(gf(3))")
Q, hom = quotient_ring(R, jacobson_radical(R))
print(Q.descriptor, Q.size, "elements, radical", jacobson_radical(Q))
print("image of j1+e:", Q.labels[hom("j1+e")])

# %%
x = R("j1+2e")
print(f"{x} * {x} = {x * x}")
print("inverse of j1+j2+e:", ~R("j1+j2+e"))
