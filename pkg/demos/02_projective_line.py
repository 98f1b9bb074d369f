# %% [markdown]
# # Points of the projective line and the distant graph
#
# A point is the orbit of an admissible pair under left multiplication by
# units.  Two points are distant when their representatives stack to an
# invertible matrix.

# %%
from ringline import build_ring, distant_graph, enumerate_points, point_of

R = build_ring("dual(gf(2))")
line = enumerate_points(R)
print(line)
for p in line:
    print(p.index, p, "orbit size", len(p.orbit))

# %%
print(point_of(R, ("1+e", "e")), "is the same point as", point_of(R, ("1", "e")))

# %%
g = distant_graph(line)
print("degrees:", g.degrees.tolist())
print(g.to_dot())

# %% [markdown]
# Sizes grow with the number of units and the size of the radical.

# %%
for desc in ["gf(5)", "zmod(8)", "dual(gf(3))", "anormal(gf(3))", "mat2(gf(2))", "upper2(gf(3))"]:
    print(f"{desc:16s} {len(enumerate_points(build_ring(desc))):4d} points")
