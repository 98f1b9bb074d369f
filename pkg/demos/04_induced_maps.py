# %% [markdown]
# # Maps of R induced by matrices
#
# View R as an algebra over a field K.  The map z -> R(z,1) puts R inside
# the projective line, and an invertible matrix then acts on R as a partial
# map.  Its domain is all of R exactly when a and d are units and b lies in
# the radical.

# %%
from ringline import algebra_of, gamma_table, group_B, group_N, group_T, totality_sweep
from ringline.chaintrafo import factorization, is_affine_map
from ringline.projline import Matrix2

A = algebra_of("dual(gf(3))")
R = A.ring
sweep = totality_sweep(A)
print(f"{sweep.matrices} matrices, {sweep.invertible} invertible, {sweep.total} total, "
      f"{sweep.condition} meet the entry condition, mismatches: {len(sweep.mismatches)}")

# %%
m = Matrix2(R, "1", "e", "1+e", "2")
table = gamma_table(A, m)
for z in R.elements:
    print(f"{R.labels[z]:5s} -> {R.labels[table[z]]}")
print("affine:", is_affine_map(A, table))
print("factors:", *factorization(A, m))

# %% [markdown]
# Over GF(2) the affine test no longer separates b = 0 from b != 0.

# %%
B2 = algebra_of("dual(gf(2))")
delta = Matrix2(B2.ring, "1", "e", "0", "1+e")
print("delta acts on R as", [B2.ring.labels[w] for w in gamma_table(B2, delta)])

# %%
for desc in ["dual(gf(3))", "trunc(gf(3),3)", "upper2(gf(3))"]:
    A = algebra_of(desc)
    print(f"{desc:15s} |B|={len(group_B(A))} |T|={len(group_T(A))} |N|={len(group_N(A))}")
