# %% [markdown]
# # Rigorous enclosures
#
# Every real quantity is carried as a [lo, hi] pair of doubles rounded
# outward, so a comparison against a threshold is either certain or flagged.

# %%
from ubv import interval as iv
from ubv.analytic import BOUNDS, compute_mertens_B
from ubv.interval import DirectedValue

x = DirectedValue.exact("0.1")
print(x, x.width)
print(iv.log(x), iv.exp(x))

# %%
# Mertens' constant B from the primes below 10^6 plus a bounded tail
B = compute_mertens_B(10**6)
print(B, B.truncates_to("0.26149"), BOUNDS.B.subset_of(B))

# %%
for name in ("e_gamma", "e_B", "six_egamma_over_pi2"):
    v = getattr(BOUNDS, name)
    print(f"{name:>20}  [{v.lo!r}, {v.hi!r}]")
