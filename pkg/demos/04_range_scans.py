# %% [markdown]
# # Exhaustive scans
#
# A segmented sieve produces all five functions for a block of n at once.
# A float filter flags candidates and each candidate is re-decided exactly.

# %%
from ubv import scanner

rep = scanner.scan_sigma_star_exceptions(3, 9_699_691)
print(len(rep.exceptions), "exceptions; the last few:")
for r in rep.exceptions[-4:]:
    print(f"  {r.subject:>8}  {r.ratio.lo:.7f}")

# %%
print(scanner.scan_sigma_exp_exceptions(3, 100).exception_subjects)
print(scanner.scan_derbal(3, 10**6).exception_subjects)

# %%
# d(n) d_e(n) <= 1.3007 n log log n fails at n = 8 and holds from 9 on
dd = scanner.scan_d_dexp_exceptions(3, 10**6)
print(dd.exception_subjects, dd.extra["minculete_violations"])

# %%
print(scanner.scan_minculete(1, 10**6).ok)
