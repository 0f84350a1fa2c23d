# %% [markdown]
# # Primorials
#
# sigma*(n)/n is largest on primorials N_k, so the bound reduces to checking
# prod(1 + 1/p) / log theta(p_k) for every k. The first million k are summed
# directly; beyond that an explicit analytic bound takes over.

# %%
from ubv import verifier
from ubv.sieve import primes_up_to

table = primes_up_to(verifier.TAIL_PRIME)
for k in range(2, 11):
    rec = verifier.primorial_ratio(k, table)
    print(k, f"{rec.ratio.mid:.6f}", rec.verdict.value)

# %%
rep = verifier.verify_primorial_range(8, 10**6, "1.3007", table)
print(rep.total, "checked,", len(rep.exceptions), "violations, max at k =", rep.max_ratio.subject)
print(f"took {rep.runtime_ms / 1e3:.1f} s")

# %%
cert = verifier.asymptotic_tail_certificate("1.3007")
print(cert.summary())
print(cert.monotonicity_argument)

# %%
# the floor e^B cannot be certified this way
try:
    verifier.asymptotic_tail_certificate("1.29887")
except verifier.CertificateError as exc:
    print("rejected:", exc)
