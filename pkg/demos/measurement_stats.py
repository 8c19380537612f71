"""
Measurement statistics for an ecosystem
=======================================

The aggregate view: how many accounts an SMS code alone opens, which
factors paths rely on, what personal information is on display, and how
deep in the dependency graph each account sits.
"""

from actfort import classify_all, compute_stats, load_ecosystem_file, sample_path

e = load_ecosystem_file(sample_path("sample.json"))
r = compute_stats(e)

# %%
print(f"{r.account_count} accounts, {r.path_count} declared paths")
print(f"{'group':<8}{'accounts':>9}{'sign-in':>9}{'reset':>8}{'either':>8}")
for group, row in r.sms_only.items():
    print(f"{group:<8}{row.accounts:>9}{row.sign_in:>9.2f}{row.reset:>8.2f}{row.total:>8.2f}")

# %%
# Factor usage is a share of paths; exposure is a share of accounts.
for kind, share in sorted(r.factor_usage.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  uses {kind:<18}{share:6.2f}%")
for kind, share in sorted(r.info_exposure.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  shows {kind:<17}{share:6.2f}%")
print("path classes:", dict(r.path_classes))

# %%
for acc, dc in classify_all(e).items():
    print(f"  {acc:<13}{dc.cls.value:<17}minimal depth {dc.minimal_depth}")
