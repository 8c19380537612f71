"""
Which disclosure should a service stop showing?
===============================================

``harden`` tries every single removal of an exposed kind, keeps the one
that pushes the target deepest, and repeats up to the budget.
"""

from actfort import harden, load_ecosystem_file, sample_path
from actfort.disclosure import Disclosure, FactorKind
from actfort.ecosystem import Account, AuthPath, Ecosystem, Platform, Purpose
from actfort.strategy import exhaustive_harden

# %%
case3 = load_ecosystem_file(sample_path("case3.json"))
for cut in harden(case3, "alipay"):
    print(f"hide {cut.kind} on {cut.account_id}: {cut.before.cls.value} -> {cut.after.cls.value}")

# %%
sample = load_ecosystem_file(sample_path("sample.json"))
for cut in harden(sample, "alipay-web", budget=3):
    print(f"hide {cut.kind} on {cut.account_id}: {cut.before.cls.value} -> {cut.after.cls.value}")

# %%
# Greedy search can stall.  Here either leaked kind alone keeps one reset
# path open, so no single removal changes anything, while removing both
# locks the bank out of reach.
K = FactorKind
leak = Account("leak", "Leak", "travel", Platform.WEB,
               (AuthPath("sms", Purpose.SIGN_IN, frozenset({K("phone-number"), K("sms-code")})),),
               frozenset({Disclosure(K("citizen-id")), Disclosure(K("real-name"))}))
bank = Account("bank", "Bank", "fintech", Platform.MOBILE,
               (AuthPath("by-id", Purpose.PASSWORD_RESET, frozenset({K("sms-code"), K("citizen-id")})),
                AuthPath("by-name", Purpose.PASSWORD_RESET, frozenset({K("sms-code"), K("real-name")}))))
e = Ecosystem((leak, bank))
print("greedy:", harden(e, "bank", budget=2))
best, cuts = exhaustive_harden(e, "bank", 2)
print("exhaustive:", best.cls.value, [f"{a}/{k}" for a, k in cuts])
