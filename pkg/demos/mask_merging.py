"""
Completing a bankcard number from masked fragments
==================================================

Services show partially masked values.  Fragments of one value with the
same length pool together; once the revealed positions cover every index,
the attacker knows the whole value.
"""

from actfort import Mask, load_ecosystem_file, mask_merge, sample_path
from actfort.tdg import effective_disclosures

# %%
# Interval masks, written as X (shown) and # (hidden).
tail = Mask.from_pattern("############XXXX")
head = Mask.from_pattern("XXXXXX##########")
middle = Mask.from_pattern("XXXXXXXXXXXX####")
print(mask_merge(tail, head).to_pattern(), mask_merge(tail, head).complete)
print(mask_merge(middle, tail).to_pattern(), mask_merge(middle, tail).complete)

# %%
# The sample ecosystem spreads those three fragments over three accounts.
e = load_ecosystem_file(sample_path("sample.json"))
for acc in e.accounts:
    for d in acc.sorted_exposures():
        if str(d.kind) == "bankcard-number":
            print(f"{acc.account_id:<13} {d.mask.to_pattern() if d.mask else 'full'}")

# %%
# Which pairs of accounts hand over the full card number?
card = next(k for a in e.accounts for k in a.exposed_kinds() if str(k) == "bankcard-number")
for pair in (("baidu-wallet", "paypal"), ("alipay", "baidu-wallet"), ("alipay", "paypal")):
    print(pair, card in effective_disclosures(e, pair))
