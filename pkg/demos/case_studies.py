"""
Three chain-reaction takeovers
==============================

Each bundled case ecosystem encodes one takeover: an account opened by an
SMS code alone, an e-mail inbox that relays a reset code, and a travel site
that leaks the citizen ID a payment app asks for.
"""

from actfort import attack_chain, load_ecosystem_file, sample_path, victim_closure

# %%
# A phone number plus an intercepted SMS code is the default attacker.
case1 = load_ecosystem_file(sample_path("case1.json"))
print(case1.profile.capabilities)
for chain in attack_chain(case1, "baidu-wallet"):
    print("case 1:", chain)

# %%
# Gmail falls first; its inbox then supplies the e-mail code PayPal's
# reset path wants alongside the SMS code.
case2 = load_ecosystem_file(sample_path("case2.json"))
(chain,) = attack_chain(case2, "paypal")
print("case 2:", chain)
for step in chain.steps:
    gained = ", ".join(sorted(str(k) for k in step.factors_gained)) or "-"
    print(f"  {step.account_id:<8} via {step.path_id:<10} gains {gained}")

# %%
# The closure shows the same thing round by round.
for victim in victim_closure(case2).victims:
    print(f"  round {victim.round}: {victim.account_id} ({victim.path_id})")

# %%
# Ctrip shows the full citizen ID once the attacker is signed in.
case3 = load_ecosystem_file(sample_path("case3.json"))
print("case 3:", attack_chain(case3, "alipay")[0])

# %%
# Without SMS interception none of the three chains starts.
blocked = case3.with_profile(case3.profile.without_sms())
print("closure without sms:", victim_closure(blocked).victim_ids)
