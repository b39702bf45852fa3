"""
Classifying reaction networks
=============================

Lotka-Volterra is the standard example of a network that is not endotactic.
Reversing all of its reactions gives a strongly endotactic network.
"""

import numpy as np

from vertexical import ReactionNetwork, classify, is_w_endotactic, w_support

lotka = ReactionNetwork.from_strings(["A", "B"], ["A -> 2A", "A + B -> 2B", "B -> 0"])
lv_rev = ReactionNetwork.from_strings(["A", "B"], ["2A -> A", "2B -> A + B", "0 -> B"])

# the decider returns a direction w in which the network sweeps outward
report = classify(lotka)
print(report.flags())
w = report.witnesses["endotactic"]
print("witness", w)

# w-support: the reactants that are furthest along w among non-orthogonal reactions
support = w_support(lotka, w)
print("essential:", [lotka.format_reaction(r) for r in support.essential])
verdict = is_w_endotactic(lotka, w)
print("violator:", lotka.format_reaction(verdict.violator))

print(classify(lv_rev).flags())

# Reversible does not imply strongly endotactic. Along w = (0, -1) the lowest
# reactants only have horizontal reactions.
standin = ReactionNetwork.from_strings(["A", "B"], ["0 <-> A", "A + B <-> 2B"])
rep = classify(standin)
print("reversible:", rep.reversible, "strongly endotactic:", rep.strongly_endotactic)
print("witness", np.round(rep.witnesses["strongly_endotactic"], 3))
