"""
Projecting a tempered system
============================

Removing species B from the reversed Lotka-Volterra system. The rate of a
reaction whose reactant contains B picks up powers of B's allotment.
"""

from vertexical import PositiveInterval, ReactionNetwork, SubconfinedSystem, project_system, reduce_network
from vertexical.fileformat import format_crn
from vertexical.reduction import merged_reactions

net = ReactionNetwork.from_strings(["A", "B"], ["2A -> A", "2B -> A + B", "0 -> B"])
print(reduce_network(net, ["A"]))

# B is confined to [1, 2], and 2B -> A + B runs at exactly 3
N = SubconfinedSystem.build(
    net,
    rates={1: PositiveInterval.point(3)},
    allotment={"B": PositiveInterval.closed(1, 2)},
)
reduced = project_system(N, ["A"])
print(format_crn(reduced))  # 0 -> A gets [3, 3] * [1, 2]^2 = [3, 12]

# two source reactions can land on the same reduced reaction; their
# intervals are combined by hull
two = ReactionNetwork.from_strings(["A", "B"], ["A -> 0", "A + B -> B"])
N2 = SubconfinedSystem.build(two, allotment={"B": PositiveInterval.closed(1, 1.5)})
for r, sources in merged_reactions(N2, ["A"]).items():
    print(two.format_reaction(sources[0][0]), "and", two.format_reaction(sources[1][0]),
          "->", [str(k) for _, k in sources])
print(format_crn(project_system(N2, ["A"])))
