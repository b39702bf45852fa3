"""
Persistence, repulsion and permanence probes
============================================

These sample trajectories; they give evidence, not proofs.
"""

from vertexical import Ensemble, Face, permanence_probe, persistence_probe, repulsion_probe
from vertexical.fileformat import bundled_path, read_crn

bd = read_crn(bundled_path("birth-death"))[0].system
ens = Ensemble(n_traj=20, seed=0, dt=0.2, t_end=10, h=1e-2)
rep = persistence_probe(bd, ens)
print("min distance to the cube boundary:", round(rep.min_boundary_distance, 4))

# start further and further from the vertex 0 and see how close trajectories get
origin = Face.at_vertex(["A"], (), (0,))
box = Ensemble(n_traj=10, seed=0, init_box=[[0.5, 2.0]], dt=0.5, t_end=5, h=1e-2)
table = repulsion_probe(bd, origin, [0.35, 0.45, 0.55, 0.7], box)
for d1, d2, n in zip(table.d1, table.d2, table.n_started):
    print(f"d1={d1:.2f}  d2={d2}  runs={n}")

print("0 <-> A permanent in [0.4, 2.1]:", permanence_probe(bd, [[0.9, 1.1]], [[0.4, 2.1]], box).passed)

# pure inflow runs off to infinity
zero_a = read_crn(bundled_path("zeroA"))[0].system
runaway = persistence_probe(zero_a, Ensemble(n_traj=3, dt=2e12, t_end=2e12, h=1e9))
print("aborted seeds:", runaway.aborted, [t.status for t in runaway.trajectories])
