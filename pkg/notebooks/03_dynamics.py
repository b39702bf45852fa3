"""
Simulating the mass-action inclusion
====================================

Trajectories use piecewise-constant rates drawn from the tempering, then
fixed-step RK4.
"""

import numpy as np

from vertexical import fiber_contains, lyapunov_value, sample_rate_path, simulate
from vertexical.fileformat import bundled_path, read_crn
from vertexical.network import orthogonal_residual

N = read_crn(bundled_path("birth-death"))[0].system  # 0 <-> A, both rates in [1, 2]
path = sample_rate_path(N, dt=0.5, t_end=10, seed=3, scheme="uniform-random")
traj = simulate(N, N.base_point, path, h=1e-2)
print("status", traj.status, "range", traj.states.min(), traj.states.max())

# a central-difference tangent lies in the fiber up to O(h^2)
i = 100
v = (traj.states[i + 1] - traj.states[i - 1]) / (traj.times[i + 1] - traj.times[i - 1])
print(fiber_contains(N, traj.states[i], v, tol=1e-6))

# A <-> B conserves A + B and decreases the free-energy Lyapunov function
iso = read_crn(bundled_path("isomer"))[0].system
t2 = simulate(iso, [2.0, 0.5], sample_rate_path(iso, 10, 10), h=1e-3)
print("conservation residual", max(orthogonal_residual(iso.network, t2.states[0], x) for x in t2.states))
g = np.array([lyapunov_value(x, [1.25, 1.25]) for x in t2.states])
print("g from", g[0], "to", g[-1], "max step", np.diff(g).max())
