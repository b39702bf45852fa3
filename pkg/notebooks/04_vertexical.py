"""
Checking the vertexical factorization
=====================================

Near the face A = 0 of the cube, the A-coordinate of a trajectory of the
reversed Lotka-Volterra system should be a trajectory of the reduced
one-species system, with B's range folded into the rates.
"""

from vertexical import ReactionNetwork, SubconfinedSystem, simulate, verify_factorization
from vertexical.dynamics import RatePath
from vertexical.fileformat import bundled_path, read_crn

N = SubconfinedSystem.build(ReactionNetwork.from_strings(["A", "B"], ["2A -> A", "2B -> A + B", "0 -> B"]))

for h in (2e-3, 1e-3, 5e-4):
    traj = simulate(N, [0.01, 1.0], RatePath.constant([1, 1, 1], 0.5), 0.5, h)
    rep = verify_factorization(N, traj, ["A"], eps=0.1, tol=1e-4)
    print(f"h={h:g}  segments={rep.segments}  residual={rep.max_residual:.1e}  "
          f"tangent error={rep.max_tangent_error:.2e}")

# negative control: a reduced system whose inflow rate is far too small
tampered = read_crn(bundled_path("lv-rev-keepA-tampered"))[0].system
rep = verify_factorization(N, traj, ["A"], eps=0.1, tol=1e-4, reduced=tampered)
print("tampered pass:", rep.passed, "residual:", round(rep.max_residual, 3))
