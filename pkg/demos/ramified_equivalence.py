"""Moving between f = 2 Dieudonne modules with O-action and modules over W_O(k)."""

from wittforge import ramequiv as rq
from wittforge.fixtures import coefficient_ring, lubin_tate

R = coefficient_ring(3, 2, 2)          # W(F_9)/9, with O = Z_9
D = lubin_tate(R, 3, 2)
H, ambiguity = rq.H_functor(D)
print("H(D) has rank", H.rank, "and is valid:", rq.validate_ramified(H)["valid"])
print("V_pi on H(D) = V^2 on M_0:", H.V[0] == D.V_power(0, 2).matrix)

rep = rq.equivalence_roundtrip(D=D, H=H)
print("H D = id:", rep["HD_ok"], " D H ~ id:", rep["DH_ok"])

# the supersingular module has no scalar O-action as given; build it through D instead
S = rq.D_functor(rq.ramified_supersingular(R, 2))
print("D(ramified supersingular) has scalar action:", rq.scalar_action(S))

# multilinear maps: chi and Xi are inverse bijections
R1 = coefficient_ring(3, 1, 2)
D1 = lubin_tate(R1, 2, 2)
rep = rq.chi_xi_report((D1,), D1)
print("endomorphism groups have p-length", rep["log_size_D"], "and", rep["log_size_H"],
      "; chi/Xi inverse:", rep["ok"])
