"""Exterior powers of a height-4 dimension-1 Dieudonne module and of its display."""

from wittforge import dieudonne as dd
from wittforge import display as dp
from wittforge.fixtures import make_fixture
from wittforge.semilinear import binomial

h, level = 4, 3
D = make_fixture("lubin-tate", p=3, h=h, n=level)
print(D.name, "valid:", dd.validate(D)["valid"], "connected:", dd.is_connected(D))

print(" j  rank  dim  order-exponent   (expected rank C(h,j), dim C(h-1,j-1))")
for j in range(1, h + 2):
    M = dd.exterior_power(D, j).as_module
    rank = M.rank if j <= h else 0
    dim = dd.dimension(M) if j <= h else 0
    print(f"{j:2d} {rank:5d} {dim:4d} {dd.order_exponent(M):8d}        "
          f"({binomial(h, j)}, {binomial(h - 1, j - 1)})")

# the same picture on the display side, over W_2(F_3)
d = dp.display_fixture("lubin-tate", p=3, h=h, m=2)
for r in range(1, h + 1):
    e = dp.exterior_power(d, r)
    print(f"display wedge^{r}: height {e.height}, tangent rank {e.tangent_rank}, "
          f"nilpotent {dp.nilpotence_test(e)}")
