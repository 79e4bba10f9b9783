"""Witt vectors by hand: W_2(F_3) is Z/9, and the ghost map explains why."""

from wittforge.rings import ZZ, FiniteField
from wittforge.witt import build_witt_table, ghost, vector, witt_ring

F3 = FiniteField(3)
W = witt_ring(F3, 2)

one = W.one
two = W.add(one, one)
print("1 + 1 in W_2(F_3):", W.fmt(two))            # (2, 1): a carry into the second slot

# adding 1 nine times wraps around
acc = W.zero
for k in range(1, 10):
    acc = W.add(acc, one)
print("9 * 1 =", W.fmt(acc))

# over the integers the ghost components are additive
x, y = vector(ZZ, (1, 0), 3), vector(ZZ, (1, 0), 3)
print("ghost(1) =", ghost(x), " ghost(1 + 1) =", ghost(x + y))

# the second sum polynomial for p = 3, as (coefficient, exponents of a0 a1 b0 b1)
print("S_1 terms:", build_witt_table(3, 2).sum_polys[1])

# F V = p holds everywhere
three = W.from_int(3)
print("F V = 3 on all of W_2(F_3):", all(W.sigma(W.ver(a)) == W.mul(three, a) for a in W.elements()))
