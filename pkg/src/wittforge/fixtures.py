"""Named Dieudonne-module fixtures."""

from .dieudonne import DieudonneModule, default_scalar
from .rings import GaloisRing, RamifiedChainRing, TruncPolyRing, FiniteField
from .semilinear import identity, scalar, mat_scale

FIXTURES = ("lubin-tate", "supersingular-e-curve", "etale-h", "multiplicative-h")


def coefficient_ring(p, n, s=1, char="classical", eisenstein=None):
    """W(F_{p^s})/p^n, W(F_{p^s}) (x) O / pi^n, or F_{p^s}[t]/t^n."""
    if char == "equal":
        return TruncPolyRing(FiniteField(p, s), n, "t")
    if char != "classical":
        raise ValueError(f"unknown characteristic setting {char!r}")
    if eisenstein is not None and len(eisenstein) > 2:
        return RamifiedChainRing(p, s, tuple(eisenstein), n)
    return GaloisRing(p, s, n)


def _companion(R, h, c):
    """e_i -> e_{i+1}, e_h -> c e_1."""
    A = [[R.zero] * h for _ in range(h)]
    for i in range(h - 1):
        A[i + 1][i] = R.one
    A[0][h - 1] = c
    return tuple(map(tuple, A))


def _companion_dual(R, h, c):
    """c times the inverse of the companion matrix: e_1 -> e_h, e_{i+1} -> c e_i."""
    A = [[R.zero] * h for _ in range(h)]
    A[h - 1][0] = R.one
    for i in range(h - 1):
        A[i][i + 1] = c
    return tuple(map(tuple, A))


def pi_element(R):
    """The uniformizer of the coefficient ring's O (p when unramified)."""
    if isinstance(R, (RamifiedChainRing, TruncPolyRing)):
        return R.uniformizer
    return R.from_int(R.p)


def p_over_pi(R):
    if isinstance(R, RamifiedChainRing):
        return R.p_over_pi
    return R.one


def lubin_tate(R, h, f=1):
    """V^f is the companion of x^h - pi on the first component."""
    c, pi = default_scalar(R), pi_element(R)
    Fd = mat_scale(R, p_over_pi(R), _companion_dual(R, h, pi))
    if f < 1:
        raise ValueError("f must be positive")
    if f == 1:
        return DieudonneModule(R, (Fd,), (_companion(R, h, pi),), c, f"lubin-tate h={h}")
    Id = identity(R, h)
    V = tuple([Id] * (f - 1) + [_companion(R, h, pi)])
    F = tuple([scalar(R, h, c)] * (f - 1) + [Fd])
    return DieudonneModule(R, F, V, c, f"lubin-tate h={h} f={f}")


def supersingular(R, f=1):
    c = default_scalar(R)
    A = ((R.zero, R.one), (c, R.zero))
    return DieudonneModule(R, (A,) * f, (A,) * f, c, "supersingular-e-curve")


def etale(R, h, f=1):
    c = default_scalar(R)
    return DieudonneModule(R, (scalar(R, h, c),) * f, (identity(R, h),) * f, c, f"etale h={h}")


def multiplicative(R, h, f=1):
    c = default_scalar(R)
    return DieudonneModule(R, (identity(R, h),) * f, (scalar(R, h, c),) * f, c,
                           f"multiplicative h={h}")


def make_fixture(name, p=3, h=2, n=1, f=1, s=None, char="classical", eisenstein=None):
    s = f if s is None else s
    if s % f:
        raise ValueError("the residue field must contain F_q")
    if char == "equal" and f != 1:
        raise ValueError("equal characteristic fixtures use f = 1")
    R = coefficient_ring(p, n, s, char, eisenstein)
    if name == "lubin-tate":
        return lubin_tate(R, h, f)
    if name == "supersingular-e-curve":
        return supersingular(R, f)
    if name == "etale-h":
        return etale(R, h, f)
    if name == "multiplicative-h":
        return multiplicative(R, h, f)
    raise KeyError(f"unknown fixture {name!r}")
