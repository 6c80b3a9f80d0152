"""Exact reference-frame algebra.

Events are ``(x_1, ..., x_n, t)`` in lattice coordinates. The actual basis
``M`` has columns ``e_i = (vector(i), 1/(n+1))``, so the all-ones vector of
actual coordinates is one unit of time at rest. A boost between inertial
frames is diagonal in that basis and the frame map is ``M diag(lam) M^-1``.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .environment import check_actual_direction_count


class FrameError(ValueError):
    pass


class DegenerateFrameError(FrameError):
    def __init__(self, detail="proper-time velocity w must be positive"):
        super().__init__("degenerate frame (zero proper-time velocity): %s" % detail)


class OutsideConeError(FrameError):
    pass


@dataclass(frozen=True)
class ActualBasis:
    n: int
    M: tuple
    M_inv: tuple
    step_basis: bool = False

    @property
    def columns(self):
        return linalg.transpose(self.M)


def build_basis(dirset, step_basis=False):
    """Actual-direction basis for ``dirset``.

    ``step_basis=True`` uses the unnormalised ``e_i = (vector(i), 1)``;
    that variant is for experiments only and does not give the identity
    boost ``w = 1``.
    """
    report = check_actual_direction_count(dirset)
    if not report.ok:
        raise FrameError(str(report))
    n = dirset.dimension
    time = Fraction(1) if step_basis else Fraction(1, n + 1)
    cols = [tuple(v) + (time,) for v in dirset.vectors]
    M = linalg.columns_to_matrix(cols)
    try:
        M_inv = linalg.inverse(M)
    except ZeroDivisionError:
        raise FrameError("actual directions are linearly dependent; M is singular") from None
    return ActualBasis(n, M, M_inv, step_basis)


@dataclass(frozen=True)
class MotionParams:
    v: tuple
    w: Fraction

    @classmethod
    def of(cls, v, w):
        if not isinstance(v, (tuple, list)):
            v = (v,)
        return cls(linalg.vector(v), linalg.as_fraction(w))


@dataclass(frozen=True)
class DiagonalBoost:
    lam: tuple

    def __post_init__(self):
        lam = linalg.vector(self.lam)
        if any(x <= 0 for x in lam):
            raise OutsideConeError("boost entries must be positive, got (%s)" % linalg.fmt_vector(lam))
        object.__setattr__(self, "lam", lam)

    @classmethod
    def identity(cls, n):
        return cls(tuple(Fraction(1) for _ in range(n + 1)))


@dataclass(frozen=True)
class FrameMap:
    L: tuple
    boost: DiagonalBoost
    basis: ActualBasis

    def eigencheck(self):
        """``L e_i == lam_i e_i`` exactly for every actual direction."""
        return all(
            linalg.matvec(self.L, e) == linalg.scale(lam, e)
            for e, lam in zip(self.basis.columns, self.boost.lam)
        )


def q_coordinates(basis, event):
    return linalg.matvec(basis.M_inv, linalg.vector(event))


def lambda_from_motion(basis, v, w=None):
    """Boost whose unit of proper time lands on ``(v/w, 1/w)``.

    Accepts either ``(v, w)`` or a single :class:`MotionParams`.
    """
    motion = v if isinstance(v, MotionParams) else MotionParams.of(v, w)
    if len(motion.v) != basis.n:
        raise FrameError("velocity has %d components, frame dimension is %d" % (len(motion.v), basis.n))
    if motion.w <= 0:
        raise DegenerateFrameError("w = %s" % motion.w)
    image = tuple(x / motion.w for x in motion.v) + (1 / motion.w,)
    lam = q_coordinates(basis, image)
    if any(x <= 0 for x in lam):
        raise OutsideConeError(
            "velocity (%s) with w = %s is outside the admissible cone: lambda = (%s)"
            % (linalg.fmt_vector(motion.v), motion.w, linalg.fmt_vector(lam))
        )
    return DiagonalBoost(lam)


def motion_from_lambda(basis, boost):
    image = linalg.matvec(basis.M, boost.lam)
    a, b = image[:-1], image[-1]
    if b <= 0:
        raise DegenerateFrameError("time component %s" % b)
    return MotionParams(tuple(x / b for x in a), 1 / b)


def frame_map(basis, boost):
    L = linalg.matmul(linalg.matmul(basis.M, linalg.diag(boost.lam)), basis.M_inv)
    return FrameMap(L, boost, basis)


def compose(outer, inner):
    """Boost of the composite frame change (entrywise product)."""
    if len(outer.lam) != len(inner.lam):
        raise FrameError("cannot compose boosts of length %d and %d" % (len(outer.lam), len(inner.lam)))
    return DiagonalBoost(tuple(a * b for a, b in zip(outer.lam, inner.lam)))


def invert(boost):
    return DiagonalBoost(tuple(1 / x for x in boost.lam))


def velocity_addition(basis, first, second):
    lam = compose(lambda_from_motion(basis, first), lambda_from_motion(basis, second))
    return motion_from_lambda(basis, lam)


def velocity_addition_1d(v1, v2, w1=1, w2=1):
    """Closed form of the composed motion in one dimension."""
    v1, v2, w1, w2 = (linalg.as_fraction(x) for x in (v1, v2, w1, w2))
    den = 4 + v1 * v2
    return MotionParams((4 * (v1 + v2) / den,), 4 * w1 * w2 / den)


def reciprocity_check(basis, motion):
    """Product of the proper-time velocities seen from each frame."""
    forward = lambda_from_motion(basis, motion)
    back = motion_from_lambda(basis, invert(forward))
    return motion.w * back.w


def transform_event(fm, event):
    L = fm.L if isinstance(fm, FrameMap) else fm
    return linalg.matvec(L, linalg.vector(event))


def _slice_point(L, point, t_slice):
    n = len(L) - 1
    at_rest = linalg.matvec(L, linalg.vector(point) + (Fraction(0),))
    tick = tuple(row[n] for row in L)
    if tick[n] == 0:
        raise DegenerateFrameError("static worldline is parallel to the target time slice")
    tau = (t_slice - at_rest[n]) / tick[n]
    return tuple(a + tau * b for a, b in zip(at_rest[:n], tick[:n]))


def measure_separation(fm, p, q, t_slice=0):
    """Spatial separation, on the target slice ``t = t_slice``, of the two
    points ``p`` and ``q`` resting in the source frame."""
    L = fm.L if isinstance(fm, FrameMap) else linalg.matrix(fm)
    t_slice = linalg.as_fraction(t_slice)
    return linalg.sub(_slice_point(L, q, t_slice), _slice_point(L, p, t_slice))


def measure_length(fm, p, q, t_slice=0):
    """Length of a 1-D rod with rest endpoints ``p`` and ``q``."""
    L = fm.L if isinstance(fm, FrameMap) else linalg.matrix(fm)
    if len(L) != 2:
        raise FrameError("rod length is only defined for one spatial dimension")
    p = p if isinstance(p, (tuple, list)) else (p,)
    q = q if isinstance(q, (tuple, list)) else (q,)
    return abs(measure_separation(L, p, q, t_slice)[0])
