"""Bodies: finite sets of elementary bodies, their kinematics, external
state bookkeeping, periodicity and proper time."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg

DEFAULT_PERIOD_HORIZON = 4096


@dataclass(frozen=True)
class Body:
    name: str
    members: frozenset

    @classmethod
    def of(cls, name, members):
        members = frozenset(int(m) for m in members)
        if not members:
            raise ValueError("a body needs at least one elementary body")
        return cls(name, members)

    @property
    def ids(self):
        return sorted(self.members)


def _check_members(trace, body):
    missing = body.members - set(trace.dirs)
    if missing:
        raise KeyError("body %s: unknown members %s" % (body.name, sorted(missing)))


def _check_time(trace, t, need_next=False):
    last = trace.horizon - 1 if need_next else trace.horizon
    if not 0 <= t <= last:
        raise IndexError("time %d outside recorded horizon [0, %d]" % (t, last))


def avg_position(trace, body, t):
    """Mean of the members' exact positions at integer time ``t``."""
    _check_members(trace, body)
    _check_time(trace, t)
    k = len(body.members)
    pts = [trace.position(e, t) for e in body.ids]
    return tuple(sum(c, Fraction(0)) / k for c in zip(*pts))


def velocity(trace, body, t):
    _check_time(trace, t, need_next=True)
    return linalg.sub(avg_position(trace, body, t + 1), avg_position(trace, body, t))


def changes_external_state(trace, body, t):
    """True iff some member turns at ``t`` (its proper time advances)."""
    _check_members(trace, body)
    _check_time(trace, t, need_next=True)
    return any(trace.turned(e, t) for e in body.ids)


def codirected(trace, body, t):
    _check_members(trace, body)
    return len({trace.direction(e, t) for e in body.ids}) == 1


def euclidean_speed(trace, body, t):
    return float(np.linalg.norm(trace.env.euclid_of_point(velocity(trace, body, t))))


@dataclass(frozen=True)
class KinematicsRow:
    t: int
    x: tuple
    v: tuple
    changed_external_state: bool
    all_parts_codirected: bool


def kinematics(trace, body):
    return [
        KinematicsRow(
            t,
            avg_position(trace, body, t),
            velocity(trace, body, t),
            changes_external_state(trace, body, t),
            codirected(trace, body, t),
        )
        for t in range(trace.horizon)
    ]


def snapshot(trace, body, t):
    """Multiset of (colour, unwrapped position, direction), sorted."""
    _check_members(trace, body)
    return tuple(
        sorted((trace.colour_of[e], trace.position(e, t), trace.direction(e, t)) for e in body.ids)
    )


def configuration(trace, body, t):
    """Translation-invariant key plus the least member position it is
    relative to."""
    snap = snapshot(trace, body, t)
    least = min(pos for _, pos, _ in snap)
    key = tuple(sorted((c, linalg.sub(pos, least), d) for c, pos, d in snap))
    return key, least


def _shift(snap, dirset, k):
    return tuple(
        sorted((c, tuple(p + k * v for p, v in zip(pos, dirset.vector(d))), d) for c, pos, d in snap)
    )


def same_external_state(snap_a, snap_b, dirset, k_max=None):
    """Is ``snap_b`` reached from ``snap_a`` by moving every element ``k``
    steps straight along its own direction? Returns ``(found, k)``; a
    negative ``k`` means ``snap_b`` is behind ``snap_a``."""
    snap_a, snap_b = tuple(sorted(snap_a)), tuple(sorted(snap_b))
    if len(snap_a) != len(snap_b):
        return False, None
    if sorted((c, d) for c, _, d in snap_a) != sorted((c, d) for c, _, d in snap_b):
        return False, None
    if k_max is None:
        coords = [pos for _, pos, _ in snap_a + snap_b]
        spread = max((max(c) - min(c) for c in zip(*coords)), default=0)
        k_max = 4 * max(1, int(spread))
    for k in range(0, k_max + 1):
        for kk in ((k, -k) if k else (0,)):
            if _shift(snap_a, dirset, kk) == snap_b:
                return True, kk
    return False, None


@dataclass(frozen=True)
class PeriodicityCertificate:
    """``configuration(t + period) == configuration(t)`` shifted by
    ``displacement`` for every ``t0 <= t <= horizon - period``."""

    period: int
    displacement: tuple
    t0: int
    turns: int
    horizon: int

    @property
    def velocity(self):
        return tuple(Fraction(d) / self.period for d in self.displacement)

    @property
    def degenerate(self):
        return self.turns == 0


def detect_period(trace, body, max_period=None):
    """Periodicity certificate with the earliest onset ``t0`` (then the
    smallest period), or None.

    A candidate must hold on ``[t0, horizon - period]`` and that window
    must contain at least one full period.
    """
    _check_members(trace, body)
    horizon = trace.horizon
    if max_period is None:
        max_period = horizon // 2
    max_period = min(max_period, horizon // 2)
    keys, leasts = [], []
    ids = {}
    for t in range(horizon + 1):
        key, least = configuration(trace, body, t)
        keys.append(ids.setdefault(key, len(ids)))
        leasts.append(least)
    best = None
    for period in range(1, max_period + 1):
        last = horizon - period
        delta = linalg.sub(leasts[horizon], leasts[last])
        t = last
        while t >= 0 and keys[t] == keys[t + period] and linalg.sub(leasts[t + period], leasts[t]) == delta:
            t -= 1
        t0 = t + 1
        if t0 <= horizon - 2 * period and (best is None or t0 < best[0]):
            best = (t0, period, delta)
            if t0 == 0:
                break
    if best is None:
        return None
    t0, period, delta = best
    turns = sum(trace.turned(e, s) for e in body.ids for s in range(t0, t0 + period))
    return PeriodicityCertificate(period, delta, t0, turns, horizon)


def verify_certificate(trace, body, cert):
    for t in range(cert.t0, trace.horizon - cert.period + 1):
        k0, l0 = configuration(trace, body, t)
        k1, l1 = configuration(trace, body, t + cert.period)
        if k0 != k1 or linalg.sub(l1, l0) != tuple(cert.displacement):
            return False
    return True


@dataclass(frozen=True)
class ProperTimeAssignment:
    tau_per_period: Fraction
    period: int
    w: Fraction
    t0: int

    @property
    def degenerate(self):
        return self.w == 0

    def tau_at(self, t):
        """Proper time elapsed since the onset ``t0``."""
        return self.w * (t - self.t0)


def assign_proper_time(cert, tau_per_period=1):
    """Uniform proper-time velocity ``tau_per_period / period``; a body
    that never turns over its period gets the degenerate ``w = 0``."""
    tau = linalg.as_fraction(tau_per_period)
    if tau <= 0:
        raise ValueError("tau_per_period must be positive, got %s" % tau)
    if cert.degenerate:
        return ProperTimeAssignment(tau, cert.period, Fraction(0), cert.t0)
    return ProperTimeAssignment(tau, cert.period, tau / cert.period, cert.t0)
