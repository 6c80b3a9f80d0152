"""Affine isomorphism of inertial bodies.

Each periodic body gets its own inertial frame: the frame map built from
its measured velocity and proper-time velocity, with the origin on the
body's mean worldline at absolute time 0. Members' piecewise-linear
worldlines are mapped into that frame and sampled at equal frame time.
Two bodies are in the same internal state when those samples coincide
under a colour-preserving bijection.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .bodies import assign_proper_time, avg_position, detect_period, velocity
from .frames import DegenerateFrameError, MotionParams, build_basis, frame_map, invert, lambda_from_motion


class NotInertialError(ValueError):
    """The body shows no periodic regime within the recorded horizon."""


class CoverageError(ValueError):
    pass


@dataclass(frozen=True)
class BodyFrame:
    body: object
    cert: object
    proper_time: object
    motion: MotionParams
    frame: object  # FrameMap, body frame -> absolute frame
    to_body: tuple  # matrix, absolute -> body frame
    origin: tuple  # lattice point of the mean worldline at t = 0

    @property
    def w(self):
        return self.motion.w

    @property
    def tau_period(self):
        return self.proper_time.tau_per_period


def body_frame(trace, body, cert=None, tau_per_period=1, basis=None):
    if cert is None:
        cert = detect_period(trace, body)
    if cert is None:
        raise NotInertialError("body %s has no detected period" % body.name)
    pt = assign_proper_time(cert, tau_per_period)
    if pt.degenerate:
        raise DegenerateFrameError("body %s never turns over its period" % body.name)
    if basis is None:
        basis = build_basis(trace.env.dirset)
    v = cert.velocity
    motion = MotionParams(v, pt.w)
    boost = lambda_from_motion(basis, motion)
    fm = frame_map(basis, boost)
    to_body = frame_map(basis, invert(boost)).L
    P = cert.period
    acc = [Fraction(0)] * trace.env.n
    for s in range(cert.t0, cert.t0 + P):
        x = avg_position(trace, body, s)
        acc = [a + xi - vi * s for a, xi, vi in zip(acc, x, v)]
    origin = tuple(a / P for a in acc)
    return BodyFrame(body, cert, pt, motion, fm, to_body, origin)


def _worldline(trace, elem_id, frame, t_lo, t_hi):
    """Frame-coordinate events of one member at integer times t_lo..t_hi."""
    out = []
    for t in range(t_lo, t_hi + 1):
        rel = linalg.sub(trace.position(elem_id, t), frame.origin) + (Fraction(t),)
        out.append(linalg.matvec(frame.to_body, rel))
    return out


def _sample(events, taus, tau):
    i = bisect_left(taus, tau)
    if i < len(taus) and taus[i] == tau:
        return events[i][:-1]
    if i == 0 or i == len(taus):
        raise CoverageError("frame time %s outside this worldline" % tau)
    a, b = events[i - 1], events[i]
    mu = (tau - a[-1]) / (b[-1] - a[-1])
    return tuple(x + mu * (y - x) for x, y in zip(a[:-1], b[:-1]))


@dataclass(frozen=True)
class OwnFrameSnapshot:
    tau: Fraction
    members: tuple  # sorted (colour, point, elem_id)

    @property
    def entries(self):
        return tuple((c, p) for c, p, _ in self.members)


class _FrameWorldlines:
    """Member worldlines of one body in its own frame over [t_lo, t_hi]."""

    def __init__(self, trace, body, frame, t_lo=0, t_hi=None):
        self.trace, self.body, self.frame = trace, body, frame
        t_hi = trace.horizon if t_hi is None else t_hi
        self.t_lo = t_lo
        self.events = {e: _worldline(trace, e, frame, t_lo, t_hi) for e in body.ids}
        self.taus = {e: [ev[-1] for ev in evs] for e, evs in self.events.items()}
        self.lo = max(ts[0] for ts in self.taus.values())
        self.hi = min(ts[-1] for ts in self.taus.values())

    def snapshot(self, tau):
        if not self.lo <= tau <= self.hi:
            raise CoverageError("frame time %s outside covered range [%s, %s]" % (tau, self.lo, self.hi))
        members = tuple(
            sorted(
                (self.trace.colour_of[e], _sample(self.events[e], self.taus[e], tau), e)
                for e in self.body.ids
            )
        )
        return OwnFrameSnapshot(tau, members)

    def breakpoints(self, lo, hi):
        pts = {lo}
        for ts in self.taus.values():
            pts.update(ts[bisect_left(ts, lo):bisect_right(ts, hi)])
        return sorted(p for p in pts if lo <= p < hi)


def own_frame_snapshot(trace, body, frame, tau):
    """Members' positions in the body's own frame at frame time ``tau``."""
    return _FrameWorldlines(trace, body, frame).snapshot(linalg.as_fraction(tau))


def absolute_snapshot(trace, body, t):
    """Snapshot at integer absolute time in the absolute frame."""
    members = tuple(sorted((trace.colour_of[e], trace.position(e, t), e) for e in body.ids))
    return OwnFrameSnapshot(Fraction(t), members)


@dataclass(frozen=True)
class InternalStateKey:
    text: str

    def __str__(self):
        return self.text


def internal_state_key(snapshot):
    entries = snapshot.entries if isinstance(snapshot, OwnFrameSnapshot) else tuple(snapshot)
    least = min(p for _, p in entries)
    rel = sorted((c, linalg.sub(p, least)) for c, p in entries)
    return InternalStateKey("|".join("%d@%s" % (c, linalg.fmt_vector(p, ",")) for c, p in rel))


def _period_window(wl):
    """One proper-time period of the periodic regime, as [lo, lo + W)."""
    frame = wl.frame
    t0 = frame.cert.t0
    lo = max(ts[t0 - wl.t_lo] for ts in wl.taus.values())
    hi = lo + frame.tau_period
    if hi > wl.hi:
        raise CoverageError("horizon too short to cover one proper-time period")
    return lo, hi


def _frame_worldlines_for(trace, body, frame):
    cert = frame.cert
    t_hi = min(trace.horizon, cert.t0 + 3 * cert.period + 2)
    wl = _FrameWorldlines(trace, body, frame, 0, t_hi)
    try:
        _period_window(wl)
    except CoverageError:
        wl = _FrameWorldlines(trace, body, frame, 0, trace.horizon)
    return wl


@dataclass(frozen=True)
class IsoWitness:
    phi: tuple  # (id in A, id in B) pairs
    tau_a: Fraction
    tau_b: Fraction


def _colour_multiset(trace, body):
    return sorted(trace.colour_of[e] for e in body.ids)


def affine_isomorphic(trace_a, body_a, trace_b, body_b, tau_per_period_a=1, tau_per_period_b=1):
    """First (by ``tau_a`` then ``tau_b``) pair of frame times at which the
    two bodies' own-frame snapshots coincide, or None.

    Bodies without a periodic, turning regime have no inertial frame and
    are never affine isomorphic.
    """
    if len(body_a.members) != len(body_b.members):
        return None
    if _colour_multiset(trace_a, body_a) != _colour_multiset(trace_b, body_b):
        return None
    try:
        frame_a = body_frame(trace_a, body_a, tau_per_period=tau_per_period_a)
        frame_b = body_frame(trace_b, body_b, tau_per_period=tau_per_period_b)
    except (NotInertialError, DegenerateFrameError):
        return None
    wl_a = _frame_worldlines_for(trace_a, body_a, frame_a)
    wl_b = _frame_worldlines_for(trace_b, body_b, frame_b)
    lo_b, hi_b = _period_window(wl_b)
    seen = {}
    for tau in wl_b.breakpoints(lo_b, hi_b):
        snap = wl_b.snapshot(tau)
        seen.setdefault(snap.entries, snap)
    lo_a, hi_a = _period_window(wl_a)
    for tau in wl_a.breakpoints(lo_a, hi_a):
        snap_a = wl_a.snapshot(tau)
        snap_b = seen.get(snap_a.entries)
        if snap_b is not None:
            phi = tuple(
                sorted((ea, eb) for (_, _, ea), (_, _, eb) in zip(snap_a.members, snap_b.members))
            )
            return IsoWitness(phi, snap_a.tau, snap_b.tau)
    return None


@dataclass(frozen=True)
class ExternalState:
    velocity: tuple
    internal: InternalStateKey  # None unless status is "inertial"
    status: str = "inertial"  # or "degenerate" (w = 0), "not inertial"

    @property
    def degenerate(self):
        return self.status == "degenerate"


def external_state(trace, body, t, tau_per_period=1):
    """Instantaneous velocity paired with the internal state at the body's
    proper time aligned with absolute time ``t``."""
    v = velocity(trace, body, t)
    try:
        frame = body_frame(trace, body, tau_per_period=tau_per_period)
    except DegenerateFrameError:
        return ExternalState(v, None, "degenerate")
    except NotInertialError:
        return ExternalState(v, None, "not inertial")
    wl = _FrameWorldlines(trace, body, frame)
    tau = frame.w * t
    if not wl.lo <= tau <= wl.hi:
        try:
            lo, _ = _period_window(wl)
        except CoverageError:
            return ExternalState(v, None, "not inertial")
        tau = lo + (tau - lo) % frame.tau_period
    return ExternalState(v, internal_state_key(wl.snapshot(tau)))
