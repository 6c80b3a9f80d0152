"""Synchronous dynamics of stateless automata on lattice arcs."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .automata import DEFAULT_CAP, NeighbourhoodState, evaluate, is_vacuum
from .environment import Arc, LatticeCoord, canonical


@dataclass(frozen=True, slots=True)
class Placement:
    """An elementary body on an arc. ``unwrapped`` is the head vertex in
    canonical counts before any torus reduction."""

    elem_id: int
    colour: int
    arc: Arc
    unwrapped: tuple

    @property
    def winding(self):
        return tuple(u - a for u, a in zip(self.unwrapped, self.arc.head.counts))


@dataclass(frozen=True)
class WorldState:
    t: int
    placements: tuple
    env: object
    colours: tuple
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        ps = tuple(sorted(self.placements, key=lambda p: p.elem_id))
        ids = [p.elem_id for p in ps]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate elementary body ids")
        for p in ps:
            if not 1 <= p.colour <= len(self.colours):
                raise ValueError("body %d has unknown colour %d" % (p.elem_id, p.colour))
            if not 1 <= p.arc.dir <= self.env.m:
                raise ValueError("body %d has unknown direction %d" % (p.elem_id, p.arc.dir))
        object.__setattr__(self, "placements", ps)

    @property
    def r(self):
        return len(self.colours)


def place(env, elem_id, colour, head, direction):
    """Build a placement from head counts (``n`` or ``n + 1`` entries)."""
    head = tuple(int(x) for x in head)
    if len(head) == env.n:
        head = head + (0,)
    if len(head) != env.m:
        raise ValueError("head must have %d or %d counts" % (env.n, env.m))
    unwrapped = canonical(head)
    return Placement(elem_id, colour, Arc(LatticeCoord(env.reduce(unwrapped)), direction), unwrapped)


def make_world(env, colours, placements, cap=DEFAULT_CAP, t=0):
    return WorldState(t, tuple(placements), env, tuple(colours), cap)


def _occupancy(world):
    occ = {}
    m, r = world.env.m, world.r
    for p in world.placements:
        grid = occ.get(p.arc.head)
        if grid is None:
            grid = occ[p.arc.head] = [[0] * r for _ in range(m)]
        grid[p.arc.dir - 1][p.colour - 1] += 1
    return occ


def neighbourhood(world, vertex):
    grid = _occupancy(world).get(vertex)
    if grid is None:
        return NeighbourhoodState.empty(world.env.m, world.r, world.cap)
    return NeighbourhoodState.saturate(grid, world.cap)


def _decide(world, occ, p):
    nb = NeighbourhoodState.saturate(occ[p.arc.head], world.cap)
    if is_vacuum(nb, p.arc.dir):
        return p.arc.dir
    return evaluate(world.colours[p.colour - 1].rule, nb)


def _advance(world, p, d):
    c = list(p.unwrapped)
    c[d - 1] += 1
    unwrapped = canonical(c)
    return Placement(p.elem_id, p.colour, Arc(LatticeCoord(world.env.reduce(unwrapped)), d), unwrapped)


def step(world, pool=None):
    """One synchronous update. All decisions read the time-``t`` world;
    moves are applied as one batch. ``pool`` optionally parallelises the
    read phase."""
    occ = _occupancy(world)
    if pool is None:
        dirs = [_decide(world, occ, p) for p in world.placements]
    else:
        dirs = list(pool.map(lambda p: _decide(world, occ, p), world.placements))
    moved = tuple(_advance(world, p, d) for p, d in zip(world.placements, dirs))
    return WorldState(world.t + 1, moved, world.env, world.colours, world.cap)


@dataclass
class Trace:
    """Per-body direction and unwrapped head sequences for t = 0..T."""

    initial: WorldState
    final: WorldState
    dirs: dict
    heads: dict
    colour_of: dict
    max_raw_count: int = 0
    _points: dict = field(default_factory=dict, repr=False)

    @property
    def env(self):
        return self.initial.env

    @property
    def horizon(self):
        return self.final.t - self.initial.t

    @property
    def elem_ids(self):
        return sorted(self.dirs)

    def direction(self, elem_id, t):
        return self.dirs[elem_id][t]

    def turned(self, elem_id, t):
        seq = self.dirs[elem_id]
        return seq[t + 1] != seq[t]

    def turn_flags(self, elem_id):
        seq = self.dirs[elem_id]
        return tuple(a != b for a, b in zip(seq, seq[1:]))

    def arc(self, elem_id, t):
        return Arc(LatticeCoord(self.env.reduce(self.heads[elem_id][t])), self.dirs[elem_id][t])

    def tail_counts(self, elem_id, t):
        c = list(self.heads[elem_id][t])
        c[self.dirs[elem_id][t] - 1] -= 1
        return canonical(c)

    def position(self, elem_id, t):
        """Exact unwrapped lattice point at integer time (the arc's tail)."""
        key = (elem_id, t)
        pt = self._points.get(key)
        if pt is None:
            pt = self._points[key] = self.env.point(self.tail_counts(elem_id, t))
        return pt

    def world_at(self, t):
        ps = [
            Placement(e, self.colour_of[e], self.arc(e, t), self.heads[e][t]) for e in self.elem_ids
        ]
        return WorldState(self.initial.t + t, tuple(ps), self.env, self.initial.colours, self.initial.cap)


def run(world, horizon, parallel=False, workers=4):
    """Apply ``step`` ``horizon`` times and record the trace."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    dirs = {p.elem_id: [p.arc.dir] for p in world.placements}
    heads = {p.elem_id: [p.unwrapped] for p in world.placements}
    colour_of = {p.elem_id: p.colour for p in world.placements}
    max_raw = 0
    initial = world
    pool = ThreadPoolExecutor(max_workers=workers) if parallel else None
    try:
        for _ in range(horizon):
            occ = _occupancy(world)
            for grid in occ.values():
                for row in grid:
                    max_raw = max(max_raw, *row)
            world = step(world, pool)
            for p in world.placements:
                dirs[p.elem_id].append(p.arc.dir)
                heads[p.elem_id].append(p.unwrapped)
    finally:
        if pool is not None:
            pool.shutdown()
    for grid in _occupancy(world).values():
        for row in grid:
            max_raw = max(max_raw, *row)
    return Trace(
        initial,
        world,
        {e: tuple(s) for e, s in dirs.items()},
        {e: tuple(s) for e, s in heads.items()},
        colour_of,
        max_raw,
    )


def replay(initial, directions):
    """Rebuild per-step head sequences from the initial placement and the
    recorded directions alone."""
    env = initial.env
    heads = {}
    for p in initial.placements:
        seq = directions[p.elem_id]
        if seq[0] != p.arc.dir:
            raise ValueError("body %d: first direction disagrees with initial arc" % p.elem_id)
        c = p.unwrapped
        out = [c]
        for d in seq[1:]:
            c = list(c)
            c[d - 1] += 1
            c = canonical(c)
            out.append(c)
        heads[p.elem_id] = tuple(out)
    return heads


def interpolate(trace, elem_id, t_real):
    """Position at a real (rational) time: ``tail + mu * vector(dir)`` on
    the arc occupied at ``floor(t_real)``.

    Returns the exact unwrapped lattice point and its Euclidean image.
    """
    t_real = linalg.as_fraction(t_real)
    if not 0 <= t_real <= trace.horizon:
        raise ValueError("time %s outside [0, %d]" % (t_real, trace.horizon))
    t = int(t_real)  # floor for non-negative values
    mu = t_real - t
    base = trace.position(elem_id, t)
    if mu:
        vec = trace.env.dirset.vector(trace.direction(elem_id, t))
        base = tuple(b + mu * v for b, v in zip(base, vec))
    return base, trace.env.euclid_of_point(base)
