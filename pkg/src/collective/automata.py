"""Colours of stateless automata and their output rules.

A colour is an isomorphism class of stateless Mealy automata. Its only
behaviour is the output map from a (saturated) neighbourhood count matrix
to a direction.
"""

from dataclasses import dataclass

from .environment import ValidationReport

DEFAULT_CAP = 3


@dataclass(frozen=True)
class Atom:
    """``counts[direction][colour] >= at_least``, or ``== 0`` when
    ``at_least`` is None."""

    direction: int
    colour: int
    at_least: int = None

    def holds(self, nb):
        c = nb.count(self.direction, self.colour)
        if self.at_least is None:
            return c == 0
        return c >= self.at_least


@dataclass(frozen=True)
class Clause:
    atoms: tuple
    direction: int

    def matches(self, nb):
        return all(a.holds(nb) for a in self.atoms)


@dataclass(frozen=True)
class OutputRule:
    clauses: tuple
    default: int

    @classmethod
    def constant(cls, direction):
        return cls((), direction)


@dataclass(frozen=True)
class Colour:
    id: int
    name: str
    rule: OutputRule


@dataclass(frozen=True)
class NeighbourhoodState:
    """Saturated ``m x r`` count matrix; ``counts[i-1][j-1]`` is the number
    of colour-``j`` bodies on the direction-``i`` arc into the vertex."""

    counts: tuple
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.cap < 1:
            raise ValueError("saturation cap must be positive")
        if any(c < 0 or c > self.cap for row in self.counts for c in row):
            raise ValueError("neighbourhood counts must lie in [0, %d]" % self.cap)

    @classmethod
    def saturate(cls, raw, cap=DEFAULT_CAP):
        return cls(tuple(tuple(min(cap, c) for c in row) for row in raw), cap)

    @classmethod
    def empty(cls, m, r, cap=DEFAULT_CAP):
        return cls(tuple((0,) * r for _ in range(m)), cap)

    @property
    def m(self):
        return len(self.counts)

    @property
    def r(self):
        return len(self.counts[0]) if self.counts else 0

    def count(self, direction, colour):
        return self.counts[direction - 1][colour - 1]


def evaluate(rule, nb):
    """Output direction: first matching clause wins, else the default."""
    for clause in rule.clauses:
        for a in clause.atoms:
            if not (1 <= a.direction <= nb.m and 1 <= a.colour <= nb.r):
                raise ValueError(
                    "rule references direction %d / colour %d outside a %dx%d neighbourhood"
                    % (a.direction, a.colour, nb.m, nb.r)
                )
        if clause.matches(nb):
            return clause.direction
    return rule.default


def is_vacuum(nb, own_dir):
    """True when every arc intersecting the body's own arc is empty.

    Bodies sharing the body's own arc do not intersect it and are ignored.
    """
    return all(
        c == 0 for d, row in enumerate(nb.counts, start=1) if d != own_dir for c in row
    )


def validate_colour_set(colours, env, cap=DEFAULT_CAP):
    problems = []
    r = len(colours)
    m = env.m
    ids = [c.id for c in colours]
    if ids != list(range(1, r + 1)):
        problems.append("colour ids must be contiguous from 1, got %s" % ids)
    names = [c.name for c in colours]
    if len(set(names)) != len(names):
        problems.append("colour names must be unique")
    for colour in colours:
        rule = colour.rule
        where = "colour %s" % colour.name
        if not 1 <= rule.default <= m:
            problems.append("%s: default direction %d out of range 1..%d" % (where, rule.default, m))
        for k, clause in enumerate(rule.clauses, start=1):
            if not 1 <= clause.direction <= m:
                problems.append("%s clause %d: output direction %d out of range" % (where, k, clause.direction))
            for atom in clause.atoms:
                if not 1 <= atom.direction <= m:
                    problems.append("%s clause %d: guard direction %d out of range" % (where, k, atom.direction))
                if not 1 <= atom.colour <= r:
                    problems.append(
                        "%s clause %d: guard references colour %d of %d" % (where, k, atom.colour, r)
                    )
                if atom.at_least is not None:
                    if atom.at_least < 1:
                        problems.append("%s clause %d: threshold must be >= 1" % (where, k))
                    elif atom.at_least > cap:
                        problems.append(
                            "%s clause %d: unreachable guard (threshold %d > cap %d)"
                            % (where, k, atom.at_least, cap)
                        )
    return ValidationReport(tuple(problems))

