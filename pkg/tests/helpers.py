"""Seeded random scenario generation shared by the property tests."""

import random

from collective.automata import Atom, Clause, Colour, OutputRule
from collective.bodies import Body
from collective.engine import make_world, place
from collective.environment import Torus, make_standard_environment
from collective.scenario import Scenario


def random_rule(rng, m, r, cap):
    clauses = []
    for _ in range(rng.randint(0, 3)):
        atoms = []
        for _ in range(rng.randint(1, 2)):
            at_least = rng.choice([None, 1, 1, 2, cap])
            atoms.append(Atom(rng.randint(1, m), rng.randint(1, r), at_least))
        clauses.append(Clause(tuple(atoms), rng.randint(1, m)))
    return OutputRule(tuple(clauses), rng.randint(1, m))


def random_environment(rng, n=None, torus=None):
    n = n if n is not None else rng.choice([1, 1, 2, 2, 3])
    if torus is None:
        torus = rng.random() < 0.5
    if not torus:
        return make_standard_environment(n)
    if n == 1:
        return make_standard_environment(1, rng.randint(3, 9))
    sizes = [rng.randint(3, 5) for _ in range(n)]
    basis = tuple(tuple(sizes[i] if i == j else 0 for j in range(n)) for i in range(n))
    return make_standard_environment(n, Torus(basis))


def random_scenario(rng, n=None, torus=None, population=None, colours=None, cap=3, horizon=40, spread=4):
    env = random_environment(rng, n, torus)
    r = colours or rng.randint(1, 3)
    cols = tuple(Colour(i + 1, "c%d" % (i + 1), random_rule(rng, env.m, r, cap)) for i in range(r))
    k = population if population is not None else rng.randint(1, 6)
    placements = []
    for e in range(1, k + 1):
        head = [rng.randint(-spread, spread) for _ in range(env.n)]
        placements.append(place(env, e, rng.randint(1, r), head, rng.randint(1, env.m)))
    bodies = {"all": Body.of("all", range(1, k + 1))} if k else {}
    return Scenario("random", env, cols, cap, tuple(placements), bodies, horizon)


def random_world(rng, **kw):
    sc = random_scenario(rng, **kw)
    return make_world(sc.env, sc.colours, sc.placements, sc.cap)


def exchange_rule(m, other):
    """On meeting a body of colour ``other``, leave along that body's
    direction (directions are swapped, as in an elastic collision)."""
    return OutputRule(tuple(Clause((Atom(d, other, 1),), d) for d in range(1, m + 1)), 1)


def exchange_colours(m):
    return (
        Colour(1, "x", exchange_rule(m, 2)),
        Colour(2, "y", exchange_rule(m, 1)),
    )


def random_exchange_scenario(rng, n=None, horizon=240):
    """Two-colour exchange dynamics on a torus; usually periodic with turns."""
    env = random_environment(rng, n if n is not None else rng.choice([1, 1, 2]), torus=True)
    cols = exchange_colours(env.m)
    k = rng.randint(2, 4)
    placements = []
    for e in range(1, k + 1):
        head = [rng.randint(-3, 3) for _ in range(env.n)]
        colour = 1 + (e - 1) % 2 if e <= 2 else rng.randint(1, 2)
        placements.append(place(env, e, colour, head, rng.randint(1, env.m)))
    bodies = {"all": Body.of("all", range(1, k + 1))}
    return Scenario("exchange", env, cols, 3, tuple(placements), bodies, horizon)
