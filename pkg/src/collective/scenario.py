"""Scenario files (JSON) and trace / report exports."""

import csv
import io
import json
from dataclasses import dataclass, replace
from pathlib import Path

import jsonschema

from . import linalg
from .automata import DEFAULT_CAP, Atom, Clause, Colour, OutputRule, validate_colour_set
from .bodies import Body
from .engine import make_world, place, replay, run
from .environment import (
    DirectionSet,
    Environment,
    Infinite,
    InvalidEnvironment,
    Torus,
    standard_direction_set,
)

BUNDLED = Path(__file__).parent / "scenarios"

_RATIONAL = {"anyOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}

SCHEMA = {
    "type": "object",
    "required": ["environment", "colours", "population", "horizon"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "environment": {
            "type": "object",
            "required": ["dimension"],
            "additionalProperties": False,
            "properties": {
                "dimension": {"type": "integer", "minimum": 1},
                "topology": {
                    "anyOf": [
                        {"const": "infinite"},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {"ring": {"type": "integer"}},
                            "required": ["ring"],
                        },
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "properties": {
                                "torus": {
                                    "type": "array",
                                    "items": {"type": "array", "items": {"type": "integer"}},
                                }
                            },
                            "required": ["torus"],
                        },
                    ]
                },
                "directions": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["name", "vector"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string"},
                            "vector": {"type": "array", "items": _RATIONAL},
                        },
                    },
                },
                "embedding": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
            },
        },
        "saturation_cap": {"type": "integer", "minimum": 1},
        "colours": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "rule"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "rule": {
                        "type": "object",
                        "required": ["default"],
                        "additionalProperties": False,
                        "properties": {
                            "default": {"type": "string"},
                            "clauses": {
                                "type": "array",
                                "items": {
                                    "type": "object",
                                    "required": ["when", "then"],
                                    "additionalProperties": False,
                                    "properties": {
                                        "then": {"type": "string"},
                                        "when": {
                                            "type": "array",
                                            "items": {
                                                "type": "object",
                                                "required": ["dir", "colour"],
                                                "additionalProperties": False,
                                                "properties": {
                                                    "dir": {"type": "string"},
                                                    "colour": {"type": "string"},
                                                    "at_least": {"type": "integer"},
                                                    "empty": {"const": True},
                                                },
                                            },
                                        },
                                    },
                                },
                            },
                        },
                    },
                },
            },
        },
        "population": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "colour", "head", "dir"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer"},
                    "colour": {"type": "string"},
                    "head": {"type": "array", "items": {"type": "integer"}},
                    "dir": {"type": "string"},
                },
            },
        },
        "bodies": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        },
        "horizon": {"type": "integer", "minimum": 1},
    },
}


class ScenarioError(ValueError):
    """Schema or semantic problem, with the offending field path."""

    def __init__(self, field, message):
        self.field = field
        super().__init__("%s: %s" % (field, message) if field else message)


def _path(parts):
    out = ""
    for p in parts:
        out += "[%d]" % p if isinstance(p, int) else (".%s" % p if out else p)
    return out or "<root>"


@dataclass(frozen=True)
class Scenario:
    name: str
    env: Environment
    colours: tuple
    cap: int
    placements: tuple
    bodies: dict
    horizon: int

    def world(self, cap=None):
        return make_world(self.env, self.colours, self.placements, self.cap if cap is None else cap)

    def run(self, horizon=None, cap=None, parallel=False):
        return run(self.world(cap), horizon or self.horizon, parallel=parallel)

    def body(self, name):
        try:
            return self.bodies[name]
        except KeyError:
            raise ScenarioError("bodies", "no body named %r (have %s)" % (name, sorted(self.bodies))) from None

    def colour_id(self, name):
        for c in self.colours:
            if c.name == name:
                return c.id
        raise KeyError(name)

    def translated(self, counts):
        """Same scenario with every initial head shifted by ``counts``."""
        counts = tuple(counts) + (0,) * (self.env.m - len(counts))
        moved = tuple(
            place(self.env, p.elem_id, p.colour, linalg.add(p.unwrapped, counts), p.arc.dir)
            for p in self.placements
        )
        return replace(self, placements=moved)


def parse_scenario(data):
    """Build a :class:`Scenario` from decoded JSON, or raise ScenarioError."""
    validator = jsonschema.Draft7Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ScenarioError(_path(err.absolute_path), err.message)

    e = data["environment"]
    n = e["dimension"]
    if "directions" in e:
        dirs = e["directions"]
        try:
            dirset = DirectionSet.from_vectors([d["vector"] for d in dirs], [d["name"] for d in dirs])
        except (InvalidEnvironment, ValueError, ZeroDivisionError) as exc:
            raise ScenarioError("environment.directions", str(exc)) from None
        if dirset.dimension != n:
            raise ScenarioError("environment.directions", "vectors must have %d components" % n)
    else:
        dirset = standard_direction_set(n)
    topo = e.get("topology", "infinite")
    try:
        if topo == "infinite":
            topology = Infinite()
        elif "ring" in topo:
            if n != 1:
                raise ScenarioError("environment.topology.ring", "a ring needs dimension 1")
            topology = Torus.ring(topo["ring"])
        else:
            topology = Torus(tuple(tuple(r) for r in topo["torus"]))
        env = Environment(dirset, topology, e.get("embedding"))
    except InvalidEnvironment as exc:
        raise ScenarioError("environment", str(exc)) from None

    cap = data.get("saturation_cap", DEFAULT_CAP)
    colour_names = [c["name"] for c in data["colours"]]
    if len(set(colour_names)) != len(colour_names):
        raise ScenarioError("colours", "colour names must be unique")
    cid = {name: i + 1 for i, name in enumerate(colour_names)}

    def dir_id(name, where):
        try:
            return dirset.id_of(name)
        except KeyError:
            raise ScenarioError(where, "unknown direction %r (have %s)" % (name, list(dirset.names))) from None

    def colour_ref(name, where):
        if name not in cid:
            raise ScenarioError(where, "unknown colour %r" % name)
        return cid[name]

    colours = []
    for i, c in enumerate(data["colours"]):
        base = "colours[%d].rule" % i
        rule = c["rule"]
        clauses = []
        for k, cl in enumerate(rule.get("clauses", [])):
            atoms = []
            for a, atom in enumerate(cl["when"]):
                where = "%s.clauses[%d].when[%d]" % (base, k, a)
                if ("at_least" in atom) == ("empty" in atom):
                    raise ScenarioError(where, "give exactly one of 'at_least' or 'empty'")
                atoms.append(
                    Atom(dir_id(atom["dir"], where + ".dir"), colour_ref(atom["colour"], where + ".colour"),
                         atom.get("at_least"))
                )
            clauses.append(Clause(tuple(atoms), dir_id(cl["then"], "%s.clauses[%d].then" % (base, k))))
        colours.append(Colour(i + 1, c["name"], OutputRule(tuple(clauses), dir_id(rule["default"], base + ".default"))))
    report = validate_colour_set(colours, env, cap)
    if not report.ok:
        raise ScenarioError("colours", "; ".join(report.problems))

    placements = []
    seen = set()
    for i, p in enumerate(data["population"]):
        where = "population[%d]" % i
        if p["id"] in seen:
            raise ScenarioError(where + ".id", "duplicate id %d" % p["id"])
        seen.add(p["id"])
        if len(p["head"]) not in (n, n + 1):
            raise ScenarioError(where + ".head", "expected %d or %d counts" % (n, n + 1))
        placements.append(
            place(env, p["id"], colour_ref(p["colour"], where + ".colour"), p["head"], dir_id(p["dir"], where + ".dir"))
        )

    bodies = {}
    for name, ids in data.get("bodies", {}).items():
        missing = sorted(set(ids) - seen)
        if missing:
            raise ScenarioError("bodies.%s" % name, "unknown member ids %s" % missing)
        bodies[name] = Body.of(name, ids)
    return Scenario(data.get("name", ""), env, tuple(colours), cap, tuple(placements), bodies, data["horizon"])


def load_scenario(path):
    path = Path(path)
    if not path.exists():
        for cand in (BUNDLED / path, BUNDLED / (str(path) + ".json")):
            if cand.exists():
                path = cand
                break
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", "%s: invalid JSON at line %d column %d: %s" % (path, exc.lineno, exc.colno, exc.msg)) from None
    return parse_scenario(data)


def bundled_scenarios():
    return sorted(BUNDLED.glob("*.json"))


def _num(x):
    s = "%.12g" % x
    return "0" if s == "-0" else s


def trace_rows(trace, colours):
    """Rows ordered by elem_id, then t."""
    env = trace.env
    names = {c.id: c.name for c in colours}
    rows = []
    for e in trace.elem_ids:
        flags = trace.turn_flags(e)
        for t in range(trace.horizon + 1):
            arc = trace.arc(e, t)
            x = env.euclid_of_point(trace.position(e, t))
            row = {
                "t": t,
                "elem_id": e,
                "colour": names[trace.colour_of[e]],
                "arc_head": str(arc.head),
                "dir": env.dirset.name(arc.dir),
                "turned": int(flags[t]) if t < len(flags) else 0,
            }
            for k, xk in enumerate(x, start=1):
                row["x_euclid_%d" % k] = _num(xk)
            rows.append(row)
    return rows


def trace_csv(trace, colours):
    rows = trace_rows(trace, colours)
    fields = ["t", "elem_id", "colour", "arc_head", "dir", "turned"] + [
        "x_euclid_%d" % k for k in range(1, trace.env.n + 1)
    ]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def trace_jsonl(trace, colours):
    lines = []
    for row in trace_rows(trace, colours):
        row = {k: (float(v) if k.startswith("x_euclid") else v) for k, v in row.items()}
        lines.append(json.dumps(row))
    return "\n".join(lines) + "\n" if lines else ""


def kinematics_csv(rows, body_name):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "body", "xB", "vB", "changed_state", "codirected"])
    for r in rows:
        writer.writerow([
            r.t,
            body_name,
            linalg.fmt_vector(r.x, ";"),
            linalg.fmt_vector(r.v, ";"),
            int(r.changed_external_state),
            int(r.all_parts_codirected),
        ])
    return buf.getvalue()


def verify_trace_csv(scenario, text):
    """Check a trace CSV against the scenario's initial placement.

    Arc heads are rebuilt from the recorded directions alone and the turn
    flags are recomputed from the direction sequences. Returns a list of
    mismatch descriptions (empty when the file is consistent).
    """
    env = scenario.env
    reader = csv.DictReader(io.StringIO(text))
    per_elem = {}
    for row in reader:
        per_elem.setdefault(int(row["elem_id"]), []).append(row)
    problems = []
    initial = scenario.world()
    expected_ids = sorted(p.elem_id for p in initial.placements)
    if sorted(per_elem) != expected_ids:
        return ["elementary body ids %s do not match scenario %s" % (sorted(per_elem), expected_ids)]
    directions = {}
    for e, rows in per_elem.items():
        rows.sort(key=lambda r: int(r["t"]))
        if [int(r["t"]) for r in rows] != list(range(len(rows))):
            problems.append("body %d: times are not contiguous from 0" % e)
            continue
        directions[e] = [env.dirset.id_of(r["dir"]) for r in rows]
    if problems:
        return problems
    heads = replay(initial, directions)
    for e, rows in per_elem.items():
        seq = directions[e]
        for t, row in enumerate(rows):
            expect_turn = int(t + 1 < len(seq) and seq[t + 1] != seq[t])
            if int(row["turned"]) != expect_turn:
                problems.append("body %d t=%d: turned=%s, directions imply %d" % (e, t, row["turned"], expect_turn))
            head = ";".join(str(c) for c in env.reduce(heads[e][t]))
            if row["arc_head"] != head:
                problems.append("body %d t=%d: arc_head %s, replay gives %s" % (e, t, row["arc_head"], head))
    return problems
