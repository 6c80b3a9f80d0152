"""Direction-regular lattice environments.

A vertex is stored as an integer vector of direction step counts taken
modulo ``(1, ..., 1)``: since the direction vectors sum to zero, stepping
once along every direction returns to the same point. The canonical
representative has its last count equal to zero. Euclidean coordinates
only exist for export and plotting.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
import math

import numpy as np

from . import linalg

EMBEDDING_TOL = 1e-12


class InvalidEnvironment(ValueError):
    """Raised for an invalid direction set or torus basis."""


@dataclass(frozen=True)
class ValidationReport:
    """Report-style result: ``ok`` when there are no problems."""

    problems: tuple = ()

    @property
    def ok(self):
        return not self.problems

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join("violation: %s" % p for p in self.problems)


@dataclass(frozen=True)
class DirectionSet:
    dimension: int
    vectors: tuple
    names: tuple

    @classmethod
    def from_vectors(cls, vectors, names=None):
        vecs = tuple(linalg.vector(v) for v in vectors)
        if not vecs:
            raise InvalidEnvironment("direction set is empty")
        n = len(vecs[0])
        if any(len(v) != n for v in vecs):
            raise InvalidEnvironment("direction vectors have mixed dimensions")
        if names is None:
            names = tuple("d%d" % (i + 1) for i in range(len(vecs)))
        names = tuple(names)
        if len(names) != len(vecs) or len(set(names)) != len(names):
            raise InvalidEnvironment("direction names must be unique, one per vector")
        return cls(n, vecs, names)

    @property
    def m(self):
        return len(self.vectors)

    @property
    def ids(self):
        return range(1, self.m + 1)

    def vector(self, d):
        return self.vectors[d - 1]

    def name(self, d):
        return self.names[d - 1]

    def id_of(self, name):
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise KeyError("unknown direction %r" % (name,)) from None


def standard_direction_set(n):
    """The ``n`` unit coordinate vectors followed by ``(-1, ..., -1)``."""
    if n < 1:
        raise InvalidEnvironment("dimension must be >= 1, got %r" % (n,))
    vecs = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    vecs.append(tuple(-1 for _ in range(n)))
    names = ("R", "L") if n == 1 else None
    return DirectionSet.from_vectors(vecs, names)


def check_actual_direction_count(dirset):
    """Check the conditions under which inertial frames can be related by
    affine maps: exactly ``n + 1`` distinct, nonzero directions summing to
    zero, every ``n`` of which are linearly independent."""
    n, m = dirset.dimension, dirset.m
    problems = []
    if m != n + 1:
        problems.append(
            "m != n+1: %d actual directions in dimension %d, need exactly %d "
            "(outdegree of every vertex must be n+1)" % (m, n, n + 1)
        )
    zero = tuple(Fraction(0) for _ in range(n))
    if any(v == zero for v in dirset.vectors):
        problems.append("zero/dependent directions: a direction vector is zero")
    if len(set(dirset.vectors)) != m:
        problems.append("directions are not pairwise distinct")
    total = tuple(sum(c) for c in zip(*dirset.vectors))
    if total != zero:
        problems.append("directions do not sum to zero (sum = (%s))" % linalg.fmt_vector(total))
    if m >= n:
        for subset in combinations(range(m), n):
            cols = [dirset.vectors[i] for i in subset]
            if linalg.det(linalg.columns_to_matrix(cols)) == 0:
                names = ", ".join(dirset.names[i] for i in subset)
                problems.append("zero/dependent directions: {%s} are linearly dependent" % names)
                break
    else:
        problems.append("zero/dependent directions: fewer than n directions cannot span the space")
    return ValidationReport(tuple(problems))


@dataclass(frozen=True, slots=True)
class LatticeCoord:
    counts: tuple

    @classmethod
    def of(cls, counts):
        last = counts[-1]
        return cls(tuple(c - last for c in counts))

    def __add__(self, other):
        return LatticeCoord.of(tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __str__(self):
        return ";".join(str(c) for c in self.counts)


def canonical(counts):
    last = counts[-1]
    return tuple(c - last for c in counts)


@dataclass(frozen=True, slots=True)
class Arc:
    head: LatticeCoord
    dir: int


@dataclass(frozen=True)
class Infinite:
    pass


@dataclass(frozen=True)
class Torus:
    """Quotient by the sublattice spanned by ``basis``.

    Basis vectors are given in canonical count coordinates without the
    trailing zero (for the standard direction set these are plain lattice
    coordinates).
    """

    basis: tuple
    _triangular: tuple = field(default=(), compare=False, repr=False)

    @classmethod
    def ring(cls, length):
        return cls(((int(length),),))

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", basis)
        n = len(basis)
        if n == 0 or any(len(row) != n for row in basis):
            raise InvalidEnvironment("torus basis must be n vectors of length n")
        if n == 1 and abs(basis[0][0]) < 2:
            raise InvalidEnvironment("ring circumference must be >= 2, got %d" % abs(basis[0][0]))
        object.__setattr__(self, "_triangular", _upper_triangular(basis))

    @property
    def size(self):
        return math.prod(row[i] for i, row in enumerate(self._triangular))

    def reduce(self, c):
        c = list(c)
        for i, row in enumerate(self._triangular):
            q = c[i] // row[i]
            if q:
                for j in range(i, len(c)):
                    c[j] -= q * row[j]
        return tuple(c)


def _upper_triangular(rows):
    """Integer row reduction to an upper triangular basis with positive
    diagonal (same lattice)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    for col in range(n):
        while True:
            live = [r for r in range(col, n) if rows[r][col] != 0]
            if not live:
                raise InvalidEnvironment("torus basis vectors are linearly dependent")
            piv = min(live, key=lambda r: abs(rows[r][col]))
            rows[col], rows[piv] = rows[piv], rows[col]
            done = True
            for r in range(col + 1, n):
                if rows[r][col]:
                    q = rows[r][col] // rows[col][col]
                    rows[r] = [a - q * b for a, b in zip(rows[r], rows[col])]
                    if rows[r][col]:
                        done = False
            if done:
                break
        if rows[col][col] < 0:
            rows[col] = [-a for a in rows[col]]
    return tuple(tuple(r) for r in rows)


def simplex_embedding(n):
    """``n + 1`` unit vectors in R^n summing to zero; the first is e_1."""
    m = n + 1
    centred = np.eye(m) - 1.0 / m
    basis = []
    for u in centred[:n]:
        w = u - sum(np.dot(u, q) * q for q in basis)
        basis.append(w / np.linalg.norm(w))
    q = np.array(basis)
    emb = centred @ q.T
    emb /= np.linalg.norm(emb, axis=1)[:, None]
    emb[np.abs(emb) < 1e-15] = 0.0
    return tuple(tuple(float(x) for x in row) for row in emb)


@dataclass(frozen=True)
class Environment:
    dirset: DirectionSet
    topology: object = Infinite()
    embedding: tuple = None

    def __post_init__(self):
        report = check_actual_direction_count(self.dirset)
        if not report.ok:
            raise InvalidEnvironment(str(report))
        n = self.dirset.dimension
        if isinstance(self.topology, Torus) and len(self.topology.basis) != n:
            raise InvalidEnvironment("torus basis has %d vectors, dimension is %d" % (len(self.topology.basis), n))
        emb = self.embedding
        if emb is None:
            emb = simplex_embedding(n)
        emb = tuple(tuple(float(x) for x in row) for row in emb)
        arr = np.array(emb)
        if arr.shape != (n + 1, n):
            raise InvalidEnvironment("embedding must have one %d-vector per direction" % n)
        if np.any(np.abs(np.linalg.norm(arr, axis=1) - 1.0) > EMBEDDING_TOL):
            raise InvalidEnvironment("embedding vectors must have unit length")
        if np.any(np.abs(arr.sum(axis=0)) > EMBEDDING_TOL):
            raise InvalidEnvironment("embedding vectors must sum to zero")
        object.__setattr__(self, "embedding", emb)
        # lattice point -> Euclidean point, via the first n directions
        first = linalg.columns_to_matrix(self.dirset.vectors[:n])
        inv = np.array(linalg.inverse(first), dtype=float)
        object.__setattr__(self, "_point_to_euclid", arr[:n].T @ inv)
        integral = all(x.denominator == 1 for v in self.dirset.vectors for x in v)
        int_vecs = tuple(tuple(int(x) for x in v) for v in self.dirset.vectors) if integral else None
        object.__setattr__(self, "_int_vectors", int_vecs)

    @property
    def n(self):
        return self.dirset.dimension

    @property
    def m(self):
        return self.dirset.m

    @property
    def is_torus(self):
        return isinstance(self.topology, Torus)

    def unit(self, d):
        """Count vector of a single step along direction ``d``."""
        return tuple(int(i == d - 1) for i in range(self.m))

    def reduce(self, counts):
        """Canonical, quotient-reduced count vector."""
        c = canonical(counts)
        if self.is_torus:
            return self.topology.reduce(c[:-1]) + (0,)
        return c

    def coord(self, counts):
        return LatticeCoord(self.reduce(counts))

    def step_vertex(self, v, d):
        c = list(v.counts)
        c[d - 1] += 1
        return LatticeCoord(self.reduce(c))

    def tail(self, arc):
        c = list(arc.head.counts)
        c[arc.dir - 1] -= 1
        return LatticeCoord(self.reduce(c))

    def point(self, counts):
        """Exact lattice point ``sum_i counts_i * vector(i)``."""
        if isinstance(counts, LatticeCoord):
            counts = counts.counts
        n = self.n
        if self._int_vectors is not None:
            # ints are exact rationals and hash/compare equal to Fractions
            vecs = self._int_vectors
            return tuple(sum(c * v[k] for c, v in zip(counts, vecs)) for k in range(n))
        return tuple(
            sum((c * v[k] for c, v in zip(counts, self.dirset.vectors)), Fraction(0)) for k in range(n)
        )

    def euclidean_position(self, v):
        counts = v.counts if isinstance(v, LatticeCoord) else v
        arr = np.array(self.embedding)
        return tuple(float(x) for x in np.asarray(counts, dtype=float) @ arr)

    def euclid_of_point(self, point):
        """Euclidean image of an exact lattice point (export only)."""
        return tuple(float(x) for x in self._point_to_euclid @ np.array([float(p) for p in point]))

    def vertices(self):
        """All vertices of a torus environment, in canonical order."""
        if not self.is_torus:
            raise ValueError("an infinite environment has no finite vertex list")
        tri = self.topology._triangular
        ranges = [range(row[i]) for i, row in enumerate(tri)]
        out = []

        def rec(prefix, i):
            if i == len(ranges):
                out.append(LatticeCoord(self.reduce(tuple(prefix) + (0,))))
                return
            for k in ranges[i]:
                rec(prefix + [k], i + 1)

        rec([], 0)
        return sorted(set(out), key=lambda v: v.counts)

    def arcs(self):
        return [Arc(v, d) for v in self.vertices() for d in self.dirset.ids]


def make_standard_environment(n, topology=None, embedding=None):
    """Standard environment of dimension ``n``.

    ``topology`` is ``None`` (infinite lattice), a :class:`Torus`, or an int
    circumference for ``n == 1``.
    """
    if n < 1:
        raise InvalidEnvironment("dimension must be >= 1, got %r" % (n,))
    if topology is None:
        topology = Infinite()
    elif isinstance(topology, int):
        if n != 1:
            raise InvalidEnvironment("an integer circumference only describes a 1-D ring")
        topology = Torus.ring(topology)
    return Environment(standard_direction_set(n), topology, embedding)
