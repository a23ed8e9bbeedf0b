"""Points of the reduced Bruhat-Tits building of PGL_n as norm classes.

A point is a frame (ordered basis of F^n, F the base local field, stored
as an invertible matrix of ramification-one scalars) together with
sum-zero rational apartment coordinates u.  Its meaning is the additive
norm  N(v) = min_i (val(c_i) + u_i)  for v = sum c_i * (frame column i),
taken up to one additive constant: the class of a diagonalizable norm.

Equality of classes is decided by mutual evaluation: z1 equals z2 iff
N1 on z2's frame columns reproduces z2's coordinates up to one constant
c, and symmetrically with constant -c.  Soundness is the ultrametric
domination argument: agreeing on an adapted basis forces N1 >= N2 + c
everywhere, and the reverse inequality with -c pins equality.

``candidate_frames`` produces the finite deterministic apartment family
through a point used by the retraction walk: words in transpositions and
in column operations col_j += sum_i a_i * t^(k_i) * col_i, where the a_i
run over the residues of the base field (not all zero) and each k_i is
the smallest integer twist keeping the point inside the new apartment
(k_i = ceil(c_j - c_i) in the coordinates of the current frame).  Those
are the walls where apartments through the point branch; the combined
residue directions matter, a single root group per word is not enough to
detect every stalled fixed point.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction

from .gfield import GF
from .linalg import invert, matmul, matvec
from .rationals import ceil_frac, frac, parse_fraction, proj0
from .stability import GuardError
from .valfield import PuiseuxRational, format_field, parse_field, parse_scalar


class Frame:
    """An invertible n x n matrix over the base field, columns = basis."""

    __slots__ = ("matrix", "n", "field", "_inv", "_key")

    def __init__(self, matrix, _inverse=None):
        rows = [list(r) for r in matrix]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("frame must be square")
        field = None
        for row in rows:
            for a in row:
                if not isinstance(a, PuiseuxRational):
                    raise TypeError("frame entries must be PuiseuxRational")
                if not a.is_ramification_one():
                    raise ValueError(f"frame entry {a} has fractional ramification")
                if field is None or a.field.r > field.r:
                    field = a.field
        rows = [[a.lift(field, a.m).reduce_ramification().lift(field, 1) for a in row] for row in rows]
        self.matrix = tuple(tuple(r) for r in rows)
        self.n = n
        self.field = field
        if _inverse is not None:
            self._inv = tuple(
                tuple(a.lift(field, a.m).reduce_ramification().lift(field, 1) for a in row)
                for row in _inverse
            )
        else:
            # the spec invariant: exact invertibility checked at construction
            self._inv = tuple(tuple(r) for r in invert(rows))
        self._key = None

    @staticmethod
    def identity(field: GF, n: int) -> "Frame":
        one, zero = PuiseuxRational.one(field), PuiseuxRational.zero(field)
        rows = [[one if i == j else zero for j in range(n)] for i in range(n)]
        return Frame(rows, _inverse=rows)

    def inverse_matrix(self):
        return self._inv

    def column(self, j):
        return [self.matrix[i][j] for i in range(self.n)]

    def columns(self):
        return [self.column(j) for j in range(self.n)]

    def compose(self, other: "Frame") -> "Frame":
        product = matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        inverse = matmul([list(r) for r in other._inv], [list(r) for r in self._inv])
        return Frame(product, _inverse=inverse)

    def key(self):
        if self._key is None:
            self._key = tuple(tuple(hash(a) for a in row) for row in self.matrix)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Frame) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Frame(n={self.n}, {self.field!r})"


class BuildingPoint:
    """A frame plus sum-zero rational coordinates: a diagonalizable norm class."""

    __slots__ = ("frame", "coords")

    def __init__(self, frame: Frame, coords):
        coords = tuple(frac(c) for c in coords)
        if len(coords) != frame.n:
            raise ValueError(f"need {frame.n} coordinates")
        if sum(coords, Fraction(0)) != 0:
            raise ValueError("coordinates must sum to zero")
        self.frame = frame
        self.coords = coords

    @property
    def n(self):
        return self.frame.n

    def __repr__(self):
        return f"BuildingPoint({self.frame!r}, ({', '.join(str(c) for c in self.coords)}))"


def norm_eval(z: BuildingPoint, v):
    """min_i(val(c_i) + u_i) over the expansion v = sum c_i frame_i; inf at 0."""
    coeffs = matvec([list(r) for r in z.frame.inverse_matrix()], list(v))
    vals = []
    for c, u in zip(coeffs, z.coords):
        if c:
            vals.append(c.valuation() + u)
    if not vals:
        from math import inf

        return inf
    return min(vals)


def _evaluated_coords(z: BuildingPoint, frame: Frame):
    return [norm_eval(z, col) for col in frame.columns()]


def points_equal(z1: BuildingPoint, z2: BuildingPoint) -> bool:
    """Mutual-domination equality of norm classes."""
    if z1.n != z2.n:
        raise ValueError("points live in different buildings")
    a = _evaluated_coords(z1, z2.frame)
    c = a[0] - z2.coords[0]
    if any(ai - ui != c for ai, ui in zip(a, z2.coords)):
        return False
    b = _evaluated_coords(z2, z1.frame)
    cc = b[0] - z1.coords[0]
    if any(bi - ui != cc for bi, ui in zip(b, z1.coords)):
        return False
    return cc == -c


def act(g, z: BuildingPoint) -> BuildingPoint:
    """Translate the norm by g: the new class evaluates a vector v as the old
    class evaluates g.v, i.e. the frame becomes g^(-1) . frame.

    This is the convention induced by the right action on row spans through
    the covector pairing, so act(g, act(h, z)) = act(h.g, z), and it is the
    one making the retraction equivariant: the retraction of x.g is
    act(g, retraction of x)."""
    if isinstance(g, Frame):
        g = g.matrix
    ginv = invert([list(r) for r in g])
    new_frame = Frame(matmul(ginv, [list(r) for r in z.frame.matrix]))
    return BuildingPoint(new_frame, z.coords)


def normalize(z: BuildingPoint) -> BuildingPoint:
    """Identity-framed representative when the class admits one."""
    ident = Frame.identity(z.frame.field, z.n)
    coords = proj0(_evaluated_coords(z, ident))
    candidate = BuildingPoint(ident, coords)
    return candidate if points_equal(z, candidate) else z


def apartment_contains(z: BuildingPoint, frame: Frame):
    """Whether z lies in frame's apartment; returns (flag, coords in frame)."""
    coords = _evaluated_coords(z, frame)
    w = BuildingPoint(frame, proj0(coords))
    return points_equal(z, w), w.coords


def _elementary(field: GF, n: int, i: int, j: int, coeff: PuiseuxRational) -> Frame:
    return _column_op(field, n, j, [(i, coeff)])


def _transposition(field: GF, n: int, i: int, j: int) -> Frame:
    one, zero = PuiseuxRational.one(field), PuiseuxRational.zero(field)
    out = [[one if a == b else zero for b in range(n)] for a in range(n)]
    out[i][i] = out[j][j] = zero
    out[i][j] = out[j][i] = one
    return Frame(out, _inverse=out)


def _column_op(field: GF, n: int, j: int, terms) -> Frame:
    """Identity with column j receiving sum_i coeff_i * col_i."""
    one, zero = PuiseuxRational.one(field), PuiseuxRational.zero(field)
    out = [[one if a == b else zero for b in range(n)] for a in range(n)]
    inv = [list(row) for row in out]
    for i, coeff in terms:
        out[i][j] = coeff
        inv[i][j] = -coeff
    return Frame(out, _inverse=inv)


def wall_moves(z: BuildingPoint, f: Frame):
    """Wall-branching moves at f: (generator frame, kind, payload) triples.

    Transpositions come as ("perm", (i, j)); tight-twist column operations
    as ("col", (j, terms)) with terms a tuple of (i, coefficient).  Single
    root operations precede composites (they detect most moves cheaply).
    Every generated apartment contains z by the tightness of the twists.
    """
    field = z.frame.field
    n = z.n
    coords = _evaluated_coords(z, f)
    moves = []
    for i, j in itertools.combinations(range(n), 2):
        moves.append((_transposition(field, n, i, j), "perm", (i, j)))
    twists = {}
    for i, j in itertools.permutations(range(n), 2):
        twists[i, j] = PuiseuxRational.t_power(field, ceil_frac(coords[j] - coords[i]))
    for i, j in itertools.permutations(range(n), 2):
        for a in range(1, field.q):
            terms = ((i, twists[i, j] * PuiseuxRational(field, 1, (a,))),)
            moves.append((_column_op(field, n, j, terms), "col", (j, terms)))
    for j in range(n):
        others = [i for i in range(n) if i != j]
        for combo in itertools.product(range(field.q), repeat=len(others)):
            nonzero = [(i, a) for i, a in zip(others, combo) if a]
            if len(nonzero) < 2:
                continue
            terms = tuple(
                (i, twists[i, j] * PuiseuxRational(field, 1, (a,))) for i, a in nonzero)
            moves.append((_column_op(field, n, j, terms), "col", (j, terms)))
    return moves


def _wall_generators(z: BuildingPoint, f: Frame):
    return [frame for frame, _, _ in wall_moves(z, f)]


def candidate_frames(z: BuildingPoint, depth: int) -> list[Frame]:
    """Deterministic finite apartment family through z.

    Words of length <= depth in transpositions and wall-twisted column
    operations applied on the right of z's frame, deduplicated in BFS
    order and filtered to frames whose apartment contains z.
    """
    if depth < 0 or depth > 3:
        raise GuardError(f"candidate depth {depth} outside [0, 3]")
    seen = {z.frame.key()}
    words = [z.frame]
    frontier = [z.frame]
    for _ in range(depth):
        new_frontier = []
        for f in frontier:
            for gen in _wall_generators(z, f):
                nf = f.compose(gen)
                if nf.key() in seen:
                    continue
                seen.add(nf.key())
                words.append(nf)
                new_frontier.append(nf)
        frontier = new_frontier
    out = []
    for f in words:
        ok, _ = apartment_contains(z, f)
        if ok:
            out.append(f)
    return out


# -- serialization --

def building_to_json(z: BuildingPoint) -> str:
    z = normalize(z)
    doc = {
        "field": format_field(z.frame.field),
        "frame": [[str(a) for a in row] for row in z.frame.matrix],
        "coords": [str(c) for c in z.coords],
    }
    return json.dumps(doc, sort_keys=True)


def building_from_json(text: str) -> BuildingPoint:
    doc = json.loads(text)
    field = parse_field(doc["field"])
    frame = Frame([[parse_scalar(s, field) for s in row] for row in doc["frame"]])
    coords = [parse_fraction(s) for s in doc["coords"]]
    return BuildingPoint(frame, coords)
