"""
Finite-dimensional DGLAs given by structure constants, and semicosimplicial
diagrams of them.

Elements are tuples of QQ coordinates in the declared basis. Matrices are row
lists: column j holds the image of basis vector j.
"""

import os
import json
import logging
from itertools import product

from sympy import QQ

from modules.polycalc.grammar import to_rational, format_rational
from modules.tot_cech.linalg import mat_mul, mat_vec

logger = logging.getLogger(__name__)

FIXTURES_DIR = os.environ.get(
    "COISOCALC_FIXTURES",
    os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), "fixtures"),
)


def _sign(e):
    return -1 if e % 2 else 1


class FinDGLA:

    def __init__(self, degrees, differential=None, brackets=None, name=""):
        self.name = name
        self.degrees = tuple(int(d) for d in degrees)
        self.dim = len(self.degrees)
        n = self.dim
        if differential is None:
            differential = [[QQ(0)] * n for _ in range(n)]
        self.differential = [[QQ.convert(c) for c in row] for row in differential]
        if len(self.differential) != n or any(len(row) != n for row in self.differential):
            raise ValueError(f"{name}: differential must be a {n}x{n} matrix")
        self._brackets = {}
        for (i, j), value in (brackets or {}).items():
            vec = self._vector(value)
            self._brackets[(i, j)] = vec
        for (i, j), vec in list(self._brackets.items()):
            mirror = self.scale(-_sign(self.degrees[i] * self.degrees[j]), vec)
            if (j, i) in self._brackets:
                if self._brackets[(j, i)] != mirror:
                    raise ValueError(f"{name}: bracket table is not graded antisymmetric at ({i}, {j})")
            else:
                self._brackets[(j, i)] = mirror

    def _vector(self, value):
        if isinstance(value, dict):
            vec = [QQ(0)] * self.dim
            for k, c in value.items():
                vec[int(k)] = QQ.convert(c)
            return tuple(vec)
        vec = tuple(QQ.convert(c) for c in value)
        if len(vec) != self.dim:
            raise ValueError(f"{self.name}: vector of length {len(vec)} in a {self.dim}-dimensional algebra")
        return vec

    # vector-space structure

    def zero(self):
        return (QQ(0),) * self.dim

    def basis(self, i):
        v = [QQ(0)] * self.dim
        v[i] = QQ(1)
        return tuple(v)

    def add(self, u, v):
        return tuple(a + b for a, b in zip(u, v))

    def sub(self, u, v):
        return tuple(a - b for a, b in zip(u, v))

    def scale(self, c, v):
        c = QQ.convert(c)
        return tuple(c * a for a in v)

    def is_zero(self, v):
        return not any(v)

    def degree(self, v):
        """Degree of a nonzero homogeneous element."""
        degs = {self.degrees[i] for i, c in enumerate(v) if c}
        if len(degs) != 1:
            raise ValueError(f"{self.name}: element is zero or not homogeneous")
        return degs.pop()

    def homogeneous_parts(self, v):
        parts = {}
        for i, c in enumerate(v):
            if c:
                parts.setdefault(self.degrees[i], [QQ(0)] * self.dim)[i] = c
        return {k: tuple(p) for k, p in parts.items()}

    def basis_of_degree(self, k):
        return [i for i, d in enumerate(self.degrees) if d == k]

    # DGLA structure

    def d(self, v):
        return tuple(mat_vec(self.differential, v))

    def bracket_basis(self, i, j):
        return self._brackets.get((i, j))

    def bracket(self, u, v):
        out = [QQ(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                vec = self._brackets.get((i, j))
                if vec is None:
                    continue
                ab = a * b
                for k, c in enumerate(vec):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def is_abelian(self):
        return all(not any(v) for v in self._brackets.values())

    def validate(self):
        """d² = 0, degrees respected, antisymmetry, Jacobi, Leibniz; raises ValueError on the first failure."""
        n = self.dim
        if any(any(row) for row in mat_mul(self.differential, self.differential, n)):
            raise ValueError(f"{self.name}: d² ≠ 0")
        for j in range(n):
            for i, c in enumerate(row[j] for row in self.differential):
                if c and self.degrees[i] != self.degrees[j] + 1:
                    raise ValueError(f"{self.name}: d does not have degree +1 on basis vector {j}")
        for (i, j), vec in self._brackets.items():
            for k, c in enumerate(vec):
                if c and self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise ValueError(f"{self.name}: bracket [{i}, {j}] has the wrong degree")
        basis = [self.basis(i) for i in range(n)]
        for i, j, k in product(range(n), repeat=3):
            a, b, c = basis[i], basis[j], basis[k]
            da, db = self.degrees[i], self.degrees[j]
            lhs = self.bracket(a, self.bracket(b, c))
            rhs = self.add(self.bracket(self.bracket(a, b), c),
                           self.scale(_sign(da * db), self.bracket(b, self.bracket(a, c))))
            if lhs != rhs:
                raise ValueError(f"{self.name}: Jacobi fails on basis ({i}, {j}, {k})")
        for i, j in product(range(n), repeat=2):
            a, b = basis[i], basis[j]
            lhs = self.d(self.bracket(a, b))
            rhs = self.add(self.bracket(self.d(a), b),
                           self.scale(_sign(self.degrees[i]), self.bracket(a, self.d(b))))
            if lhs != rhs:
                raise ValueError(f"{self.name}: d is not a derivation on basis ({i}, {j})")
        return True

    def to_json(self):
        brackets = []
        for (i, j), vec in sorted(self._brackets.items()):
            if i <= j and any(vec):
                brackets.append({"pair": [i, j],
                                 "value": {str(k): format_rational(c) for k, c in enumerate(vec) if c}})
        return {
            "degrees": list(self.degrees),
            "differential": [[format_rational(c) for c in row] for row in self.differential],
            "brackets": brackets,
        }

    @classmethod
    def from_json(cls, doc, name=""):
        brackets = {}
        for entry in doc.get("brackets", []):
            i, j = (int(x) for x in entry["pair"])
            value = entry["value"]
            if isinstance(value, dict):
                value = {k: to_rational(c) for k, c in value.items()}
            else:
                value = [to_rational(c) for c in value]
            brackets[(i, j)] = value
        dim = len(doc["degrees"])
        differential = doc.get("differential")
        if differential is not None:
            differential = matrix_from_json(differential, dim, dim)
        return cls(doc["degrees"], differential, brackets, name=name)


def matrix_from_json(value, nrows, ncols):
    """
    Dense row lists, or the sparse form {"entries": [[row, col, "c"], ...]}
    with every other entry zero.
    """
    if isinstance(value, dict):
        out = [[QQ(0)] * ncols for _ in range(nrows)]
        for i, j, c in value.get("entries", []):
            if not (0 <= int(i) < nrows and 0 <= int(j) < ncols):
                raise ValueError(f"matrix entry ({i}, {j}) outside a {nrows}x{ncols} matrix")
            out[int(i)][int(j)] = to_rational(c)
        return out
    rows = [[to_rational(c) for c in row] for row in value]
    if len(rows) != nrows or any(len(row) != ncols for row in rows):
        raise ValueError(f"expected a {nrows}x{ncols} matrix")
    return rows


def check_morphism(source, target, matrix, name="morphism"):
    """Raise ValueError unless matrix is a degree-preserving map commuting with d and brackets."""
    rows = len(matrix)
    if rows != target.dim or any(len(row) != source.dim for row in matrix):
        raise ValueError(f"{name}: expected a {target.dim}x{source.dim} matrix")
    for j in range(source.dim):
        for i in range(target.dim):
            if matrix[i][j] and target.degrees[i] != source.degrees[j]:
                raise ValueError(f"{name}: does not preserve degrees at basis vector {j}")
    basis = [source.basis(i) for i in range(source.dim)]
    for j, b in enumerate(basis):
        if tuple(mat_vec(matrix, source.d(b))) != target.d(tuple(mat_vec(matrix, b))):
            raise ValueError(f"{name}: does not commute with d at basis vector {j}")
    for i, j in product(range(source.dim), repeat=2):
        lhs = tuple(mat_vec(matrix, source.bracket(basis[i], basis[j])))
        rhs = target.bracket(tuple(mat_vec(matrix, basis[i])), tuple(mat_vec(matrix, basis[j])))
        if lhs != rhs:
            raise ValueError(f"{name}: does not preserve the bracket on ({i}, {j})")
    return True


class ScsDGLA:
    """
    Semicosimplicial DGLA L_0 ⇉ L_1 ⇶ L_2 ... truncated at level m.
    faces[n][k] is the matrix of ∂_k: L_{n-1} → L_n (faces[0] is empty).
    """

    def __init__(self, levels, faces, name=""):
        self.name = name
        self.levels = list(levels)
        self.faces = [[[[QQ.convert(c) for c in row] for row in m] for m in fs] for fs in faces]
        if len(self.faces) < len(self.levels):
            self.faces += [[] for _ in range(len(self.levels) - len(self.faces))]
        for n in range(1, len(self.levels)):
            if len(self.faces[n]) != n + 1:
                raise ValueError(f"{name}: level {n} needs {n + 1} face maps, got {len(self.faces[n])}")

    @property
    def top(self):
        return len(self.levels) - 1

    def face(self, n, k, v):
        """∂_k applied to v ∈ L_{n-1}."""
        return tuple(mat_vec(self.faces[n][k], v))

    def face_power0(self, n, v):
        """∂_0^n applied to v ∈ L_0, landing in L_n."""
        for level in range(1, n + 1):
            v = self.face(level, 0, v)
        return v

    def total_dim(self):
        return sum(level.dim for level in self.levels)

    def validate(self):
        for n, level in enumerate(self.levels):
            level.validate()
            if n:
                for k in range(n + 1):
                    check_morphism(self.levels[n - 1], level, self.faces[n][k], f"{self.name} ∂_{k} at level {n}")
        for n in range(1, self.top):
            for k in range(n + 1):
                for l in range(k + 1):
                    lhs = mat_mul(self.faces[n + 1][l], self.faces[n][k], self.levels[n].dim)
                    rhs = mat_mul(self.faces[n + 1][k + 1], self.faces[n][l], self.levels[n].dim)
                    if lhs != rhs:
                        raise ValueError(f"{self.name}: ∂_{l}∂_{k} ≠ ∂_{k + 1}∂_{l} from level {n - 1}")
        logger.debug(f"Validated semicosimplicial DGLA {self.name} with {len(self.levels)} levels")
        return True

    def is_equalizer(self, x):
        if self.top < 1:
            return True
        return self.face(1, 0, x) == self.face(1, 1, x)

    def to_json(self):
        return {
            "name": self.name,
            "levels": [level.to_json() for level in self.levels],
            "faces": [[[[format_rational(c) for c in row] for row in m] for m in fs] for fs in self.faces],
        }

    @classmethod
    def from_json(cls, doc):
        name = doc.get("name", "")
        levels = [FinDGLA.from_json(level, name=f"{name}[{n}]") for n, level in enumerate(doc["levels"])]
        faces = [[]]
        for n, fs in enumerate(doc.get("faces", [])[1:], start=1):
            shape = (levels[n].dim, levels[n - 1].dim)
            faces.append([matrix_from_json(m, *shape) for m in fs])
        return cls(levels, faces, name=name)


def load_fixture(name):
    """Load the JSON fixture `name` from FIXTURES_DIR; names that resolve outside it are rejected."""
    if not isinstance(name, str) or not name:
        raise ValueError(f"fixture must be a name or an inline document, got {type(name).__name__}")
    if os.path.basename(name) != name or name.startswith("."):
        raise ValueError(f"invalid fixture name: {name!r}")
    path = os.path.join(os.path.abspath(FIXTURES_DIR), f"{name}.json")
    if os.path.abspath(path) != os.path.normpath(path):
        raise ValueError(f"invalid fixture name: {name!r}")
    if not os.path.isfile(path):
        raise FileNotFoundError(f"fixture not found: {name}")
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    logger.info(f"Loaded fixture {doc.get('name', name)} from {path}")
    return doc


def load_scs(name):
    scs = ScsDGLA.from_json(load_fixture(name))
    scs.validate()
    return scs


def _select(matrix, rows, cols):
    return [[matrix[i][j] for j in cols] for i in rows]


def sub_diagram(scs, keep):
    """The sub-diagram spanned by basis vectors keep[n] at each level; must be closed under d, brackets and faces."""
    levels = []
    for n, level in enumerate(scs.levels):
        idx = list(keep[n])
        pos = {i: p for p, i in enumerate(idx)}
        diff = _select(level.differential, idx, idx)
        for j in idx:
            for i, c in enumerate(row[j] for row in level.differential):
                if c and i not in pos:
                    raise ValueError(f"level {n}: d leaves the sub-diagram at basis vector {j}")
        brackets = {}
        for a in idx:
            for b in idx:
                vec = level.bracket_basis(a, b)
                if vec is None:
                    continue
                if any(c and k not in pos for k, c in enumerate(vec)):
                    raise ValueError(f"level {n}: bracket leaves the sub-diagram at ({a}, {b})")
                brackets[(pos[a], pos[b])] = [vec[k] for k in idx]
        levels.append(FinDGLA([level.degrees[i] for i in idx], diff, brackets, name=f"{level.name}/sub"))
    faces = [[]]
    for n in range(1, len(scs.levels)):
        fs = []
        for k, m in enumerate(scs.faces[n]):
            for j in keep[n - 1]:
                for i, c in enumerate(row[j] for row in m):
                    if c and i not in keep[n]:
                        raise ValueError(f"∂_{k} at level {n} leaves the sub-diagram")
            fs.append(_select(m, list(keep[n]), list(keep[n - 1])))
        faces.append(fs)
    return ScsDGLA(levels, faces, name=f"{scs.name}/sub")


def quotient_diagram(scs, keep):
    """
    The quotient by the sub-diagram spanned by keep[n]; uses the complementary
    basis vectors as representatives. keep must span a bracket ideal at
    every level.
    """
    sub_diagram(scs, keep)
    levels = []
    rest_all = []
    for n, level in enumerate(scs.levels):
        kept = set(keep[n])
        for a in kept:
            for b in range(level.dim):
                for vec in (level.bracket_basis(a, b), level.bracket_basis(b, a)):
                    if vec is not None and any(c and k not in kept for k, c in enumerate(vec)):
                        raise ValueError(f"level {n}: span of {sorted(kept)} is not an ideal, [{a}, {b}] leaves it")
        rest = [i for i in range(level.dim) if i not in kept]
        rest_all.append(rest)
        brackets = {}
        for a in rest:
            for b in rest:
                vec = level.bracket_basis(a, b)
                if vec is not None:
                    brackets[(rest.index(a), rest.index(b))] = [vec[k] for k in rest]
        levels.append(FinDGLA([level.degrees[i] for i in rest],
                              _select(level.differential, rest, rest), brackets,
                              name=f"{level.name}/quot"))
    faces = [[]]
    for n in range(1, len(scs.levels)):
        faces.append([_select(m, rest_all[n], rest_all[n - 1]) for m in scs.faces[n]])
    return ScsDGLA(levels, faces, name=f"{scs.name}/quot")
