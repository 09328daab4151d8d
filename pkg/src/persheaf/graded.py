"""Free graded modules over F[t] and the graded reduction to barcodes.

A graded matrix stores scalar entries only; the t-power of entry (i, j)
is implied by the generator degrees, column minus row.  Kernels come
from column reduction in increasing column degree, which only ever adds
earlier columns into later ones and so stays homogeneous.  Torsion is
read off a diagonalization whose pivots take the smallest implied power
first; every elimination re-checks the degree constraint and raises if
it would need a negative power, which no valid input can trigger.
"""

from __future__ import annotations

import numpy as np

from .complexes import FilteredComplex, incidence_sign
from .linalg import Field, matrix, zeros
from .persistence import Barcode
from .sheaves import CellularSheaf, SheafDiagram, _codim1_pairs

__all__ = [
    "NotFreeError",
    "GradedFreeModule",
    "HomogeneousMatrix",
    "GradedComplex",
    "GradedChainComplex",
    "GradedSheaf",
    "GradedCosheaf",
    "validate_graded_sheaf",
    "validate_graded_cosheaf",
    "graded_cochain_complex",
    "graded_chain_complex",
    "graded_barcode",
    "graded_homology_barcode",
    "diagram_to_graded_sheaf",
    "diagram_graded_barcode",
    "evaluate_at",
    "evaluate_sheaf_at",
    "SlicedComplex",
]


class NotFreeError(ValueError):
    """Raised when a diagram step has a kernel, so graded stalks are not free."""


def _unit_column(n: int, i: int) -> np.ndarray:
    col = zeros(n, 1)
    col[i, 0] = 1
    return col


class GradedFreeModule:
    """A free F[t]-module described by its generator degrees."""

    def __init__(self, degrees=()):
        self.degrees = tuple(int(d) for d in degrees)
        if any(d < 0 for d in self.degrees):
            raise ValueError("generator degrees must be nonnegative")

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and other.degrees == self.degrees

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return f"GradedFreeModule({list(self.degrees)})"


class HomogeneousMatrix:
    """Scalar part of a degree-0 map between free graded modules.

    Entry (i, j) stands for scalar * t**(col_deg[j] - row_deg[i]); a
    nonzero scalar below a higher-degree row would need a negative
    power and is rejected.
    """

    def __init__(self, field: Field, scalar, row_degrees, col_degrees):
        self.field = field
        self.scalar = matrix(scalar, field.p)
        self.row_degrees = tuple(int(d) for d in row_degrees)
        self.col_degrees = tuple(int(d) for d in col_degrees)
        want = (len(self.row_degrees), len(self.col_degrees))
        if self.scalar.shape != want:
            raise ValueError(f"scalar shape {self.scalar.shape}, degrees want {want}")
        rz, cz = np.nonzero(self.scalar)
        for i, j in zip(rz, cz):
            if self.col_degrees[int(j)] < self.row_degrees[int(i)]:
                raise ValueError(
                    f"entry ({int(i)}, {int(j)}) would need a negative t-power"
                )

    @property
    def shape(self):
        return self.scalar.shape

    def compose(self, other: "HomogeneousMatrix") -> "HomogeneousMatrix":
        """self after other; plain scalar product, degrees from the outside."""
        if other.row_degrees != self.col_degrees:
            raise ValueError("inner degrees do not match")
        return HomogeneousMatrix(
            self.field,
            self.field.matmul(self.scalar, other.scalar),
            self.row_degrees,
            other.col_degrees,
        )


def _zero_hom(field, target: GradedFreeModule, source: GradedFreeModule):
    return HomogeneousMatrix(
        field, zeros(target.rank, source.rank), target.degrees, source.degrees
    )


class GradedComplex:
    """Graded spaces in ascending positions with maps d_k: k -> k+1."""

    def __init__(self, field: Field, spaces, maps):
        self.field = field
        self.spaces = tuple(spaces)
        self.maps = tuple(maps)
        if len(self.maps) != max(len(self.spaces) - 1, 0):
            raise ValueError("need one map per consecutive pair of spaces")
        for k, m in enumerate(self.maps):
            if m.col_degrees != self.spaces[k].degrees:
                raise ValueError(f"map {k} source degrees disagree")
            if m.row_degrees != self.spaces[k + 1].degrees:
                raise ValueError(f"map {k} target degrees disagree")
        for k in range(len(self.maps) - 1):
            comp = field.matmul(self.maps[k + 1].scalar, self.maps[k].scalar)
            if comp.any():
                raise ValueError(f"maps {k} and {k + 1} do not compose to zero")

    @property
    def top(self) -> int:
        return len(self.spaces) - 1

    def space(self, k: int) -> GradedFreeModule:
        if 0 <= k < len(self.spaces):
            return self.spaces[k]
        return GradedFreeModule(())

    def map_out(self, k: int) -> HomogeneousMatrix:
        """d_k as stored, or the zero map with the right degrees."""
        if 0 <= k < len(self.maps):
            return self.maps[k]
        return _zero_hom(self.field, self.space(k + 1), self.space(k))


class GradedChainComplex:
    """Graded spaces with boundaries running down: boundary(k): k -> k-1."""

    def __init__(self, field: Field, spaces, boundaries):
        self.field = field
        self.spaces = tuple(spaces)
        self.boundaries = tuple(boundaries)
        if len(self.boundaries) != max(len(self.spaces) - 1, 0):
            raise ValueError("need one boundary per consecutive pair of spaces")
        for i, m in enumerate(self.boundaries):
            if m.col_degrees != self.spaces[i + 1].degrees:
                raise ValueError(f"boundary into position {i} has wrong source")
            if m.row_degrees != self.spaces[i].degrees:
                raise ValueError(f"boundary into position {i} has wrong target")
        for i in range(len(self.boundaries) - 1):
            comp = field.matmul(self.boundaries[i].scalar, self.boundaries[i + 1].scalar)
            if comp.any():
                raise ValueError(
                    f"boundaries {i + 1} and {i} do not compose to zero"
                )

    @property
    def top(self) -> int:
        return len(self.spaces) - 1

    def space(self, k: int) -> GradedFreeModule:
        if 0 <= k < len(self.spaces):
            return self.spaces[k]
        return GradedFreeModule(())

    def boundary(self, k: int) -> HomogeneousMatrix:
        """The map k -> k-1 as stored, or zero with the right degrees."""
        if 1 <= k < len(self.spaces):
            return self.boundaries[k - 1]
        return _zero_hom(self.field, self.space(k - 1), self.space(k))


def _graded_kernel(field: Field, scalar, col_degrees):
    """Homogeneous kernel basis of a graded map, with generator degrees.

    Columns are reduced in increasing (degree, position) order by
    lowest-nonzero-row pivots; zero columns' tracked combinations form
    the kernel basis, each of the degree of the column it reduced.
    """
    p = field.p
    scalar = field.normalize(scalar)
    n = scalar.shape[1]
    order = sorted(range(n), key=lambda j: (col_degrees[j], j))
    r = scalar[:, order].copy()
    v = zeros(n, n)
    for pos, j in enumerate(order):
        v[j, pos] = 1
    owner: dict[int, int] = {}
    for pos in range(n):
        while True:
            nz = np.nonzero(r[:, pos])[0]
            if nz.size == 0:
                break
            low = int(nz[-1])
            other = owner.get(low)
            if other is None:
                owner[low] = pos
                break
            coef = (int(r[low, pos]) * field.inv(r[low, other])) % p
            r[:, pos] = (r[:, pos] - coef * r[:, other]) % p
            v[:, pos] = (v[:, pos] - coef * v[:, other]) % p
    kept = [pos for pos in range(n) if not r[:, pos].any()]
    basis = v[:, kept].copy()
    kdeg = tuple(col_degrees[order[pos]] for pos in kept)
    rz, cz = np.nonzero(basis)
    for i, j in zip(rz, cz):
        if col_degrees[int(i)] > kdeg[int(j)]:
            raise AssertionError("reduction produced an inhomogeneous kernel column")
    return basis, kdeg


def _graded_snf_bars(field: Field, rel, row_degrees, col_degrees):
    """Bars of the module presented by rel over generators of row_degrees.

    Pivots take the entry of smallest implied power (ties by position).
    By that minimality every other nonzero row of the pivot column has
    lower or equal degree, so clearing the column with row operations
    is homogeneous; the pivot column is then isolated, so clearing the
    pivot row cannot disturb anything else.
    """
    p = field.p
    x = field.normalize(rel).copy()
    nr, nc = x.shape
    act_r = set(range(nr))
    act_c = set(range(nc))
    bars = []
    while True:
        best = None
        for i in sorted(act_r):
            row = x[i]
            for j in sorted(act_c):
                if row[j]:
                    key = (col_degrees[j] - row_degrees[i], i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        pw, i, j = best
        if pw < 0:
            raise AssertionError("presentation entry with a negative implied power")
        pivot_inv = field.inv(x[i, j])
        for i2 in sorted(act_r):
            if i2 == i or not x[i2, j]:
                continue
            if row_degrees[i2] > row_degrees[i]:
                raise AssertionError("row elimination would break homogeneity")
            coef = (int(x[i2, j]) * pivot_inv) % p
            x[i2, :] = (x[i2, :] - coef * x[i, :]) % p
        for j2 in sorted(act_c):
            if j2 != j and x[i, j2] and col_degrees[j2] < col_degrees[j]:
                raise AssertionError("column elimination would break homogeneity")
        x[i, :] = 0
        act_r.discard(i)
        act_c.discard(j)
        if pw >= 1:
            bars.append((row_degrees[i], row_degrees[i] + pw - 1))
    bars.extend((row_degrees[i], None) for i in sorted(act_r))
    return bars


def _graded_quotient_bars(field, out_map: HomogeneousMatrix, in_map: HomogeneousMatrix):
    """Bars of ker(out_map) / im(in_map)."""
    basis, kdeg = _graded_kernel(field, out_map.scalar, out_map.col_degrees)
    rel = field.solve(basis, in_map.scalar)
    if rel is None:
        raise AssertionError("incoming image does not lie in the kernel")
    rz, cz = np.nonzero(rel)
    for i, j in zip(rz, cz):
        if in_map.col_degrees[int(j)] < kdeg[int(i)]:
            raise AssertionError("relation coordinates are not homogeneous")
    return _graded_snf_bars(field, rel, kdeg, in_map.col_degrees)


def graded_barcode(gc: GradedComplex, k: int) -> Barcode:
    """Interval multiset of the degree-k cohomology of a graded complex."""
    return Barcode(
        _graded_quotient_bars(gc.field, gc.map_out(k), gc.map_out(k - 1))
    )


def graded_homology_barcode(gch: GradedChainComplex, k: int) -> Barcode:
    """Interval multiset of the degree-k homology of a graded chain complex."""
    return Barcode(
        _graded_quotient_bars(gch.field, gch.boundary(k), gch.boundary(k + 1))
    )


class GradedSheaf:
    """Per-simplex free graded modules with homogeneous restrictions."""

    def __init__(self, complex_: FilteredComplex, degrees, restriction):
        self.complex = complex_
        self.degrees = {
            s.id: tuple(int(d) for d in degrees.get(s.id, ()))
            for s in complex_.simplices
        }
        if any(d < 0 for ds in self.degrees.values() for d in ds):
            raise ValueError("generator degrees must be nonnegative")
        p = complex_.field.p
        self._restriction = {
            (fid, cid): matrix(m, p) for (fid, cid), m in restriction.items()
        }

    def module(self, sid: str) -> GradedFreeModule:
        return GradedFreeModule(self.degrees[sid])

    def restriction(self, face_id: str, coface_id: str) -> HomogeneousMatrix:
        rows = self.degrees[coface_id]
        cols = self.degrees[face_id]
        stored = self._restriction.get((face_id, coface_id))
        if stored is None:
            if rows and cols:
                raise KeyError(
                    f"no restriction stored for {face_id!r} -> {coface_id!r}"
                )
            stored = zeros(len(rows), len(cols))
        return HomogeneousMatrix(self.complex.field, stored, rows, cols)


class GradedCosheaf:
    """Per-simplex free graded modules with homogeneous extensions."""

    def __init__(self, complex_: FilteredComplex, degrees, extension):
        self.complex = complex_
        self.degrees = {
            s.id: tuple(int(d) for d in degrees.get(s.id, ()))
            for s in complex_.simplices
        }
        if any(d < 0 for ds in self.degrees.values() for d in ds):
            raise ValueError("generator degrees must be nonnegative")
        p = complex_.field.p
        self._extension = {
            (cid, fid): matrix(m, p) for (cid, fid), m in extension.items()
        }

    def module(self, sid: str) -> GradedFreeModule:
        return GradedFreeModule(self.degrees[sid])

    def extension(self, coface_id: str, face_id: str) -> HomogeneousMatrix:
        rows = self.degrees[face_id]
        cols = self.degrees[coface_id]
        stored = self._extension.get((coface_id, face_id))
        if stored is None:
            if rows and cols:
                raise KeyError(
                    f"no extension stored for {coface_id!r} -> {face_id!r}"
                )
            stored = zeros(len(rows), len(cols))
        return HomogeneousMatrix(self.complex.field, stored, rows, cols)


def validate_graded_sheaf(gs: GradedSheaf) -> list:
    """Homogeneity problems and non-commuting diamonds, as strings."""
    field = gs.complex.field
    problems = []
    maps = {}
    for f, t in _codim1_pairs(gs.complex):
        try:
            maps[(f.id, t.id)] = gs.restriction(f.id, t.id)
        except (KeyError, ValueError) as err:
            problems.append(f"{f.id!r} -> {t.id!r}: {err}")
    if problems:
        return problems
    for t in gs.complex.simplices:
        if t.dim < 2:
            continue
        verts = t.vertices
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                sv = tuple(v for a, v in enumerate(verts) if a not in (i, j))
                s = gs.complex.by_vertices.get(sv)
                ra = gs.complex.by_vertices.get(
                    tuple(v for a, v in enumerate(verts) if a != i)
                )
                rb = gs.complex.by_vertices.get(
                    tuple(v for a, v in enumerate(verts) if a != j)
                )
                if s is None or ra is None or rb is None:
                    continue
                via_a = field.matmul(
                    maps[(ra.id, t.id)].scalar, maps[(s.id, ra.id)].scalar
                )
                via_b = field.matmul(
                    maps[(rb.id, t.id)].scalar, maps[(s.id, rb.id)].scalar
                )
                if not np.array_equal(via_a, via_b):
                    problems.append(f"diamond {s.id!r} -> {t.id!r} does not commute")
    return problems


def validate_graded_cosheaf(gco: GradedCosheaf) -> list:
    field = gco.complex.field
    problems = []
    maps = {}
    for f, t in _codim1_pairs(gco.complex):
        try:
            maps[(t.id, f.id)] = gco.extension(t.id, f.id)
        except (KeyError, ValueError) as err:
            problems.append(f"{t.id!r} -> {f.id!r}: {err}")
    if problems:
        return problems
    for t in gco.complex.simplices:
        if t.dim < 2:
            continue
        verts = t.vertices
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                sv = tuple(v for a, v in enumerate(verts) if a not in (i, j))
                s = gco.complex.by_vertices.get(sv)
                ra = gco.complex.by_vertices.get(
                    tuple(v for a, v in enumerate(verts) if a != i)
                )
                rb = gco.complex.by_vertices.get(
                    tuple(v for a, v in enumerate(verts) if a != j)
                )
                if s is None or ra is None or rb is None:
                    continue
                via_a = field.matmul(
                    maps[(ra.id, s.id)].scalar, maps[(t.id, ra.id)].scalar
                )
                via_b = field.matmul(
                    maps[(rb.id, s.id)].scalar, maps[(t.id, rb.id)].scalar
                )
                if not np.array_equal(via_a, via_b):
                    problems.append(f"diamond {t.id!r} -> {s.id!r} does not commute")
    return problems


class _GradedBlocks:
    """Concatenated generator layout per simplex dimension."""

    def __init__(self, complex_, degrees):
        self.spaces = []
        self.offsets = []
        for k in range(complex_.dim + 1):
            off = {}
            degs = []
            for s in complex_.simplices_of_dim(k):
                off[s.id] = len(degs)
                degs.extend(degrees[s.id])
            self.offsets.append(off)
            self.spaces.append(GradedFreeModule(degs))


def graded_cochain_complex(gs: GradedSheaf) -> GradedComplex:
    """Assemble the signed coboundaries of a graded sheaf."""
    problems = validate_graded_sheaf(gs)
    if problems:
        raise ValueError("invalid graded sheaf: " + "; ".join(problems))
    field = gs.complex.field
    layout = _GradedBlocks(gs.complex, gs.degrees)
    maps = []
    for k in range(gs.complex.dim):
        lo, hi = layout.spaces[k], layout.spaces[k + 1]
        scalar = zeros(hi.rank, lo.rank)
        for f, t in _codim1_pairs(gs.complex):
            if t.dim != k + 1:
                continue
            block = gs.restriction(f.id, t.id).scalar
            if block.size == 0:
                continue
            ro = layout.offsets[k + 1][t.id]
            co = layout.offsets[k][f.id]
            sign = incidence_sign(f, t)
            scalar[ro : ro + block.shape[0], co : co + block.shape[1]] = (
                sign * block
            ) % field.p
        maps.append(HomogeneousMatrix(field, scalar, hi.degrees, lo.degrees))
    return GradedComplex(field, layout.spaces, maps)


def graded_chain_complex(gco: GradedCosheaf) -> GradedChainComplex:
    """Assemble the signed boundaries of a graded cosheaf."""
    problems = validate_graded_cosheaf(gco)
    if problems:
        raise ValueError("invalid graded cosheaf: " + "; ".join(problems))
    field = gco.complex.field
    layout = _GradedBlocks(gco.complex, gco.degrees)
    boundaries = []
    for k in range(1, gco.complex.dim + 1):
        lo, hi = layout.spaces[k - 1], layout.spaces[k]
        scalar = zeros(lo.rank, hi.rank)
        for f, t in _codim1_pairs(gco.complex):
            if t.dim != k:
                continue
            block = gco.extension(t.id, f.id).scalar
            if block.size == 0:
                continue
            ro = layout.offsets[k - 1][f.id]
            co = layout.offsets[k][t.id]
            sign = incidence_sign(f, t)
            scalar[ro : ro + block.shape[0], co : co + block.shape[1]] = (
                sign * block
            ) % field.p
        boundaries.append(HomogeneousMatrix(field, scalar, lo.degrees, hi.degrees))
    return GradedChainComplex(field, layout.spaces, boundaries)


def diagram_to_graded_sheaf(diagram: SheafDiagram) -> GradedSheaf:
    """Collapse a stalk-wise injective diagram into one graded sheaf.

    Each stalk's levels are merged into a free module: generators enter
    at the level where the stalk grows, with standard basis vectors
    completing the pushed-forward images greedily.  Restriction columns
    are solved in the level basis of the generator's birth level; the
    result is independent of the level by naturality.
    """
    field = diagram.complex.field
    m = diagram.length
    degrees = {}
    level_bases = {}
    for s in diagram.complex.simplices:
        sid = s.id
        gens = []
        bases = []
        imgs = zeros(diagram.snapshots[0].stalk(sid), 0)
        for i in range(m):
            if i > 0:
                comp = diagram.steps[i - 1].component(sid)
                if field.rank(comp) < comp.shape[1]:
                    raise NotFreeError(f"diagram not free at {sid}, step {i - 1}")
                imgs = field.matmul(comp, imgs)
            d = diagram.snapshots[i].stalk(sid)
            if field.rank(imgs) != imgs.shape[1]:
                raise AssertionError(f"pushed generators collapsed at {sid}")
            basis = imgs
            for e in range(d):
                if basis.shape[1] == d:
                    break
                cand = np.hstack([basis, _unit_column(d, e)])
                if field.rank(cand) > basis.shape[1]:
                    basis = cand
                    gens.append(i)
            if basis.shape[1] != d:
                raise AssertionError(f"could not complete a basis at {sid}")
            bases.append(basis)
            imgs = basis
        degrees[sid] = tuple(gens)
        level_bases[sid] = bases
    restriction = {}
    for f, t in _codim1_pairs(diagram.complex):
        fdeg, tdeg = degrees[f.id], degrees[t.id]
        scalar = zeros(len(tdeg), len(fdeg))
        for g, a in enumerate(fdeg):
            r_a = diagram.snapshots[a].restriction(f.id, t.id)
            vec = field.matmul(r_a, level_bases[f.id][a][:, g : g + 1])
            sol = field.solve(level_bases[t.id][a], vec)
            if sol is None:
                raise AssertionError(f"level basis at {t.id!r} is not a basis")
            scalar[: sol.shape[0], g : g + 1] = sol
        restriction[(f.id, t.id)] = scalar
    return GradedSheaf(diagram.complex, degrees, restriction)


def diagram_graded_barcode(diagram: SheafDiagram, k: int) -> Barcode:
    """Fast-path barcode of a stalk-wise injective diagram at degree k."""
    gs = diagram_to_graded_sheaf(diagram)
    return graded_barcode(graded_cochain_complex(gs), k)


class SlicedComplex:
    """One level of a graded complex, with the step maps to the next level."""

    def __init__(self, level: int, dims, deltas, t_actions):
        self.level = level
        self._dims = dims
        self._deltas = deltas
        self._t_actions = t_actions

    def dim(self, k: int) -> int:
        return self._dims.get(k, 0)

    def delta(self, k: int) -> np.ndarray:
        got = self._deltas.get(k)
        if got is not None:
            return got
        return zeros(self.dim(k + 1), self.dim(k))

    def t_action(self, k: int) -> np.ndarray:
        """Matrix of multiplication by t from this level into the next."""
        got = self._t_actions.get(k)
        if got is not None:
            return got
        return zeros(0, self.dim(k))


def evaluate_at(gc: GradedComplex, n: int) -> SlicedComplex:
    """The level-n scalar complex of a graded complex.

    A generator of degree a contributes a dimension iff a <= n; matrix
    slices keep the rows and columns of surviving generators.  The
    t-action to level n+1 is an identity block on generators alive at
    level n, widened by zeros for the level-(n+1) arrivals.
    """
    dims = {}
    deltas = {}
    t_actions = {}
    masks = {}
    for k in range(len(gc.spaces)):
        degs = gc.space(k).degrees
        mask = [i for i, a in enumerate(degs) if a <= n]
        masks[k] = mask
        dims[k] = len(mask)
        next_mask = [i for i, a in enumerate(degs) if a <= n + 1]
        t = zeros(len(next_mask), len(mask))
        lookup = {gen: row for row, gen in enumerate(next_mask)}
        for col, gen in enumerate(mask):
            t[lookup[gen], col] = 1
        t_actions[k] = t
    for k in range(len(gc.maps)):
        scalar = gc.maps[k].scalar
        deltas[k] = scalar[np.ix_(masks[k + 1], masks[k])].copy()
    return SlicedComplex(n, dims, deltas, t_actions)


def evaluate_sheaf_at(gs: GradedSheaf, n: int) -> CellularSheaf:
    """The level-n cellular sheaf of a graded sheaf, in generator bases."""
    stalks = {}
    masks = {}
    for sid, degs in gs.degrees.items():
        mask = [i for i, a in enumerate(degs) if a <= n]
        masks[sid] = mask
        stalks[sid] = len(mask)
    restr = {}
    for f, t in _codim1_pairs(gs.complex):
        scalar = gs.restriction(f.id, t.id).scalar
        restr[(f.id, t.id)] = scalar[np.ix_(masks[t.id], masks[f.id])].copy()
    return CellularSheaf(gs.complex, stalks, restr)
