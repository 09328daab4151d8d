"""Two-parameter grids: a diagram of sheaves over a growing complex.

Restricting every snapshot of a diagram to every filtration step gives
a grid of cohomology spaces with maps in two directions: along the
diagram, and from each complex down to the previous (smaller) one.
Rows are stored with the topological axis reversed, u = steps - 1 - i,
so that both stored directions point from smaller index to larger and
every square can be checked for commutativity the same way.
"""

from __future__ import annotations

import numpy as np

from .cohomology import (
    CochainComplex,
    cohomology_basis,
    induced_by_sheaf_morphism,
    induced_by_simplicial_map,
)
from .linalg import identity
from .sheaves import SheafDiagram, SheafMorphism, pullback, validate_diagram

__all__ = ["BiGrid", "grid", "check_commutative", "rank_invariant"]


class BiGrid:
    """A grid of vector space dimensions with maps right and down.

    hmaps[u][j] maps column j to column j+1 inside row u; vmaps[u][j]
    maps row u to row u+1 inside column j.  All rows have equal length.
    """

    def __init__(self, field, dims, hmaps, vmaps):
        self.field = field
        self.dims = [list(row) for row in dims]
        self.hmaps = [list(row) for row in hmaps]
        self.vmaps = [list(row) for row in vmaps]
        rows = len(self.dims)
        if rows == 0 or len(self.dims[0]) == 0:
            raise ValueError("a grid needs at least one row and column")
        cols = len(self.dims[0])
        if any(len(row) != cols for row in self.dims):
            raise ValueError("rows of unequal length")
        if len(self.hmaps) != rows or any(
            len(row) != cols - 1 for row in self.hmaps
        ):
            raise ValueError("need one map per adjacent column pair per row")
        if len(self.vmaps) != rows - 1 or any(
            len(row) != cols for row in self.vmaps
        ):
            raise ValueError("need one map per adjacent row pair per column")
        for u in range(rows):
            for j in range(cols - 1):
                got = self.hmaps[u][j].shape
                want = (self.dims[u][j + 1], self.dims[u][j])
                if got != want:
                    raise ValueError(
                        f"map right at ({u}, {j}) has shape {got}, wanted {want}"
                    )
        for u in range(rows - 1):
            for j in range(cols):
                got = self.vmaps[u][j].shape
                want = (self.dims[u + 1][j], self.dims[u][j])
                if got != want:
                    raise ValueError(
                        f"map down at ({u}, {j}) has shape {got}, wanted {want}"
                    )

    @property
    def rows(self) -> int:
        return len(self.dims)

    @property
    def cols(self) -> int:
        return len(self.dims[0])


def grid(diagram: SheafDiagram, k: int) -> BiGrid:
    """The H^k grid of a diagram over all steps of its filtered complex.

    Row u holds the restrictions to step i = steps - 1 - u, so the top
    row sees the whole complex.  Horizontal maps are induced by the
    diagram's morphisms, vertical ones by the step inclusions; bases
    are fixed once per grid position and shared by both directions.
    """
    problems = validate_diagram(diagram)
    if problems:
        raise ValueError("invalid diagram: " + "; ".join(problems))
    x = diagram.complex
    field = x.field
    mt = x.steps
    ma = len(diagram.snapshots)
    restricted = []
    bases = []
    for u in range(mt):
        i = mt - 1 - u
        incl = x.step_inclusion(i)
        row = [pullback(incl, snap) for snap in diagram.snapshots]
        restricted.append(row)
        bases.append(
            [cohomology_basis(pb, k, CochainComplex(pb, validate=False)) for pb in row]
        )
    dims = [[b.dim for b in row] for row in bases]
    hmaps = []
    for u in range(mt):
        i = mt - 1 - u
        ids = [s.id for s in x.subcomplex(i).simplices]
        row = []
        for j in range(ma - 1):
            comp = {sid: diagram.steps[j].component(sid) for sid in ids}
            phi = SheafMorphism(restricted[u][j], restricted[u][j + 1], comp)
            row.append(
                induced_by_sheaf_morphism(
                    phi, source_basis=bases[u][j], target_basis=bases[u][j + 1]
                )
            )
        hmaps.append(row)
    vmaps = []
    for u in range(mt - 1):
        i = mt - 1 - u
        f = x.step_inclusion(i - 1, i)
        vmaps.append(
            [
                induced_by_simplicial_map(
                    f, source_basis=bases[u][j], target_basis=bases[u + 1][j]
                )
                for j in range(ma)
            ]
        )
    return BiGrid(field, dims, hmaps, vmaps)


def check_commutative(g: BiGrid):
    """None if every square commutes, else the first failing (u, j).

    The square at (u, j) has corners (u, j) and (u+1, j+1); failure
    means right-then-down disagrees with down-then-right from (u, j).
    """
    field = g.field
    for u in range(g.rows - 1):
        for j in range(g.cols - 1):
            rd = field.matmul(g.vmaps[u][j + 1], g.hmaps[u][j])
            dr = field.matmul(g.hmaps[u + 1][j], g.vmaps[u][j])
            if not np.array_equal(rd, dr):
                return (u, j)
    return None


def rank_invariant(g: BiGrid) -> dict:
    """Rank of the composite map for every comparable pair of positions.

    Keys are ((u1, j1), (u2, j2)) with u1 <= u2 and j1 <= j2, in stored
    coordinates; composites go right along row u1, then down column j2.
    """
    field = g.field
    ranks = {}
    for u1 in range(g.rows):
        for j1 in range(g.cols):
            across = identity(g.dims[u1][j1])
            for j2 in range(j1, g.cols):
                if j2 > j1:
                    across = field.matmul(g.hmaps[u1][j2 - 1], across)
                down = across
                for u2 in range(u1, g.rows):
                    if u2 > u1:
                        down = field.matmul(g.vmaps[u2 - 1][j2], down)
                    ranks[((u1, j1), (u2, j2))] = field.rank(down)
    return ranks
