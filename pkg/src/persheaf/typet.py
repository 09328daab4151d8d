"""Copersistence of one sheaf over a growing complex.

The direct route restricts the sheaf to every filtration step and
chains the cohomology restriction maps backward.  The fast route packs
the whole filtration into a single cosheaf of free graded modules,
generator degrees equal to entry indices, and reduces its chain
complex.  A third construction extends each restricted sheaf by zero
back onto the full complex, turning the same data into a diagram of
sheaf morphisms over one fixed complex.
"""

from __future__ import annotations

from .cohomology import (
    CochainComplex,
    cohomology_basis,
    induced_by_simplicial_map,
)
from .graded import GradedCosheaf, graded_chain_complex, graded_homology_barcode
from .linalg import identity
from .persistence import Barcode, CopersistenceModule, decompose_copersistence
from .sheaves import (
    CellularSheaf,
    SheafDiagram,
    SheafMorphism,
    _codim1_pairs,
    extend_by_zero,
    pullback,
    validate_sheaf,
)

__all__ = [
    "pullback_chain",
    "type_t_direct",
    "filtration_cosheaf",
    "type_t_graded",
    "g_chain",
    "mirrored_g_diagram",
]


def _check_input(sheaf: CellularSheaf):
    problems = sheaf.complex.validate() + validate_sheaf(sheaf)
    if problems:
        raise ValueError("invalid input: " + "; ".join(problems))


def pullback_chain(sheaf: CellularSheaf) -> list:
    """The sheaf restricted to every filtration step, in index order."""
    x = sheaf.complex
    return [pullback(x.step_inclusion(i), sheaf) for i in range(x.steps)]


def type_t_direct(sheaf: CellularSheaf, k: int):
    """Backward module of H^k over the filtration, with its barcode.

    dims[i] is H^k of the step-i restriction; maps[i] pulls classes
    back from step i+1 to step i along the inclusion.
    """
    _check_input(sheaf)
    x = sheaf.complex
    m = x.steps
    restricted = pullback_chain(sheaf)
    bases = [
        cohomology_basis(pb, k, CochainComplex(pb, validate=False))
        for pb in restricted
    ]
    maps = [
        induced_by_simplicial_map(
            x.step_inclusion(i, i + 1),
            source_basis=bases[i + 1],
            target_basis=bases[i],
        )
        for i in range(m - 1)
    ]
    module = CopersistenceModule(x.field, [b.dim for b in bases], maps)
    return module, decompose_copersistence(module)


def filtration_cosheaf(sheaf: CellularSheaf) -> GradedCosheaf:
    """The filtration packed into one graded cosheaf.

    Each simplex contributes stalk_dim generators of degree equal to
    its entry index; the extension from a coface to a face is the
    transposed restriction, its t-power the entry difference.
    """
    x = sheaf.complex
    degrees = {s.id: (s.entry,) * sheaf.stalk(s.id) for s in x.simplices}
    extension = {}
    for f, t in _codim1_pairs(x):
        if sheaf.stalk(f.id) and sheaf.stalk(t.id):
            extension[(t.id, f.id)] = sheaf.restriction(f.id, t.id).T.copy()
    return GradedCosheaf(x, degrees, extension)


def type_t_graded(sheaf: CellularSheaf, k: int) -> Barcode:
    """Fast-path barcode of the filtration at cohomological degree k."""
    _check_input(sheaf)
    gch = graded_chain_complex(filtration_cosheaf(sheaf))
    return graded_homology_barcode(gch, k)


def g_chain(sheaf: CellularSheaf):
    """Extend each restricted sheaf by zero onto the full complex.

    Returns (sheaves G_0..G_{m-1}, morphisms psi_i: G_{i+1} -> G_i);
    every morphism is the identity over the step-i subcomplex and zero
    where the source stalk dies.
    """
    _check_input(sheaf)
    x = sheaf.complex
    m = x.steps
    extended = []
    for i in range(m):
        incl = x.step_inclusion(i)
        extended.append(extend_by_zero(incl, pullback(incl, sheaf)))
    morphisms = []
    for i in range(m - 1):
        keep = {s.id for s in x.subcomplex(i).simplices}
        comp = {sid: identity(extended[i].stalk(sid)) for sid in keep}
        morphisms.append(SheafMorphism(extended[i + 1], extended[i], comp))
    return extended, morphisms


def mirrored_g_diagram(sheaf: CellularSheaf) -> SheafDiagram:
    """The G-chain read right to left, as a forward diagram of length m."""
    extended, morphisms = g_chain(sheaf)
    m = len(extended)
    snapshots = [extended[m - 1 - j] for j in range(m)]
    steps = [morphisms[m - 2 - j] for j in range(m - 1)]
    return SheafDiagram(snapshots, steps)
