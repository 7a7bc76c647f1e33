"""The subspace lattice of a finite-dimensional Hilbert space.

Meet (intersection), join (closed span), orthocomplement, commutativity,
the relative-frequency bound p(E1) + p(E2) - p(E1^E2) <= 1, and a
constructive witness state violating that bound for any non-commuting pair.

Lattice elements are the projectors themselves; ``LatticeElement`` is an
alias for :class:`~kolmorep.hilbert.Projector`.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NumericalError, PreconditionError
from .hilbert import (
    DensityOperator,
    Projector,
    StateVector,
    gleason_measure,
    span_projector_matrix,
)
from .tolerances import TOL_OP, TOL_PROB

LatticeElement = Projector


@dataclass(frozen=True)
class ViolationWitness:
    """A pure state on which a non-commuting pair breaks the frequency bound.

    ``lhs`` is p1 + p2 - p12; construction guarantees p1 = 1, p12 = 0 and
    p2 > 0, hence lhs > 1.
    """

    state: StateVector
    p1: float
    p2: float
    p12: float
    lhs: float


def _check_dims(e1: Projector, e2: Projector) -> None:
    if e1.dim != e2.dim:
        raise DimensionError(f"dimension mismatch: {e1.dim} vs {e2.dim}")


def join(e1: Projector, e2: Projector) -> Projector:
    """Projector onto the closed span of the two ranges (lattice disjunction)."""
    _check_dims(e1, e2)
    return Projector(span_projector_matrix(np.hstack([e1.matrix, e2.matrix])))


def complement(e: Projector) -> Projector:
    """Orthocomplement: identity minus the projector."""
    return Projector(np.eye(e.dim, dtype=np.complex128) - e.matrix)


def meet(e1: Projector, e2: Projector) -> Projector:
    """Projector onto the intersection of the two ranges (lattice conjunction).

    Computed exactly as the orthocomplement of the join of the two
    orthocomplements (one SVD), rather than by alternating projections.
    """
    _check_dims(e1, e2)
    return complement(join(complement(e1), complement(e2)))


def commutes(e1: Projector, e2: Projector) -> bool:
    """True iff the commutator vanishes in Frobenius norm (within TOL_OP)."""
    _check_dims(e1, e2)
    comm = e1.matrix @ e2.matrix - e2.matrix @ e1.matrix
    return bool(np.linalg.norm(comm) <= TOL_OP)


def frequency_inequality_lhs(W: DensityOperator, e1: Projector, e2: Projector) -> float:
    """p(E1) + p(E2) - p(E1 ^ E2) under the state W.

    A value above 1 rules out reading the three probabilities as relative
    frequencies of events in one statistical ensemble.
    """
    _check_dims(e1, e2)
    return (
        gleason_measure(W, e1)
        + gleason_measure(W, e2)
        - gleason_measure(W, meet(e1, e2))
    )


def modular_defect(W: DensityOperator, e1: Projector, e2: Projector) -> float:
    """p(E1 v E2) - [p(E1) + p(E2) - p(E1 ^ E2)].

    Zero means inclusion-exclusion holds for this triple; commuting pairs
    always give zero.
    """
    _check_dims(e1, e2)
    return gleason_measure(W, join(e1, e2)) - frequency_inequality_lhs(W, e1, e2)


def relative_decomposition(e1: Projector, e2: Projector):
    """Split a pair as E1 = C v A, E2 = C v B with C = E1 ^ E2 and A, B _|_ C.

    Returns (C, A, B).  The subtraction E1 - C is a valid projector because
    C <= E1; the constructor re-validates the invariants.
    """
    _check_dims(e1, e2)
    c = meet(e1, e2)
    a = Projector(e1.matrix - c.matrix)
    b = Projector(e2.matrix - c.matrix)
    return c, a, b


def construct_violating_state(e1: Projector, e2: Projector) -> ViolationWitness:
    """Build a pure state witnessing p(E1) + p(E2) - p(E1 ^ E2) > 1.

    Requires a non-commuting pair.  The witness maximizes <psi, E2 psi>
    over the part of E1 orthogonal to the meet, which makes it
    deterministic and gives the strongest violation for this recipe.
    """
    _check_dims(e1, e2)
    if commutes(e1, e2):
        raise PreconditionError("commuting pair: the frequency bound cannot be violated")
    c, a, _b = relative_decomposition(e1, e2)
    m = a.matrix @ e2.matrix @ a.matrix
    m = (m + m.conj().T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(m)
    top = float(eigvals[-1])
    if top <= TOL_PROB:
        raise NumericalError(
            "no overlap between the reduced parts of a non-commuting pair; "
            "inputs likely violate the projector invariants"
        )
    psi = StateVector(eigvecs[:, -1])
    v = psi.amplitudes
    p1 = float(np.vdot(v, e1.matrix @ v).real)
    p2 = float(np.vdot(v, e2.matrix @ v).real)
    p12 = float(np.vdot(v, c.matrix @ v).real)
    return ViolationWitness(state=psi, p1=p1, p2=p2, p12=p12, lhs=p1 + p2 - p12)
