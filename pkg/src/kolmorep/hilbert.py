"""Finite-dimensional complex Hilbert space primitives.

State vectors, operators, projectors, and density operators on C^d with
d <= 64, together with the trace probability rule ``tr(WE)`` that turns a
density operator into a probability measure on the projector lattice.

All values are immutable after construction and every operation is a pure
function, so everything here is safe to share across threads.
"""

import numpy as np

from .errors import DimensionError, DomainError, NumericalError
from .tolerances import RANK_RTOL, TOL_NORM, TOL_OP, TOL_PROB

MAX_DIM = 64

_SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)


def _frozen_array(data, dtype=np.complex128) -> np.ndarray:
    arr = np.array(data, dtype=dtype)
    arr.setflags(write=False)
    return arr


class StateVector:
    """A unit vector in C^d."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        vec = _frozen_array(amplitudes)
        if vec.ndim != 1:
            raise DimensionError(f"state vector must be one-dimensional, got shape {vec.shape}")
        if not 1 <= vec.shape[0] <= MAX_DIM:
            raise DimensionError(f"dimension {vec.shape[0]} outside [1, {MAX_DIM}]")
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > TOL_NORM:
            raise DomainError(f"state vector norm {norm!r} is not 1 within {TOL_NORM}")
        self.amplitudes = vec

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        """Build a state vector from any nonzero amplitude list."""
        vec = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(vec)
        if norm <= TOL_NORM:
            raise DomainError("cannot normalize a (near-)zero vector")
        return cls(vec / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def inner(self, other: "StateVector") -> complex:
        """Inner product <self, other>, antilinear in self."""
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(dim={self.dim})"


class Operator:
    """A general linear operator on C^d, stored as a dense matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = _frozen_array(matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {m.shape}")
        if not 1 <= m.shape[0] <= MAX_DIM:
            raise DimensionError(f"dimension {m.shape[0]} outside [1, {MAX_DIM}]")
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class Projector(Operator):
    """An orthogonal projector: Hermitian, idempotent, integer trace.

    Identified with the subspace it projects onto; the lattice module
    treats projectors as its elements.
    """

    __slots__ = ("rank",)

    def __init__(self, matrix):
        super().__init__(matrix)
        m = self.matrix
        herm = np.linalg.norm(m - m.conj().T)
        if herm > TOL_OP:
            raise DomainError(f"projector is not Hermitian: defect {herm:.3e}")
        idem = np.linalg.norm(m @ m - m)
        if idem > TOL_OP:
            raise DomainError(f"projector is not idempotent: defect {idem:.3e}")
        trace = float(np.trace(m).real)
        rank = round(trace)
        if abs(trace - rank) > TOL_OP:
            raise DomainError(f"projector trace {trace!r} is not an integer within {TOL_OP}")
        self.rank = rank

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(np.eye(dim, dtype=np.complex128))

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(np.zeros((dim, dim), dtype=np.complex128))

    @classmethod
    def onto(cls, state: StateVector) -> "Projector":
        """Rank-one projector onto the line spanned by ``state``."""
        v = state.amplitudes
        return cls(np.outer(v, v.conj()))


class DensityOperator(Operator):
    """A quantum state: Hermitian, positive semidefinite, unit trace."""

    __slots__ = ()

    def __init__(self, matrix):
        super().__init__(matrix)
        m = self.matrix
        herm = np.linalg.norm(m - m.conj().T)
        if herm > TOL_OP:
            raise DomainError(f"density operator is not Hermitian: defect {herm:.3e}")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] < -TOL_OP:
            raise DomainError(f"density operator has negative eigenvalue {eigs[0]:.3e}")
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > TOL_OP:
            raise DomainError(f"density operator trace {trace!r} is not 1 within {TOL_OP}")

    @classmethod
    def pure(cls, state: StateVector) -> "DensityOperator":
        """The pure state |psi><psi|."""
        v = state.amplitudes
        return cls(np.outer(v, v.conj()))


def span_projector_matrix(columns: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the column space of ``columns``.

    Rank is decided by singular values above RANK_RTOL times the largest,
    so linearly dependent (or unnormalized) inputs are deflated.
    """
    cols = np.asarray(columns, dtype=np.complex128)
    if cols.ndim != 2:
        raise DimensionError("expected a matrix of column vectors")
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros((cols.shape[0], cols.shape[0]), dtype=np.complex128)
    rank = int(np.count_nonzero(s > RANK_RTOL * s[0]))
    basis = u[:, :rank]
    proj = basis @ basis.conj().T
    return (proj + proj.conj().T) / 2.0


def projector_from_span(vectors) -> Projector:
    """Orthogonal projector onto the linear span of the given state vectors.

    Parameters
    ----------
    vectors : sequence of StateVector
        Nonempty; all on the same space.

    Returns
    -------
    Projector with rank equal to the dimension of the span.
    """
    vecs = list(vectors)
    if not vecs:
        raise DomainError("projector_from_span needs at least one vector")
    dim = vecs[0].dim
    for v in vecs:
        if v.dim != dim:
            raise DimensionError(f"dimension mismatch in span: {v.dim} vs {dim}")
    cols = np.column_stack([v.amplitudes for v in vecs])
    return Projector(span_projector_matrix(cols))


def gleason_measure(W: DensityOperator, E: Projector) -> float:
    """Probability assigned to the subspace E by the state W: tr(WE).

    The result is clamped to [0, 1] when it lies within TOL_PROB of the
    boundary; anything further out signals a broken invariant upstream and
    raises NumericalError.
    """
    if W.dim != E.dim:
        raise DimensionError(f"dimension mismatch: state {W.dim}, projector {E.dim}")
    value = float(np.trace(W.matrix @ E.matrix).real)
    if value < -TOL_PROB or value > 1.0 + TOL_PROB:
        raise NumericalError(f"trace probability {value!r} outside [0, 1]")
    return min(max(value, 0.0), 1.0)


def tensor(x, y):
    """Kronecker product of two state vectors or two operators.

    Operator subtypes are preserved when the product provably keeps the
    invariants: projector (x) projector is a Projector, density (x) density
    is a DensityOperator; anything else comes back as a plain Operator.
    """
    if isinstance(x, StateVector) and isinstance(y, StateVector):
        return StateVector(np.kron(x.amplitudes, y.amplitudes))
    if isinstance(x, Operator) and isinstance(y, Operator):
        product = np.kron(x.matrix, y.matrix)
        if isinstance(x, Projector) and isinstance(y, Projector):
            return Projector(product)
        if isinstance(x, DensityOperator) and isinstance(y, DensityOperator):
            return DensityOperator(product)
        return Operator(product)
    raise DomainError("tensor operands must be two StateVectors or two Operators")


def spin_up_vector(direction) -> StateVector:
    """The +1 eigenvector of n . sigma for a spin-half particle.

    Phase convention: the first nonzero component is real and >= 0, so
    fixtures are bit-reproducible.
    """
    n = np.asarray(direction, dtype=np.float64)
    if n.shape != (3,):
        raise DomainError(f"direction must be a 3-vector, got shape {n.shape}")
    norm = np.linalg.norm(n)
    if norm <= TOL_NORM:
        raise DomainError("direction must be nonzero")
    n = n / norm
    pauli_dot = np.tensordot(n, _SIGMA, axes=(0, 0))
    eigvals, eigvecs = np.linalg.eigh(pauli_dot)
    vec = eigvecs[:, int(np.argmax(eigvals))]
    for component in vec:
        if abs(component) > 1e-8:
            vec = vec * (component.conjugate() / abs(component))
            break
    return StateVector(vec / np.linalg.norm(vec))
