"""The classical correlation polytope C(n, S).

C(n, S) is the convex hull of the 2^n deterministic 0/1 correlation
vectors u^eps (eps in {0,1}^n, u_i = eps_i, u_ij = eps_i * eps_j).  A
vector of single and pairwise probabilities admits a classical
(Kolmogorovian) representation exactly when it lies in this polytope.

Membership runs as an LP feasibility problem over the 2^n vertex weights
(see ``kolmorep._kernels`` for the simplex backends); for (4, S4) the
closed-form Clauser-Horne inequality system is available as an
independent route, evaluated exactly when the input is exact.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._kernels import STATUS_FEASIBLE, STATUS_INFEASIBLE, phase1_simplex
from .errors import DomainError, LayoutError, NumericalError, PreconditionError, SizeError
from .tolerances import TOL_LP

MAX_N = 16

# Bit vector eps in {0,1}^n labelling a deterministic vertex.
VertexLabel = tuple

_PIVOT_TOL = 1e-10
_MAX_ITER = 100_000
_WEIGHT_EPS = 1e-12


@dataclass(frozen=True)
class PairSet:
    """Which pairwise joint probabilities a correlation vector carries.

    Pairs are stored sorted, giving the normative layout: singles in index
    order, then pairs lexicographically.
    """

    n: int
    pairs: tuple

    def __init__(self, n: int, pairs):
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        normalized = set()
        for pair in pairs:
            i, j = pair
            i, j = int(i), int(j)
            if i == j:
                raise DomainError(f"pair indices must differ, got {pair}")
            if i > j:
                i, j = j, i
            if not (1 <= i < j <= n):
                raise DomainError(f"pair {pair} out of range for n={n}")
            normalized.add((i, j))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "pairs", tuple(sorted(normalized)))

    @classmethod
    def all_pairs(cls, n: int) -> "PairSet":
        return cls(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])

    def __len__(self) -> int:
        return len(self.pairs)


# The Bell-type scenario: four events, cross pairs only.
S4 = PairSet(4, ((1, 3), (1, 4), (2, 3), (2, 4)))


@dataclass(frozen=True)
class CorrelationVector:
    """Singles p_1..p_n then pairwise joints p_ij in a PairSet's layout.

    Entries may be exact rationals (Fraction/int) or floats; exactness is
    preserved where the consumer can honor it.
    """

    singles: tuple
    pairwise: tuple

    def __init__(self, singles, pairwise=()):
        singles = tuple(singles)
        pairwise = tuple(pairwise)
        for value in singles + pairwise:
            if not math.isfinite(float(value)):
                raise DomainError(f"correlation entries must be finite, got {value!r}")
        object.__setattr__(self, "singles", singles)
        object.__setattr__(self, "pairwise", pairwise)

    @property
    def entries(self) -> tuple:
        return self.singles + self.pairwise

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.entries], dtype=np.float64)

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.entries)

    def conforms_to(self, s: PairSet) -> bool:
        return len(self.singles) == s.n and len(self.pairwise) == len(s.pairs)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    value: object
    satisfied: bool


@dataclass(frozen=True)
class ViolatedFacet:
    name: str
    value: object
    violation: object


@dataclass(frozen=True)
class MembershipCertificate:
    """Outcome of a polytope membership query.

    For members, ``weights`` maps vertex labels to convex coefficients
    reconstructing the query vector.  For non-members of (4, S4) the most
    violated Clauser-Horne inequality is named.
    """

    member: bool
    weights: dict | None = None
    violated_facet: ViolatedFacet | None = None


def _require_layout(p: CorrelationVector, s: PairSet) -> None:
    if not p.conforms_to(s):
        raise LayoutError(
            f"vector has {len(p.singles)} singles / {len(p.pairwise)} pairs, "
            f"expected {s.n} / {len(s.pairs)}"
        )


def _require_size(s: PairSet) -> None:
    if s.n > MAX_N:
        raise SizeError(f"n={s.n} exceeds the 2^n enumeration cap (n <= {MAX_N})")


def _bit_rows(n: int) -> np.ndarray:
    # row i holds eps_i over all 2^n labels, most significant bit first
    ks = np.arange(2**n, dtype=np.int64)
    return np.stack([(ks >> (n - 1 - i)) & 1 for i in range(n)]).astype(np.float64)


def vertex_matrix(s: PairSet) -> np.ndarray:
    """Dense (n + |S|) x 2^n matrix whose columns are the vertices u^eps."""
    _require_size(s)
    bits = _bit_rows(s.n)
    pair_rows = [bits[i - 1] * bits[j - 1] for i, j in s.pairs]
    return np.vstack([bits] + pair_rows) if pair_rows else bits


def label_of(index: int, n: int) -> VertexLabel:
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def vertices(s: PairSet):
    """All 2^n vertices of C(n, S) as (label, CorrelationVector) pairs.

    Entries are exact 0/1 integers; order is lexicographic in the label.
    """
    _require_size(s)
    out = []
    for k in range(2**s.n):
        eps = label_of(k, s.n)
        singles = tuple(eps)
        pairs = tuple(eps[i - 1] * eps[j - 1] for i, j in s.pairs)
        out.append((eps, CorrelationVector(singles, pairs)))
    return out


def is_member(p: CorrelationVector, s: PairSet, find_facet: bool = True) -> MembershipCertificate:
    """LP feasibility test: is p a convex combination of the vertices?

    Solves for lambda >= 0 with sum(lambda) = 1 and V lambda = p.  Members
    come back with the weights; non-members of (4, S4) also name the most
    violated Clauser-Horne inequality when ``find_facet`` is set.
    """
    _require_layout(p, s)
    _require_size(s)
    V = vertex_matrix(s)
    rows = np.vstack([V, np.ones((1, V.shape[1]))])
    rhs = np.concatenate([p.as_floats(), [1.0]])
    flip = rhs < 0.0
    rows[flip] *= -1.0
    rhs = np.abs(rhs)

    status, x = phase1_simplex(rows, rhs, _PIVOT_TOL, TOL_LP, _MAX_ITER)
    if status == STATUS_FEASIBLE:
        weights = {
            label_of(j, s.n): float(x[j]) for j in range(x.shape[0]) if x[j] > _WEIGHT_EPS
        }
        return MembershipCertificate(member=True, weights=weights)
    if status != STATUS_INFEASIBLE:
        raise NumericalError("simplex hit the iteration cap; query is ill-conditioned")

    facet = None
    if find_facet and s == S4:
        violated = [(c, excess) for c, excess in _checks_with_excess(p) if not c.satisfied]
        if violated:
            worst, amount = max(violated, key=lambda item: float(item[1]))
            facet = ViolatedFacet(name=worst.name, value=worst.value, violation=amount)
    return MembershipCertificate(member=False, violated_facet=facet)


# Facets of C(4, S4) beyond the box/monotonicity bounds; each expression is
# constrained to [-1, 0].
_FACET_EXPRESSIONS = (
    ("p13 + p14 + p24 - p23 - p1 - p4", ((1, 3), 1), ((1, 4), 1), ((2, 4), 1), ((2, 3), -1), (1, -1), (4, -1)),
    ("p23 + p24 + p14 - p13 - p2 - p4", ((2, 3), 1), ((2, 4), 1), ((1, 4), 1), ((1, 3), -1), (2, -1), (4, -1)),
    ("p14 + p13 + p23 - p24 - p1 - p3", ((1, 4), 1), ((1, 3), 1), ((2, 3), 1), ((2, 4), -1), (1, -1), (3, -1)),
    ("p24 + p23 + p13 - p14 - p2 - p3", ((2, 4), 1), ((2, 3), 1), ((1, 3), 1), ((1, 4), -1), (2, -1), (3, -1)),
)


def _values_by_key(p: CorrelationVector, s: PairSet) -> dict:
    values = {i + 1: p.singles[i] for i in range(s.n)}
    for pair, value in zip(s.pairs, p.pairwise):
        values[pair] = value
    return values


def _checks_with_excess(p: CorrelationVector) -> list:
    """All (4, S4) inequalities as (check, excess) with excess = LHS - bound."""
    exact = p.is_exact()
    slack = Fraction(0) if exact else TOL_LP
    one = Fraction(1) if exact else 1.0
    values = _values_by_key(p, S4)
    out = []

    def emit(name, value, excess):
        out.append((InequalityCheck(name=name, value=value, satisfied=excess <= slack), excess))

    for i, j in S4.pairs:
        pij, pi, pj = values[(i, j)], values[i], values[j]
        emit(f"0 <= p{i}{j}", pij, -pij)
        emit(f"p{i}{j} <= p{i}", pij, pij - pi)
        emit(f"p{i}{j} <= p{j}", pij, pij - pj)
        value = pi + pj - pij
        emit(f"p{i} + p{j} - p{i}{j} <= 1", value, value - one)
    for i in range(1, S4.n + 1):
        emit(f"p{i} <= 1", values[i], values[i] - one)
    for name, *terms in _FACET_EXPRESSIONS:
        value = sum(values[key] * coeff for key, coeff in terms)
        emit(f"{name} <= 0", value, value)
        emit(f"-1 <= {name}", value, -one - value)
    return out


def clauser_horne_check(p: CorrelationVector, s: PairSet = S4) -> list:
    """Evaluate the full Clauser-Horne inequality system for (4, S4).

    Returns one InequalityCheck per inequality.  All of them hold exactly
    when p lies in C(4, S4); the list doubles as the human-readable
    explanation of a rejection.  Exact (rational) inputs are evaluated
    exactly; floats get TOL_LP slack.
    """
    if s != S4:
        raise PreconditionError("the closed-form inequality system is specific to (4, S4)")
    _require_layout(p, s)
    return [check for check, _excess in _checks_with_excess(p)]


def all_satisfied(checks) -> bool:
    return all(c.satisfied for c in checks)


def censorship_product(quantum: CorrelationVector, selection: CorrelationVector) -> CorrelationVector:
    """Componentwise product of a quantum and a selection correlation vector.

    This is the vector of empirically observed absolute probabilities when
    each joint measurement is only performed with the stated selection
    probability.
    """
    if len(quantum.singles) != len(selection.singles) or len(quantum.pairwise) != len(
        selection.pairwise
    ):
        raise LayoutError("quantum and selection vectors must share one layout")
    singles = tuple(q * t for q, t in zip(quantum.singles, selection.singles))
    pairs = tuple(q * t for q, t in zip(quantum.pairwise, selection.pairwise))
    return CorrelationVector(singles, pairs)


def _entry_from_json(value):
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, bool):
        raise DomainError("correlation entries cannot be booleans")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise DomainError(f"unsupported correlation entry {value!r}")


def query_from_json_dict(data) -> tuple:
    """Parse {"n", "pairs", "singles", "pairwise"} into (vector, pair set).

    Entries may be numbers or "num/den" strings; strings and ints stay
    exact rationals.
    """
    try:
        s = PairSet(int(data["n"]), [tuple(pair) for pair in data["pairs"]])
        singles = tuple(_entry_from_json(v) for v in data["singles"])
        pairwise = tuple(_entry_from_json(v) for v in data["pairwise"])
    except KeyError as exc:
        raise LayoutError(f"query JSON is missing key {exc}") from exc
    vector = CorrelationVector(singles, pairwise)
    _require_layout(vector, s)
    return vector, s


def certificate_to_json_dict(cert: MembershipCertificate) -> dict:
    out = {"member": cert.member}
    if cert.weights is not None:
        out["weights"] = {
            "".join(str(bit) for bit in label): weight for label, weight in sorted(cert.weights.items())
        }
    if cert.violated_facet is not None:
        out["violated_facet"] = {
            "name": cert.violated_facet.name,
            "value": cert.violated_facet.value,
            "violation": cert.violated_facet.violation,
        }
    return out
