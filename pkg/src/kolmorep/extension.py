"""Build one classical probability space reproducing many quantum experiments.

Given N projective measurements on a shared Hilbert space, a state W, and
a classical selection distribution over which compatible subsets of
measurements get performed, this module constructs a single finite
Kolmogorov space whose sample points are "which measurements ran, and what
they gave" (not-performed slots are labelled ``none``).  The weight of a
point is the quantum joint probability of its outcomes times the selection
probability of its pattern.

The payoff: every quantum probability tr(W P_A1 ... P_Ak) reappears as an
ordinary Bayes-law conditional inside the one space, conditioned on the
event that those measurements were the ones performed.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .classical import Event, FiniteProbabilitySpace, correlation_vector_of
from .errors import (
    ConditioningError,
    DimensionError,
    DomainError,
    NumericalError,
    PreconditionError,
    RationalizationError,
)
from .hilbert import DensityOperator, Projector, spin_up_vector
from .polytope import CorrelationVector, PairSet
from .serialize import (
    complex_matrix_from_json,
    complex_matrix_to_json,
    fraction_from,
    fraction_to_string,
)
from .tolerances import RATIONAL_MAX_DEN, TOL_OP, TOL_PROB, TOL_RAT

NOT_PERFORMED = "none"

SelectionPattern = tuple


def pattern_to_string(pattern) -> str:
    return "".join(str(int(b)) for b in pattern)


def pattern_from_string(bits: str) -> SelectionPattern:
    if not bits or any(c not in "01" for c in bits):
        raise DomainError(f"pattern must be a nonempty string of 0/1 bits, got {bits!r}")
    return tuple(int(c) for c in bits)


class Measurement:
    """A projective measurement: named outcomes resolving the identity."""

    __slots__ = ("name", "spectrum", "projectors")

    def __init__(self, name: str, spectrum, projectors):
        spectrum = tuple(spectrum)
        if not spectrum:
            raise DomainError(f"measurement {name!r} needs a nonempty spectrum")
        if len(set(spectrum)) != len(spectrum):
            raise DomainError(f"measurement {name!r} has duplicate outcome labels")
        for label in spectrum:
            if not isinstance(label, str) or not label or any(c.isspace() for c in label):
                raise DomainError(f"outcome labels must be nonempty without whitespace, got {label!r}")
            if label == NOT_PERFORMED:
                raise DomainError(f"outcome label {NOT_PERFORMED!r} is reserved")
        if set(projectors) != set(spectrum):
            raise DomainError(f"measurement {name!r}: projectors must cover exactly the spectrum")

        dims = {projectors[label].dim for label in spectrum}
        if len(dims) != 1:
            raise DimensionError(f"measurement {name!r} mixes dimensions {sorted(dims)}")
        dim = dims.pop()
        total = np.zeros((dim, dim), dtype=np.complex128)
        for label in spectrum:
            total += projectors[label].matrix
        if np.linalg.norm(total - np.eye(dim)) > TOL_OP:
            raise DomainError(f"measurement {name!r}: outcome projectors do not resolve the identity")
        for a, b in itertools.combinations(spectrum, 2):
            if np.linalg.norm(projectors[a].matrix @ projectors[b].matrix) > TOL_OP:
                raise DomainError(f"measurement {name!r}: outcomes {a!r} and {b!r} are not orthogonal")

        self.name = name
        self.spectrum = spectrum
        self.projectors = {label: projectors[label] for label in spectrum}

    @property
    def dim(self) -> int:
        return self.projectors[self.spectrum[0]].dim


class SelectionDistribution:
    """Classical weights over which subset of measurements is performed.

    Deliberately permissive at construction; ``validate_setup`` reports
    normalization and compatibility problems as diagnostics.
    """

    __slots__ = ("weights",)

    def __init__(self, weights):
        parsed = {}
        for pattern, raw in weights.items():
            key = pattern_from_string(pattern) if isinstance(pattern, str) else tuple(
                int(b) for b in pattern
            )
            parsed[key] = fraction_from(raw)
        self.weights = parsed

    def positive_patterns(self):
        return sorted(p for p, w in self.weights.items() if w > 0)

    def weight(self, pattern) -> Fraction:
        return self.weights.get(tuple(int(b) for b in pattern), Fraction(0))


@dataclass(frozen=True)
class MeasurementSetup:
    """State + N measurements + selection distribution, on one space."""

    state: DensityOperator
    measurements: tuple
    selection: SelectionDistribution

    def __init__(self, state, measurements, selection):
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "measurements", tuple(measurements))
        object.__setattr__(self, "selection", selection)

    @property
    def dim(self) -> int:
        return self.state.dim

    @property
    def size(self) -> int:
        return len(self.measurements)


def validate_setup(setup: MeasurementSetup) -> list:
    """All invariant violations as human-readable diagnostics (empty = valid).

    Beyond shape checks, this enforces the compatibility requirement: any
    pattern with positive selection weight may only name measurements whose
    projectors pairwise commute.
    """
    diagnostics = []
    names = [m.name for m in setup.measurements]
    if len(set(names)) != len(names):
        diagnostics.append(f"measurement names are not distinct: {names}")
    for m in setup.measurements:
        if m.dim != setup.dim:
            diagnostics.append(
                f"measurement {m.name!r} acts on dimension {m.dim}, state has {setup.dim}"
            )

    n = setup.size
    total = Fraction(0)
    for pattern, weight in setup.selection.weights.items():
        bits = pattern_to_string(pattern)
        if len(pattern) != n or any(b not in (0, 1) for b in pattern):
            diagnostics.append(f"selection pattern {bits} does not index {n} measurements")
            continue
        if weight < 0:
            diagnostics.append(f"selection weight of pattern {bits} is negative: {weight}")
            continue
        total += weight
        if weight == 0:
            continue
        selected = [i for i, bit in enumerate(pattern) if bit]
        for i, j in itertools.combinations(selected, 2):
            if not _measurements_commute(setup.measurements[i], setup.measurements[j]):
                diagnostics.append(
                    f"pattern {bits} has positive weight but selects incompatible "
                    f"measurements {setup.measurements[i].name!r} and {setup.measurements[j].name!r}"
                )
                break
    if total != 1:
        diagnostics.append(f"selection weights sum to {total}, expected exactly 1")
    return diagnostics


def _measurements_commute(a: Measurement, b: Measurement) -> bool:
    # pairwise projector commutators: stricter than operator-level
    # commutation but equivalent for projective measurements
    for p in a.projectors.values():
        for q in b.projectors.values():
            comm = p.matrix @ q.matrix - q.matrix @ p.matrix
            if np.linalg.norm(comm) > TOL_OP:
                return False
    return True


def joint_trace(setup: MeasurementSetup, outcomes) -> float:
    """tr(W P_A1 ... P_Ak) for a named outcome per selected measurement.

    ``outcomes`` maps measurement name -> outcome label; the product runs
    in ascending measurement order and is re-checked in reversed order,
    which is a no-op exactly when the selected set commutes.
    """
    by_name = {m.name: m for m in setup.measurements}
    matrices = []
    for m in setup.measurements:
        if m.name in outcomes:
            matrices.append(by_name[m.name].projectors[outcomes[m.name]].matrix)
    unknown = set(outcomes) - set(by_name)
    if unknown:
        raise DomainError(f"unknown measurement names {sorted(unknown)}")
    return _product_trace(setup.state.matrix, matrices)


def _product_trace(state: np.ndarray, matrices) -> float:
    if matrices:
        forward = reduce(np.matmul, matrices)
        backward = reduce(np.matmul, list(reversed(matrices)))
        t = float(np.trace(state @ forward).real)
        t_rev = float(np.trace(state @ backward).real)
        if abs(t - t_rev) > TOL_PROB:
            raise NumericalError(
                f"product trace depends on operator order ({t!r} vs {t_rev!r}); "
                "the selected measurements do not commute"
            )
    else:
        t = float(np.trace(state).real)
    if t < -TOL_PROB or t > 1.0 + TOL_PROB:
        raise NumericalError(f"joint probability {t!r} outside [0, 1]")
    return min(max(t, 0.0), 1.0)


def _rationalize_block(traces, pattern_bits: str, require_exact: bool):
    """Turn a block's outcome probabilities into exact rationals summing to 1.

    Values within TOL_RAT of a rational with denominator <= 2^16 snap to it
    (worked fixtures then match exactly).  Otherwise the block keeps the
    exact binary value of each float, with the sub-femto float summation
    slack folded into the largest entry so block mass stays exactly 1.
    """
    snapped = [Fraction(t).limit_denominator(RATIONAL_MAX_DEN) for t in traces]
    if (
        all(abs(float(s) - t) <= TOL_RAT for s, t in zip(snapped, traces))
        and sum(snapped) == 1
    ):
        return snapped, True
    if require_exact:
        worst = max(abs(float(s) - t) for s, t in zip(snapped, traces))
        raise RationalizationError(
            f"pattern {pattern_bits}: outcome probabilities are not rationals with "
            f"denominator <= {RATIONAL_MAX_DEN} (residual {worst:.3e} > {TOL_RAT})"
        )
    fracs = [Fraction(t) for t in traces]
    deficit = 1 - sum(fracs)
    if deficit != 0:
        k = max(range(len(fracs)), key=lambda i: fracs[i])
        fracs[k] += deficit
        if fracs[k] < 0:
            raise NumericalError(f"pattern {pattern_bits}: block probabilities sum far from 1")
    return fracs, False


def point_label(parts) -> str:
    return " ".join(parts)


def build_unified_space(
    setup: MeasurementSetup,
    include_zero_patterns: bool = False,
    require_exact: bool = False,
) -> FiniteProbabilitySpace:
    """The single Kolmogorov space unifying all selected experiments.

    Sample points are per-measurement outcome assignments (``none`` for
    not-performed); the weight of a point in pattern eta is
    tr(W prod P) * selection(eta), converted to an exact rational.  Named
    events: ``sel=<bits>`` for each conditioning pattern, ``<name>=<label>``
    for each outcome, and ``performed=<name>`` for the coarse event that a
    measurement ran at all.

    Patterns of selection weight zero carry no probability; by default
    their points are omitted, ``include_zero_patterns`` keeps them (with
    explicit zero weight) to reproduce the full formal event table.
    """
    diagnostics = validate_setup(setup)
    if diagnostics:
        raise PreconditionError("invalid setup: " + "; ".join(diagnostics))

    n = setup.size
    if include_zero_patterns:
        patterns = list(itertools.product((0, 1), repeat=n))
    else:
        patterns = setup.selection.positive_patterns()

    weights = {}
    pattern_members = {}
    notes = []
    for pattern in patterns:
        bits = pattern_to_string(pattern)
        p_sel = setup.selection.weight(pattern)
        selected = [i for i, bit in enumerate(pattern) if bit]
        combos = list(itertools.product(*(setup.measurements[i].spectrum for i in selected)))

        if p_sel > 0:
            traces = [
                _product_trace(
                    setup.state.matrix,
                    [setup.measurements[i].projectors[label].matrix for i, label in zip(selected, combo)],
                )
                for combo in combos
            ]
            fracs, exact = _rationalize_block(traces, bits, require_exact)
            if not exact:
                notes.append(f"inexact rationalization in pattern {bits}")
        else:
            fracs = [Fraction(0)] * len(combos)

        members = []
        for combo, frac in zip(combos, fracs):
            parts = [NOT_PERFORMED] * n
            for i, label in zip(selected, combo):
                parts[i] = label
            point = point_label(parts)
            weights[point] = frac * p_sel
            members.append(point)
        pattern_members[f"sel={bits}"] = members

    named = dict(pattern_members)
    for i, m in enumerate(setup.measurements):
        for label in m.spectrum:
            named[f"{m.name}={label}"] = [
                point for point in weights if point.split(" ")[i] == label
            ]
        named[f"performed={m.name}"] = [
            point for point in weights if point.split(" ")[i] != NOT_PERFORMED
        ]
    return FiniteProbabilitySpace(weights, named, notes=notes)


def reproduce_conditional(
    setup: MeasurementSetup,
    unified: FiniteProbabilitySpace,
    outcomes,
    pattern,
) -> Fraction:
    """P(these outcomes | exactly this set of measurements performed).

    ``outcomes`` maps measurement name -> outcome label for every
    measurement selected by ``pattern``.  By construction this equals the
    quantum joint probability tr(W prod P) within TOL_PROB.
    """
    pattern = tuple(int(b) for b in pattern)
    if setup.selection.weight(pattern) <= 0:
        raise ConditioningError(
            f"pattern {pattern_to_string(pattern)} has selection probability zero"
        )
    selected_names = [m.name for m, bit in zip(setup.measurements, pattern) if bit]
    if set(outcomes) != set(selected_names):
        raise DomainError(
            f"outcomes must cover exactly the selected measurements {selected_names}"
        )
    event = unified.full_event()
    for name in selected_names:
        event = event & unified.event(f"{name}={outcomes[name]}")
    return unified.conditional(event, unified.event(f"sel={pattern_to_string(pattern)}"))


def reproduce_conditional_coarse(
    unified: FiniteProbabilitySpace, measurement_name: str, outcome_label: str
) -> Fraction:
    """P(outcome | the measurement was performed at all).

    Conditions on the union of all patterns selecting the measurement
    rather than on one pattern; the unification contract makes this equal
    tr(W P_outcome) as well.
    """
    return unified.conditional(
        unified.event(f"{measurement_name}={outcome_label}"),
        unified.event(f"performed={measurement_name}"),
    )


def co_performed_pairs(setup: MeasurementSetup) -> PairSet:
    """Pairs of measurements that some positively-weighted pattern runs together."""
    pairs = set()
    for pattern in setup.selection.positive_patterns():
        selected = [i + 1 for i, bit in enumerate(pattern) if bit]
        pairs.update(itertools.combinations(selected, 2))
    if not pairs:
        raise DomainError("no two measurements are ever performed together")
    return PairSet(setup.size, pairs)


def observed_correlation_vector(
    setup: MeasurementSetup,
    unified: FiniteProbabilitySpace,
    outcomes=None,
    pair_set: PairSet | None = None,
) -> CorrelationVector:
    """Absolute (unconditional) statistics of one outcome event per measurement.

    These are the empirically observed frequencies: each entry is the
    quantum probability multiplied by the selection probability of the
    pattern(s) producing it.  Defaults: the first spectrum label of each
    measurement, over the pairs that are ever co-performed.
    """
    if outcomes is None:
        outcomes = {m.name: m.spectrum[0] for m in setup.measurements}
    if pair_set is None:
        pair_set = co_performed_pairs(setup)
    events = [unified.event(f"{m.name}={outcomes[m.name]}") for m in setup.measurements]
    return correlation_vector_of(unified, events, pair_set)


def selection_vector(setup: MeasurementSetup, pair_set: PairSet | None = None) -> CorrelationVector:
    """Selection probabilities as a correlation vector on the same layout.

    Singles are P(measurement i performed); pairs are P(i and j both
    performed).  The observed statistics factor as quantum times this.
    """
    if pair_set is None:
        pair_set = co_performed_pairs(setup)
    singles = []
    for i in range(setup.size):
        singles.append(
            sum(
                (w for p, w in setup.selection.weights.items() if w > 0 and p[i]),
                Fraction(0),
            )
        )
    pairs = []
    for i, j in pair_set.pairs:
        pairs.append(
            sum(
                (
                    w
                    for p, w in setup.selection.weights.items()
                    if w > 0 and p[i - 1] and p[j - 1]
                ),
                Fraction(0),
            )
        )
    return CorrelationVector(tuple(singles), tuple(pairs))


def spin_half_measurement(name: str, direction, factor: int = 1, factors: int = 1) -> Measurement:
    """Spin measurement along a direction on one tensor factor of (C^2)^k.

    ``factor`` is 1-based.  Outcomes are "up" and "down".
    """
    if not 1 <= factor <= factors:
        raise DomainError(f"factor {factor} outside 1..{factors}")
    up = spin_up_vector(direction)
    down = spin_up_vector([-c for c in np.asarray(direction, dtype=float)])
    out = {}
    for label, vec in (("up", up), ("down", down)):
        local = np.outer(vec.amplitudes, vec.amplitudes.conj())
        matrix = np.eye(1, dtype=np.complex128)
        for k in range(1, factors + 1):
            matrix = np.kron(matrix, local if k == factor else np.eye(2, dtype=np.complex128))
        out[label] = Projector(matrix)
    return Measurement(name, ("up", "down"), out)


def setup_to_json_dict(setup: MeasurementSetup) -> dict:
    return {
        "dim": setup.dim,
        "state": complex_matrix_to_json(setup.state.matrix),
        "measurements": [
            {
                "name": m.name,
                "spectrum": list(m.spectrum),
                "projectors": {
                    label: complex_matrix_to_json(m.projectors[label].matrix)
                    for label in m.spectrum
                },
            }
            for m in setup.measurements
        ],
        "selection": {
            pattern_to_string(p): fraction_to_string(w)
            for p, w in sorted(setup.selection.weights.items())
        },
    }


def setup_from_json_dict(data) -> MeasurementSetup:
    """Parse a setup file: state matrix, measurements, selection weights.

    A measurement is either explicit ({"name", "spectrum", "projectors"})
    or a generator directive ({"name", "spin_half": {"direction",
    "factor", "factors"}}).
    """
    state = DensityOperator(complex_matrix_from_json(data["state"]))
    if "dim" in data and int(data["dim"]) != state.dim:
        raise DimensionError(f"declared dim {data['dim']} but state has dim {state.dim}")
    measurements = []
    for entry in data["measurements"]:
        if "spin_half" in entry:
            g = entry["spin_half"]
            measurements.append(
                spin_half_measurement(
                    entry["name"],
                    g["direction"],
                    factor=int(g.get("factor", 1)),
                    factors=int(g.get("factors", 1)),
                )
            )
        else:
            projectors = {
                label: Projector(complex_matrix_from_json(matrix))
                for label, matrix in entry["projectors"].items()
            }
            measurements.append(Measurement(entry["name"], entry["spectrum"], projectors))
    selection = SelectionDistribution(data["selection"])
    return MeasurementSetup(state, measurements, selection)
