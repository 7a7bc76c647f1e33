"""Finite Kolmogorov probability spaces with exact rational weights.

Sample points are string labels, events are subsets of points, and every
weight is a ``fractions.Fraction``, so probabilities and Bayes-law
conditionals come out exact (the worked fixtures match with zero
tolerance).  Floats are rejected as weights on purpose.

``join_conditional_models`` implements the conditioning-aware merge: given
sub-models that each describe outcomes under one experimental condition,
it enlarges the event algebra with the conditioning events themselves and
mixes the blocks, after which the original numbers reappear as
conditional probabilities.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConditioningError, DomainError, LayoutError, NormalizationError, OwnershipError
from .polytope import CorrelationVector, PairSet
from .serialize import fraction_from, fraction_to_string


@dataclass(frozen=True)
class Event:
    """A measurable subset of a space's sample points."""

    members: frozenset

    def __init__(self, members):
        object.__setattr__(self, "members", frozenset(members))

    def __and__(self, other: "Event") -> "Event":
        return Event(self.members & other.members)

    def __or__(self, other: "Event") -> "Event":
        return Event(self.members | other.members)

    def __len__(self) -> int:
        return len(self.members)


class FiniteProbabilitySpace:
    """Sample points with exact rational weights and a named event algebra.

    Immutable after construction; all queries are pure functions.
    """

    def __init__(self, weights, named_events=None, notes=()):
        """``weights`` maps point label -> rational weight (Fraction, int,
        or "num/den" string); ``named_events`` maps event name -> iterable
        of point labels."""
        point_weights = {}
        for label, raw in weights.items():
            if not isinstance(label, str):
                raise DomainError(f"point labels must be strings, got {label!r}")
            weight = raw if isinstance(raw, Fraction) else fraction_from(raw)
            if weight < 0:
                raise DomainError(f"negative weight {weight} for point {label!r}")
            point_weights[label] = weight
        if not point_weights:
            raise DomainError("a probability space needs at least one point")
        total = sum(point_weights.values())
        if total != 1:
            raise NormalizationError(f"weights sum to {total}, expected exactly 1")

        points = frozenset(point_weights)
        named = {}
        for name, labels in (named_events or {}).items():
            members = frozenset(labels)
            if not members <= points:
                raise OwnershipError(
                    f"named event {name!r} references foreign points {sorted(members - points)}"
                )
            named[name] = members

        self.points = tuple(point_weights)
        self.weights = point_weights
        self.named_events = named
        self.notes = tuple(notes)

    def event(self, name: str) -> Event:
        if name not in self.named_events:
            raise DomainError(f"no event named {name!r}")
        return Event(self.named_events[name])

    def event_of(self, labels) -> Event:
        event = Event(labels)
        self._require_owned(event)
        return event

    def full_event(self) -> Event:
        return Event(self.points)

    def _require_owned(self, event: Event) -> None:
        foreign = event.members - set(self.points)
        if foreign:
            raise OwnershipError(f"event references foreign points {sorted(foreign)}")

    def _resolve(self, event) -> Event:
        if isinstance(event, str):
            return self.event(event)
        self._require_owned(event)
        return event

    def probability(self, event) -> Fraction:
        """Measure of an event (an Event or the name of a registered one)."""
        event = self._resolve(event)
        return sum((self.weights[p] for p in event.members), Fraction(0))

    def conditional(self, event, given) -> Fraction:
        """Bayes-law conditional probability P(event | given)."""
        event = self._resolve(event)
        given = self._resolve(given)
        denom = self.probability(given)
        if denom == 0:
            raise ConditioningError("cannot condition on an event of probability zero")
        return self.probability(event & given) / denom

    def to_json_dict(self) -> dict:
        out = {
            "points": {label: fraction_to_string(self.weights[label]) for label in self.points},
            "events": {name: sorted(members) for name, members in sorted(self.named_events.items())},
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json_dict(cls, data) -> "FiniteProbabilitySpace":
        return cls(
            weights={label: fraction_from(raw) for label, raw in data["points"].items()},
            named_events=data.get("events", {}),
            notes=tuple(data.get("notes", ())),
        )


def join_conditional_models(models, mixing) -> FiniteProbabilitySpace:
    """Merge per-condition sub-models into one space over a larger algebra.

    Parameters
    ----------
    models : sequence of (condition_name, FiniteProbabilitySpace)
    mixing : mapping condition_name -> rational weight of that condition

    The result lives on the disjoint union of the sub-model sample spaces
    (labels become "condition:label"); each condition name becomes a named
    event covering its block, and outcome names shared between blocks map
    to the union of their per-block instances, so "H happened" means "H
    happened under whichever condition held".
    """
    models = list(models)
    names = [name for name, _space in models]
    if len(set(names)) != len(names):
        raise DomainError(f"condition names must be distinct, got {names}")
    mix = {name: fraction_from(raw) for name, raw in mixing.items()}
    if set(mix) != set(names):
        raise DomainError("mixing must weight exactly the given condition names")
    if any(w < 0 for w in mix.values()):
        raise DomainError("mixing weights must be nonnegative")
    if sum(mix.values()) != 1:
        raise NormalizationError(f"mixing weights sum to {sum(mix.values())}, expected exactly 1")

    condition_names = set(names)
    for _condition, space in models:
        clash = condition_names & (set(space.points) | set(space.named_events))
        if clash:
            raise DomainError(f"condition names collide with outcome names: {sorted(clash)}")

    weights = {}
    named = {}
    for condition, space in models:
        block = []
        for label in space.points:
            joined = f"{condition}:{label}"
            weights[joined] = space.weights[label] * mix[condition]
            block.append(joined)
        named[condition] = frozenset(block)
        for outcome, members in space.named_events.items():
            qualified = {f"{condition}:{label}" for label in members}
            named[outcome] = frozenset(named.get(outcome, frozenset()) | qualified)
        # every sub-model point doubles as an outcome name of its block
        for label in space.points:
            named[label] = frozenset(named.get(label, frozenset()) | {f"{condition}:{label}"})
    return FiniteProbabilitySpace(weights, named)


def correlation_vector_of(space: FiniteProbabilitySpace, events, s: PairSet) -> CorrelationVector:
    """Correlation vector (singles and S-pairs) of n events in one space.

    Because every entry is a measure-of-intersection inside a single
    Kolmogorov space, the result is always a member of C(n, S).
    """
    events = [space._resolve(e) for e in events]
    if len(events) != s.n:
        raise LayoutError(f"got {len(events)} events for a pair set over n={s.n}")
    singles = tuple(space.probability(e) for e in events)
    pairs = tuple(space.probability(events[i - 1] & events[j - 1]) for i, j in s.pairs)
    return CorrelationVector(singles, pairs)
