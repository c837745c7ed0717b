from typing import Callable

import numpy as np

from motif_exposure.etc.enums import ConditionKind
from motif_exposure.etc.errors import ArgumentException
from motif_exposure.model.exposure import ExposureCondition, PredicateCondition
from motif_exposure.model.graph import Graph
from motif_exposure.model.motif import MotifSchema


ConditionFactory = Callable[..., ExposureCondition]


class ConditionRegistry:
    """
    Named builtin predicates, each compiled into a condition over a schema.
    """
    _factories: dict[str, ConditionFactory] = {}

    @classmethod
    def register(cls, name: str):
        """
        Decorator registering a condition factory under a name. The factory
        receives the schema, the label and keyword parameters.
        """
        def decorator(factory: ConditionFactory) -> ConditionFactory:
            cls._factories[name] = factory
            return factory

        return decorator

    @classmethod
    def names(cls) -> list[str]:
        return sorted(cls._factories)

    @classmethod
    def build(cls,
              name: str,
              schema: MotifSchema,
              label: str = None,
              **params,
              ) -> ExposureCondition:
        """
        Compile a named predicate for a schema.
        :param name: The registered predicate name
        :param schema: The representation schema
        :param label: Condition label, defaults to the name
        :param params: Predicate parameters
        :return: The compiled condition
        """
        if name not in cls._factories:
            raise ArgumentException(
                f'Unknown predicate {name}, known: {", ".join(cls.names())}'
            )

        return cls._factories[name](schema, label or name, **params)


class NeighborFractionCondition(ExposureCondition):
    """
    Own treatment crossed with whether the share of treated neighbors exceeds q.

    The share is exact, taken over every neighbor in the graph. It is read
    off the ego column of whatever world is tested, so replicate and
    re-randomized representations are handled like the observed one.
    Isolated units have a share of 0.
    """
    kind = ConditionKind.PREDICATE
    name = 'fractional-q'

    def __init__(self,
                 g: Graph,
                 q: float,
                 treated: bool = True,
                 above: bool = True,
                 label: str = None,
                 ):
        """
        Fractional q neighborhood exposure cell.
        :param g: The graph the units live on
        :param q: Fraction threshold in [0, 1)
        :param treated: Own treatment of the cell
        :param above: Whether the cell holds shares above q, or at or below it
        :param label: Condition label
        """
        if not 0.0 <= q < 1.0:
            raise ArgumentException(f'q must lie in [0, 1), got {q}')

        super().__init__(label or self.name)

        self.q = q
        self.treated = treated
        self.above = above
        self.params = {'q': q, 'treated': treated, 'above': above}
        self._adjacency = g.adjacency
        self._degrees = g.degrees.astype(np.float64)

    def treated_fraction(self, z: np.ndarray) -> np.ndarray:
        """
        Share of treated neighbors of every unit under an assignment.
        """
        treated = self._adjacency @ np.asarray(z, dtype=np.float64)

        return np.divide(treated, self._degrees, out=np.zeros_like(treated),
                         where=self._degrees > 0)

    def members(self, R: np.ndarray) -> np.ndarray:     # pylint: disable=invalid-name
        if R.shape[0] != len(self._degrees):
            raise ArgumentException(
                f'Representation has {R.shape[0]} rows, graph has {len(self._degrees)} nodes'
            )

        z = R[:, 0]
        fraction = self.treated_fraction(z)
        exposed = fraction > self.q if self.above else fraction <= self.q
        ego = z > 0.5 if self.treated else z <= 0.5

        return exposed & ego

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'label': self.label,
            'name': self.name,
            'params': self.params,
        }


def _unit_cube(schema: MotifSchema) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return np.zeros(schema.M), np.ones(schema.M), np.ones(schema.M, dtype=bool)


@ConditionRegistry.register('everything')
def everything(schema: MotifSchema, label: str) -> PredicateCondition:
    lows, highs, closed = _unit_cube(schema)

    return PredicateCondition('everything', {}, lows, highs, label, closed=closed)


@ConditionRegistry.register('ego-treated')
def ego_treated(schema: MotifSchema, label: str, treated: bool = True) -> PredicateCondition:
    lows, highs, closed = _unit_cube(schema)
    if treated:
        lows[0] = 0.5
    else:
        highs[0] = 0.5

    return PredicateCondition('ego-treated', {'treated': treated}, lows, highs, label,
                              closed=closed)


@ConditionRegistry.register('fractional-q')
def fractional_q(schema: MotifSchema,       # pylint: disable=unused-argument
                 label: str,
                 g: Graph = None,
                 q: float = 0.5,
                 treated: bool = True,
                 above: bool = True,
                 ) -> NeighborFractionCondition:
    if g is None:
        raise ArgumentException('The fractional-q predicate needs the graph')

    return NeighborFractionCondition(g, q, treated, above, label)
