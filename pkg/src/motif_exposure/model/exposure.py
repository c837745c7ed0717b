import numpy as np
import pandas as pd

from motif_exposure.etc.enums import ConditionKind
from motif_exposure.etc.errors import ArgumentException


class ExposureCondition:
    """
    A region of the representation space, tested row-wise on N x M matrices.
    """
    kind: ConditionKind = None

    def __init__(self, label: str):
        self.label = label

    def members(self, R: np.ndarray) -> np.ndarray:     # pylint: disable=invalid-name
        """
        Membership of every unit whose representation is a row of R.
        :param R: N x M representation matrix of one world (observed or a replicate)
        :return: Boolean vector of length N
        """
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


class BoxCondition(ExposureCondition):
    """
    Axis-aligned box: low < r <= high per dimension. A lower bound at 0 is
    closed unless the box was cut there, so the root box is the closed unit cube.
    """
    kind = ConditionKind.BOX

    def __init__(self,
                 lows: np.ndarray,
                 highs: np.ndarray,
                 label: str = 'box',
                 *,
                 closed: np.ndarray = None,
                 ):
        """
        Axis-aligned box condition.
        :param lows: Length-M lower bounds in [0, 1]
        :param highs: Length-M upper bounds in [0, 1]
        :param label: Condition label
        :param closed: Length-M flags of inclusive lower bounds, defaults to lows <= 0
        """
        super().__init__(label)

        self.lows = np.asarray(lows, dtype=np.float64)
        self.highs = np.asarray(highs, dtype=np.float64)

        if self.lows.shape != self.highs.shape or self.lows.ndim != 1:
            raise ArgumentException('Box bounds must be two vectors of equal length')
        if (self.lows < 0).any() or (self.highs > 1).any() \
                or (self.lows > 1).any() or (self.highs < 0).any():
            raise ArgumentException('Box bounds must lie within [0, 1]')

        self.closed = self.lows <= 0 if closed is None \
            else np.asarray(closed, dtype=bool) & (self.lows <= 0)

    @classmethod
    def everything(cls, dims: int, label: str = 'everything') -> 'BoxCondition':
        return cls(np.zeros(dims), np.ones(dims), label)

    @property
    def is_empty(self) -> bool:
        return bool((self.highs < self.lows).any()
                    or ((self.highs == self.lows) & ~self.closed).any())

    def members(self, R: np.ndarray) -> np.ndarray:     # pylint: disable=invalid-name
        if self.is_empty:
            return np.zeros(R.shape[:-1], dtype=bool)

        above = np.where(self.closed, R >= self.lows, R > self.lows)
        below = R <= self.highs

        return (above & below).all(axis=-1)

    def contains(self, r: np.ndarray) -> bool:
        return bool(self.members(np.asarray(r, dtype=np.float64)[None, :])[0])

    def split(self, m: int, theta: float) -> tuple['BoxCondition', 'BoxCondition']:
        """
        The two children of a split r[m] <= theta (left) and r[m] > theta (right).
        """
        left_highs = self.highs.copy()
        left_highs[m] = min(theta, self.highs[m])
        right_lows = self.lows.copy()
        right_lows[m] = max(theta, self.lows[m])
        right_closed = self.closed.copy()
        right_closed[m] = False

        return (
            BoxCondition(self.lows.copy(), left_highs, f'{self.label}L', closed=self.closed),
            BoxCondition(right_lows, self.highs.copy(), f'{self.label}R', closed=right_closed),
        )

    def intersection(self, other: 'BoxCondition', label: str = None) -> 'BoxCondition':
        lows = np.maximum(self.lows, other.lows)
        closed = np.where(self.lows == other.lows, self.closed & other.closed,
                          np.where(self.lows > other.lows, self.closed, other.closed))

        return BoxCondition(lows, np.minimum(self.highs, other.highs),
                            label or f'{self.label}&{other.label}', closed=closed)

    def subset_of(self, other: 'BoxCondition') -> bool:
        return bool((self.lows >= other.lows).all() and (self.highs <= other.highs).all())

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'label': self.label,
            'lows': self.lows.tolist(),
            'highs': self.highs.tolist(),
            'closed': self.closed.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'BoxCondition':
        return cls(payload['lows'], payload['highs'], payload['label'],
                   closed=payload.get('closed'))


class PredicateCondition(BoxCondition):
    """
    A box compiled from a named builtin predicate.
    """
    kind = ConditionKind.PREDICATE

    def __init__(self,
                 name: str,
                 params: dict,
                 lows: np.ndarray,
                 highs: np.ndarray,
                 label: str = None,
                 *,
                 closed: np.ndarray = None,
                 ):
        super().__init__(lows, highs, label or name, closed=closed)

        self.name = name
        self.params = params

    def to_dict(self) -> dict:
        payload = super().to_dict()
        payload['name'] = self.name
        payload['params'] = self.params

        return payload


class UnitSetCondition(ExposureCondition):
    """
    The K units closest to a reference representation under a weighted L1
    distance. Distance ties are broken by ascending node index, and the rule
    is applied afresh to every world it is tested on.
    """
    kind = ConditionKind.UNIT_SET

    def __init__(self,
                 reference: np.ndarray,
                 weights: np.ndarray,
                 K: int,       # pylint: disable=invalid-name
                 label: str = 'knn',
                 ):
        """
        Nearest-neighbor unit set condition.
        :param reference: Length-M reference representation
        :param weights: Length-M non-negative dimension weights
        :param K: Number of units in the set
        :param label: Condition label
        """
        super().__init__(label)

        if K < 1:
            raise ArgumentException(f'K must be at least 1, got {K}')

        self.reference = np.asarray(reference, dtype=np.float64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.K = K      # pylint: disable=invalid-name

    def distances(self, R: np.ndarray) -> np.ndarray:   # pylint: disable=invalid-name
        return (np.abs(R - self.reference) * self.weights).sum(axis=-1)

    def ranks(self, R: np.ndarray) -> np.ndarray:       # pylint: disable=invalid-name
        """
        Rank of every unit by distance to the reference, 0 for the closest.
        """
        order = np.argsort(self.distances(R), kind='stable')
        ranks = np.empty(len(order), dtype=np.int64)
        ranks[order] = np.arange(len(order))

        return ranks

    def members(self, R: np.ndarray) -> np.ndarray:     # pylint: disable=invalid-name
        if self.K > R.shape[0]:
            raise ArgumentException(f'K={self.K} exceeds the {R.shape[0]} units')

        return self.ranks(R) < self.K

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'label': self.label,
            'reference': self.reference.tolist(),
            'weights': self.weights.tolist(),
            'K': self.K,
        }


class PositivityVerdict:
    def __init__(self,
                 ok: bool,
                 violating_fraction: float,
                 *,
                 epsilon: float = None,
                 delta: float = None,
                 ):
        """
        Outcome of a positivity check.
        :param ok: Whether the violating fraction is within delta
        :param violating_fraction: Share of units with probability at most epsilon
        :param epsilon: The probability threshold used
        :param delta: The tolerated fraction used
        """
        self.ok = ok
        self.violating_fraction = violating_fraction
        self.epsilon = epsilon
        self.delta = delta

    def to_dict(self) -> dict:
        return {
            'ok': self.ok,
            'violating_fraction': self.violating_fraction,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'PositivityVerdict':
        return cls(payload['ok'], payload['violating_fraction'])

    def __repr__(self):
        return f'PositivityVerdict(ok={self.ok}, violating_fraction={self.violating_fraction:.4f})'


class ExposureProbabilityTable:
    def __init__(self,
                 probs: np.ndarray,
                 labels: list[str],
                 replicates: int,
                 design_tag: str,
                 master_seed: int,
                 ):
        """
        Monte Carlo exposure probabilities of every unit for several conditions.
        :param probs: N x K matrix, entries in [0, B/(B+1)]
        :param labels: Condition labels, one per column
        :param replicates: Number of replicates B
        :param design_tag: Provenance label of the design
        :param master_seed: Master seed of the replicate stream
        """
        if probs.shape[1] != len(labels):
            raise ArgumentException('One label per probability column is required')

        self.probs = probs
        self.labels = labels
        self.replicates = replicates
        self.design_tag = design_tag
        self.master_seed = master_seed

    def column(self, label: str) -> np.ndarray:
        try:
            return self.probs[:, self.labels.index(label)]
        except ValueError as e:
            raise ArgumentException(f'No probability column labelled {label}') from e

    def to_frame(self, id_map: list[str]) -> pd.DataFrame:
        frame = pd.DataFrame(self.probs, columns=self.labels)
        frame.insert(0, 'node_id', id_map)

        return frame

    def metadata(self) -> dict:
        return {
            'B': self.replicates,
            'design': self.design_tag,
            'masterSeed': self.master_seed,
            'conditions': self.labels,
        }
