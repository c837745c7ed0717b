import numpy as np

from motif_exposure.etc.enums import EstimatorKind
from motif_exposure.etc.errors import EstimationException
from .exposure import PositivityVerdict


class EstimateReport:
    def __init__(self,
                 label: str,
                 kind: EstimatorKind,
                 point: float,
                 *,
                 se: float = 0.0,
                 draws: np.ndarray = None,
                 member_count: int = 0,
                 positivity: PositivityVerdict = None,
                 seeds: dict = None,
                 hyperparameters: dict = None,
                 interval: tuple[float, float] = None,
                 flags: list[str] = None,
                 dropped_count: int = 0,
                 ):
        """
        A point estimate with its bootstrap uncertainty and provenance.
        :param label: The estimand label
        :param kind: Horvitz-Thompson or Hajek
        :param point: The point estimate
        :param se: Bootstrap standard error
        :param draws: Bootstrap draws, kept for joint differences
        :param member_count: Units in the condition
        :param positivity: Positivity verdict of the condition
        :param seeds: Seeds the estimate depends on
        :param hyperparameters: Settings the estimate depends on
        :param interval: Percentile bootstrap interval
        :param flags: Markers such as "independent" or "gate degenerate"
        :param dropped_count: Members dropped for zero exposure probability
        """
        if se < 0:
            raise EstimationException(f'Standard error must be non-negative, got {se}')

        self.label = label
        self.kind = kind
        self.point = float(point)
        self.se = float(se)
        self.draws = draws
        self.member_count = member_count
        self.positivity = positivity
        self.seeds = seeds or {}
        self.hyperparameters = hyperparameters or {}
        self.interval = interval
        self.flags = flags or []
        self.dropped_count = dropped_count

    @property
    def bootstrap_replicates(self) -> int:
        return 0 if self.draws is None else len(self.draws)

    def to_dict(self) -> dict:
        payload = {
            'label': self.label,
            'kind': self.kind.value,
            'point': self.point,
            'se': self.se,
            'member_count': self.member_count,
            'positivity': self.positivity.to_dict() if self.positivity else None,
            'B': self.bootstrap_replicates,
            'seeds': self.seeds,
        }
        if self.hyperparameters:
            payload['hyperparameters'] = self.hyperparameters
        if self.interval is not None:
            payload['interval'] = list(self.interval)
        if self.flags:
            payload['flags'] = self.flags
        if self.dropped_count:
            payload['dropped_count'] = self.dropped_count

        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> 'EstimateReport':
        positivity = payload.get('positivity')

        return cls(
            label=payload['label'],
            kind=EstimatorKind(payload['kind']),
            point=payload['point'],
            se=payload.get('se', 0.0),
            member_count=payload.get('member_count', 0),
            positivity=PositivityVerdict.from_dict(positivity) if positivity else None,
            seeds=payload.get('seeds'),
            hyperparameters=payload.get('hyperparameters'),
            interval=tuple(payload['interval']) if payload.get('interval') else None,
            flags=payload.get('flags'),
            dropped_count=payload.get('dropped_count', 0),
        )

    def __repr__(self):
        return f'EstimateReport({self.label}: {self.point:.4f} ± {self.se:.4f})'


class FocalSet:
    def __init__(self,
                 units: np.ndarray,
                 hop: int,
                 conditions: tuple[str, str],
                 ):
        """
        Units whose n-hop ego networks are pairwise disjoint, all observed in
        one of the two tested conditions.
        :param units: Focal node indices
        :param hop: The hop count n
        :param conditions: Labels of the two conditions
        """
        self.units = units
        self.hop = hop
        self.conditions = conditions

    def __len__(self):
        return len(self.units)


class InferenceResult:
    def __init__(self,
                 p_value: float,
                 statistic: float,
                 focal_set: FocalSet,
                 draws: np.ndarray,
                 seed: int,
                 ):
        """
        Result of a randomization test.
        :param p_value: The p-value, in (0, 1]
        :param statistic: The observed test statistic
        :param focal_set: The focal units the test re-randomized around
        :param draws: The statistic under every re-randomization
        :param seed: Seed of the re-randomizations
        """
        self.p_value = p_value
        self.statistic = statistic
        self.focal_set = focal_set
        self.draws = draws
        self.seed = seed

    def to_dict(self) -> dict:
        return {
            'p_value': self.p_value,
            'statistic': self.statistic,
            'focal_units': len(self.focal_set),
            'hop': self.focal_set.hop,
            'conditions': list(self.focal_set.conditions),
            'B': len(self.draws),
            'seed': self.seed,
        }


class FractionalQReport:
    def __init__(self,
                 q: float,
                 cells: dict[str, EstimateReport | None],
                 gate: EstimateReport,
                 ):
        """
        Own treatment crossed with whether the treated-neighbor fraction exceeds q.
        :param q: The fraction threshold
        :param cells: Estimates of the four cells by label, None where a cell is empty
        :param gate: Treated-above-q minus control-at-or-below-q
        """
        self.q = q
        self.cells = cells
        self.gate = gate

    def to_dict(self) -> dict:
        return {
            'q': self.q,
            'cells': {
                label: report.to_dict() if report else None
                for label, report in self.cells.items()
            },
            'gate': self.gate.to_dict(),
        }
