import numpy as np

from motif_exposure.etc.enums import MetricKind
from motif_exposure.etc.errors import ArgumentException
from .estimate import EstimateReport


class DistanceMetric:
    def __init__(self,
                 kind: MetricKind,
                 weights: np.ndarray,
                 diagnostics: dict = None,
                 ):
        """
        Weighted L1 distance between representations.
        :param kind: Identical weights or regression-coefficient weights
        :param weights: Length-M non-negative weights
        :param diagnostics: Fit diagnostics of regression weights
        """
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim != 1 or not np.isfinite(weights).all() or (weights < 0).any():
            raise ArgumentException('Metric weights must be a finite non-negative vector')

        self.kind = kind
        self.weights = weights
        self.diagnostics = diagnostics or {}

    def distance(self, r: np.ndarray, other: np.ndarray) -> np.ndarray:
        """
        Distance between representations, broadcasting over leading axes.
        """
        return (np.abs(np.asarray(r) - np.asarray(other)) * self.weights).sum(axis=-1)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'weights': self.weights.tolist(),
            'diagnostics': self.diagnostics,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'DistanceMetric':
        return cls(MetricKind(payload['kind']), payload['weights'], payload.get('diagnostics'))


class KSweepRow:
    def __init__(self,
                 K: int,       # pylint: disable=invalid-name
                 node_count: int,
                 treated: EstimateReport | None,
                 control: EstimateReport | None,
                 gate: EstimateReport | None,
                 ):
        """
        Nearest-neighbor gate estimate at one K.
        :param K: Units per condition
        :param node_count: Number of units N
        :param treated: Estimate around the all-treated reference, None when it failed
        :param control: Estimate around the all-control reference, None when it failed
        :param gate: Treated minus control, None when either side failed
        """
        if K < 1:
            raise ArgumentException(f'K must be at least 1, got {K}')

        self.K = K      # pylint: disable=invalid-name
        self.node_count = node_count
        self.treated = treated
        self.control = control
        self.gate = gate

    @staticmethod
    def _value(report: EstimateReport | None, field: str) -> float:
        return getattr(report, field) if report is not None else float('nan')

    @property
    def mu1(self) -> float:
        return self._value(self.treated, 'point')

    @property
    def se1(self) -> float:
        return self._value(self.treated, 'se')

    @property
    def mu0(self) -> float:
        return self._value(self.control, 'point')

    @property
    def se0(self) -> float:
        return self._value(self.control, 'se')

    @property
    def tau(self) -> float:
        return self._value(self.gate, 'point')

    @property
    def se_tau(self) -> float:
        return self._value(self.gate, 'se')

    @property
    def positivity_ok_1(self) -> bool:
        return bool(self.treated and self.treated.positivity and self.treated.positivity.ok)

    @property
    def positivity_ok_0(self) -> bool:
        return bool(self.control and self.control.positivity and self.control.positivity.ok)

    @property
    def passes(self) -> bool:
        return self.gate is not None and self.positivity_ok_1 and self.positivity_ok_0

    def to_dict(self) -> dict:
        return {
            'K': self.K,
            'K_over_N': self.K / self.node_count,
            'mu1': self.mu1,
            'se1': self.se1,
            'pos1': self.positivity_ok_1,
            'mu0': self.mu0,
            'se0': self.se0,
            'pos0': self.positivity_ok_0,
            'tau': self.tau,
            'se_tau': self.se_tau,
        }

    def __repr__(self):
        return f'KSweepRow(K={self.K}, tau={self.tau:.4f}, passes={self.passes})'
