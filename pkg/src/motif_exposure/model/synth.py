import numpy as np
import pandas as pd
import scipy.sparse as sp

from .estimate import EstimateReport
from .graph import Graph
from .knn import KSweepRow
from .tree import ExposureTree


class PotentialOutcomeModel:
    def __init__(self,
                 graph: Graph,
                 X: np.ndarray,         # pylint: disable=invalid-name
                 W: sp.csr_matrix,      # pylint: disable=invalid-name
                 noise_sigma: float,
                 seed: int,
                 ):
        """
        Outcomes y_i(z) = (1 + X_i)(1 + z_i + sum_j w_ij z_j) + noise.
        :param graph: The graph the model lives on
        :param X: Per-node binary covariate
        :param W: Row-stochastic or all-zero interference weights
        :param noise_sigma: Standard deviation of the noise
        :param seed: Seed of the covariate and the noise stream
        """
        self.graph = graph
        self.X = X      # pylint: disable=invalid-name
        self.W = W      # pylint: disable=invalid-name
        self.noise_sigma = noise_sigma
        self.seed = seed

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    def covariate_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'X': self.X.astype(np.float64)})


class GroundTruth:
    def __init__(self, mu1: float, mu0: float):
        """
        Noise-free average potential outcomes under global treatment and control.
        """
        self.mu1 = float(mu1)
        self.mu0 = float(mu0)

    @property
    def tau(self) -> float:
        return self.mu1 - self.mu0

    def to_dict(self) -> dict:
        return {
            'mu1': self.mu1,
            'mu0': self.mu0,
            'tau': self.tau,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'GroundTruth':
        return cls(payload['mu1'], payload['mu0'])


class ReplicationBundle:
    def __init__(self,
                 seed: int,
                 truth: GroundTruth,
                 estimates: dict[str, EstimateReport],
                 *,
                 seeds: dict = None,
                 sweep: list[KSweepRow] = None,
                 fracq_sweep: list[KSweepRow] = None,
                 tree: ExposureTree = None,
                 ):
        """
        Everything one harness replication produced.
        :param seed: The replication's master seed
        :param truth: The oracle effect of the realized model
        :param estimates: Gate estimates by method
        :param seeds: Derived subsystem seeds
        :param sweep: The nearest-neighbor sweep
        :param fracq_sweep: The same sweep on the fractional q representation
        :param tree: The fitted exposure tree
        """
        self.seed = seed
        self.truth = truth
        self.estimates = estimates
        self.seeds = seeds or {}
        self.sweep = sweep or []
        self.fracq_sweep = fracq_sweep or []
        self.tree = tree

    def summary_rows(self) -> list[dict]:
        return [
            {
                'seed': self.seed,
                'method': method,
                'estimate': report.point,
                'se': report.se,
                'oracle_tau': self.truth.tau,
                'bias': report.point - self.truth.tau,
            }
            for method, report in self.estimates.items()
        ]

    def matched_sweep_rows(self) -> list[dict]:
        """
        Nearest-neighbor and fractional q gate estimates side by side at every K.
        """
        fracq = {row.K: row for row in self.fracq_sweep}
        rows = []

        for row in self.sweep:
            other = fracq.get(row.K)
            rows.append({
                'seed': self.seed,
                'K': row.K,
                'K_over_N': row.K / row.node_count,
                'tau_knn': row.tau,
                'se_knn': row.se_tau,
                'passes_knn': row.passes,
                'tau_fracq': other.tau if other is not None else float('nan'),
                'se_fracq': other.se_tau if other is not None else float('nan'),
                'passes_fracq': other is not None and other.passes,
                'oracle_tau': self.truth.tau,
            })

        return rows

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'seeds': self.seeds,
            'truth': self.truth.to_dict(),
            'estimates': {method: report.to_dict() for method, report in self.estimates.items()},
            'sweep': [row.to_dict() for row in self.sweep],
            'fracq_sweep': [row.to_dict() for row in self.fracq_sweep],
            'tree': self.tree.to_dict() if self.tree is not None else None,
        }
