import numpy as np
import statsmodels.api as sm

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import MetricKind
from motif_exposure.etc.errors import ArgumentException, FitException
from motif_exposure.model.knn import DistanceMetric
from motif_exposure.model.motif import RepresentationMatrix


def fit_metric(reps: RepresentationMatrix,
               y: np.ndarray,
               kind: MetricKind = MetricKind.IDENTICAL,
               ) -> DistanceMetric:
    """
    Fit the distance metric of the nearest-neighbor conditions.

    Identical weights are all ones. Regression weights are the absolute
    coefficients of an ordinary least squares fit of the outcome on the
    representation with an intercept, the intercept excluded.
    :param reps: Observed representations
    :param y: Outcome vector
    :param kind: Metric kind
    :return: The metric
    """
    M = reps.schema.M       # pylint: disable=invalid-name
    if kind == MetricKind.IDENTICAL:
        return DistanceMetric(kind, np.ones(M))

    y = np.asarray(y, dtype=np.float64)
    N = reps.node_count     # pylint: disable=invalid-name
    if len(y) != N:
        raise ArgumentException(f'Got {len(y)} outcomes for {N} units')
    if N <= M + 1:
        raise ArgumentException(f'Regression weights need more than {M + 1} units, got {N}')

    design = sm.add_constant(reps.R, has_constant='add')
    rank = np.linalg.matrix_rank(design)
    if rank < design.shape[1]:
        constant = [code for code, column in zip(reps.schema.codes, reps.R.T)
                    if np.ptp(column) == 0]
        hint = f'; constant dimensions: {", ".join(constant)}' if constant else ''
        raise FitException(
            f'Representation design has rank {rank} < {design.shape[1]}, '
            f'remove collinear dimensions from the schema{hint}'
        )

    result = sm.OLS(y, design).fit()
    coefficients = np.asarray(result.params)[1:]

    LOGGER.debug('Regression metric fit with R-squared %.4f', result.rsquared)

    return DistanceMetric(
        kind,
        np.abs(coefficients),
        {
            'rsquared': float(result.rsquared),
            'intercept': float(np.asarray(result.params)[0]),
            'coefficients': dict(zip(reps.schema.codes, coefficients.tolist())),
        },
    )
