from enum import Enum


class DesignKind(Enum):
    """
    Randomization design families.
    """
    BERNOULLI = 'bernoulli'
    CLUSTER = 'cluster'


class Shape(Enum):
    """
    Network motif shapes around an ego. The value is the code prefix.
    """
    DYAD = '2'
    OPEN_TRIAD = '3o'
    CLOSED_TRIAD = '3c'
    OPEN_STAR = '4o'

    @property
    def arity(self) -> int:
        """
        Number of non-ego members in one instance of the shape.
        """
        return {
            Shape.DYAD: 1,
            Shape.OPEN_TRIAD: 2,
            Shape.CLOSED_TRIAD: 2,
            Shape.OPEN_STAR: 3,
        }[self]


class DimensionKind(Enum):
    EGO = 'ego'
    MOTIF = 'motif'
    ATTRIBUTE = 'attribute'


class EstimatorKind(Enum):
    HT = 'ht'
    HAJEK = 'hajek'


class ResampleUnit(Enum):
    UNIT = 'unit'
    CLUSTER = 'cluster'


class ScoreKind(Enum):
    """
    Split scores for the exposure tree.
    """
    TSTAT = 't'
    WSSE = 'wsse'


class ThresholdMode(Enum):
    AUTO = 'auto'
    ALL_OBSERVED = 'all'
    QUANTILES = 'quantiles'


class MetricKind(Enum):
    IDENTICAL = 'identical'
    REGRESSION_COEFFICIENTS = 'regcoef'


class Assumption(Enum):
    """
    Direction of monotonic interference assumed when selecting K.
    """
    NON_NEGATIVE = 'nonnegative'
    NON_POSITIVE = 'nonpositive'


class ConditionKind(Enum):
    BOX = 'box'
    UNIT_SET = 'unit_set'
    PREDICATE = 'predicate'


class AnalysisMode(Enum):
    TREE = 'tree'
    KNN = 'knn'
    FRACQ = 'fracq'
