import numpy as np

from motif_exposure.etc.consts import ANALYSIS_CONFIG
from motif_exposure.etc.enums import EstimatorKind, ScoreKind, ThresholdMode
from motif_exposure.etc.errors import ArgumentException, SchemaException
from .estimate import EstimateReport
from .exposure import BoxCondition
from .motif import MotifSchema


class TreeHyperparams:
    def __init__(self,
                 score: ScoreKind = ScoreKind.TSTAT,
                 gamma: float = 1.96,
                 kappa: int = 100,
                 *,
                 epsilon: float = None,
                 delta: float = None,
                 honest_fraction: float = None,
                 max_depth: int = None,
                 threshold_mode: ThresholdMode = ThresholdMode.AUTO,
                 quantiles: int = None,
                 kind: EstimatorKind = EstimatorKind.HAJEK,
                 ):
        """
        Settings of the honest exposure tree.
        :param score: Split score, t statistic or WSSE reduction
        :param gamma: Minimum score of an accepted split
        :param kappa: Minimum training units per child
        :param epsilon: Positivity threshold
        :param delta: Positivity tolerance
        :param honest_fraction: Share of units in the training set
        :param max_depth: Optional depth cap, the root has depth 0
        :param threshold_mode: Candidate thresholds, every observed value or quantiles
        :param quantiles: Number of quantile thresholds per dimension
        :param kind: Estimator kind of the leaf means
        """
        self.score = score
        self.gamma = gamma
        self.kappa = kappa
        self.epsilon = ANALYSIS_CONFIG.epsilon if epsilon is None else epsilon
        self.delta = ANALYSIS_CONFIG.delta if delta is None else delta
        self.honest_fraction = honest_fraction or ANALYSIS_CONFIG.honest_fraction
        self.max_depth = max_depth
        self.threshold_mode = threshold_mode
        self.quantiles = quantiles or ANALYSIS_CONFIG.threshold_quantiles
        self.kind = kind

        if gamma < 0:
            raise ArgumentException(f'gamma must be non-negative, got {gamma}')
        if kappa < 2:
            raise ArgumentException(f'kappa must be at least 2, got {kappa}')
        if not 0.0 < self.honest_fraction < 1.0:
            raise ArgumentException(
                f'honest_fraction must lie in (0, 1), got {self.honest_fraction}'
            )
        if max_depth is not None and max_depth < 0:
            raise ArgumentException(f'max_depth must be non-negative, got {max_depth}')

    def resolved_mode(self, node_count: int) -> ThresholdMode:
        if self.threshold_mode != ThresholdMode.AUTO:
            return self.threshold_mode
        if node_count <= ANALYSIS_CONFIG.quantile_threshold_cutoff:
            return ThresholdMode.ALL_OBSERVED

        return ThresholdMode.QUANTILES

    def to_dict(self) -> dict:
        return {
            'score': self.score.value,
            'gamma': self.gamma,
            'kappa': self.kappa,
            'epsilon': self.epsilon,
            'delta': self.delta,
            'honestFraction': self.honest_fraction,
            'maxDepth': self.max_depth,
            'thresholdMode': self.threshold_mode.value,
            'quantiles': self.quantiles,
            'kind': self.kind.value,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'TreeHyperparams':
        return cls(
            ScoreKind(payload['score']),
            payload['gamma'],
            payload['kappa'],
            epsilon=payload.get('epsilon'),
            delta=payload.get('delta'),
            honest_fraction=payload.get('honestFraction'),
            max_depth=payload.get('maxDepth'),
            threshold_mode=ThresholdMode(payload.get('thresholdMode', 'auto')),
            quantiles=payload.get('quantiles'),
            kind=EstimatorKind(payload.get('kind', 'hajek')),
        )


class TreeNode:
    def __init__(self,
                 box: BoxCondition,
                 depth: int,
                 *,
                 dim: int = None,
                 theta: float = None,
                 left: 'TreeNode' = None,
                 right: 'TreeNode' = None,
                 score: float = None,
                 n_train: int = 0,
                 n_est: int = 0,
                 estimate: EstimateReport = None,
                 ):
        """
        A node of an exposure tree. Internal nodes send r[dim] <= theta left.
        :param box: The region of the node
        :param depth: Depth, 0 at the root
        :param dim: Split dimension of an internal node
        :param theta: Split threshold of an internal node
        :param left: Child holding r[dim] <= theta
        :param right: Child holding r[dim] > theta
        :param score: Score of the accepted split
        :param n_train: Training units observed in the node
        :param n_est: Estimation units observed in the node
        :param estimate: Leaf estimate on the estimation set
        """
        self.box = box
        self.depth = depth
        self.dim = dim
        self.theta = theta
        self.left = left
        self.right = right
        self.score = score
        self.n_train = n_train
        self.n_est = n_est
        self.estimate = estimate

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def label(self) -> str:
        return self.box.label

    def to_dict(self) -> dict:
        if self.is_leaf:
            estimate = self.estimate

            return {
                'leaf_label': self.label,
                'mu': estimate.point if estimate else None,
                'se': estimate.se if estimate else None,
                'n_train': self.n_train,
                'n_est': self.n_est,
                'estimate': estimate.to_dict() if estimate else None,
            }

        return {
            'dim': self.dim,
            'theta': self.theta,
            'score': self.score,
            'n_train': self.n_train,
            'n_est': self.n_est,
            'left': self.left.to_dict(),
            'right': self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict, box: BoxCondition, depth: int = 0) -> 'TreeNode':
        if 'leaf_label' in payload:
            estimate = payload.get('estimate')

            return cls(
                box,
                depth,
                n_train=payload.get('n_train', 0),
                n_est=payload.get('n_est', 0),
                estimate=EstimateReport.from_dict(estimate) if estimate else None,
            )

        left_box, right_box = box.split(payload['dim'], payload['theta'])

        return cls(
            box,
            depth,
            dim=payload['dim'],
            theta=payload['theta'],
            score=payload.get('score'),
            n_train=payload.get('n_train', 0),
            n_est=payload.get('n_est', 0),
            left=cls.from_dict(payload['left'], left_box, depth + 1),
            right=cls.from_dict(payload['right'], right_box, depth + 1),
        )


class ExposureTree:
    """
    A binary partition of the representation space into exposure conditions,
    grown on a training split and estimated on the complementary split.
    """
    def __init__(self,
                 root: TreeNode,
                 schema: MotifSchema,
                 params: TreeHyperparams,
                 split_seed: int,
                 ):
        self.root = root
        self.schema = schema
        self.params = params
        self.split_seed = split_seed

    def leaves(self) -> list[TreeNode]:
        """
        Leaves from left to right.
        """
        leaves = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                leaves.append(node)
            else:
                stack.append(node.right)
                stack.append(node.left)

        return leaves

    def internal_nodes(self) -> list[TreeNode]:
        nodes = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                nodes.append(node)
                stack.append(node.right)
                stack.append(node.left)

        return nodes

    def leaf(self, label: str) -> TreeNode:
        for node in self.leaves():
            if node.label == label:
                return node

        raise ArgumentException(f'Tree has no leaf labelled {label}')

    def assign_leaf(self, r: np.ndarray) -> str:
        """
        Label of the leaf holding a representation vector.
        """
        r = np.asarray(r, dtype=np.float64)
        if r.shape != (self.schema.M,):
            raise SchemaException(f'Expected a vector of length {self.schema.M}, got {r.shape}')

        node = self.root
        while not node.is_leaf:
            node = node.left if r[node.dim] <= node.theta else node.right

        return node.label

    def leaf_index(self, R: np.ndarray) -> np.ndarray:     # pylint: disable=invalid-name
        """
        Index into leaves() of the leaf holding every row of R.
        """
        index = np.zeros(R.shape[0], dtype=np.int64)
        positions = {id(node): k for k, node in enumerate(self.leaves())}

        def descend(node: TreeNode, rows: np.ndarray):
            if node.is_leaf:
                index[rows] = positions[id(node)]
                return
            go_left = R[rows, node.dim] <= node.theta
            descend(node.left, rows[go_left])
            descend(node.right, rows[~go_left])

        descend(self.root, np.arange(R.shape[0]))

        return index

    def to_dict(self) -> dict:
        return {
            'schema': self.schema.to_dict(),
            'params': self.params.to_dict(),
            'splitSeed': self.split_seed,
            'root': self.root.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> 'ExposureTree':
        schema = MotifSchema.from_dict(payload['schema'])
        root = TreeNode.from_dict(payload['root'], BoxCondition.everything(schema.M, 'R'))

        return cls(
            root,
            schema,
            TreeHyperparams.from_dict(payload['params']),
            payload['splitSeed'],
        )
