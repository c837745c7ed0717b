import numpy as np

from motif_exposure.etc.consts import LOGGER
from motif_exposure.etc.enums import EstimatorKind, ResampleUnit, ScoreKind, ThresholdMode
from motif_exposure.etc.errors import ArgumentException, FitException, SchemaException
from motif_exposure.etc.utils import parallel_map
from motif_exposure.estimation.gate import estimate_condition
from motif_exposure.exposure.probability import check_positivity
from motif_exposure.exposure.replicates import ReplicateCache
from motif_exposure.model.assignment import ClusterPartition
from motif_exposure.model.exposure import BoxCondition
from motif_exposure.model.motif import RepresentationMatrix
from motif_exposure.model.tree import ExposureTree, TreeHyperparams, TreeNode


# Cells per chunk of the (unit x threshold) and (replicate x unit) scan arrays.
_CHUNK_CELLS = 1 << 22


def honest_split(node_count: int, honest_fraction: float, split_seed: int) -> np.ndarray:
    """
    Training mask of the honest split, uniform on the split seed.
    """
    return np.random.default_rng(split_seed).random(node_count) < honest_fraction


def candidate_thresholds(values: np.ndarray, mode: ThresholdMode, quantiles: int) -> np.ndarray:
    """
    Sorted split thresholds for one dimension, each leaving at least one value on the right.
    """
    if len(values) == 0:
        return np.empty(0)

    if mode == ThresholdMode.QUANTILES:
        levels = np.linspace(0.0, 1.0, quantiles + 2)[1:-1]
        thresholds = np.unique(np.quantile(values, levels))
    else:
        thresholds = np.unique(values)

    return thresholds[thresholds < values.max()]


class _SideSums:
    """
    Per-threshold weighted sums of one child over the training units.
    """
    def __init__(self, size: int):
        self.weight = np.zeros(size)
        self.wy = np.zeros(size)
        self.wy2 = np.zeros(size)
        self.a0 = np.zeros(size)
        self.a1 = np.zeros(size)
        self.a2 = np.zeros(size)

    def add(self, member: np.ndarray, probs: np.ndarray, y: np.ndarray):
        member = member & (probs > 0)
        safe = np.where(member, probs, 1.0)
        w = np.where(member, 1.0 / safe, 0.0)
        a = np.where(member, (1.0 - safe) * w * w, 0.0)
        yy = y[:, None]

        self.weight += w.sum(axis=0)
        self.wy += (w * yy).sum(axis=0)
        self.wy2 += (w * yy * yy).sum(axis=0)
        self.a0 += a.sum(axis=0)
        self.a1 += (a * yy).sum(axis=0)
        self.a2 += (a * yy * yy).sum(axis=0)

    def mean(self, kind: EstimatorKind, population: int) -> np.ndarray:
        if kind == EstimatorKind.HT:
            return self.wy / population
        weight = np.where(self.weight > 0, self.weight, 1.0)

        return np.where(self.weight > 0, self.wy / weight, 0.0)

    def variance(self, kind: EstimatorKind, population: int) -> np.ndarray:
        """
        Linearized variance of the child mean.
        """
        if kind == EstimatorKind.HT:
            return self.a2 / float(population) ** 2

        mu = self.mean(kind, population)
        spread = np.maximum(self.a2 - 2.0 * mu * self.a1 + mu * mu * self.a0, 0.0)
        weight = np.where(self.weight > 0, self.weight, 1.0)

        return spread / (weight * weight)

    def wsse(self, kind: EstimatorKind, population: int) -> np.ndarray:
        mu = self.mean(kind, population)

        return np.maximum(self.wy2 - 2.0 * mu * self.wy + mu * mu * self.weight, 0.0)


class SplitSearch:
    """
    Scans candidate splits of tree nodes against a replicate cache.

    Child positivity is checked over all units: a unit's child probability is
    the share of replicates whose representation falls in the child. Scores use
    training units only.
    """
    def __init__(self,
                 reps: RepresentationMatrix,
                 y: np.ndarray,
                 cache: ReplicateCache,
                 params: TreeHyperparams,
                 train: np.ndarray,
                 threads: int = None,
                 ):
        self.R = reps.R     # pylint: disable=invalid-name
        self.y = y
        self.cache = cache
        self.params = params
        self.train = train
        self.threads = threads
        self.node_count = reps.node_count
        self.denominator = cache.replicates + 1.0
        self.train_count = int(train.sum())
        self.mode = params.resolved_mode(self.node_count)

    def replicate_membership(self, box: BoxCondition) -> np.ndarray:
        """
        B x N membership of a box, evaluated in replicate chunks.
        """
        rep = self.cache.representations
        step = max(1, _CHUNK_CELLS // max(1, rep.shape[1] * rep.shape[2]))

        return np.concatenate([
            box.members(rep[start:start + step])
            for start in range(0, rep.shape[0], step)
        ])

    def _parent_wsse(self, train_in: np.ndarray, probs: np.ndarray, y: np.ndarray) -> float:
        sums = _SideSums(1)
        sums.add(train_in[:, None], probs[:, None], y)

        return float(sums.wsse(self.params.kind, self.train_count)[0])

    def scan_dimension(self,
                       m: int,
                       node_rep: np.ndarray,
                       train_in: np.ndarray,
                       y: np.ndarray,
                       parent_wsse: float,
                       ) -> tuple[float, float] | None:
        """
        Best valid split of a node on dimension m.
        :return: (score, theta) or None when no candidate is valid
        """
        params = self.params
        values = np.sort(self.R[train_in, m])
        thresholds = candidate_thresholds(values, self.mode, params.quantiles)

        n_left = np.searchsorted(values, thresholds, side='right')
        n_right = len(values) - n_left
        keep = (n_left >= params.kappa) & (n_right >= params.kappa)
        thresholds, n_left, n_right = thresholds[keep], n_left[keep], n_right[keep]
        size = len(thresholds)
        if size == 0:
            return None

        node_counts = node_rep.sum(axis=0)
        active = np.flatnonzero(node_counts > 0)
        violations_left = np.full(size, self.node_count - len(active), dtype=np.int64)
        violations_right = violations_left.copy()
        left_sums = _SideSums(size)
        right_sums = _SideSums(size)
        epsilon = params.epsilon

        rep = self.cache.representations
        step = max(1, _CHUNK_CELLS // max(size + 1, rep.shape[0]))
        for start in range(0, len(active), step):
            units = active[start:start + step]
            width = len(units)

            bins = np.searchsorted(thresholds, rep[:, units, m], side='left')
            flat = (np.arange(width)[None, :] * (size + 1) + bins)[node_rep[:, units]]
            hist = np.bincount(flat, minlength=width * (size + 1)).reshape(width, size + 1)

            left = np.cumsum(hist, axis=1)[:, :size]
            right = node_counts[units][:, None] - left
            probs_left = left / self.denominator
            probs_right = right / self.denominator
            violations_left += (probs_left <= epsilon).sum(axis=0)
            violations_right += (probs_right <= epsilon).sum(axis=0)

            observed = train_in[units]
            if observed.any():
                first = np.searchsorted(thresholds, self.R[units[observed], m], side='left')
                goes_left = np.arange(size)[None, :] >= first[:, None]
                outcome = y[units[observed]]
                left_sums.add(goes_left, probs_left[observed], outcome)
                right_sums.add(~goes_left, probs_right[observed], outcome)

        valid = (violations_left <= params.delta * self.node_count) \
            & (violations_right <= params.delta * self.node_count) \
            & (left_sums.weight > 0) & (right_sums.weight > 0)

        kind = params.kind
        if params.score == ScoreKind.WSSE:
            pooled = (n_left * left_sums.wsse(kind, self.train_count)
                      + n_right * right_sums.wsse(kind, self.train_count)) / (n_left + n_right)
            scores = parent_wsse - pooled
        else:
            gap = np.abs(left_sums.mean(kind, self.train_count)
                         - right_sums.mean(kind, self.train_count))
            se = np.sqrt(left_sums.variance(kind, self.train_count)
                         + right_sums.variance(kind, self.train_count))
            with np.errstate(divide='ignore', invalid='ignore'):
                scores = np.where(se > 0, gap / np.where(se > 0, se, 1.0),
                                  np.where(gap > 0, np.inf, 0.0))

        valid &= scores >= params.gamma
        if not valid.any():
            return None

        best = int(np.argmax(np.where(valid, scores, -np.inf)))

        return float(scores[best]), float(thresholds[best])

    def best_split(self, box: BoxCondition) -> tuple[int, float, float] | None:
        """
        Best valid split of a node over all dimensions, ties to the lowest
        dimension and then the lowest threshold.
        :return: (dim, theta, score) or None
        """
        node_rep = self.replicate_membership(box)
        train_in = box.members(self.R) & self.train

        y = self.y
        if self.params.kind == EstimatorKind.HAJEK and train_in.any():
            y = y - y[train_in].mean()
        parent_probs = node_rep.sum(axis=0) / self.denominator
        parent_wsse = self._parent_wsse(train_in, parent_probs, y) \
            if self.params.score == ScoreKind.WSSE else 0.0

        found = parallel_map(
            lambda m: self.scan_dimension(m, node_rep, train_in, y, parent_wsse),
            range(self.R.shape[1]),
            self.threads,
        )

        best = None
        for m, candidate in enumerate(found):
            if candidate is not None and (best is None or candidate[0] > best[2]):
                best = (m, candidate[1], candidate[0])

        return best


def fit_tree(reps: RepresentationMatrix,
             y: np.ndarray,
             cache: ReplicateCache,
             params: TreeHyperparams,
             split_seed: int,
             *,
             B: int = None,        # pylint: disable=invalid-name
             bootstrap_seed: int = 0,
             resample_unit: ResampleUnit = ResampleUnit.UNIT,
             partition: ClusterPartition = None,
             threads: int = None,
             ) -> ExposureTree:
    """
    Grow an honest exposure tree and estimate its leaves.

    The tree is grown on the training units only; leaf means and bootstrap SEs
    use the estimation units only. A split is accepted when both children
    have at least kappa training units, pass the positivity check and the
    split scores at least gamma.
    :param reps: Observed representations
    :param y: Outcome vector
    :param cache: Replicate cache built under the analysis design on the same schema
    :param params: Tree settings
    :param split_seed: Seed of the honest split
    :param B: Bootstrap resamples for leaf SEs
    :param bootstrap_seed: Bootstrap seed shared by all leaves
    :param resample_unit: Resample units or clusters
    :param partition: Cluster partition for cluster resampling
    :param threads: Upper bound on worker threads
    :return: The fitted tree
    """
    y = np.asarray(y, dtype=np.float64)
    if len(y) != reps.node_count:
        raise ArgumentException(f'Got {len(y)} outcomes for {reps.node_count} units')
    if reps.schema != cache.schema or cache.node_count != reps.node_count:
        raise SchemaException('Representations and replicate cache do not match')

    train = honest_split(reps.node_count, params.honest_fraction, split_seed)
    search = SplitSearch(reps, y, cache, params, train, threads)
    estimation = ~train

    def grow(box: BoxCondition, depth: int) -> TreeNode:
        observed = box.members(reps.R)
        node = TreeNode(box, depth,
                        n_train=int((observed & train).sum()),
                        n_est=int((observed & estimation).sum()))

        if params.max_depth is not None and depth >= params.max_depth:
            return node
        if node.n_train < 2 * params.kappa:
            return node

        split = search.best_split(box)
        if split is None:
            return node

        node.dim, node.theta, node.score = split
        LOGGER.debug(
            'Split %s on %s at %.4f (score %.4f)',
            box.label,
            reps.schema.codes[node.dim],
            node.theta,
            node.score,
        )
        left_box, right_box = box.split(node.dim, node.theta)
        node.left = grow(left_box, depth + 1)
        node.right = grow(right_box, depth + 1)

        return node

    LOGGER.info(
        'Growing exposure tree on %d training units (%s score, gamma=%.3f, kappa=%d)',
        int(train.sum()),
        params.score.value,
        params.gamma,
        params.kappa,
    )
    tree = ExposureTree(grow(BoxCondition.everything(reps.schema.M, 'R'), 0),
                        reps.schema, params, split_seed)

    for leaf in tree.leaves():
        member = leaf.box.members(reps.R) & estimation
        if not member.any():
            raise FitException(
                f'Leaf {leaf.label} has no estimation units, '
                f'use a larger kappa or a different honest_fraction'
            )
        probs = cache.probabilities(leaf.box, threads)
        leaf.estimate = estimate_condition(
            y[estimation],
            member[estimation],
            probs[estimation],
            kind=params.kind,
            label=leaf.label,
            B=B,
            seed=bootstrap_seed,
            resample_unit=resample_unit,
            partition=partition.restricted_to(np.flatnonzero(estimation)) if partition else None,
            epsilon=params.epsilon,
            delta=params.delta,
            threads=threads,
        )
        leaf.estimate.positivity = check_positivity(probs, params.epsilon, params.delta)
        leaf.estimate.seeds['split'] = split_seed

    LOGGER.info('Exposure tree has %d leaves', len(tree.leaves()))

    return tree


def tree_positivity(tree: ExposureTree, cache: ReplicateCache, threads: int = None) -> dict:
    """
    Positivity verdict of every leaf against a replicate cache.
    """
    return {
        leaf.label: check_positivity(cache.probabilities(leaf.box, threads),
                                     tree.params.epsilon, tree.params.delta)
        for leaf in tree.leaves()
    }
